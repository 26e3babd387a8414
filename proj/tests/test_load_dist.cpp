#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "iab/analytics.hpp"
#include "iab/load_dist.hpp"
#include "iab/simulator.hpp"

using namespace iab;
using namespace iab::load;

namespace {

// E[g(A_m(X))] by plain midpoint sums over X; shares no nodes with the
// library's piecewise rule.
template <class G>
double midpoint_expectation(const SystemParams& p, G&& g, int cells = 20000) {
    const double L = p.R - p.R_s;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double x = (i + 0.5) * L / cells;
        sum += g(analytics::association_prob_abs(x, p)) * 2.0 * x / (L * L) * (L / cells);
    }
    return sum;
}

}  // namespace

TEST_CASE("binomial pmf") {
    CHECK(binomial_pmf(0, 0, 0.3) == 1.0);
    CHECK(binomial_pmf(2, 4, 0.5) == doctest::Approx(6.0 / 16.0));
    CHECK(binomial_pmf(-1, 4, 0.5) == 0.0);
    CHECK(binomial_pmf(5, 4, 0.5) == 0.0);
    CHECK(binomial_pmf(0, 4, 0.0) == 1.0);
    CHECK(binomial_pmf(4, 4, 1.0) == 1.0);
    CHECK(binomial_pmf(3, 4, 1.0) == 0.0);
}

TEST_CASE("in-hotspot load pmf") {
    SystemParams p = default_params();
    p.m_bar = 1;
    CHECK(in_hotspot_load_pmf(1, 20.0, Side::ABS, p) == 1.0);
    CHECK(in_hotspot_load_pmf(1, 20.0, Side::SBS, p) == 1.0);
    CHECK(in_hotspot_load_pmf(2, 20.0, Side::SBS, p) == 0.0);

    p.m_bar = 7;
    CHECK(in_hotspot_load_pmf(0, 20.0, Side::ABS, p) == 0.0);
    CHECK(in_hotspot_load_pmf(8, 20.0, Side::ABS, p) == 0.0);
    Rng rng = make_stream(8, 0);
    for (int i = 0; i < 10; ++i) {
        const double x = sample_hotspot_center(rng, p).radius;
        for (Side side : {Side::ABS, Side::SBS}) {
            double total = 0.0;
            for (int k = 1; k <= p.m_bar; ++k) total += in_hotspot_load_pmf(k, x, side, p);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("in-hotspot load at x = 30 against simulated association counts") {
    SystemParams p = default_params();
    const int trials = 100000;
    Rng rng = make_stream(4, 0);
    std::vector<double> hist(static_cast<std::size_t>(p.m_bar) + 1, 0.0);
    for (int t = 0; t < trials; ++t) {
        int sbs = 1;   // the typical user, conditioned onto the SBS
        for (int j = 1; j < p.m_bar; ++j)
            if (associate({{30.0, 1.0}, sample_user_offset(rng, p)}, p) == Tier::SBS) ++sbs;
        hist[static_cast<std::size_t>(sbs)] += 1.0 / trials;
    }
    double tv = 0.0;
    for (int k = 1; k <= p.m_bar; ++k) tv += std::abs(hist[k] - in_hotspot_load_pmf(k, 30.0, Side::SBS, p));
    CHECK(0.5 * tv < 0.01);
}

TEST_CASE("CLT moments") {
    SystemParams p = default_params();
    for (int m : {1, 5, 10}) {
        p.m_bar = m;
        const CltMoments mom = clt_moments(p);
        CHECK(mom.mean_abs + mom.mean_sbs == doctest::Approx(double(p.n - 1) * m).epsilon(1e-14));
        CHECK(mom.var_abs == mom.var_sbs);
        CHECK(mom.var_abs > 0.0);

        const double e_am = midpoint_expectation(p, [](double a) { return a; });
        const double e_amas = midpoint_expectation(p, [](double a) { return a * (1.0 - a); });
        const double e_am2 = midpoint_expectation(p, [](double a) { return a * a; });
        CHECK(mom.mean_abs == doctest::Approx((p.n - 1) * m * e_am).epsilon(1e-6));
        const double var = (p.n - 1) * (m * e_amas + double(m) * m * (e_am2 - e_am * e_am));
        CHECK(mom.var_abs == doctest::Approx(var).epsilon(1e-5));
    }
    // n = 2: a single other hotspot, Binomial(m, A) mixed over X.
    p.n = 2;
    p.m_bar = 4;
    const CltMoments two = clt_moments(p);
    const double e_am = midpoint_expectation(p, [](double a) { return a; });
    CHECK(two.mean_abs == doctest::Approx(4.0 * e_am).epsilon(1e-6));
}

TEST_CASE("CLT moments against simulated other-hotspot load") {
    SystemParams p = default_params();
    const CltMoments mom = clt_moments(p);
    const int trials = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = make_stream(55, static_cast<std::uint64_t>(t));
        const sim::NetworkRealization real = sim::realize(rng, p);
        // Hotspot 0 is the representative one; the rest are "other".
        const double other = real.total_abs_load - real.abs_load[0];
        sum += other;
        sq += other * other;
    }
    const double mean = sum / trials;
    const double var = sq / trials - mean * mean;
    CHECK(std::abs(mean - mom.mean_abs) <= 3.0 * std::sqrt(mom.var_abs / trials));
    // The sample variance has SE of about var * sqrt(2 / trials) for a
    // near-normal sum; 4 SE leaves room for the small excess kurtosis.
    CHECK(std::abs(var - mom.var_abs) <= 4.0 * mom.var_abs * std::sqrt(2.0 / trials));
}

TEST_CASE("exact convolution") {
    SystemParams p = default_params();
    p.n = 2;
    p.m_bar = 1;
    const LoadDistribution two = other_load_pmf_exact(Side::ABS, p);
    REQUIRE(two.support.size() == 2);
    const CltMoments mom = clt_moments(p);
    CHECK(two.masses[0] == doctest::Approx(mom.mean_sbs).epsilon(1e-12));
    CHECK(two.masses[1] == doctest::Approx(mom.mean_abs).epsilon(1e-12));

    p.n = 1;
    const LoadDistribution none = other_load_pmf_exact(Side::ABS, p);
    CHECK(none.support == std::vector<int>{0});
    CHECK(none.masses == std::vector<double>{1.0});

    p = default_params();
    for (int m : {3, 10}) {
        p.m_bar = m;
        const CltMoments clt = clt_moments(p);
        for (Side side : {Side::ABS, Side::SBS}) {
            const LoadDistribution d = other_load_pmf_exact(side, p);
            CHECK(d.kind == Kind::ExactConvolution);
            CHECK(d.support.front() == 0);
            CHECK(d.support.back() == (p.n - 1) * m);
            double total = 0.0;
            for (double w : d.masses) {
                CHECK(w >= 0.0);
                total += w;
            }
            CHECK(std::abs(total - 1.0) <= 1e-12);
            const double mean = side == Side::ABS ? clt.mean_abs : clt.mean_sbs;
            CHECK(std::abs(d.mean - mean) <= 1e-9);
            CHECK(std::abs(d.variance - clt.var_abs) <= 1e-9);
        }
        CHECK(std::abs(clt.var_abs - other_load_pmf_exact(Side::SBS, p).variance) <= 1e-9);
    }

    p.n = 2002;
    p.m_bar = 10;
    CHECK_THROWS_AS(other_load_pmf_exact(Side::ABS, p), SupportTooLarge);
}

TEST_CASE("gaussian density") {
    const double mean = 27.7;
    const double var = 19.5;
    const double sd = std::sqrt(var);
    CHECK(gaussian_density(mean, mean, var) == doctest::Approx(1.0 / (sd * std::sqrt(2.0 * std::numbers::pi))));
    for (double a : {0.3, 2.0, 9.0})
        CHECK(gaussian_density(mean + a, mean, var) ==
              doctest::Approx(gaussian_density(mean - a, mean, var)).epsilon(1e-13));
    double total = 0.0;
    for (const quad::Node& n : quad::gauss_legendre(mean - 8.0 * sd, mean + 8.0 * sd, 200))
        total += n.w * gaussian_density(n.x, mean, var);
    CHECK(std::abs(total - 1.0) <= 1e-10);
    CHECK_THROWS_AS(gaussian_density(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("discretized gaussian and total variation") {
    const LoadDistribution g = discretized_gaussian(20.0, 9.0, 60);
    CHECK(g.kind == Kind::GaussianApprox);
    CHECK(std::accumulate(g.masses.begin(), g.masses.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    // Truncated tails are treated as disjoint, so only the missing mass remains.
    const double missing = 1.0 - std::accumulate(g.masses.begin(), g.masses.end(), 0.0);
    CHECK(total_variation(g, g) == doctest::Approx(std::max(0.0, missing)).epsilon(1e-15));

    LoadDistribution point;
    point.support = {0};
    point.masses = {1.0};
    LoadDistribution other;
    other.support = {5};
    other.masses = {1.0};
    CHECK(total_variation(point, other) == 1.0);
    CHECK(total_variation(point, point) == 0.0);
    // Unassigned mass counts against the truncated PMF.
    LoadDistribution truncated;
    truncated.support = {0};
    truncated.masses = {0.6};
    CHECK(total_variation(point, truncated) == doctest::Approx(0.4));
}

TEST_CASE("Gaussian approximation is tight at n = 10 and tightens with n") {
    SystemParams p = default_params();
    p.m_bar = 10;
    auto tv_at = [&](int n, Side side) {
        p.n = n;
        const CltMoments mom = clt_moments(p);
        const LoadDistribution exact = other_load_pmf_exact(side, p);
        const double mean = side == Side::ABS ? mom.mean_abs : mom.mean_sbs;
        return total_variation(exact, discretized_gaussian(mean, mom.var_abs, exact.support.back()));
    };
    CHECK(tv_at(10, Side::ABS) < 0.05);
    CHECK(tv_at(10, Side::SBS) < 0.05);
    for (Side side : {Side::ABS, Side::SBS}) {
        double prev = 1.0;
        for (int n : {3, 5, 10, 20}) {
            const double tv = tv_at(n, side);
            CHECK(tv < prev);
            prev = tv;
        }
    }
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "iab/analytics.hpp"
#include "iab/geometry.hpp"

using namespace iab;

namespace {

constexpr int kSamples = 1000000;

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

template <class Draw>
Moments sample_moments(int count, Draw&& draw) {
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < count; ++i) {
        const double v = draw();
        sum += v;
        sq += v * v;
    }
    const double mean = sum / count;
    return {mean, sq / count - mean * mean};
}

}  // namespace

TEST_CASE("hotspot centers stay inside the macrocell") {
    const SystemParams p = default_params();
    Rng rng = make_stream(11, 0);
    double min_margin = p.R;
    for (int i = 0; i < 20000; ++i) {
        for (const PolarPoint& c : sample_hotspot_centers(rng, p)) {
            CHECK(c.radius <= 35.0);
            CHECK(c.angle > 0.0);
            CHECK(c.angle <= 2.0 * std::numbers::pi);
            min_margin = std::min(min_margin, p.R - c.radius);
        }
    }
    CHECK(min_margin >= p.R_s);
}

TEST_CASE("hotspot centers are deterministic for a seed") {
    const SystemParams p = default_params();
    Rng a = make_stream(42, 3);
    Rng b = make_stream(42, 3);
    const auto ca = sample_hotspot_centers(a, p);
    const auto cb = sample_hotspot_centers(b, p);
    REQUIRE(ca.size() == static_cast<std::size_t>(p.n));
    for (std::size_t i = 0; i < ca.size(); ++i) {
        CHECK(ca[i].radius == cb[i].radius);
        CHECK(ca[i].angle == cb[i].angle);
    }
}

TEST_CASE("hotspot radius has mean 2/3 of the allowed radius") {
    const SystemParams p = default_params();
    Rng rng = make_stream(5, 0);
    const Moments m = sample_moments(kSamples, [&] { return sample_hotspot_center(rng, p).radius; });
    const double L = p.R - p.R_s;
    const double sd = L / std::sqrt(18.0);   // Var = L^2 / 18 for density 2x/L^2
    CHECK(std::abs(m.mean - 2.0 * L / 3.0) <= 3.0 * sd / std::sqrt(double(kSamples)));
}

TEST_CASE("user offsets are uniform on the hotspot disk") {
    const SystemParams p = default_params();
    Rng rng = make_stream(6, 0);
    int inner = 0;
    double sum = 0.0;
    double largest = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const PolarPoint o = sample_user_offset(rng, p);
        largest = std::max(largest, o.radius);
        if (o.radius <= p.R_s / 2.0) ++inner;
        sum += o.radius;
    }
    CHECK(largest <= 5.0);
    const double frac = double(inner) / kSamples;
    CHECK(std::abs(frac - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / kSamples));
    const double sd = p.R_s / std::sqrt(18.0);
    CHECK(std::abs(sum / kSamples - 2.0 * p.R_s / 3.0) <= 3.0 * sd / std::sqrt(double(kSamples)));
}

TEST_CASE("path loss") {
    const SystemParams p = default_params();
    CHECK(path_loss(1.0, 2.0, p) == doctest::Approx(1e7));
    CHECK(path_loss(1.0, 3.3, p) == doctest::Approx(1e7));
    CHECK(path_loss(10.0, 2.0, p) == doctest::Approx(1e9));
    const double db = 70.0 + 33.0 * std::log10(20.0);
    CHECK(linear_to_db(path_loss(20.0, 3.3, p)) == doctest::Approx(db).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss(0.0, 2.0, p), std::domain_error);
    CHECK_THROWS_AS(path_loss(-1.0, 2.0, p), std::domain_error);
}

TEST_CASE("path loss is a power law") {
    const SystemParams p = default_params();
    for (double a : {2.0, 3.3})
        for (double d1 : {0.5, 3.0, 17.0})
            for (double d2 : {1.5, 4.0, 9.0})
                CHECK(path_loss(d1 * d2, a, p) * p.beta ==
                      doctest::Approx(path_loss(d1, a, p) * path_loss(d2, a, p)).epsilon(1e-12));
}

TEST_CASE("LOS probability") {
    const SystemParams p = default_params();
    CHECK(los_probability(0.0, p) == 1.0);
    CHECK(los_probability(30.0, p) == doctest::Approx(std::exp(-1.0)));
    CHECK(los_probability(60.0, p) == doctest::Approx(std::exp(-2.0)));
    double prev = 1.0;
    for (double r = 0.0; r <= 100.0; r += 0.5) {
        const double v = los_probability(r, p);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("Nakagami fading has unit mean and variance 1/m") {
    Rng rng = make_stream(9, 0);
    for (int m : {1, 2, 3}) {
        double smallest = 1.0;
        const Moments s = sample_moments(kSamples, [&] {
            const double h = sample_fading(rng, m);
            smallest = std::min(smallest, h);
            return h;
        });
        CHECK(smallest > 0.0);
        CHECK(std::abs(s.mean - 1.0) <= 4.0 / std::sqrt(double(kSamples)));
        CHECK(s.var == doctest::Approx(1.0 / m).epsilon(0.01));
    }
}

TEST_CASE("SNR regression constant") {
    const SystemParams p = default_params();
    // 30 dBm + 36 dB - (70 + 20 log10 20) dB - (-174 + 10 log10 3e8 + 10) dBm
    const double db = 30.0 + 36.0 - (70.0 + 20.0 * std::log10(20.0)) - (-174.0 + 10.0 * std::log10(300e6) + 10.0);
    const double value = snr(p.P_m, p.G * p.G, 20.0, true, 1.0, p);
    CHECK(linear_to_db(value) == doctest::Approx(db).epsilon(1e-12));
    CHECK(value == doctest::Approx(83333.333333333).epsilon(1e-9));
    CHECK(snr(p.P_m, p.G * p.G, 20.0, true, 0.0, p) == 0.0);
}

TEST_CASE("doubling W costs 3.01 dB of SNR") {
    SystemParams p = default_params();
    const double a = snr(p.P_s, p.G, 3.0, false, 0.7, p);
    p.W *= 2.0;
    const double b = snr(p.P_s, p.G, 3.0, false, 0.7, p);
    CHECK(linear_to_db(a) - linear_to_db(b) == doctest::Approx(10.0 * std::log10(2.0)));
}

TEST_CASE("SNR is monotone in distance and fading") {
    const SystemParams p = default_params();
    for (bool los : {true, false}) {
        double prev = snr(p.P_m, p.G, 0.01, los, 1.0, p);
        for (double d = 0.02; d < 60.0; d *= 1.3) {
            const double v = snr(p.P_m, p.G, d, los, 1.0, p);
            CHECK(v < prev);
            prev = v;
        }
        prev = 0.0;
        for (double h = 0.1; h < 5.0; h += 0.1) {
            const double v = snr(p.P_m, p.G, 10.0, los, h, p);
            CHECK(v > prev);
            prev = v;
        }
    }
    CHECK_THROWS_AS(snr(p.P_m, p.G, 0.0, true, 1.0, p), std::domain_error);
}

TEST_CASE("association edge cases") {
    const SystemParams p = default_params();
    for (double u : {0.1, 1.0, 4.9})
        for (double xi : {0.3, 2.0, 5.0}) CHECK(associate({{0.0, 1.0}, {u, xi}}, p) == Tier::ABS);
    CHECK(associate({{30.0, 1.0}, {0.1, 1.0}}, p) == Tier::SBS);
    CHECK(associate({{30.0, 1.0}, {0.0, 1.0}}, p) == Tier::SBS);
    CHECK(associate({{0.0, 1.0}, {0.0, 1.0}}, p) == Tier::ABS);
}

TEST_CASE("kappa is the law of cosines") {
    for (double x : {0.0, 3.0, 20.0})
        for (double u : {0.0, 1.0, 5.0})
            for (double xi : {0.0, 1.0, std::numbers::pi, 4.0}) {
                const double dx = x + u * std::cos(xi);
                const double dy = u * std::sin(xi);
                CHECK(kappa(x, u, xi) == doctest::Approx(std::hypot(dx, dy)).epsilon(1e-12));
            }
}

TEST_CASE("association flips across the boundary radius") {
    const SystemParams p = default_params();
    for (double x : {2.0, 10.0, 20.0, 30.0}) {
        for (double xi = 0.05; xi < 2.0 * std::numbers::pi; xi += 0.4) {
            const double um = analytics::u_max(x, xi, p);
            if (um >= p.R_s) continue;
            CHECK(associate({{x, 1.0}, {um * (1.0 - 1e-6), xi}}, p) == Tier::SBS);
            CHECK(associate({{x, 1.0}, {um * (1.0 + 1e-6), xi}}, p) == Tier::ABS);
        }
    }
}

TEST_CASE("empirical SBS association matches A_s(x)") {
    const SystemParams p = default_params();
    Rng rng = make_stream(77, 0);
    const int trials = 100000;
    for (double x : {5.0, 15.0, 30.0}) {
        int sbs = 0;
        for (int i = 0; i < trials; ++i)
            if (associate({{x, 1.0}, sample_user_offset(rng, p)}, p) == Tier::SBS) ++sbs;
        const double a = analytics::association_prob_sbs(x, p);
        const double se = std::sqrt(a * (1.0 - a) / trials);
        CHECK(std::abs(double(sbs) / trials - a) <= 3.0 * se);
    }
}

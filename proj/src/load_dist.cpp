#include "iab/load_dist.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "iab/analytics.hpp"

namespace iab::load {

namespace {

void fill_moments(LoadDistribution& dist) {
    double mean = 0.0;
    for (std::size_t i = 0; i < dist.masses.size(); ++i) mean += dist.support[i] * dist.masses[i];
    double var = 0.0;
    for (std::size_t i = 0; i < dist.masses.size(); ++i) {
        const double d = dist.support[i] - mean;
        var += d * d * dist.masses[i];
    }
    dist.mean = mean;
    dist.variance = var;
}

// P(Z <= z) for a standard normal, accurate in both tails.
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

const char* to_string(Side side) { return side == Side::ABS ? "ABS" : "SBS"; }

double binomial_pmf(int k, int trials, double p) {
    if (k < 0 || k > trials) return 0.0;
    p = std::clamp(p, 0.0, 1.0);
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == trials ? 1.0 : 0.0;
    return boost::math::pdf(boost::math::binomial_distribution<double>(trials, p), k);
}

double in_hotspot_load_pmf(int k, double x, Side side, const SystemParams& params) {
    if (k < 1 || k > params.m_bar) return 0.0;
    const double a_s = analytics::association_prob_sbs(x, params);
    const double a = side == Side::ABS ? 1.0 - a_s : a_s;
    return binomial_pmf(k - 1, params.m_bar - 1, a);
}

CltMoments clt_moments(const SystemParams& params) {
    double e_am = 0.0;
    double e_as = 0.0;
    double e_amas = 0.0;
    double e_am2 = 0.0;
    for (const quad::Node& xn : analytics::hotspot_distance_rule(params)) {
        const double a_s = analytics::association_prob_sbs(xn.x, params);
        const double a_m = 1.0 - a_s;
        e_am += xn.w * a_m;
        e_as += xn.w * a_s;
        e_amas += xn.w * a_m * a_s;
        e_am2 += xn.w * a_m * a_m;
    }
    const double others = params.n - 1;
    const double m = params.m_bar;
    CltMoments out;
    out.mean_abs = others * m * e_am;
    out.mean_sbs = others * m * e_as;
    out.var_abs = others * (m * e_amas + m * m * (e_am2 - e_am * e_am));
    out.var_sbs = out.var_abs;
    return out;
}

LoadDistribution other_load_pmf_exact(Side side, const SystemParams& params) {
    const long others = params.n - 1;
    const long max_load = others * params.m_bar;
    if (max_load > kMaxExactSupport)
        throw SupportTooLarge("other_load_pmf_exact: support " + std::to_string(max_load) +
                              " exceeds " + std::to_string(kMaxExactSupport));

    LoadDistribution dist;
    dist.kind = Kind::ExactConvolution;
    if (others <= 0) {
        dist.support = {0};
        dist.masses = {1.0};
        return dist;
    }

    // Per-hotspot load: Binomial(m_bar, A(X)) averaged over X.
    const int m = params.m_bar;
    std::vector<double> single(static_cast<std::size_t>(m) + 1, 0.0);
    for (const quad::Node& xn : analytics::hotspot_distance_rule(params)) {
        const double a_s = analytics::association_prob_sbs(xn.x, params);
        const double a = side == Side::ABS ? 1.0 - a_s : a_s;
        for (int k = 0; k <= m; ++k) single[static_cast<std::size_t>(k)] += xn.w * binomial_pmf(k, m, a);
    }

    std::vector<double> pmf = single;
    for (long step = 1; step < others; ++step) {
        std::vector<double> next(pmf.size() + single.size() - 1, 0.0);
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            if (pmf[i] == 0.0) continue;
            for (std::size_t j = 0; j < single.size(); ++j) next[i + j] += pmf[i] * single[j];
        }
        pmf = std::move(next);
    }

    dist.masses = std::move(pmf);
    dist.support.resize(dist.masses.size());
    for (std::size_t i = 0; i < dist.support.size(); ++i) dist.support[i] = static_cast<int>(i);
    fill_moments(dist);
    return dist;
}

double gaussian_density(double t, double mean, double variance) {
    if (!(variance > 0.0)) throw std::domain_error("gaussian_density: variance must be positive");
    const double z = (t - mean) / std::sqrt(variance);
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi * variance);
}

LoadDistribution discretized_gaussian(double mean, double variance, int max_load) {
    if (!(variance > 0.0)) throw std::domain_error("discretized_gaussian: variance must be positive");
    const double sd = std::sqrt(variance);
    LoadDistribution dist;
    dist.kind = Kind::GaussianApprox;
    dist.mean = mean;
    dist.variance = variance;
    for (int k = 0; k <= max_load; ++k) {
        const double hi = normal_cdf((k + 0.5 - mean) / sd);
        const double lo = normal_cdf((k - 0.5 - mean) / sd);
        dist.support.push_back(k);
        dist.masses.push_back(hi - lo);
    }
    return dist;
}

double total_variation(const LoadDistribution& a, const LoadDistribution& b) {
    std::map<int, double> diff;
    double total_a = 0.0;
    double total_b = 0.0;
    for (std::size_t i = 0; i < a.masses.size(); ++i) {
        diff[a.support[i]] += a.masses[i];
        total_a += a.masses[i];
    }
    for (std::size_t i = 0; i < b.masses.size(); ++i) {
        diff[b.support[i]] -= b.masses[i];
        total_b += b.masses[i];
    }
    double l1 = 0.0;
    for (const auto& [k, d] : diff) l1 += std::abs(d);
    // Mass a PMF leaves unassigned lies off every listed support point.
    l1 += std::max(0.0, 1.0 - total_a) + std::max(0.0, 1.0 - total_b);
    return 0.5 * l1;
}

}  // namespace iab::load

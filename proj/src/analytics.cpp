#include "iab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace iab::analytics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hotspot distances below this are treated as a co-located SBS.
constexpr double kColocated = 1e-12;

// Largest base-2 exponent evaluated before the threshold is taken as +inf.
constexpr double kMaxRateExponent = 1e3;

inline double ccdf(double t, int m) {
    if (t <= 0.0) return 1.0;
    if (!(t < kInf)) return 0.0;
    const double s = m * t;
    // exp(-s) underflows long before the series can overflow.
    if (s > 1e5) return 0.0;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < m; ++j) {
        term *= s / j;
        sum += term;
    }
    return std::exp(-s) * sum;
}

double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

struct LoadRule {
    quad::Rule nodes;
    double leaked = 0.0;
};

// Nodes for the Gaussian other-load density on [max(0, mean - 8 sd), mean + 8 sd].
// A zero variance (n = 1) is a point mass at the mean.
LoadRule load_rule(double mean, double variance, int n) {
    if (!(variance > 0.0)) return {{{mean, 1.0}}, 0.0};
    const double sd = std::sqrt(variance);
    const double lo = std::max(0.0, mean - 8.0 * sd);
    const double hi = mean + 8.0 * sd;
    LoadRule rule{quad::gauss_legendre(lo, hi, n), 0.0};
    for (quad::Node& node : rule.nodes) node.w *= load::gaussian_density(node.x, mean, variance);
    const double below = 0.5 * std::erfc((mean - lo) / (sd * std::numbers::sqrt2));
    const double above = 0.5 * std::erfc(8.0 / std::numbers::sqrt2);
    rule.leaked = below + above;
    return rule;
}

load::CltMoments other_load_moments(const SystemParams& params) {
    return params.n >= 2 ? load::clt_moments(params) : load::CltMoments{};
}

struct RateParts {
    double pr_m = 0.0;
    double pr_s = 0.0;
    double leaked = 0.0;
};

// Pr_m and/or Pr_s in a single pass over the hotspot distance.
RateParts rate_parts(double rho, const SystemParams& params, PartitionStrategy strategy,
                     const load::CltMoments& moments, bool want_abs, bool want_sbs) {
    RateParts out;
    const double W_a = params.W_a();
    const double W_b = params.W_b();
    if (!(W_a > 0.0)) return out;
    want_sbs = want_sbs && W_b > 0.0;
    if (!want_abs && !want_sbs) return out;

    const int m_bar = params.m_bar;
    const LoadRule abs_load = load_rule(moments.mean_abs, moments.var_abs, params.quad.t_nodes);
    const LoadRule sbs_load = load_rule(moments.mean_sbs, moments.var_sbs, params.quad.t_nodes);
    if (want_abs) out.leaked = abs_load.leaked;
    if (want_sbs && strategy == PartitionStrategy::LoadBased)
        out.leaked = std::max(out.leaked, sbs_load.leaked);

    for (const quad::Node& xn : hotspot_distance_rule(params)) {
        const HotspotKernel kernel(xn.x, params);
        const double a_s = kernel.assoc_sbs();
        const double a_m = kernel.assoc_abs();
        double acc_m = 0.0;
        double acc_s = 0.0;
        for (int k = 1; k <= m_bar; ++k) {
            if (want_abs) {
                const double weight = load::binomial_pmf(k - 1, m_bar - 1, a_m);
                if (weight > 0.0) {
                    double inner = 0.0;
                    for (const quad::Node& tn : abs_load.nodes)
                        inner += tn.w * kernel.abs_access_coverage(rate_threshold(rho, k + tn.x, W_a));
                    acc_m += weight * inner;
                }
            }
            if (want_sbs) {
                const double weight = load::binomial_pmf(k - 1, m_bar - 1, a_s);
                if (weight <= 0.0) continue;
                const double access = kernel.sbs_access_coverage(rate_threshold(rho, k, W_a));
                if (access <= 0.0) continue;
                double backhaul = 0.0;
                if (strategy == PartitionStrategy::Equal) {
                    backhaul = kernel.backhaul_coverage(
                        rate_threshold(rho, static_cast<double>(params.n) * k, W_b));
                } else {
                    for (const quad::Node& tn : sbs_load.nodes)
                        backhaul += tn.w * kernel.backhaul_coverage(rate_threshold(rho, k + tn.x, W_b));
                }
                acc_s += weight * access * backhaul;
            }
        }
        out.pr_m += xn.w * acc_m;
        out.pr_s += xn.w * acc_s;
    }
    return out;
}

}  // namespace

const char* to_string(PartitionStrategy strategy) {
    return strategy == PartitionStrategy::Equal ? "equal" : "load-based";
}

PartitionStrategy parse_strategy(std::string_view name) {
    if (name == "equal") return PartitionStrategy::Equal;
    if (name == "load-based" || name == "load") return PartitionStrategy::LoadBased;
    throw ConfigError("strategy", "unknown partition strategy '" + std::string(name) + "'");
}

double u_max(double x, double xi, const SystemParams& params) {
    const double k = params.k_p();
    if (!(k < 1.0)) throw ConfigError("P_s_dbm", "k_p must be below 1");
    const double s = std::sin(xi);
    const double root =
        x * k * (std::sqrt(1.0 - k * k * s * s) + k * std::cos(xi)) / (1.0 - k * k);
    return std::min(params.R_s, root);
}

double association_prob_sbs(double x, const SystemParams& params) {
    if (x <= kColocated) return 0.0;
    const double k = params.k_p();
    const double Rs = params.R_s;
    // Angle at which the root reaches R_s; the min-clamp kinks there.
    const double c = (Rs * Rs * (1.0 - k * k) - k * k * x * x) / (2.0 * x * k * k * Rs);
    double kink = -1.0;
    if (c > -1.0 && c < 1.0) kink = std::acos(c);

    double sum = 0.0;
    for (const quad::Node& node : quad::piecewise(0.0, std::numbers::pi, {kink}, params.quad.xi_nodes)) {
        const double u = u_max(x, node.x, params);
        sum += node.w * u * u;
    }
    return std::clamp(sum / (std::numbers::pi * Rs * Rs), 0.0, 1.0);
}

double association_prob_abs(double x, const SystemParams& params) {
    return 1.0 - association_prob_sbs(x, params);
}

double gamma_ccdf(double t, int m) { return ccdf(t, m); }

double rate_threshold(double rho, double load, double bandwidth) {
    if (!(bandwidth > 0.0)) return kInf;
    const double exponent = rho * load / bandwidth;
    if (exponent > kMaxRateExponent) return kInf;
    return std::expm1(exponent * std::numbers::ln2);
}

quad::Rule hotspot_distance_rule(const SystemParams& params) {
    const double L = params.R - params.R_s;
    const double k = params.k_p();
    const double Rs = params.R_s;
    // A_s(x) has kinks where u_max first touches R_s (xi = 0) and where it
    // is clamped for every xi.
    quad::Rule rule = quad::piecewise(0.0, L, {Rs * (1.0 - k) / k, Rs * (1.0 + k) / k}, params.quad.x_nodes);
    double total = 0.0;
    for (quad::Node& node : rule) {
        node.w *= 2.0 * node.x / (L * L);
        total += node.w;
    }
    for (quad::Node& node : rule) node.w /= total;
    return rule;
}

HotspotKernel::LinkNode HotspotKernel::make_node(double distance, double weight, double tx_power_gain,
                                                 const SystemParams& params) {
    const double base = params.beta * params.noise_power() / tx_power_gain;
    return {weight, std::exp(-distance / params.mu), base * std::pow(distance, params.alpha_L),
            base * std::pow(distance, params.alpha_NL)};
}

HotspotKernel::HotspotKernel(double x, const SystemParams& params)
    : x_(x), assoc_sbs_(association_prob_sbs(x, params)), m_L_(params.m_L), m_NL_(params.m_NL) {
    const double Rs = params.R_s;
    const double k = params.k_p();
    const int n = params.quad.u_nodes;
    const double access_abs = params.P_m * params.G;
    const double access_sbs = params.P_s * params.G;

    if (x <= kColocated) {
        // Co-located SBS never wins association; kappa = u over the whole disk.
        for (const quad::Node& node : quad::gauss_legendre_cosine(0.0, Rs, n))
            abs_nodes_.push_back(make_node(node.x, node.w * 2.0 * node.x / (Rs * Rs), access_abs, params));
        return;
    }

    backhaul_ = make_node(x, 1.0, params.P_m * params.G * params.G, params);

    // SBS region: for offset u the user is SBS-served on an arc of angular
    // fraction acos(c(u)) / pi.
    const double u_all = x * k / (1.0 + k);
    const double u_none = std::min(Rs, x * k / (1.0 - k));
    for (const quad::Node& node : quad::piecewise(0.0, u_none, {u_all}, n)) {
        const double u = node.x;
        const double c = (u * u * (1.0 - k * k) - k * k * x * x) / (2.0 * x * k * k * u);
        const double frac = std::acos(clamp_unit(c)) / std::numbers::pi;
        if (frac <= 0.0) continue;
        sbs_nodes_.push_back(make_node(u, node.w * 2.0 * u / (Rs * Rs) * frac, access_sbs, params));
    }

    // ABS region by distance r to the ABS: the circle |y| = r meets the
    // hotspot and the ABS-served set on the angles with lo <= cos <= hi.
    const double r_lo = std::max(0.0, x - Rs);
    const double r_hi = x + Rs;
    for (const quad::Node& node :
         quad::piecewise(r_lo, r_hi, {std::abs(x - Rs), x / (1.0 + k), x / (1.0 - k)}, n)) {
        const double r = node.x;
        const double hi = (r * r * (1.0 - k * k) + x * x) / (2.0 * r * x);
        const double lo = (r * r + x * x - Rs * Rs) / (2.0 * r * x);
        const double measure = 2.0 * (std::acos(clamp_unit(lo)) - std::acos(clamp_unit(hi)));
        if (measure <= 0.0) continue;
        abs_nodes_.push_back(
            make_node(r, node.w * r * measure / (std::numbers::pi * Rs * Rs), access_abs, params));
    }
}

double HotspotKernel::link_coverage(const LinkNode& node, double theta) const {
    return node.weight * (node.p_los * ccdf(node.c_los * theta, m_L_) +
                          (1.0 - node.p_los) * ccdf(node.c_nlos * theta, m_NL_));
}

double HotspotKernel::coverage(const std::vector<LinkNode>& nodes, double theta) const {
    if (!(theta < kInf)) return 0.0;
    double sum = 0.0;
    for (const LinkNode& node : nodes) sum += link_coverage(node, theta);
    return sum;
}

double HotspotKernel::backhaul_coverage(double theta1) const {
    if (x_ <= kColocated || !(theta1 < kInf)) return 0.0;
    return link_coverage(backhaul_, theta1);
}

double HotspotKernel::sbs_access_coverage(double theta2) const { return coverage(sbs_nodes_, theta2); }

double HotspotKernel::abs_access_coverage(double theta3) const { return coverage(abs_nodes_, theta3); }

double HotspotKernel::sbs_region_mass() const { return coverage(sbs_nodes_, 0.0); }

double HotspotKernel::abs_region_mass() const { return coverage(abs_nodes_, 0.0); }

double cov_prob_sbs_conditional(double theta1, double theta2, double x, const SystemParams& params) {
    if (x <= kColocated) return 0.0;
    const HotspotKernel kernel(x, params);
    const double backhaul = kernel.backhaul_coverage(theta1);
    if (backhaul <= 0.0) return 0.0;
    return backhaul * kernel.sbs_access_coverage(theta2);
}

double cov_prob_abs_conditional(double theta3, double x, const SystemParams& params) {
    return HotspotKernel(x, params).abs_access_coverage(theta3);
}

double coverage_probability(const CoverageThresholds& thresholds, const SystemParams& params) {
    double total = 0.0;
    for (const quad::Node& xn : hotspot_distance_rule(params)) {
        const HotspotKernel kernel(xn.x, params);
        double value = kernel.abs_access_coverage(thresholds.theta3);
        const double backhaul = kernel.backhaul_coverage(thresholds.theta1);
        if (backhaul > 0.0) value += backhaul * kernel.sbs_access_coverage(thresholds.theta2);
        total += xn.w * value;
    }
    return std::clamp(total, 0.0, 1.0);
}

double rate_cov_abs(double rho, const SystemParams& params, const load::CltMoments& moments) {
    return rate_parts(rho, params, PartitionStrategy::Equal, moments, true, false).pr_m;
}

double rate_cov_abs(double rho, const SystemParams& params) {
    return rate_cov_abs(rho, params, other_load_moments(params));
}

double rate_cov_sbs(double rho, const SystemParams& params, PartitionStrategy strategy,
                    const load::CltMoments& moments) {
    return rate_parts(rho, params, strategy, moments, false, true).pr_s;
}

double rate_cov_sbs(double rho, const SystemParams& params, PartitionStrategy strategy) {
    return rate_cov_sbs(rho, params, strategy, other_load_moments(params));
}

RateCoverage rate_coverage(double rho, const SystemParams& params, PartitionStrategy strategy) {
    const RateParts parts = rate_parts(rho, params, strategy, other_load_moments(params), true, true);
    RateCoverage out;
    out.pr_m = parts.pr_m;
    out.pr_s = parts.pr_s;
    out.pr = parts.pr_m + parts.pr_s;
    out.leaked_mass = parts.leaked;
    return out;
}

OptimalSplit optimal_eta(double rho, const SystemParams& params, PartitionStrategy strategy,
                         double grid_step) {
    if (!(grid_step > 0.0 && grid_step < 1.0)) throw ConfigError("eta_step", "must lie in (0, 1)");

    // Improvements below this are rounding noise, not a better split.
    constexpr double kImprovement = 1e-12;
    const load::CltMoments moments = other_load_moments(params);
    OptimalSplit best;
    best.pr = -1.0;
    auto evaluate = [&](double eta) {
        SystemParams p = params;
        p.eta = eta;
        ++best.evaluations;
        const RateParts parts = rate_parts(rho, p, strategy, moments, true, true);
        return parts.pr_m + parts.pr_s;
    };
    auto offer = [&](double eta, double pr) {
        if (pr > best.pr + kImprovement) {
            best.eta = eta;
            best.pr = pr;
        }
    };

    const int steps = static_cast<int>(std::ceil(1.0 / grid_step - 1e-9));
    for (int i = 0; i < steps; ++i) {
        const double eta = i * grid_step;
        offer(eta, evaluate(eta));
    }

    // Golden-section search on the bracket around the grid maximiser.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(0.0, best.eta - grid_step);
    double b = std::min(1.0, best.eta + grid_step);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = evaluate(c);
    double fd = evaluate(d);
    offer(std::min(c, d), c < d ? fc : fd);
    offer(std::max(c, d), c < d ? fd : fc);
    while (b - a > 1e-5) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = evaluate(c);
            offer(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = evaluate(d);
            offer(d, fd);
        }
    }
    return best;
}

}  // namespace iab::analytics

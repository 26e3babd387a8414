#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iab/load_dist.hpp"
#include "iab/params.hpp"
#include "iab/quadrature.hpp"

namespace iab::analytics {

// Linear SNR thresholds: backhaul, SBS access, ABS access.
struct CoverageThresholds {
    double theta1 = 1.0;
    double theta2 = 1.0;
    double theta3 = 1.0;
};

enum class PartitionStrategy { Equal, LoadBased };

const char* to_string(PartitionStrategy strategy);
PartitionStrategy parse_strategy(std::string_view name);

class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved_tolerance() const { return achieved_; }

private:
    double achieved_;
};

// Positive root of u^2 (1 - k^2) - 2 x cos(xi) k^2 u - k^2 x^2, capped at R_s.
double u_max(double x, double xi, const SystemParams& params);

// A_s(x), averaged over the offset angle.
double association_prob_sbs(double x, const SystemParams& params);
double association_prob_abs(double x, const SystemParams& params);

// P(h > t), h ~ Gamma(m, 1/m), integer m.
double gamma_ccdf(double t, int m);

// SNR threshold for rate rho when `load` users share `bandwidth`. Returns
// +inf when the bandwidth is zero or the exponent overflows.
double rate_threshold(double rho, double load, double bandwidth);

// Hotspot-distance rule; weights include f_X and sum to one.
quad::Rule hotspot_distance_rule(const SystemParams& params);

// Node sets for one hotspot distance x. The offset angle is integrated out
// in closed form: the SBS region is parameterised by u and the ABS region by
// the user-to-ABS distance kappa, each weighted by the angular measure of the
// association region.
class HotspotKernel {
public:
    HotspotKernel(double x, const SystemParams& params);

    double x() const { return x_; }
    double assoc_sbs() const { return assoc_sbs_; }
    double assoc_abs() const { return 1.0 - assoc_sbs_; }

    // P(SNR_b > theta1) at distance x.
    double backhaul_coverage(double theta1) const;
    // P(SNR_a^SBS > theta2, user served by the SBS | x).
    double sbs_access_coverage(double theta2) const;
    // P(SNR_a^ABS > theta3, user served by the ABS | x).
    double abs_access_coverage(double theta3) const;

    // Raw region masses; each equals its association probability up to
    // quadrature error.
    double sbs_region_mass() const;
    double abs_region_mass() const;

private:
    struct LinkNode {
        double weight;
        double p_los;
        double c_los;   // F_h argument per unit threshold, LOS
        double c_nlos;
    };

    static LinkNode make_node(double distance, double weight, double tx_power_gain,
                              const SystemParams& params);
    double link_coverage(const LinkNode& node, double theta) const;
    double coverage(const std::vector<LinkNode>& nodes, double theta) const;

    double x_;
    double assoc_sbs_;
    int m_L_;
    int m_NL_;
    LinkNode backhaul_{};
    std::vector<LinkNode> sbs_nodes_;
    std::vector<LinkNode> abs_nodes_;
};

double cov_prob_sbs_conditional(double theta1, double theta2, double x, const SystemParams& params);
double cov_prob_abs_conditional(double theta3, double x, const SystemParams& params);
double coverage_probability(const CoverageThresholds& thresholds, const SystemParams& params);

struct RateCoverage {
    double pr = 0.0;
    double pr_m = 0.0;
    double pr_s = 0.0;
    // Gaussian load mass lost to the t >= 0 floor (largest of the two sides).
    double leaked_mass = 0.0;
};

double rate_cov_abs(double rho, const SystemParams& params);
double rate_cov_abs(double rho, const SystemParams& params, const load::CltMoments& moments);
double rate_cov_sbs(double rho, const SystemParams& params, PartitionStrategy strategy);
double rate_cov_sbs(double rho, const SystemParams& params, PartitionStrategy strategy,
                    const load::CltMoments& moments);
RateCoverage rate_coverage(double rho, const SystemParams& params, PartitionStrategy strategy);

struct OptimalSplit {
    double eta = 0.0;
    double pr = 0.0;
    int evaluations = 0;
};

// Grid scan over {0, step, ..., < 1} then golden-section refinement around
// the best grid point. Ties resolve to the smallest eta.
OptimalSplit optimal_eta(double rho, const SystemParams& params, PartitionStrategy strategy,
                         double grid_step = 0.05);

struct ConvergenceCheck {
    double value = 0.0;
    double doubled = 0.0;
    double change() const { return value > doubled ? value - doubled : doubled - value; }
};

// Evaluates fn at the configured and doubled node counts.
template <class Fn>
ConvergenceCheck check_convergence(Fn&& fn, const SystemParams& params) {
    SystemParams fine = params;
    fine.quad = params.quad.doubled();
    return {fn(params), fn(fine)};
}

// As check_convergence, but throws NumericalError when node doubling moves
// the result by more than the declared tolerance.
template <class Fn>
double converged_or_throw(Fn&& fn, const SystemParams& params) {
    const ConvergenceCheck check = check_convergence(fn, params);
    if (check.change() > params.quad.tolerance)
        throw NumericalError("quadrature did not reach the declared tolerance", check.change());
    return check.doubled;
}

}  // namespace iab::analytics

#pragma once

#include <vector>

#include "iab/params.hpp"

namespace iab::load {

enum class Side { ABS, SBS };

const char* to_string(Side side);

// Mean and variance of the load contributed by the n - 1 hotspots other
// than the representative one. var_abs == var_sbs by symmetry.
struct CltMoments {
    double mean_abs = 0.0;
    double var_abs = 0.0;
    double mean_sbs = 0.0;
    double var_sbs = 0.0;
};

enum class Kind { ExactConvolution, GaussianApprox };

// PMF over consecutive integer loads starting at support.front().
struct LoadDistribution {
    std::vector<int> support;
    std::vector<double> masses;
    Kind kind = Kind::ExactConvolution;
    double mean = 0.0;
    double variance = 0.0;
};

// Largest (n - 1) * m_bar accepted by other_load_pmf_exact.
inline constexpr long kMaxExactSupport = 10000;

class SupportTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

double binomial_pmf(int k, int trials, double p);

// Load on the ABS (or SBS) from the representative hotspot at distance x,
// counting the typical user: Binomial(m_bar - 1, A) shifted by one.
double in_hotspot_load_pmf(int k, double x, Side side, const SystemParams& params);

// Requires n >= 2.
CltMoments clt_moments(const SystemParams& params);

// (n - 1)-fold convolution of the per-hotspot binomial mixture.
LoadDistribution other_load_pmf_exact(Side side, const SystemParams& params);

// Normal density N(mean, variance). Throws std::domain_error when variance
// is not positive; that case (n = 1) is a point mass and callers handle it.
double gaussian_density(double t, double mean, double variance);

// Gaussian integrated over unit bins centred on 0..max_load.
LoadDistribution discretized_gaussian(double mean, double variance, int max_load);

// Half the L1 distance. Mass either PMF places outside the other's support
// counts in full.
double total_variation(const LoadDistribution& a, const LoadDistribution& b);

}  // namespace iab::load

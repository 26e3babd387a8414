#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iab/analytics.hpp"
#include "iab/geometry.hpp"
#include "iab/params.hpp"
#include "iab/rng.hpp"

namespace iab::sim {

using analytics::CoverageThresholds;
using analytics::PartitionStrategy;

struct SimUser {
    UserPlacement placement;
    Tier tier = Tier::ABS;
    LinkSample access;   // link from the serving BS
};

// One drop of the whole macrocell. Users are stored hotspot-major:
// users[h * m_bar + j] is user j of hotspot h.
struct NetworkRealization {
    int m_bar = 0;
    std::vector<PolarPoint> centers;
    std::vector<LinkSample> backhaul;   // ABS -> SBS h
    std::vector<SimUser> users;
    std::vector<int> sbs_load;          // N^SBS per hotspot
    std::vector<int> abs_load;          // N^ABS per hotspot
    int total_sbs_load = 0;
    int total_abs_load = 0;

    int hotspot_of(std::size_t user) const { return static_cast<int>(user / static_cast<std::size_t>(m_bar)); }
};

NetworkRealization realize(Rng& rng, const SystemParams& params);

// Achievable downlink rate in bit/s under round-robin access sharing and
// the strategy's backhaul split. Throws std::out_of_range for a bad index.
double user_rate(const NetworkRealization& real, std::size_t user, PartitionStrategy strategy,
                 const SystemParams& params);

struct RateReport {
    double rate = 0.0;
    Tier tier = Tier::ABS;
    PartitionStrategy strategy = PartitionStrategy::Equal;
    bool covered = false;
};

RateReport rate_report(const NetworkRealization& real, std::size_t user, PartitionStrategy strategy,
                       double rho, const SystemParams& params);

// Coverage event pair for one user.
bool snr_covered(const NetworkRealization& real, std::size_t user, const CoverageThresholds& thresholds);

struct Estimate {
    double p = 0.0;
    double se = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

Estimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed);

// Typical user: uniform hotspot, then uniform user within it.
std::size_t draw_typical_user(Rng& rng, const SystemParams& params);

Estimate estimate_rate_coverage(std::uint64_t seed, std::uint64_t trials, double rho,
                                PartitionStrategy strategy, const SystemParams& params);

Estimate estimate_coverage(std::uint64_t seed, std::uint64_t trials, const CoverageThresholds& thresholds,
                           const SystemParams& params);

// Several (eta, strategy) points evaluated on the same realizations; each
// estimate matches what estimate_rate_coverage gives for that point.
struct SplitPoint {
    double eta = 0.0;
    PartitionStrategy strategy = PartitionStrategy::Equal;
};

std::vector<Estimate> estimate_rate_coverage_batch(std::uint64_t seed, std::uint64_t trials, double rho,
                                                   std::span<const SplitPoint> points,
                                                   const SystemParams& params);

}  // namespace iab::sim

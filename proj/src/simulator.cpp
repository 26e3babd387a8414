#include "iab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace iab::sim {

namespace {

// Runs trials [0, trials) split into contiguous blocks, one per worker, and
// sums per-worker hit counters. Integer sums make the result independent of
// the worker count.
template <class TrialFn>
std::vector<std::uint64_t> count_hits(std::uint64_t trials, unsigned threads, std::size_t counters,
                                      const TrialFn& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, trials)));
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(counters, 0));
    auto run = [&](unsigned w) {
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        for (std::uint64_t i = begin; i < end; ++i) fn(i, partial[w]);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    std::vector<std::uint64_t> total(counters, 0);
    for (const auto& p : partial)
        for (std::size_t c = 0; c < counters; ++c) total[c] += p[c];
    return total;
}

}  // namespace

NetworkRealization realize(Rng& rng, const SystemParams& params) {
    NetworkRealization real;
    const int n = params.n;
    const int m = params.m_bar;
    real.m_bar = m;
    real.centers = sample_hotspot_centers(rng, params);
    real.backhaul.reserve(static_cast<std::size_t>(n));
    real.users.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    real.sbs_load.assign(static_cast<std::size_t>(n), 0);
    real.abs_load.assign(static_cast<std::size_t>(n), 0);

    const double backhaul_gain = params.G * params.G;
    for (int h = 0; h < n; ++h) {
        const PolarPoint& center = real.centers[static_cast<std::size_t>(h)];
        // A hotspot centre at the origin has no backhaul path to speak of;
        // clamp like the access links.
        real.backhaul.push_back(
            draw_link(rng, params.P_m, backhaul_gain, std::max(center.radius, kMinLinkDistance), params));
        for (int j = 0; j < m; ++j) {
            SimUser user;
            user.placement = {center, sample_user_offset(rng, params)};
            user.tier = associate(user.placement, params);
            if (user.tier == Tier::SBS) {
                const double d = std::max(user.placement.offset.radius, kMinLinkDistance);
                user.access = draw_link(rng, params.P_s, params.G, d, params);
                ++real.sbs_load[static_cast<std::size_t>(h)];
            } else {
                const double d = std::max(user.placement.distance_to_abs(), kMinLinkDistance);
                user.access = draw_link(rng, params.P_m, params.G, d, params);
                ++real.abs_load[static_cast<std::size_t>(h)];
            }
            real.users.push_back(user);
        }
    }
    for (int h = 0; h < n; ++h) {
        real.total_sbs_load += real.sbs_load[static_cast<std::size_t>(h)];
        real.total_abs_load += real.abs_load[static_cast<std::size_t>(h)];
    }
    return real;
}

double user_rate(const NetworkRealization& real, std::size_t user, PartitionStrategy strategy,
                 const SystemParams& params) {
    if (user >= real.users.size()) throw std::out_of_range("user_rate: user index out of range");
    const SimUser& u = real.users[user];
    const double W_a = params.W_a();
    const double W_b = params.W_b();

    if (u.tier == Tier::ABS) return W_a / real.total_abs_load * std::log2(1.0 + u.access.snr);

    const int h = real.hotspot_of(user);
    const double load = real.sbs_load[static_cast<std::size_t>(h)];
    const double share = strategy == PartitionStrategy::Equal ? W_b / params.n
                                                              : W_b * load / real.total_sbs_load;
    const double access = W_a / load * std::log2(1.0 + u.access.snr);
    const double backhaul = share / load * std::log2(1.0 + real.backhaul[static_cast<std::size_t>(h)].snr);
    return std::min(access, backhaul);
}

RateReport rate_report(const NetworkRealization& real, std::size_t user, PartitionStrategy strategy,
                       double rho, const SystemParams& params) {
    RateReport report;
    report.rate = user_rate(real, user, strategy, params);
    report.tier = real.users[user].tier;
    report.strategy = strategy;
    report.covered = report.rate >= rho;
    return report;
}

bool snr_covered(const NetworkRealization& real, std::size_t user, const CoverageThresholds& thresholds) {
    const SimUser& u = real.users.at(user);
    if (u.tier == Tier::ABS) return u.access.snr > thresholds.theta3;
    const LinkSample& bh = real.backhaul[static_cast<std::size_t>(real.hotspot_of(user))];
    return bh.snr > thresholds.theta1 && u.access.snr > thresholds.theta2;
}

Estimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
    Estimate e;
    e.hits = hits;
    e.trials = trials;
    e.seed = seed;
    e.p = trials > 0 ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    e.se = trials > 0 ? std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(trials)) : 0.0;
    return e;
}

std::size_t draw_typical_user(Rng& rng, const SystemParams& params) {
    std::uniform_int_distribution<int> hotspot(0, params.n - 1);
    std::uniform_int_distribution<int> member(0, params.m_bar - 1);
    const int h = hotspot(rng);
    const int j = member(rng);
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(params.m_bar) + static_cast<std::size_t>(j);
}

std::vector<Estimate> estimate_rate_coverage_batch(std::uint64_t seed, std::uint64_t trials, double rho,
                                                   std::span<const SplitPoint> points,
                                                   const SystemParams& params) {
    std::vector<SystemParams> per_point(points.size(), params);
    for (std::size_t i = 0; i < points.size(); ++i) per_point[i].eta = points[i].eta;

    const auto hits = count_hits(trials, params.mc.threads, points.size(),
                                 [&](std::uint64_t trial, std::vector<std::uint64_t>& counts) {
                                     Rng rng = make_stream(seed, trial);
                                     const NetworkRealization real = realize(rng, params);
                                     const std::size_t user = draw_typical_user(rng, params);
                                     for (std::size_t i = 0; i < points.size(); ++i) {
                                         if (user_rate(real, user, points[i].strategy, per_point[i]) >= rho)
                                             ++counts[i];
                                     }
                                 });
    std::vector<Estimate> out;
    out.reserve(points.size());
    for (std::uint64_t h : hits) out.push_back(make_estimate(h, trials, seed));
    return out;
}

Estimate estimate_rate_coverage(std::uint64_t seed, std::uint64_t trials, double rho,
                                PartitionStrategy strategy, const SystemParams& params) {
    const SplitPoint point{params.eta, strategy};
    return estimate_rate_coverage_batch(seed, trials, rho, std::span<const SplitPoint>(&point, 1), params)
        .front();
}

Estimate estimate_coverage(std::uint64_t seed, std::uint64_t trials, const CoverageThresholds& thresholds,
                           const SystemParams& params) {
    const auto hits = count_hits(trials, params.mc.threads, 1,
                                 [&](std::uint64_t trial, std::vector<std::uint64_t>& counts) {
                                     Rng rng = make_stream(seed, trial);
                                     const NetworkRealization real = realize(rng, params);
                                     const std::size_t user = draw_typical_user(rng, params);
                                     if (snr_covered(real, user, thresholds)) ++counts[0];
                                 });
    return make_estimate(hits[0], trials, seed);
}

}  // namespace iab::sim

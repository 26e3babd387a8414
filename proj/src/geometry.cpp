#include "iab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace iab {

namespace {

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

// Angle on (0, 2*pi].
double uniform_angle(Rng& rng) { return 2.0 * std::numbers::pi * (1.0 - uniform01(rng)); }

// Radius with CDF (r / limit)^2 on [0, limit].
double uniform_disk_radius(Rng& rng, double limit) { return limit * std::sqrt(uniform01(rng)); }

}  // namespace

double kappa(double x, double u, double xi) {
    return std::sqrt(std::max(0.0, x * x + u * u + 2.0 * x * u * std::cos(xi)));
}

double UserPlacement::distance_to_abs() const {
    return kappa(hotspot_center.radius, offset.radius, offset.angle);
}

const char* to_string(Tier tier) { return tier == Tier::ABS ? "ABS" : "SBS"; }

PolarPoint sample_hotspot_center(Rng& rng, const SystemParams& params) {
    const double r = uniform_disk_radius(rng, params.R - params.R_s);
    return {r, uniform_angle(rng)};
}

std::vector<PolarPoint> sample_hotspot_centers(Rng& rng, const SystemParams& params) {
    std::vector<PolarPoint> centers;
    centers.reserve(static_cast<std::size_t>(params.n));
    for (int i = 0; i < params.n; ++i) centers.push_back(sample_hotspot_center(rng, params));
    return centers;
}

PolarPoint sample_user_offset(Rng& rng, const SystemParams& params) {
    const double u = uniform_disk_radius(rng, params.R_s);
    return {u, uniform_angle(rng)};
}

double path_loss(double distance, double exponent, const SystemParams& params) {
    if (!(distance > 0.0)) throw std::domain_error("path_loss: distance must be positive");
    return params.beta * std::pow(distance, exponent);
}

double los_probability(double r, const SystemParams& params) { return std::exp(-r / params.mu); }

double sample_fading(Rng& rng, int shape) {
    std::gamma_distribution<double> gamma(static_cast<double>(shape), 1.0 / shape);
    return gamma(rng);
}

double snr(double tx_power, double gain, double distance, bool los, double fading,
           const SystemParams& params) {
    const double exponent = los ? params.alpha_L : params.alpha_NL;
    return tx_power * gain * fading / (path_loss(distance, exponent, params) * params.noise_power());
}

LinkSample draw_link(Rng& rng, double tx_power, double gain, double distance,
                     const SystemParams& params) {
    LinkSample link;
    link.distance = distance;
    link.gain = gain;
    link.los = uniform01(rng) < los_probability(distance, params);
    link.fading = sample_fading(rng, link.los ? params.m_L : params.m_NL);
    link.snr = snr(tx_power, gain, distance, link.los, link.fading, params);
    return link;
}

Tier associate(const UserPlacement& placement, const SystemParams& params) {
    const double u = placement.offset.radius;
    const double k = placement.distance_to_abs();
    const double from_sbs = params.P_s * std::pow(u, -params.alpha_assoc);
    const double from_abs = params.P_m * std::pow(k, -params.alpha_assoc);
    return from_sbs > from_abs ? Tier::SBS : Tier::ABS;
}

}  // namespace iab

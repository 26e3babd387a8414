#pragma once

#include <vector>

#include "iab/params.hpp"
#include "iab/rng.hpp"

namespace iab {

// Radius in meters, angle in radians on (0, 2*pi].
struct PolarPoint {
    double radius = 0.0;
    double angle = 0.0;
};

// A user at hotspot_center + offset. Offset angle is measured from the
// direction of the hotspot center, so kappa only needs the relative angle.
struct UserPlacement {
    PolarPoint hotspot_center;
    PolarPoint offset;

    double distance_to_abs() const;
};

// Law of cosines: |x + u| for a hotspot at radius x and an offset (u, xi).
double kappa(double x, double u, double xi);

enum class Tier { ABS, SBS };

const char* to_string(Tier tier);

// One realized mmWave link.
struct LinkSample {
    double distance = 0.0;
    bool los = false;
    double fading = 1.0;   // h ~ Gamma(m, 1/m)
    double gain = 1.0;     // psi: G^2 backhaul, G access
    double snr = 0.0;
};

// Smallest user-to-SBS distance used for SNR evaluation.
inline constexpr double kMinLinkDistance = 1e-3;

std::vector<PolarPoint> sample_hotspot_centers(Rng& rng, const SystemParams& params);
PolarPoint sample_hotspot_center(Rng& rng, const SystemParams& params);
PolarPoint sample_user_offset(Rng& rng, const SystemParams& params);

// beta * d^exponent. Throws std::domain_error for d <= 0.
double path_loss(double distance, double exponent, const SystemParams& params);

// exp(-r / mu)
double los_probability(double r, const SystemParams& params);

double sample_fading(Rng& rng, int shape);

double snr(double tx_power, double gain, double distance, bool los, double fading,
           const SystemParams& params);

// Draws blockage state and fading for a link of the given length.
LinkSample draw_link(Rng& rng, double tx_power, double gain, double distance,
                     const SystemParams& params);

// Strongest sub-6 GHz paging power; ties go to the ABS.
Tier associate(const UserPlacement& placement, const SystemParams& params);

}  // namespace iab

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iab {

// Raised for any invalid configuration value. The message always names the
// offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(key) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Node counts are per integration piece. Pieces are split at the kinks of
// the association boundary, so every piece has a smooth integrand.
struct QuadratureSpec {
    int x_nodes = 64;
    int u_nodes = 64;
    int xi_nodes = 128;
    int t_nodes = 96;
    double tolerance = 1e-4;

    QuadratureSpec doubled() const {
        return {2 * x_nodes, 2 * u_nodes, 2 * xi_nodes, 2 * t_nodes, tolerance};
    }
};

struct MonteCarloSpec {
    std::uint64_t trials = 200000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

// Network, channel and numerical settings. Everything is stored in linear
// SI units; dB/dBm conversion happens once when the config is read.
struct SystemParams {
    double R = 40.0;                // macrocell radius [m]
    double R_s = 5.0;               // hotspot radius [m]
    int n = 10;                     // hotspots (= SBSs)
    int m_bar = 5;                  // users per hotspot
    double P_m = 1.0;               // ABS transmit power [W] (30 dBm)
    double P_s = 1e-3;              // SBS transmit power [W] (0 dBm)
    double alpha_L = 2.0;
    double alpha_NL = 3.3;
    double alpha_assoc = 3.3;       // sub-6 GHz paging exponent
    double beta = 1e7;              // path loss at 1 m (70 dB)
    double G = 63.09573444801933;   // main-lobe gain (18 dB)
    double mu = 30.0;               // LOS range constant [m]
    int m_L = 2;
    int m_NL = 3;
    double W = 300e6;               // total mmWave bandwidth [Hz]
    double eta = 0.5;               // backhaul fraction
    double noise_figure_db = 10.0;
    double noise_psd_dbm_hz = -174.0;
    double rho = 50e6;              // rate threshold [bit/s]

    QuadratureSpec quad;
    MonteCarloSpec mc;

    double k_p() const;
    double W_b() const { return eta * W; }
    double W_a() const { return W - W_b(); }
    // N0 * W in watts.
    double noise_power() const;

    // Throws ConfigError naming the first violated invariant. eta = 1 is
    // accepted as the degenerate no-access split.
    void validate() const;
};

SystemParams default_params();

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace iab

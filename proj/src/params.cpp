#include "iab/params.hpp"

#include <cmath>

namespace iab {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }
double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

SystemParams default_params() { return SystemParams{}; }

double SystemParams::k_p() const { return std::pow(P_s / P_m, 1.0 / alpha_assoc); }

double SystemParams::noise_power() const {
    return dbm_to_watts(noise_psd_dbm_hz + 10.0 * std::log10(W) + noise_figure_db);
}

namespace {

void require(bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
}

}  // namespace

// Keys are the config-file names.
void SystemParams::validate() const {
    require(std::isfinite(R) && R > 0, "R_m", "must be positive");
    require(std::isfinite(R_s) && R_s > 0 && R_s < R, "R_s_m", "must satisfy 0 < R_s < R");
    require(n >= 1, "n", "must be >= 1");
    require(m_bar >= 1, "m_bar", "must be >= 1");
    require(P_s > 0, "P_s_dbm", "must be positive");
    require(P_m > P_s, "P_m_dbm", "must exceed P_s");
    require(alpha_L > 0, "alpha_L", "must be positive");
    require(alpha_NL > 0, "alpha_NL", "must be positive");
    require(alpha_assoc > 0, "alpha_assoc", "must be positive");
    require(beta > 0, "beta_db", "must be positive");
    require(G > 0, "G_db", "must be positive");
    require(mu > 0, "mu_m", "must be positive");
    require(m_L >= 1, "m_L", "must be a positive integer");
    require(m_NL >= 1, "m_NL", "must be a positive integer");
    require(std::isfinite(W) && W > 0, "W_hz", "must be positive");
    require(eta >= 0 && eta <= 1, "eta", "must lie in [0, 1]");
    require(std::isfinite(noise_figure_db), "noise_figure_db", "must be finite");
    require(rho >= 0, "rho_bps", "must be non-negative");
    require(quad.x_nodes >= 16, "quadrature.x_nodes", "must be >= 16");
    require(quad.u_nodes >= 16, "quadrature.u_nodes", "must be >= 16");
    require(quad.xi_nodes >= 16, "quadrature.xi_nodes", "must be >= 16");
    require(quad.t_nodes >= 16, "quadrature.t_nodes", "must be >= 16");
    require(quad.tolerance > 0, "quadrature.tolerance", "must be positive");
    require(mc.trials >= 1, "monte_carlo.trials", "must be >= 1");
    require(mc.threads >= 1, "monte_carlo.threads", "must be >= 1");
    const double kp = k_p();
    require(kp > 0 && kp < 1, "P_s_dbm", "power ratio must give 0 < k_p < 1");
}

}  // namespace iab

#include <doctest.h>

#include <cmath>

#include "iab/params.hpp"

using namespace iab;

TEST_CASE("defaults mirror the parameter table") {
    const SystemParams p = default_params();
    CHECK(p.R == 40.0);
    CHECK(p.R_s == 5.0);
    CHECK(p.n == 10);
    CHECK(watts_to_dbm(p.P_m) == doctest::Approx(30.0));
    CHECK(watts_to_dbm(p.P_s) == doctest::Approx(0.0));
    CHECK(p.alpha_L == 2.0);
    CHECK(p.alpha_NL == 3.3);
    CHECK(linear_to_db(p.beta) == doctest::Approx(70.0));
    CHECK(linear_to_db(p.G) == doctest::Approx(18.0));
    CHECK(p.mu == 30.0);
    CHECK(p.m_L == 2);
    CHECK(p.m_NL == 3);
    CHECK(p.rho == 50e6);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("k_p is the power ratio root") {
    const SystemParams p = default_params();
    CHECK(p.k_p() == doctest::Approx(std::pow(1e-3, 1.0 / 3.3)).epsilon(1e-14));
    CHECK(p.k_p() > 0.0);
    CHECK(p.k_p() < 1.0);
}

TEST_CASE("noise power follows the dBm chain") {
    SystemParams p = default_params();
    p.W = 300e6;
    const double dbm = -174.0 + 10.0 * std::log10(300e6) + 10.0;
    CHECK(watts_to_dbm(p.noise_power()) == doctest::Approx(dbm).epsilon(1e-12));
    p.W = 600e6;
    CHECK(watts_to_dbm(p.noise_power()) == doctest::Approx(dbm + 10.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("access and backhaul bandwidth add up to W") {
    SystemParams p = default_params();
    for (double W : {100e6, 300e6, 600e6, 1000e6, 123.456e6}) {
        for (int i = 0; i <= 100; ++i) {
            p.W = W;
            p.eta = i / 100.0;
            CHECK(p.W_a() + p.W_b() == W);
        }
    }
}

TEST_CASE("unit conversions round-trip") {
    for (double v : {-174.0, -30.0, 0.0, 18.0, 70.0}) {
        CHECK(linear_to_db(db_to_linear(v)) == doctest::Approx(v).epsilon(1e-12));
        CHECK(watts_to_dbm(dbm_to_watts(v)) == doctest::Approx(v).epsilon(1e-12));
    }
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
}

TEST_CASE("validation names the offending key") {
    auto key_of = [](const SystemParams& p) {
        try {
            p.validate();
        } catch (const ConfigError& e) {
            return e.key();
        }
        return std::string("<none>");
    };
    SystemParams p = default_params();
    p.R_s = 50.0;
    CHECK(key_of(p) == "R_s_m");
    p = default_params();
    p.n = 0;
    CHECK(key_of(p) == "n");
    p = default_params();
    p.m_bar = 0;
    CHECK(key_of(p) == "m_bar");
    p = default_params();
    p.eta = 1.2;
    CHECK(key_of(p) == "eta");
    p = default_params();
    p.eta = -0.1;
    CHECK(key_of(p) == "eta");
    p = default_params();
    p.P_s = 2.0;
    CHECK(key_of(p) == "P_m_dbm");
    p = default_params();
    p.quad.x_nodes = 8;
    CHECK(key_of(p) == "quadrature.x_nodes");
    p = default_params();
    p.quad.tolerance = 0.0;
    CHECK(key_of(p) == "quadrature.tolerance");
    p = default_params();
    p.m_L = 0;
    CHECK(key_of(p) == "m_L");
    p = default_params();
    p.eta = 1.0;
    CHECK(key_of(p) == "<none>");
}

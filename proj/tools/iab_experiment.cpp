// Command-line front end: coverage, rate-sweep, optimal-eta, validate and
// load-dist. Exit status is 0 on success, 1 when validation fails and 2 on a
// configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iab/analytics.hpp"
#include "iab/experiment.hpp"
#include "iab/load_dist.hpp"
#include "iab/simulator.hpp"

namespace fs = std::filesystem;
using namespace iab;
using namespace iab::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitConfigError = 2;

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<unsigned> threads;
    std::optional<std::string> out_dir;
    std::vector<double> etas;
    std::vector<double> bandwidths;
    std::vector<int> m_bars;
    std::vector<double> rhos;
    std::vector<std::string> strategies;
    std::optional<double> eta_step;
    std::optional<double> theta1;
    std::optional<double> theta2;
    std::optional<double> theta3;
    bool no_mc = false;
    bool check_quadrature = false;
    bool print_config = false;
};

void add_common_flags(CLI::App& app, Overrides& o) {
    app.add_option("-c,--config", o.config_path, "JSON config file");
    app.add_option("--seed", o.seed, "root seed");
    app.add_option("--trials", o.trials, "Monte-Carlo trials per point");
    app.add_option("--threads", o.threads, "worker threads");
    app.add_option("--out-dir", o.out_dir, "output directory");
    app.add_option("--eta", o.etas, "backhaul fractions")->delimiter(',');
    app.add_option("--W", o.bandwidths, "total bandwidths, Hz")->delimiter(',');
    app.add_option("--m-bar", o.m_bars, "users per hotspot")->delimiter(',');
    app.add_option("--rho", o.rhos, "rate thresholds, bit/s")->delimiter(',');
    app.add_option("--strategy", o.strategies, "equal, load-based")->delimiter(',');
    app.add_option("--eta-step", o.eta_step, "eta grid step");
    app.add_option("--theta1", o.theta1, "backhaul SNR threshold, linear");
    app.add_option("--theta2", o.theta2, "SBS access SNR threshold, linear");
    app.add_option("--theta3", o.theta3, "ABS access SNR threshold, linear");
    app.add_flag("--no-mc", o.no_mc, "skip Monte-Carlo estimates");
    app.add_flag("--check-quadrature", o.check_quadrature, "flag rows that move under node doubling");
    app.add_flag("--print-config", o.print_config, "print the effective config and exit");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig config = o.config_path.empty() ? default_config() : load_config(o.config_path);
    if (o.seed) config.params.mc.seed = *o.seed;
    if (o.trials) config.params.mc.trials = *o.trials;
    if (o.threads) config.params.mc.threads = *o.threads;
    if (o.out_dir) config.out_dir = *o.out_dir;
    if (o.eta_step) {
        config.eta_step = *o.eta_step;
        if (o.etas.empty()) config.etas = eta_grid(*o.eta_step);
    }
    if (!o.etas.empty()) config.etas = o.etas;
    if (!o.bandwidths.empty()) config.bandwidths = o.bandwidths;
    if (!o.m_bars.empty()) config.m_bars = o.m_bars;
    if (!o.rhos.empty()) config.rhos = o.rhos;
    if (!o.strategies.empty()) {
        config.strategies.clear();
        for (const std::string& s : o.strategies) config.strategies.push_back(analytics::parse_strategy(s));
    }
    if (o.theta1) config.thresholds.theta1 = *o.theta1;
    if (o.theta2) config.thresholds.theta2 = *o.theta2;
    if (o.theta3) config.thresholds.theta3 = *o.theta3;
    if (o.no_mc) config.monte_carlo = false;
    if (o.check_quadrature) config.check_quadrature = true;
    config.validate();
    return config;
}

fs::path prepare_out_dir(const ExperimentConfig& config) {
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output.dir", "cannot create " + dir.string() + ": " + ec.message());
    const fs::path probe = dir / ".write-probe";
    {
        std::ofstream out(probe);
        if (!out) throw ConfigError("output.dir", dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
    return dir;
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("output.dir", "cannot write " + path.string());
    return out;
}

int run_coverage(const ExperimentConfig& config) {
    const fs::path dir = prepare_out_dir(config);
    std::ofstream out = open_csv(dir / "coverage.csv");
    out << "W_hz,m_bar,theta1,theta2,theta3,pc_analytical,pc_mc,mc_se\n";
    std::uint64_t cell = 0;
    for (double W : config.bandwidths) {
        for (int m : config.m_bars) {
            const SystemParams p = point_params(config, W, m, config.params.eta);
            const double pc = analytics::coverage_probability(config.thresholds, p);
            char line[256];
            std::snprintf(line, sizeof line, "%.10g,%d,%.10g,%.10g,%.10g,%.17g,", W, m, config.thresholds.theta1,
                          config.thresholds.theta2, config.thresholds.theta3, pc);
            out << line;
            if (config.monte_carlo) {
                const sim::Estimate e =
                    sim::estimate_coverage(derive_seed(p.mc.seed, cell), p.mc.trials, config.thresholds, p);
                std::snprintf(line, sizeof line, "%.17g,%.17g", e.p, e.se);
                out << line;
                std::printf("W=%g m_bar=%d Pc=%.6f MC=%.6f (se %.6f)\n", W, m, pc, e.p, e.se);
            } else {
                out << ',';
                std::printf("W=%g m_bar=%d Pc=%.6f\n", W, m, pc);
            }
            out << '\n';
            ++cell;
        }
    }
    return kExitOk;
}

int run_rate_sweep(const ExperimentConfig& config) {
    const fs::path dir = prepare_out_dir(config);
    const auto records = run_sweep(config);
    std::ofstream out = open_csv(dir / "sweep.csv");
    write_sweep_csv(records, out);
    std::printf("%zu rows -> %s\n", records.size(), (dir / "sweep.csv").c_str());
    return kExitOk;
}

int run_optimal(const ExperimentConfig& config) {
    const fs::path dir = prepare_out_dir(config);
    const auto records = find_optimal_eta(config);
    std::ofstream out = open_csv(dir / "optimal.csv");
    write_optimal_csv(records, out);
    for (const OptimalRecord& r : records) {
        std::printf("%-10s W=%g m_bar=%d rho=%g eta*=%.4f Pr*=%.6f Pr(eta=0)=%.6f gain=%.6f\n",
                    analytics::to_string(r.strategy), r.W, r.m_bar, r.rho, r.eta_star, r.pr_star, r.pr_baseline,
                    r.iab_gain());
    }
    std::printf("eta grid step %g, golden-section refinement\n", config.eta_step);
    return kExitOk;
}

int run_validate(const ExperimentConfig& config) {
    const fs::path dir = prepare_out_dir(config);
    const ValidationReport report = validate(config);
    std::ofstream out = open_csv(dir / "validation.csv");
    write_validation_csv(report, out);
    for (const ValidationRow& row : report.rows) {
        const SweepRecord& r = row.record;
        std::printf("%-10s W=%g m_bar=%d eta=%.3f analytical=%.5f mc=%.5f diff=%.5f tol=%.5f %s\n",
                    analytics::to_string(r.strategy), r.W, r.m_bar, r.eta, r.pr, r.mc->p, row.abs_diff,
                    row.tolerance, to_string(row.verdict));
    }
    for (const LoadFidelity& lf : report.load) {
        std::printf("load m_bar=%d side=%s TV=%.5f %s\n", lf.m_bar, lf.side == load::Side::ABS ? "abs" : "sbs",
                    lf.total_variation, lf.pass ? "pass" : "fail");
    }
    const bool pass = report.pass();
    std::printf("%s\n", pass ? "PASS" : "FAIL");
    return pass ? kExitOk : kExitValidationFailed;
}

int run_load_dist(const ExperimentConfig& config) {
    const fs::path dir = prepare_out_dir(config);
    std::ofstream out = open_csv(dir / "load_dist.csv");
    out << "m_bar,side,k,exact,gaussian\n";
    for (int m : config.m_bars) {
        const SystemParams p = point_params(config, config.params.W, m, config.params.eta);
        if (p.n < 2) throw ConfigError("n", "load-dist needs at least two hotspots");
        const load::CltMoments mom = load::clt_moments(p);
        for (load::Side side : {load::Side::ABS, load::Side::SBS}) {
            const load::LoadDistribution exact = load::other_load_pmf_exact(side, p);
            const double mean = side == load::Side::ABS ? mom.mean_abs : mom.mean_sbs;
            const double var = side == load::Side::ABS ? mom.var_abs : mom.var_sbs;
            const load::LoadDistribution gauss = load::discretized_gaussian(mean, var, exact.support.back());
            const char* name = side == load::Side::ABS ? "abs" : "sbs";
            for (std::size_t i = 0; i < exact.support.size(); ++i) {
                char line[160];
                std::snprintf(line, sizeof line, "%d,%s,%d,%.17g,%.17g\n", m, name, exact.support[i],
                              exact.masses[i], gauss.masses[i]);
                out << line;
            }
            std::printf("m_bar=%d side=%s mean=%.6f var=%.6f TV=%.5f\n", m, name, mean, var,
                        load::total_variation(exact, gauss));
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IAB mmWave rate-coverage analysis and simulation"};
    app.require_subcommand(1);
    Overrides o;
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const ExperimentConfig&);
    };
    const Command commands[] = {
        {"coverage", "SNR coverage probability", run_coverage},
        {"rate-sweep", "rate coverage over the sweep grid", run_rate_sweep},
        {"optimal-eta", "optimal access/backhaul split", run_optimal},
        {"validate", "analytics against Monte-Carlo", run_validate},
        {"load-dist", "exact and Gaussian other-hotspot load", run_load_dist},
    };
    const Command* chosen = nullptr;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common_flags(*sub, o);
        sub->callback([&chosen, &c] { chosen = &c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        const ExperimentConfig config = resolve(o);
        if (o.print_config) {
            std::cout << to_json(config).dump(2) << '\n';
            return kExitOk;
        }
        return chosen->run(config);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
}

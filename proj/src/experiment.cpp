#include "iab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace iab::experiment {

using nlohmann::json;

namespace {

// Reads keys of one JSON object and rejects any it did not consume.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.is_null()) return;
        if (!doc.is_object()) throw ConfigError(name_, "expected an object");
        obj_ = &doc;
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) return;
        try {
            out = obj_->at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(qualified(key), "has the wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) return nullptr;
        return &obj_->at(key);
    }

    void finish() const {
        if (!obj_) return;
        for (const auto& item : obj_->items()) {
            if (!seen_.count(item.key())) throw ConfigError(qualified(item.key().c_str()), "unknown key");
        }
    }

    std::string qualified(const char* key) const { return name_.empty() ? key : name_ + "." + key; }

private:
    const json* obj_ = nullptr;
    std::string name_;
    std::set<std::string> seen_;
};

const json& section_of(const json& doc, const char* key) {
    static const json null;
    return doc.contains(key) ? doc.at(key) : null;
}

std::string format_number(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string prob(double v) { return format_number("%.17g", v); }
std::string num(double v) { return format_number("%.10g", v); }

// Dispatches jobs [0, count) to a bounded pool; job(i) writes slot i only.
template <class Job>
void run_pool(std::size_t count, unsigned threads, const Job& job) {
    const unsigned workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, count)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) job(i);
    };
    if (workers == 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
}

struct SweepPoint {
    PartitionStrategy strategy;
    double W;
    int m_bar;
    double rho;
    double eta;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
    std::vector<SweepPoint> points;
    for (PartitionStrategy s : config.strategies)
        for (double W : config.bandwidths)
            for (int m : config.m_bars)
                for (double rho : config.rhos)
                    for (double eta : config.etas) points.push_back({s, W, m, rho, eta});
    return points;
}

SweepRecord evaluate_point(const ExperimentConfig& config, const SweepPoint& point) {
    SweepRecord rec;
    rec.strategy = point.strategy;
    rec.eta = point.eta;
    rec.W = point.W;
    rec.m_bar = point.m_bar;
    rec.rho = point.rho;

    SystemParams p = point_params(config, point.W, point.m_bar, point.eta);
    p.mc.threads = 1;
    try {
        const analytics::RateCoverage rc = analytics::rate_coverage(point.rho, p, point.strategy);
        rec.pr_m = rc.pr_m;
        rec.pr_s = rc.pr_s;
        rec.pr = rec.pr_m + rec.pr_s;
        if (rc.leaked_mass > p.quad.tolerance) rec.quad_flag = "leak";
        if (config.check_quadrature) {
            const auto check = analytics::check_convergence(
                [&](const SystemParams& q) { return analytics::rate_coverage(point.rho, q, point.strategy).pr; },
                p);
            if (check.change() > p.quad.tolerance) rec.quad_flag = "unconverged";
        }
    } catch (const std::exception& e) {
        std::string what = e.what();
        std::replace(what.begin(), what.end(), ',', ';');
        rec.quad_flag = "error: " + what;
    }
    return rec;
}

}  // namespace

std::vector<double> eta_grid(double step, bool include_one) {
    std::vector<double> grid;
    const int steps = static_cast<int>(std::llround(1.0 / step));
    for (int i = 0; i <= steps; ++i) {
        const double eta = std::min(1.0, i * step);
        if (eta >= 1.0 && !include_one) break;
        grid.push_back(std::round(eta * 1e12) / 1e12);
    }
    return grid;
}

ExperimentConfig default_config() {
    ExperimentConfig config;
    config.etas = eta_grid(config.eta_step);
    config.bandwidths = {config.params.W};
    config.m_bars = {config.params.m_bar};
    config.rhos = {config.params.rho};
    return config;
}

void ExperimentConfig::validate() const {
    params.validate();
    if (etas.empty()) throw ConfigError("sweep.eta", "must not be empty");
    for (double eta : etas)
        if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("sweep.eta", "values must lie in [0, 1]");
    if (bandwidths.empty()) throw ConfigError("sweep.W_hz", "must not be empty");
    for (double W : bandwidths)
        if (!(W > 0.0 && std::isfinite(W))) throw ConfigError("sweep.W_hz", "values must be positive");
    if (m_bars.empty()) throw ConfigError("sweep.m_bar", "must not be empty");
    for (int m : m_bars)
        if (m < 1) throw ConfigError("sweep.m_bar", "values must be >= 1");
    if (rhos.empty()) throw ConfigError("sweep.rho_bps", "must not be empty");
    for (double rho : rhos)
        if (!(rho >= 0.0 && std::isfinite(rho))) throw ConfigError("sweep.rho_bps", "values must be >= 0");
    if (strategies.empty()) throw ConfigError("sweep.strategies", "must not be empty");
    if (!(eta_step > 0.0 && eta_step < 1.0)) throw ConfigError("sweep.eta_step", "must lie in (0, 1)");
    for (double theta : {thresholds.theta1, thresholds.theta2, thresholds.theta3})
        if (!(theta >= 0.0)) throw ConfigError("coverage", "thresholds must be >= 0");
    if (out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_null() && !doc.is_object()) throw ConfigError("<root>", "expected an object");
    ExperimentConfig config;
    SystemParams& p = config.params;

    Section root(doc, "");
    root.child("system");
    root.child("quadrature");
    root.child("monte_carlo");
    root.child("sweep");
    root.child("coverage");
    root.child("output");
    root.finish();

    Section sys(section_of(doc, "system"), "system");
    double P_m_dbm = watts_to_dbm(p.P_m);
    double P_s_dbm = watts_to_dbm(p.P_s);
    double beta_db = linear_to_db(p.beta);
    double G_db = linear_to_db(p.G);
    sys.read("R_m", p.R);
    sys.read("R_s_m", p.R_s);
    sys.read("n", p.n);
    sys.read("m_bar", p.m_bar);
    sys.read("P_m_dbm", P_m_dbm);
    sys.read("P_s_dbm", P_s_dbm);
    sys.read("alpha_L", p.alpha_L);
    sys.read("alpha_NL", p.alpha_NL);
    sys.read("alpha_assoc", p.alpha_assoc);
    sys.read("beta_db", beta_db);
    sys.read("G_db", G_db);
    sys.read("mu_m", p.mu);
    sys.read("m_L", p.m_L);
    sys.read("m_NL", p.m_NL);
    sys.read("W_hz", p.W);
    sys.read("eta", p.eta);
    sys.read("noise_figure_db", p.noise_figure_db);
    sys.read("noise_psd_dbm_hz", p.noise_psd_dbm_hz);
    sys.read("rho_bps", p.rho);
    sys.finish();
    p.P_m = dbm_to_watts(P_m_dbm);
    p.P_s = dbm_to_watts(P_s_dbm);
    p.beta = db_to_linear(beta_db);
    p.G = db_to_linear(G_db);

    Section quad(section_of(doc, "quadrature"), "quadrature");
    quad.read("x_nodes", p.quad.x_nodes);
    quad.read("u_nodes", p.quad.u_nodes);
    quad.read("xi_nodes", p.quad.xi_nodes);
    quad.read("t_nodes", p.quad.t_nodes);
    quad.read("tolerance", p.quad.tolerance);
    quad.finish();

    Section mc(section_of(doc, "monte_carlo"), "monte_carlo");
    mc.read("trials", p.mc.trials);
    mc.read("seed", p.mc.seed);
    mc.read("threads", p.mc.threads);
    mc.finish();

    Section sweep(section_of(doc, "sweep"), "sweep");
    sweep.read("eta_step", config.eta_step);
    config.etas = eta_grid(config.eta_step);
    config.bandwidths = {p.W};
    config.m_bars = {p.m_bar};
    config.rhos = {p.rho};
    sweep.read("eta", config.etas);
    sweep.read("W_hz", config.bandwidths);
    sweep.read("m_bar", config.m_bars);
    sweep.read("rho_bps", config.rhos);
    std::vector<std::string> strategies;
    sweep.read("strategies", strategies);
    if (!strategies.empty()) {
        config.strategies.clear();
        for (const std::string& s : strategies) config.strategies.push_back(analytics::parse_strategy(s));
    }
    sweep.read("monte_carlo", config.monte_carlo);
    sweep.read("check_quadrature", config.check_quadrature);
    sweep.finish();

    Section cov(section_of(doc, "coverage"), "coverage");
    cov.read("theta1", config.thresholds.theta1);
    cov.read("theta2", config.thresholds.theta2);
    cov.read("theta3", config.thresholds.theta3);
    cov.finish();

    Section out(section_of(doc, "output"), "output");
    out.read("dir", config.out_dir);
    out.finish();

    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
        return parse_config(json::object());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& config) {
    const SystemParams& p = config.params;
    json doc;
    doc["system"] = {
        {"R_m", p.R},
        {"R_s_m", p.R_s},
        {"n", p.n},
        {"m_bar", p.m_bar},
        {"P_m_dbm", watts_to_dbm(p.P_m)},
        {"P_s_dbm", watts_to_dbm(p.P_s)},
        {"alpha_L", p.alpha_L},
        {"alpha_NL", p.alpha_NL},
        {"alpha_assoc", p.alpha_assoc},
        {"beta_db", linear_to_db(p.beta)},
        {"G_db", linear_to_db(p.G)},
        {"mu_m", p.mu},
        {"m_L", p.m_L},
        {"m_NL", p.m_NL},
        {"W_hz", p.W},
        {"eta", p.eta},
        {"noise_figure_db", p.noise_figure_db},
        {"noise_psd_dbm_hz", p.noise_psd_dbm_hz},
        {"rho_bps", p.rho},
    };
    doc["quadrature"] = {{"x_nodes", p.quad.x_nodes},
                         {"u_nodes", p.quad.u_nodes},
                         {"xi_nodes", p.quad.xi_nodes},
                         {"t_nodes", p.quad.t_nodes},
                         {"tolerance", p.quad.tolerance}};
    doc["monte_carlo"] = {{"trials", p.mc.trials}, {"seed", p.mc.seed}, {"threads", p.mc.threads}};
    std::vector<std::string> strategies;
    for (PartitionStrategy s : config.strategies) strategies.emplace_back(analytics::to_string(s));
    doc["sweep"] = {{"eta", config.etas},
                    {"W_hz", config.bandwidths},
                    {"m_bar", config.m_bars},
                    {"rho_bps", config.rhos},
                    {"strategies", strategies},
                    {"eta_step", config.eta_step},
                    {"monte_carlo", config.monte_carlo},
                    {"check_quadrature", config.check_quadrature}};
    doc["coverage"] = {{"theta1", config.thresholds.theta1},
                       {"theta2", config.thresholds.theta2},
                       {"theta3", config.thresholds.theta3}};
    doc["output"] = {{"dir", config.out_dir}};
    return doc;
}

SystemParams point_params(const ExperimentConfig& config, double W, int m_bar, double eta) {
    SystemParams p = config.params;
    p.W = W;
    p.m_bar = m_bar;
    p.eta = eta;
    return p;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config) {
    const std::vector<SweepPoint> points = sweep_points(config);
    std::vector<SweepRecord> records(points.size());
    run_pool(points.size(), config.params.mc.threads,
             [&](std::size_t i) { records[i] = evaluate_point(config, points[i]); });
    if (!config.monte_carlo) return records;

    // Every (strategy, eta) pair of one (W, m_bar, rho) cell shares the same
    // realizations; the cell index picks the seed.
    std::uint64_t cell = 0;
    for (double W : config.bandwidths) {
        for (int m : config.m_bars) {
            for (double rho : config.rhos) {
                std::vector<sim::SplitPoint> split;
                std::vector<std::size_t> index;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    if (points[i].W == W && points[i].m_bar == m && points[i].rho == rho) {
                        split.push_back({points[i].eta, points[i].strategy});
                        index.push_back(i);
                    }
                }
                const SystemParams p = point_params(config, W, m, config.params.eta);
                const auto est = sim::estimate_rate_coverage_batch(derive_seed(p.mc.seed, cell++), p.mc.trials,
                                                                   rho, split, p);
                for (std::size_t j = 0; j < index.size(); ++j) records[index[j]].mc = est[j];
            }
        }
    }
    return records;
}

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRecord& r : records) {
        out << analytics::to_string(r.strategy) << ',' << num(r.eta) << ',' << num(r.W) << ',' << r.m_bar << ','
            << num(r.rho) << ',' << prob(r.pr) << ',' << prob(r.pr_m) << ',' << prob(r.pr_s) << ',';
        if (r.mc) out << prob(r.mc->p) << ',' << prob(r.mc->se);
        else out << ',';
        out << ',' << r.quad_flag << '\n';
    }
}

std::vector<OptimalRecord> find_optimal_eta(const ExperimentConfig& config) {
    struct Job {
        PartitionStrategy strategy;
        double W;
        int m_bar;
        double rho;
    };
    std::vector<Job> jobs;
    for (PartitionStrategy s : config.strategies)
        for (double W : config.bandwidths)
            for (int m : config.m_bars)
                for (double rho : config.rhos) jobs.push_back({s, W, m, rho});

    std::vector<OptimalRecord> records(jobs.size());
    run_pool(jobs.size(), config.params.mc.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        const SystemParams p = point_params(config, job.W, job.m_bar, 0.0);
        const analytics::OptimalSplit best = analytics::optimal_eta(job.rho, p, job.strategy, config.eta_step);
        OptimalRecord& rec = records[i];
        rec.strategy = job.strategy;
        rec.W = job.W;
        rec.m_bar = job.m_bar;
        rec.rho = job.rho;
        rec.eta_star = best.eta;
        rec.pr_star = best.pr;
        rec.pr_baseline = analytics::rate_coverage(job.rho, p, job.strategy).pr;
    });
    return records;
}

void write_optimal_csv(const std::vector<OptimalRecord>& records, std::ostream& out) {
    out << "strategy,W_hz,m_bar,rho_bps,eta_star,pr_star,pr_baseline,iab_gain\n";
    for (const OptimalRecord& r : records) {
        out << analytics::to_string(r.strategy) << ',' << num(r.W) << ',' << r.m_bar << ',' << num(r.rho) << ','
            << prob(r.eta_star) << ',' << prob(r.pr_star) << ',' << prob(r.pr_baseline) << ','
            << prob(r.iab_gain()) << '\n';
    }
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::InsufficientPrecision: return "insufficient-precision";
    }
    return "?";
}

bool ValidationReport::pass() const {
    for (const ValidationRow& row : rows)
        if (row.verdict == Verdict::Fail) return false;
    for (const LoadFidelity& lf : load)
        if (!lf.pass) return false;
    return true;
}

ValidationReport validate(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    cfg.monte_carlo = true;
    ValidationReport report;
    for (SweepRecord& rec : run_sweep(cfg)) {
        ValidationRow row;
        row.abs_diff = std::abs(rec.pr - rec.mc->p);
        row.tolerance = 3.0 * (rec.mc->se + kQuadratureSlack);
        if (rec.mc->trials < kMinValidationTrials) row.verdict = Verdict::InsufficientPrecision;
        else row.verdict = row.abs_diff <= row.tolerance ? Verdict::Pass : Verdict::Fail;
        row.record = std::move(rec);
        report.rows.push_back(std::move(row));
    }
    for (int m : cfg.m_bars) {
        SystemParams p = point_params(cfg, cfg.params.W, m, cfg.params.eta);
        if (p.n < 2 || static_cast<long>(p.n - 1) * m > load::kMaxExactSupport) continue;
        const load::CltMoments mom = load::clt_moments(p);
        for (load::Side side : {load::Side::ABS, load::Side::SBS}) {
            const load::LoadDistribution exact = load::other_load_pmf_exact(side, p);
            const double mean = side == load::Side::ABS ? mom.mean_abs : mom.mean_sbs;
            const double var = side == load::Side::ABS ? mom.var_abs : mom.var_sbs;
            const load::LoadDistribution gauss =
                load::discretized_gaussian(mean, var, exact.support.back());
            LoadFidelity lf;
            lf.m_bar = m;
            lf.side = side;
            lf.total_variation = load::total_variation(exact, gauss);
            lf.pass = lf.total_variation < kMaxLoadTotalVariation;
            report.load.push_back(lf);
        }
    }
    return report;
}

void write_validation_csv(const ValidationReport& report, std::ostream& out) {
    out << "strategy,eta,W_hz,m_bar,rho_bps,pr_analytical,pr_mc,mc_se,abs_diff,tolerance,verdict\n";
    for (const ValidationRow& row : report.rows) {
        const SweepRecord& r = row.record;
        out << analytics::to_string(r.strategy) << ',' << num(r.eta) << ',' << num(r.W) << ',' << r.m_bar << ','
            << num(r.rho) << ',' << prob(r.pr) << ',' << prob(r.mc->p) << ',' << prob(r.mc->se) << ','
            << prob(row.abs_diff) << ',' << prob(row.tolerance) << ',' << to_string(row.verdict) << '\n';
    }
}

}  // namespace iab::experiment

#include "fluxbvp/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fluxbvp/analysis.hpp"
#include "fluxbvp/classify.hpp"
#include "fluxbvp/integrator.hpp"
#include "fluxbvp/io.hpp"
#include "fluxbvp/shooting.hpp"
#include "fluxbvp/verify.hpp"

namespace fluxbvp::cli {

namespace {

constexpr const char* kEnvPrefix = "FLUXBVP_";

const std::vector<std::string> kKeys = {
    "g",       "beta",      "coeffs",   "delta",    "a",
    "c",       "b",         "t_max",    "abs_tol",  "rel_tol",
    "blowup_threshold",     "zero_eps", "event_tol", "bisect_tol",
    "max_bisect_iters",     "override", "out",      "out_t_end",
    "out_samples",          "b_lo",     "b_hi",     "n",
    "m",
};

std::string hyphenated(const std::string& key) {
    std::string out = key;
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

double parse_double_value(const std::string& key, const std::string& val) {
    const char* begin = val.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw std::invalid_argument("config key '" + key + "': bad number '" + val + "'");
    return v;
}

int parse_int_value(const std::string& key, const std::string& val) {
    const double v = parse_double_value(key, val);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument("config key '" + key + "': expected integer, got '" + val + "'");
    return i;
}

bool parse_bool_value(const std::string& key, const std::string& val) {
    std::string low = val;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (low == "true" || low == "1" || low == "yes") return true;
    if (low == "false" || low == "0" || low == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected boolean, got '" + val + "'");
}

std::optional<double> maybe_double(const std::map<std::string, std::string>& cfg,
                                   const std::string& key) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    return parse_double_value(key, it->second);
}

void validate_keys(const std::map<std::string, std::string>& layer,
                   const std::string& origin) {
    for (const auto& [k, v] : layer)
        if (std::find(kKeys.begin(), kKeys.end(), k) == kKeys.end())
            throw std::invalid_argument(origin + ": unknown config key '" + k + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

std::string env_name_for_key(const std::string& key) {
    std::string out = kEnvPrefix;
    for (char ch : key)
        out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

const std::map<std::string, std::map<std::string, std::string>>& presets() {
    static const std::map<std::string, std::map<std::string, std::string>> table = {
        {"oracle",
         {{"g", "oracle-cubic"},
          {"a", "1"},
          {"c", "-0.25"},
          {"b", "-0.5"},
          {"out_t_end", "0.96"},
          {"out_samples", "97"}}},
        {"paper-b1-empty",
         {{"g", "quadratic"},
          {"beta", "1"},
          {"a", "-1"},
          {"c", "-1"},
          {"b", "5"},
          {"override", "true"}}},
        {"default-shoot",
         {{"g", "quadratic"},
          {"beta", "0.5"},
          {"a", "0"},
          {"c", "-1"},
          {"b", "0"}}},
    };
    return table;
}

std::map<std::string, std::string> resolve_config(
    const std::map<std::string, std::string>& preset_layer,
    const std::map<std::string, std::string>& file_layer,
    const std::map<std::string, std::string>& env_layer,
    const std::map<std::string, std::string>& flag_layer) {
    validate_keys(preset_layer, "preset");
    validate_keys(file_layer, "config file");
    validate_keys(env_layer, "environment");
    validate_keys(flag_layer, "flags");
    std::map<std::string, std::string> out;
    for (const auto* layer : {&preset_layer, &file_layer, &env_layer, &flag_layer})
        for (const auto& [k, v] : *layer) out[k] = v;
    return out;
}

std::map<std::string, std::string> env_layer_from_process() {
    std::map<std::string, std::string> out;
    for (const std::string& key : kKeys)
        if (const char* val = std::getenv(env_name_for_key(key).c_str()))
            out[key] = val;
    return out;
}

double require_double(const std::map<std::string, std::string>& cfg,
                      const std::string& key) {
    const auto it = cfg.find(key);
    if (it == cfg.end())
        throw std::invalid_argument("missing required config key: " + key);
    return parse_double_value(key, it->second);
}

SolverControls controls_from_config(const std::map<std::string, std::string>& cfg) {
    SolverControls ctl;
    if (auto v = maybe_double(cfg, "abs_tol")) ctl.abs_tol = *v;
    if (auto v = maybe_double(cfg, "rel_tol")) ctl.rel_tol = *v;
    if (auto v = maybe_double(cfg, "t_max")) ctl.t_max = *v;
    if (auto v = maybe_double(cfg, "blowup_threshold")) ctl.blowup_threshold = *v;
    if (auto v = maybe_double(cfg, "zero_eps")) ctl.zero_eps = *v;
    if (auto v = maybe_double(cfg, "event_tol")) ctl.event_tol = *v;
    if (auto v = maybe_double(cfg, "bisect_tol")) ctl.bisect_tol = *v;
    if (auto it = cfg.find("max_bisect_iters"); it != cfg.end())
        ctl.max_bisect_iters = parse_int_value("max_bisect_iters", it->second);
    if (auto it = cfg.find("override"); it != cfg.end())
        ctl.shoot_override = parse_bool_value("override", it->second);
    ctl.validate();
    return ctl;
}

ProblemSpec problem_from_config(const std::map<std::string, std::string>& cfg) {
    ProblemSpec p;
    p.controls = controls_from_config(cfg);

    std::string gname = "quadratic";
    if (auto it = cfg.find("g"); it != cfg.end()) gname = it->second;
    if (gname == "quadratic") {
        p.g = GSpec::quadratic(require_double(cfg, "beta"));
    } else if (gname == "oracle-cubic") {
        p.g = GSpec::oracle_cubic();
    } else if (gname == "poly") {
        const auto it = cfg.find("coeffs");
        if (it == cfg.end())
            throw std::invalid_argument("missing required config key: coeffs");
        std::vector<double> coeffs;
        std::istringstream in(it->second);
        std::string tok;
        while (std::getline(in, tok, ','))
            coeffs.push_back(parse_double_value("coeffs", tok));
        p.g = GSpec::polynomial(std::move(coeffs));
    } else {
        throw std::invalid_argument(
            "config key 'g': expected quadratic, oracle-cubic or poly");
    }
    if (auto v = maybe_double(cfg, "delta")) p.g = p.g.with_delta_margin(*v);

    p.a = require_double(cfg, "a");
    p.c = require_double(cfg, "c");
    p.validate();
    return p;
}

namespace {

std::string classification_line(const Classification& cls) {
    switch (cls.kind) {
        case Classification::Kind::TypeI:
            return std::string("type=I bounded_hint=") +
                   (cls.bounded_hint ? "true" : "false");
        case Classification::Kind::TypeII:
            return "type=II t0=" + io::fmt_shortest(cls.t0);
        default:
            return "type=inconclusive reason=" + cls.reason;
    }
}

std::string termination_line(const Trajectory& traj) {
    switch (traj.termination.kind) {
        case TerminationKind::ReachedTmax:
            return "termination=t_max t=" + io::fmt_shortest(traj.termination.value);
        case TerminationKind::ZeroCrossing:
            return "termination=zero-crossing t0=" +
                   io::fmt_shortest(traj.termination.value);
        case TerminationKind::BlowUp:
            return "termination=blow-up Tb_est=" +
                   io::fmt_shortest(traj.termination.value);
    }
    return "termination=unknown";
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
    io::write_atomic(path, io::report_to_text(kv));
    io::write_atomic(path + ".json", io::report_to_json(kv));
}

int cmd_solve(const std::map<std::string, std::string>& cfg, std::ostream& out) {
    const ProblemSpec problem = problem_from_config(cfg);
    const double b = require_double(cfg, "b");
    const Trajectory traj = integrate(problem, b);

    double t_end = traj.final_time();
    if (auto v = maybe_double(cfg, "out_t_end")) t_end = std::min(*v, t_end);
    int n = 201;
    if (auto it = cfg.find("out_samples"); it != cfg.end())
        n = parse_int_value("out_samples", it->second);
    if (n < 1) throw std::invalid_argument("config key 'out_samples': must be >= 1");

    std::string path = "trajectory.csv";
    if (auto it = cfg.find("out"); it != cfg.end()) path = it->second;
    io::write_atomic(path, io::samples_to_csv(io::resample_uniform(traj, t_end, n)));

    out << classification_line(classify(traj)) << "\n"
        << termination_line(traj) << "\n"
        << "out=" << path << "\n";
    if (traj.step_underflow) {
        out << "step_underflow=true\n";
        return kExitStepUnderflow;
    }
    return kExitOk;
}

int cmd_shoot(const std::map<std::string, std::string>& cfg, std::ostream& out) {
    const ProblemSpec problem = problem_from_config(cfg);
    const BStarResult result = find_bstar(problem);

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("g", problem.g.describe());
    kv.emplace_back("a", io::fmt_shortest(problem.a));
    kv.emplace_back("c", io::fmt_shortest(problem.c));
    kv.emplace_back("b_star", io::fmt_shortest(result.b_star));
    kv.emplace_back("b_lo", io::fmt_shortest(result.b_lo));
    kv.emplace_back("b_hi", io::fmt_shortest(result.b_hi));
    kv.emplace_back("bracket_width", io::fmt_shortest(result.b_hi - result.b_lo));
    kv.emplace_back("mu", io::fmt_shortest(result.mu));
    kv.emplace_back("iterations", std::to_string(result.iterations));
    for (const CheckResult& chk : result.diagnostics)
        kv.emplace_back("check." + chk.name, chk.passed ? "pass" : "fail");

    // Tail diagnostics on the critical trajectory.
    try {
        const CriticalTrajectory crit = critical_trajectory(problem, result);
        kv.emplace_back("check." + crit.bound_check.name,
                        crit.bound_check.passed ? "pass" : "fail");
        const TailFit fit = fit_exponential_tail(crit.traj);
        kv.emplace_back("tail.mu_hat", io::fmt_shortest(fit.mu_hat));
        kv.emplace_back("tail.rate_hat", io::fmt_shortest(fit.rate_hat));
        kv.emplace_back("tail.A_hat", io::fmt_shortest(fit.A_hat));
    } catch (const SolverError& e) {
        kv.emplace_back("tail.error", e.what());
    }

    std::string path = "bstar_report.txt";
    if (auto it = cfg.find("out"); it != cfg.end()) path = it->second;
    write_report(path, kv);

    out << "b_star=" << io::fmt_shortest(result.b_star) << "\n"
        << "mu=" << io::fmt_shortest(result.mu) << "\n"
        << "out=" << path << "\n";
    return kExitOk;
}

int cmd_sweep(const std::map<std::string, std::string>& cfg, std::ostream& out) {
    const ProblemSpec problem = problem_from_config(cfg);
    const double b_lo = require_double(cfg, "b_lo");
    const double b_hi = require_double(cfg, "b_hi");
    const auto it_n = cfg.find("n");
    if (it_n == cfg.end())
        throw std::invalid_argument("missing required config key: n");
    const int n = parse_int_value("n", it_n->second);
    if (n < 1 || b_hi < b_lo || (n == 1 && b_hi != b_lo))
        throw std::invalid_argument("invalid sweep grid (need n >= 1 and b_hi >= b_lo)");

    std::string csv = "b,type,t0,Tb_est,bounded_hint\n";
    bool monotone = true;
    bool seen_type_one = false;
    for (int i = 0; i < n; ++i) {
        const double b =
            n == 1 ? b_lo : b_lo + (b_hi - b_lo) * static_cast<double>(i) / (n - 1);
        const ClassifiedRun run = classify_slope(problem, b);
        csv += io::fmt17(b);
        if (run.cls.is_type_two()) {
            if (seen_type_one) monotone = false;
            csv += ",II," + io::fmt17(run.cls.t0) + ",";
            if (run.cls.Tb_est) csv += io::fmt17(*run.cls.Tb_est);
            csv += ",";
        } else if (run.cls.is_type_one()) {
            seen_type_one = true;
            csv += ",I,,,";
            csv += run.cls.bounded_hint ? "true" : "false";
        } else {
            csv += ",inconclusive,,,";
        }
        csv += "\n";
    }

    std::string path = "sweep.csv";
    if (auto it = cfg.find("out"); it != cfg.end()) path = it->second;
    io::write_atomic(path, csv);
    out << "rows=" << n << "\n"
        << "monotone=" << (monotone ? "true" : "false") << "\n"
        << "out=" << path << "\n";
    return kExitOk;
}

int cmd_transform(const std::map<std::string, std::string>& cfg, std::ostream& out) {
    const double m = require_double(cfg, "m");
    double beta = 0.0;
    try {
        beta = map_m_to_beta(m);
    } catch (const OutOfRange& e) {
        throw std::invalid_argument(e.what());
    }
    const double a = require_double(cfg, "a");
    const double k = std::sqrt(m + 2.0);

    // The m-problem fixes f''(0) = -1; the equivalent beta-problem takes the
    // scaled data (a k, -1/k).
    std::map<std::string, std::string> scaled = cfg;
    scaled["g"] = "quadratic";
    scaled["beta"] = io::fmt_shortest(beta);
    scaled["a"] = io::fmt_shortest(a * k);
    scaled["c"] = io::fmt_shortest(-1.0 / k);
    const ProblemSpec problem = problem_from_config(scaled);

    const BStarResult result = find_bstar(problem);
    const Trajectory traj = integrate(problem, result.b_star);
    const double residual = m_form_residual(traj, m);

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("m", io::fmt_shortest(m));
    kv.emplace_back("beta", io::fmt_shortest(beta));
    kv.emplace_back("a", io::fmt_shortest(a));
    // The slope is invariant under the proof's scaling, so the critical slope
    // is the same number in both parameterizations.
    kv.emplace_back("b_star_beta_problem", io::fmt_shortest(result.b_star));
    kv.emplace_back("b_star_m_problem", io::fmt_shortest(result.b_star));
    kv.emplace_back("m_equation_residual", io::fmt_shortest(residual));

    std::string path = "transform_report.txt";
    if (auto it = cfg.find("out"); it != cfg.end()) path = it->second;
    write_report(path, kv);

    out << "m=" << io::fmt_shortest(m) << "\n"
        << "beta=" << io::fmt_shortest(beta) << "\n"
        << "b_star=" << io::fmt_shortest(result.b_star) << "\n"
        << "m_equation_residual=" << io::fmt_shortest(residual) << "\n"
        << "out=" << path << "\n";
    return kExitOk;
}

int cmd_verify(const std::map<std::string, std::string>& cfg, bool list_only,
               const std::vector<int>& only, std::ostream& out) {
    if (list_only) {
        for (const std::string& name : verify::criteria_names()) out << name << "\n";
        return kExitOk;
    }
    verify::Options opts;
    opts.base = controls_from_config(cfg);
    opts.only = only;
    const auto results = verify::run_all(opts, out);
    return verify::all_passed(results) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shooting solver and certification harness for the similarity "
                 "boundary value problem f''' + f f'' + g(f') = 0"};
    app.require_subcommand(1);

    std::string config_path, preset_name;
    std::map<std::string, std::string> flag_layer;
    bool list_only = false;
    std::vector<int> only;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value configuration file");
        cmd->add_option("--preset", preset_name,
                        "built-in preset (oracle, paper-b1-empty, default-shoot)");
        for (const std::string& key : kKeys) {
            cmd->add_option_function<std::string>(
                "--" + hyphenated(key),
                [&flag_layer, key](const std::string& v) { flag_layer[key] = v; });
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "integrate one trajectory, emit CSV");
    CLI::App* shoot = app.add_subcommand("shoot", "locate the critical slope b_star");
    CLI::App* sweep = app.add_subcommand("sweep", "classify a grid of slopes");
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    CLI::App* transform = app.add_subcommand("transform", "solve the m-parameterized problem");
    for (CLI::App* cmd : {solve, shoot, sweep, verify_cmd, transform}) add_common(cmd);
    verify_cmd->add_flag("--list", list_only, "list criteria without running");
    verify_cmd->add_option("--only", only, "run only these criterion numbers");

    std::vector<const char*> argv;
    argv.push_back("fluxbvp");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitBadConfig;
    }

    try {
        std::map<std::string, std::string> preset_layer;
        if (!preset_name.empty()) {
            const auto it = presets().find(preset_name);
            if (it == presets().end())
                throw std::invalid_argument("unknown preset: " + preset_name);
            preset_layer = it->second;
        }
        std::map<std::string, std::string> file_layer;
        if (!config_path.empty()) file_layer = io::read_config_file(config_path);
        const auto cfg = resolve_config(preset_layer, file_layer,
                                        env_layer_from_process(), flag_layer);

        if (solve->parsed()) return cmd_solve(cfg, out);
        if (shoot->parsed()) return cmd_shoot(cfg, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out);
        if (transform->parsed()) return cmd_transform(cfg, out);
        if (verify_cmd->parsed()) return cmd_verify(cfg, list_only, only, out);
        err << "error: no subcommand\n";
        return kExitBadConfig;
    } catch (const BracketFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitBracketFailure;
    } catch (const InconsistentPredicate& e) {
        err << "error: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace fluxbvp::cli

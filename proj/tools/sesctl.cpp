// Command-line front end.  Exit codes: 0 success, 1 domain or numerical error, 2 usage error.

#include "ses/equilibria.hpp"
#include "ses/games.hpp"
#include "ses/io.hpp"
#include "ses/learning.hpp"
#include "ses/network.hpp"
#include "ses/ocp.hpp"
#include "ses/presets.hpp"
#include "ses/stability.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace fs = std::filesystem;
using namespace ses;

namespace {

struct Common {
    std::string config_file;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    /// Flag overrides, applied last.
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> strings;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config_file, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--preset", c.preset, "named figure preset");
    sub->add_option("--out", c.out, "output directory (default $SES_OUTPUT_DIR or .)");
    sub->add_option("--seed", c.seed, "seed for randomized parts");
}

Json assemble(const std::string& command, const Common& c)
{
    Json cfg = Json::object();
    if (!c.preset.empty()) {
        const Preset& p = find_preset(c.preset);
        if (p.command != command)
            throw ConfigError("preset", "'" + p.name + "' belongs to the " + p.command + " command");
        cfg = p.config;
    }
    if (!c.config_file.empty())
        cfg.merge_patch(load_json_file(c.config_file));
    for (const auto& [k, v] : c.numbers)
        cfg[k] = v;
    for (const auto& [k, v] : c.strings)
        cfg[k] = v;
    return cfg;
}

fs::path out_dir(const Common& c)
{
    fs::path dir = c.out;
    if (dir.empty()) {
        const char* env = std::getenv("SES_OUTPUT_DIR");
        dir = env && *env ? fs::path(env) : fs::path(".");
    }
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& file)
{
    std::ofstream os(file);
    if (!os)
        throw std::runtime_error("cannot write " + file.string());
    return os;
}

void write_json(const fs::path& file, const Json& j)
{
    auto os = open_out(file);
    os << j.dump(2) << '\n';
}

double number_or(const Json& cfg, const char* key, double fallback)
{
    return cfg.contains(key) ? get_number(cfg, key, "") : fallback;
}

SystemState state_from(const Json& cfg, int n, double x_default)
{
    SystemState s;
    s.x = x_default;
    s.y = Vec::Zero(n);
    if (!cfg.contains("init"))
        return s;
    const Json& j = cfg["init"];
    check_keys(j, {"x", "y"}, "init");
    if (j.contains("x"))
        s.x = get_number(j, "x", "init");
    if (j.contains("y")) {
        if (j["y"].is_number()) {
            s.y = Vec::Constant(n, j["y"].get<double>());
        } else {
            s.y = get_vector(j, "y", "init");
            if (s.y.size() != n)
                throw ConfigError("init.y", "length differs from the number of agents");
        }
    }
    if (!(s.x >= 0.0))
        throw ConfigError("init.x", "stock must be nonnegative");
    return s;
}

int run_simulate(const Common& c)
{
    const Json cfg = assemble("simulate", c);
    check_keys(cfg, {"model", "init", "t_end", "samples"}, "");
    if (!cfg.contains("model"))
        throw ConfigError("model", "missing");
    const ModelParams p = model_params_from_config(cfg["model"]);
    validate(p);
    const SystemState init = state_from(cfg, p.n(), 0.5);
    const double t_end = number_or(cfg, "t_end", 100.0);
    IntegrateOptions opt;
    opt.samples = static_cast<std::size_t>(number_or(cfg, "samples", 1001));
    const Trajectory tr = integrate(p, init, t_end, opt);
    const fs::path file = out_dir(c) / "trajectory.csv";
    auto os = open_out(file);
    write_csv(os, tr);
    std::cout << "simulate: n=" << p.n() << " t_end=" << format_double(t_end)
              << " x(t_end)=" << format_double(tr.states.back().x) << " -> " << file.string() << '\n';
    return 0;
}

int run_equilibrium(const Common& c)
{
    const Json cfg = assemble("equilibrium", c);
    check_keys(cfg, {"model", "init"}, "");
    if (!cfg.contains("model"))
        throw ConfigError("model", "missing");
    const ModelParams p = model_params_from_config(cfg["model"]);
    validate(p);
    std::optional<SystemState> init;
    if (cfg.contains("init"))
        init = state_from(cfg, p.n(), 0.5);
    const EquilibriumReport r = equilibrium(p, init ? &*init : nullptr);
    const fs::path file = out_dir(c) / "equilibrium.json";
    write_json(file, Json(r));
    std::cout << "equilibrium: " << (r.exists ? "exists" : "none") << " source=" << to_string(r.source)
              << " class=" << to_string(r.classification) << " x_bar=" << format_double(r.x_bar) << " -> "
              << file.string() << '\n';
    return 0;
}

int run_stability(const Common& c)
{
    const Json cfg = assemble("stability", c);
    check_keys(cfg, {"model", "oracle"}, "");
    if (!cfg.contains("model"))
        throw ConfigError("model", "missing");
    const ModelParams p = model_params_from_config(cfg["model"]);
    validate(p);
    StabilityReport r;
    if (p.n() == 1) {
        r = global_single(p);
    } else if (p.n() == 2 && p.w(0, 1) == 1.0 && p.w(1, 0) == 1.0) {
        r = routh_dual(p);
    } else {
        const EquilibriumReport eq = equilibrium(p);
        if (eq.exists) {
            r.eigenvalues = eigenvalues(jacobian(p, {eq.x_bar, eq.y_bar}));
            r.local = r.eigenvalues.back().real() < 0.0 ? LocalClass::routh_stable : LocalClass::routh_unstable;
            r.note = "verdict from the Jacobian spectrum";
        } else {
            r.note = "no equilibrium: " + eq.reason;
        }
    }
    if (cfg.contains("oracle")) {
        const Json& o = cfg["oracle"];
        check_keys(o, {"trials", "scale"}, "oracle");
        OracleOptions opt;
        opt.trials = static_cast<int>(number_or(o, "trials", opt.trials));
        opt.scale = number_or(o, "scale", opt.scale);
        opt.seed = c.seed.value_or(opt.seed);
        r.oracle = stability_oracle(p, opt);
    }
    const fs::path file = out_dir(c) / "stability.json";
    write_json(file, Json(r));
    std::cout << "stability: local=" << to_string(r.local) << " global=" << to_string(r.global) << " -> "
              << file.string() << '\n';
    return 0;
}

int run_aggregate(const Common& c)
{
    const Json cfg = assemble("aggregate", c);
    check_keys(cfg, {"model", "instance", "partition", "guess", "init", "t_end", "samples"}, "");
    ModelParams p;
    if (cfg.contains("instance") == cfg.contains("model"))
        throw ConfigError("", "give exactly one of model and instance");
    if (cfg.contains("instance")) {
        check_keys(cfg["instance"], {"n"}, "instance");
        p = compare_instance(static_cast<int>(get_number(cfg["instance"], "n", "instance")), c.seed.value_or(1));
    } else {
        p = model_params_from_config(cfg["model"]);
    }
    validate(p, false);
    Partition part = single_group(p.n());
    if (cfg.contains("partition")) {
        try {
            part = cfg["partition"].get<Partition>();
        } catch (const Json::exception&) {
            throw ConfigError("partition", "expected an array of index arrays");
        }
    }
    validate_partition(part, p.n());

    Json report;
    report["classification"] = classify_network(p, part);
    report["laplacian"] = laplacian_spectrum(influence_network(p));
    const NetworkClassification cls = report["classification"].get<NetworkClassification>();
    if (cls.symmetric_semi_homogeneous)
        report["block_model"] = aggregate_exact(p, part);
    std::optional<LumpedParams> lumped;
    try {
        lumped = aggregate_self_directed(p);
        report["lumped"] = *lumped;
    } catch (const DomainError& e) {
        report["lumped"] = nullptr;
        report["lumped_note"] = e.what();
    }
    std::string summary = "strongest=" + (cls.strongest.empty() ? std::string("none") : cls.strongest);
    if (cfg.contains("guess")) {
        if (!lumped)
            throw DomainError("approximate aggregation needs a self-directed network");
        const Json& g = cfg["guess"];
        check_keys(g, {"BA", "P"}, "guess");
        LumpedParams guess;
        guess.BA = get_number(g, "BA", "guess");
        if (g.contains("P") && g["P"].is_string()) {
            if (g["P"].get<std::string>() != "x_bar")
                throw ConfigError("guess.P", "expected a number or \"x_bar\"");
            guess.P = lumped->P;
        } else {
            guess.P = get_number(g, "P", "guess");
        }
        const SystemState init = state_from(cfg, p.n(), 0.5);
        const AggregationErrors err = aggregate_approximate(
            p, guess, init, number_or(cfg, "t_end", 50.0), static_cast<std::size_t>(number_or(cfg, "samples", 2001)));
        report["errors"] = err;
        auto os = open_out(out_dir(c) / "aggregate_errors.csv");
        os << "t,e_x,e_Y\n";
        for (std::size_t k = 0; k < err.times.size(); ++k)
            os << format_double(err.times[k]) << ',' << format_double(err.e_x[k]) << ','
               << format_double(err.e_Y[k]) << '\n';
        summary += " sup_e_x=" + format_double(err.sup_e_x) + " final_e_x=" + format_double(err.final_e_x);
    }
    const fs::path file = out_dir(c) / "aggregate.json";
    write_json(file, report);
    std::cout << "aggregate: n=" << p.n() << ' ' << summary << " -> " << file.string() << '\n';
    return 0;
}

int run_ocp(const Common& c)
{
    const Json cfg = assemble("ocp", c);
    check_keys(cfg, {"delta", "mu", "beta_el", "x0", "t_end", "sample_dt", "z_min", "z_max", "points_per_decade"}, "");
    ocp::OcpParams p;
    p.delta = number_or(cfg, "delta", p.delta);
    p.mu = number_or(cfg, "mu", p.mu);
    p.beta_el = number_or(cfg, "beta_el", p.beta_el);
    p.x0 = number_or(cfg, "x0", p.x0);
    ocp::validate(p);
    ocp::SynthesisOptions so;
    so.z_min = number_or(cfg, "z_min", so.z_min);
    so.z_max = number_or(cfg, "z_max", so.z_max);
    so.points_per_decade = static_cast<int>(number_or(cfg, "points_per_decade", so.points_per_decade));

    OcpReport rep;
    rep.params = p;
    rep.sustainability = ocp::sustainability_check(p);
    const ocp::FeedbackLaw law = ocp::synthesize_feedback(p.delta, so);
    rep.regime = law.regime;
    if (law.regime == ocp::Regime::sustainable) {
        rep.has_saddle = true;
        rep.saddle = ocp::saddle_point(p.delta);
    }
    rep.residual = law.residual;
    rep.diagnostics = law.diagnostics;
    rep.table_size = static_cast<int>(law.table.size());
    const ocp::OptimalPath path = ocp::simulate_optimal(p, law, number_or(cfg, "t_end", 1000.0),
                                                        number_or(cfg, "sample_dt", 0.5));
    rep.x_final = path.samples.back().x;
    rep.y_final = path.samples.back().y;
    rep.log_x_final = path.samples.back().log_x;
    rep.discounted_utility = path.discounted_utility;

    const fs::path dir = out_dir(c);
    {
        auto os = open_out(dir / "feedback_law.csv");
        os << "z,lambda,y_star\n";
        for (const auto& s : law.table)
            os << format_double(s.z) << ',' << format_double(s.lambda) << ',' << format_double(s.y_star) << '\n';
    }
    {
        auto os = open_out(dir / "ocp_trajectory.csv");
        os << "t,x,y,z,lambda,utility\n";
        for (const auto& s : path.samples)
            os << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
               << format_double(s.z) << ',' << format_double(s.lambda) << ',' << format_double(s.utility) << '\n';
    }
    write_json(dir / "ocp_report.json", Json(rep));
    std::cout << "ocp: delta=" << format_double(p.delta) << " regime=" << to_string(rep.regime)
              << " sustainability=" << to_string(rep.sustainability) << " x(t_end)=" << format_double(rep.x_final)
              << " y(t_end)=" << format_double(rep.y_final) << " -> " << dir.string() << '\n';
    return 0;
}

int run_game(const Common& c)
{
    const Json cfg = assemble("game", c);
    check_keys(cfg, {"nu1", "nu2", "rho_L", "rho_H", "nu_L", "nu_H", "b"}, "");
    const fs::path file = out_dir(c) / "game.json";
    if (cfg.contains("rho_L") || cfg.contains("rho_H")) {
        const games::DiscreteGame g = games::build_discrete_game(
            get_number(cfg, "rho_L", ""), get_number(cfg, "rho_H", ""), get_number(cfg, "nu_L", ""),
            get_number(cfg, "nu_H", ""), number_or(cfg, "b", 1.0));
        write_json(file, Json(g));
        std::cout << "game: discrete " << g.label << (g.tragic ? " tragic" : " non-tragic")
                  << (g.excluded ? " (excluded: " + g.exclusion + ")" : "") << " -> " << file.string() << '\n';
        return 0;
    }
    const games::TragicnessReport t = games::tragicness(get_number(cfg, "nu1", ""), get_number(cfg, "nu2", ""));
    write_json(file, Json(t));
    std::cout << "game: nash=(" << format_double(t.nash[0]) << ", " << format_double(t.nash[1])
              << ") tragicness=" << format_double(t.tragicness) << " -> " << file.string() << '\n';
    return 0;
}

int run_learn(const Common& c)
{
    const Json cfg = assemble("learn", c);
    check_keys(cfg, {"nu1", "nu2", "b1", "b2", "init", "t_end", "samples"}, "");
    learning::LearningParams p;
    p.nu1 = number_or(cfg, "nu1", p.nu1);
    p.nu2 = number_or(cfg, "nu2", p.nu2);
    p.b1 = number_or(cfg, "b1", p.b1);
    p.b2 = number_or(cfg, "b2", p.b2);
    learning::validate(p);
    learning::LearningState init{0.5, 0.0, 0.0, 0.8, 0.2};
    if (cfg.contains("init")) {
        const Json& j = cfg["init"];
        check_keys(j, {"x", "y1", "y2", "rho1", "rho2"}, "init");
        init.x = number_or(j, "x", init.x);
        init.y1 = number_or(j, "y1", init.y1);
        init.y2 = number_or(j, "y2", init.y2);
        init.rho1 = number_or(j, "rho1", init.rho1);
        init.rho2 = number_or(j, "rho2", init.rho2);
    }
    const auto tr = learning::simulate_learning(p, init, number_or(cfg, "t_end", 50.0),
                                                static_cast<int>(number_or(cfg, "samples", 1001)));
    const fs::path dir = out_dir(c);
    {
        auto os = open_out(dir / "learning.csv");
        learning::write_csv(os, tr);
    }
    Json rep{{"params", p},
             {"equilibrium", learning::learning_equilibrium(p.nu1, p.nu2)},
             {"stability", learning::learning_stability(p)},
             {"final", tr.states.back()}};
    write_json(dir / "learning.json", rep);
    std::cout << "learn: nu=(" << format_double(p.nu1) << ", " << format_double(p.nu2)
              << ") final x=" << format_double(tr.states.back().x) << " -> " << dir.string() << '\n';
    return 0;
}

int run_sweep(const Common& c)
{
    const Json cfg = assemble("sweep", c);
    check_keys(cfg, {"figure", "n", "nu_L", "nu_H", "b"}, "");
    if (!cfg.contains("figure") || !cfg["figure"].is_string())
        throw ConfigError("figure", "missing or not a string");
    const std::string fig = cfg["figure"].get<std::string>();
    const int n = static_cast<int>(number_or(cfg, "n", 100));
    if (n < 0)
        throw ConfigError("n", "must be nonnegative");
    games::SweepTable t;
    if (fig == "game-a") {
        t = games::sweep_continuous({0.005, 0.995, n}, {-0.99, 0.99, n});
    } else if (fig == "disc-trag" || fig == "disc-type" || fig == "disc-res") {
        t = games::sweep_discrete({0.005, 0.995, n}, {0.005, 0.995, n}, number_or(cfg, "nu_L", 0.3),
                                  number_or(cfg, "nu_H", 0.7), number_or(cfg, "b", 1.0));
    } else {
        throw ConfigError("figure", "unknown figure '" + fig + "'");
    }
    const fs::path file = out_dir(c) / ("sweep_" + fig + ".csv");
    auto os = open_out(file);
    games::write_csv(t, os);
    std::cout << "sweep: figure=" << fig << " cells=" << t.cells.size() << " -> " << file.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sesctl: socio-ecological resource model laboratory"};
    app.require_subcommand(1);
    std::map<std::string, Common> common;
    std::map<std::string, std::function<int(const Common&)>> runners{
        {"simulate", run_simulate}, {"equilibrium", run_equilibrium}, {"stability", run_stability},
        {"aggregate", run_aggregate}, {"ocp", run_ocp},             {"game", run_game},
        {"learn", run_learn},         {"sweep", run_sweep}};
    const std::map<std::string, std::string> help{
        {"simulate", "integrate the n-agent model"},
        {"equilibrium", "closed-form or numerical equilibrium report"},
        {"stability", "local and global stability verdicts"},
        {"aggregate", "network classification and aggregation errors"},
        {"ocp", "optimal feedback law and closed-loop path"},
        {"game", "continuous tragicness or a discrete 2x2 game"},
        {"learn", "best-response learning run"},
        {"sweep", "figure data grids"}};
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, text] : help) {
        CLI::App* sub = app.add_subcommand(name, text);
        add_common(sub, common[name]);
        subs[name] = sub;
    }
    auto number_flag = [&](const std::string& cmd, const std::string& flag, const std::string& key) {
        subs[cmd]->add_option_function<double>(
            flag, [&, cmd, key](const double& v) { common[cmd].numbers[key] = v; }, key);
    };
    number_flag("simulate", "--t-end", "t_end");
    number_flag("ocp", "--delta", "delta");
    number_flag("ocp", "--x0", "x0");
    number_flag("ocp", "--mu", "mu");
    number_flag("ocp", "--beta-el", "beta_el");
    number_flag("ocp", "--t-end", "t_end");
    number_flag("game", "--nu1", "nu1");
    number_flag("game", "--nu2", "nu2");
    number_flag("game", "--rho-l", "rho_L");
    number_flag("game", "--rho-h", "rho_H");
    number_flag("game", "--nu-l", "nu_L");
    number_flag("game", "--nu-h", "nu_H");
    number_flag("learn", "--nu1", "nu1");
    number_flag("learn", "--nu2", "nu2");
    number_flag("learn", "--t-end", "t_end");
    number_flag("sweep", "--n", "n");
    subs["sweep"]->add_option_function<std::string>(
        "--figure", [&](const std::string& v) { common["sweep"].strings["figure"] = v; }, "figure id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed())
            continue;
        try {
            return runners[name](common[name]);
        } catch (const ConfigError& e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return 2;
        } catch (const DomainError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        } catch (const ode::IntegrationFailure& e) {
            std::cerr << "integration failed at t=" << format_double(e.time()) << ": " << e.what() << '\n';
            return 1;
        } catch (const Json::exception& e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 2;
}

#include "ses/presets.hpp"

#include <random>

namespace ses {

const std::vector<Preset>& figure_recipes()
{
    static const std::vector<Preset> presets = [] {
        auto single = [](double b, double rho, double alpha) {
            return Json{{"model", {{"b", {b}}, {"alpha", {alpha}}, {"rho", {rho}}, {"topology", "single"}}},
                        {"init", {{"x", 0.9}, {"y", {0.0}}}},
                        {"t_end", 100.0}};
        };
        const Json limcyc_model = {{"b", {0.2, 0.1}}, {"nu", {0.01, 0.9}}, {"rho", {0.001, 0.1}}, {"topology", "dual"}};
        std::vector<Preset> v;
        v.push_back({"node", "simulate", "single agent, stable node", single(0.1, 0.5, 0.5)});
        v.push_back({"spiral", "simulate", "single agent, stable spiral", single(1.0, 0.5, 0.5)});
        v.push_back({"degenerate", "simulate", "single agent, stable degenerate node", single(0.5, 0.5, 0.25)});
        v.push_back({"two-agent-nominal", "simulate", "two communities, nominal values",
                     Json{{"model", {{"b", {1.0, 1.0}}, {"nu", {0.75, 0.25}}, {"rho", {0.75, 0.25}}, {"topology", "dual"}}},
                          {"init", {{"x", 0.5}, {"y", {0.0, 0.0}}}},
                          {"t_end", 100.0}}});
        v.push_back({"limit-cycle", "simulate", "limit cycle, start inside",
                     Json{{"model", limcyc_model}, {"init", {{"x", 0.001}, {"y", {0.5, 0.5}}}}, {"t_end", 5000.0},
                          {"samples", 5001}}});
        v.push_back({"limit-cycle-outside", "simulate", "limit cycle, start outside",
                     Json{{"model", limcyc_model}, {"init", {{"x", 0.1}, {"y", {1.0, 0.3}}}}, {"t_end", 5000.0},
                          {"samples", 5001}}});
        v.push_back({"aggregation-demo", "aggregate", "n = 100 self-directed network, guess P = x_bar",
                     Json{{"instance", {{"n", 100}}}, {"guess", {{"BA", 2.0}, {"P", "x_bar"}}},
                          {"init", {{"x", 0.1}, {"y", 0.0}}}, {"t_end", 50.0}}});
        v.push_back({"ocp-sustainable", "ocp", "optimal consumption, delta = 0.01",
                     Json{{"delta", 0.01}, {"x0", 0.1}, {"t_end", 1000.0}}});
        v.push_back({"ocp-unsustainable", "ocp", "optimal consumption, delta = 10",
                     Json{{"delta", 10.0}, {"x0", 0.1}, {"t_end", 100.0}}});
        const Json learn_init = {{"x", 0.5}, {"y1", 0.0}, {"y2", 0.0}, {"rho1", 0.8}, {"rho2", 0.2}};
        v.push_back({"learning-symmetric", "learn", "learning with nu1 = nu2 = 0.5",
                     Json{{"nu1", 0.5}, {"nu2", 0.5}, {"b1", 1.0}, {"b2", 1.0}, {"init", learn_init}, {"t_end", 50.0}}});
        v.push_back({"learning-asymmetric", "learn", "learning with nu = (0.75, 0.25)",
                     Json{{"nu1", 0.75}, {"nu2", 0.25}, {"b1", 1.0}, {"b2", 1.0}, {"init", learn_init}, {"t_end", 50.0}}});
        v.push_back({"game-a", "sweep", "tragicness over average and difference of nu",
                     Json{{"figure", "game-a"}, {"n", 100}}});
        v.push_back({"disc-trag", "sweep", "tragic map of the discrete game on a (rho_L, rho_H) slice",
                     Json{{"figure", "disc-trag"}, {"n", 100}, {"nu_L", 0.3}, {"nu_H", 0.7}}});
        return v;
    }();
    return presets;
}

const Preset& find_preset(const std::string& name)
{
    for (const Preset& p : figure_recipes())
        if (p.name == name)
            return p;
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

ModelParams compare_instance(int n, std::uint64_t seed)
{
    if (n < 2)
        throw DomainError("compare instance needs n >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec alpha(n), rho(n);
    for (int i = 0; i < n; ++i) {
        alpha[i] = u(rng);
        rho[i] = u(rng);
    }
    const Vec nu = Vec::Ones(n) - alpha;
    const Vec b = Vec::Constant(n, nu.mean()).cwiseQuotient(nu);
    Mat w = Mat::Constant(n, n, 1.0 / n);
    w.diagonal().setZero();
    return make_params(b, alpha, rho, w);
}

} // namespace ses

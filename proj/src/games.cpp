#include "ses/games.hpp"

#include "ses/equilibria.hpp"
#include "ses/io.hpp"
#include "ses/stability.hpp"

#include <cmath>
#include <ostream>

namespace ses::games {

namespace {

void check_nu(double nu, const char* name)
{
    if (!(nu > 0.0 && nu < 1.0))
        throw DomainError(std::string(name) + " must lie in (0, 1)");
}

const char* profile_name(int s1, int s2)
{
    static const char* names[2][2] = {{"CC", "CD"}, {"DC", "DD"}};
    return names[s1][s2];
}

} // namespace

std::array<double, 2> payoff(double nu1, double nu2, double rho1, double rho2)
{
    const DualEquilibrium e = dual_closed_form(nu1, nu2, rho1, rho2);
    return {e.x * e.y1, e.x * e.y2};
}

double best_response(double nu_i, double nu_j, double rho_j)
{
    if (!(nu_j > 0.0))
        throw DomainError("best response undefined for nu_j = 0");
    if (nu_i == 1.0)
        throw DomainError("best response undefined for nu_i = 1");
    const double slope = (1.0 - nu_j) * (rho_j - nu_j * (1.0 - rho_j)) / (2.0 * nu_j);
    return slope / (nu_i - 1.0) + (rho_j + nu_j * (1.0 - rho_j) * (2.0 * nu_j - 1.0)) / (2.0 * nu_j);
}

std::array<double, 2> nash_equilibrium(double nu1, double nu2)
{
    check_nu(nu1, "nu1");
    check_nu(nu2, "nu2");
    auto rho = [](double ni, double nj) {
        return ni * (3.0 * nj - ni - 2.0 * ni * nj) / ((1.0 - ni) * (ni + nj + 2.0 * ni * nj));
    };
    return {rho(nu1, nu2), rho(nu2, nu1)};
}

FixedPointResult iterate_best_response(const std::function<double(double)>& br1,
                                       const std::function<double(double)>& br2, std::array<double, 2> start,
                                       double tol, int max_iter)
{
    FixedPointResult r;
    std::array<double, 2> p = start;
    auto residual = [&](const std::array<double, 2>& q) {
        return std::max(std::abs(br1(q[1]) - q[0]), std::abs(br2(q[0]) - q[1]));
    };
    double theta = 1.0;
    double block_start = residual(p);
    constexpr int block = 50;
    for (int it = 1; it <= max_iter; ++it) {
        const std::array<double, 2> target{br1(p[1]), br2(p[0])};
        p[0] += theta * (target[0] - p[0]);
        p[1] += theta * (target[1] - p[1]);
        r.iterations = it;
        const double res = residual(p);
        if (!std::isfinite(res))
            break;
        if (res < tol * std::max(1.0, std::max(std::abs(p[0]), std::abs(p[1])))) {
            r.converged = true;
            r.residual = res;
            r.point = p;
            r.damping = theta;
            return r;
        }
        if (it % block == 0) {
            if (res > 0.9 * block_start) {
                theta *= 0.5;
                p = start;
                block_start = residual(p);
                continue;
            }
            block_start = res;
        }
    }
    r.point = p;
    r.residual = residual(p);
    r.damping = theta;
    return r;
}

Line welfare_optimal_line(double nu1, double nu2)
{
    return {2.0 * nu2 * (1.0 - nu1), 2.0 * nu1 * (1.0 - nu2), -nu1 * (1.0 - nu2) - nu2 * (1.0 - nu1)};
}

TragicnessReport tragicness(double nu1, double nu2)
{
    TragicnessReport t;
    t.nash = nash_equilibrium(nu1, nu2);
    t.line = welfare_optimal_line(nu1, nu2);
    t.tragicness = std::abs(t.line.A * t.nash[0] + t.line.B * t.nash[1] + t.line.C) / std::hypot(t.line.A, t.line.B);
    const DualEquilibrium e = dual_closed_form(nu1, nu2, t.nash[0], t.nash[1]);
    t.x_bar = e.x;
    t.consumption = {e.x * e.y1, e.x * e.y2};
    return t;
}

const std::array<std::array<int, 4>, 9>& type_patterns()
{
    static const std::array<std::array<int, 4>, 9> p{{{3, 1, 4, 2},
                                                      {4, 1, 3, 2},
                                                      {3, 2, 4, 1},
                                                      {2, 1, 4, 3},
                                                      {1, 2, 4, 3},
                                                      {2, 3, 4, 1},
                                                      {4, 2, 3, 1},
                                                      {1, 3, 4, 2},
                                                      {1, 2, 3, 4}}};
    return p;
}

DiscreteGame build_discrete_game(double rho_L, double rho_H, double nu_L, double nu_H, double b, double tie_tol)
{
    if (!(rho_L < rho_H))
        throw DomainError("need rho_L < rho_H");
    if (!(nu_L < nu_H))
        throw DomainError("need nu_L < nu_H");
    check_nu(nu_L, "nu_L");
    check_nu(nu_H, "nu_H");
    if (!(b > 0.0))
        throw DomainError("b must be positive");

    DiscreteGame g;
    g.rho_L = rho_L;
    g.rho_H = rho_H;
    g.nu_L = nu_L;
    g.nu_H = nu_H;
    g.b = b;
    const double rho[2] = {rho_H, rho_L};
    const double nu[2] = {nu_H, nu_L};

    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
            Vec bv(2), nv(2), rv(2);
            bv << b, b;
            nv << nu[s], nu[t];
            rv << rho[s], rho[t];
            const ModelParams p = make_params_nu(bv, nv, rv, dyad_weights());
            const EquilibriumReport eq = equilibrium_dual(p);
            if (!eq.exists || eq.family) {
                g.excluded = true;
                g.exclusion += std::string(g.exclusion.empty() ? "" : "; ") + profile_name(s, t) +
                               ": no isolated equilibrium";
            } else {
                RouthDetail d;
                routh_dual(p, &d);
                if (!(d.routh_margin > 0.0)) {
                    g.excluded = true;
                    g.exclusion += std::string(g.exclusion.empty() ? "" : "; ") + profile_name(s, t) +
                                   ": Routh condition fails";
                }
            }
            const DualEquilibrium e = dual_closed_form(nu[s], nu[t], rho[s], rho[t]);
            g.payoff[s][t] = {e.x * e.y1, e.x * e.y2};
            g.stock[s][t] = e.x;
        }
    }

    const std::array<double, 4> v{g.payoff[0][0][0], g.payoff[0][1][0], g.payoff[1][0][0], g.payoff[1][1][0]};
    bool tie = false;
    for (int i = 0; i < 4; ++i) {
        int rank = 1;
        for (int j = 0; j < 4; ++j) {
            if (j == i)
                continue;
            const double scale = std::max(std::abs(v[i]), std::abs(v[j]));
            if (std::abs(v[i] - v[j]) <= tie_tol * scale)
                tie = true;
            else if (v[j] < v[i])
                ++rank;
        }
        g.ranks[static_cast<std::size_t>(i)] = rank;
    }

    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            const bool best1 = g.payoff[s][t][0] >= g.payoff[1 - s][t][0];
            const bool best2 = g.payoff[s][t][1] >= g.payoff[s][1 - t][1];
            if (best1 && best2)
                g.nash.emplace_back(s, t);
        }
    auto dominates = [&](const std::array<double, 2>& a, const std::array<double, 2>& c) {
        return a[0] >= c[0] && a[1] >= c[1] && (a[0] > c[0] || a[1] > c[1]);
    };
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            bool dominated = false;
            for (int u = 0; u < 2; ++u)
                for (int w = 0; w < 2; ++w)
                    dominated = dominated || dominates(g.payoff[u][w], g.payoff[s][t]);
            if (!dominated)
                g.pareto.emplace_back(s, t);
        }
    for (const Profile& e : g.nash)
        if (std::find(g.pareto.begin(), g.pareto.end(), e) == g.pareto.end())
            g.tragic = true;

    if (tie) {
        g.type = 0;
        g.label = "degenerate";
    } else {
        g.type = -1;
        g.label = "unlisted";
        const auto& pats = type_patterns();
        for (std::size_t k = 0; k < pats.size(); ++k)
            if (pats[k] == g.ranks) {
                g.type = static_cast<int>(k) + 1;
                g.label = "Type" + std::to_string(k + 1);
            }
    }
    return g;
}

SweepTable sweep_continuous(const Axis& nu_avg, const Axis& nu_diff)
{
    SweepTable t;
    t.columns = {"nu_avg",    "nu_diff", "nu1",           "nu2",          "rho1_nash", "rho2_nash",
                 "tragicness", "x_bar",  "consumption_1", "consumption_2", "label",    "error"};
    for (int i = 0; i < nu_avg.n; ++i)
        for (int j = 0; j < nu_diff.n; ++j) {
            const double avg = nu_avg.at(i), diff = nu_diff.at(j);
            const double n1 = avg - diff / 2.0, n2 = avg + diff / 2.0;
            SweepCell c;
            c.values = {avg, diff, n1, n2};
            try {
                const TragicnessReport r = tragicness(n1, n2);
                c.values.insert(c.values.end(), {r.nash[0], r.nash[1], r.tragicness, r.x_bar, r.consumption[0],
                                                 r.consumption[1]});
            } catch (const DomainError& e) {
                c.values.resize(10, std::nan(""));
                c.error = e.what();
            }
            t.cells.push_back(std::move(c));
        }
    return t;
}

SweepTable sweep_discrete(const Axis& rho_L, const Axis& rho_H, double nu_L, double nu_H, double b)
{
    SweepTable t;
    t.columns = {"rho_L", "rho_H", "nu_L", "nu_H", "type", "tragic", "excluded", "x_bar_nash", "label", "error"};
    for (int i = 0; i < rho_L.n; ++i)
        for (int j = 0; j < rho_H.n; ++j) {
            SweepCell c;
            c.values = {rho_L.at(i), rho_H.at(j), nu_L, nu_H};
            try {
                const DiscreteGame g = build_discrete_game(rho_L.at(i), rho_H.at(j), nu_L, nu_H, b);
                c.values.insert(c.values.end(),
                                {double(g.type), g.tragic ? 1.0 : 0.0, g.excluded ? 1.0 : 0.0,
                                 g.nash.empty() ? std::nan("") : g.stock[g.nash[0].first][g.nash[0].second]});
                c.label = g.label;
                c.error = g.exclusion;
            } catch (const DomainError& e) {
                c.values.resize(8, std::nan(""));
                c.error = e.what();
            }
            t.cells.push_back(std::move(c));
        }
    return t;
}

void write_csv(const SweepTable& t, std::ostream& os)
{
    for (std::size_t k = 0; k < t.columns.size(); ++k)
        os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for (const SweepCell& c : t.cells) {
        for (std::size_t k = 0; k < c.values.size(); ++k)
            os << (k ? "," : "") << format_double(c.values[k]);
        os << ',' << c.label << ",\"";
        for (char ch : c.error)
            os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << "\"\n";
    }
}

CournotResult cournot_fixture(double a, double b, double c)
{
    if (!(a > c && c > 0.0 && b > 0.0))
        throw DomainError("Cournot fixture needs a > c > 0 and b > 0");
    auto br = [a, b, c](double q_other) { return std::max(0.0, (a - c - b * q_other) / (2.0 * b)); };
    CournotResult r;
    r.q_closed = (a - c) / (3.0 * b);
    r.iteration = iterate_best_response(br, br, {0.0, 0.0});
    const double q1 = r.iteration.point[0], q2 = r.iteration.point[1];
    const double price = a - b * (q1 + q2);
    r.profit = {q1 * (price - c), q2 * (price - c)};
    return r;
}

} // namespace ses::games

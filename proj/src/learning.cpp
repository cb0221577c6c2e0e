#include "ses/learning.hpp"

#include "ses/games.hpp"
#include "ses/io.hpp"
#include "ses/ode.hpp"

#include <cmath>
#include <ostream>

namespace ses::learning {

void validate(const LearningParams& p)
{
    if (!(p.nu1 > 0.0 && p.nu1 < 1.0) || !(p.nu2 > 0.0 && p.nu2 < 1.0))
        throw DomainError("nu_i must lie in (0, 1)");
    if (!(p.b1 > 0.0 && p.b2 > 0.0))
        throw DomainError("b_i must be positive");
}

LearningState learning_rhs(const LearningParams& p, const LearningState& s)
{
    LearningState d;
    d.x = (1.0 - s.x) * s.x - (s.y1 + s.y2) * s.x;
    d.y1 = p.b1 * (1.0 - p.nu1) * (s.x - s.rho1) - p.b1 * p.nu1 * (s.y1 - s.y2);
    d.y2 = p.b2 * (1.0 - p.nu2) * (s.x - s.rho2) - p.b2 * p.nu2 * (s.y2 - s.y1);
    d.rho1 = games::best_response(p.nu1, p.nu2, s.rho2) - s.rho1;
    d.rho2 = games::best_response(p.nu2, p.nu1, s.rho1) - s.rho2;
    return d;
}

LearningState learning_equilibrium(double nu1, double nu2)
{
    const auto rho = games::nash_equilibrium(nu1, nu2);
    const double S = nu1 + nu2 + 2.0 * nu1 * nu2;
    return {2.0 * nu1 * nu2 / S, nu1 / S, nu2 / S, rho[0], rho[1]};
}

LearningStability learning_stability(const LearningParams& p)
{
    validate(p);
    const double n1 = p.nu1, n2 = p.nu2;
    LearningStability r;
    // the best responses are affine, so their slopes are exact differences
    const double c1 = games::best_response(n1, n2, 1.0) - games::best_response(n1, n2, 0.0);
    const double c2 = games::best_response(n2, n1, 1.0) - games::best_response(n2, n1, 0.0);
    const std::complex<double> root = std::sqrt(std::complex<double>(c1 * c2, 0.0));
    r.eigenvalues = {-1.0 - root, -1.0 + root};
    r.rho_stable = r.eigenvalues[1].real() < 0.0;
    const double pub = std::sqrt(((n1 - n2) * (n1 - n2) + 4.0 * n1 * n1 * n2 * n2) / (4.0 * n1 * n2));
    r.published_eigenvalues = {-1.0 - pub, -1.0 + pub};
    r.cond1 = (p.b1 - p.b2) * (p.b1 * n1 - p.b2 * n2) + 4.0 * p.b1 * n1 * p.b2 * n2;
    r.cond2 = (n1 - n2) * (n1 - n2) + 4.0 * n1 * n1 * n2 * n2 - 4.0 * n1 * n2;
    r.cond1_holds = r.cond1 > 0.0;
    r.cond2_holds = r.cond2 < 0.0;
    r.stable = r.rho_stable && r.cond1_holds;
    return r;
}

LearningTrajectory simulate_learning(const LearningParams& p, const LearningState& init, double t_end, int samples)
{
    validate(p);
    if (!(init.x >= 0.0))
        throw DomainError("x must be nonnegative");
    if (samples < 2 || !(t_end > 0.0))
        throw DomainError("need t_end > 0 and at least two samples");
    ode::System f = [&p](const ode::State& y, ode::State& dy, double) {
        const double x = std::exp(y[0]);
        const LearningState d = learning_rhs(p, {x, y[1], y[2], y[3], y[4]});
        dy[0] = 1.0 - x - y[1] - y[2];
        dy[1] = d.y1;
        dy[2] = d.y2;
        dy[3] = d.rho1;
        dy[4] = d.rho2;
    };
    LearningTrajectory tr;
    for (int k = 0; k < samples; ++k)
        tr.times.push_back(t_end * k / (samples - 1));
    if (init.x == 0.0) {
        // x stays at zero; integrate the remaining components with x frozen.
        ode::System g = [&p](const ode::State& y, ode::State& dy, double) {
            const LearningState d = learning_rhs(p, {0.0, y[0], y[1], y[2], y[3]});
            dy = {d.y1, d.y2, d.rho1, d.rho2};
        };
        const auto st = ode::integrate(g, {init.y1, init.y2, init.rho1, init.rho2}, 0.0, tr.times, {});
        for (const auto& s : st)
            tr.states.push_back({0.0, s[0], s[1], s[2], s[3]});
        return tr;
    }
    const auto st = ode::integrate(f, {std::log(init.x), init.y1, init.y2, init.rho1, init.rho2}, 0.0, tr.times, {});
    for (const auto& s : st)
        tr.states.push_back({std::exp(s[0]), s[1], s[2], s[3], s[4]});
    return tr;
}

void write_csv(std::ostream& os, const LearningTrajectory& traj)
{
    os << "t,x,y1,y2,rho1,rho2\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const LearningState& s = traj.states[k];
        os << format_double(traj.times[k]) << ',' << format_double(s.x) << ',' << format_double(s.y1) << ','
           << format_double(s.y2) << ',' << format_double(s.rho1) << ',' << format_double(s.rho2) << '\n';
    }
}

} // namespace ses::learning

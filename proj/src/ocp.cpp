#include "ses/ocp.hpp"

#include "ses/ode.hpp"

#include <math.h> // pchip.hpp calls isnan unqualified
#include <boost/math/interpolators/pchip.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace ses::ocp {

struct FeedbackLaw::Interp {
    double s_lo, s_hi;
    boost::math::interpolators::pchip<std::vector<double>> f;
    Interp(std::vector<double> s, std::vector<double> phi)
        : s_lo(s.front()), s_hi(s.back()), f(std::move(s), std::move(phi))
    {
    }
};

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

/// d phi / d s with phi = -lambda z, s = ln z.
double phi_rhs(double s, double phi, double delta)
{
    const double den = phi - 1.0 - phi * std::exp(-s);
    return phi * (1.0 + (2.0 - (delta + 1.0) * phi) / den);
}

/// Hotelling asymptote phi ~ 1/delta - 1/(delta (2 delta - 1) z).
double phi_asymptote(double z, double delta)
{
    return 1.0 / delta - 1.0 / (delta * (2.0 * delta - 1.0) * z);
}

std::vector<double> log_grid(double s_from, double s_to, int per_decade)
{
    const double h = std::log(10.0) / per_decade;
    const int n = std::max(3, static_cast<int>(std::ceil((s_to - s_from) / h)));
    std::vector<double> g(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        g[static_cast<std::size_t>(k)] = s_from + (s_to - s_from) * k / n;
    return g;
}

/// Integrates phi in the direction of `dir` (+1 towards larger z, -1 towards smaller) and samples
/// at `nodes` (ordered in the direction of travel).  Leaves of 0 < phi < 1/delta are reported.
std::vector<double> run_branch(double delta, double s0, double phi0, int dir, const std::vector<double>& nodes,
                               double tol)
{
    ode::System f = [delta, dir](const ode::State& y, ode::State& dy, double tau) {
        dy[0] = dir * phi_rhs(dir * tau, y[0], delta);
    };
    ode::DenseSolver solver(f, {phi0}, dir * s0, {tol, tol, 0.0}, 1e-6);
    std::vector<double> out;
    out.reserve(nodes.size());
    const double cap = 1.0 / delta;
    auto check = [&](double s, double phi) {
        if (!(phi > 0.0 && phi < cap))
            throw DomainError("synthesis left 0 < -lambda z < 1/delta at z = " + num(std::exp(s)) +
                              " (-lambda z = " + num(phi) + ")");
    };
    for (double s : nodes) {
        const double tau = dir * s;
        while (solver.time() < tau) {
            solver.step();
            check(dir * solver.time(), solver.state()[0]);
        }
        const double phi = solver.at(tau)[0];
        check(s, phi);
        out.push_back(phi);
    }
    return out;
}

enum class Exit { high, low, none };

/// Forward shooting in s from (s0, phi0) up to s_end; which side of the admissible band it leaves.
Exit shoot(double delta, double s0, double phi0, double s_end)
{
    ode::System f = [delta](const ode::State& y, ode::State& dy, double s) { dy[0] = phi_rhs(s, y[0], delta); };
    ode::DenseSolver solver(f, {phi0}, s0, {1e-13, 1e-12, 0.0}, 1e-6);
    const double cap = 1.0 / delta;
    try {
        while (solver.time() < s_end) {
            solver.step();
            const double phi = solver.state()[0];
            if (phi >= cap)
                return Exit::high;
            if (phi <= 1e-3 * cap)
                return Exit::low;
        }
    } catch (const ode::IntegrationFailure& e) {
        return e.last_state()[0] >= phi_asymptote(std::exp(e.time()), delta) ? Exit::high : Exit::low;
    }
    return solver.state()[0] >= phi_asymptote(std::exp(solver.time()), delta) ? Exit::high : Exit::low;
}

} // namespace

void validate(const OcpParams& p)
{
    if (!(p.delta > 0.0))
        throw DomainError("delta must be positive");
    if (!(p.mu >= 0.0))
        throw DomainError("mu must be nonnegative");
    if (!(p.beta_el > 0.0 && p.beta_el <= 1.0))
        throw DomainError("beta_el must lie in (0, 1]");
    if (!(p.x0 > 0.0))
        throw DomainError("x0 must be positive");
}

const char* to_string(Regime r)
{
    return r == Regime::sustainable ? "sustainable" : "unsustainable";
}

const char* to_string(Branch b)
{
    switch (b) {
    case Branch::left_manifold:
        return "left_manifold";
    case Branch::right_manifold:
        return "right_manifold";
    case Branch::stationary:
        return "stationary";
    default:
        return "hotelling";
    }
}

const char* to_string(Sustainability s)
{
    switch (s) {
    case Sustainability::strongly_sustainable:
        return "strongly_sustainable";
    case Sustainability::sustainable:
        return "sustainable";
    default:
        return "unsustainable";
    }
}

Saddle saddle_point(double delta)
{
    if (!(delta > 0.0))
        throw DomainError("delta must be positive");
    if (delta >= 1.0)
        throw DomainError("no equilibrium point in Gamma for delta >= 1");
    Saddle s;
    s.z_hat = 2.0 / (1.0 - delta);
    s.lambda_hat = (delta - 1.0) / (delta + 1.0);
    s.y_hat = (delta + 1.0) / 2.0;
    const double r = std::sqrt(2.0 - delta * delta) / 2.0;
    s.sigma_stable = delta / 2.0 - r;
    s.sigma_unstable = delta / 2.0 + r;
    s.slope = (1.0 + s.sigma_stable) * s.lambda_hat * s.lambda_hat;
    return s;
}

std::array<double, 2> hamiltonian_rhs(double z, double lambda, double delta)
{
    return {-z - 1.0 / lambda + 1.0, (delta + 1.0) * lambda + 2.0 / z};
}

Mat hamiltonian_jacobian(double z, double lambda, double delta)
{
    Mat J(2, 2);
    J << -1.0, 1.0 / (lambda * lambda), -2.0 / (z * z), delta + 1.0;
    return J;
}

double lambda_ode_rhs(double z, double lambda, double delta)
{
    if (!(z > 0.0 && lambda < 0.0))
        throw DomainError("lambda_ode_rhs needs z > 0 and lambda < 0");
    const double den = z * (-lambda * z - 1.0 + lambda);
    if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(z * lambda * z)))
        throw DomainError("singular: (z, lambda) lies on the z' = 0 nullcline");
    return lambda * ((delta + 1.0) * lambda * z + 2.0) / den;
}

double current_value_hamiltonian(double z, double lambda, double delta)
{
    if (!(z > 0.0) || !(lambda < 0.0) || !(lambda > -1.0 / (delta * z)))
        throw DomainError("current value Hamiltonian needs z > 0 and -1/(delta z) < lambda < 0");
    return -1.0 - std::log(-lambda * z) + (1.0 - z) * lambda - std::log(z);
}

double FeedbackLaw::phi(double z) const
{
    if (!(z > 0.0))
        throw DomainError("feedback law needs z > 0");
    if (regime == Regime::unsustainable && z >= asym_from)
        return phi_asymptote(z, delta);
    if (z < z_min || (regime == Regime::sustainable && z > z_max))
        throw DomainError("z = " + num(z) + " outside the synthesized table [" + num(z_min) + ", " +
                          num(regime == Regime::sustainable ? z_max : asym_from) + "]");
    if (regime == Regime::sustainable && z == z_hat)
        return -lambda_hat * z_hat;
    const double s = std::clamp(std::log(z), std::log(z_min), std::log(std::max(z_max, asym_from)));
    const Interp& in = (regime == Regime::sustainable && z < z_hat) ? *left : *right;
    return in.f(std::clamp(s, in.s_lo, in.s_hi));
}

double FeedbackLaw::y_star_of_x(double x) const
{
    if (!(x > 0.0) && !(regime == Regime::unsustainable && x == 0.0))
        throw DomainError("feedback law needs x > 0");
    if (regime == Regime::unsustainable && x * asym_from <= 1.0)
        return delta / (1.0 - x / (2.0 * delta - 1.0));
    return y_star(1.0 / x);
}

FeedbackLaw synthesize_feedback(double delta, const SynthesisOptions& opt)
{
    if (!(delta > 0.0))
        throw DomainError("delta must be positive");
    if (!(opt.z_min > 0.0 && opt.z_max > opt.z_min))
        throw DomainError("z range must satisfy 0 < z_min < z_max");
    FeedbackLaw law;
    law.delta = delta;
    law.z_min = opt.z_min;
    law.z_max = opt.z_max;
    const double s_min = std::log(opt.z_min), s_max = std::log(opt.z_max);

    if (delta < 1.0) {
        const Saddle sd = saddle_point(delta);
        if (!(opt.z_min < sd.z_hat && sd.z_hat < opt.z_max))
            throw DomainError("z range must straddle z_hat = " + num(sd.z_hat));
        law.regime = Regime::sustainable;
        law.z_hat = sd.z_hat;
        law.lambda_hat = sd.lambda_hat;
        const double phi_hat = -sd.lambda_hat * sd.z_hat;
        const double dphi_dz = -sd.lambda_hat - sd.z_hat * sd.slope;
        const double s_hat = std::log(sd.z_hat);

        // right branch, z > z_hat
        const double zr = sd.z_hat + opt.eps;
        std::vector<double> sr{s_hat};
        for (double s : log_grid(std::log(zr), s_max, opt.points_per_decade))
            sr.push_back(s);
        std::vector<double> pr{phi_hat};
        for (double v : run_branch(delta, std::log(zr), phi_hat + dphi_dz * opt.eps, +1,
                                   std::vector<double>(sr.begin() + 1, sr.end()), opt.tol))
            pr.push_back(v);

        // left branch, z < z_hat, integrated towards smaller z
        const double zl = sd.z_hat - opt.eps;
        std::vector<double> nodes_l = log_grid(s_min, std::log(zl), opt.points_per_decade);
        std::vector<double> travel(nodes_l.rbegin(), nodes_l.rend());
        std::vector<double> pl_rev = run_branch(delta, std::log(zl), phi_hat - dphi_dz * opt.eps, -1, travel, opt.tol);
        std::vector<double> sl(nodes_l);
        std::vector<double> pl(pl_rev.rbegin(), pl_rev.rend());
        sl.push_back(s_hat);
        pl.push_back(phi_hat);

        for (std::size_t k = 0; k < sl.size(); ++k) {
            const double z = std::exp(sl[k]);
            law.table.push_back({z, -pl[k] / z, 1.0 / pl[k],
                                 k + 1 == sl.size() ? Branch::stationary : Branch::left_manifold});
        }
        for (std::size_t k = 1; k < sr.size(); ++k) {
            const double z = std::exp(sr[k]);
            law.table.push_back({z, -pr[k] / z, 1.0 / pr[k], Branch::right_manifold});
        }
        law.left = std::make_shared<FeedbackLaw::Interp>(std::move(sl), std::move(pl));
        law.right = std::make_shared<FeedbackLaw::Interp>(std::move(sr), std::move(pr));
        law.asym_from = 0.0;
        return law;
    }

    // Hotelling branch: backward from the asymptote at z_max.
    law.regime = Regime::unsustainable;
    law.asym_from = opt.z_max;
    const double phi_cap = phi_asymptote(opt.z_max, delta);
    std::vector<double> nodes = log_grid(s_min, s_max, opt.points_per_decade);
    std::vector<double> travel(nodes.rbegin(), nodes.rend());
    travel.erase(travel.begin());
    std::vector<double> back = run_branch(delta, s_max, phi_cap, -1, travel, opt.tol);
    std::vector<double> phis(back.rbegin(), back.rend());
    phis.push_back(phi_cap);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double z = std::exp(nodes[k]);
        law.table.push_back({z, -phis[k] / z, 1.0 / phis[k], Branch::hotelling});
    }

    // Forward bisection on phi(z_min): the maximal solution separates exits through 1/delta from decay to 0.
    const double target = phis.front();
    double lo = target * 0.99, hi = std::min(target * 1.01, (1.0 / delta) * (1.0 - 1e-12));
    std::ostringstream diag;
    if (shoot(delta, s_min, lo, s_max) != Exit::low || shoot(delta, s_min, hi, s_max) != Exit::high) {
        law.residual = std::numeric_limits<double>::quiet_NaN();
        diag << "bisection bracket not confirmed around -lambda z = " << num(target) << " at z = " << num(opt.z_min);
    } else {
        for (int it = 0; it < 60 && hi - lo > 1e-15 * target; ++it) {
            const double mid = 0.5 * (lo + hi);
            (shoot(delta, s_min, mid, s_max) == Exit::high ? hi : lo) = mid;
        }
        const double est = 0.5 * (lo + hi);
        law.residual = std::abs(est - target) / target;
        diag << "bisection -lambda z = " << num(est) << ", backward integration " << num(target)
             << ", relative residual " << num(law.residual);
    }
    law.diagnostics = diag.str();
    law.left = nullptr;
    law.right = std::make_shared<FeedbackLaw::Interp>(std::move(nodes), std::move(phis));
    return law;
}

OptimalPath simulate_optimal(const OcpParams& p, const FeedbackLaw& law, double t_end, double sample_dt)
{
    validate(p);
    if (std::abs(p.delta - law.delta) > 1e-15 * p.delta)
        throw DomainError("feedback law was synthesized for a different delta");
    if (!(t_end > 0.0 && sample_dt > 0.0))
        throw DomainError("t_end and sample_dt must be positive");
    (void)law.y_star_of_x(p.x0); // range check before integrating
    const double delta = p.delta;
    ode::System f = [&law, delta](const ode::State& y, ode::State& dy, double t) {
        const double x = std::exp(y[0]);
        const double ys = law.y_star_of_x(x);
        dy[0] = 1.0 - x - ys;
        dy[1] = std::exp(-delta * t) * (y[0] + std::log(ys));
    };
    std::vector<double> times;
    const auto n = static_cast<std::size_t>(std::ceil(t_end / sample_dt - 1e-9));
    for (std::size_t k = 0; k <= n; ++k)
        times.push_back(std::min(t_end, k * sample_dt));
    const auto states = ode::integrate(f, {std::log(p.x0), 0.0}, 0.0, times, {1e-12, 1e-10, 0.0});

    OptimalPath path;
    path.regime = law.regime;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double x = std::exp(states[k][0]);
        const double y = law.y_star_of_x(x);
        path.samples.push_back({times[k], x, y, std::exp(-states[k][0]), -x / y,
                                std::exp(-delta * times[k]) * (states[k][0] + std::log(y)), states[k][0]});
    }
    const auto& last = states.back();
    const double g = states.back()[0] + std::log(path.samples.back().y);
    // Tail beyond t_end: the integrand settles (sustainable) or grows linearly with slope 1 - delta.
    const double slope = law.regime == Regime::sustainable ? 0.0 : 1.0 - delta;
    path.discounted_utility = last[1] + std::exp(-delta * t_end) * (g / delta + slope / (delta * delta));
    return path;
}

std::vector<HamiltonianSample> simulate_hamiltonian(double z0, double lambda0, double delta, double t_end,
                                                    double sample_dt)
{
    if (!(z0 > 0.0 && lambda0 < 0.0))
        throw DomainError("Hamiltonian flow needs z > 0 and lambda < 0");
    ode::System f = [delta](const ode::State& y, ode::State& dy, double) {
        const auto d = hamiltonian_rhs(y[0], y[1], delta);
        dy[0] = d[0];
        dy[1] = d[1];
    };
    std::vector<double> times;
    const auto n = static_cast<std::size_t>(std::ceil(t_end / sample_dt - 1e-9));
    for (std::size_t k = 0; k <= n; ++k)
        times.push_back(std::min(t_end, k * sample_dt));
    std::vector<HamiltonianSample> out;
    try {
        const auto st = ode::integrate(f, {z0, lambda0}, 0.0, times, {1e-13, 1e-12, 0.0});
        for (std::size_t k = 0; k < st.size(); ++k)
            out.push_back({times[k], st[k][0], st[k][1]});
    } catch (const ode::IntegrationFailure& e) {
        throw DomainError(std::string("Hamiltonian flow failed: ") + e.what() + " at t = " + num(e.time()));
    }
    return out;
}

Sustainability sustainability_check(const OcpParams& p)
{
    validate(p);
    if (p.delta < 1.0)
        return Sustainability::strongly_sustainable;
    return p.mu / p.beta_el >= p.delta - 1.0 ? Sustainability::sustainable : Sustainability::unsustainable;
}

} // namespace ses::ocp

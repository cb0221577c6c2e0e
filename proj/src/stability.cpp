#include "ses/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ses {

const char* to_string(LocalClass c)
{
    switch (c) {
    case LocalClass::stable_node:
        return "stable_node";
    case LocalClass::stable_spiral:
        return "stable_spiral";
    case LocalClass::stable_degenerate:
        return "stable_degenerate";
    case LocalClass::routh_stable:
        return "routh_stable";
    case LocalClass::routh_unstable:
        return "routh_unstable";
    default:
        return "inconclusive";
    }
}

const char* to_string(GlobalStatus s)
{
    switch (s) {
    case GlobalStatus::holds:
        return "holds";
    case GlobalStatus::fails:
        return "fails";
    default:
        return "not_applicable";
    }
}

const char* to_string(SufficientBranch b)
{
    switch (b) {
    case SufficientBranch::complex_roots:
        return "complex_roots";
    case SufficientBranch::real_roots_outside:
        return "real_roots_outside";
    case SufficientBranch::real_roots_between:
        return "real_roots_between";
    default:
        return "nonpositive_roots";
    }
}

std::vector<std::complex<double>> eigenvalues(const Mat& J)
{
    Eigen::EigenSolver<Mat> es(J, false);
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + J.rows());
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return ev;
}

StabilityReport classify_single(const ModelParams& p, double degenerate_tol)
{
    if (p.n() != 1)
        throw DomainError("single-agent classification needs n = 1");
    StabilityReport r;
    const double rho = p.rho[0];
    const double ba4 = 4.0 * p.b[0] * p.alpha[0];
    r.values["rho"] = rho;
    r.values["4*b*alpha"] = ba4;
    if (!(rho > 0.0)) {
        r.note = "rho <= 0: no interior equilibrium";
        return r;
    }
    const double disc = rho * rho - ba4 * rho;
    r.values["discriminant"] = disc;
    const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
    r.eigenvalues = {-rho / 2.0 - root / 2.0, -rho / 2.0 + root / 2.0};
    if (std::abs(rho - ba4) < degenerate_tol * std::max(rho, ba4))
        r.local = LocalClass::stable_degenerate;
    else if (rho > ba4)
        r.local = LocalClass::stable_node;
    else
        r.local = LocalClass::stable_spiral;
    r.global = GlobalStatus::holds;
    return r;
}

StabilityReport global_single(const ModelParams& p)
{
    StabilityReport r = classify_single(p);
    if (!(p.rho[0] > 0.0)) {
        r.global = GlobalStatus::not_applicable;
        return r;
    }
    r.global = GlobalStatus::holds;
    r.values["lyapunov_weight"] = 1.0 / (2.0 * p.b[0] * p.alpha[0] * p.rho[0]);
    r.note = "globally stable; V = (e^z - z - 1) + q^2/(2 b alpha rho), dV/dt = -rho (e^z - 1)^2";
    return r;
}

double lyapunov_single(const ModelParams& p, const SystemState& s)
{
    const double rho = p.rho[0];
    const double z = std::log(s.x / rho);
    const double q = s.y[0] - (1.0 - rho);
    return std::expm1(z) - z + q * q / (2.0 * p.b[0] * p.alpha[0] * rho);
}

double lyapunov_single_rate(const ModelParams& p, const SystemState& s)
{
    const double rho = p.rho[0];
    const double e = s.x / rho - 1.0;
    return -rho * e * e;
}

StabilityReport routh_dual(const ModelParams& p, RouthDetail* detail)
{
    const EquilibriumReport eq = equilibrium_dual(p);
    StabilityReport r;
    if (!eq.exists || eq.family) {
        r.note = "no isolated equilibrium: " + eq.reason;
        return r;
    }
    const double b1 = p.b[0], b2 = p.b[1];
    const double n1 = p.nu[0], n2 = p.nu[1];
    const double a1 = p.alpha[0], a2 = p.alpha[1];
    const double Dn = a2 * n1 + a1 * n2;
    const double N = a2 * n1 * p.rho[1] + a1 * n2 * p.rho[0];
    const double Bs = b1 * n1 + b2 * n2;

    RouthDetail d;
    d.c2 = (Bs * Dn + N) / Dn;
    d.c1 = N * (b1 + b2) / Dn;
    d.c0 = 2.0 * b1 * b2 * N;
    d.routh_margin = (b1 + b2) / (Dn * Dn) * (Bs * Dn + N) - 2.0 * b1 * b2;
    d.sufficient_margin = (b1 + b2) * Bs / Dn - 2.0 * b1 * b2;
    const double K = n1 * (2.0 * n2 - 1.0) + n2 * (2.0 * n1 - 1.0);
    const double bratio = b1 / b2;
    d.q_of_b = n1 * bratio * bratio + K * bratio + n2;
    d.discriminant = K * K - 4.0 * n1 * n2;
    if (d.discriminant < 0.0) {
        d.branch = SufficientBranch::complex_roots;
        d.sufficient_holds = true;
    } else {
        const double s = std::sqrt(d.discriminant);
        d.root_lo = (-K - s) / (2.0 * n1);
        d.root_hi = (-K + s) / (2.0 * n1);
        if (-K > 0.0) {
            const bool between = bratio >= d.root_lo && bratio <= d.root_hi;
            d.branch = between ? SufficientBranch::real_roots_between : SufficientBranch::real_roots_outside;
            d.sufficient_holds = !between;
        } else {
            d.branch = SufficientBranch::nonpositive_roots;
            d.sufficient_holds = true;
        }
    }

    r.values = {{"c2", d.c2},         {"c1", d.c1},           {"c0", d.c0},
                {"routh_margin", d.routh_margin},  {"sufficient_margin", d.sufficient_margin}, {"q(b)", d.q_of_b},
                {"q_discriminant", d.discriminant}};
    SystemState s;
    s.x = eq.x_bar;
    s.y = eq.y_bar;
    r.eigenvalues = eigenvalues(jacobian(p, s));
    if (!(N > 0.0)) {
        r.local = LocalClass::inconclusive;
        r.note = "equilibrium stock is zero; the Routh inequality does not apply";
    } else {
        const bool stable = d.c2 > 0.0 && d.c1 > 0.0 && d.c0 > 0.0 && d.c2 * d.c1 > d.c0;
        r.local = stable ? LocalClass::routh_stable : LocalClass::routh_unstable;
        r.note = std::string("sufficient branch: ") + to_string(d.branch) +
                 (d.sufficient_holds ? " (sufficient condition holds)" : " (sufficient condition fails)");
    }
    const LyapunovVerdict lv = lyapunov_dual(p);
    r.global = lv.holds ? GlobalStatus::holds : GlobalStatus::fails;
    r.values["B^2-ab"] = lv.margin;
    r.values["lyapunov_sufficient"] = lv.sufficient;
    if (detail)
        *detail = d;
    return r;
}

LyapunovCoefficients lyapunov_coefficients(const ModelParams& p)
{
    if (p.n() != 2)
        throw DomainError("Lyapunov coefficients need the dual network");
    const double b1 = p.b[0], b2 = p.b[1];
    const double n1 = p.nu[0], n2 = p.nu[1];
    const double r1 = p.rho[0], r2 = p.rho[1];
    LyapunovCoefficients c;
    c.A = b1 * (1.0 - n1) + b2 * (1.0 - n2);
    c.a = b1 * (1.0 - n1) - b2 * (1.0 - n2);
    c.B = b1 * n1 + b2 * n2;
    c.b = -b1 * n1 + b2 * n2;
    c.D = b1 * (1.0 - n1) * (1.0 - r1) + b2 * (1.0 - n2) * (1.0 - r2);
    c.d = -b1 * (1.0 - n1) * (1.0 - r1) + b2 * (1.0 - n2) * (1.0 - r2);
    return c;
}

LyapunovVerdict lyapunov_dual(const ModelParams& p)
{
    LyapunovVerdict v;
    v.coeffs = lyapunov_coefficients(p);
    v.margin = v.coeffs.B * v.coeffs.B - v.coeffs.a * v.coeffs.b;
    v.holds = v.margin > 0.0;
    const double b1 = p.b[0], b2 = p.b[1];
    const double n1 = p.nu[0], n2 = p.nu[1];
    v.sufficient = (b1 - b2) * (b1 * n1 - b2 * n2) + 4.0 * b1 * n1 * b2 * n2;
    v.sufficient_holds = v.sufficient > 0.0;
    return v;
}

OracleVerdict stability_oracle(const ModelParams& p, const OracleOptions& opt)
{
    const EquilibriumReport eq = equilibrium(p);
    if (!eq.exists)
        throw DomainError("stability oracle needs an existing equilibrium: " + eq.reason);
    OracleVerdict v;
    v.trials = opt.trials;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 0; k < opt.trials; ++k) {
        SystemState init;
        init.x = eq.x_bar > 0.0 ? eq.x_bar * std::exp(opt.scale * unit(rng)) : opt.scale * 0.5 * (1.0 + unit(rng));
        init.y = eq.y_bar;
        for (Eigen::Index i = 0; i < init.y.size(); ++i)
            init.y[i] += opt.scale * unit(rng);
        const SteadyState ss = steady_state(p, init, opt.criteria);
        double dist = std::abs(ss.state.x - eq.x_bar);
        dist = std::max(dist, (ss.state.y - eq.y_bar).cwiseAbs().maxCoeff());
        v.max_abs_state = std::max({v.max_abs_state, std::abs(ss.state.x), ss.state.y.cwiseAbs().maxCoeff()});
        if (ss.converged && dist < opt.match_tol) {
            ++v.converged;
            v.reasons.push_back("converged");
        } else {
            v.reasons.push_back(ss.converged ? "converged elsewhere" : ss.reason);
        }
    }
    v.fraction = opt.trials > 0 ? static_cast<double>(v.converged) / opt.trials : 1.0;
    return v;
}

} // namespace ses

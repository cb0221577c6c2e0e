#pragma once

// Reference computations that share no code with the library.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Interior fixed point from the linear system 1 - x - sum(y) = 0,
/// alpha_i (x - rho_i) - nu_i sum_j w_ij (y_i - y_j) = 0.  Returns false when singular.
inline bool linear_equilibrium(const Eigen::VectorXd& alpha, const Eigen::VectorXd& nu, const Eigen::VectorXd& rho,
                               const Eigen::MatrixXd& w, double& x, Eigen::VectorXd& y)
{
    const auto n = alpha.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n + 1);
    M(0, 0) = 1.0;
    M.row(0).tail(n).setOnes();
    r[0] = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        M(i + 1, 0) = alpha[i];
        r[i + 1] = alpha[i] * rho[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            M(i + 1, 1 + i) -= nu[i] * w(i, j);
            M(i + 1, 1 + j) += nu[i] * w(i, j);
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
        return false;
    const Eigen::VectorXd s = lu.solve(r);
    x = s[0];
    y = s.tail(n);
    return true;
}

/// Right-hand side written out directly from the model equations.
inline Eigen::VectorXd model_rhs(const Eigen::VectorXd& b, const Eigen::VectorXd& alpha, const Eigen::VectorXd& nu,
                                 const Eigen::VectorXd& rho, const Eigen::MatrixXd& w, const Eigen::VectorXd& s)
{
    const auto n = b.size();
    Eigen::VectorXd d(n + 1);
    const double x = s[0];
    d[0] = (1.0 - x) * x - x * s.tail(n).sum();
    for (Eigen::Index i = 0; i < n; ++i) {
        double social = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            social += w(i, j) * (s[1 + i] - s[1 + j]);
        d[1 + i] = b[i] * (alpha[i] * (x - rho[i]) - nu[i] * social);
    }
    return d;
}

using Field = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Classical fourth-order Runge-Kutta with a fixed step.
inline Eigen::VectorXd rk4(const Field& f, Eigen::VectorXd y, double t0, double t1, int steps)
{
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int k = 0; k < steps; ++k) {
        const Eigen::VectorXd k1 = f(t, y);
        const Eigen::VectorXd k2 = f(t + h / 2, y + h / 2 * k1);
        const Eigen::VectorXd k3 = f(t + h / 2, y + h / 2 * k2);
        const Eigen::VectorXd k4 = f(t + h, y + h * k3);
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return y;
}

/// Central-difference Jacobian.
inline Eigen::MatrixXd numeric_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& s, double h = 1e-6)
{
    const Eigen::VectorXd f0 = f(s);
    Eigen::MatrixXd J(f0.size(), s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        Eigen::VectorXd a = s, c = s;
        a[k] += h;
        c[k] -= h;
        J.col(k) = (f(a) - f(c)) / (2 * h);
    }
    return J;
}

/// Dual-network payoffs (x y_1, x y_2) via the linear system.
inline std::array<double, 2> dual_payoff(double nu1, double nu2, double rho1, double rho2)
{
    Eigen::VectorXd a(2), n(2), r(2), y;
    a << 1 - nu1, 1 - nu2;
    n << nu1, nu2;
    r << rho1, rho2;
    Eigen::MatrixXd w(2, 2);
    w << 0, 1, 1, 0;
    double x = 0;
    linear_equilibrium(a, n, r, w, x, y);
    return {x * y[0], x * y[1]};
}

struct BruteGame {
    std::vector<std::array<int, 2>> nash;
    bool tragic = false;
    std::array<int, 4> ranks{};
    bool tie = false;
};

/// Enumerates pure profiles (0 = high thresholds, 1 = low) by direct comparison.
inline BruteGame brute_force_game(double rho_L, double rho_H, double nu_L, double nu_H, double tie_tol = 1e-9)
{
    const double rho[2] = {rho_H, rho_L}, nu[2] = {nu_H, nu_L};
    std::array<double, 2> P[2][2];
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            P[s][t] = dual_payoff(nu[s], nu[t], rho[s], rho[t]);
    BruteGame g;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            bool stable = true;
            for (int dev = 0; dev < 2; ++dev) {
                if (P[dev][t][0] > P[s][t][0])
                    stable = false;
                if (P[s][dev][1] > P[s][t][1])
                    stable = false;
            }
            if (!stable)
                continue;
            g.nash.push_back({s, t});
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    if (P[u][v][0] >= P[s][t][0] && P[u][v][1] >= P[s][t][1] &&
                        (P[u][v][0] > P[s][t][0] || P[u][v][1] > P[s][t][1]))
                        g.tragic = true;
        }
    const double v[4] = {P[0][0][0], P[0][1][0], P[1][0][0], P[1][1][0]};
    for (int i = 0; i < 4; ++i) {
        g.ranks[i] = 1;
        for (int j = 0; j < 4; ++j) {
            if (i == j)
                continue;
            if (std::abs(v[i] - v[j]) <= tie_tol * std::max(std::abs(v[i]), std::abs(v[j])))
                g.tie = true;
            if (v[j] < v[i])
                ++g.ranks[i];
        }
    }
    return g;
}

/// Argmax of f over an evenly spaced grid.
inline double grid_argmax(const std::function<double(double)>& f, double lo, double hi, int n)
{
    double best = lo, fbest = f(lo);
    for (int k = 1; k <= n; ++k) {
        const double x = lo + (hi - lo) * k / n;
        const double v = f(x);
        if (v > fbest) {
            fbest = v;
            best = x;
        }
    }
    return best;
}

} // namespace oracle

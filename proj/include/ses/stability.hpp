#pragma once

// Local and global stability verdicts plus a simulation oracle.

#include "ses/equilibria.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ses {

enum class LocalClass { stable_node, stable_spiral, stable_degenerate, routh_stable, routh_unstable, inconclusive };
enum class GlobalStatus { holds, fails, not_applicable };

const char* to_string(LocalClass c);
const char* to_string(GlobalStatus s);

struct OracleVerdict {
    int trials = 0;
    int converged = 0;
    double fraction = 0.0;
    double max_abs_state = 0.0; ///< largest |component| seen at the end of each trial
    std::vector<std::string> reasons;
};

struct StabilityReport {
    LocalClass local = LocalClass::inconclusive;
    std::vector<std::complex<double>> eigenvalues;
    GlobalStatus global = GlobalStatus::not_applicable;
    /// Evaluated left-hand sides of the inequalities behind the verdicts.
    std::map<std::string, double> values;
    std::string note;
    std::optional<OracleVerdict> oracle;
};

/// n = 1: eigenvalues -rho/2 +- sqrt(rho^2 - 4 b alpha rho)/2.
StabilityReport classify_single(const ModelParams& p, double degenerate_tol = 1e-9);

/// Always globally stable for rho > 0; `values` carries the Lyapunov weight 1/(2 b alpha rho).
StabilityReport global_single(const ModelParams& p);
/// V = (e^z - z - 1) + q^2 / (2 b alpha rho) with z = ln(x / rho), q = y - (1 - rho).
double lyapunov_single(const ModelParams& p, const SystemState& s);
/// dV/dt = -rho (x/rho - 1)^2.
double lyapunov_single_rate(const ModelParams& p, const SystemState& s);

enum class SufficientBranch { complex_roots, real_roots_outside, real_roots_between, nonpositive_roots };
const char* to_string(SufficientBranch b);

struct RouthDetail {
    double c2 = 0, c1 = 0, c0 = 0;   ///< monic characteristic cubic at the equilibrium
    double routh_margin = 0;               ///< exact Routh inequality, > 0 means stable
    double sufficient_margin = 0;              ///< sufficient inequality, > 0 means it holds
    double q_of_b = 0;              ///< quadratic q at b = b1 / b2
    double discriminant = 0;
    double root_lo = 0, root_hi = 0;
    SufficientBranch branch = SufficientBranch::complex_roots;
    bool sufficient_holds = false;
};

StabilityReport routh_dual(const ModelParams& p, RouthDetail* detail = nullptr);

struct LyapunovCoefficients {
    double A = 0, a = 0, B = 0, b = 0, D = 0, d = 0;
};

LyapunovCoefficients lyapunov_coefficients(const ModelParams& p);

struct LyapunovVerdict {
    LyapunovCoefficients coeffs;
    double margin = 0;        ///< B^2 - a b
    bool holds = false;
    double sufficient = 0;    ///< (b1-b2)(b1 nu1 - b2 nu2) + 4 b1 nu1 b2 nu2
    bool sufficient_holds = false;
};

LyapunovVerdict lyapunov_dual(const ModelParams& p);

struct OracleOptions {
    int trials = 5;
    double scale = 0.1;
    std::uint64_t seed = 1;
    double match_tol = 1e-5;
    ConvergenceCriteria criteria{};
};

/// Integrates from random perturbations of the closed-form equilibrium.  The
/// stock is perturbed multiplicatively so it stays positive.
OracleVerdict stability_oracle(const ModelParams& p, const OracleOptions& opt = {});

/// Jacobian eigenvalues at a point.
std::vector<std::complex<double>> eigenvalues(const Mat& J);

} // namespace ses

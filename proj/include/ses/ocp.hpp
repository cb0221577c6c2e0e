#pragma once

// Infinite-horizon optimal consumption: Hamiltonian system in z = 1/x,
// saddle analysis, stable-manifold feedback synthesis and closed-loop runs.

#include "ses/common.hpp"

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ses::ocp {

struct OcpParams {
    double delta = 0.5;
    double mu = 0.0;
    double beta_el = 1.0;
    double x0 = 0.1;
};

void validate(const OcpParams& p);

enum class Regime { sustainable, unsustainable };
enum class Branch { left_manifold, right_manifold, stationary, hotelling };
const char* to_string(Regime r);
const char* to_string(Branch b);

struct Saddle {
    double z_hat, lambda_hat, y_hat;
    double sigma_stable, sigma_unstable;
    /// Stable eigenvector (1, slope) in (z, lambda).
    double slope;
};

/// Requires 0 < delta < 1.
Saddle saddle_point(double delta);

/// z' = -z - 1/lambda + 1, lambda' = (delta + 1) lambda + 2/z.
std::array<double, 2> hamiltonian_rhs(double z, double lambda, double delta);
Mat hamiltonian_jacobian(double z, double lambda, double delta);

/// d lambda / dz along the optimal manifold; throws DomainError on the z' = 0 nullcline.
double lambda_ode_rhs(double z, double lambda, double delta);

/// M = -1 - ln(-lambda z) + (1 - z) lambda - ln z on -1/(delta z) < lambda < 0.
double current_value_hamiltonian(double z, double lambda, double delta);

struct FeedbackSample {
    double z, lambda, y_star;
    Branch branch;
};

class FeedbackLaw {
public:
    double delta = 0.0;
    Regime regime = Regime::sustainable;
    double z_hat = 0.0;      ///< sustainable case only
    double lambda_hat = 0.0; ///< sustainable case only
    double z_min = 0.0, z_max = 0.0;
    std::vector<FeedbackSample> table; ///< ascending in z
    /// Relative gap between the bisection estimate and the backward integration (unsustainable case).
    double residual = 0.0;
    std::string diagnostics;

    /// phi = -lambda z = 1 / y*.
    double phi(double z) const;
    double y_star(double z) const { return 1.0 / phi(z); }
    double lambda(double z) const { return -phi(z) / z; }
    /// y* expressed through the stock x = 1/z; stable for tiny x.
    double y_star_of_x(double x) const;

    struct Interp;
    std::shared_ptr<const Interp> left, right; ///< phi as a function of ln z
    double asym_from = 0.0;                    ///< beyond this z, the Hotelling asymptote is used
};

struct SynthesisOptions {
    double z_min = 1e-2;
    double z_max = 1e4;
    int points_per_decade = 400;
    double eps = 1e-6;
    double tol = 1e-12;
};

/// Stable-manifold synthesis (delta < 1) or the Hotelling branch (delta >= 1).
FeedbackLaw synthesize_feedback(double delta, const SynthesisOptions& opt = {});

struct OptimalSample {
    double t, x, y, z, lambda, utility;
    double log_x; ///< kept separately since x underflows on Hotelling paths
};

struct OptimalPath {
    std::vector<OptimalSample> samples;
    Regime regime = Regime::sustainable;
    /// Integral of e^{-delta t}(ln x + ln y) up to t_end, plus a steady tail estimate when the path settles.
    double discounted_utility = 0.0;
};

/// x' = x(1 - x) - y x with y = y*(1/x); utility integrand e^{-delta t}(ln x + ln y).
OptimalPath simulate_optimal(const OcpParams& p, const FeedbackLaw& law, double t_end, double sample_dt = 0.1);

struct HamiltonianSample {
    double t, z, lambda;
};
std::vector<HamiltonianSample> simulate_hamiltonian(double z0, double lambda0, double delta, double t_end,
                                                    double sample_dt = 0.1);

enum class Sustainability { strongly_sustainable, sustainable, unsustainable };
const char* to_string(Sustainability s);
Sustainability sustainability_check(const OcpParams& p);

} // namespace ses::ocp

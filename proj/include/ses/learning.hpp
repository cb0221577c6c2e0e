#pragma once

// Best-response learning of the thresholds coupled to the dual resource system.

#include "ses/common.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

namespace ses::learning {

struct LearningParams {
    double nu1 = 0.5, nu2 = 0.5;
    double b1 = 1.0, b2 = 1.0;
};

struct LearningState {
    double x = 0, y1 = 0, y2 = 0, rho1 = 0, rho2 = 0;
};

void validate(const LearningParams& p);

LearningState learning_rhs(const LearningParams& p, const LearningState& s);

/// x = 2 nu1 nu2 / S, y_i = nu_i / S with S = nu1 + nu2 + 2 nu1 nu2; rho at the Nash values.
LearningState learning_equilibrium(double nu1, double nu2);

struct LearningStability {
    /// Eigenvalues of the linear threshold subsystem, -1 +- sqrt(c1 c2).
    std::array<std::complex<double>, 2> eigenvalues{};
    /// Values of the published eigenvalue display, -1 +- sqrt(((nu1-nu2)^2 + 4 nu1^2 nu2^2)/(4 nu1 nu2)).
    std::array<double, 2> published_eigenvalues{};
    double cond1 = 0;  ///< (b1-b2)(b1 nu1 - b2 nu2) + 4 b1 nu1 b2 nu2, > 0 required
    double cond2 = 0;  ///< (nu1-nu2)^2 + 4 nu1^2 nu2^2 - 4 nu1 nu2, published form, < 0 required
    bool rho_stable = false;
    bool cond1_holds = false;
    bool cond2_holds = false;
    /// rho_stable and cond1_holds.
    bool stable = false;
};

LearningStability learning_stability(const LearningParams& p);

struct LearningTrajectory {
    std::vector<double> times;
    std::vector<LearningState> states;
};

LearningTrajectory simulate_learning(const LearningParams& p, const LearningState& init, double t_end,
                                     int samples = 1001);

/// Header t,x,y1,y2,rho1,rho2.
void write_csv(std::ostream& os, const LearningTrajectory& traj);

} // namespace ses::learning

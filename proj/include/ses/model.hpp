#pragma once

// Nondimensional n-agent resource/effort model and its integration.

#include "ses/common.hpp"
#include "ses/ode.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ses {

struct DimensionalParams {
    double Rmax = 1.0;
    double r = 1.0;
    Vec a;     ///< attribution per agent
    Vec s;     ///< social value per agent
    Vec Rhat;  ///< scarcity threshold per agent
    Mat w;
};

struct ModelParams {
    Vec b;
    Vec alpha;
    Vec nu;
    Vec rho;
    Mat w;

    int n() const { return static_cast<int>(b.size()); }
};

/// Builds params with nu = 1 - alpha.
ModelParams make_params(Vec b, Vec alpha, Vec rho, Mat w);
/// Builds params from social relevances, alpha = 1 - nu.
ModelParams make_params_nu(Vec b, Vec nu, Vec rho, Mat w);

/// Throws DomainError on shape, sign or bipolarity violations.  The
/// row-stochastic check can be switched off for weight matrices that are only
/// nonnegative with zero diagonal.
void validate(const ModelParams& p, bool require_row_stochastic = true, double tol = 1e-9);

ModelParams nondimensionalize(const DimensionalParams& dim);

/// Complete graph with w_ij = 1/(n-1).
Mat uniform_weights(int n);
/// Star with hub 0: hub spreads 1/(n-1) over leaves, each leaf listens only to the hub.
Mat star_weights(int n);
/// Two agents that listen to each other only.
Mat dyad_weights();

struct SystemState {
    double x = 0.0;
    Vec y;
};

struct Derivative {
    double dx = 0.0;
    Vec dy;
};

Derivative rhs(const ModelParams& p, const SystemState& s);
/// Jacobian in (x, y_1..y_n) coordinates.
Mat jacobian(const ModelParams& p, const SystemState& s);

struct Trajectory {
    std::vector<double> times;
    std::vector<SystemState> states;
    ModelParams params;
};

struct IntegrateOptions {
    ode::Tolerances tol{};
    /// Output times; when empty, `samples` evenly spaced points on [0, t_end].
    std::vector<double> sample_times;
    std::size_t samples = 501;
};

/// The stock is carried as ln x when x0 > 0, so x stays nonnegative by
/// construction; x0 = 0 keeps the trajectory on the invariant plane x = 0.
Trajectory integrate(const ModelParams& p, const SystemState& init, double t_end,
                     const IntegrateOptions& opt = {});

struct ConvergenceCriteria {
    double window = 10.0;
    double tol = 1e-8;
    int plateau_windows = 5;
    double plateau_ratio = 0.5;
    double lookback = 1000.0;
    double horizon = 1e4;
    double sample_dt = 0.5;
    ode::Tolerances integration{1e-12, 1e-10, 0.0};
};

struct SteadyState {
    bool converged = false;
    SystemState state;
    double t = 0.0;
    std::string reason; ///< "converged", "oscillation" or "time budget"
    double variation = 0.0;
};

SteadyState steady_state(const ModelParams& p, const SystemState& init,
                         const ConvergenceCriteria& c = {});

/// Header t,x,y_1..y_n with shortest round-trip doubles.
void write_csv(std::ostream& os, const Trajectory& traj);

} // namespace ses

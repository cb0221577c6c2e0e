#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output.

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ses::ode {

using State = std::vector<double>;
using System = std::function<void(const State& y, State& dydt, double t)>;

struct Tolerances {
    double atol = 1e-9;
    double rtol = 1e-7;
    double max_step = 0.0; ///< 0 leaves the step unbounded
};

/// Raised when the step size collapses or the state stops being finite.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double t, State last)
        : std::runtime_error(what), t_(t), last_(std::move(last)) {}
    double time() const { return t_; }
    const State& last_state() const { return last_; }

private:
    double t_;
    State last_;
};

class DenseSolver {
public:
    DenseSolver(System f, State y0, double t0, Tolerances tol, double dt0 = 1e-3);
    ~DenseSolver();
    DenseSolver(DenseSolver&&) noexcept;
    DenseSolver& operator=(DenseSolver&&) noexcept;

    double time() const;
    double previous_time() const;
    const State& state() const;
    std::size_t steps() const { return steps_; }

    /// One accepted step; returns the covered interval.
    std::pair<double, double> step();
    /// Interpolated state, valid for t in [previous_time(), time()].
    State at(double t) const;
    /// Steps until time() >= t and interpolates there.
    State advance_to(double t);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t steps_ = 0;
};

/// Samples the solution at increasing times (the first may equal t0).
std::vector<State> integrate(const System& f, const State& y0, double t0,
                             const std::vector<double>& times, const Tolerances& tol);

/// Fixed-step Dormand-Prince fifth-order solution (no error control).
State dopri5_fixed(const System& f, State y, double t0, double t1, std::size_t n_steps);

} // namespace ses::ode

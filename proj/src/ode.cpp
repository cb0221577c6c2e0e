#include "ses/ode.hpp"
#include "ses/common.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace ses::ode {

namespace odeint = boost::numeric::odeint;

namespace {

using Stepper = odeint::runge_kutta_dopri5<State>;
using Dense = odeint::dense_output_runge_kutta<odeint::controlled_runge_kutta<Stepper>>;

bool finite(const State& y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

struct DenseSolver::Impl {
    System f;
    Dense dense;
    State last_good;
    double last_good_t;

    Impl(System fn, const Tolerances& tol)
        : f(std::move(fn)),
          dense(odeint::make_dense_output(tol.atol, tol.rtol, tol.max_step, Stepper())),
          last_good_t(0.0)
    {
    }
};

DenseSolver::DenseSolver(System f, State y0, double t0, Tolerances tol, double dt0)
    : impl_(std::make_unique<Impl>(std::move(f), tol))
{
    if (!finite(y0))
        throw IntegrationFailure("non-finite initial state", t0, y0);
    impl_->last_good = y0;
    impl_->last_good_t = t0;
    impl_->dense.initialize(y0, t0, dt0);
}

DenseSolver::~DenseSolver() = default;
DenseSolver::DenseSolver(DenseSolver&&) noexcept = default;
DenseSolver& DenseSolver::operator=(DenseSolver&&) noexcept = default;

double DenseSolver::time() const { return impl_->dense.current_time(); }
double DenseSolver::previous_time() const { return impl_->dense.previous_time(); }
const State& DenseSolver::state() const { return impl_->dense.current_state(); }

std::pair<double, double> DenseSolver::step()
{
    auto& d = impl_->dense;
    std::pair<double, double> span;
    try {
        span = d.do_step(std::ref(impl_->f));
    } catch (const ses::DomainError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw IntegrationFailure(std::string("step size adjustment failed: ") + e.what(),
                                 impl_->last_good_t, impl_->last_good);
    }
    if (!finite(d.current_state()))
        throw IntegrationFailure("state became non-finite", impl_->last_good_t, impl_->last_good);
    const double h = span.second - span.first;
    if (!(h > 1e-13 * std::max(1.0, std::abs(span.second))))
        throw IntegrationFailure("step size underflow", impl_->last_good_t, impl_->last_good);
    impl_->last_good = d.current_state();
    impl_->last_good_t = span.second;
    ++steps_;
    return span;
}

State DenseSolver::at(double t) const
{
    if (steps_ == 0 || t == time())
        return state();
    State y(impl_->last_good.size());
    impl_->dense.calc_state(t, y);
    return y;
}

State DenseSolver::advance_to(double t)
{
    while (time() < t)
        step();
    return at(t);
}

std::vector<State> integrate(const System& f, const State& y0, double t0,
                             const std::vector<double>& times, const Tolerances& tol)
{
    std::vector<State> out;
    out.reserve(times.size());
    DenseSolver solver(f, y0, t0, tol);
    for (double t : times) {
        if (t <= t0)
            out.push_back(y0);
        else
            out.push_back(solver.advance_to(t));
    }
    return out;
}

State dopri5_fixed(const System& f, State y, double t0, double t1, std::size_t n_steps)
{
    Stepper stepper;
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    double t = t0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        stepper.do_step(f, y, t, h);
        t += h;
    }
    return y;
}

} // namespace ses::ode

#include "ses/model.hpp"

#include "ses/io.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

namespace ses {

ModelParams make_params(Vec b, Vec alpha, Vec rho, Mat w)
{
    ModelParams p;
    p.nu = Vec::Ones(alpha.size()) - alpha;
    p.b = std::move(b);
    p.alpha = std::move(alpha);
    p.rho = std::move(rho);
    p.w = std::move(w);
    return p;
}

ModelParams make_params_nu(Vec b, Vec nu, Vec rho, Mat w)
{
    ModelParams p;
    p.alpha = Vec::Ones(nu.size()) - nu;
    p.b = std::move(b);
    p.nu = std::move(nu);
    p.rho = std::move(rho);
    p.w = std::move(w);
    return p;
}

void validate(const ModelParams& p, bool require_row_stochastic, double tol)
{
    const int n = p.n();
    if (n < 1)
        throw DomainError("model needs at least one agent");
    if (p.alpha.size() != n || p.nu.size() != n || p.rho.size() != n)
        throw DomainError("parameter vectors differ in length");
    if (p.w.rows() != n || p.w.cols() != n)
        throw DomainError("weight matrix must be n x n");
    for (int i = 0; i < n; ++i) {
        if (!(p.b[i] > 0.0) || !std::isfinite(p.b[i]))
            throw DomainError("b_" + std::to_string(i + 1) + " must be positive");
        if (p.alpha[i] < 0.0 || p.alpha[i] > 1.0 || p.nu[i] < 0.0 || p.nu[i] > 1.0)
            throw DomainError("relevances of agent " + std::to_string(i + 1) + " must lie in [0,1]");
        if (std::abs(p.alpha[i] + p.nu[i] - 1.0) > tol)
            throw DomainError("alpha + nu != 1 for agent " + std::to_string(i + 1));
        if (!std::isfinite(p.rho[i]))
            throw DomainError("rho_" + std::to_string(i + 1) + " is not finite");
        if (p.w(i, i) != 0.0)
            throw DomainError("weight matrix must have a zero diagonal");
        if ((p.w.row(i).array() < 0.0).any())
            throw DomainError("weights must be nonnegative");
        if (require_row_stochastic && n > 1 && std::abs(p.w.row(i).sum() - 1.0) > tol)
            throw DomainError("row " + std::to_string(i + 1) + " of the weight matrix does not sum to 1");
    }
}

ModelParams nondimensionalize(const DimensionalParams& dim)
{
    const auto n = dim.a.size();
    if (!(dim.Rmax > 0.0) || !(dim.r > 0.0))
        throw DomainError("Rmax and r must be positive");
    if (dim.s.size() != n || dim.Rhat.size() != n || dim.w.rows() != n || dim.w.cols() != n)
        throw DomainError("dimensional parameter sizes differ");
    ModelParams p;
    p.b.resize(n);
    p.alpha.resize(n);
    p.nu.resize(n);
    p.rho.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (dim.a[i] < 0.0 || dim.s[i] < 0.0)
            throw DomainError("attribution and social value must be nonnegative");
        const double eco = dim.a[i] * dim.Rmax;
        const double total = eco + dim.r * dim.s[i];
        if (!(total > 0.0))
            throw DomainError("agent " + std::to_string(i + 1) + " has a = s = 0; relevances undefined");
        p.b[i] = total / (dim.r * dim.r);
        p.alpha[i] = eco / total;
        p.nu[i] = 1.0 - p.alpha[i];
        p.rho[i] = dim.Rhat[i] / dim.Rmax;
    }
    p.w = dim.w;
    return p;
}

Mat uniform_weights(int n)
{
    Mat w = Mat::Zero(n, n);
    if (n > 1) {
        w.setConstant(1.0 / (n - 1));
        w.diagonal().setZero();
    }
    return w;
}

Mat star_weights(int n)
{
    Mat w = Mat::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        w(0, j) = 1.0 / (n - 1);
        w(j, 0) = 1.0;
    }
    return w;
}

Mat dyad_weights() { return star_weights(2); }

Derivative rhs(const ModelParams& p, const SystemState& s)
{
    Derivative d;
    const double ysum = s.y.sum();
    d.dx = (1.0 - s.x) * s.x - s.x * ysum;
    const Vec social = p.w.rowwise().sum().cwiseProduct(s.y) - p.w * s.y;
    d.dy = p.b.cwiseProduct(p.alpha.cwiseProduct((Vec::Constant(p.n(), s.x) - p.rho))
                            - p.nu.cwiseProduct(social));
    return d;
}

Mat jacobian(const ModelParams& p, const SystemState& s)
{
    const int n = p.n();
    Mat J = Mat::Zero(n + 1, n + 1);
    J(0, 0) = 1.0 - 2.0 * s.x - s.y.sum();
    J.block(0, 1, 1, n).setConstant(-s.x);
    const Vec d = p.w.rowwise().sum();
    for (int i = 0; i < n; ++i) {
        J(i + 1, 0) = p.b[i] * p.alpha[i];
        for (int j = 0; j < n; ++j)
            J(i + 1, j + 1) = p.b[i] * p.nu[i] * p.w(i, j);
        J(i + 1, i + 1) = -p.b[i] * p.nu[i] * d[i];
    }
    return J;
}

namespace {

// Internal coordinates: [ln x, y...] when x0 > 0, [0, y...] on the x = 0 plane.
struct Flow {
    const ModelParams& p;
    bool log_mode;
    Vec degree;

    Flow(const ModelParams& params, bool log)
        : p(params), log_mode(log), degree(params.w.rowwise().sum())
    {
    }

    void operator()(const ode::State& u, ode::State& du, double) const
    {
        const int n = p.n();
        const double x = log_mode ? std::exp(u[0]) : 0.0;
        double ysum = 0.0;
        for (int i = 0; i < n; ++i)
            ysum += u[i + 1];
        du[0] = log_mode ? 1.0 - x - ysum : 0.0;
        for (int i = 0; i < n; ++i) {
            double pull = degree[i] * u[i + 1];
            for (int j = 0; j < n; ++j)
                pull -= p.w(i, j) * u[j + 1];
            du[i + 1] = p.b[i] * (p.alpha[i] * (x - p.rho[i]) - p.nu[i] * pull);
        }
    }

    ode::State pack(const SystemState& s) const
    {
        ode::State u(p.n() + 1);
        u[0] = log_mode ? std::log(s.x) : 0.0;
        for (int i = 0; i < p.n(); ++i)
            u[i + 1] = s.y[i];
        return u;
    }

    SystemState unpack(const ode::State& u) const
    {
        SystemState s;
        s.x = log_mode ? std::exp(u[0]) : 0.0;
        s.y.resize(p.n());
        for (int i = 0; i < p.n(); ++i)
            s.y[i] = u[i + 1];
        return s;
    }
};

void check_init(const ModelParams& p, const SystemState& init)
{
    if (!(init.x >= 0.0) || !std::isfinite(init.x))
        throw DomainError("initial stock must be finite and nonnegative");
    if (init.y.size() != p.n())
        throw DomainError("initial effort vector has wrong length");
}

} // namespace

Trajectory integrate(const ModelParams& p, const SystemState& init, double t_end,
                     const IntegrateOptions& opt)
{
    check_init(p, init);
    if (!(t_end > 0.0))
        throw DomainError("t_end must be positive");
    std::vector<double> times = opt.sample_times;
    if (times.empty()) {
        const std::size_t m = std::max<std::size_t>(opt.samples, 2);
        times.resize(m);
        for (std::size_t k = 0; k < m; ++k)
            times[k] = t_end * static_cast<double>(k) / static_cast<double>(m - 1);
    }
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw DomainError("sample times must be strictly increasing");
    if (!times.empty() && (times.front() < 0.0 || times.back() > t_end * (1 + 1e-12)))
        throw DomainError("sample times must lie in [0, t_end]");

    const Flow flow(p, init.x > 0.0);
    ode::System sys = [&flow](const ode::State& u, ode::State& du, double t) { flow(u, du, t); };
    Trajectory traj;
    traj.params = p;
    traj.times = times;
    try {
        for (const auto& u : ode::integrate(sys, flow.pack(init), 0.0, times, opt.tol))
            traj.states.push_back(flow.unpack(u));
    } catch (const ode::IntegrationFailure& e) {
        const SystemState last = flow.unpack(e.last_state());
        ode::State phys(last.y.data(), last.y.data() + last.y.size());
        phys.insert(phys.begin(), last.x);
        throw ode::IntegrationFailure(e.what(), e.time(), phys);
    }
    return traj;
}

SteadyState steady_state(const ModelParams& p, const SystemState& init, const ConvergenceCriteria& c)
{
    check_init(p, init);
    if (!(c.window > 0.0) || !(c.sample_dt > 0.0) || !(c.tol > 0.0))
        throw DomainError("convergence criteria need positive window, sample spacing and tolerance");
    const Flow flow(p, init.x > 0.0);
    ode::System sys = [&flow](const ode::State& u, ode::State& du, double t) { flow(u, du, t); };
    ode::DenseSolver solver(sys, flow.pack(init), 0.0, c.integration);

    const int n = p.n();
    const int per_window = std::max(1, static_cast<int>(std::ceil(c.window / c.sample_dt)));
    std::deque<std::pair<double, double>> history; // (window end, variation)
    int plateau_run = 0;
    double t0 = 0.0;
    SteadyState out;
    while (true) {
        Vec lo = Vec::Constant(n + 1, std::numeric_limits<double>::infinity());
        Vec hi = -lo;
        SystemState s;
        for (int k = 0; k <= per_window; ++k) {
            const double t = t0 + c.window * k / per_window;
            s = flow.unpack(solver.advance_to(t));
            lo[0] = std::min(lo[0], s.x);
            hi[0] = std::max(hi[0], s.x);
            lo.tail(n) = lo.tail(n).cwiseMin(s.y);
            hi.tail(n) = hi.tail(n).cwiseMax(s.y);
        }
        const double t1 = t0 + c.window;
        const double variation = (hi - lo).maxCoeff();
        out.state = s;
        out.t = t1;
        out.variation = variation;
        if (variation < c.tol) {
            out.converged = true;
            out.reason = "converged";
            return out;
        }
        double recent_max = 0.0;
        for (const auto& [te, v] : history)
            if (te > t1 - c.window - c.lookback)
                recent_max = std::max(recent_max, v);
        if (t1 >= c.lookback && recent_max > 0.0 && variation >= c.plateau_ratio * recent_max)
            ++plateau_run;
        else
            plateau_run = 0;
        if (plateau_run >= c.plateau_windows) {
            out.reason = "oscillation";
            return out;
        }
        history.emplace_back(t1, variation);
        while (!history.empty() && history.front().first < t1 - c.lookback - c.window)
            history.pop_front();
        if (t1 >= c.horizon) {
            out.reason = "time budget";
            return out;
        }
        t0 = t1;
    }
}

void write_csv(std::ostream& os, const Trajectory& traj)
{
    const int n = traj.params.n();
    os << "t,x";
    for (int i = 1; i <= n; ++i)
        os << ",y_" << i;
    os << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << format_double(traj.times[k]) << ',' << format_double(traj.states[k].x);
        for (int i = 0; i < n; ++i)
            os << ',' << format_double(traj.states[k].y[i]);
        os << '\n';
    }
}

} // namespace ses

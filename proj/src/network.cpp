#include "ses/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace ses {

InfluenceNetwork influence_network(const ModelParams& p)
{
    const Vec bnu = p.b.cwiseProduct(p.nu);
    return influence_network(Mat(bnu.asDiagonal() * p.w));
}

InfluenceNetwork influence_network(const Mat& gamma)
{
    if (gamma.rows() != gamma.cols())
        throw DomainError("influence matrix must be square");
    InfluenceNetwork net;
    net.gamma = gamma;
    net.gamma.diagonal().setZero();
    net.in_degree = net.gamma.rowwise().sum();
    return net;
}

Vec net_influence(const ModelParams& p)
{
    const Mat g = influence_network(p).gamma;
    return g.colwise().sum().transpose() - g.rowwise().sum();
}

std::vector<InfluenceRole> influence_roles(const Vec& net, double tol)
{
    const double scale = std::max(1.0, net.cwiseAbs().maxCoeff());
    std::vector<InfluenceRole> roles;
    for (Eigen::Index i = 0; i < net.size(); ++i) {
        if (std::abs(net[i]) <= tol * scale)
            roles.push_back(InfluenceRole::neutral);
        else
            roles.push_back(net[i] > 0 ? InfluenceRole::leader : InfluenceRole::follower);
    }
    return roles;
}

const char* to_string(InfluenceRole r)
{
    switch (r) {
    case InfluenceRole::leader:
        return "leader";
    case InfluenceRole::follower:
        return "follower";
    default:
        return "neutral";
    }
}

void validate_partition(const Partition& part, int n)
{
    std::vector<int> seen(n, 0);
    for (const auto& g : part) {
        if (g.empty())
            throw DomainError("partition contains an empty group");
        for (int i : g) {
            if (i < 0 || i >= n)
                throw DomainError("partition index " + std::to_string(i) + " out of range");
            if (seen[i]++)
                throw DomainError("agent " + std::to_string(i) + " appears in two groups");
        }
    }
    for (int i = 0; i < n; ++i)
        if (!seen[i])
            throw DomainError("agent " + std::to_string(i) + " is not covered by the partition");
}

Partition single_group(int n)
{
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return {all};
}

namespace {

bool uniform(const Vec& v, const std::vector<int>& idx, double tol)
{
    const double ref = v[idx.front()];
    return std::all_of(idx.begin(), idx.end(), [&](int i) { return near(v[i], ref, tol); });
}

struct Check {
    bool ok = true;
    std::string what;
    std::string detail;

    void fail(std::string w, std::string d)
    {
        if (ok) {
            ok = false;
            what = std::move(w);
            detail = std::move(d);
        }
    }
};

// Definition-1 conditions restricted to one group (sums over members only).
void check_group(const ModelParams& p, const std::vector<int>& g, const std::string& label,
                 double tol, Check& c)
{
    const Vec ba = p.b.cwiseProduct(p.alpha);
    const Vec bn = p.b.cwiseProduct(p.nu);
    if (!uniform(ba, g, tol))
        c.fail("nonuniform b*alpha", label);
    if (!uniform(bn, g, tol))
        c.fail("nonuniform b*nu", label);
    if (!uniform(p.rho, g, tol))
        c.fail("nonuniform rho", label);
    double scale = 1e-300;
    for (int i : g)
        for (int j : g)
            scale = std::max(scale, bn[i] * p.w(i, j));
    for (int i : g) {
        double net = 0.0;
        for (int j : g)
            net += p.w(j, i) * bn[j] - p.w(i, j) * bn[i];
        if (std::abs(net) > tol * std::max(1.0, scale * g.size())) {
            std::ostringstream os;
            os << label << ", agent " << i << " net influence " << net;
            c.fail("leaders/followers present", os.str());
        }
    }
}

double block_sum(const Mat& w, const std::vector<int>& rows, const std::vector<int>& cols, int fixed_row,
                 int fixed_col)
{
    double s = 0.0;
    if (fixed_row >= 0) {
        for (int j : cols)
            s += w(fixed_row, j);
    } else {
        for (int i : rows)
            s += w(i, fixed_col);
    }
    return s;
}

std::string group_label(std::size_t k) { return "group " + std::to_string(k + 1); }

} // namespace

NetworkClassification classify_network(const ModelParams& p, const Partition& part, double tol)
{
    validate(p, false);
    validate_partition(part, p.n());
    NetworkClassification out;

    const Vec net = net_influence(p);
    const double net_scale = std::max(1.0, influence_network(p).in_degree.cwiseAbs().maxCoeff());
    out.self_directed = (net.cwiseAbs().maxCoeff() <= tol * net_scale * p.n());

    Check whole;
    check_group(p, single_group(p.n()).front(), "network", tol, whole);
    out.homogeneous = whole.ok;

    Check chain;
    for (std::size_t k = 0; k < part.size(); ++k)
        check_group(p, part[k], group_label(k), tol, chain);
    const bool groups_ok = chain.ok;
    bool lump12 = groups_ok;
    bool lump3 = groups_ok;
    if (groups_ok) {
        for (std::size_t s = 0; s < part.size(); ++s) {
            for (std::size_t r = 0; r < part.size(); ++r) {
                if (s == r)
                    continue;
                const auto& Ns = part[s];
                const auto& Nr = part[r];
                const double dm = block_sum(p.w, Ns, Nr, Ns.front(), -1);
                const double dp = block_sum(p.w, Ns, Nr, -1, Nr.front());
                const std::string pair = group_label(s) + " <- " + group_label(r);
                for (int i : Ns)
                    if (!near(block_sum(p.w, Ns, Nr, i, -1), dm, tol)) {
                        chain.fail("in-influence not uniform (lump condition 1)", pair);
                        lump12 = false;
                    }
                for (int j : Nr)
                    if (!near(block_sum(p.w, Ns, Nr, -1, j), dp, tol)) {
                        chain.fail("out-influence not uniform (lump condition 2)", pair);
                        lump12 = false;
                    }
                if (lump12 && !near(dm, dp, tol)) {
                    chain.fail("d- != d+ (unequal connected group sizes)", pair);
                    lump3 = false;
                }
            }
        }
    }
    out.semi_homogeneous = groups_ok && lump12;
    out.symmetric_semi_homogeneous = out.semi_homogeneous && lump3;

    if (out.homogeneous)
        out.strongest = "homogeneous";
    else if (out.symmetric_semi_homogeneous)
        out.strongest = "symmetric_semi_homogeneous";
    else if (out.semi_homogeneous)
        out.strongest = "semi_homogeneous";
    else if (out.self_directed)
        out.strongest = "self_directed";
    else
        out.strongest = "none";

    if (!out.homogeneous) {
        // Report the chain of the requested partition unless it passed entirely.
        const Check& first = chain.ok ? whole : chain;
        out.violation = first.what;
        out.violation_detail = first.detail;
    }
    return out;
}

BlockModelParams aggregate_exact(const ModelParams& p, const Partition& part, double tol)
{
    const NetworkClassification cls = classify_network(p, part, tol);
    if (!cls.symmetric_semi_homogeneous) {
        // A single-group partition of a homogeneous network is the m = 1 case.
        if (!(cls.homogeneous && part.size() == 1))
            throw DomainError("network is not symmetric semi-homogeneous for this partition: " +
                              cls.violation + " (" + cls.violation_detail + ")");
    }
    const int m = static_cast<int>(part.size());
    BlockModelParams bm;
    bm.B.resize(m);
    bm.A.resize(m);
    bm.V.resize(m);
    bm.P.resize(m);
    bm.W = Mat::Zero(m, m);
    for (int s = 0; s < m; ++s) {
        const int lead = part[s].front();
        bm.sizes.push_back(static_cast<int>(part[s].size()));
        bm.B[s] = p.b[lead];
        bm.A[s] = p.alpha[lead];
        bm.V[s] = p.nu[lead];
        bm.P[s] = p.rho[lead];
        double bridging = 0.0;
        for (int r = 0; r < m; ++r) {
            if (r == s)
                continue;
            bm.W(s, r) = block_sum(p.w, part[s], part[r], lead, -1);
            bridging += bm.W(s, r);
        }
        bm.W(s, s) = 1.0 - bridging;
    }
    return bm;
}

ModelParams block_as_model(const BlockModelParams& bm)
{
    const int m = bm.m();
    ModelParams p;
    p.b.resize(m);
    p.alpha.resize(m);
    p.nu.resize(m);
    p.rho = bm.P;
    p.w = bm.W;
    p.w.diagonal().setZero();
    for (int k = 0; k < m; ++k) {
        const double eco = bm.sizes[k] * bm.B[k] * bm.A[k];
        const double soc = bm.B[k] * bm.V[k];
        p.b[k] = eco + soc;
        p.alpha[k] = eco / p.b[k];
        p.nu[k] = soc / p.b[k];
    }
    return p;
}

LumpedParams aggregate_self_directed(const ModelParams& p, double tol)
{
    validate(p, false);
    const Vec net = net_influence(p);
    const double scale = std::max(1.0, influence_network(p).in_degree.cwiseAbs().maxCoeff());
    Eigen::Index worst = 0;
    const double worst_val = net.cwiseAbs().maxCoeff(&worst);
    if (worst_val > tol * scale * p.n()) {
        std::ostringstream os;
        os << "network is not self-directed: agent " << worst << " has net influence " << net[worst];
        throw DomainError(os.str());
    }
    const Vec ba = p.b.cwiseProduct(p.alpha);
    LumpedParams lp;
    lp.BA = ba.mean();
    if (!(ba.sum() > 0.0))
        throw DomainError("all agents have zero ecological susceptibility");
    lp.P = ba.dot(p.rho) / ba.sum();
    return lp;
}

AggregationErrors aggregate_approximate(const ModelParams& p, const LumpedParams& guess,
                                        const SystemState& init, double t_end, std::size_t samples,
                                        double tol)
{
    if (!std::isfinite(guess.BA) || !std::isfinite(guess.P))
        throw DomainError("aggregation guess must be finite");
    const LumpedParams exact = aggregate_self_directed(p);

    IntegrateOptions opt;
    opt.samples = samples;
    opt.tol = ode::Tolerances{tol, std::min(1e-7, tol * 100.0), 0.0};
    const Trajectory full = integrate(p, init, t_end, opt);

    // The 2-D model is the homogeneous block with a single lumped agent.
    BlockModelParams lumped;
    lumped.sizes = {p.n()};
    lumped.B = Vec::Constant(1, std::max(guess.BA, 0.0) + 1.0);
    lumped.A = Vec::Constant(1, guess.BA / lumped.B[0]);
    lumped.V = Vec::Constant(1, 1.0 - lumped.A[0]);
    lumped.P = Vec::Constant(1, guess.P);
    lumped.W = Mat::Ones(1, 1);
    SystemState init2;
    init2.x = init.x;
    init2.y = Vec::Constant(1, init.y.sum());
    IntegrateOptions opt2 = opt;
    opt2.sample_times = full.times;
    const Trajectory approx = integrate(block_as_model(lumped), init2, t_end, opt2);

    AggregationErrors err;
    err.times = full.times;
    for (std::size_t k = 0; k < full.times.size(); ++k) {
        const double ex = full.states[k].x - approx.states[k].x;
        const double eY = full.states[k].y.sum() - approx.states[k].y[0];
        err.e_x.push_back(ex);
        err.e_Y.push_back(eY);
        err.sup_e_x = std::max(err.sup_e_x, std::abs(ex));
        err.sup_e_Y = std::max(err.sup_e_Y, std::abs(eY));
    }
    err.final_e_x = err.e_x.back();
    err.final_e_Y = err.e_Y.back();
    err.predicted_e_x = exact.P - guess.P;
    err.predicted_e_Y = guess.P - exact.P;
    return err;
}

LaplacianSpectrum laplacian_spectrum(const InfluenceNetwork& net, double zero_tol)
{
    const Eigen::Index n = net.gamma.rows();
    LaplacianSpectrum out;
    if (n == 0)
        return out;
    Mat L = -net.gamma;
    L.diagonal() = net.in_degree;
    out.symmetric = L.isApprox(L.transpose(), 1e-12) || (L - L.transpose()).cwiseAbs().maxCoeff() == 0.0;
    if (out.symmetric) {
        Eigen::SelfAdjointEigenSolver<Mat> es(L, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < n; ++i)
            out.eigenvalues.emplace_back(es.eigenvalues()[i], 0.0);
    } else {
        Eigen::EigenSolver<Mat> es(L, false);
        for (Eigen::Index i = 0; i < n; ++i)
            out.eigenvalues.push_back(es.eigenvalues()[i]);
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](auto a, auto b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    const double scale = std::max(1.0, net.in_degree.cwiseAbs().maxCoeff());
    for (const auto& ev : out.eigenvalues)
        if (std::abs(ev) <= zero_tol * scale)
            ++out.zero_multiplicity;
    out.algebraic_connectivity = n > 1 ? out.eigenvalues[1].real() : 0.0;

    std::vector<int> comp(n, -1);
    for (Eigen::Index s = 0; s < n; ++s) {
        if (comp[s] >= 0)
            continue;
        std::queue<Eigen::Index> q;
        q.push(s);
        comp[s] = out.components;
        while (!q.empty()) {
            const Eigen::Index u = q.front();
            q.pop();
            for (Eigen::Index v = 0; v < n; ++v)
                if (comp[v] < 0 && (net.gamma(u, v) > 0.0 || net.gamma(v, u) > 0.0)) {
                    comp[v] = out.components;
                    q.push(v);
                }
        }
        ++out.components;
    }
    return out;
}

} // namespace ses

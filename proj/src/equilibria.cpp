#include "ses/equilibria.hpp"

#include <cmath>
#include <sstream>

namespace ses {

namespace {

constexpr double kDegenerateTol = 1e-12;

bool is_zero(double v) { return std::abs(v) <= kDegenerateTol; }
bool is_one(double v) { return std::abs(v - 1.0) <= kDegenerateTol; }

bool all_of(const Vec& v, bool (*pred)(double))
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!pred(v[i]))
            return false;
    return true;
}

bool weights_match(const Mat& w, const Mat& expected)
{
    return w.rows() == expected.rows() && w.cols() == expected.cols() &&
           (w - expected).cwiseAbs().maxCoeff() <= 1e-12;
}

// Product of nu_k over k outside the excluded indices.
double prod_excluding(const Vec& nu, int a = -1, int b = -1)
{
    double p = 1.0;
    for (Eigen::Index k = 0; k < nu.size(); ++k)
        if (k != a && k != b)
            p *= nu[k];
    return p;
}

std::vector<int> zero_nu_agents(const ModelParams& p)
{
    std::vector<int> idx;
    for (int i = 0; i < p.n(); ++i)
        if (is_zero(p.nu[i]))
            idx.push_back(i);
    return idx;
}

// Family on the consensus line of a fully social network.
EquilibriumReport all_social_family(int n, EqSource src, const std::string& assumption)
{
    EquilibriumReport r;
    r.exists = true;
    r.source = src;
    r.family = true;
    r.reason = assumption + ": all nu_i = 1";
    r.family_description = "y_i = c for all i with x = 1 - n c (c <= 1/n), or x = 0 with any common c";
    r.x_bar = 1.0;
    r.y_bar = Vec::Zero(n);
    SystemState origin;
    origin.x = 0.0;
    origin.y = Vec::Zero(n);
    r.extra_points.push_back(origin);
    return r;
}

// Two or more purely ecological agents pin x to each of their rho values.
bool pinned_by_asocial(const ModelParams& p, const std::vector<int>& zeros, EqSource src,
                       EquilibriumReport& r)
{
    if (zeros.size() < 2)
        return false;
    const bool all = static_cast<int>(zeros.size()) == p.n();
    const std::string tag = all ? "all agents asocial" : "more than one asocial agent";
    r = EquilibriumReport{};
    r.source = src;
    const double rho0 = p.rho[zeros.front()];
    for (int k : zeros) {
        if (std::abs(p.rho[k] - rho0) > kDegenerateTol) {
            r.exists = false;
            r.reason = tag + ": agents with nu = 0 have different rho; no equilibrium exists";
            return true;
        }
    }
    r.exists = rho0 >= 0.0;
    r.family = r.exists;
    r.reason = tag + ": agents with nu = 0 share rho, so x = rho";
    if (!r.exists) {
        r.reason += " < 0; unreachable";
        return true;
    }
    r.family_description = "x = rho of the nu = 0 agents; efforts form a one-parameter family";
    r.x_bar = rho0;
    // Member: the family member obtained by solving with all asocial agents
    // sharing effort equally.
    const int n = p.n();
    Mat A = Mat::Zero(n, n);
    Vec rhs = Vec::Zero(n);
    const Mat L = Mat(p.w.rowwise().sum().asDiagonal()) - p.w;
    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (is_zero(p.nu[i]))
            continue;
        A.row(row) = p.nu[i] * L.row(i);
        rhs[row] = p.alpha[i] * (rho0 - p.rho[i]);
        ++row;
    }
    A.row(row).setOnes();
    rhs[row] = 1.0 - rho0;
    ++row;
    for (std::size_t k = 1; k < zeros.size() && row < n; ++k, ++row) {
        A(row, zeros[0]) = 1.0;
        A(row, zeros[k]) = -1.0;
    }
    r.y_bar = A.colPivHouseholderQr().solve(rhs);
    classify_efforts(r);
    return true;
}

void finish_interior(EquilibriumReport& r, const ModelParams& p)
{
    if (r.x_bar < -1e-14) {
        r.exists = false;
        r.reason = "the closed-form stock is negative, so no equilibrium with x >= 0 exists";
        return;
    }
    r.exists = true;
    if (std::abs(r.x_bar) <= 1e-14) {
        r.x_bar = 0.0;
        r.family = true;
        r.family_description = "x = 0 plane: the listed point plus any common shift of all y_i";
    }
    if (all_of(p.rho, [](double v) { return is_one(v); }))
        r.note = "full thresholds: all rho_i = 1";
    classify_efforts(r);
}

} // namespace

const char* to_string(EqSource s)
{
    switch (s) {
    case EqSource::closed_form_1:
        return "closed_form_1";
    case EqSource::closed_form_2:
        return "closed_form_2";
    case EqSource::closed_form_well_mixed:
        return "closed_form_well_mixed";
    case EqSource::closed_form_star:
        return "closed_form_star";
    default:
        return "numerical";
    }
}

const char* to_string(EffortClass c)
{
    switch (c) {
    case EffortClass::self_reliant:
        return "self_reliant";
    case EffortClass::free_riding:
        return "free_riding";
    case EffortClass::boundary:
        return "boundary";
    case EffortClass::restorative:
        return "restorative";
    default:
        return "undetermined";
    }
}

const char* to_string(Sign s)
{
    switch (s) {
    case Sign::plus:
        return "+";
    case Sign::minus:
        return "-";
    case Sign::zero:
        return "0";
    default:
        return "?";
    }
}

void classify_efforts(EquilibriumReport& r, double tol)
{
    r.riders.clear();
    r.subsidizers.clear();
    bool any_zero = false;
    std::vector<int> pos;
    for (Eigen::Index i = 0; i < r.y_bar.size(); ++i) {
        if (std::abs(r.y_bar[i]) < tol)
            any_zero = true;
        else if (r.y_bar[i] > 0)
            pos.push_back(static_cast<int>(i));
        else
            r.subsidizers.push_back(static_cast<int>(i));
    }
    if (any_zero)
        r.classification = EffortClass::boundary;
    else if (r.subsidizers.empty())
        r.classification = EffortClass::self_reliant;
    else if (pos.empty()) {
        r.classification = EffortClass::restorative;
        if (r.note.empty())
            r.note = "negative aggregate effort";
    } else {
        r.classification = EffortClass::free_riding;
        r.riders = pos;
    }
}

EquilibriumReport equilibrium_single(const ModelParams& p)
{
    if (p.n() != 1)
        throw DomainError("single-agent equilibrium needs n = 1");
    EquilibriumReport r;
    r.source = EqSource::closed_form_1;
    const double rho = p.rho[0];
    if (rho < 0.0) {
        r.reason = "negative environmentalism unreachable";
        return r;
    }
    r.exists = true;
    r.x_bar = rho;
    r.y_bar = Vec::Constant(1, 1.0 - rho);
    if (is_zero(p.alpha[0])) {
        r.family = true;
        r.family_description = "alpha = 0 freezes effort: every (x, y) with x = 1 - y or x = 0 is fixed";
    } else if (rho == 0.0) {
        r.family = true;
        r.family_description = "x = 0 with any effort is fixed";
    }
    classify_efforts(r);
    return r;
}

DualEquilibrium dual_closed_form(double nu1, double nu2, double rho1, double rho2)
{
    const double a1 = 1.0 - nu1;
    const double a2 = 1.0 - nu2;
    const double D = a2 * nu1 + a1 * nu2;
    DualEquilibrium e{};
    e.x = (a1 * nu2 * rho1 + a2 * nu1 * rho2) / D;
    const double common = (1.0 - rho1) * a1 * nu2 + (1.0 - rho2) * a2 * nu1;
    e.y1 = (common - (rho1 - rho2) * a1 * a2) / (2.0 * D);
    e.y2 = (common - (rho2 - rho1) * a1 * a2) / (2.0 * D);
    return e;
}

EquilibriumReport equilibrium_dual(const ModelParams& p)
{
    if (p.n() != 2 || !weights_match(p.w, dyad_weights()))
        throw DomainError("dual equilibrium needs two agents with w_12 = w_21 = 1");
    EquilibriumReport r;
    r.source = EqSource::closed_form_2;
    const double nu1 = p.nu[0], nu2 = p.nu[1];
    if (is_zero(nu1) && is_zero(nu2)) {
        if (std::abs(p.rho[0] - p.rho[1]) > kDegenerateTol) {
            r.reason = "nu1 = nu2 = 0 with rho1 != rho2: no equilibrium exists";
            return r;
        }
        r.exists = p.rho[0] >= 0.0;
        r.reason = "nu1 = nu2 = 0 with rho1 = rho2: infinitely many equilibria";
        r.family = true;
        r.family_description = "x = rho, y1 + y2 = 1 - rho";
        r.x_bar = p.rho[0];
        r.y_bar = Vec::Constant(2, 0.5 * (1.0 - p.rho[0]));
        classify_efforts(r);
        return r;
    }
    if (is_one(nu1) && is_one(nu2)) {
        r = all_social_family(2, EqSource::closed_form_2, "nu1 = nu2 = 1");
        r.reason = "nu1 = nu2 = 1: infinitely many equilibria";
        classify_efforts(r);
        return r;
    }
    const DualEquilibrium e = dual_closed_form(nu1, nu2, p.rho[0], p.rho[1]);
    r.x_bar = e.x;
    r.y_bar = Vec(2);
    r.y_bar << e.y1, e.y2;
    finish_interior(r, p);
    return r;
}

EquilibriumReport equilibrium_well_mixed(const ModelParams& p)
{
    const int n = p.n();
    if (n < 2 || !weights_match(p.w, uniform_weights(n)))
        throw DomainError("well-mixed equilibrium needs w_ij = 1/(n-1) off the diagonal");
    if (n == 2)
        return equilibrium_dual(p);
    EquilibriumReport r;
    if (all_of(p.nu, [](double v) { return is_one(v); })) {
        r = all_social_family(n, EqSource::closed_form_well_mixed, "all agents social");
        classify_efforts(r);
        return r;
    }
    if (pinned_by_asocial(p, zero_nu_agents(p), EqSource::closed_form_well_mixed, r))
        return r;
    r.source = EqSource::closed_form_well_mixed;
    const Vec& nu = p.nu;
    const Vec& rho = p.rho;
    double den = n * prod_excluding(nu);
    for (int j = 0; j < n; ++j)
        den -= prod_excluding(nu, j);
    double num = 0.0;
    for (int i = 0; i < n; ++i)
        num += rho[i] * (nu[i] - 1.0) * prod_excluding(nu, i);
    r.x_bar = num / den;
    r.y_bar.resize(n);
    for (int i = 0; i < n; ++i) {
        double pair_sum = 0.0;
        double weighted = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double pij = prod_excluding(nu, i, j);
            pair_sum += pij;
            weighted += rho[j] * (nu[j] - 1.0) * pij;
        }
        const double own = rho[i] * (nu[i] - 1.0) * ((1.0 - n) * pair_sum + n * (n - 2.0) * prod_excluding(nu, i));
        r.y_bar[i] = 1.0 / n + (own - (1.0 - n + n * nu[i]) * weighted) / (n * den);
    }
    if (all_of(rho, [](double v) { return is_zero(v); })) {
        r.exists = true;
        r.x_bar = 0.0;
        r.family = true;
        r.reason = "zero thresholds: all rho_i = 0";
        r.family_description = "x = 0 with all y_i equal";
        classify_efforts(r);
        return r;
    }
    finish_interior(r, p);
    return r;
}

EquilibriumReport equilibrium_star(const ModelParams& p)
{
    const int n = p.n();
    if (n < 2 || !weights_match(p.w, star_weights(n)))
        throw DomainError("star equilibrium needs hub 0 with w_0j = 1/(n-1) and leaves w_j0 = 1");
    EquilibriumReport r;
    if (all_of(p.nu, [](double v) { return is_one(v); })) {
        r = all_social_family(n, EqSource::closed_form_star, "all agents social");
        r.note = "(1,0,...,0) and (0,...,0) are members of this family";
        classify_efforts(r);
        return r;
    }
    if (pinned_by_asocial(p, zero_nu_agents(p), EqSource::closed_form_star, r))
        return r;
    r.source = EqSource::closed_form_star;
    const Vec& nu = p.nu;
    const Vec& rho = p.rho;
    const Vec& al = p.alpha;
    const double hub_w = (n - 1.0) * (1.0 - nu[0]) * prod_excluding(nu, 0);
    double num = hub_w * rho[0];
    double den = hub_w;
    for (int i = 1; i < n; ++i) {
        const double wi = (1.0 - nu[i]) * prod_excluding(nu, i);
        num += wi * rho[i];
        den += wi;
    }
    r.x_bar = num / den;
    const double x = r.x_bar;
    r.y_bar.resize(n);
    if (!is_zero(nu[0])) {
        r.y_bar[0] = ((n - 1.0) * al[0] * (x - rho[0]) / nu[0] + 1.0 - x) / n;
    } else {
        double s = 1.0 - x;
        for (int i = 1; i < n; ++i)
            s -= al[i] * (x - rho[i]) / nu[i];
        r.y_bar[0] = s / n;
    }
    int asocial_leaf = -1;
    double total = r.y_bar[0];
    for (int i = 1; i < n; ++i) {
        if (is_zero(nu[i])) {
            asocial_leaf = i;
            continue;
        }
        r.y_bar[i] = r.y_bar[0] + al[i] * (x - rho[i]) / nu[i];
        total += r.y_bar[i];
    }
    if (asocial_leaf >= 0)
        r.y_bar[asocial_leaf] = 1.0 - x - total;
    if (all_of(rho, [](double v) { return is_zero(v); })) {
        r.exists = true;
        r.x_bar = 0.0;
        r.family = true;
        r.reason = "zero thresholds: all rho_i = 0";
        r.family_description = "x = 0 with all y_i equal";
        classify_efforts(r);
        return r;
    }
    finish_interior(r, p);
    return r;
}

EquilibriumReport equilibrium_numerical(const ModelParams& p, const SystemState& init,
                                        const ConvergenceCriteria& c)
{
    EquilibriumReport r;
    r.source = EqSource::numerical;
    const SteadyState ss = steady_state(p, init, c);
    r.x_bar = ss.state.x;
    r.y_bar = ss.state.y;
    if (!ss.converged) {
        std::ostringstream os;
        os << "no convergence (" << ss.reason << ") by t = " << ss.t
           << "; this does not establish that no equilibrium exists";
        r.reason = os.str();
        return r;
    }
    r.exists = true;
    r.reason = "simulated steady state";
    classify_efforts(r);
    return r;
}

EquilibriumReport equilibrium(const ModelParams& p, const SystemState* init)
{
    const int n = p.n();
    if (n == 1)
        return equilibrium_single(p);
    if (n == 2 && weights_match(p.w, dyad_weights()))
        return equilibrium_dual(p);
    if (weights_match(p.w, uniform_weights(n)))
        return equilibrium_well_mixed(p);
    if (weights_match(p.w, star_weights(n)))
        return equilibrium_star(p);
    SystemState s;
    if (init) {
        s = *init;
    } else {
        s.x = 0.5;
        s.y = Vec::Zero(n);
    }
    return equilibrium_numerical(p, s);
}

namespace {

Sign bucket(double v, double tol)
{
    if (std::abs(v) < tol)
        return Sign::zero;
    return v > 0 ? Sign::plus : Sign::minus;
}

// Each derivative factors as (fixed sign) * [2 nu_k - 1] * [rho1 - rho2].
struct Factored {
    int sign;
    bool ambiguous;
    bool rho_gap;
};

constexpr Factored kFactors[3][4] = {
    {{-1, false, true}, {+1, false, true}, {+1, false, false}, {+1, false, false}},
    {{+1, false, true}, {-1, true, true}, {-1, false, false}, {+1, true, false}},
    {{+1, true, true}, {-1, false, true}, {+1, true, false}, {-1, false, false}},
};

} // namespace

std::array<std::array<Sign, 4>, 3> comparative_statics_regime(int rho_order)
{
    std::array<std::array<Sign, 4>, 3> t{};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) {
            const Factored& f = kFactors[r][c];
            if (f.rho_gap && rho_order == 0)
                t[r][c] = Sign::zero;
            else if (f.ambiguous)
                t[r][c] = Sign::ambiguous;
            else {
                const int s = f.sign * (f.rho_gap ? rho_order : 1);
                t[r][c] = s > 0 ? Sign::plus : Sign::minus;
            }
        }
    }
    return t;
}

ComparativeStatics comparative_statics_dual(const ModelParams& p, double zero_tol)
{
    if (p.n() != 2)
        throw DomainError("comparative statics need the dual network");
    const double n1 = p.nu[0], n2 = p.nu[1];
    const double r1 = p.rho[0], r2 = p.rho[1];
    if ((is_zero(n1) && is_zero(n2)) || (is_one(n1) && is_one(n2)))
        throw DomainError("degenerate social relevances: nu1 = nu2 = 0 or nu1 = nu2 = 1");
    const double S = n1 + n2 - 2.0 * n1 * n2;
    const double S2 = S * S;
    const double gap = r1 - r2;
    ComparativeStatics cs;
    auto& d = cs.derivative;
    d[0] = {-n2 * (1.0 - n2) * gap / S2, n1 * (1.0 - n1) * gap / S2, n2 * (1.0 - n1) / S, n1 * (1.0 - n2) / S};
    d[1] = {(1.0 - n2) * gap / (2.0 * S2), -(1.0 - n1) * (2.0 * n1 - 1.0) * gap / (2.0 * S2),
            -(1.0 - n1) / (2.0 * S), (1.0 - 2.0 * n1) * (1.0 - n2) / (2.0 * S)};
    d[2] = {(1.0 - n2) * (2.0 * n2 - 1.0) * gap / (2.0 * S2), -(1.0 - n1) * gap / (2.0 * S2),
            (1.0 - n1) * (1.0 - 2.0 * n2) / (2.0 * S), -(1.0 - n2) / (2.0 * S)};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            cs.evaluated[r][c] = bucket(d[r][c], zero_tol);
    cs.rho_order = std::abs(gap) < zero_tol ? 0 : (gap > 0 ? 1 : -1);
    cs.regime = comparative_statics_regime(cs.rho_order);
    return cs;
}

} // namespace ses

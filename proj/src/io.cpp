#include "ses/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace ses {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

Json num(double v)
{
    if (std::isfinite(v))
        return v;
    return format_double(v);
}

double num(const Json& j)
{
    if (j.is_number())
        return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("not a number: " + s);
}

Json vec(const Vec& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(num(v[i]));
    return a;
}

Vec vec(const Json& j)
{
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = num(j[i]);
    return v;
}

Json mat(const Mat& m)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        a.push_back(vec(Vec(m.row(i).transpose())));
    return a;
}

Mat mat(const Json& j)
{
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        m.row(i) = vec(j[static_cast<std::size_t>(i)]).transpose();
    return m;
}

Json dvec(const std::vector<double>& v)
{
    Json a = Json::array();
    for (double x : v)
        a.push_back(num(x));
    return a;
}

std::vector<double> dvec(const Json& j)
{
    std::vector<double> v;
    for (const auto& e : j)
        v.push_back(num(e));
    return v;
}

template <class C>
Json cvec(const C& ev)
{
    Json a = Json::array();
    for (const auto& z : ev)
        a.push_back(Json::array({num(z.real()), num(z.imag())}));
    return a;
}

std::complex<double> cnum(const Json& j)
{
    return {num(j[0]), num(j[1])};
}

template <class E, std::size_t N>
E enum_from(const Json& j, const std::array<E, N>& all)
{
    const std::string s = j.get<std::string>();
    for (E e : all)
        if (s == to_string(e))
            return e;
    throw std::invalid_argument("unknown enum value: " + s);
}

constexpr std::array<EqSource, 5> kSources{EqSource::closed_form_1, EqSource::closed_form_2,
                                           EqSource::closed_form_well_mixed, EqSource::closed_form_star,
                                           EqSource::numerical};
constexpr std::array<EffortClass, 5> kClasses{EffortClass::self_reliant, EffortClass::free_riding,
                                              EffortClass::boundary, EffortClass::restorative,
                                              EffortClass::undetermined};
constexpr std::array<LocalClass, 6> kLocal{LocalClass::stable_node,   LocalClass::stable_spiral,
                                           LocalClass::stable_degenerate, LocalClass::routh_stable,
                                           LocalClass::routh_unstable, LocalClass::inconclusive};
constexpr std::array<GlobalStatus, 3> kGlobal{GlobalStatus::holds, GlobalStatus::fails,
                                              GlobalStatus::not_applicable};
constexpr std::array<ocp::Regime, 2> kRegime{ocp::Regime::sustainable, ocp::Regime::unsustainable};
constexpr std::array<ocp::Sustainability, 3> kSust{ocp::Sustainability::strongly_sustainable,
                                                   ocp::Sustainability::sustainable,
                                                   ocp::Sustainability::unsustainable};

std::string join(const std::string& path, const char* key)
{
    return path.empty() ? std::string(key) : path + "." + key;
}

} // namespace

Json load_json_file(const std::string& file)
{
    std::ifstream in(file);
    if (!in)
        throw ConfigError(file, "cannot open config file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(file, std::string("invalid JSON: ") + e.what());
    }
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path)
{
    if (!j.is_object())
        throw ConfigError(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            ok = ok || it.key() == k;
        if (!ok)
            throw ConfigError(join(path, it.key().c_str()), "unknown key");
    }
}

double get_number(const Json& j, const char* key, const std::string& path)
{
    if (!j.contains(key))
        throw ConfigError(join(path, key), "missing");
    if (!j[key].is_number())
        throw ConfigError(join(path, key), "expected a number");
    return j[key].get<double>();
}

Vec get_vector(const Json& j, const char* key, const std::string& path)
{
    const std::string p = join(path, key);
    if (!j.contains(key))
        throw ConfigError(p, "missing");
    const Json& a = j[key];
    if (!a.is_array())
        throw ConfigError(p, "expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number())
            throw ConfigError(p + "[" + std::to_string(i) + "]", "expected a number");
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    }
    return v;
}

ModelParams model_params_from_config(const Json& j, const std::string& path)
{
    check_keys(j, {"b", "alpha", "nu", "rho", "w", "topology"}, path);
    const Vec b = get_vector(j, "b", path);
    const Vec rho = get_vector(j, "rho", path);
    const auto n = b.size();
    if (n == 0)
        throw ConfigError(join(path, "b"), "needs at least one agent");
    if (rho.size() != n)
        throw ConfigError(join(path, "rho"), "length differs from b");
    if (j.contains("alpha") == j.contains("nu"))
        throw ConfigError(path, "give exactly one of alpha and nu");
    const char* rel = j.contains("alpha") ? "alpha" : "nu";
    const Vec r = get_vector(j, rel, path);
    if (r.size() != n)
        throw ConfigError(join(path, rel), "length differs from b");
    if (j.contains("w") == j.contains("topology"))
        throw ConfigError(path, "give exactly one of w and topology");
    Mat w;
    if (j.contains("w")) {
        const Json& a = j["w"];
        const std::string p = join(path, "w");
        if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n)
            throw ConfigError(p, "expected an n x n array");
        w.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Json& row = a[static_cast<std::size_t>(i)];
            const std::string pr = p + "[" + std::to_string(i) + "]";
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw ConfigError(pr, "expected a row of length n");
            for (Eigen::Index k = 0; k < n; ++k) {
                if (!row[static_cast<std::size_t>(k)].is_number())
                    throw ConfigError(pr + "[" + std::to_string(k) + "]", "expected a number");
                w(i, k) = row[static_cast<std::size_t>(k)].get<double>();
            }
        }
    } else {
        const std::string p = join(path, "topology");
        if (!j["topology"].is_string())
            throw ConfigError(p, "expected a string");
        const std::string t = j["topology"].get<std::string>();
        const int ni = static_cast<int>(n);
        if (t == "single") {
            if (n != 1)
                throw ConfigError(p, "single needs one agent");
            w = Mat::Zero(1, 1);
        } else if (t == "dual") {
            if (n != 2)
                throw ConfigError(p, "dual needs two agents");
            w = dyad_weights();
        } else if (t == "well-mixed") {
            if (n < 2)
                throw ConfigError(p, "well-mixed needs at least two agents");
            w = uniform_weights(ni);
        } else if (t == "star") {
            if (n < 2)
                throw ConfigError(p, "star needs at least two agents");
            w = star_weights(ni);
        } else {
            throw ConfigError(p, "unknown topology '" + t + "'");
        }
    }
    return j.contains("alpha") ? make_params(b, r, rho, w) : make_params_nu(b, r, rho, w);
}

void to_json(Json& j, const ModelParams& p)
{
    j = Json{{"b", vec(p.b)}, {"alpha", vec(p.alpha)}, {"nu", vec(p.nu)}, {"rho", vec(p.rho)}, {"w", mat(p.w)}};
}

void from_json(const Json& j, ModelParams& p)
{
    p.b = vec(j.at("b"));
    p.alpha = vec(j.at("alpha"));
    p.nu = vec(j.at("nu"));
    p.rho = vec(j.at("rho"));
    p.w = mat(j.at("w"));
}

void to_json(Json& j, const SystemState& s)
{
    j = Json{{"x", num(s.x)}, {"y", vec(s.y)}};
}

void from_json(const Json& j, SystemState& s)
{
    s.x = num(j.at("x"));
    s.y = vec(j.at("y"));
}

void to_json(Json& j, const SteadyState& s)
{
    j = Json{{"converged", s.converged},
             {"state", s.state},
             {"t", num(s.t)},
             {"reason", s.reason},
             {"variation", num(s.variation)}};
}

void from_json(const Json& j, SteadyState& s)
{
    s.converged = j.at("converged").get<bool>();
    s.state = j.at("state").get<SystemState>();
    s.t = num(j.at("t"));
    s.reason = j.at("reason").get<std::string>();
    s.variation = num(j.at("variation"));
}

void to_json(Json& j, const EquilibriumReport& r)
{
    j = Json{{"exists", r.exists},
             {"reason", r.reason},
             {"x_bar", num(r.x_bar)},
             {"y_bar", vec(r.y_bar)},
             {"classification", to_string(r.classification)},
             {"riders", r.riders},
             {"subsidizers", r.subsidizers},
             {"source", to_string(r.source)},
             {"family", r.family},
             {"family_description", r.family_description},
             {"extra_points", r.extra_points},
             {"note", r.note}};
}

void from_json(const Json& j, EquilibriumReport& r)
{
    r.exists = j.at("exists").get<bool>();
    r.reason = j.at("reason").get<std::string>();
    r.x_bar = num(j.at("x_bar"));
    r.y_bar = vec(j.at("y_bar"));
    r.classification = enum_from(j.at("classification"), kClasses);
    r.riders = j.at("riders").get<std::vector<int>>();
    r.subsidizers = j.at("subsidizers").get<std::vector<int>>();
    r.source = enum_from(j.at("source"), kSources);
    r.family = j.at("family").get<bool>();
    r.family_description = j.at("family_description").get<std::string>();
    r.extra_points = j.at("extra_points").get<std::vector<SystemState>>();
    r.note = j.at("note").get<std::string>();
}

void to_json(Json& j, const OracleVerdict& v)
{
    j = Json{{"trials", v.trials},
             {"converged", v.converged},
             {"fraction", num(v.fraction)},
             {"max_abs_state", num(v.max_abs_state)},
             {"reasons", v.reasons}};
}

void from_json(const Json& j, OracleVerdict& v)
{
    v.trials = j.at("trials").get<int>();
    v.converged = j.at("converged").get<int>();
    v.fraction = num(j.at("fraction"));
    v.max_abs_state = num(j.at("max_abs_state"));
    v.reasons = j.at("reasons").get<std::vector<std::string>>();
}

void to_json(Json& j, const StabilityReport& r)
{
    Json values = Json::object();
    for (const auto& [k, v] : r.values)
        values[k] = num(v);
    j = Json{{"local", to_string(r.local)},
             {"eigenvalues", cvec(r.eigenvalues)},
             {"global", to_string(r.global)},
             {"values", values},
             {"note", r.note},
             {"oracle", r.oracle ? Json(*r.oracle) : Json(nullptr)}};
}

void from_json(const Json& j, StabilityReport& r)
{
    r.local = enum_from(j.at("local"), kLocal);
    r.eigenvalues.clear();
    for (const auto& e : j.at("eigenvalues"))
        r.eigenvalues.push_back(cnum(e));
    r.global = enum_from(j.at("global"), kGlobal);
    r.values.clear();
    for (auto it = j.at("values").begin(); it != j.at("values").end(); ++it)
        r.values[it.key()] = num(it.value());
    r.note = j.at("note").get<std::string>();
    if (j.at("oracle").is_null())
        r.oracle.reset();
    else
        r.oracle = j.at("oracle").get<OracleVerdict>();
}

void to_json(Json& j, const NetworkClassification& c)
{
    j = Json{{"self_directed", c.self_directed},
             {"homogeneous", c.homogeneous},
             {"semi_homogeneous", c.semi_homogeneous},
             {"symmetric_semi_homogeneous", c.symmetric_semi_homogeneous},
             {"strongest", c.strongest},
             {"violation", c.violation},
             {"violation_detail", c.violation_detail}};
}

void from_json(const Json& j, NetworkClassification& c)
{
    c.self_directed = j.at("self_directed").get<bool>();
    c.homogeneous = j.at("homogeneous").get<bool>();
    c.semi_homogeneous = j.at("semi_homogeneous").get<bool>();
    c.symmetric_semi_homogeneous = j.at("symmetric_semi_homogeneous").get<bool>();
    c.strongest = j.at("strongest").get<std::string>();
    c.violation = j.at("violation").get<std::string>();
    c.violation_detail = j.at("violation_detail").get<std::string>();
}

void to_json(Json& j, const LaplacianSpectrum& s)
{
    j = Json{{"eigenvalues", cvec(s.eigenvalues)},
             {"symmetric", s.symmetric},
             {"zero_multiplicity", s.zero_multiplicity},
             {"components", s.components},
             {"algebraic_connectivity", num(s.algebraic_connectivity)}};
}

void from_json(const Json& j, LaplacianSpectrum& s)
{
    s.eigenvalues.clear();
    for (const auto& e : j.at("eigenvalues"))
        s.eigenvalues.push_back(cnum(e));
    s.symmetric = j.at("symmetric").get<bool>();
    s.zero_multiplicity = j.at("zero_multiplicity").get<int>();
    s.components = j.at("components").get<int>();
    s.algebraic_connectivity = num(j.at("algebraic_connectivity"));
}

void to_json(Json& j, const BlockModelParams& b)
{
    j = Json{{"sizes", b.sizes}, {"B", vec(b.B)}, {"A", vec(b.A)}, {"V", vec(b.V)}, {"P", vec(b.P)}, {"W", mat(b.W)}};
}

void from_json(const Json& j, BlockModelParams& b)
{
    b.sizes = j.at("sizes").get<std::vector<int>>();
    b.B = vec(j.at("B"));
    b.A = vec(j.at("A"));
    b.V = vec(j.at("V"));
    b.P = vec(j.at("P"));
    b.W = mat(j.at("W"));
}

void to_json(Json& j, const LumpedParams& l)
{
    j = Json{{"BA", num(l.BA)}, {"P", num(l.P)}};
}

void from_json(const Json& j, LumpedParams& l)
{
    l.BA = num(j.at("BA"));
    l.P = num(j.at("P"));
}

void to_json(Json& j, const AggregationErrors& e)
{
    j = Json{{"times", dvec(e.times)},
             {"e_x", dvec(e.e_x)},
             {"e_Y", dvec(e.e_Y)},
             {"sup_e_x", num(e.sup_e_x)},
             {"sup_e_Y", num(e.sup_e_Y)},
             {"final_e_x", num(e.final_e_x)},
             {"final_e_Y", num(e.final_e_Y)},
             {"predicted_e_x", num(e.predicted_e_x)},
             {"predicted_e_Y", num(e.predicted_e_Y)}};
}

void from_json(const Json& j, AggregationErrors& e)
{
    e.times = dvec(j.at("times"));
    e.e_x = dvec(j.at("e_x"));
    e.e_Y = dvec(j.at("e_Y"));
    e.sup_e_x = num(j.at("sup_e_x"));
    e.sup_e_Y = num(j.at("sup_e_Y"));
    e.final_e_x = num(j.at("final_e_x"));
    e.final_e_Y = num(j.at("final_e_Y"));
    e.predicted_e_x = num(j.at("predicted_e_x"));
    e.predicted_e_Y = num(j.at("predicted_e_Y"));
}

void to_json(Json& j, const OcpReport& r)
{
    j = Json{{"params", r.params},
             {"sustainability", to_string(r.sustainability)},
             {"regime", to_string(r.regime)},
             {"saddle", r.has_saddle ? Json(r.saddle) : Json(nullptr)},
             {"residual", num(r.residual)},
             {"diagnostics", r.diagnostics},
             {"x_final", num(r.x_final)},
             {"y_final", num(r.y_final)},
             {"log_x_final", num(r.log_x_final)},
             {"discounted_utility", num(r.discounted_utility)},
             {"table_size", r.table_size}};
}

void from_json(const Json& j, OcpReport& r)
{
    r.params = j.at("params").get<ocp::OcpParams>();
    r.sustainability = enum_from(j.at("sustainability"), kSust);
    r.regime = enum_from(j.at("regime"), kRegime);
    r.has_saddle = !j.at("saddle").is_null();
    if (r.has_saddle)
        r.saddle = j.at("saddle").get<ocp::Saddle>();
    r.residual = num(j.at("residual"));
    r.diagnostics = j.at("diagnostics").get<std::string>();
    r.x_final = num(j.at("x_final"));
    r.y_final = num(j.at("y_final"));
    r.log_x_final = num(j.at("log_x_final"));
    r.discounted_utility = num(j.at("discounted_utility"));
    r.table_size = j.at("table_size").get<int>();
}

namespace ocp {

void to_json(Json& j, const OcpParams& p)
{
    j = Json{{"delta", num(p.delta)}, {"mu", num(p.mu)}, {"beta_el", num(p.beta_el)}, {"x0", num(p.x0)}};
}

void from_json(const Json& j, OcpParams& p)
{
    p.delta = num(j.at("delta"));
    p.mu = num(j.at("mu"));
    p.beta_el = num(j.at("beta_el"));
    p.x0 = num(j.at("x0"));
}

void to_json(Json& j, const Saddle& s)
{
    j = Json{{"z_hat", num(s.z_hat)},
             {"lambda_hat", num(s.lambda_hat)},
             {"y_hat", num(s.y_hat)},
             {"sigma_stable", num(s.sigma_stable)},
             {"sigma_unstable", num(s.sigma_unstable)},
             {"slope", num(s.slope)}};
}

void from_json(const Json& j, Saddle& s)
{
    s.z_hat = num(j.at("z_hat"));
    s.lambda_hat = num(j.at("lambda_hat"));
    s.y_hat = num(j.at("y_hat"));
    s.sigma_stable = num(j.at("sigma_stable"));
    s.sigma_unstable = num(j.at("sigma_unstable"));
    s.slope = num(j.at("slope"));
}

} // namespace ocp

namespace games {

void to_json(Json& j, const TragicnessReport& t)
{
    j = Json{{"nash", {num(t.nash[0]), num(t.nash[1])}},
             {"line", {num(t.line.A), num(t.line.B), num(t.line.C)}},
             {"tragicness", num(t.tragicness)},
             {"x_bar", num(t.x_bar)},
             {"consumption", {num(t.consumption[0]), num(t.consumption[1])}}};
}

void from_json(const Json& j, TragicnessReport& t)
{
    t.nash = {num(j.at("nash")[0]), num(j.at("nash")[1])};
    t.line = {num(j.at("line")[0]), num(j.at("line")[1]), num(j.at("line")[2])};
    t.tragicness = num(j.at("tragicness"));
    t.x_bar = num(j.at("x_bar"));
    t.consumption = {num(j.at("consumption")[0]), num(j.at("consumption")[1])};
}

void to_json(Json& j, const DiscreteGame& g)
{
    Json pay = Json::array(), stock = Json::array();
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            pay.push_back({num(g.payoff[s][t][0]), num(g.payoff[s][t][1])});
            stock.push_back(num(g.stock[s][t]));
        }
    auto profiles = [](const std::vector<Profile>& v) {
        Json a = Json::array();
        for (const auto& [s, t] : v)
            a.push_back({s, t});
        return a;
    };
    j = Json{{"rho_L", num(g.rho_L)},
             {"rho_H", num(g.rho_H)},
             {"nu_L", num(g.nu_L)},
             {"nu_H", num(g.nu_H)},
             {"b", num(g.b)},
             {"payoff", pay},
             {"stock", stock},
             {"ranks", g.ranks},
             {"nash", profiles(g.nash)},
             {"pareto", profiles(g.pareto)},
             {"type", g.type},
             {"label", g.label},
             {"tragic", g.tragic},
             {"excluded", g.excluded},
             {"exclusion", g.exclusion}};
}

void from_json(const Json& j, DiscreteGame& g)
{
    g.rho_L = num(j.at("rho_L"));
    g.rho_H = num(j.at("rho_H"));
    g.nu_L = num(j.at("nu_L"));
    g.nu_H = num(j.at("nu_H"));
    g.b = num(j.at("b"));
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            const Json& c = j.at("payoff")[static_cast<std::size_t>(2 * s + t)];
            g.payoff[s][t] = {num(c[0]), num(c[1])};
            g.stock[s][t] = num(j.at("stock")[static_cast<std::size_t>(2 * s + t)]);
        }
    g.ranks = j.at("ranks").get<std::array<int, 4>>();
    auto profiles = [](const Json& a) {
        std::vector<Profile> v;
        for (const auto& e : a)
            v.emplace_back(e[0].get<int>(), e[1].get<int>());
        return v;
    };
    g.nash = profiles(j.at("nash"));
    g.pareto = profiles(j.at("pareto"));
    g.type = j.at("type").get<int>();
    g.label = j.at("label").get<std::string>();
    g.tragic = j.at("tragic").get<bool>();
    g.excluded = j.at("excluded").get<bool>();
    g.exclusion = j.at("exclusion").get<std::string>();
}

} // namespace games

namespace learning {

void to_json(Json& j, const LearningParams& p)
{
    j = Json{{"nu1", num(p.nu1)}, {"nu2", num(p.nu2)}, {"b1", num(p.b1)}, {"b2", num(p.b2)}};
}

void from_json(const Json& j, LearningParams& p)
{
    p.nu1 = num(j.at("nu1"));
    p.nu2 = num(j.at("nu2"));
    p.b1 = num(j.at("b1"));
    p.b2 = num(j.at("b2"));
}

void to_json(Json& j, const LearningState& s)
{
    j = Json{{"x", num(s.x)}, {"y1", num(s.y1)}, {"y2", num(s.y2)}, {"rho1", num(s.rho1)}, {"rho2", num(s.rho2)}};
}

void from_json(const Json& j, LearningState& s)
{
    s.x = num(j.at("x"));
    s.y1 = num(j.at("y1"));
    s.y2 = num(j.at("y2"));
    s.rho1 = num(j.at("rho1"));
    s.rho2 = num(j.at("rho2"));
}

void to_json(Json& j, const LearningStability& s)
{
    j = Json{{"eigenvalues", cvec(s.eigenvalues)},
             {"published_eigenvalues", {num(s.published_eigenvalues[0]), num(s.published_eigenvalues[1])}},
             {"cond1", num(s.cond1)},
             {"cond2", num(s.cond2)},
             {"rho_stable", s.rho_stable},
             {"cond1_holds", s.cond1_holds},
             {"cond2_holds", s.cond2_holds},
             {"stable", s.stable}};
}

void from_json(const Json& j, LearningStability& s)
{
    s.eigenvalues = {cnum(j.at("eigenvalues")[0]), cnum(j.at("eigenvalues")[1])};
    s.published_eigenvalues = {num(j.at("published_eigenvalues")[0]), num(j.at("published_eigenvalues")[1])};
    s.cond1 = num(j.at("cond1"));
    s.cond2 = num(j.at("cond2"));
    s.rho_stable = j.at("rho_stable").get<bool>();
    s.cond1_holds = j.at("cond1_holds").get<bool>();
    s.cond2_holds = j.at("cond2_holds").get<bool>();
    s.stable = j.at("stable").get<bool>();
}

} // namespace learning

} // namespace ses

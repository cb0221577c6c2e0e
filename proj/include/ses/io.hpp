#pragma once

// JSON reports and configs, CSV number formatting.

#include "ses/equilibria.hpp"
#include "ses/games.hpp"
#include "ses/learning.hpp"
#include "ses/network.hpp"
#include "ses/ocp.hpp"
#include "ses/stability.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace ses {

using Json = nlohmann::json;

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Malformed configuration; `path` names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

Json load_json_file(const std::string& file);

/// Rejects keys outside `allowed`.
void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path);
double get_number(const Json& j, const char* key, const std::string& path);
Vec get_vector(const Json& j, const char* key, const std::string& path);

/// Keys: b, rho, one of alpha/nu, and one of w or topology (single, dual, well-mixed, star).
ModelParams model_params_from_config(const Json& j, const std::string& path = "model");

struct OcpReport {
    ocp::OcpParams params;
    ocp::Sustainability sustainability = ocp::Sustainability::strongly_sustainable;
    ocp::Regime regime = ocp::Regime::sustainable;
    bool has_saddle = false;
    ocp::Saddle saddle{};
    double residual = 0.0;
    std::string diagnostics;
    double x_final = 0.0, y_final = 0.0, log_x_final = 0.0;
    double discounted_utility = 0.0;
    int table_size = 0;
};

void to_json(Json& j, const ModelParams& p);
void from_json(const Json& j, ModelParams& p);
void to_json(Json& j, const SystemState& s);
void from_json(const Json& j, SystemState& s);
void to_json(Json& j, const SteadyState& s);
void from_json(const Json& j, SteadyState& s);
void to_json(Json& j, const EquilibriumReport& r);
void from_json(const Json& j, EquilibriumReport& r);
void to_json(Json& j, const OracleVerdict& v);
void from_json(const Json& j, OracleVerdict& v);
void to_json(Json& j, const StabilityReport& r);
void from_json(const Json& j, StabilityReport& r);
void to_json(Json& j, const NetworkClassification& c);
void from_json(const Json& j, NetworkClassification& c);
void to_json(Json& j, const LaplacianSpectrum& s);
void from_json(const Json& j, LaplacianSpectrum& s);
void to_json(Json& j, const BlockModelParams& b);
void from_json(const Json& j, BlockModelParams& b);
void to_json(Json& j, const LumpedParams& l);
void from_json(const Json& j, LumpedParams& l);
void to_json(Json& j, const AggregationErrors& e);
void from_json(const Json& j, AggregationErrors& e);
void to_json(Json& j, const OcpReport& r);
void from_json(const Json& j, OcpReport& r);

namespace ocp {
void to_json(Json& j, const OcpParams& p);
void from_json(const Json& j, OcpParams& p);
void to_json(Json& j, const Saddle& s);
void from_json(const Json& j, Saddle& s);
} // namespace ocp

namespace games {
void to_json(Json& j, const TragicnessReport& t);
void from_json(const Json& j, TragicnessReport& t);
void to_json(Json& j, const DiscreteGame& g);
void from_json(const Json& j, DiscreteGame& g);
} // namespace games

namespace learning {
void to_json(Json& j, const LearningParams& p);
void from_json(const Json& j, LearningParams& p);
void to_json(Json& j, const LearningState& s);
void from_json(const Json& j, LearningState& s);
void to_json(Json& j, const LearningStability& s);
void from_json(const Json& j, LearningStability& s);
} // namespace learning

} // namespace ses

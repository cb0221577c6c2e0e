#pragma once

// Closed-form fixed points for the analyzed topologies.

#include "ses/model.hpp"

#include <array>
#include <string>
#include <vector>

namespace ses {

enum class EqSource { closed_form_1, closed_form_2, closed_form_well_mixed, closed_form_star, numerical };
enum class EffortClass { self_reliant, free_riding, boundary, restorative, undetermined };

const char* to_string(EqSource s);
const char* to_string(EffortClass c);

struct EquilibriumReport {
    bool exists = false;
    std::string reason;
    double x_bar = 0.0;
    Vec y_bar;
    EffortClass classification = EffortClass::undetermined;
    std::vector<int> riders;      ///< positive effort while someone restores
    std::vector<int> subsidizers; ///< negative effort
    EqSource source = EqSource::numerical;
    /// Infinitely many equilibria; x_bar/y_bar then hold one member.
    bool family = false;
    std::string family_description;
    /// Other named equilibria (members of a family or isolated extras).
    std::vector<SystemState> extra_points;
    std::string note;
};

/// Sign pattern of efforts; boundary when some |y_i| < tol.
void classify_efforts(EquilibriumReport& r, double tol = 1e-10);

EquilibriumReport equilibrium_single(const ModelParams& p);
EquilibriumReport equilibrium_dual(const ModelParams& p);
EquilibriumReport equilibrium_well_mixed(const ModelParams& p);
/// Hub is agent 0.
EquilibriumReport equilibrium_star(const ModelParams& p);
/// Steady state of the simulated system; non-convergence does not assert nonexistence.
EquilibriumReport equilibrium_numerical(const ModelParams& p, const SystemState& init,
                                        const ConvergenceCriteria& c = {});
/// Picks the closed form matching the topology, else the numerical fallback.
EquilibriumReport equilibrium(const ModelParams& p, const SystemState* init = nullptr);

enum class Sign { plus, minus, zero, ambiguous };
const char* to_string(Sign s);

struct ComparativeStatics {
    /// rows x, y1, y2; columns nu1, nu2, rho1, rho2
    std::array<std::array<double, 4>, 3> derivative{};
    std::array<std::array<Sign, 4>, 3> evaluated{};
    /// Sign structure over the whole rho-ordering regime of the input.
    std::array<std::array<Sign, 4>, 3> regime{};
    int rho_order = 0; ///< sign of rho1 - rho2
};

ComparativeStatics comparative_statics_dual(const ModelParams& p, double zero_tol = 1e-12);
/// Regime table for rho_order in {-1, 0, 1}, from the factored derivatives.
std::array<std::array<Sign, 4>, 3> comparative_statics_regime(int rho_order);

/// Dual closed form as plain functions of (nu, rho), shared with the game module.
struct DualEquilibrium {
    double x, y1, y2;
};
DualEquilibrium dual_closed_form(double nu1, double nu2, double rho1, double rho2);

} // namespace ses

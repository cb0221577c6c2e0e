#pragma once

// Two-player consumption game: continuous rho-game and the 2x2 discrete game.

#include "ses/common.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ses::games {

/// (pi_1, pi_2) = (x y_1, x y_2) at the dual equilibrium.
std::array<double, 2> payoff(double nu1, double nu2, double rho1, double rho2);

/// Best response of player i to rho_j.  With nu_i left free this traces the
/// full-game best-response locus.
double best_response(double nu_i, double nu_j, double rho_j);

std::array<double, 2> nash_equilibrium(double nu1, double nu2);

struct FixedPointResult {
    std::array<double, 2> point{};
    int iterations = 0;
    double residual = 0.0;
    double damping = 1.0; ///< final relaxation weight
    bool converged = false;
};

/// Relaxed simultaneous best-response iteration; the weight is halved whenever
/// a block of iterations fails to shrink the residual by a tenth.
FixedPointResult iterate_best_response(const std::function<double(double)>& br1,
                                       const std::function<double(double)>& br2, std::array<double, 2> start,
                                       double tol = 1e-13, int max_iter = 200000);

/// A rho1 + B rho2 + C = 0.
struct Line {
    double A, B, C;
};
Line welfare_optimal_line(double nu1, double nu2);

struct TragicnessReport {
    std::array<double, 2> nash{};
    Line line{};
    double tragicness = 0.0;
    double x_bar = 0.0;
    std::array<double, 2> consumption{};
};
TragicnessReport tragicness(double nu1, double nu2);

/// Strategy index: 0 = C (rho_H, nu_H), 1 = D (rho_L, nu_L).
using Profile = std::pair<int, int>;

struct DiscreteGame {
    double rho_L = 0, rho_H = 0, nu_L = 0, nu_H = 0, b = 1;
    /// payoff[s1][s2] = (pi_1, pi_2)
    std::array<std::array<std::array<double, 2>, 2>, 2> payoff{};
    /// Equilibrium stock at each profile.
    std::array<std::array<double, 2>, 2> stock{};
    /// Ordinal ranks (1 = worst) of player 1's payoffs at CC, CD, DC, DD.
    std::array<int, 4> ranks{};
    std::vector<Profile> nash;
    std::vector<Profile> pareto;
    int type = 0; ///< 1..9, 0 for degenerate, -1 for a pattern outside the nine
    std::string label;
    bool tragic = false;
    bool excluded = false; ///< some profile fails the Routh filter
    std::string exclusion;
};

/// Player 1 ordinal pattern (CC, CD, DC, DD) of each listed type.
const std::array<std::array<int, 4>, 9>& type_patterns();

DiscreteGame build_discrete_game(double rho_L, double rho_H, double nu_L, double nu_H, double b = 1.0,
                                 double tie_tol = 1e-9);

struct Axis {
    double lo = 0, hi = 1;
    int n = 0;
    double at(int k) const { return n <= 1 ? lo : lo + (hi - lo) * k / (n - 1); }
};

struct SweepCell {
    std::vector<double> values;
    std::string label;
    std::string error;
};

struct SweepTable {
    std::vector<std::string> columns; ///< value columns, followed by label and error
    std::vector<SweepCell> cells;
};

/// Tragicness, Nash stock and consumptions over nu1 = avg - diff/2, nu2 = avg + diff/2.
SweepTable sweep_continuous(const Axis& nu_avg, const Axis& nu_diff);
/// Type, tragic flag and the stock at the first Nash profile over a (rho_L, rho_H) slice.
SweepTable sweep_discrete(const Axis& rho_L, const Axis& rho_H, double nu_L, double nu_H, double b = 1.0);
void write_csv(const SweepTable& t, std::ostream& os);

struct CournotResult {
    double q_closed;
    FixedPointResult iteration;
    std::array<double, 2> profit;
};
/// Inverse demand a - b Q, unit cost c.
CournotResult cournot_fixture(double a, double b, double c);

} // namespace ses::games

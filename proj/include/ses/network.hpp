#pragma once

// Influence diagnostics, canonical-network recognition and block-model aggregation.

#include "ses/model.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ses {

/// Effective social ties gamma_ij = b_i nu_i w_ij.
struct InfluenceNetwork {
    Mat gamma;
    Vec in_degree;
};

InfluenceNetwork influence_network(const ModelParams& p);
InfluenceNetwork influence_network(const Mat& gamma);

enum class InfluenceRole { leader, follower, neutral };

/// Out-influence minus in-influence per node.
Vec net_influence(const ModelParams& p);
std::vector<InfluenceRole> influence_roles(const Vec& net, double tol = 1e-9);
const char* to_string(InfluenceRole r);

using Partition = std::vector<std::vector<int>>;

/// Throws DomainError unless the groups are nonempty, disjoint and cover 0..n-1.
void validate_partition(const Partition& part, int n);
Partition single_group(int n);

struct NetworkClassification {
    bool self_directed = false;
    bool homogeneous = false;
    bool semi_homogeneous = false;
    bool symmetric_semi_homogeneous = false;
    std::string strongest;       ///< "homogeneous", "symmetric_semi_homogeneous", ...
    std::string violation;       ///< first failed condition, empty when none
    std::string violation_detail;
};

NetworkClassification classify_network(const ModelParams& p, const Partition& part, double tol = 1e-9);

struct BlockModelParams {
    std::vector<int> sizes;
    Vec B, A, V, P;
    Mat W; ///< rows sum to one; the diagonal holds the within-group bonding weight

    int m() const { return static_cast<int>(sizes.size()); }
};

/// Exact block model of a symmetric semi-homogeneous network.
BlockModelParams aggregate_exact(const ModelParams& p, const Partition& part, double tol = 1e-9);

/// Rewrites the block model as a model over aggregate efforts Y_k, so the
/// core integrator applies (weights are then not row-stochastic).
ModelParams block_as_model(const BlockModelParams& bm);

struct LumpedParams {
    double BA = 0.0;
    double P = 0.0;
};

/// Lumped parameters of a self-directed network that reproduce the aggregate exactly.
LumpedParams aggregate_self_directed(const ModelParams& p, double tol = 1e-9);

struct AggregationErrors {
    std::vector<double> times;
    std::vector<double> e_x; ///< x - x_tilde
    std::vector<double> e_Y; ///< Y - Y_tilde
    double sup_e_x = 0.0;
    double sup_e_Y = 0.0;
    double final_e_x = 0.0;
    double final_e_Y = 0.0;
    /// Limits implied by the guess: x_bar - P_tilde and P_tilde - x_bar with x_bar = P_hat.
    double predicted_e_x = 0.0;
    double predicted_e_Y = 0.0;
};

/// Co-integrates the full model and the 2-D model with lumped parameters `guess`.
/// The default tolerance resolves steady-state errors well below 1e-6 for n = 100.
AggregationErrors aggregate_approximate(const ModelParams& p, const LumpedParams& guess,
                                        const SystemState& init, double t_end,
                                        std::size_t samples = 2001, double tol = 1e-11);

struct LaplacianSpectrum {
    std::vector<std::complex<double>> eigenvalues; ///< ascending by real part
    bool symmetric = false;
    int zero_multiplicity = 0;
    int components = 0;              ///< of the symmetrized support graph
    double algebraic_connectivity = 0.0;
};

/// Spectrum of L = diag(d-) - Gamma.
LaplacianSpectrum laplacian_spectrum(const InfluenceNetwork& net, double zero_tol = 1e-9);

} // namespace ses

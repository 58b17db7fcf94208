#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "csflock/stochastic.hpp"
#include "csflock/topology.hpp"

namespace csflock::dynamics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Point = Eigen::RowVectorXd;

struct FlockParams {
    double h = 0.2;
    double beta = 0.25;
    std::size_t n = 3;
    std::size_t d = 3;

    /// h < 1/(N+1): every flocking matrix is stochastic with diagonal
    /// entries of at least 1/(N+1).
    bool certifiable_step() const { return h < 1.0 / (static_cast<double>(n) + 1.0); }
};

/// Throws ParameterError unless h > 0, beta >= 0, n >= 1, d >= 1.
void validate(const FlockParams& params);

/// Positions and velocities at one time step; row i is agent i.
struct FlockState {
    std::uint64_t t = 0;
    Matrix x;  // N x d
    Matrix v;  // N x d

    std::size_t agents() const { return static_cast<std::size_t>(x.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
};

/// Quantities relative to the last agent; (N-1) x d each.
struct ReferenceState {
    Matrix xhat;
    Matrix vhat;
};

/// Communication weight (1 + |xi - xj|^2)^(-beta), in (0, 1].
double psi(const Point& xi, const Point& xj, double beta);

/// d_i = sum over in-neighbors j of psi_ij.
Vector degrees(const FlockState& state, const topology::Digraph& g, const FlockParams& params);

/// Weighted Laplacian with the adjacency pattern it was built from.
struct Laplacian {
    Matrix matrix;
    /// support(i, j) = chi_ij, i.e. j influences i.
    stochastic::Support support;
};

/// Diagonal d_i, off-diagonal -chi_ij psi_ij.
Laplacian laplacian(const FlockState& state, const topology::Digraph& g, const FlockParams& params);

/// Id - h L. Throws ParameterError when a diagonal entry would be negative.
/// The support pattern is the positive diagonal plus the Laplacian's arcs.
stochastic::StochasticMatrix flocking_matrix(const Laplacian& lap, double h);

/// One explicit step: x += h v(t); v_i += h sum_j chi_ij psi_ij (v_j - v_i).
/// Works for any h > 0; stochasticity of the implied matrix is not checked.
FlockState step(const FlockState& state, const topology::Digraph& g, const FlockParams& params);

/// Throws InvariantError when N < 2.
ReferenceState reference(const FlockState& state);

/// Matrix P with vhat(t+1) = P vhat(t). May have negative entries when the
/// reference agent is not the leader.
Matrix reference_transition(const FlockState& state, const topology::Digraph& g,
                            const FlockParams& params);

/// Throws DimensionError when the state, graph and params disagree.
void check_dimensions(const FlockState& state, const topology::Digraph& g, const FlockParams& params);

}  // namespace csflock::dynamics

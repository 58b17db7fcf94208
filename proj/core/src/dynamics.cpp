#include "csflock/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock::dynamics {

void validate(const FlockParams& params) {
    if (!(params.h > 0.0) || !std::isfinite(params.h))
        throw ParameterError("time step h must be a positive finite number");
    if (!(params.beta >= 0.0) || !std::isfinite(params.beta))
        throw ParameterError("decay exponent beta must be nonnegative and finite");
    if (params.n == 0) throw ParameterError("agent count N must be at least 1");
    if (params.d == 0) throw ParameterError("spatial dimension d must be at least 1");
}

void check_dimensions(const FlockState& state, const topology::Digraph& g, const FlockParams& params) {
    if (state.agents() != params.n || g.size() != params.n || state.dim() != params.d ||
        state.v.rows() != state.x.rows() || state.v.cols() != state.x.cols()) {
        std::ostringstream msg;
        msg << "dimension mismatch: state " << state.x.rows() << "x" << state.x.cols()
            << " / " << state.v.rows() << "x" << state.v.cols() << ", graph N=" << g.size()
            << ", params N=" << params.n << " d=" << params.d;
        throw DimensionError(msg.str());
    }
}

double psi(const Point& xi, const Point& xj, double beta) {
    const double r2 = (xi - xj).squaredNorm();
    return std::pow(1.0 + r2, -beta);
}

Vector degrees(const FlockState& state, const topology::Digraph& g, const FlockParams& params) {
    check_dimensions(state, g, params);
    const auto n = static_cast<Eigen::Index>(params.n);
    Vector d = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (g.chi(i, j)) d(i) += psi(state.x.row(i), state.x.row(j), params.beta);
    return d;
}

Laplacian laplacian(const FlockState& state, const topology::Digraph& g, const FlockParams& params) {
    check_dimensions(state, g, params);
    const auto n = static_cast<Eigen::Index>(params.n);
    Laplacian lap{Matrix::Zero(n, n), stochastic::Support::Constant(n, n, false)};
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!g.chi(i, j)) continue;
            const double w = psi(state.x.row(i), state.x.row(j), params.beta);
            lap.matrix(i, j) = -w;
            lap.support(i, j) = true;
            row += w;
        }
        lap.matrix(i, i) = row;
    }
    return lap;
}

stochastic::StochasticMatrix flocking_matrix(const Laplacian& lap, double h) {
    const auto n = lap.matrix.rows();
    Matrix f = Matrix::Identity(n, n) - h * lap.matrix;
    stochastic::Support s = lap.support;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (f(i, i) < 0.0) {
            std::ostringstream msg;
            msg << "time step h=" << h << " makes diagonal entry " << i + 1
                << " of the flocking matrix negative (1 - h d_i = " << f(i, i) << ")";
            throw ParameterError(msg.str());
        }
        s(i, i) = f(i, i) > 0.0;
    }
    return stochastic::StochasticMatrix(std::move(f), std::move(s));
}

FlockState step(const FlockState& state, const topology::Digraph& g, const FlockParams& params) {
    check_dimensions(state, g, params);
    const auto n = static_cast<Eigen::Index>(params.n);
    FlockState next;
    next.t = state.t + 1;
    next.x = state.x + params.h * state.v;
    next.v = state.v;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!g.chi(i, j)) continue;
            const double w = psi(state.x.row(i), state.x.row(j), params.beta);
            next.v.row(i) += params.h * w * (state.v.row(j) - state.v.row(i));
        }
    }
    return next;
}

ReferenceState reference(const FlockState& state) {
    const auto n = state.x.rows();
    if (n < 2) throw InvariantError("reference system needs at least two agents");
    ReferenceState ref;
    ref.xhat = state.x.topRows(n - 1).rowwise() - state.x.row(n - 1);
    ref.vhat = state.v.topRows(n - 1).rowwise() - state.v.row(n - 1);
    return ref;
}

Matrix reference_transition(const FlockState& state, const topology::Digraph& g,
                            const FlockParams& params) {
    check_dimensions(state, g, params);
    const auto n = static_cast<Eigen::Index>(params.n);
    if (n < 2) throw InvariantError("reference system needs at least two agents");
    const Eigen::Index last = n - 1;
    const Laplacian lap = laplacian(state, g, params);
    // weight(i, j) = chi_ij psi_ij
    auto weight = [&](Eigen::Index i, Eigen::Index j) { return i == j ? 0.0 : -lap.matrix(i, j); };

    Matrix p(last, last);
    for (Eigen::Index i = 0; i < last; ++i) {
        for (Eigen::Index j = 0; j < last; ++j) {
            if (i == j)
                p(i, j) = 1.0 - params.h * lap.matrix(i, i) - params.h * weight(last, i);
            else
                p(i, j) = params.h * weight(i, j) - params.h * weight(last, j);
        }
    }
    return p;
}

}  // namespace csflock::dynamics

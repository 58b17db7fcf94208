#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csflock/dynamics.hpp"

namespace csflock::theory {

using dynamics::FlockParams;
using dynamics::FlockState;
using dynamics::ReferenceState;

/// Tight lambda >= 1 with |v|_inf <= |v| <= lambda |v|_inf on (R^d)^(N-1),
/// namely sqrt(d (N-1)). Throws InvariantError when N < 2.
double norm_equivalence_lambda(std::size_t n, std::size_t d);

/// Number of consecutive flocking matrices whose product is guaranteed to be
/// strongly rooted: (N-1)^2.
std::uint64_t block_length(std::size_t n);

/// (1 - (hR)^B)^floor((t+1)/B) with B = (N-1)^2.
/// Throws ParameterError unless 0 < hR < 1.
double product_decay_bound(std::uint64_t t, double h, double R, std::size_t n);

struct CertificateInputs {
    FlockParams params;
    double x0_hat_norm = 0.0;  // |xhat(0)|, 2-norm
    double v0_norm = 0.0;      // |v(0)|, 2-norm of the stacked N*d vector
    double v0_inf_norm = 0.0;  // |v(0)|_inf over all N*d coordinates
    double lambda = 1.0;
};

/// Norms of an initial state. lambda defaults to the tight constant.
CertificateInputs inputs_from_state(const FlockState& state, const FlockParams& params,
                                    std::optional<double> lambda = std::nullopt);

/// 2 * product_decay_bound(t) * |v(0)|_inf.
double vhat_envelope(std::uint64_t t, const CertificateInputs& inputs, double R);

/// Unique positive zero of z^r - c1 z^s - c2 for c1, c2 > 0 and r > s > 0,
/// by bisection. Throws ParameterError when the preconditions fail or the
/// a priori bound on the zero overflows a double.
double unique_positive_zero(double r, double s, double c1, double c2);

/// Upper bound max{(2 c1)^(1/(r-s)), (2 c2)^(1/r)} on the zero above.
double positive_zero_bound(double r, double s, double c1, double c2);

enum class CertificateCase { Subcritical, Critical, Supercritical };

std::string to_string(CertificateCase c);

struct CertificateReport {
    CertificateCase which = CertificateCase::Subcritical;
    bool hypothesis_holds = false;
    double a = 0.0;
    double b = 0.0;
    double s = 0.0;
    double lambda = 1.0;
    std::uint64_t block = 1;
    /// Case-specific hypothesis sides: the hypothesis holds when lhs > rhs.
    /// Case (1) has no condition and reports lhs = rhs = 0.
    double hypothesis_lhs = 0.0;
    double hypothesis_rhs = 0.0;
    /// Bound on |xhat(t)| for all t; derived from the self-bounding argument
    /// of the case, present only when the hypothesis holds. +inf when the
    /// bound overflows a double (R is then 0 and decay_base 1).
    std::optional<double> B0;
    /// (1 + 2 B0^2)^(-beta).
    std::optional<double> R;
    /// 1 - (hR)^block.
    std::optional<double> decay_base;
};

/// Flocking certificate for the switching system started from `inputs`.
/// Throws ParameterError when h >= 1/(N+1) or N < 2.
CertificateReport certify(const CertificateInputs& inputs);

struct DecayMeasurement {
    double sup_xhat = 0.0;
    std::vector<double> vhat_inf_series;
    /// Least-squares slope of log |vhat|_inf per step over the tail window.
    double fitted_rate = 0.0;
    /// vhat is identically zero over the whole trajectory.
    bool exact_consensus = false;
    /// At least two tail samples above kRateFloor were available for the fit.
    bool rate_available = false;
};

/// Values at or below this are treated as converged when fitting a rate.
inline constexpr double kRateFloor = 1e-13;

/// Throws InvariantError when fewer than two states are given.
DecayMeasurement measured_decay(std::span<const ReferenceState> trajectory);

}  // namespace csflock::theory

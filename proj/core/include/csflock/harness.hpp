#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csflock/config.hpp"
#include "csflock/dynamics.hpp"
#include "csflock/theory.hpp"

namespace csflock::harness {

/// A run that cannot proceed as configured (e.g. a graph without rooted
/// leadership while certificates are requested).
class RefusedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Deterministic uniform doubles in [0, 1) from std::mt19937_64, using the
/// top 53 bits of each draw. The engine's output sequence is fixed by the
/// standard, so results do not depend on the standard library in use.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 engine_;
};

/// Initial state for the configuration; for random init, positions are drawn
/// agent by agent (coordinates in order) before any velocity.
dynamics::FlockState initial_state(const ExperimentConfig& config);

struct RunResult {
    /// States at t = 0..steps.
    std::vector<dynamics::FlockState> trajectory;
    /// Graph index active at each recorded t.
    std::vector<std::size_t> active_graph;
    std::vector<dynamics::ReferenceState> reference;
    theory::DecayMeasurement decay;
    /// First t with |vhat(t)|_inf below the configured threshold.
    std::optional<std::uint64_t> time_to_alignment;
    theory::CertificateInputs certificate_inputs;
    std::optional<theory::CertificateReport> certificate;
    std::vector<std::string> warnings;
};

/// Problems that block certificates: graphs without rooted leadership and a
/// time step that is not below 1/(N+1). Empty when certificates are allowed.
std::vector<std::string> certificate_blockers(const ExperimentConfig& config);

/// Simulates the configuration. In certificate mode any blocker raises
/// RefusedError; in exploration mode blockers become warnings and no
/// certificate is computed.
RunResult run(const ExperimentConfig& config);

struct SweepRow {
    std::uint64_t dwell = 1;
    /// Mean of the final velocities.
    Eigen::RowVectorXd asymptotic_velocity;
    /// 2-norm distance of asymptotic_velocity from each agent's v_i(0).
    std::vector<double> distance_from_initial;
    std::optional<std::uint64_t> time_to_alignment;
};

/// Re-runs `base` once per dwell (in steps) with the cyclic schedule's dwell
/// replaced. Throws InvariantError when the base signal is not cyclic.
std::vector<SweepRow> dwell_sweep(const ExperimentConfig& base, std::span<const std::uint64_t> dwells);

/// Header: t, x_<agent>_<coord>..., v_<agent>_<coord>..., xhat_norm,
/// vhat_inf, graph. Values at 17 significant digits.
void write_trajectory_csv(std::ostream& out, const ExperimentConfig& config, const RunResult& result);
void write_metrics(std::ostream& out, const ExperimentConfig& config, const RunResult& result);
void write_certificate(std::ostream& out, const theory::CertificateInputs& inputs,
                       const theory::CertificateReport& report,
                       std::optional<bool> empirically_aligned = std::nullopt);
void write_sweep_csv(std::ostream& out, const ExperimentConfig& config, std::span<const SweepRow> rows);

}  // namespace csflock::harness

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "csflock/dynamics.hpp"
#include "csflock/signal.hpp"

namespace csflock::harness {

/// Experiment description file.
///
/// Plain text, one statement per line, `#` starts a comment. Sections:
///
///     N 3                      # optional header, same as N in [params]
///
///     [params]
///     h = 0.2                  # time step (default 0.2)
///     beta = 0.25              # communication decay exponent (default 0.25)
///     N = 3                    # agent count (required here or as header)
///     d = 3                    # spatial dimension (default 3)
///     steps = 500              # simulated steps (default 500)
///     threshold = 1e-3         # near-alignment threshold on |vhat|_inf
///     mode = certificate       # or: exploration
///     lambda = auto            # norm-equivalence constant, or a number >= 1
///
///     [graph 1]                # one section per admissible graph, any id
///     1 2                      # arc "1 influences 2", agents numbered 1..N
///     1 3
///
///     [signal]                 # either a cycle ...
///     cycle 1 2 3 dwell 1
///     # ... or an explicit schedule holding the last entry forever
///     # at 0 1
///     # at 10 2
///
///     [init]                   # random (default) ...
///     seed = 42
///     position_interval = 10   # positions uniform on [0, 10]^d
///     velocity_interval = 1    # velocities uniform on [0, 1]^d
///     # ... or explicit, one line per agent for both x and v:
///     # position 1 0.0 0.0 0.0
///     # velocity 1 1.0 0.0 0.0
///
///     [output]                 # file names, relative to --out-dir
///     trajectory = trajectory.csv
///     metrics = metrics.txt
///     certificate = certificate.txt
///
/// Without a [signal] section the graphs are cycled in declaration order
/// with a dwell of one step.

struct Diagnostic {
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string message;
};

/// Every problem found in a document, each anchored to its line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

enum class Mode { Certificate, Exploration };

struct RandomInit {
    double position_interval = 10.0;
    double velocity_interval = 1.0;
    std::uint64_t seed = 1;
};

struct ExplicitInit {
    dynamics::Matrix x;
    dynamics::Matrix v;
};

struct OutputPaths {
    std::string trajectory = "trajectory.csv";
    std::string metrics = "metrics.txt";
    std::string certificate = "certificate.txt";
};

struct ExperimentConfig {
    dynamics::FlockParams params;
    topology::SwitchingSignal signal;
    std::uint64_t steps = 500;
    std::variant<RandomInit, ExplicitInit> init = RandomInit{};
    Mode mode = Mode::Certificate;
    std::optional<double> lambda;
    double threshold = 1e-3;
    OutputPaths outputs;
};

/// Graphs (and optionally a signal) without the experiment settings;
/// the input of `graphs check`.
struct GraphDocument {
    std::size_t n = 0;
    std::vector<topology::Digraph> graphs;
    std::vector<std::string> ids;
    std::optional<topology::SwitchingSignal> signal;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

GraphDocument parse_graph_document(std::string_view text);
GraphDocument load_graph_document(const std::filesystem::path& path);

}  // namespace csflock::harness

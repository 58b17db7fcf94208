#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "csflock/topology.hpp"

namespace csflock::topology {

using Step = std::uint64_t;

/// Visit `order` cyclically, holding each index for `dwell` steps.
struct CyclicSchedule {
    std::vector<std::size_t> order;
    Step dwell = 1;
};

/// Piecewise-constant schedule: entry k is active from changes[k].first until
/// the next entry starts; the final entry is held forever. The first entry
/// must start at step 0 and starts must be strictly increasing.
struct ExplicitSchedule {
    std::vector<std::pair<Step, std::size_t>> changes;
};

using Schedule = std::variant<CyclicSchedule, ExplicitSchedule>;

/// An indexed family of admissible digraphs plus a map from time to index.
class SwitchingSignal {
public:
    SwitchingSignal(std::vector<Digraph> graphs, Schedule schedule,
                    std::vector<std::string> ids = {});

    /// Signal that holds a single graph forever.
    static SwitchingSignal constant(Digraph g);

    /// Cycle through every graph in declaration order.
    static SwitchingSignal cyclic(std::vector<Digraph> graphs, Step dwell = 1);

    std::size_t index_at(Step t) const;
    const Digraph& at(Step t) const { return graphs_[index_at(t)]; }

    std::size_t agent_count() const { return graphs_.front().size(); }
    const std::vector<Digraph>& graphs() const { return graphs_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const Schedule& schedule() const { return schedule_; }

    /// Indices that the schedule can ever produce.
    std::vector<std::size_t> used_indices() const;

    /// Copy of this signal with the cyclic dwell replaced. Throws
    /// InvariantError when the schedule is not cyclic.
    SwitchingSignal with_dwell(Step dwell) const;

private:
    std::vector<Digraph> graphs_;
    Schedule schedule_;
    std::vector<std::string> ids_;
};

}  // namespace csflock::topology

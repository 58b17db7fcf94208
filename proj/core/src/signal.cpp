#include "csflock/signal.hpp"

#include <algorithm>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock::topology {

namespace {

void check_index(std::size_t idx, std::size_t count) {
    if (idx >= count) {
        std::ostringstream msg;
        msg << "schedule refers to graph index " << idx << " but only " << count
            << " graphs are defined";
        throw InvariantError(msg.str());
    }
}

}  // namespace

SwitchingSignal::SwitchingSignal(std::vector<Digraph> graphs, Schedule schedule,
                                 std::vector<std::string> ids)
    : graphs_(std::move(graphs)), schedule_(std::move(schedule)), ids_(std::move(ids)) {
    if (graphs_.empty()) throw InvariantError("switching signal needs at least one graph");
    for (const auto& g : graphs_)
        if (g.size() != graphs_.front().size())
            throw DimensionError("all graphs of a switching signal must share the vertex count");
    if (ids_.empty())
        for (std::size_t k = 0; k < graphs_.size(); ++k) ids_.push_back(std::to_string(k + 1));
    if (ids_.size() != graphs_.size()) throw InvariantError("one id per graph is required");

    if (const auto* c = std::get_if<CyclicSchedule>(&schedule_)) {
        if (c->order.empty()) throw InvariantError("cyclic schedule is empty");
        if (c->dwell == 0) throw InvariantError("dwell must be at least one step");
        for (auto idx : c->order) check_index(idx, graphs_.size());
    } else {
        const auto& e = std::get<ExplicitSchedule>(schedule_);
        if (e.changes.empty()) throw InvariantError("explicit schedule is empty");
        if (e.changes.front().first != 0)
            throw InvariantError("explicit schedule must start at step 0");
        for (std::size_t k = 0; k < e.changes.size(); ++k) {
            check_index(e.changes[k].second, graphs_.size());
            if (k > 0 && e.changes[k].first <= e.changes[k - 1].first)
                throw InvariantError("explicit schedule steps must be strictly increasing");
        }
    }
}

SwitchingSignal SwitchingSignal::constant(Digraph g) {
    return SwitchingSignal({std::move(g)}, CyclicSchedule{{0}, 1});
}

SwitchingSignal SwitchingSignal::cyclic(std::vector<Digraph> graphs, Step dwell) {
    CyclicSchedule c;
    for (std::size_t k = 0; k < graphs.size(); ++k) c.order.push_back(k);
    c.dwell = dwell;
    return SwitchingSignal(std::move(graphs), std::move(c));
}

std::size_t SwitchingSignal::index_at(Step t) const {
    if (const auto* c = std::get_if<CyclicSchedule>(&schedule_))
        return c->order[(t / c->dwell) % c->order.size()];
    const auto& changes = std::get<ExplicitSchedule>(schedule_).changes;
    auto it = std::upper_bound(changes.begin(), changes.end(), t,
                               [](Step value, const auto& entry) { return value < entry.first; });
    return std::prev(it)->second;
}

std::vector<std::size_t> SwitchingSignal::used_indices() const {
    std::vector<std::size_t> out;
    if (const auto* c = std::get_if<CyclicSchedule>(&schedule_))
        out = c->order;
    else
        for (const auto& [t, idx] : std::get<ExplicitSchedule>(schedule_).changes) out.push_back(idx);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SwitchingSignal SwitchingSignal::with_dwell(Step dwell) const {
    const auto* c = std::get_if<CyclicSchedule>(&schedule_);
    if (!c) throw InvariantError("dwell can only be changed on a cyclic schedule");
    CyclicSchedule copy = *c;
    copy.dwell = dwell;
    return SwitchingSignal(graphs_, std::move(copy), ids_);
}

}  // namespace csflock::topology

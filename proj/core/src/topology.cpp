#include "csflock/topology.hpp"

#include <deque>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock::topology {

Digraph::Digraph(std::size_t n) : n_(n), adj_(n * n, false) {}

Digraph::Digraph(std::size_t n, const std::vector<Arc>& arcs) : Digraph(n) {
    for (const auto& a : arcs) add_arc(a.from, a.to);
}

Digraph Digraph::complete(std::size_t n) {
    Digraph g(n);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j)
            if (i != j) g.adj_[i * n + j] = true;
    return g;
}

void Digraph::add_arc(Vertex from, Vertex to) {
    if (from >= n_ || to >= n_) {
        std::ostringstream msg;
        msg << "arc (" << from + 1 << ", " << to + 1 << ") out of range for N=" << n_;
        throw InvariantError(msg.str());
    }
    if (from == to) {
        std::ostringstream msg;
        msg << "self-loop at vertex " << from + 1;
        throw InvariantError(msg.str());
    }
    adj_[from * n_ + to] = true;
}

void Digraph::remove_arc(Vertex from, Vertex to) {
    if (from < n_ && to < n_) adj_[from * n_ + to] = false;
}

std::vector<Arc> Digraph::arcs() const {
    std::vector<Arc> out;
    for (Vertex i = 0; i < n_; ++i)
        for (Vertex j = 0; j < n_; ++j)
            if (influences(i, j)) out.push_back({i, j});
    return out;
}

std::size_t Digraph::arc_count() const {
    std::size_t c = 0;
    for (bool b : adj_) c += b ? 1 : 0;
    return c;
}

std::vector<Vertex> Digraph::out_neighbors(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex j = 0; j < n_; ++j)
        if (influences(v, j)) out.push_back(j);
    return out;
}

std::vector<Vertex> Digraph::in_neighbors(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex j = 0; j < n_; ++j)
        if (influences(j, v)) out.push_back(j);
    return out;
}

std::vector<std::vector<bool>> reachability(const Digraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    std::deque<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        auto& row = reach[s];
        queue.assign({s});
        while (!queue.empty()) {
            const Vertex u = queue.front();
            queue.pop_front();
            for (Vertex w = 0; w < n; ++w) {
                if (g.influences(u, w) && !row[w]) {
                    row[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    return reach;
}

RootInfo is_rooted(const Digraph& g) {
    const auto reach = reachability(g);
    RootInfo info;
    for (Vertex v = 0; v < g.size(); ++v) {
        bool all = true;
        for (Vertex w = 0; w < g.size() && all; ++w)
            if (w != v && !reach[v][w]) all = false;
        if (all) info.roots.push_back(v);
    }
    info.rooted = !info.roots.empty();
    return info;
}

LeadershipInfo is_rooted_leadership(const Digraph& g) {
    const auto reach = reachability(g);
    const std::size_t n = g.size();
    std::vector<Vertex> candidates;
    for (Vertex r = 0; r < n; ++r) {
        bool reaches_all = true;
        bool unreached = true;
        for (Vertex w = 0; w < n; ++w) {
            if (w == r) continue;
            if (!reach[r][w]) reaches_all = false;
            if (reach[w][r]) unreached = false;
        }
        if (reaches_all && unreached) candidates.push_back(r);
    }

    LeadershipInfo info;
    if (candidates.size() == 1) {
        info.valid = true;
        info.leader = candidates.front();
        return info;
    }
    std::ostringstream msg;
    if (candidates.empty()) {
        const auto roots = is_rooted(g);
        if (!roots.rooted)
            msg << "no vertex reaches every other vertex";
        else
            msg << "every root (e.g. vertex " << roots.roots.front() + 1
                << ") is reachable from another vertex";
    } else {
        msg << "leader is not unique:";
        for (auto c : candidates) msg << ' ' << c + 1;
    }
    info.diagnostic = msg.str();
    return info;
}

StrongRootInfo is_strongly_rooted(const Digraph& g) {
    StrongRootInfo info;
    for (Vertex v = 0; v < g.size(); ++v) {
        bool all = true;
        for (Vertex w = 0; w < g.size() && all; ++w)
            if (w != v && !g.influences(v, w)) all = false;
        if (all) info.strong_roots.push_back(v);
    }
    info.strongly_rooted = !info.strong_roots.empty();
    return info;
}

namespace {

Digraph compose_impl(const Digraph& gq, const Digraph& gp, bool self_loops) {
    if (gq.size() != gp.size()) {
        std::ostringstream msg;
        msg << "cannot compose digraphs on " << gq.size() << " and " << gp.size()
            << " vertices";
        throw DimensionError(msg.str());
    }
    const std::size_t n = gq.size();
    auto p = [&](Vertex a, Vertex b) { return (self_loops && a == b) || gp.influences(a, b); };
    auto q = [&](Vertex a, Vertex b) { return (self_loops && a == b) || gq.influences(a, b); };
    Digraph out(n);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j) {
            if (i == j) continue;
            for (Vertex k = 0; k < n; ++k)
                if (p(i, k) && q(k, j)) {
                    out.add_arc(i, j);
                    break;
                }
        }
    return out;
}

}  // namespace

Digraph compose(const Digraph& gq, const Digraph& gp) { return compose_impl(gq, gp, false); }

Digraph compose_with_self_loops(const Digraph& gq, const Digraph& gp) {
    return compose_impl(gq, gp, true);
}

Digraph compose_sequence_with_self_loops(const std::vector<Digraph>& gs) {
    if (gs.empty()) return Digraph{};
    Digraph acc = gs.front();
    for (std::size_t k = 1; k < gs.size(); ++k) acc = compose_with_self_loops(gs[k], acc);
    return acc;
}

}  // namespace csflock::topology

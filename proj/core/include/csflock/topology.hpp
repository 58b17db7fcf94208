#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace csflock::topology {

/// Agents are indexed 0..n-1 in code; text formats use 1..n.
using Vertex = std::size_t;

/// `from` influences `to` (information flows from -> to).
struct Arc {
    Vertex from;
    Vertex to;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed neighbor graph without self-loops.
///
/// Storage is a dense n*n boolean adjacency; `influences(j, i)` is the
/// adjacency entry chi_ij of the weighted Laplacian (1 iff j -> i).
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::size_t n);
    Digraph(std::size_t n, const std::vector<Arc>& arcs);

    static Digraph complete(std::size_t n);

    std::size_t size() const { return n_; }

    /// True iff `from -> to` is an arc.
    bool influences(Vertex from, Vertex to) const { return adj_[from * n_ + to]; }

    /// chi_ij in the model's notation: 1 iff j influences i.
    bool chi(Vertex i, Vertex j) const { return influences(j, i); }

    /// Throws InvariantError on a self-loop or out-of-range vertex.
    void add_arc(Vertex from, Vertex to);
    void remove_arc(Vertex from, Vertex to);

    std::vector<Arc> arcs() const;
    std::size_t arc_count() const;
    std::vector<Vertex> out_neighbors(Vertex v) const;
    std::vector<Vertex> in_neighbors(Vertex v) const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<bool> adj_;  // adj_[from * n + to]
};

/// reach[u][v] is true iff there is a directed path of length >= 1 from u to v.
std::vector<std::vector<bool>> reachability(const Digraph& g);

struct RootInfo {
    bool rooted = false;
    std::vector<Vertex> roots;
};

/// Vertices from which every other vertex is reachable.
RootInfo is_rooted(const Digraph& g);

struct LeadershipInfo {
    bool valid = false;
    std::optional<Vertex> leader;
    std::string diagnostic;
};

/// Rooted leadership: a unique vertex that no other vertex reaches by any
/// directed path and that reaches every other vertex. Multiple candidates are
/// reported as invalid rather than resolved.
LeadershipInfo is_rooted_leadership(const Digraph& g);

struct StrongRootInfo {
    bool strongly_rooted = false;
    std::vector<Vertex> strong_roots;
};

/// Vertices with a direct arc to every other vertex.
StrongRootInfo is_strongly_rooted(const Digraph& g);

/// gq o gp: (i, j) is an arc iff some k has i -> k in gp and k -> j in gq.
/// Pairs with i == j are dropped. Throws DimensionError on size mismatch.
Digraph compose(const Digraph& gq, const Digraph& gp);

/// Same rule after adjoining a self-loop at every vertex of both operands,
/// which is the support of the product of the two flocking matrices.
Digraph compose_with_self_loops(const Digraph& gq, const Digraph& gp);

/// Left fold of compose_with_self_loops over gs (gs[0] acts first).
Digraph compose_sequence_with_self_loops(const std::vector<Digraph>& gs);

}  // namespace csflock::topology

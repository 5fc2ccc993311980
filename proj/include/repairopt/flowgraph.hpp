#pragma once

// First-stage information flow graph for one repair, and the cut-set
// constraints L z >= b it induces on the per-link traffic vector z.

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "repairopt/error.hpp"
#include "repairopt/netmodel.hpp"
#include "repairopt/rational.hpp"

namespace repairopt {

/// A directed network link carrying repair traffic. `to == failed` means the new node.
struct Edge {
    NodeId from = 0;
    NodeId to = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string edge_label(const Edge& e) { return std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1); }

/// Per-link fragment counts aligned with an edge index.
struct Subgraph {
    std::vector<Edge> edges;
    std::vector<Rational> amount;

    Rational cost(const CostMatrix& c) const {
        Rational total = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) total += *c.at(edges[i].from, edges[i].to) * amount[i];
        return total;
    }
};

/// Vertices and arcs of the flow graph, explicit so that max-flow style checks can walk it.
struct FlowGraph {
    enum class VertexKind { source, in, out, new_in, new_out };
    enum class ArcKind { infinite, storage, symbolic };

    struct Vertex {
        VertexKind kind;
        NodeId node;  // storage node the vertex belongs to (unused for the source)
    };
    struct Arc {
        std::size_t tail;
        std::size_t head;
        ArcKind kind;
        std::size_t symbol;  // index into `edges` for symbolic arcs
    };

    std::size_t n = 0;
    NodeId new_node = 0;
    Rational alpha;
    std::vector<NodeId> survivors;
    /// Symbolic edges in lexicographic (from, to) order; one LP variable each.
    std::vector<Edge> edges;
    std::vector<Vertex> vertices;
    std::vector<Arc> arcs;

    std::size_t source() const { return 0; }
    std::size_t in_vertex(NodeId i) const { return 1 + 2 * i; }
    std::size_t out_vertex(NodeId i) const { return 2 + 2 * i; }
    /// For the new node, in_vertex/out_vertex(new_node) are in_nu/out_nu.
};

struct ConstraintSet {
    std::vector<Edge> edge_index;
    std::vector<std::vector<int>> L;
    std::vector<Rational> b;

    std::size_t rows() const { return L.size(); }
    std::size_t cols() const { return edge_index.size(); }
};

namespace flowgraph {

inline FlowGraph build_flow_graph(const NetworkSpec& spec) {
    netmodel::validate(spec);
    FlowGraph fg;
    fg.n = spec.n;
    fg.new_node = spec.failed;
    fg.alpha = spec.alpha;
    fg.survivors = spec.survivors();

    std::vector<bool> participating(spec.n, false);
    for (NodeId h : spec.helpers) participating[h] = true;
    const auto reach = netmodel::can_reach(spec.cost, spec.failed, participating);

    for (NodeId i = 0; i < spec.n; ++i) {
        if (!participating[i]) continue;
        for (NodeId j = 0; j < spec.n; ++j) {
            if (!spec.cost.has_link(i, j)) continue;
            if (j != spec.failed && !(participating[j] && reach[j])) continue;
            fg.edges.push_back(Edge{i, j});
        }
    }
    std::sort(fg.edges.begin(), fg.edges.end());
    if (std::none_of(fg.edges.begin(), fg.edges.end(), [&](const Edge& e) { return e.to == spec.failed; })) {
        throw ConfigError("no helper can reach the new node");
    }

    using VK = FlowGraph::VertexKind;
    using AK = FlowGraph::ArcKind;
    fg.vertices.push_back({VK::source, 0});
    for (NodeId i = 0; i < spec.n; ++i) {
        bool fresh = i == spec.failed;
        fg.vertices.push_back({fresh ? VK::new_in : VK::in, i});
        fg.vertices.push_back({fresh ? VK::new_out : VK::out, i});
    }
    for (NodeId i : fg.survivors) {
        fg.arcs.push_back({fg.source(), fg.in_vertex(i), AK::infinite, 0});
        fg.arcs.push_back({fg.in_vertex(i), fg.out_vertex(i), AK::storage, 0});
    }
    fg.arcs.push_back({fg.in_vertex(spec.failed), fg.out_vertex(spec.failed), AK::storage, 0});
    for (std::size_t e = 0; e < fg.edges.size(); ++e) {
        const Edge& edge = fg.edges[e];
        // relayed traffic lands on the receiver's out vertex, bypassing its storage arc
        std::size_t head = edge.to == spec.failed ? fg.in_vertex(edge.to) : fg.out_vertex(edge.to);
        fg.arcs.push_back({fg.out_vertex(edge.from), head, AK::symbolic, e});
    }
    return fg;
}

enum class Reduction {
    /// drop rows with b <= 0 and exact duplicates only
    dedupe,
    /// additionally drop every row implied by another single row
    full,
};

namespace detail {

inline bool row_less(const std::vector<int>& a, const Rational& ba, const std::vector<int>& b, const Rational& bb) {
    if (a != b) return a < b;
    return ba < bb;
}

}  // namespace detail

/// Enumerates every first-stage cut separating S from a data collector attached to the
/// new node and k-1 survivors, and returns the resulting constraint rows.
inline ConstraintSet enumerate_cut_constraints(const FlowGraph& fg, const NetworkSpec& spec,
                                               Reduction reduction = Reduction::full) {
    const std::size_t m = fg.survivors.size();
    if (m > 11) throw ConfigError("cut enumeration is limited to n <= 12");
    if (spec.k < 1) throw ConfigError("k must be at least 1");

    // Every in_i sits on the source side (S -> in_i is infinite). A cut is therefore fixed by the
    // set D of survivors whose out vertex lies on the collector side (|D| >= k-1, since the
    // collector's k-1 survivors are in D) and by the side of in_nu.
    std::vector<std::pair<std::vector<int>, Rational>> rows;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<bool> in_d(fg.n, false);
        std::size_t size = 0;
        for (std::size_t s = 0; s < m; ++s) {
            if (mask & (std::size_t{1} << s)) {
                in_d[fg.survivors[s]] = true;
                ++size;
            }
        }
        if (size + 1 < spec.k) continue;
        for (int new_in_on_collector_side = 0; new_in_on_collector_side < 2; ++new_in_on_collector_side) {
            std::size_t storage_arcs = size + (new_in_on_collector_side ? 0 : 1);
            Rational rhs = spec.file_size - spec.alpha * static_cast<long long>(storage_arcs);
            if (rhs <= 0) continue;
            std::vector<int> coeff(fg.edges.size(), 0);
            for (std::size_t e = 0; e < fg.edges.size(); ++e) {
                const Edge& edge = fg.edges[e];
                if (in_d[edge.from]) continue;
                bool head_on_collector_side = edge.to == fg.new_node ? new_in_on_collector_side != 0 : in_d[edge.to];
                if (head_on_collector_side) coeff[e] = 1;
            }
            rows.emplace_back(std::move(coeff), rhs);
        }
    }

    std::sort(rows.begin(), rows.end(),
              [](const auto& x, const auto& y) { return detail::row_less(x.first, x.second, y.first, y.second); });
    // identical coefficients: keep only the largest right-hand side
    std::vector<std::pair<std::vector<int>, Rational>> unique;
    for (auto& row : rows) {
        if (!unique.empty() && unique.back().first == row.first) {
            unique.back().second = row.second;
        } else {
            unique.push_back(std::move(row));
        }
    }

    std::vector<bool> keep(unique.size(), true);
    if (reduction == Reduction::full) {
        for (std::size_t v = 0; v < unique.size(); ++v) {
            for (std::size_t u = 0; u < unique.size() && keep[v]; ++u) {
                if (u == v || !keep[u]) continue;
                bool leq = true;
                for (std::size_t e = 0; e < unique[v].first.size() && leq; ++e) {
                    leq = unique[u].first[e] <= unique[v].first[e];
                }
                if (leq && unique[u].second >= unique[v].second) keep[v] = false;
            }
        }
    }

    ConstraintSet cs;
    cs.edge_index = fg.edges;
    for (std::size_t r = 0; r < unique.size(); ++r) {
        if (!keep[r]) continue;
        cs.L.push_back(std::move(unique[r].first));
        cs.b.push_back(std::move(unique[r].second));
    }
    return cs;
}

/// True iff z >= 0 and L z >= b, exactly.
inline bool check_feasible(const ConstraintSet& cs, const std::vector<Rational>& z) {
    if (z.size() != cs.cols()) throw ConfigError("subgraph does not match the constraint edge index");
    for (const auto& v : z)
        if (v < 0) return false;
    for (std::size_t r = 0; r < cs.rows(); ++r) {
        Rational lhs = 0;
        for (std::size_t e = 0; e < cs.cols(); ++e)
            if (cs.L[r][e] != 0) lhs += z[e] * cs.L[r][e];
        if (lhs < cs.b[r]) return false;
    }
    return true;
}

inline bool check_feasible(const ConstraintSet& cs, const Subgraph& z) {
    if (z.edges != cs.edge_index) throw ConfigError("subgraph does not match the constraint edge index");
    return check_feasible(cs, z.amount);
}

/// Per-edge costs aligned with an edge index.
inline std::vector<Rational> edge_costs(const NetworkSpec& spec, const std::vector<Edge>& edges) {
    std::vector<Rational> c;
    c.reserve(edges.size());
    for (const auto& e : edges) {
        const LinkCost& cost = spec.cost.at(e.from, e.to);
        if (!cost) throw ConfigError("edge " + edge_label(e) + " has no link");
        c.push_back(*cost);
    }
    return c;
}

/// Convenience: flow graph plus fully reduced constraints.
inline ConstraintSet constraints_for(const NetworkSpec& spec, Reduction reduction = Reduction::full) {
    return enumerate_cut_constraints(build_flow_graph(spec), spec, reduction);
}

}  // namespace flowgraph

using flowgraph::build_flow_graph;
using flowgraph::check_feasible;
using flowgraph::enumerate_cut_constraints;

}  // namespace repairopt

#pragma once

// Storage-network model: parameters, directed link costs, topology generators
// and path costs. Node ids are 0-based in the API and 1-based in every
// serialized form. The node regenerated after a failure keeps the failed
// node's id and links.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "repairopt/bounds.hpp"
#include "repairopt/error.hpp"
#include "repairopt/rational.hpp"

namespace repairopt {

using NodeId = std::size_t;

enum class TopologyKind { tandem, star, grid, complete, custom };

inline std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::tandem: return "tandem";
        case TopologyKind::star: return "star";
        case TopologyKind::grid: return "grid";
        case TopologyKind::complete: return "complete";
        case TopologyKind::custom: return "custom";
    }
    return "custom";
}

inline TopologyKind parse_topology_kind(const std::string& name) {
    if (name == "tandem") return TopologyKind::tandem;
    if (name == "star") return TopologyKind::star;
    if (name == "grid") return TopologyKind::grid;
    if (name == "complete") return TopologyKind::complete;
    if (name == "custom") return TopologyKind::custom;
    throw ConfigError("unknown topology '" + name + "'");
}

/// Dense n x n matrix of directed unit-transmission costs.
class CostMatrix {
public:
    CostMatrix() = default;
    explicit CostMatrix(std::size_t n) : n_(n), entries_(n * n) {
        for (std::size_t i = 0; i < n; ++i) entries_[i * n + i] = Rational(0);
    }

    std::size_t size() const { return n_; }

    const LinkCost& at(NodeId i, NodeId j) const {
        check(i, j);
        return entries_[i * n_ + j];
    }
    void set(NodeId i, NodeId j, LinkCost cost) {
        check(i, j);
        entries_[i * n_ + j] = std::move(cost);
    }
    bool has_link(NodeId i, NodeId j) const { return i != j && at(i, j).has_value(); }

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

private:
    void check(NodeId i, NodeId j) const {
        if (i >= n_ || j >= n_) throw ConfigError("cost matrix index out of range");
    }

    std::size_t n_ = 0;
    std::vector<LinkCost> entries_;
};

/// Shape information carried along so that closed forms and re-orientation know the layout.
struct TopologyInfo {
    TopologyKind kind = TopologyKind::custom;
    NodeId center = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    friend bool operator==(const TopologyInfo&, const TopologyInfo&) = default;
};

struct NetworkSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t d = 0;
    Rational alpha;
    Rational file_size;
    NodeId failed = 0;
    std::vector<NodeId> helpers;
    CostMatrix cost;
    TopologyInfo topology;

    bool is_msr() const { return alpha * static_cast<long long>(k) == file_size; }

    std::vector<NodeId> survivors() const {
        std::vector<NodeId> out;
        for (NodeId i = 0; i < n; ++i) {
            if (i != failed) out.push_back(i);
        }
        return out;
    }

    bool is_helper(NodeId i) const { return std::find(helpers.begin(), helpers.end(), i) != helpers.end(); }

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// An undirected physical link; generated topologies orient it per failure.
struct Link {
    NodeId a = 0;
    NodeId b = 0;
    Rational cost = 1;
};

struct TopologyParams {
    std::size_t k = 0;
    Rational alpha = 0;
    Rational file_size = 0;
    NodeId failed = 0;
    /// Number of helpers; defaults to n - 1.
    std::optional<std::size_t> d;
    /// Explicit helper set; overrides d when non-empty.
    std::vector<NodeId> helpers;
    NodeId center = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Per-link cost overrides keyed by the unordered node pair (min id, max id).
    std::map<std::pair<NodeId, NodeId>, Rational> link_costs;
    /// Directed matrix for TopologyKind::custom.
    std::optional<CostMatrix> custom;
};

namespace netmodel {

/// Kahn topological order with smallest-id tie-breaking; std::nullopt if the link digraph has a cycle.
inline std::optional<std::vector<NodeId>> topological_order(const CostMatrix& cost) {
    const std::size_t n = cost.size();
    std::vector<std::size_t> indegree(n, 0);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (cost.has_link(i, j)) ++indegree[j];
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(i);
    std::vector<NodeId> order;
    while (!ready.empty()) {
        NodeId u = ready.top();
        ready.pop();
        order.push_back(u);
        for (NodeId v = 0; v < n; ++v) {
            if (cost.has_link(u, v) && --indegree[v] == 0) ready.push(v);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

/// Minimum total cost over directed paths i -> j that do not pass through the failed position.
inline LinkCost shortest_path_cost(const NetworkSpec& spec, NodeId from, NodeId to) {
    const std::size_t n = spec.cost.size();
    if (from >= n || to >= n) throw ConfigError("shortest_path_cost: node out of range");
    if (from == to) return Rational(0);
    // Dijkstra over nonnegative rationals; n is tiny so the quadratic scan is fine.
    std::vector<LinkCost> dist(n);
    std::vector<bool> done(n, false);
    dist[from] = Rational(0);
    for (std::size_t round = 0; round < n; ++round) {
        std::optional<NodeId> u;
        for (NodeId v = 0; v < n; ++v) {
            if (!done[v] && dist[v] && (!u || *dist[v] < *dist[*u])) u = v;
        }
        if (!u) break;
        done[*u] = true;
        if (*u == to) break;
        if (*u == spec.failed && *u != from) continue;
        for (NodeId v = 0; v < n; ++v) {
            if (!spec.cost.has_link(*u, v)) continue;
            Rational candidate = *dist[*u] + *spec.cost.at(*u, v);
            if (!dist[v] || candidate < *dist[v]) dist[v] = candidate;
        }
    }
    return dist[to];
}

/// Nodes that can reach `target` using only links among `allowed` nodes (target always allowed).
inline std::vector<bool> can_reach(const CostMatrix& cost, NodeId target, const std::vector<bool>& allowed) {
    const std::size_t n = cost.size();
    std::vector<bool> reach(n, false);
    reach[target] = true;
    std::vector<NodeId> stack{target};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u = 0; u < n; ++u) {
            if (!reach[u] && allowed[u] && cost.has_link(u, v)) {
                reach[u] = true;
                stack.push_back(u);
            }
        }
    }
    return reach;
}

/// Throws ConfigError describing the first violated invariant.
inline void validate(const NetworkSpec& spec) {
    if (spec.n < 2) throw ConfigError("need at least 2 nodes");
    if (spec.cost.size() != spec.n) throw ConfigError("cost matrix must be n x n");
    if (spec.k < 1) throw ConfigError("k must be at least 1");
    if (spec.failed >= spec.n) throw ConfigError("failed node out of range");
    if (spec.helpers.size() != spec.d) throw ConfigError("helper count does not match d");
    if (spec.d < spec.k || spec.d > spec.n - 1) throw ConfigError("need k <= d <= n-1");
    if (spec.alpha <= 0) throw ConfigError("alpha must be positive");
    if (spec.file_size <= 0) throw ConfigError("M must be positive");
    std::vector<bool> seen(spec.n, false);
    for (NodeId h : spec.helpers) {
        if (h >= spec.n) throw ConfigError("helper out of range");
        if (h == spec.failed) throw ConfigError("failed node cannot be a helper");
        if (seen[h]) throw ConfigError("duplicate helper");
        seen[h] = true;
    }
    for (NodeId i = 0; i < spec.n; ++i) {
        const LinkCost& diag = spec.cost.at(i, i);
        if (!diag || *diag != 0) throw ConfigError("cost matrix diagonal must be 0");
        for (NodeId j = 0; j < spec.n; ++j) {
            const LinkCost& c = spec.cost.at(i, j);
            if (c && *c < 0) throw ConfigError("link costs must be nonnegative");
        }
    }
    if (!topological_order(spec.cost)) throw ConfigError("cost matrix digraph must be acyclic");
    std::vector<bool> allowed = seen;
    const auto reach = can_reach(spec.cost, spec.failed, allowed);
    for (NodeId h : spec.helpers) {
        if (!reach[h]) throw ConfigError("helper " + std::to_string(h + 1) + " has no path to the new node");
    }
}

inline std::vector<Link> undirected_links(TopologyKind kind, std::size_t n, const TopologyParams& p) {
    std::vector<Link> links;
    auto add = [&](NodeId a, NodeId b) { links.push_back(Link{std::min(a, b), std::max(a, b), 1}); };
    switch (kind) {
        case TopologyKind::tandem:
            for (NodeId i = 0; i + 1 < n; ++i) add(i, i + 1);
            break;
        case TopologyKind::star:
            if (p.center >= n) throw ConfigError("star center out of range");
            for (NodeId i = 0; i < n; ++i)
                if (i != p.center) add(p.center, i);
            break;
        case TopologyKind::grid:
            if (p.rows == 0 || p.cols == 0 || p.rows * p.cols != n) throw ConfigError("grid needs rows * cols = n");
            for (std::size_t r = 0; r < p.rows; ++r) {
                for (std::size_t c = 0; c < p.cols; ++c) {
                    NodeId v = r * p.cols + c;
                    if (c + 1 < p.cols) add(v, v + 1);
                    if (r + 1 < p.rows) add(v, v + p.cols);
                }
            }
            break;
        case TopologyKind::complete:
            for (NodeId i = 0; i < n; ++i)
                for (NodeId j = i + 1; j < n; ++j) add(i, j);
            break;
        case TopologyKind::custom:
            throw ConfigError("custom topologies carry an explicit cost matrix");
    }
    for (auto& link : links) {
        if (auto it = p.link_costs.find({link.a, link.b}); it != p.link_costs.end()) link.cost = it->second;
    }
    for (const auto& [pair, cost] : p.link_costs) {
        bool found = std::any_of(links.begin(), links.end(),
                                 [&](const Link& l) { return l.a == pair.first && l.b == pair.second; });
        if (!found) throw ConfigError("cost override for a pair that is not linked");
        if (cost < 0) throw ConfigError("link costs must be nonnegative");
    }
    return links;
}

/// Undirected links recovered from a directed matrix (each finite off-diagonal entry is one link).
inline std::vector<Link> links_of(const CostMatrix& cost) {
    std::vector<Link> links;
    for (NodeId i = 0; i < cost.size(); ++i) {
        for (NodeId j = 0; j < cost.size(); ++j) {
            if (cost.has_link(i, j)) links.push_back(Link{std::min(i, j), std::max(i, j), *cost.at(i, j)});
        }
    }
    std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    return links;
}

/// Orients every link toward `failed`: from larger hop distance to smaller, ties from lower id to higher.
inline CostMatrix orient_toward(std::size_t n, const std::vector<Link>& links, NodeId failed) {
    constexpr std::size_t unreachable = static_cast<std::size_t>(-1);
    std::vector<std::size_t> hops(n, unreachable);
    hops[failed] = 0;
    std::queue<NodeId> frontier;
    frontier.push(failed);
    while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop();
        for (const auto& l : links) {
            NodeId other = l.a == v ? l.b : (l.b == v ? l.a : v);
            if (other != v && hops[other] == unreachable) {
                hops[other] = hops[v] + 1;
                frontier.push(other);
            }
        }
    }
    CostMatrix cost(n);
    for (const auto& l : links) {
        auto rank = [&](NodeId v) { return std::pair(hops[v] == unreachable ? n : n - hops[v], v); };
        // lower rank sends to higher rank; rank grows as the node gets closer to the failure
        NodeId from = rank(l.a) < rank(l.b) ? l.a : l.b;
        NodeId to = from == l.a ? l.b : l.a;
        cost.set(from, to, l.cost);
    }
    return cost;
}

/// The d survivors with the cheapest path to the failed position (ties by id), in id order.
inline std::vector<NodeId> nearest_helpers(const NetworkSpec& partial, std::size_t d) {
    std::vector<std::pair<LinkCost, NodeId>> ranked;
    for (NodeId i : partial.survivors()) ranked.emplace_back(shortest_path_cost(partial, i, partial.failed), i);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.first.has_value() != y.first.has_value()) return x.first.has_value();
        if (x.first && *x.first != *y.first) return *x.first < *y.first;
        return x.second < y.second;
    });
    if (d > ranked.size()) throw ConfigError("d exceeds the number of survivors");
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back(ranked[i].second);
    std::sort(out.begin(), out.end());
    return out;
}

inline void assign_helpers(NetworkSpec& spec, const TopologyParams& p) {
    if (!p.helpers.empty()) {
        spec.helpers = p.helpers;
        std::sort(spec.helpers.begin(), spec.helpers.end());
    } else if (!p.d || *p.d == spec.n - 1) {
        spec.helpers = spec.survivors();
    } else {
        spec.helpers = nearest_helpers(spec, *p.d);
    }
    spec.d = spec.helpers.size();
}

/// Builds and validates a NetworkSpec for one of the studied topologies or an explicit matrix.
inline NetworkSpec build_topology(TopologyKind kind, std::size_t n, const TopologyParams& p) {
    if (n < 3 && kind != TopologyKind::custom) throw ConfigError("generated topologies need n >= 3");
    if (p.failed >= n) throw ConfigError("failed node out of range");
    NetworkSpec spec;
    spec.n = n;
    spec.k = p.k;
    spec.alpha = p.alpha;
    spec.file_size = p.file_size;
    spec.failed = p.failed;
    spec.topology = TopologyInfo{kind, kind == TopologyKind::star ? p.center : 0, p.rows, p.cols};
    if (kind == TopologyKind::custom) {
        if (!p.custom) throw ConfigError("custom topology needs a cost matrix");
        if (p.custom->size() != n) throw ConfigError("custom cost matrix must be n x n");
        spec.cost = *p.custom;
    } else {
        spec.cost = orient_toward(n, undirected_links(kind, n, p), p.failed);
    }
    if (!topological_order(spec.cost)) throw ConfigError("cost matrix digraph must be acyclic");
    assign_helpers(spec, p);
    validate(spec);
    return spec;
}

/// The same physical network with a different failed position; links are re-oriented toward it.
inline NetworkSpec with_failure(const NetworkSpec& spec, NodeId failed) {
    if (failed >= spec.n) throw ConfigError("failed node out of range");
    NetworkSpec out = spec;
    out.failed = failed;
    out.cost = orient_toward(spec.n, links_of(spec.cost), failed);
    TopologyParams p;
    p.d = spec.d;
    assign_helpers(out, p);
    validate(out);
    return out;
}

/// sigma_non-opt: every helper ships beta fragments along its cheapest path.
inline Rational baseline_cost(const NetworkSpec& spec) {
    if (!spec.is_msr()) throw ConfigError("baseline cost is defined at alpha = M/k");
    Rational beta = bounds::msr_beta(spec.file_size, spec.k, spec.d);
    Rational total = 0;
    for (NodeId h : spec.helpers) {
        LinkCost c = shortest_path_cost(spec, h, spec.failed);
        if (!c) throw ConfigError("helper cannot reach the new node");
        total += *c;
    }
    return beta * total;
}

/// True when every link in the matrix costs exactly one unit.
inline bool has_unit_costs(const NetworkSpec& spec) {
    for (NodeId i = 0; i < spec.n; ++i)
        for (NodeId j = 0; j < spec.n; ++j)
            if (spec.cost.has_link(i, j) && *spec.cost.at(i, j) != 1) return false;
    return true;
}

}  // namespace netmodel

using netmodel::baseline_cost;
using netmodel::build_topology;
using netmodel::shortest_path_cost;

}  // namespace repairopt

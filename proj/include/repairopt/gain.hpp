#pragma once

// Joins the baseline, the LP optimum and the applicable closed form for one network.

#include <optional>

#include "repairopt/bounds.hpp"
#include "repairopt/flowgraph.hpp"
#include "repairopt/lpcore.hpp"
#include "repairopt/netmodel.hpp"

namespace repairopt::bounds {

struct GainReport {
    Rational sigma_non_opt;
    Rational sigma_opt;
    Rational g_c;
    std::optional<Rational> closed_form;
    bool matches_closed_form = false;
    /// Published gain, when the network is in the closed-form parameter family.
    std::optional<Rational> gain_published;
    bool lp_within_baseline = false;
};

inline bool is_line_end(const NetworkSpec& spec) { return spec.failed == 0 || spec.failed + 1 == spec.n; }

/// Closed form for the spec's topology, if one applies (unit-cost tandem, or unit-cost star with a leaf failing).
inline std::optional<Rational> closed_form_for(const NetworkSpec& spec) {
    if (!netmodel::has_unit_costs(spec)) return std::nullopt;
    switch (spec.topology.kind) {
        case TopologyKind::tandem:
            return tandem_lower_bound(spec.k, spec.file_size, spec.alpha);
        case TopologyKind::star:
            if (spec.failed == spec.topology.center || spec.d + 1 != spec.n) return std::nullopt;
            return star_lower_bound(spec.n, spec.k, spec.file_size, spec.alpha);
        default:
            return std::nullopt;
    }
}

/// Published gain for the (M = k(n-k), alpha = n-k, d = n-1) family.
inline std::optional<Rational> published_gain_for(const NetworkSpec& spec) {
    if (!netmodel::has_unit_costs(spec) || spec.d + 1 != spec.n || spec.k >= spec.n) return std::nullopt;
    const Rational family_alpha(static_cast<long long>(spec.n - spec.k));
    if (spec.alpha != family_alpha || spec.file_size != family_alpha * static_cast<long long>(spec.k)) return std::nullopt;
    if (spec.topology.kind == TopologyKind::tandem && is_line_end(spec)) return gain_tandem_endnode(spec.n, spec.k);
    if (spec.topology.kind == TopologyKind::star && spec.failed != spec.topology.center)
        return gain_star_noncentral(spec.n, spec.k);
    return std::nullopt;
}

inline GainReport compare_lp_to_bounds(const NetworkSpec& spec) {
    GainReport g;
    g.sigma_non_opt = netmodel::baseline_cost(spec);
    const ConstraintSet cs = flowgraph::constraints_for(spec);
    const LPSolution sol = solve_min_cost(cs, flowgraph::edge_costs(spec, cs.edge_index));
    if (sol.status != LPStatus::optimal) throw Error("repair LP is " + to_string(sol.status));
    if (sol.value < 0) throw Error("repair LP returned a negative cost");
    g.sigma_opt = sol.value;
    g.g_c = g.sigma_opt == 0 ? Rational(0) : g.sigma_non_opt / g.sigma_opt;
    g.closed_form = closed_form_for(spec);
    g.matches_closed_form = g.closed_form && *g.closed_form == g.sigma_opt;
    g.gain_published = published_gain_for(spec);
    g.lp_within_baseline = g.sigma_opt <= g.sigma_non_opt;
    return g;
}

}  // namespace repairopt::bounds

#pragma once

// Reference networks with independently known repair costs.

#include <string>
#include <vector>

#include "repairopt/netmodel.hpp"

namespace repairopt::fixtures {

inline TopologyParams msr_params(std::size_t k, long long file_size, NodeId failed) {
    TopologyParams p;
    p.k = k;
    p.file_size = file_size;
    p.alpha = Rational(file_size) / static_cast<long long>(k);
    p.failed = failed;
    return p;
}

/// Line 1-2-3-4, node 4 fails, k = 2, M = 4.
inline NetworkSpec tandem4() { return build_topology(TopologyKind::tandem, 4, msr_params(2, 4, 3)); }

/// 2 x 3 grid (row-major ids 1..6), node 6 fails, k = 4, M = 8.
inline NetworkSpec grid2x3() {
    TopologyParams p = msr_params(4, 8, 5);
    p.rows = 2;
    p.cols = 3;
    return build_topology(TopologyKind::grid, 6, p);
}

/// Complete graph on 5 nodes, node 5 fails, k = 3, M = 6; links into node 5 cost `direct_cost`.
inline NetworkSpec complete5(long long direct_cost = 1) {
    TopologyParams p = msr_params(3, 6, 4);
    if (direct_cost != 1)
        for (NodeId i = 0; i < 4; ++i) p.link_costs[{i, 4}] = direct_cost;
    return build_topology(TopologyKind::complete, 5, p);
}

/// Star on 6 nodes with center 2, leaf 1 fails, k = 3, M = file_size.
inline NetworkSpec star6(long long file_size = 9) {
    TopologyParams p = msr_params(3, file_size, 0);
    p.center = 1;
    return build_topology(TopologyKind::star, 6, p);
}

inline NetworkSpec tandem(std::size_t n, std::size_t k, long long file_size, NodeId failed) {
    return build_topology(TopologyKind::tandem, n, msr_params(k, file_size, failed));
}

struct Fixture {
    std::string name;
    NetworkSpec spec;
    /// Published optimal repair cost.
    Rational expected_lp;
    /// Known shortest-path baseline, when one is recorded for the network.
    std::optional<Rational> expected_baseline;
    /// Set when the published cost is not the LP optimum of the cut model; the value here was
    /// confirmed by an independent max-flow check of the optimal vertex.
    std::optional<Rational> model_lp = std::nullopt;

    Rational lp() const { return model_lp.value_or(expected_lp); }
};

/// The reference table used by `repairopt fixtures` and the acceptance suite.
inline std::vector<Fixture> reference_fixtures() {
    return {
        {"tandem", tandem4(), 4, Rational(6)},
        // 7 is the best integral plan; (2/3,2/3,0,4/3,2/3,4/3,2) meets every cut at 20/3
        {"grid", grid2x3(), 7, Rational(9), Rational(20, 3)},
        {"complete-1", complete5(1), 4, std::nullopt},
        // z12=z23=z24=z35=z45=1 meets every cut at 9
        {"complete-3", complete5(3), 10, Rational(12), Rational(9)},
        {"star-n6", star6(9), 7, std::nullopt},
        {"star-n6-frac", star6(6), Rational(14, 3), std::nullopt},
    };
}

}  // namespace repairopt::fixtures

#pragma once

// Optimal-cost minimum-storage regenerating codes: random linear network coding
// along an LP-optimal repair subgraph, with surviving nodes combining what they
// relay with what they store.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "repairopt/error.hpp"
#include "repairopt/flowgraph.hpp"
#include "repairopt/gfalg.hpp"
#include "repairopt/lpcore.hpp"
#include "repairopt/netmodel.hpp"
#include "repairopt/rational.hpp"

namespace repairopt::coder {

using Rng = std::mt19937_64;

inline constexpr std::size_t default_retry_budget = 100;

/// Coding coefficients of every node: node i stores X_i = Q_i^T s, with Q_i an M_s x alpha_s matrix.
struct CodeState {
    gf::Word q = 2;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t file_fragments = 0;     // M_s = L * M
    std::size_t fragments_per_node = 0; // alpha_s = L * alpha
    std::size_t scale = 1;              // L: subfragments per fragment
    std::size_t stage = 0;
    std::vector<gf::FieldMatrix> nodes;

    friend bool operator==(const CodeState&, const CodeState&) = default;
};

struct RepairPlan {
    NodeId new_node = 0;
    /// Active edges (positive traffic) in edge-index order, with integral subfragment counts.
    std::vector<Edge> edges;
    std::vector<std::size_t> counts;
    std::size_t scale = 1;
    /// Processing order: a topological order of the link digraph.
    std::vector<NodeId> order;
    std::size_t n_nc = 0;
    gf::Word q = 0;
    /// sum c * count / scale, in whole fragments.
    Rational cost;
};

struct RcpCheck {
    bool ok = true;
    std::optional<std::vector<NodeId>> failing_subset;
    std::size_t subsets_checked = 0;
};

/// Calls `visit` with each k-subset of {0..n-1} in lexicographic order; stops early when it returns false.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (!visit(static_cast<const std::vector<std::size_t>&>(idx))) return;
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) return;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

/// Regenerating-code property: every k nodes jointly span all M_s source dimensions.
inline RcpCheck verify_rcp(const CodeState& state) {
    RcpCheck res;
    for_each_subset(state.n, state.k, [&](const std::vector<std::size_t>& subset) {
        ++res.subsets_checked;
        gf::FieldMatrix joined(state.q, state.file_fragments, 0);
        for (std::size_t i : subset) joined = joined.hconcat(state.nodes[i]);
        if (gf::rank(joined) != state.file_fragments) {
            res.ok = false;
            res.failing_subset = subset;
            return false;
        }
        return true;
    });
    return res;
}

inline Integer binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    Integer r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    return r;
}

/// d0 = C(n, k) * M_s * n_nc; any prime field larger than d0 admits a valid code.
inline Integer field_size_bound(std::size_t n, std::size_t k, std::size_t file_fragments, std::size_t n_nc) {
    if (k < 1 || n < k) throw ConfigError("field_size_bound: need n >= k >= 1");
    return binomial(n, k) * static_cast<unsigned long long>(file_fragments) * static_cast<unsigned long long>(n_nc);
}

/// Smallest prime strictly greater than d0.
inline gf::Word field_for_bound(const Integer& d0) {
    if (d0 + 1 >= Integer(gf::max_modulus)) throw ConfigError("field size bound exceeds the supported modulus range");
    return gf::smallest_prime_geq(std::max<gf::Word>(2, (d0 + 1).convert_to<gf::Word>()));
}

/// 1 + the most encoding nodes on any active path into the new node (the number of vertices on the longest such path).
inline std::size_t compute_n_nc(const RepairPlan& plan) {
    if (plan.edges.empty()) throw ConfigError("compute_n_nc: plan has no active edge");
    // longest path measured in vertices, computed along the processing order
    std::vector<std::size_t> depth;
    NodeId max_node = plan.new_node;
    for (const auto& e : plan.edges) max_node = std::max({max_node, e.from, e.to});
    depth.assign(max_node + 1, 1);
    for (NodeId v : plan.order) {
        for (const auto& e : plan.edges)
            if (e.to == v) depth[v] = std::max(depth[v], depth[e.from] + 1);
    }
    return depth[plan.new_node];
}

/// Least common multiple of the denominators of z, alpha and M.
inline std::size_t scaling_factor(const std::vector<Rational>& z, const Rational& alpha, const Rational& file_size) {
    Integer l = lcm_of(denominator_of(alpha), denominator_of(file_size));
    for (const auto& v : z) l = lcm_of(l, denominator_of(v));
    if (l > 1'000'000) throw ConfigError("fragment scaling factor is too large");
    return l.convert_to<std::size_t>();
}

/// Turns an LP subgraph into an integral plan at subfragment granularity `scale`.
inline RepairPlan make_repair_plan(const NetworkSpec& spec, const Subgraph& z, std::size_t scale) {
    if (scale == 0) throw ConfigError("scale must be positive");
    RepairPlan plan;
    plan.new_node = spec.failed;
    plan.scale = scale;
    plan.cost = 0;
    for (std::size_t e = 0; e < z.edges.size(); ++e) {
        if (z.amount[e] < 0) throw ConfigError("negative traffic on " + edge_label(z.edges[e]));
        if (z.amount[e] == 0) continue;
        Rational scaled = z.amount[e] * static_cast<unsigned long long>(scale);
        if (!is_integral(scaled)) throw InfeasiblePlanError("traffic on " + edge_label(z.edges[e]) + " is not integral at this scale");
        const LinkCost& c = spec.cost.at(z.edges[e].from, z.edges[e].to);
        if (!c) throw ConfigError("edge " + edge_label(z.edges[e]) + " has no link");
        plan.edges.push_back(z.edges[e]);
        plan.counts.push_back(numerator_of(scaled).convert_to<std::size_t>());
        plan.cost += *c * z.amount[e];
    }
    auto order = netmodel::topological_order(spec.cost);
    if (!order) throw ConfigError("link digraph is cyclic");
    plan.order = *order;
    if (!plan.edges.empty()) plan.n_nc = compute_n_nc(plan);
    return plan;
}

inline gf::FieldMatrix random_matrix(gf::Word q, std::size_t rows, std::size_t cols, Rng& rng) {
    gf::FieldMatrix m(q, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng() % q;
    return m;
}

struct CodeParams {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t file_fragments = 0;
    std::size_t fragments_per_node = 0;
    std::size_t scale = 1;
    gf::Word q = 2;
};

struct InitOutcome {
    CodeState state;
    std::size_t attempts = 0;
};

/// Random initial code, resampled until every k nodes can reconstruct.
inline InitOutcome init_code(const CodeParams& p, Rng& rng, std::size_t retries = default_retry_budget) {
    if (p.k < 1 || p.k > p.n) throw ConfigError("init_code: need 1 <= k <= n");
    if (p.fragments_per_node * p.k != p.file_fragments) throw ConfigError("init_code: need M = k * alpha (minimum-storage regime)");
    gf::PrimeField check(p.q);
    (void)check;
    InitOutcome out;
    for (out.attempts = 1; out.attempts <= retries; ++out.attempts) {
        CodeState s;
        s.q = p.q;
        s.n = p.n;
        s.k = p.k;
        s.file_fragments = p.file_fragments;
        s.fragments_per_node = p.fragments_per_node;
        s.scale = p.scale;
        for (std::size_t i = 0; i < p.n; ++i) s.nodes.push_back(random_matrix(p.q, p.file_fragments, p.fragments_per_node, rng));
        if (verify_rcp(s).ok) {
            out.state = std::move(s);
            return out;
        }
    }
    throw RetryExhaustedError("init_code: no valid code after " + std::to_string(retries) + " attempts");
}

inline InitOutcome init_code(const CodeParams& p, std::uint64_t seed, std::size_t retries = default_retry_budget) {
    Rng rng(seed);
    return init_code(p, rng, retries);
}

/// Builds a state from explicit per-node coefficient matrices (each M x alpha).
inline CodeState state_from_nodes(gf::Word q, std::size_t k, std::vector<gf::FieldMatrix> nodes, std::size_t scale = 1) {
    if (nodes.empty()) throw ConfigError("state_from_nodes: no nodes");
    CodeState s;
    s.q = q;
    s.n = nodes.size();
    s.k = k;
    s.file_fragments = nodes[0].rows();
    s.fragments_per_node = nodes[0].cols();
    s.scale = scale;
    for (const auto& m : nodes) {
        if (m.modulus() != q || m.rows() != s.file_fragments || m.cols() != s.fragments_per_node)
            throw ConfigError("state_from_nodes: inconsistent node matrices");
    }
    s.nodes = std::move(nodes);
    return s;
}

/// What a node is asked to mix: `inputs` available vectors into `outputs` new ones.
/// `edge` is empty for the new node's own storage.
struct MixRequest {
    NodeId node = 0;
    std::optional<Edge> edge;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
};

/// Returns an inputs x outputs coefficient matrix.
using Mixer = std::function<gf::FieldMatrix(const MixRequest&)>;

inline Mixer random_mixer(gf::Word q, Rng& rng) {
    return [q, &rng](const MixRequest& r) { return random_matrix(q, r.inputs, r.outputs, rng); };
}

/// One repair pass with the given mixing coefficients; the RCP is not checked here.
inline CodeState apply_repair(const CodeState& state, const RepairPlan& plan, const Mixer& mix) {
    if (plan.new_node >= state.n) throw ConfigError("plan's new node is out of range");
    if (plan.scale != state.scale) throw ConfigError("plan and code use different fragment scales");
    const gf::Word q = state.q;
    const std::size_t rows = state.file_fragments;
    std::vector<gf::FieldMatrix> received(state.n, gf::FieldMatrix(q, rows, 0));

    for (NodeId v : plan.order) {
        if (v == plan.new_node) continue;
        bool sends = false;
        for (const auto& e : plan.edges) sends = sends || e.from == v;
        if (!sends) continue;
        // inputs: own stored columns followed by everything received this stage
        const gf::FieldMatrix inputs = state.nodes[v].hconcat(received[v]);
        for (std::size_t i = 0; i < plan.edges.size(); ++i) {
            const Edge& e = plan.edges[i];
            if (e.from != v) continue;
            gf::FieldMatrix w = mix(MixRequest{v, e, inputs.cols(), plan.counts[i]});
            if (w.rows() != inputs.cols() || w.cols() != plan.counts[i] || w.modulus() != q)
                throw ConfigError("mixer returned a matrix of the wrong shape");
            received[e.to] = received[e.to].hconcat(inputs * w);
        }
    }

    const gf::FieldMatrix& incoming = received[plan.new_node];
    if (incoming.cols() < state.fragments_per_node) {
        throw InfeasiblePlanError("new node receives " + std::to_string(incoming.cols()) + " subfragments but must store " +
                                  std::to_string(state.fragments_per_node));
    }
    gf::FieldMatrix w = mix(MixRequest{plan.new_node, std::nullopt, incoming.cols(), state.fragments_per_node});
    if (w.rows() != incoming.cols() || w.cols() != state.fragments_per_node || w.modulus() != q)
        throw ConfigError("mixer returned a matrix of the wrong shape");

    CodeState next = state;
    next.nodes[plan.new_node] = incoming * w;
    ++next.stage;
    return next;
}

struct RegenerateOutcome {
    CodeState state;
    std::size_t attempts = 0;
};

/// Functional repair of plan.new_node; random coefficients are redrawn until the RCP holds again.
inline RegenerateOutcome regenerate(const CodeState& state, const RepairPlan& plan, Rng& rng,
                                    std::size_t retries = default_retry_budget) {
    Mixer mix = random_mixer(state.q, rng);
    RegenerateOutcome out;
    for (out.attempts = 1; out.attempts <= retries; ++out.attempts) {
        CodeState next = apply_repair(state, plan, mix);
        if (verify_rcp(next).ok) {
            out.state = std::move(next);
            return out;
        }
    }
    throw RetryExhaustedError("regenerate: RCP not restored after " + std::to_string(retries) + " attempts");
}

inline RegenerateOutcome regenerate(const CodeState& state, const RepairPlan& plan, std::uint64_t seed,
                                    std::size_t retries = default_retry_budget) {
    Rng rng(seed);
    return regenerate(state, plan, rng, retries);
}

/// LP-optimal plan for one failure, with everything needed to size the field.
struct PlannedRepair {
    NetworkSpec spec;
    ConstraintSet constraints;
    LPSolution lp;
    std::size_t scale = 1;
    RepairPlan plan;
    Integer d0;
};

inline PlannedRepair plan_repair(const NetworkSpec& spec) {
    if (!spec.is_msr()) throw ConfigError("coding needs alpha = M/k");
    PlannedRepair pr;
    pr.spec = spec;
    pr.constraints = flowgraph::constraints_for(spec);
    pr.lp = solve_min_cost(pr.constraints, flowgraph::edge_costs(spec, pr.constraints.edge_index));
    if (pr.lp.status != LPStatus::optimal) throw InfeasiblePlanError("repair LP is " + to_string(pr.lp.status));
    pr.scale = scaling_factor(pr.lp.z, spec.alpha, spec.file_size);
    return pr;
}

/// Fixes the scale, builds the integral plan and its field-size bound.
inline void finalize_plan(PlannedRepair& pr, std::size_t scale) {
    pr.scale = scale;
    pr.plan = make_repair_plan(pr.spec, pr.lp.subgraph(pr.constraints), scale);
    const std::size_t m_scaled = (pr.spec.file_size * static_cast<unsigned long long>(scale)).convert_to<std::size_t>();
    pr.d0 = field_size_bound(pr.spec.n, pr.spec.k, m_scaled, std::max<std::size_t>(pr.plan.n_nc, 2));
}

inline CodeParams params_for(const NetworkSpec& spec, std::size_t scale, gf::Word q) {
    CodeParams p;
    p.n = spec.n;
    p.k = spec.k;
    p.scale = scale;
    const Rational m = spec.file_size * static_cast<unsigned long long>(scale);
    const Rational a = spec.alpha * static_cast<unsigned long long>(scale);
    if (!is_integral(m) || !is_integral(a)) throw ConfigError("scale does not make M and alpha integral");
    p.file_fragments = m.convert_to<std::size_t>();
    p.fragments_per_node = a.convert_to<std::size_t>();
    p.q = q;
    return p;
}

/// One stage of a simulation (or the single repair of the `code` pipeline).
struct StageRecord {
    std::size_t stage = 0;
    NodeId failed = 0;
    Rational lp_value;
    Rational achieved_cost;
    gf::Word q = 0;
    std::size_t n_nc = 0;
    Integer d0;
    std::size_t scale = 1;
    std::size_t attempts = 0;
    bool rcp_ok = false;
    std::uint64_t seed = 0;
};

struct RepairRun {
    PlannedRepair planned;
    std::size_t init_attempts = 0;
    StageRecord record;
    CodeState before;
    CodeState after;
};

/// Plan, size the field, initialize a random code and repair `spec.failed` once.
inline RepairRun run_single_repair(const NetworkSpec& spec, std::uint64_t seed, std::size_t retries = default_retry_budget) {
    RepairRun run;
    run.planned = plan_repair(spec);
    finalize_plan(run.planned, run.planned.scale);
    const gf::Word q = field_for_bound(run.planned.d0);
    run.planned.plan.q = q;
    Rng rng(seed);
    InitOutcome init = init_code(params_for(spec, run.planned.scale, q), rng, retries);
    run.init_attempts = init.attempts;
    run.before = init.state;
    RegenerateOutcome regen = regenerate(init.state, run.planned.plan, rng, retries);
    run.after = regen.state;
    run.record.stage = 1;
    run.record.failed = spec.failed;
    run.record.lp_value = run.planned.lp.value;
    run.record.achieved_cost = run.planned.plan.cost;
    run.record.q = q;
    run.record.n_nc = run.planned.plan.n_nc;
    run.record.d0 = run.planned.d0;
    run.record.scale = run.planned.scale;
    run.record.attempts = regen.attempts;
    run.record.rcp_ok = verify_rcp(run.after).ok;
    run.record.seed = seed;
    return run;
}

struct SimulationResult {
    std::uint64_t seed = 0;
    gf::Word q = 0;
    std::size_t scale = 1;
    std::size_t init_attempts = 0;
    std::vector<StageRecord> stages;
    bool aborted = false;
    std::string diagnostics;
    CodeState final_state;
};

/// T rounds of: random failure -> LP-optimal plan -> regenerate -> verify.
/// Plans for every failure position are computed up front so one field and one scale serve all stages.
inline SimulationResult simulate_stages(const NetworkSpec& spec, std::size_t stages, std::uint64_t seed,
                                        std::size_t retries = default_retry_budget) {
    if (stages < 1) throw ConfigError("simulate_stages: need at least one stage");
    SimulationResult res;
    res.seed = seed;

    std::vector<PlannedRepair> per_position;
    std::size_t scale = 1;
    for (NodeId p = 0; p < spec.n; ++p) {
        per_position.push_back(plan_repair(p == spec.failed ? spec : netmodel::with_failure(spec, p)));
        scale = lcm_of(Integer(scale), Integer(per_position.back().scale)).convert_to<std::size_t>();
    }
    Integer worst_d0 = 0;
    for (auto& pr : per_position) {
        finalize_plan(pr, scale);
        worst_d0 = std::max(worst_d0, pr.d0);
    }
    res.q = field_for_bound(worst_d0);
    res.scale = scale;

    Rng rng(seed);
    InitOutcome init = init_code(params_for(spec, scale, res.q), rng, retries);
    res.init_attempts = init.attempts;
    CodeState state = std::move(init.state);

    for (std::size_t t = 1; t <= stages; ++t) {
        const NodeId failed = static_cast<NodeId>(rng() % spec.n);
        PlannedRepair& pr = per_position[failed];
        pr.plan.q = res.q;
        StageRecord rec;
        rec.stage = t;
        rec.failed = failed;
        rec.lp_value = pr.lp.value;
        rec.achieved_cost = pr.plan.cost;
        rec.q = res.q;
        rec.n_nc = pr.plan.n_nc;
        rec.d0 = pr.d0;
        rec.scale = scale;
        rec.seed = seed;
        try {
            RegenerateOutcome out = regenerate(state, pr.plan, rng, retries);
            rec.attempts = out.attempts;
            state = std::move(out.state);
            rec.rcp_ok = verify_rcp(state).ok;
        } catch (const Error& e) {
            rec.rcp_ok = false;
            rec.attempts = retries;
            res.stages.push_back(rec);
            res.aborted = true;
            res.diagnostics = "stage " + std::to_string(t) + " (failed node " + std::to_string(failed + 1) + "): " + e.what();
            break;
        }
        res.stages.push_back(rec);
    }
    res.final_state = std::move(state);
    return res;
}

}  // namespace repairopt::coder

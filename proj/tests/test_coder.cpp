#include <gtest/gtest.h>

#include "repairopt/coder.hpp"
#include "repairopt/fixtures.hpp"

using namespace repairopt;
using namespace repairopt::coder;

namespace {

// Source vector order (a1, b1, a2, b2); each node's matrix holds one coefficient column per stored fragment.
gf::FieldMatrix node(gf::Word q, std::vector<std::vector<std::int64_t>> columns) {
    std::vector<std::vector<std::int64_t>> rows(columns[0].size(), std::vector<std::int64_t>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t r = 0; r < columns[c].size(); ++r) rows[r][c] = columns[c][r];
    return gf::FieldMatrix(q, rows);
}

/// The four-node tandem code drawn in the reference example, over GF(q).
std::vector<gf::FieldMatrix> tandem_example_nodes(gf::Word q) {
    return {
        node(q, {{1, 0, 0, 0}, {0, 1, 0, 0}}),
        node(q, {{0, 0, 1, 0}, {0, 0, 0, 1}}),
        node(q, {{1, 1, 1, 1}, {1, 2, 1, 2}}),
        node(q, {{1, 2, 3, 1}, {3, 2, 2, 3}}),
    };
}

RepairPlan plan_from(const NetworkSpec& spec, std::vector<Rational> z, std::size_t scale = 1) {
    const ConstraintSet cs = flowgraph::constraints_for(spec);
    return make_repair_plan(spec, Subgraph{cs.edge_index, std::move(z)}, scale);
}

}  // namespace

TEST(NetworkCodingDepth, LongestActivePath) {
    const NetworkSpec tandem = fixtures::tandem4();
    EXPECT_EQ(plan_from(tandem, {1, 2, 2}).n_nc, 4u);
    EXPECT_EQ(plan_from(tandem, {0, 2, 2}).n_nc, 3u);
    EXPECT_EQ(plan_from(tandem, {0, 0, 2}).n_nc, 2u);
    EXPECT_EQ(plan_from(fixtures::grid2x3(), {0, 1, 0, 1, 1, 2, 2}).n_nc, 4u);
    RepairPlan empty;
    EXPECT_THROW(compute_n_nc(empty), ConfigError);
}

TEST(FieldSize, BoundAndPrime) {
    EXPECT_EQ(field_size_bound(4, 2, 4, 4), 96);
    EXPECT_EQ(field_size_bound(6, 4, 8, 6), 720);
    EXPECT_EQ(field_size_bound(3, 3, 5, 2), 10);
    EXPECT_EQ(field_for_bound(720), 727u);
    EXPECT_EQ(field_for_bound(96), 97u);
    EXPECT_EQ(field_for_bound(97), 101u);
    EXPECT_THROW(field_size_bound(2, 3, 4, 2), ConfigError);
}

TEST(Scaling, LcmOfDenominators) {
    EXPECT_EQ(scaling_factor({Rational(2, 3), Rational(1, 2)}, 2, 6), 6u);
    EXPECT_EQ(scaling_factor({1, 2}, Rational(3, 2), 3), 2u);
    EXPECT_EQ(scaling_factor({}, 2, 4), 1u);
}

TEST(InitCode, RandomCodeSatisfiesRcp) {
    CodeParams p{4, 2, 4, 2, 1, 11};
    const InitOutcome out = init_code(p, std::uint64_t{42});
    const RcpCheck check = verify_rcp(out.state);
    EXPECT_TRUE(check.ok);
    EXPECT_EQ(check.subsets_checked, 6u);
    EXPECT_GE(out.attempts, 1u);
}

TEST(InitCode, NoRedundancyMeansInvertible) {
    CodeParams p{3, 3, 3, 1, 1, 101};
    const InitOutcome out = init_code(p, std::uint64_t{1});
    gf::FieldMatrix joined = out.state.nodes[0].hconcat(out.state.nodes[1]).hconcat(out.state.nodes[2]);
    EXPECT_NE(gf::det(joined), 0u);
}

TEST(InitCode, RejectsNonMsrParameters) {
    CodeParams p{4, 2, 5, 2, 1, 11};
    EXPECT_THROW(init_code(p, std::uint64_t{1}), ConfigError);
}

TEST(ReferenceCode, FourNodeExampleOverGF11) {
    const CodeState s = state_from_nodes(11, 2, tandem_example_nodes(11));
    EXPECT_TRUE(verify_rcp(s).ok);
    // nodes 1 and 3 together
    EXPECT_EQ(gf::rank(s.nodes[0].hconcat(s.nodes[2])), 4u);
}

TEST(ReferenceCode, RegeneratedNodeFromTheFigureKeepsRcp) {
    std::vector<gf::FieldMatrix> nodes = tandem_example_nodes(11);
    nodes[3] = node(11, {{5, 7, 8, 7}, {6, 9, 6, 6}});
    EXPECT_TRUE(verify_rcp(state_from_nodes(11, 2, nodes)).ok);
}

TEST(ReferenceCode, CooperativeSchemeOverGF5Replays) {
    const NetworkSpec spec = fixtures::tandem4();
    const CodeState before = state_from_nodes(5, 2, tandem_example_nodes(5));
    ASSERT_TRUE(verify_rcp(before).ok);
    const RepairPlan plan = plan_from(spec, {0, 2, 2});
    ASSERT_EQ(plan.cost, 4);

    Mixer scripted = [](const MixRequest& r) {
        if (r.node == 1) return gf::FieldMatrix(5, {{2, 1}, {1, 2}});  // p2 = 2a2 + b2, p3 = a2 + 2b2
        // node 3 inputs: own two columns, then p2, p3
        if (r.node == 2) return gf::FieldMatrix(5, {{1, 0}, {0, 1}, {1, 0}, {0, 1}});
        return gf::FieldMatrix::identity(5, 2);
    };
    const CodeState after = apply_repair(before, plan, scripted);
    EXPECT_EQ(after.nodes[3], node(5, {{1, 1, 3, 2}, {1, 2, 2, 4}}));
    EXPECT_TRUE(verify_rcp(after).ok);
    EXPECT_EQ(after.stage, 1u);
}

TEST(Regenerate, TandemPlanRestoresRcpAtLpCost) {
    const NetworkSpec spec = fixtures::tandem4();
    const RepairPlan plan = plan_from(spec, {0, 2, 2});
    const CodeState before = init_code(CodeParams{4, 2, 4, 2, 1, 97}, std::uint64_t{3}).state;
    const RegenerateOutcome out = regenerate(before, plan, std::uint64_t{4});
    EXPECT_TRUE(verify_rcp(out.state).ok);
    EXPECT_EQ(plan.cost, 4);
    for (NodeId i = 0; i < 3; ++i) EXPECT_EQ(out.state.nodes[i], before.nodes[i]);
}

TEST(Regenerate, UnderSuppliedNewNodeIsRejected) {
    const NetworkSpec spec = fixtures::tandem4();
    const RepairPlan plan = plan_from(spec, {0, 2, 1});
    const CodeState before = init_code(CodeParams{4, 2, 4, 2, 1, 97}, std::uint64_t{3}).state;
    EXPECT_THROW(regenerate(before, plan, std::uint64_t{4}), InfeasiblePlanError);
}

TEST(Regenerate, MismatchedScaleIsRejected) {
    const NetworkSpec spec = fixtures::tandem4();
    const RepairPlan plan = plan_from(spec, {0, 2, 2}, 2);
    const CodeState before = init_code(CodeParams{4, 2, 4, 2, 1, 97}, std::uint64_t{3}).state;
    EXPECT_THROW(regenerate(before, plan, std::uint64_t{4}), ConfigError);
}

TEST(Regenerate, NonIntegralTrafficNeedsScaling) {
    const NetworkSpec spec = fixtures::tandem4();
    EXPECT_THROW(plan_from(spec, {0, Rational(5, 2), 2}), InfeasiblePlanError);
    EXPECT_NO_THROW(plan_from(spec, {0, Rational(5, 2), 2}, 2));
}

TEST(SingleRepair, AchievesLpCostOnEveryFixture) {
    for (const auto& f : fixtures::reference_fixtures()) {
        const RepairRun run = run_single_repair(f.spec, 2024);
        EXPECT_TRUE(run.record.rcp_ok) << f.name;
        EXPECT_EQ(run.record.achieved_cost, run.record.lp_value) << f.name;
        EXPECT_EQ(run.record.lp_value, f.lp()) << f.name;
        const std::size_t m_scaled = (f.spec.file_size * static_cast<long long>(run.record.scale)).convert_to<std::size_t>();
        const Integer d0 = binomial(f.spec.n, f.spec.k) * m_scaled * run.record.n_nc;
        EXPECT_EQ(run.record.d0, d0) << f.name;
        EXPECT_GT(Integer(run.record.q), d0) << f.name;
        EXPECT_EQ(run.record.q, gf::smallest_prime_geq((d0 + 1).convert_to<gf::Word>())) << f.name;
    }
}

TEST(SingleRepair, FractionalOptimumIsScaled) {
    const RepairRun run = run_single_repair(fixtures::star6(6), 9);
    EXPECT_EQ(run.record.scale, 3u);
    EXPECT_EQ(run.record.achieved_cost, Rational(14, 3));
    EXPECT_EQ(run.after.file_fragments, 18u);
    EXPECT_EQ(run.after.fragments_per_node, 6u);
    EXPECT_TRUE(run.record.rcp_ok);
}

TEST(SingleRepair, DeterministicForAFixedSeed) {
    const RepairRun a = run_single_repair(fixtures::grid2x3(), 77);
    const RepairRun b = run_single_repair(fixtures::grid2x3(), 77);
    EXPECT_EQ(a.after, b.after);
    EXPECT_EQ(a.before, b.before);
    const RepairRun c = run_single_repair(fixtures::grid2x3(), 78);
    EXPECT_NE(a.before, c.before);
}

TEST(SingleRepair, FirstAttemptSuccessRate) {
    // At the smallest prime above d0 the rate is only reported; the contract is no exhaustion.
    for (const auto& f : fixtures::reference_fixtures()) {
        std::size_t first_try = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const RepairRun run = run_single_repair(f.spec, seed);
            ASSERT_TRUE(run.record.rcp_ok);
            first_try += run.record.attempts == 1;
        }
        RecordProperty(f.name + "_first_attempt_percent", static_cast<int>(first_try));
        std::printf("%-14s first-attempt RCP success %zu/100\n", f.name.c_str(), first_try);
    }
}

TEST(SingleRepair, LargeFieldSucceedsFirstTime) {
    // failure probability is at most d0 / q < 1e-6 here, so 100 straight first-attempt successes
    const gf::Word q = 2147483647;
    for (const auto& f : fixtures::reference_fixtures()) {
        PlannedRepair pr = plan_repair(f.spec);
        finalize_plan(pr, pr.scale);
        pr.plan.q = q;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            const InitOutcome init = init_code(params_for(f.spec, pr.scale, q), rng);
            EXPECT_EQ(init.attempts, 1u) << f.name;
            const RegenerateOutcome regen = regenerate(init.state, pr.plan, rng);
            EXPECT_EQ(regen.attempts, 1u) << f.name << " seed " << seed;
            EXPECT_TRUE(verify_rcp(regen.state).ok) << f.name;
        }
    }
}

TEST(Simulation, ManyStagesKeepRcp) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SimulationResult tandem = simulate_stages(fixtures::tandem4(), 20, seed);
        ASSERT_FALSE(tandem.aborted) << tandem.diagnostics;
        ASSERT_EQ(tandem.stages.size(), 20u);
        for (const auto& st : tandem.stages) {
            EXPECT_TRUE(st.rcp_ok);
            EXPECT_EQ(st.achieved_cost, st.lp_value);
        }
        const SimulationResult grid = simulate_stages(fixtures::grid2x3(), 10, seed);
        ASSERT_FALSE(grid.aborted) << grid.diagnostics;
        ASSERT_EQ(grid.stages.size(), 10u);
        for (const auto& st : grid.stages) {
            EXPECT_TRUE(st.rcp_ok);
            if (st.failed == 5) EXPECT_EQ(st.lp_value, Rational(20, 3));
            EXPECT_EQ(st.achieved_cost, st.lp_value);
        }
    }
}

TEST(Simulation, ReproducibleFromSeed) {
    const SimulationResult a = simulate_stages(fixtures::grid2x3(), 5, 123);
    const SimulationResult b = simulate_stages(fixtures::grid2x3(), 5, 123);
    EXPECT_EQ(a.final_state, b.final_state);
    ASSERT_EQ(a.stages.size(), b.stages.size());
    for (std::size_t i = 0; i < a.stages.size(); ++i) EXPECT_EQ(a.stages[i].failed, b.stages[i].failed);
}

TEST(Simulation, RejectsZeroStages) { EXPECT_THROW(simulate_stages(fixtures::tandem4(), 0, 1), ConfigError); }

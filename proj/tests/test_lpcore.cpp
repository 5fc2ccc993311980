#include <gtest/gtest.h>

#include <random>

#include "repairopt/fixtures.hpp"
#include "repairopt/flowgraph.hpp"
#include "repairopt/lpcore.hpp"

using namespace repairopt;

namespace {

struct Solved {
    ConstraintSet cs;
    std::vector<Rational> costs;
    LPSolution sol;
};

Solved solve_spec(const NetworkSpec& s) {
    Solved out;
    out.cs = flowgraph::constraints_for(s);
    out.costs = flowgraph::edge_costs(s, out.cs.edge_index);
    out.sol = solve_min_cost(out.cs, out.costs);
    return out;
}

Rational cost_of(const std::vector<Rational>& c, const std::vector<Rational>& z) {
    Rational total = 0;
    for (std::size_t e = 0; e < c.size(); ++e) total += c[e] * z[e];
    return total;
}

}  // namespace

TEST(Simplex, TandemOptimumIsFour) {
    const Solved r = solve_spec(fixtures::tandem4());
    ASSERT_EQ(r.sol.status, LPStatus::optimal);
    EXPECT_EQ(r.sol.value, 4);
    EXPECT_TRUE(check_feasible(r.cs, r.sol.z));
    EXPECT_EQ(cost_of(r.costs, r.sol.z), r.sol.value);
    EXPECT_TRUE(lpcore::verify_dual_certificate(r.cs, r.costs, r.sol));
}

TEST(Simplex, GridOptimumIsFractional) {
    const Solved r = solve_spec(fixtures::grid2x3());
    ASSERT_EQ(r.sol.status, LPStatus::optimal);
    EXPECT_EQ(r.sol.value, Rational(20, 3));
    EXPECT_TRUE(check_feasible(r.cs, r.sol.z));
    EXPECT_TRUE(lpcore::verify_dual_certificate(r.cs, r.costs, r.sol));
    // every cut is met by this point, so no integral plan at 7 can be LP-optimal
    const std::vector<Rational> thirds{Rational(2, 3), Rational(2, 3), 0, Rational(4, 3), Rational(2, 3), Rational(4, 3), 2};
    EXPECT_TRUE(check_feasible(r.cs, thirds));
    EXPECT_EQ(cost_of(r.costs, thirds), Rational(20, 3));
    const std::vector<Rational> integral{0, 1, 0, 1, 1, 2, 2};
    EXPECT_TRUE(check_feasible(r.cs, integral));
    EXPECT_EQ(cost_of(r.costs, integral), 7);
}

TEST(Simplex, CompleteGraphOptima) {
    const Solved unit = solve_spec(fixtures::complete5(1));
    EXPECT_EQ(unit.sol.value, 4);
    const Solved pricey = solve_spec(fixtures::complete5(3));
    EXPECT_EQ(pricey.sol.value, 9);
    EXPECT_TRUE(lpcore::verify_dual_certificate(pricey.cs, pricey.costs, pricey.sol));
    // edge order: 12 13 14 15 23 24 25 34 35 45
    const std::vector<Rational> relay{1, 0, 0, 0, 1, 1, 0, 0, 1, 1};
    EXPECT_TRUE(check_feasible(pricey.cs, relay));
    EXPECT_EQ(cost_of(pricey.costs, relay), 9);
    const std::vector<Rational> chain{0, 0, 0, 0, 2, 0, 0, 2, 0, 2};
    EXPECT_TRUE(check_feasible(pricey.cs, chain));
    EXPECT_EQ(cost_of(pricey.costs, chain), 10);
}

TEST(Simplex, StarOptimaIncludingFraction) {
    EXPECT_EQ(solve_spec(fixtures::star6(9)).sol.value, 7);
    const Solved frac = solve_spec(fixtures::star6(6));
    EXPECT_EQ(frac.sol.value, Rational(14, 3));
    EXPECT_TRUE(lpcore::verify_dual_certificate(frac.cs, frac.costs, frac.sol));
}

TEST(Simplex, EmptyConstraintSetCostsNothing) {
    ConstraintSet cs;
    cs.edge_index = {{0, 1}, {1, 2}};
    const LPSolution sol = solve_min_cost(cs, {1, 1});
    EXPECT_EQ(sol.status, LPStatus::optimal);
    EXPECT_EQ(sol.value, 0);
    EXPECT_EQ(sol.z, (std::vector<Rational>{0, 0}));
}

TEST(Simplex, ZeroRowWithPositiveDemandIsInfeasible) {
    ConstraintSet cs;
    cs.edge_index = {{0, 1}};
    cs.L = {{0}};
    cs.b = {1};
    EXPECT_EQ(solve_min_cost(cs, {1}).status, LPStatus::infeasible);
}

TEST(Simplex, RejectsBadInput) {
    ConstraintSet cs;
    cs.edge_index = {{0, 1}};
    cs.L = {{1}};
    cs.b = {1};
    EXPECT_THROW(solve_min_cost(cs, {-1}), ConfigError);
    EXPECT_THROW(solve_min_cost(cs, {1, 1}), ConfigError);
}

TEST(Simplex, RedundantRowsAreHandled) {
    ConstraintSet cs;
    cs.edge_index = {{0, 2}, {1, 2}};
    cs.L = {{1, 1}, {1, 1}, {2, 2}};
    cs.b = {3, 3, 6};
    const LPSolution sol = solve_min_cost(cs, {2, 1});
    ASSERT_EQ(sol.status, LPStatus::optimal);
    EXPECT_EQ(sol.value, 3);
    EXPECT_TRUE(lpcore::verify_dual_certificate(cs, {2, 1}, sol));
}

TEST(Simplex, DeterministicAcrossRuns) {
    const Solved a = solve_spec(fixtures::grid2x3());
    const Solved b = solve_spec(fixtures::grid2x3());
    EXPECT_EQ(a.sol.z, b.sol.z);
    EXPECT_EQ(a.sol.dual, b.sol.dual);
    EXPECT_EQ(a.sol.pivots, b.sol.pivots);
}

TEST(Simplex, ScalesWithCostsAndDemands) {
    for (const auto& f : fixtures::reference_fixtures()) {
        Solved base = solve_spec(f.spec);
        const Rational lambda(5, 3);
        std::vector<Rational> scaled_costs = base.costs;
        for (auto& c : scaled_costs) c *= lambda;
        EXPECT_EQ(solve_min_cost(base.cs, scaled_costs).value, lambda * base.sol.value) << f.name;
        ConstraintSet scaled_rows = base.cs;
        for (auto& b : scaled_rows.b) b *= lambda;
        EXPECT_EQ(solve_min_cost(scaled_rows, base.costs).value, lambda * base.sol.value) << f.name;
    }
}

TEST(BruteForce, MatchesSimplexOnSmallFixtures) {
    const Solved tandem = solve_spec(fixtures::tandem4());
    EXPECT_EQ(*brute_force_optimum(tandem.cs, tandem.costs, {1, 4}), 4);
    const Solved grid = solve_spec(fixtures::grid2x3());
    EXPECT_EQ(*brute_force_optimum(grid.cs, grid.costs, {1, 8}), 7);
    EXPECT_EQ(*brute_force_optimum(grid.cs, grid.costs, {3, 8}), Rational(20, 3));
    const Solved star = solve_spec(fixtures::star6(9));
    EXPECT_EQ(*brute_force_optimum(star.cs, star.costs, {1, 9}), 7);
    const Solved frac = solve_spec(fixtures::star6(6));
    EXPECT_EQ(*brute_force_optimum(frac.cs, frac.costs, {3, 6}), Rational(14, 3));
    // a coarser grid cannot reach the fractional optimum
    EXPECT_GT(*brute_force_optimum(frac.cs, frac.costs, {1, 6}), Rational(14, 3));
}

TEST(BruteForce, RefusesLargeInstances) {
    const Solved complete = solve_spec(fixtures::complete5(1));
    EXPECT_THROW(brute_force_optimum(complete.cs, complete.costs, {1, 6}), ConfigError);
    const Solved grid = solve_spec(fixtures::grid2x3());
    lpcore::BruteForceOptions tight{4, 8, 1000};
    EXPECT_THROW(brute_force_optimum(grid.cs, grid.costs, tight), ConfigError);
}

TEST(RandomPrograms, CertifiedOptimaAndBruteForceAgreement) {
    std::mt19937_64 rng(99);
    int certified = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t dims = 1 + rng() % 4;
        const std::size_t rows = 1 + rng() % 5;
        ConstraintSet cs;
        for (std::size_t e = 0; e < dims; ++e) cs.edge_index.push_back({e, dims});
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<int> row(dims);
            for (auto& v : row) v = static_cast<int>(rng() % 3);
            cs.L.push_back(row);
            cs.b.push_back(Rational(static_cast<long long>(rng() % 7) - 1));
        }
        std::vector<Rational> c(dims);
        for (auto& v : c) v = Rational(static_cast<long long>(rng() % 4));
        const LPSolution sol = solve_min_cost(cs, c);
        const auto grid = brute_force_optimum(cs, c, {2, 6});
        if (sol.status == LPStatus::infeasible) {
            EXPECT_FALSE(grid.has_value());
            continue;
        }
        ASSERT_EQ(sol.status, LPStatus::optimal);
        EXPECT_TRUE(check_feasible(cs, sol.z));
        EXPECT_TRUE(lpcore::verify_dual_certificate(cs, c, sol));
        // the grid point search can only do as well as the true optimum
        if (grid) EXPECT_GE(*grid, sol.value);
        ++certified;
    }
    EXPECT_GT(certified, 100);
}

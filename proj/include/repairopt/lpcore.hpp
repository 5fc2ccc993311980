#pragma once

// Exact two-phase simplex (Bland's rule) for  min c.z  s.t.  L z >= b, z >= 0,
// plus an exhaustive grid-search oracle used to audit it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repairopt/error.hpp"
#include "repairopt/flowgraph.hpp"
#include "repairopt/rational.hpp"

namespace repairopt {

enum class LPStatus { optimal, infeasible, unbounded };

inline std::string to_string(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

struct LPSolution {
    LPStatus status = LPStatus::infeasible;
    Rational value;
    /// Optimal vertex, aligned with the constraint set's edge index.
    std::vector<Rational> z;
    /// Dual certificate, one entry per constraint row.
    std::vector<Rational> dual;
    std::size_t pivots = 0;

    Subgraph subgraph(const ConstraintSet& cs) const { return Subgraph{cs.edge_index, z}; }
};

namespace lpcore {

namespace detail {

class Tableau {
public:
    Tableau(const ConstraintSet& cs) : vars_(cs.cols()), rows_(cs.rows()) {
        const std::size_t width = vars_ + 2 * rows_;
        t_.assign(rows_, std::vector<Rational>(width, Rational(0)));
        rhs_.resize(rows_);
        basis_.resize(rows_);
        negated_.assign(rows_, false);
        for (std::size_t r = 0; r < rows_; ++r) {
            negated_[r] = cs.b[r] < 0;
            const int sign = negated_[r] ? -1 : 1;
            for (std::size_t e = 0; e < vars_; ++e) t_[r][e] = Rational(sign * cs.L[r][e]);
            t_[r][surplus(r)] = Rational(-sign);
            t_[r][artificial(r)] = Rational(1);
            rhs_[r] = negated_[r] ? Rational(-cs.b[r]) : cs.b[r];
            basis_[r] = artificial(r);
        }
    }

    std::size_t surplus(std::size_t r) const { return vars_ + r; }
    std::size_t artificial(std::size_t r) const { return vars_ + rows_ + r; }
    bool is_artificial(std::size_t col) const { return col >= vars_ + rows_; }
    std::size_t width() const { return vars_ + 2 * rows_; }

    /// Runs primal simplex for the given column costs; artificial columns never enter when `allow_artificial` is false.
    LPStatus optimize(const std::vector<Rational>& cost, bool allow_artificial, std::size_t& pivots) {
        for (;;) {
            std::optional<std::size_t> entering;
            for (std::size_t j = 0; j < width() && !entering; ++j) {
                if (!allow_artificial && is_artificial(j)) continue;
                if (is_basic(j)) continue;
                if (reduced_cost(cost, j) < 0) entering = j;
            }
            if (!entering) return LPStatus::optimal;
            std::optional<std::size_t> leaving;
            Rational best_ratio;
            for (std::size_t r = 0; r < t_.size(); ++r) {
                if (t_[r][*entering] <= 0) continue;
                Rational ratio = rhs_[r] / t_[r][*entering];
                if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
                    leaving = r;
                    best_ratio = ratio;
                }
            }
            if (!leaving) return LPStatus::unbounded;
            pivot(*leaving, *entering);
            ++pivots;
        }
    }

    Rational objective(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (std::size_t r = 0; r < t_.size(); ++r) v += cost[basis_[r]] * rhs_[r];
        return v;
    }

    /// After phase one: pivot zero-level artificials out, dropping rows that are linearly redundant.
    void expel_artificials(std::size_t& pivots) {
        for (std::size_t r = 0; r < t_.size();) {
            if (!is_artificial(basis_[r])) {
                ++r;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < vars_ + rows_ && !col; ++j) {
                if (t_[r][j] != 0) col = j;
            }
            if (col) {
                pivot(r, *col);
                ++pivots;
                ++r;
            } else {
                t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
            }
        }
    }

    std::vector<Rational> primal() const {
        std::vector<Rational> z(vars_, Rational(0));
        for (std::size_t r = 0; r < t_.size(); ++r)
            if (basis_[r] < vars_) z[basis_[r]] = rhs_[r];
        return z;
    }

    /// y = c_B B^-1, read off the artificial columns (which hold B^-1 throughout).
    std::vector<Rational> dual(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational v = 0;
            for (std::size_t r = 0; r < t_.size(); ++r) v += cost[basis_[r]] * t_[r][artificial(i)];
            y[i] = negated_[i] ? Rational(-v) : v;
        }
        return y;
    }

private:
    bool is_basic(std::size_t col) const {
        for (std::size_t b : basis_)
            if (b == col) return true;
        return false;
    }

    Rational reduced_cost(const std::vector<Rational>& cost, std::size_t col) const {
        Rational d = cost[col];
        for (std::size_t r = 0; r < t_.size(); ++r) {
            if (t_[r][col] != 0) d -= cost[basis_[r]] * t_[r][col];
        }
        return d;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational p = t_[row][col];
        for (auto& v : t_[row]) v /= p;
        rhs_[row] /= p;
        for (std::size_t r = 0; r < t_.size(); ++r) {
            if (r == row || t_[r][col] == 0) continue;
            const Rational f = t_[r][col];
            for (std::size_t j = 0; j < width(); ++j) {
                if (t_[row][j] != 0) t_[r][j] -= f * t_[row][j];
            }
            rhs_[r] -= f * rhs_[row];
        }
        basis_[row] = col;
    }

    std::size_t vars_;
    std::size_t rows_;
    std::vector<std::vector<Rational>> t_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<bool> negated_;
};

inline void check_costs(const ConstraintSet& cs, const std::vector<Rational>& costs) {
    if (costs.size() != cs.cols()) throw ConfigError("cost vector does not match the edge index");
    for (const auto& c : costs)
        if (c < 0) throw ConfigError("negative cost entry");
    if (cs.b.size() != cs.L.size()) throw ConfigError("constraint rows and right-hand side differ in length");
    for (const auto& row : cs.L)
        if (row.size() != cs.cols()) throw ConfigError("constraint row width does not match the edge index");
}

}  // namespace detail

/// Minimizes sum c_e z_e over the cut polytope. Deterministic: Bland's rule, lowest index first.
inline LPSolution solve_min_cost(const ConstraintSet& cs, const std::vector<Rational>& costs) {
    detail::check_costs(cs, costs);
    LPSolution sol;
    if (cs.rows() == 0) {
        sol.status = LPStatus::optimal;
        sol.value = 0;
        sol.z.assign(cs.cols(), Rational(0));
        return sol;
    }

    detail::Tableau tab(cs);
    std::vector<Rational> phase1(tab.width(), Rational(0));
    for (std::size_t r = 0; r < cs.rows(); ++r) phase1[tab.artificial(r)] = 1;
    tab.optimize(phase1, true, sol.pivots);
    if (tab.objective(phase1) > 0) {
        sol.status = LPStatus::infeasible;
        return sol;
    }
    tab.expel_artificials(sol.pivots);

    std::vector<Rational> phase2(tab.width(), Rational(0));
    for (std::size_t e = 0; e < cs.cols(); ++e) phase2[e] = costs[e];
    sol.status = tab.optimize(phase2, false, sol.pivots);
    if (sol.status != LPStatus::optimal) return sol;
    sol.z = tab.primal();
    sol.value = 0;
    for (std::size_t e = 0; e < cs.cols(); ++e) sol.value += costs[e] * sol.z[e];
    sol.dual = tab.dual(phase2);
    return sol;
}

/// Weak-duality audit: y >= 0, y^T L <= c, and y^T b equals the primal value.
inline bool verify_dual_certificate(const ConstraintSet& cs, const std::vector<Rational>& costs,
                                    const LPSolution& sol) {
    if (sol.status != LPStatus::optimal) return false;
    if (sol.dual.size() != cs.rows()) return false;
    for (const auto& y : sol.dual)
        if (y < 0) return false;
    for (std::size_t e = 0; e < cs.cols(); ++e) {
        Rational col = 0;
        for (std::size_t r = 0; r < cs.rows(); ++r) col += sol.dual[r] * cs.L[r][e];
        if (col > costs[e]) return false;
    }
    Rational yb = 0;
    for (std::size_t r = 0; r < cs.rows(); ++r) yb += sol.dual[r] * cs.b[r];
    return yb == sol.value;
}

struct BruteForceOptions {
    std::size_t granularity = 1;
    /// Upper bound per coordinate; the caller normally passes M.
    Rational cap = 0;
    std::uint64_t max_points = 200'000'000;
};

/// Exhaustive minimum of c.z over z in {0, 1/g, ..., cap}^|A| with L z >= b; std::nullopt if no grid point is feasible.
inline std::optional<Rational> brute_force_optimum(const ConstraintSet& cs, const std::vector<Rational>& costs,
                                                   const BruteForceOptions& opt) {
    detail::check_costs(cs, costs);
    if (opt.granularity == 0) throw ConfigError("granularity must be positive");
    if (opt.cap < 0) throw ConfigError("cap must be nonnegative");
    const std::size_t dims = cs.cols();
    if (dims > 8) throw ConfigError("brute force is limited to 8 edges");

    const Integer g = static_cast<unsigned long long>(opt.granularity);
    // Coefficients are nonnegative integers, so clipping a coordinate at the largest b keeps
    // every row satisfied: no optimum needs more than ceil(g * max b) steps.
    Rational max_b = 0;
    for (const auto& b : cs.b) max_b = std::max(max_b, b);
    const Rational scaled_cap = opt.cap * Rational(g);
    Integer steps_big = numerator_of(scaled_cap) / denominator_of(scaled_cap);
    const Rational scaled_b = max_b * Rational(g);
    steps_big = std::min(steps_big, (numerator_of(scaled_b) + denominator_of(scaled_b) - 1) / denominator_of(scaled_b));
    Integer points = 1;
    for (std::size_t e = 0; e < dims; ++e) points *= steps_big + 1;
    if (points > opt.max_points) throw ConfigError("brute force search space exceeds the configured limit");
    const auto steps = steps_big.convert_to<std::int64_t>();

    // Integer form: (L * db) t >= g * b * db with t = g z, and objective (c * dc) t.
    Integer db = 1;
    for (const auto& b : cs.b) db = lcm_of(db, denominator_of(b));
    Integer dc = 1;
    for (const auto& c : costs) dc = lcm_of(dc, denominator_of(c));
    std::vector<std::int64_t> rhs;
    for (const auto& b : cs.b) rhs.push_back((numerator_of(b) * (db / denominator_of(b)) * g).convert_to<std::int64_t>());
    std::vector<std::int64_t> weight;
    for (const auto& c : costs) weight.push_back((numerator_of(c) * (dc / denominator_of(c))).convert_to<std::int64_t>());
    const auto scale = db.convert_to<std::int64_t>();

    std::vector<std::int64_t> t(dims, 0);
    std::optional<std::int64_t> best;
    auto feasible = [&]() {
        for (std::size_t r = 0; r < cs.rows(); ++r) {
            std::int64_t lhs = 0;
            for (std::size_t e = 0; e < dims; ++e) lhs += cs.L[r][e] * t[e];
            if (lhs * scale < rhs[r]) return false;
        }
        return true;
    };
    // depth-first with cost pruning (all weights are nonnegative)
    auto search = [&](auto&& self, std::size_t pos, std::int64_t partial) -> void {
        if (best && partial >= *best) return;
        if (pos == dims) {
            if (feasible()) best = partial;
            return;
        }
        for (std::int64_t v = 0; v <= steps; ++v) {
            t[pos] = v;
            self(self, pos + 1, partial + weight[pos] * v);
        }
        t[pos] = 0;
    };
    search(search, 0, 0);
    if (!best) return std::nullopt;
    return Rational(*best) / Rational(Integer(dc) * g);
}

}  // namespace lpcore

using lpcore::brute_force_optimum;
using lpcore::solve_min_cost;

}  // namespace repairopt

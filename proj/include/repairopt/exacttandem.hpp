#pragma once

// Exact repair on a line of storage nodes with a Vandermonde MDS code.
//
// Node t stores v_t = m_1 + m_2 a_t + ... + m_k a_t^(k-1). To rebuild v_t, k1
// nodes behind it and k2 nodes ahead of it (k1 + k2 = k) each scale their
// symbol by xi_j and add it to a running sum passed one hop toward t, so that
// the two partial sums arriving at t add up to v_t exactly. Every hop carries
// one symbol per instance.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "repairopt/error.hpp"
#include "repairopt/gfalg.hpp"

namespace repairopt::exacttandem {

using gf::Word;

struct VandermondeCode {
    Word q = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    /// Distinct evaluation points, one per node.
    std::vector<Word> points;
    /// Message symbols: message[j][instance] for j < k.
    std::vector<std::vector<Word>> message;
    /// Stored symbols: stored[t][instance].
    std::vector<std::vector<Word>> stored;

    std::size_t instances() const { return message.empty() ? 0 : message[0].size(); }

    /// k x n generator matrix; column t is (1, a_t, ..., a_t^(k-1)).
    gf::FieldMatrix generator() const {
        gf::PrimeField f(q);
        gf::FieldMatrix g(q, k, n);
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t r = 0; r < k; ++r) g(r, t) = f.pow(points[t], r);
        return g;
    }
};

inline Word evaluate(const gf::PrimeField& f, const std::vector<std::vector<Word>>& message, std::size_t instance, Word point) {
    Word acc = 0;
    for (std::size_t j = message.size(); j-- > 0;) acc = f.add(f.mul(acc, point), message[j][instance]);
    return acc;
}

/// Builds the code for explicit points and message; q must be a prime larger than n.
inline VandermondeCode init_vandermonde(std::size_t n, std::size_t k, Word q, std::vector<Word> points,
                                        std::vector<std::vector<Word>> message) {
    if (k < 1 || k > n) throw ConfigError("need 1 <= k <= n");
    if (q <= n) throw ConfigError("field size must exceed the number of nodes");
    gf::PrimeField f(q);
    if (points.size() != n) throw ConfigError("need one evaluation point per node");
    std::vector<Word> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ConfigError("evaluation points must be distinct");
    if (sorted.back() >= q) throw ConfigError("evaluation point outside the field");
    if (message.size() != k) throw ConfigError("message must have k symbols per instance");
    const std::size_t instances = message[0].size();
    if (instances == 0) throw ConfigError("need at least one instance");
    for (auto& row : message) {
        if (row.size() != instances) throw ConfigError("ragged message");
        for (auto& m : row) m %= q;
    }

    VandermondeCode code;
    code.q = q;
    code.n = n;
    code.k = k;
    code.points = std::move(points);
    code.message = std::move(message);
    code.stored.assign(n, std::vector<Word>(instances));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < instances; ++i) code.stored[t][i] = evaluate(f, code.message, i, code.points[t]);
    return code;
}

/// Random distinct points and a random message of `instances` columns, drawn from `seed`.
inline VandermondeCode init_vandermonde(std::size_t n, std::size_t k, Word q, std::uint64_t seed, std::size_t instances = 1) {
    if (q <= n) throw ConfigError("field size must exceed the number of nodes");
    std::mt19937_64 rng(seed);
    std::vector<Word> pool(q);
    for (Word v = 0; v < q; ++v) pool[v] = v;
    // partial Fisher-Yates with an explicit modulus keeps the draw platform-independent
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng() % (q - i)]);
    std::vector<Word> points(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<std::vector<Word>> message(k, std::vector<Word>(instances));
    for (auto& row : message)
        for (auto& m : row) m = rng() % q;
    return init_vandermonde(n, k, q, std::move(points), std::move(message));
}

/// Every k columns of the generator are linearly independent.
inline bool all_subsets_reconstruct(const VandermondeCode& code) {
    const gf::FieldMatrix g = code.generator();
    std::vector<std::size_t> idx(code.k);
    for (std::size_t i = 0; i < code.k; ++i) idx[i] = i;
    for (;;) {
        gf::FieldMatrix sub(code.q, code.k, code.k);
        for (std::size_t c = 0; c < code.k; ++c)
            for (std::size_t r = 0; r < code.k; ++r) sub(r, c) = g(r, idx[c]);
        if (gf::det(sub) == 0) return false;
        std::size_t pos = code.k;
        while (pos > 0 && idx[pos - 1] == code.n - code.k + pos - 1) --pos;
        if (pos == 0) return true;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < code.k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

struct Hop {
    std::size_t from = 0;
    std::size_t to = 0;
    /// Running partial sum carried on this hop, one symbol per instance.
    std::vector<Word> symbols;
};

struct ExactRepairResult {
    std::size_t failed = 0;
    std::size_t backward = 0;
    std::size_t forward = 0;
    std::vector<std::size_t> helpers;
    std::vector<Word> coefficients;
    std::vector<Hop> hops;
    std::vector<Word> restored;
    std::vector<Word> original;
    /// Symbols sent over unit-cost links.
    std::size_t cost = 0;

    bool exact() const { return restored == original; }
};

/// Balanced default: min(t, floor(k/2)) helpers behind (t is 0-based), shifted to fit the line.
inline std::pair<std::size_t, std::size_t> default_split(std::size_t n, std::size_t k, std::size_t t) {
    if (t >= n) throw ConfigError("failed node out of range");
    if (k > n - 1) throw ConfigError("not enough surviving nodes for k helpers");
    const std::size_t behind_available = t;
    const std::size_t ahead_available = n - 1 - t;
    std::size_t back = std::min(behind_available, k / 2);
    std::size_t fwd = k - back;
    if (fwd > ahead_available) {
        fwd = ahead_available;
        back = k - fwd;
    }
    return {back, fwd};
}

/// Rebuilds node t (0-based) from k1 nodes behind it and k2 ahead of it.
inline ExactRepairResult exact_repair(const VandermondeCode& code, std::size_t t, std::size_t k1, std::size_t k2) {
    if (t >= code.n) throw ConfigError("failed node out of range");
    if (k1 + k2 != code.k) throw ConfigError("split must satisfy k1 + k2 = k");
    if (k1 > t) throw ConfigError("not enough helpers behind the failed node");
    if (k2 > code.n - 1 - t) throw ConfigError("not enough helpers ahead of the failed node");
    const gf::PrimeField f(code.q);
    const std::size_t inst = code.instances();

    ExactRepairResult res;
    res.failed = t;
    res.backward = k1;
    res.forward = k2;
    for (std::size_t j = t - k1; j < t; ++j) res.helpers.push_back(j);
    for (std::size_t j = t + 1; j <= t + k2; ++j) res.helpers.push_back(j);

    // xi^T A = (1, a_t, ..., a_t^(k-1)), i.e. A^T xi = target, where row j of A is helper j's column of G.
    gf::FieldMatrix at(code.q, code.k, code.k);
    for (std::size_t c = 0; c < code.k; ++c)
        for (std::size_t r = 0; r < code.k; ++r) at(r, c) = f.pow(code.points[res.helpers[c]], r);
    std::vector<Word> target(code.k);
    for (std::size_t r = 0; r < code.k; ++r) target[r] = f.pow(code.points[t], r);
    res.coefficients = gf::solve(at, target);

    auto coefficient_of = [&](std::size_t node) {
        auto it = std::find(res.helpers.begin(), res.helpers.end(), node);
        return res.coefficients[static_cast<std::size_t>(it - res.helpers.begin())];
    };

    std::vector<Word> from_behind(inst, 0);
    std::vector<Word> from_ahead(inst, 0);
    if (k1 > 0) {
        std::vector<Word> running(inst, 0);
        for (std::size_t j = t - k1; j < t; ++j) {
            const Word xi = coefficient_of(j);
            for (std::size_t i = 0; i < inst; ++i) running[i] = f.add(running[i], f.mul(xi, code.stored[j][i]));
            res.hops.push_back(Hop{j, j + 1, running});
        }
        from_behind = running;
    }
    if (k2 > 0) {
        std::vector<Word> running(inst, 0);
        for (std::size_t j = t + k2; j > t; --j) {
            const Word xi = coefficient_of(j);
            for (std::size_t i = 0; i < inst; ++i) running[i] = f.add(running[i], f.mul(xi, code.stored[j][i]));
            res.hops.push_back(Hop{j, j - 1, running});
        }
        from_ahead = running;
    }
    res.restored.resize(inst);
    for (std::size_t i = 0; i < inst; ++i) res.restored[i] = f.add(from_behind[i], from_ahead[i]);
    res.original = code.stored[t];
    res.cost = res.hops.size() * inst;
    return res;
}

}  // namespace repairopt::exacttandem

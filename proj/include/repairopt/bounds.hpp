#pragma once

// Closed-form repair-cost formulas for the studied topologies.

#include <algorithm>
#include <cstddef>

#include "repairopt/error.hpp"
#include "repairopt/rational.hpp"

namespace repairopt::bounds {

/// Per-helper download at the minimum-storage point: M / (k (d - k + 1)).
inline Rational msr_beta(const Rational& file_size, std::size_t k, std::size_t d) {
    if (k == 0) throw ConfigError("msr_beta: k must be positive");
    if (d < k) throw ConfigError("msr_beta: need d >= k");
    return file_size / Rational(static_cast<long long>(k * (d - k + 1)));
}

inline Rational positive_part(const Rational& x) { return x > 0 ? x : Rational(0); }

/// M - (k-1) alpha, clamped at zero: what the new node must receive from outside any k-1 nodes.
inline Rational residual_demand(std::size_t k, const Rational& file_size, const Rational& alpha) {
    if (k == 0) throw ConfigError("k must be positive");
    return positive_part(file_size - Rational(static_cast<long long>(k - 1)) * alpha);
}

/// [k (M - (k-1) alpha)]^+ for a unit-cost line.
inline Rational tandem_lower_bound(std::size_t k, const Rational& file_size, const Rational& alpha) {
    return Rational(static_cast<long long>(k)) * residual_demand(k, file_size, alpha);
}

/// ((n-2)/(n-k) + 1) [M - (k-1) alpha]^+ for a non-central failure in a unit-cost star.
inline Rational star_lower_bound(std::size_t n, std::size_t k, const Rational& file_size, const Rational& alpha) {
    if (k >= n) throw ConfigError("star_lower_bound: need k < n");
    if (n < 2) throw ConfigError("star_lower_bound: need n >= 2");
    Rational factor = Rational(static_cast<long long>(n - 2), static_cast<long long>(n - k)) + 1;
    return factor * residual_demand(k, file_size, alpha);
}

/// n(n+1) / (2k(n-k)), the end-node tandem gain as published (its baseline counts hops n..1).
inline Rational gain_tandem_endnode(std::size_t n, std::size_t k) {
    if (k == 0 || k >= n) throw ConfigError("gain_tandem_endnode: need 0 < k < n");
    return Rational(static_cast<long long>(n * (n + 1)), static_cast<long long>(2 * k * (n - k)));
}

/// (2n-3) / (2n-k-2), the non-central star gain as published.
inline Rational gain_star_noncentral(std::size_t n, std::size_t k) {
    if (k == 0 || 2 * n < k + 3) throw ConfigError("gain_star_noncentral: need 2n - k - 2 > 0");
    return Rational(static_cast<long long>(2 * n - 3), static_cast<long long>(2 * n - k - 2));
}

}  // namespace repairopt::bounds

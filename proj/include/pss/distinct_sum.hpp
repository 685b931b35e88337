// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Sums over pairwise-distinct index tuples,
//
//   S = sum_{i_1, ..., i_m distinct} prod_j u_j(i_j),
//
// evaluated by Moebius inversion on the lattice of index-coincidence patterns:
// S = sum_pi mu(pi) prod_{B in pi} ( sum_i prod_{j in B} u_j(i) ) with
// mu(pi) = prod_B (-1)^{|B|-1} (|B|-1)!. Cost O(Bell(m) * m * n).

#include "pss/common.hpp"

#include <algorithm>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pss {

inline constexpr std::size_t kMaxDistinctOrder = 4;

/// A set partition of {0..m-1}; each block lists its elements in increasing order.
using SetPartition = std::vector<std::vector<std::size_t>>;

/// All set partitions of {0..m-1} (restricted growth strings, lexicographic).
inline std::vector<SetPartition> set_partitions(std::size_t m) {
    std::vector<SetPartition> out;
    if (m == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<std::size_t> label(m, 0);
    for (;;) {
        std::size_t blocks = 0;
        for (auto l : label) blocks = std::max(blocks, l + 1);
        SetPartition p(blocks);
        for (std::size_t i = 0; i < m; ++i) p[label[i]].push_back(i);
        out.push_back(std::move(p));

        // Next restricted growth string: label[i] <= 1 + max(label[0..i-1]).
        std::size_t i = m;
        for (;;) {
            if (i == 1) return out;
            --i;
            std::size_t prefix_max = 0;
            for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, label[j]);
            if (label[i] <= prefix_max) {
                ++label[i];
                for (std::size_t j = i + 1; j < m; ++j) label[j] = 0;
                break;
            }
        }
    }
}

namespace detail {

inline double moebius_weight(const SetPartition& p) {
    double w = 1.0;
    for (const auto& block : p) {
        const std::size_t b = block.size();
        double f = 1.0;
        for (std::size_t k = 2; k < b; ++k) f *= static_cast<double>(k);
        w *= (b % 2 == 0 ? -1.0 : 1.0) * f;
    }
    return w;
}

}  // namespace detail

/// The m = u.size() sequences must share a common length n >= m.
inline cplx distinct_product_sum(std::span<const std::vector<cplx>> u) {
    const std::size_t m = u.size();
    detail::require(m <= kMaxDistinctOrder, ErrorCode::UnsupportedOrder,
                    "distinct sums implemented up to order 4, got " + std::to_string(m));
    if (m == 0) return 1.0;
    const std::size_t n = u.front().size();
    for (const auto& seq : u)
        detail::require(seq.size() == n, ErrorCode::InvalidParameter, "factor sequences differ in length");
    detail::require(n >= m, ErrorCode::InvalidParameter, "need n >= m for a distinct-index sum");

    cplx total = 0;
    for (const auto& part : set_partitions(m)) {
        cplx term = detail::moebius_weight(part);
        for (const auto& block : part) {
            cplx s = 0;
            for (std::size_t i = 0; i < n; ++i) {
                cplx prod = 1;
                for (auto j : block) prod *= u[j][i];
                s += prod;
            }
            term *= s;
        }
        total += term;
    }
    return total;
}

inline cplx distinct_product_sum(std::initializer_list<std::vector<cplx>> u) {
    const std::vector<std::vector<cplx>> v(u);
    return distinct_product_sum(std::span<const std::vector<cplx>>(v));
}

}  // namespace pss

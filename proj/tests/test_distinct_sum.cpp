// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace pss;

TEST(DistinctSum, SetPartitionCounts) {
    const std::size_t bell[] = {1, 1, 2, 5, 15};
    for (std::size_t m = 0; m <= 4; ++m) EXPECT_EQ(set_partitions(m).size(), bell[m]);
}

TEST(DistinctSum, Counting) {
    const std::vector<cplx> ones(3, 1.0);
    EXPECT_EQ(distinct_product_sum({ones, ones}), cplx(6.0));
    EXPECT_EQ(distinct_product_sum({ones, ones, ones}), cplx(6.0));
    const std::vector<cplx> five(5, 1.0);
    EXPECT_EQ(distinct_product_sum({five, five, five, five}), cplx(120.0));
}

TEST(DistinctSum, PairIdentity) {
    const std::vector<cplx> a{{1, 2}, {3, -1}, {0.5, 0}, {-2, 1}};
    const std::vector<cplx> b{{0, 1}, {2, 2}, {-1, 0.5}, {1, -3}};
    cplx sa = 0, sb = 0, sab = 0;
    for (int i = 0; i < 4; ++i) {
        sa += a[i];
        sb += b[i];
        sab += a[i] * b[i];
    }
    EXPECT_LT(std::abs(distinct_product_sum({a, b}) - (sa * sb - sab)), 1e-13);
}

TEST(DistinctSum, MatchesNaiveLoops) {
    Xorshift64Star rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + trial % 3;
        const std::size_t n = 4 + (trial / 3) % 5;
        std::vector<std::vector<cplx>> u(m, std::vector<cplx>(n));
        for (auto& seq : u)
            for (auto& x : seq) x = cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
        const cplx fast = distinct_product_sum(std::span<const std::vector<cplx>>(u));
        const cplx slow = oracle::naive_distinct_sum(u);
        EXPECT_LE(std::abs(fast - slow), 1e-12 * std::max(1.0, std::abs(slow))) << "m=" << m << " n=" << n;
    }
}

TEST(DistinctSum, Errors) {
    const std::vector<cplx> v(6, 1.0);
    try {
        distinct_product_sum({v, v, v, v, v});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedOrder);
    }
    EXPECT_THROW(distinct_product_sum({v, std::vector<cplx>(5, 1.0)}), Error);
    EXPECT_THROW(distinct_product_sum({std::vector<cplx>(2, 1.0), std::vector<cplx>(2, 1.0),
                                       std::vector<cplx>(2, 1.0)}),
                 Error);
}

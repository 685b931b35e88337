// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Moments of an arbitrary product state before and after one photon
// detection, in O(n) per moment.
//
// Every quantity is an expectation <O_1 O_2 ... O_m> (m <= 4) of collective
// single-site sums O_j = sum_p L_j(p). Expanding the product gives a sum over
// index tuples; grouping tuples by which indices coincide (a set partition of
// the operator slots) leaves, for each partition, a sum over pairwise-distinct
// sites of products of per-block traces Tr(rho_i L_{j1}(i) L_{j2}(i) ...).

#include "pss/common.hpp"
#include "pss/distinct_sum.hpp"
#include "pss/format.hpp"
#include "pss/geometry.hpp"
#include "pss/moments.hpp"
#include "pss/states.hpp"

#include <array>
#include <vector>

namespace pss {

/// One operator slot: the local 2x2 action at each site (basis 0 = g, 1 = e).
struct SiteSum {
    std::vector<Eigen::Matrix2cd> local;

    static Eigen::Matrix2cd lowering() { return (Eigen::Matrix2cd() << 0, 1, 0, 0).finished(); }
    static Eigen::Matrix2cd raising() { return (Eigen::Matrix2cd() << 0, 0, 1, 0).finished(); }
    static Eigen::Matrix2cd pauli_z() { return (Eigen::Matrix2cd() << -1, 0, 0, 1).finished(); }

    static SiteSum field_plus(const Geometry& g, const WaveDirection& k) {
        SiteSum s;
        for (double phi : g.phases(k)) s.local.push_back(std::polar(1.0, -phi) * lowering());
        return s;
    }
    static SiteSum field_minus(const Geometry& g, const WaveDirection& k) {
        SiteSum s;
        for (double phi : g.phases(k)) s.local.push_back(std::polar(1.0, phi) * raising());
        return s;
    }
    static SiteSum quadrature_x(const Geometry& g, const WaveDirection& k) {
        SiteSum s;
        for (double phi : g.phases(k))
            s.local.push_back(std::polar(1.0, -phi) * lowering() + std::polar(1.0, phi) * raising());
        return s;
    }
    static SiteSum quadrature_y(const Geometry& g, const WaveDirection& k) {
        const cplx i(0, 1);
        SiteSum s;
        for (double phi : g.phases(k))
            s.local.push_back(i * std::polar(1.0, -phi) * lowering() - i * std::polar(1.0, phi) * raising());
        return s;
    }
    static SiteSum inversion(std::size_t n) { return SiteSum{std::vector<Eigen::Matrix2cd>(n, pauli_z())}; }
};

/// <O_1 ... O_m> on a product state, operators applied right to left as written.
inline cplx product_expectation(const ProductState& state, const std::vector<const SiteSum*>& ops) {
    const std::size_t n = state.size();
    const std::size_t m = ops.size();
    detail::require(m <= kMaxDistinctOrder, ErrorCode::UnsupportedOrder, "operator strings limited to 4 slots");

    std::vector<Eigen::Matrix2cd> rho(n);
    for (std::size_t p = 0; p < n; ++p) rho[p] << state[p].gg(), state[p].ge(), state[p].eg, state[p].ee;

    cplx total = 0;
    for (const auto& part : set_partitions(m)) {
        if (part.size() > n) continue;  // more distinct sites than emitters
        std::vector<std::vector<cplx>> factors;
        factors.reserve(part.size());
        for (const auto& block : part) {
            std::vector<cplx> f(n);
            for (std::size_t p = 0; p < n; ++p) {
                Eigen::Matrix2cd prod = rho[p];
                // Tr(rho O_a O_b ...) with the block's slots in operator order.
                Eigen::Matrix2cd ops_prod = Eigen::Matrix2cd::Identity();
                for (auto j : block) ops_prod = ops_prod * ops[j]->local[p];
                f[p] = (prod * ops_prod).trace();
            }
            factors.push_back(std::move(f));
        }
        total += distinct_product_sum(std::span<const std::vector<cplx>>(factors));
    }
    return total;
}

namespace detail {

struct Quadratures {
    std::array<SiteSum, 3> ops;

    Quadratures(const Geometry& g, const WaveDirection& k_w)
        : ops{SiteSum::quadrature_x(g, k_w), SiteSum::quadrature_y(g, k_w), SiteSum::inversion(g.size())} {}
};

inline double detection_weight(const ProductState& state, const SiteSum& minus, const SiteSum& plus) {
    const double f = product_expectation(state, {&minus, &plus}).real();
    require(f > 1e-12, ErrorCode::ImpossibleDetection, "detection weight " + format_double(f) + " is zero");
    return f;
}

}  // namespace detail

/// Moments of (X_kw, Y_kw, Z) in the product state itself (no detection).
inline FieldMoments product_moments(const ProductState& state, const WaveDirection& k_w) {
    const detail::Quadratures q(state.geometry(), k_w);
    FieldMoments m;
    m.n = state.size();
    for (int i = 0; i < 3; ++i) {
        m.first(i) = product_expectation(state, {&q.ops[i]}).real();
        for (int j = i; j < 3; ++j)
            m.second(i, j) = m.second(j, i) = product_expectation(state, {&q.ops[i], &q.ops[j]}).real();
    }
    return m;
}

/// Moments after one detection along k_d, measured along k_w. `weight` is F = <E^-_d E^+_d>.
inline FieldMoments single_photon_moments(const ProductState& state, const WaveDirection& k_d,
                                          const WaveDirection& k_w) {
    const auto& g = state.geometry();
    const auto plus = SiteSum::field_plus(g, k_d);
    const auto minus = SiteSum::field_minus(g, k_d);
    const double f = detail::detection_weight(state, minus, plus);
    const detail::Quadratures q(g, k_w);

    FieldMoments m;
    m.n = state.size();
    m.weight = f;
    for (int i = 0; i < 3; ++i) {
        m.first(i) = product_expectation(state, {&minus, &q.ops[i], &plus}).real() / f;
        for (int j = i; j < 3; ++j) {
            m.second(i, j) = m.second(j, i) =
                product_expectation(state, {&minus, &q.ops[i], &q.ops[j], &plus}).real() / f;
        }
    }
    return m;
}

inline FieldMoments single_photon_moments(const ProductState& state, const WaveDirection& k_d) {
    return single_photon_moments(state, k_d, k_d);
}

/// <E^-_kw E^+_kw> after one detection along k_d.
inline double single_photon_intensity(const ProductState& state, const WaveDirection& k_d,
                                      const WaveDirection& k_w) {
    const auto& g = state.geometry();
    const auto plus_d = SiteSum::field_plus(g, k_d);
    const auto minus_d = SiteSum::field_minus(g, k_d);
    const double f = detail::detection_weight(state, minus_d, plus_d);
    const auto plus_w = SiteSum::field_plus(g, k_w);
    const auto minus_w = SiteSum::field_minus(g, k_w);
    return product_expectation(state, {&minus_d, &minus_w, &plus_w, &plus_d}).real() / f;
}

}  // namespace pss

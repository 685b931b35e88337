// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Exact engine: the ensemble as a dense 2^N vector or 2^N x 2^N matrix.
//
// Basis convention: computational basis index k, bit p of k is 1 iff emitter p
// is excited; emitter 0 is the least significant bit. Collective operators are
// never materialized, they act through bit manipulation.

#include "pss/common.hpp"
#include "pss/format.hpp"
#include "pss/geometry.hpp"
#include "pss/moments.hpp"
#include "pss/states.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pss {

inline constexpr std::size_t kMaxPureEmitters = 20;
inline constexpr std::size_t kMaxMixedEmitters = 12;

/**
 * A sum of single-site terms  sum_s ( lower_s sigma^-_s + raise_s sigma^+_s + z_s sigma^z_s ).
 * Covers E^+, E^-, the quadratures X, Y and the inversion Z.
 */
class CollectiveOp {
public:
    CollectiveOp(std::vector<cplx> lower, std::vector<cplx> raise, std::vector<double> z)
        : lower_(std::move(lower)), raise_(std::move(raise)), z_(std::move(z)) {}

    /// E^+_k = sum_p exp(-i k.r_p) sigma^-_p
    static CollectiveOp field_plus(const Geometry& g, const WaveDirection& k) {
        std::vector<cplx> lo;
        for (double phi : g.phases(k)) lo.push_back(std::polar(1.0, -phi));
        return {std::move(lo), std::vector<cplx>(g.size()), std::vector<double>(g.size())};
    }

    static CollectiveOp field_minus(const Geometry& g, const WaveDirection& k) {
        std::vector<cplx> up;
        for (double phi : g.phases(k)) up.push_back(std::polar(1.0, phi));
        return {std::vector<cplx>(g.size()), std::move(up), std::vector<double>(g.size())};
    }

    /// X_k = E^+_k + E^-_k
    static CollectiveOp quadrature_x(const Geometry& g, const WaveDirection& k) {
        std::vector<cplx> lo, up;
        for (double phi : g.phases(k)) {
            lo.push_back(std::polar(1.0, -phi));
            up.push_back(std::polar(1.0, phi));
        }
        return {std::move(lo), std::move(up), std::vector<double>(g.size())};
    }

    /// Y_k = i (E^+_k - E^-_k)
    static CollectiveOp quadrature_y(const Geometry& g, const WaveDirection& k) {
        const cplx i(0, 1);
        std::vector<cplx> lo, up;
        for (double phi : g.phases(k)) {
            lo.push_back(i * std::polar(1.0, -phi));
            up.push_back(-i * std::polar(1.0, phi));
        }
        return {std::move(lo), std::move(up), std::vector<double>(g.size())};
    }

    static CollectiveOp inversion(std::size_t n) {
        return {std::vector<cplx>(n), std::vector<cplx>(n), std::vector<double>(n, 1.0)};
    }

    [[nodiscard]] std::size_t size() const noexcept { return z_.size(); }

    /// Calls f(j, A_jk) for every nonzero entry of column k.
    template <typename F>
    void for_each_in_column(std::uint64_t k, F&& f) const {
        double diag = 0.0;
        for (std::size_t s = 0; s < z_.size(); ++s) {
            const std::uint64_t bit = std::uint64_t{1} << s;
            if (k & bit) {
                diag += z_[s];
                if (lower_[s] != cplx(0.0)) f(k ^ bit, lower_[s]);
            } else {
                diag -= z_[s];
                if (raise_[s] != cplx(0.0)) f(k | bit, raise_[s]);
            }
        }
        if (diag != 0.0) f(k, cplx(diag));
    }

    /// A v, or A rho column by column. Each site acts on blocks of rows that
    /// differ only in that site's bit.
    template <typename Derived>
    [[nodiscard]] Eigen::Matrix<cplx, Eigen::Dynamic, Derived::ColsAtCompileTime> apply(
        const Eigen::MatrixBase<Derived>& v) const {
        using Out = Eigen::Matrix<cplx, Eigen::Dynamic, Derived::ColsAtCompileTime>;
        const Eigen::Index dim = v.rows();
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
        Out out = Out::Zero(dim, v.cols());
        for (std::size_t s = 0; s < z_.size(); ++s) {
            const Eigen::Index b = Eigen::Index{1} << s;
            for (Eigen::Index start = 0; start < dim; start += 2 * b) {
                if (lower_[s] != cplx(0.0)) out.middleRows(start, b) += lower_[s] * v.middleRows(start + b, b);
                if (raise_[s] != cplx(0.0)) out.middleRows(start + b, b) += raise_[s] * v.middleRows(start, b);
                if (z_[s] != 0.0) {
                    diag.segment(start, b).array() -= z_[s];
                    diag.segment(start + b, b).array() += z_[s];
                }
            }
        }
        if (!diag.isZero(0.0)) out += diag.asDiagonal() * v;
        return out;
    }

    /// A rho A^dagger, using A rho A^dagger = A (A rho)^dagger for Hermitian rho.
    [[nodiscard]] Eigen::MatrixXcd conjugate(const Eigen::MatrixXcd& rho) const {
        const Eigen::MatrixXcd half = apply(rho);
        return apply(half.adjoint());
    }

private:
    std::vector<cplx> lower_;
    std::vector<cplx> raise_;
    std::vector<double> z_;
};

class DenseQuantumState {
public:
    DenseQuantumState(std::size_t n, Eigen::VectorXcd psi) : n_(n), data_(std::move(psi)) { check_dim(); }
    DenseQuantumState(std::size_t n, Eigen::MatrixXcd rho) : n_(n), data_(std::move(rho)) { check_dim(); }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t dim() const noexcept { return std::uint64_t{1} << n_; }
    [[nodiscard]] bool is_pure() const noexcept { return std::holds_alternative<Eigen::VectorXcd>(data_); }
    [[nodiscard]] const Eigen::VectorXcd& vector() const { return std::get<Eigen::VectorXcd>(data_); }
    [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return std::get<Eigen::MatrixXcd>(data_); }

    /// Squared norm (pure) or trace (mixed).
    [[nodiscard]] double trace() const {
        return is_pure() ? vector().squaredNorm() : matrix().trace().real();
    }

    /// Density matrix view (materializes |psi><psi| for pure states).
    [[nodiscard]] Eigen::MatrixXcd density_matrix() const {
        if (is_pure()) return vector() * vector().adjoint();
        return matrix();
    }

private:
    void check_dim() const {
        const auto d = static_cast<Eigen::Index>(dim());
        const bool ok = is_pure() ? vector().size() == d : (matrix().rows() == d && matrix().cols() == d);
        detail::require(ok, ErrorCode::InvalidParameter, "state dimension does not match 2^n");
    }

    std::size_t n_;
    std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
};

/// Tensor product of the factors; pure iff every factor is rank one.
inline DenseQuantumState realize(const ProductState& state) {
    const std::size_t n = state.size();
    const bool pure = state.is_pure();
    const std::size_t cap = pure ? kMaxPureEmitters : kMaxMixedEmitters;
    detail::require(n <= cap, ErrorCode::CapacityExceeded,
                    std::string(pure ? "pure" : "mixed") + " dense state limited to " +
                        std::to_string(cap) + " emitters, got " + std::to_string(n));
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);

    if (pure) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
        for (std::size_t p = 0; p < n; ++p) {
            const auto& e = state[p];
            // eg = a_e conj(a_g); put the phase on whichever amplitude is larger.
            cplx a_g, a_e;
            if (e.gg() >= e.ee) {
                a_g = std::sqrt(e.gg());
                a_e = e.eg / a_g;
            } else {
                a_e = std::sqrt(e.ee);
                a_g = std::conj(e.eg) / a_e;
            }
            const double norm = std::sqrt(std::norm(a_g) + std::norm(a_e));
            const Eigen::Index half = psi.size();
            Eigen::VectorXcd next(2 * half);
            next.head(half) = psi * (a_g / norm);
            next.tail(half) = psi * (a_e / norm);
            psi = std::move(next);
        }
        return DenseQuantumState(n, std::move(psi));
    }

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Ones(1, 1);
    for (std::size_t p = 0; p < n; ++p) {
        const auto& e = state[p];
        Eigen::Matrix2cd local;
        local << e.gg(), e.ge(), e.eg, e.ee;  // rows/cols: 0 = g, 1 = e
        const Eigen::Index h = rho.rows();
        Eigen::MatrixXcd next(2 * h, 2 * h);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) next.block(a * h, b * h, h, h) = local(a, b) * rho;
        rho = std::move(next);
    }
    (void)dim;
    return DenseQuantumState(n, std::move(rho));
}

struct PostselectionResult {
    DenseQuantumState state;
    double weight;
};

/**
 * Applies E^+_{k_j} for each planned direction (conjugation for mixed states)
 * and renormalizes. `weight` is the squared norm / trace before
 * renormalization, relative to the input trace.
 */
inline PostselectionResult postselect(const DenseQuantumState& state, const DetectionPlan& plan,
                                      const Geometry& geometry) {
    detail::require(geometry.size() == state.size(), ErrorCode::InvalidParameter,
                    "geometry does not match state size");
    check_plan(plan, state.size());
    const double initial = state.trace();

    if (state.is_pure()) {
        Eigen::VectorXcd psi = state.vector();
        for (const auto& k : plan.directions) psi = CollectiveOp::field_plus(geometry, k).apply(psi);
        const double w = psi.squaredNorm() / initial;
        detail::require(w > 1e-12, ErrorCode::ImpossibleDetection,
                        "detection weight " + format_double(w) + " is zero");
        psi /= std::sqrt(psi.squaredNorm());
        return {DenseQuantumState(state.size(), std::move(psi)), w};
    }

    Eigen::MatrixXcd rho = state.matrix();
    for (const auto& k : plan.directions) {
        const auto e_plus = CollectiveOp::field_plus(geometry, k);
        rho = e_plus.conjugate(rho);
    }
    const double w = rho.trace().real() / initial;
    detail::require(w > 1e-12, ErrorCode::ImpossibleDetection,
                    "detection weight " + format_double(w) + " is zero");
    rho /= rho.trace().real();
    // Symmetrize away round-off so downstream Hermitian checks are exact.
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return {DenseQuantumState(state.size(), std::move(rho)), w};
}

/// <A> for a normalized state.
inline cplx expectation(const DenseQuantumState& state, const CollectiveOp& a) {
    if (state.is_pure()) return state.vector().dot(a.apply(state.vector()));
    const auto& rho = state.matrix();
    cplx sum = 0;
    // Tr(rho A) = sum_k sum_j rho(k, j) A(j, k)
    for (std::uint64_t k = 0; k < state.dim(); ++k)
        a.for_each_in_column(k, [&](std::uint64_t j, cplx v) {
            sum += rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * v;
        });
    return sum;
}

/// <A B> for a normalized state.
inline cplx expectation(const DenseQuantumState& state, const CollectiveOp& a, const CollectiveOp& b) {
    if (state.is_pure()) return state.vector().dot(a.apply(b.apply(state.vector())));
    const auto& rho = state.matrix();
    cplx sum = 0;
    // Tr(rho A B) = sum_i sum_k B(k, i) sum_j rho(i, j) A(j, k)
    for (std::uint64_t i = 0; i < state.dim(); ++i)
        b.for_each_in_column(i, [&](std::uint64_t k, cplx bk) {
            a.for_each_in_column(k, [&](std::uint64_t j, cplx aj) {
                sum += bk * aj * rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            });
        });
    return sum;
}

inline FieldMoments field_moments(const DenseQuantumState& state, const WaveDirection& k_w,
                                  const Geometry& geometry) {
    detail::require(geometry.size() == state.size(), ErrorCode::InvalidParameter,
                    "geometry does not match state size");
    const std::array<CollectiveOp, 3> ops{CollectiveOp::quadrature_x(geometry, k_w),
                                          CollectiveOp::quadrature_y(geometry, k_w),
                                          CollectiveOp::inversion(state.size())};
    FieldMoments m;
    m.n = state.size();
    for (int i = 0; i < 3; ++i) {
        m.first(i) = expectation(state, ops[i]).real();
        for (int j = i; j < 3; ++j) {
            // Hermitian A, B: <(AB + BA)/2> = Re <AB>
            m.second(i, j) = m.second(j, i) = expectation(state, ops[i], ops[j]).real();
        }
    }
    return m;
}

inline double purity(const DenseQuantumState& state) {
    if (state.is_pure()) return 1.0;
    return state.matrix().squaredNorm();
}

/// <E^-_kw E^+_kw>
inline double intensity(const DenseQuantumState& state, const WaveDirection& k_w, const Geometry& geometry) {
    const auto e_plus = CollectiveOp::field_plus(geometry, k_w);
    if (state.is_pure()) return e_plus.apply(state.vector()).squaredNorm();
    return expectation(state, CollectiveOp::field_minus(geometry, k_w), e_plus).real();
}

/// Debug dump `index,re,im` (row-major flattening for mixed states), n <= 6.
inline void write_csv(std::ostream& os, const DenseQuantumState& state) {
    detail::require(state.size() <= 6, ErrorCode::CapacityExceeded, "debug dump limited to n <= 6");
    os << "index,re,im\n";
    if (state.is_pure()) {
        for (Eigen::Index k = 0; k < state.vector().size(); ++k)
            os << k << ',' << format_double(state.vector()[k].real()) << ','
               << format_double(state.vector()[k].imag()) << '\n';
        return;
    }
    const auto& rho = state.matrix();
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j)
            os << i * rho.cols() + j << ',' << format_double(rho(i, j).real()) << ','
               << format_double(rho(i, j).imag()) << '\n';
}

}  // namespace pss

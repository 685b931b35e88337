// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pss/common.hpp"
#include "pss/format.hpp"
#include "pss/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>

namespace pss {

enum class Verdict { Entangled, NotDetected, Indeterminate };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Entangled: return "entangled";
        case Verdict::NotDetected: return "not-detected";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

/// -10 log10(xi2); +inf at xi2 == 0.
inline double db(double xi2) {
    if (xi2 == 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(xi2);
}

struct SqueezingReport {
    std::optional<double> xi2;  // nullopt when indeterminate
    std::variant<Axis, Vec3> minimizer = Axis::X;
    double numerator = 0.0;
    double denominator = 0.0;
    Verdict verdict = Verdict::Indeterminate;

    [[nodiscard]] std::optional<double> db_value() const {
        if (!xi2) return std::nullopt;
        return db(*xi2);
    }

    /// "X", "Y", "Z" or "a;b;c" for an optimized direction.
    [[nodiscard]] std::string minimizer_label() const {
        if (const auto* a = std::get_if<Axis>(&minimizer)) return to_string(*a);
        const auto& v = std::get<Vec3>(minimizer);
        return format_double(v.x()) + ";" + format_double(v.y()) + ";" + format_double(v.z());
    }
};

namespace detail {

inline SqueezingReport finish_report(double numerator, double denominator, std::variant<Axis, Vec3> minimizer) {
    SqueezingReport r;
    // The functional is nonnegative; negative values are round-off.
    r.numerator = std::max(numerator, 0.0);
    r.denominator = denominator;
    r.minimizer = std::move(minimizer);
    if (denominator > 0) {
        r.xi2 = r.numerator / denominator;
        r.verdict = *r.xi2 < 1.0 ? Verdict::Entangled : Verdict::NotDetected;
    }
    return r;
}

inline double denominator(const FieldMoments& m) { return m.second.trace() - 2.0 * m.nd(); }

}  // namespace detail

/// Minimum over the fixed triple (X, Y, Z); ties go to the earlier axis.
inline SqueezingReport xi2_fixed(const FieldMoments& m) {
    const double nm1 = m.nd() - 1.0;
    double best = std::numeric_limits<double>::infinity();
    Axis arg = Axis::X;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const int i = static_cast<int>(a);
        const double value = nm1 * m.variance(a) + m.second(i, i);
        if (value < best) {
            best = value;
            arg = a;
        }
    }
    return detail::finish_report(best, detail::denominator(m), arg);
}

/**
 * Minimum over all unit directions n of (N-1) Var(E_n) + <E_n^2> = n^T A n with
 * A = N M - (N-1) m m^T; the numerator is A's smallest eigenvalue.
 */
inline SqueezingReport xi2_optimal(const FieldMoments& m) {
    detail::require(m.cross_terms_known, ErrorCode::InvalidParameter,
                    "direction optimization needs the full second-moment matrix");
    const Mat3 a = m.nd() * m.second - (m.nd() - 1.0) * m.first * m.first.transpose();
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(a);
    Vec3 v = eig.eigenvectors().col(0);
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v(largest) < 0) v = -v;
    return detail::finish_report(eig.eigenvalues()(0), detail::denominator(m), v);
}

/// Sum of the three variances over 2N.
inline double xi1(const FieldMoments& m) {
    return (m.variance(Axis::X) + m.variance(Axis::Y) + m.variance(Axis::Z)) / (2.0 * m.nd());
}

/// Pair variances over <E_k^2> + N(N-2), minimized over which axis plays k.
inline std::optional<double> xi3(const FieldMoments& m) {
    const double nd = m.nd();
    std::optional<double> best;
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3;
        const int j = (k + 2) % 3;
        const double den = m.second(k, k) + nd * (nd - 2);
        if (!(den > 0)) continue;
        const double num = (nd - 1) * (m.variance(static_cast<Axis>(i)) + m.variance(static_cast<Axis>(j)));
        const double value = std::max(num, 0.0) / den;
        if (!best || value < *best) best = value;
    }
    return best;
}

struct WitnessValues {
    double w1;
    double w2;
    double w3;
};

/// Negative values signal entanglement.
inline WitnessValues witness_values(const FieldMoments& m) {
    const double nd = m.nd();
    const double var_sum = m.variance(Axis::X) + m.variance(Axis::Y) + m.variance(Axis::Z);
    double w2 = std::numeric_limits<double>::infinity();
    double w3 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3;
        const int j = (k + 2) % 3;
        // w2 with axis k as the squeezed one equals (xi2_fixed numerator - denominator) for k.
        w2 = std::min(w2, 2 * nd + (nd - 1) * m.variance(static_cast<Axis>(k)) - m.second(i, i) - m.second(j, j));
        w3 = std::min(w3, (nd - 1) * (m.variance(static_cast<Axis>(i)) + m.variance(static_cast<Axis>(j))) -
                              m.second(k, k) - nd * (nd - 2));
    }
    return {var_sum - 2 * nd, w2, w3};
}

}  // namespace pss

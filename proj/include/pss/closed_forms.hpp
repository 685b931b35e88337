// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Closed-form squeezing parameters and moments for the homogeneous cases.
// A nonpositive denominator is an indeterminate witness and comes back as
// std::nullopt rather than an exception.

#include "pss/common.hpp"
#include "pss/moments.hpp"
#include "pss/states.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace pss {

namespace detail {

inline void require_counts(std::size_t n, std::size_t nu, std::size_t nu_min) {
    require(n >= 2, ErrorCode::InvalidParameter, "need n >= 2");
    require(nu >= nu_min && nu + 1 <= n, ErrorCode::InvalidParameter,
            "nu = " + std::to_string(nu) + " outside [" + std::to_string(nu_min) + ", n-1]");
}

inline std::optional<double> ratio(double num, double den) {
    if (!(den > 0)) return std::nullopt;
    return num / den;
}

/// Fully mixed formula without the nu >= 1 precondition; nu = 0 gives n.
inline std::optional<double> xi2_fully_mixed_unchecked(double n, double nu, double f) {
    return ratio(nu * nu + n * (n - nu), n + nu * (nu - 1) + 2 * nu * (n - nu) * f / (n * (n - 1)));
}

}  // namespace detail

/// Fully excited ensemble after nu detections along one direction: (N - 2 nu)^2 / N^2.
inline double xi2_fully_excited(std::size_t n, std::size_t nu) {
    detail::require_counts(n, nu, 0);
    const double d = static_cast<double>(n) - 2.0 * static_cast<double>(nu);
    return d * d / (static_cast<double>(n) * static_cast<double>(n));
}

/// Fully mixed ensemble, nu detections along k_d, f = structure_factor(k_d - k_w).
inline std::optional<double> xi2_fully_mixed(std::size_t n, std::size_t nu, double f) {
    detail::require_counts(n, nu, 1);
    detail::require(std::isfinite(f) && f >= -static_cast<double>(n), ErrorCode::InvalidParameter,
                    "structure factor below -n");
    return detail::xi2_fully_mixed_unchecked(static_cast<double>(n), static_cast<double>(nu), f);
}

struct OptimalNu {
    double nu_real;
    std::size_t nu_int;
    double xi2;
};

/// Best detection count for the fully mixed state measured along k_d.
inline OptimalNu optimal_nu_fully_mixed(std::size_t n) {
    detail::require(n >= 2, ErrorCode::InvalidParameter, "need n >= 2");
    const double nd = static_cast<double>(n);
    const double nu_real = (-nd - nd * nd + std::sqrt(nd * nd + 3 * nd * nd * nd * nd)) / (nd - 1);
    const double f = nd * (nd - 1);
    auto clamp = [&](double v) {
        return static_cast<std::size_t>(std::clamp(v, 1.0, nd - 1));
    };
    const std::size_t lo = clamp(std::floor(nu_real));
    const std::size_t hi = clamp(std::ceil(nu_real));
    const double x_lo = xi2_fully_mixed(n, lo, f).value();
    const double x_hi = xi2_fully_mixed(n, hi, f).value();
    if (x_hi < x_lo) return {nu_real, hi, x_hi};
    return {nu_real, lo, x_lo};
}

/**
 * Trace of (E^+)^nu rho (E^-)^nu for a coherence-free homogeneous state with
 * excited population ee: (nu!)^2 C(n, nu) ee^nu. Overflows to +inf for large nu.
 */
inline double population_weight(std::size_t n, std::size_t nu, double ee) {
    double w = 1.0;
    for (std::size_t k = 0; k < nu; ++k) w *= static_cast<double>((k + 1) * (n - k)) * ee;
    return w;
}

/**
 * Homogeneous population state with inversion vz = 2 ee - 1 after nu
 * detections along k_d, measured along k_w; f = structure_factor(k_d - k_w).
 * Off-diagonal second moments and the transverse first moments vanish.
 */
inline FieldMoments population_moments_vz(std::size_t n, std::size_t nu, double vz, double f) {
    detail::require_counts(n, nu, 1);
    detail::require(vz > -1.0, ErrorCode::ImpossibleDetection, "no excitation to detect");
    detail::require(vz <= 1.0, ErrorCode::InvalidParameter, "inversion above 1");
    const double nd = static_cast<double>(n);
    const double v = static_cast<double>(nu);
    const double rest = nd - v;
    // Two further distinct undetected emitters exist only when n > 2 and nu < n-1.
    const double edge = (n == 2 || nu + 1 == n) ? 0.0 : 1.0;

    FieldMoments m;
    m.n = n;
    m.first(2) = -v + vz * rest;
    const double transverse = nd + (1 + vz) * v * rest * f / (nd * (nd - 1));
    m.second(0, 0) = transverse;
    m.second(1, 1) = transverse;
    m.second(2, 2) = nd + v * (v - 1) - 2 * v * rest * vz + edge * rest * (rest - 1) * vz * vz;
    m.weight = population_weight(n, nu, (1 + vz) / 2);
    return m;
}

/// Same, parametrized by the population angle: vz = -cos(theta_bar).
inline FieldMoments population_moments(std::size_t n, std::size_t nu, double theta_bar, double f) {
    detail::require(std::isfinite(theta_bar) && theta_bar <= kPi, ErrorCode::InvalidParameter,
                    "theta_bar must lie in (0, pi]");
    detail::require(theta_bar > 0, ErrorCode::ImpossibleDetection, "ground state emits no photons");
    return population_moments_vz(n, nu, -std::cos(theta_bar), f);
}

/// k_d = k_w closed form for population states.
inline std::optional<double> xi2_population(std::size_t n, std::size_t nu, double theta_bar) {
    detail::require_counts(n, nu, 1);
    detail::require(std::isfinite(theta_bar) && theta_bar <= kPi, ErrorCode::InvalidParameter,
                    "theta_bar must lie in (0, pi]");
    detail::require(theta_bar > 0, ErrorCode::ImpossibleDetection, "ground state emits no photons");
    const double nd = static_cast<double>(n);
    const double v = static_cast<double>(nu);
    const double c = std::cos(theta_bar);
    const double s = std::sin(theta_bar);
    return detail::ratio(nd * nd + (v * v - v * nd) * (1 - c) * (1 - c),
                         nd + nd * (nd - 1) * c * c - (v * v - v * (2 * nd - 1)) * s * s);
}

/**
 * Smallest nu with nu > (n-1) cos^2(theta_bar/2), i.e. the first detection
 * count that squeezes a population state; nullopt if it exceeds n-1.
 */
inline std::optional<std::size_t> population_threshold(std::size_t n, double theta_bar) {
    detail::require(n >= 3, ErrorCode::InvalidParameter, "threshold needs n >= 3");
    detail::require(std::isfinite(theta_bar) && theta_bar > 0 && theta_bar <= kPi,
                    ErrorCode::InvalidParameter, "theta_bar must lie in (0, pi]");
    double bound = static_cast<double>(n - 1) * (1 + std::cos(theta_bar)) / 2;
    // Exactly on the bound the parameter equals 1, which is not squeezed.
    if (std::abs(bound - std::round(bound)) < 1e-9) bound = std::round(bound);
    const auto nu = static_cast<std::size_t>(std::floor(bound)) + 1;
    if (nu + 1 > n) return std::nullopt;
    return nu;
}

/**
 * Moments of the phase-aligned CSS (k_d = k_w = k_L) after one detection.
 * Off-diagonal second moments are not provided.
 */
inline FieldMoments homogeneous_css_moments(std::size_t n, double theta) {
    detail::require(n >= 2, ErrorCode::InvalidParameter, "need n >= 2");
    detail::require(std::isfinite(theta) && theta >= 0 && theta <= kPi, ErrorCode::InvalidParameter,
                    "theta must lie in (0, pi]");
    const double N = static_cast<double>(n);
    const double a = std::pow(std::sin(theta / 2), 2);  // ee
    const double b = std::pow(std::cos(theta / 2), 2);  // gg
    const double c = std::sin(theta / 2) * std::cos(theta / 2);  // eg = ge
    const double d = a - b;
    const double F = N * a + N * (N - 1) * c * c;
    detail::require(F > 1e-12, ErrorCode::ImpossibleDetection, "ground state emits no photons");

    const double n1 = N * (N - 1);
    const double n2 = n1 * (N - 2);
    const double n3 = n2 * (N - 3);
    const double s = 2 * c;  // eg + ge

    FieldMoments m;
    m.n = n;
    m.weight = F;
    m.cross_terms_known = false;
    m.first(0) = (a * s * n1 + a * c * n1 + a * c * n1 + c * c * s * n2) / F;
    m.first(1) = 0.0;
    m.first(2) = (-N * a + n1 * a * d - c * c * n1 - c * c * n1 + c * c * d * n2) / F;
    m.second(0, 0) = N + (n2 * a * s * s + 2 * n1 * a * a + 2 * n2 * a * s * c + 2 * n2 * a * s * c +
                          n3 * s * s * c * c) / F;
    // eg - ge vanishes for real coherences.
    m.second(1, 1) = N + 2 * n1 * a * a / F;
    m.second(2, 2) = N + (-2 * n1 * a * d + n2 * d * d * a + 2 * n1 * c * c - 4 * n2 * c * d * c +
                          n3 * d * d * c * c) / F;
    return m;
}

}  // namespace pss

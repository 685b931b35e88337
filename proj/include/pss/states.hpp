// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pss/common.hpp"
#include "pss/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pss {

/**
 * Single two-level emitter density matrix
 *
 *   | ee  eg |
 *   | ge  gg |     gg = 1 - ee, ge = conj(eg), eg = <e|rho|g>.
 */
struct EmitterState {
    double ee = 0.0;
    cplx eg = 0.0;

    [[nodiscard]] double gg() const noexcept { return 1.0 - ee; }
    [[nodiscard]] cplx ge() const noexcept { return std::conj(eg); }

    /// Tr(rho^2) = 1 - 2 (ee*gg - |eg|^2).
    [[nodiscard]] double purity() const noexcept { return 1.0 - 2.0 * (ee * gg() - std::norm(eg)); }

    /// Rank one within `tol`: |eg|^2 == ee*gg.
    [[nodiscard]] bool is_pure(double tol = 1e-12) const noexcept {
        return std::abs(std::norm(eg) - ee * gg()) <= tol;
    }

    /// Positivity and population range checks.
    static EmitterState make(double ee, cplx eg) {
        detail::require(std::isfinite(ee) && ee >= 0.0 && ee <= 1.0, ErrorCode::InvalidParameter,
                        "excited population outside [0,1]");
        detail::require(std::isfinite(eg.real()) && std::isfinite(eg.imag()) &&
                            std::norm(eg) <= ee * (1.0 - ee) + 1e-12,
                        ErrorCode::InvalidParameter, "emitter coherence violates positivity");
        return EmitterState{ee, eg};
    }
};

/// Separable ensemble: one EmitterState per position.
class ProductState {
public:
    ProductState(Geometry geometry, std::vector<EmitterState> emitters)
        : geometry_(std::move(geometry)), emitters_(std::move(emitters)) {
        detail::require(emitters_.size() == geometry_.size(), ErrorCode::InvalidParameter,
                        "emitter count does not match geometry");
        for (const auto& e : emitters_) EmitterState::make(e.ee, e.eg);
    }

    [[nodiscard]] std::size_t size() const noexcept { return emitters_.size(); }
    [[nodiscard]] const Geometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] const std::vector<EmitterState>& emitters() const noexcept { return emitters_; }
    [[nodiscard]] const EmitterState& operator[](std::size_t p) const { return emitters_[p]; }

    [[nodiscard]] bool is_pure(double tol = 1e-12) const noexcept {
        for (const auto& e : emitters_)
            if (!e.is_pure(tol)) return false;
        return true;
    }

    /// All coherences zero and all populations equal (a population state).
    [[nodiscard]] bool is_homogeneous_population() const noexcept {
        for (const auto& e : emitters_)
            if (e.eg != cplx(0.0) || e.ee != emitters_.front().ee) return false;
        return true;
    }

private:
    Geometry geometry_;
    std::vector<EmitterState> emitters_;
};

/// Far-field directions of the detected photons, applied in order.
struct DetectionPlan {
    std::vector<WaveDirection> directions;

    [[nodiscard]] std::size_t nu() const noexcept { return directions.size(); }

    static DetectionPlan repeated(const WaveDirection& k, std::size_t nu) {
        return DetectionPlan{std::vector<WaveDirection>(nu, k)};
    }

    [[nodiscard]] bool single_direction() const noexcept {
        for (const auto& d : directions)
            if (!(d == directions.front())) return false;
        return true;
    }
};

inline void check_plan(const DetectionPlan& plan, std::size_t n) {
    detail::require(plan.nu() + 1 <= n, ErrorCode::InvalidParameter,
                    "cannot detect " + std::to_string(plan.nu()) + " photons from " +
                        std::to_string(n) + " emitters (need nu <= n-1)");
}

namespace detail {

inline void require_angle(double theta, const char* name) {
    require(std::isfinite(theta) && theta >= 0.0 && theta <= kPi, ErrorCode::InvalidParameter,
            std::string(name) + " must lie in [0, pi]");
}

}  // namespace detail

/// Coherent spin state: ee = sin^2(theta/2), eg = exp(i k_L.r_p) sin(theta)/2.
inline ProductState css_state(double theta, const WaveDirection& k_L, const Geometry& geometry) {
    detail::require_angle(theta, "theta");
    // kPi is the double nearest pi; treat it as pi so the fully excited
    // state carries no stray ~1e-16 coherence.
    const double s = std::sin(theta / 2);
    const double c = theta == kPi ? 0.0 : std::cos(theta / 2);
    const double ee = s * s;
    const double amp = s * c;
    std::vector<EmitterState> e;
    e.reserve(geometry.size());
    for (double phi : geometry.phases(k_L)) e.push_back({ee, std::polar(amp, phi)});
    return ProductState(geometry, std::move(e));
}

/**
 * Driven steady state without interactions: ee = s/(2(1+s)),
 * eg = i exp(i k_L.r_p) sqrt(s/2)/(1+s). s = +inf gives the fully mixed state.
 */
inline ProductState steady_state(double s, const WaveDirection& k_L, const Geometry& geometry) {
    detail::require(s >= 0.0 && !std::isnan(s), ErrorCode::InvalidParameter,
                    "saturation parameter must be >= 0");
    std::vector<EmitterState> e;
    e.reserve(geometry.size());
    if (std::isinf(s)) {
        e.assign(geometry.size(), EmitterState{0.5, 0.0});
        return ProductState(geometry, std::move(e));
    }
    const double ee = s / (2 * (1 + s));
    const double amp = std::sqrt(s / 2) / (1 + s);
    for (double phi : geometry.phases(k_L)) e.push_back({ee, cplx(0, 1) * std::polar(amp, phi)});
    return ProductState(geometry, std::move(e));
}

/// Coherence-free state with excited population sin^2(theta_bar/2).
inline ProductState population_state(double theta_bar, const Geometry& geometry) {
    detail::require_angle(theta_bar, "theta_bar");
    const double ee = std::pow(std::sin(theta_bar / 2), 2);
    return ProductState(geometry, std::vector<EmitterState>(geometry.size(), EmitterState{ee, 0.0}));
}

}  // namespace pss

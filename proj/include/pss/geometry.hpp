// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pss/common.hpp"
#include "pss/format.hpp"
#include "pss/rng.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pss {

/**
 * Unit propagation direction n. Positions are stored as k*r, so the optical
 * phase of emitter p for this direction is simply unit . position_p.
 */
class WaveDirection {
public:
    explicit WaveDirection(const Vec3& unit) : unit_(unit) {
        detail::require(unit.allFinite() && std::abs(unit.norm() - 1.0) <= 1e-12,
                        ErrorCode::InvalidParameter, "wave direction must have unit norm");
    }

    /// Polar angle from +z, azimuth from +x in the xy-plane.
    static WaveDirection from_angles(double polar, double azimuth = 0.0) {
        return WaveDirection(Vec3(std::sin(polar) * std::cos(azimuth),
                                  std::sin(polar) * std::sin(azimuth), std::cos(polar)));
    }

    static WaveDirection x() { return WaveDirection(Vec3::UnitX()); }
    static WaveDirection y() { return WaveDirection(Vec3::UnitY()); }
    static WaveDirection z() { return WaveDirection(Vec3::UnitZ()); }

    [[nodiscard]] const Vec3& unit() const noexcept { return unit_; }

    bool operator==(const WaveDirection& other) const { return unit_ == other.unit_; }

private:
    Vec3 unit_;
};

/// Ordered emitter positions in units of 1/k (each component is k*r).
class Geometry {
public:
    explicit Geometry(std::vector<Vec3> positions) : positions_(std::move(positions)) {
        detail::require(positions_.size() >= 2, ErrorCode::InvalidGeometry,
                        "need at least two emitters, got " + std::to_string(positions_.size()));
        for (const auto& r : positions_)
            detail::require(r.allFinite(), ErrorCode::InvalidGeometry, "non-finite position");
    }

    [[nodiscard]] std::size_t size() const noexcept { return positions_.size(); }
    [[nodiscard]] const std::vector<Vec3>& positions() const noexcept { return positions_; }
    [[nodiscard]] const Vec3& operator[](std::size_t p) const { return positions_[p]; }

    /// Optical phases unit . r_p.
    [[nodiscard]] std::vector<double> phases(const WaveDirection& k) const {
        std::vector<double> out(positions_.size());
        for (std::size_t p = 0; p < positions_.size(); ++p) out[p] = k.unit().dot(positions_[p]);
        return out;
    }

private:
    std::vector<Vec3> positions_;
};

/// Orthonormal pair spanning a plane.
struct Plane {
    Vec3 e1;
    Vec3 e2;

    static Plane xy() { return {Vec3::UnitX(), Vec3::UnitY()}; }
    static Plane xz() { return {Vec3::UnitX(), Vec3::UnitZ()}; }
    static Plane yz() { return {Vec3::UnitY(), Vec3::UnitZ()}; }
};

inline Geometry make_chain(std::size_t n, double step, const WaveDirection& axis) {
    detail::require(n >= 2, ErrorCode::InvalidGeometry, "chain needs n >= 2");
    detail::require(step > 0 && std::isfinite(step), ErrorCode::InvalidGeometry,
                    "chain step must be positive");
    std::vector<Vec3> r;
    r.reserve(n);
    for (std::size_t p = 0; p < n; ++p) r.emplace_back(step * static_cast<double>(p) * axis.unit());
    return Geometry(std::move(r));
}

inline Geometry make_ring(std::size_t n, double radius, const Plane& plane) {
    detail::require(n >= 2, ErrorCode::InvalidGeometry, "ring needs n >= 2");
    detail::require(radius > 0 && std::isfinite(radius), ErrorCode::InvalidGeometry,
                    "ring radius must be positive");
    const bool orthonormal = std::abs(plane.e1.norm() - 1) <= 1e-12 &&
                             std::abs(plane.e2.norm() - 1) <= 1e-12 &&
                             std::abs(plane.e1.dot(plane.e2)) <= 1e-12;
    detail::require(orthonormal, ErrorCode::InvalidGeometry, "ring plane vectors not orthonormal");
    std::vector<Vec3> r;
    r.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double a = 2 * kPi * static_cast<double>(p) / static_cast<double>(n);
        r.emplace_back(radius * (std::cos(a) * plane.e1 + std::sin(a) * plane.e2));
    }
    return Geometry(std::move(r));
}

/**
 * n points uniform in a ball. Per point, three draws u1, u2, u3 from
 * Xorshift64Star(seed) in that order: r = radius * cbrt(u1), cos(theta) = 1 - 2*u2,
 * phi = 2*pi*u3.
 */
inline Geometry make_random_sphere(std::size_t n, double radius, std::uint64_t seed) {
    detail::require(n >= 2, ErrorCode::InvalidGeometry, "sphere needs n >= 2");
    detail::require(radius > 0 && std::isfinite(radius), ErrorCode::InvalidGeometry,
                    "sphere radius must be positive");
    Xorshift64Star rng(seed);
    std::vector<Vec3> r;
    r.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double u3 = rng.uniform();
        const double rad = radius * std::cbrt(u1);
        const double cos_t = 1 - 2 * u2;
        const double sin_t = std::sqrt(std::max(0.0, 1 - cos_t * cos_t));
        const double phi = 2 * kPi * u3;
        r.emplace_back(rad * sin_t * std::cos(phi), rad * sin_t * std::sin(phi), rad * cos_t);
    }
    return Geometry(std::move(r));
}

/// f(delta) = |sum_p exp(-i delta . r_p)|^2 - n. Can be negative.
inline double structure_factor(const Geometry& g, const Vec3& delta) {
    cplx sum = 0;
    for (const auto& r : g.positions()) sum += std::polar(1.0, -delta.dot(r));
    return std::norm(sum) - static_cast<double>(g.size());
}

// CSV with header `index,x,y,z`.

inline void write_csv(std::ostream& os, const Geometry& g) {
    os << "index,x,y,z\n";
    for (std::size_t p = 0; p < g.size(); ++p) {
        os << p << ',' << format_double(g[p].x()) << ',' << format_double(g[p].y()) << ','
           << format_double(g[p].z()) << '\n';
    }
}

inline Geometry read_geometry_csv(std::istream& is) {
    std::string line;
    detail::require(static_cast<bool>(std::getline(is, line)), ErrorCode::InvalidGeometry,
                    "empty geometry csv");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    detail::require(line == "index,x,y,z", ErrorCode::InvalidGeometry,
                    "geometry csv header must be index,x,y,z");
    std::vector<Vec3> r;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::string cell[4];
        for (auto& c : cell) std::getline(ls, c, ',');
        try {
            detail::require(std::stoul(cell[0]) == row, ErrorCode::InvalidGeometry,
                            "geometry csv rows out of order at row " + std::to_string(row));
            r.emplace_back(std::stod(cell[1]), std::stod(cell[2]), std::stod(cell[3]));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::InvalidGeometry, "malformed geometry csv row " + std::to_string(row));
        }
        ++row;
    }
    return Geometry(std::move(r));
}

}  // namespace pss

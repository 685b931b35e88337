// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pss/common.hpp"

#include <array>

namespace pss {

/// Index into the ordered operator triple (X_kw, Y_kw, Z).
enum class Axis { X = 0, Y = 1, Z = 2 };

inline const char* to_string(Axis a) {
    constexpr std::array<const char*, 3> names{"X", "Y", "Z"};
    return names[static_cast<int>(a)];
}

/**
 * First moments and symmetrized second moments of (X_kw, Y_kw, Z) for one
 * (normalized) state, plus the detection-event weight that produced it.
 *
 * `second(i, j)` holds <(E_i E_j + E_j E_i)/2>. Some closed forms only know the
 * diagonal; they set `cross_terms_known = false` and leave the off-diagonal at 0.
 */
struct FieldMoments {
    std::size_t n = 0;
    Vec3 first = Vec3::Zero();
    Mat3 second = Mat3::Zero();
    double weight = 1.0;
    bool cross_terms_known = true;

    [[nodiscard]] double variance(Axis a) const {
        const int i = static_cast<int>(a);
        return second(i, i) - first(i) * first(i);
    }

    [[nodiscard]] double nd() const noexcept { return static_cast<double>(n); }
};

}  // namespace pss

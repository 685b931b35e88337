// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace pss {

/**
 * Shortest round-trip decimal form, '.' separator, independent of locale.
 * Infinities print as "inf"/"-inf"; NaN prints as the empty string (an empty
 * CSV cell).
 */
inline std::string format_double(double v) {
    if (std::isnan(v)) return {};
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace pss

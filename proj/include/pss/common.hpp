// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pss {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

enum class ErrorCode {
    InvalidGeometry,
    InvalidParameter,
    CapacityExceeded,
    ImpossibleDetection,
    UnsupportedOrder,
    InvalidConfig,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidGeometry: return "invalid-geometry";
        case ErrorCode::InvalidParameter: return "invalid-parameter";
        case ErrorCode::CapacityExceeded: return "capacity-exceeded";
        case ErrorCode::ImpossibleDetection: return "impossible-detection";
        case ErrorCode::UnsupportedOrder: return "unsupported-order";
        case ErrorCode::InvalidConfig: return "invalid-config";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw Error(code, what);
}

}  // namespace detail

}  // namespace pss

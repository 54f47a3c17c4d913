// Copyright 2026 The chordosc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace chordosc {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using CMat2 = Eigen::Matrix2cd;
using Complex = std::complex<double>;

namespace numerics {

/// e^z - 1 without cancellation for small |z|.
inline Complex expm1(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    const double half_sin = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

/// Integral of e^{c x} over [0, length]; the c -> 0 limit is the length.
inline double exp_integral(double c, double length) {
    if (c == 0.0) return length;
    return std::expm1(c * length) / c;
}

inline Complex exp_integral(Complex c, double length) {
    if (c == Complex{0.0, 0.0}) return {length, 0.0};
    return expm1(c * length) / c;
}

/// Largest absolute entry, used as the scale for relative comparisons.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.cwiseAbs().maxCoeff();
}

/// Entrywise distance of a from b relative to max(1, |b|_max).
template <typename A, typename B>
double relative_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double scale = std::max(1.0, max_abs(b));
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

} // namespace numerics
} // namespace chordosc

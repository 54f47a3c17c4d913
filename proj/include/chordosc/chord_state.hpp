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

// Gaussian chord functions w(r) = exp(-1/2 r^T S r + i m.r), r = (k, s).
// S is the phase-space covariance of the Wigner function and m its mean, so
// position/momentum statistics are read off directly.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "chordosc/errors.hpp"
#include "chordosc/numerics.hpp"

namespace chordosc {

struct ChordVector {
    double k = 0.0;
    double s = 0.0;

    Vec2 vec() const { return {k, s}; }
    static ChordVector from(const Vec2& v) { return {v(0), v(1)}; }
};

class GaussianChordState {
public:
    /// Throws std::invalid_argument unless `sigma` is finite and symmetric (to
    /// 1e-12 relative); the stored matrix is exactly symmetric.
    GaussianChordState(const Mat2& sigma, const Vec2& mean) : sigma_(sigma), mean_(mean) {
        if (!sigma.allFinite() || !mean.allFinite())
            throw std::invalid_argument("GaussianChordState: non-finite entries");
        const double asym = std::abs(sigma(0, 1) - sigma(1, 0));
        if (asym > 1e-12 * std::max(1.0, numerics::max_abs(sigma)))
            throw std::invalid_argument("GaussianChordState: covariance is not symmetric");
        const double off = 0.5 * (sigma(0, 1) + sigma(1, 0));
        sigma_(0, 1) = off;
        sigma_(1, 0) = off;
    }

    const Mat2& covariance() const { return sigma_; }
    const Vec2& mean() const { return mean_; }

    bool is_positive_definite() const {
        return sigma_(0, 0) > 0.0 && sigma_.determinant() > 0.0;
    }

private:
    Mat2 sigma_;
    Vec2 mean_;
};

/// Coherent state centred at (x0, p0); the covariance is the vacuum 1/2 I.
inline GaussianChordState coherent_state(double x0, double p0) {
    return GaussianChordState(0.5 * Mat2::Identity(), Vec2{x0, p0});
}

inline GaussianChordState ground_state() { return coherent_state(0.0, 0.0); }

inline Complex evaluate(const GaussianChordState& state, const ChordVector& r) {
    const Vec2 v = r.vec();
    const double quad = v.dot(state.covariance() * v);
    return std::exp(Complex{-0.5 * quad, state.mean().dot(v)});
}

/// <H> = -1/2 (d_k^2 + d_s^2) w at the origin = 1/2 tr S + 1/2 |m|^2.
inline double energy(const GaussianChordState& state) {
    return 0.5 * state.covariance().trace() + 0.5 * state.mean().squaredNorm();
}

/// Tolerance on det S >= 1/4 below which a state is reported as violating
/// the uncertainty bound.
inline constexpr double kPurityTolerance = 1e-9;

/// Empty when the state is physical; otherwise a one-line description. Dynamics
/// such as the low-temperature overdamped model can leave the physical set, so
/// this is advisory rather than an error.
inline std::optional<std::string> physicality_warning(const GaussianChordState& state) {
    if (!state.is_positive_definite()) return "covariance is not positive definite";
    const double det = state.covariance().determinant();
    if (det < 0.25 - kPurityTolerance)
        return "covariance determinant " + std::to_string(det) + " violates the uncertainty bound 1/4";
    return std::nullopt;
}

/// Gaussian Wigner function
///   W(q,p) = exp[-(xi1 dp^2 - xi2 dp dq + xi3 dq^2) / Delta] / (2 pi sqrt(Delta)),
///   Delta = 4 xi1 xi3 - xi2^2,
/// with xi1 = S11/2, xi2 = S12, xi3 = S22/2, so that the phase-space integral
/// is 1 and <dq^2> = S11.
struct WignerGaussian {
    double xi1;
    double xi2;
    double xi3;
    Vec2 center;

    double discriminant() const { return 4.0 * xi1 * xi3 - xi2 * xi2; }

    Mat2 covariance() const {
        Mat2 c;
        c << 2.0 * xi1, xi2, xi2, 2.0 * xi3;
        return c;
    }

    double density(double q, double p) const {
        const double dq = q - center(0);
        const double dp = p - center(1);
        const double delta = discriminant();
        const double expo = (xi1 * dp * dp - xi2 * dp * dq + xi3 * dq * dq) / delta;
        return std::exp(-expo) / (2.0 * std::numbers::pi * std::sqrt(delta));
    }
};

inline WignerGaussian to_wigner(const GaussianChordState& state) {
    if (!state.is_positive_definite())
        throw std::invalid_argument("to_wigner: covariance is not positive definite");
    const Mat2& s = state.covariance();
    return {0.5 * s(0, 0), s(0, 1), 0.5 * s(1, 1), state.mean()};
}

enum class Axis { Position, Momentum };

struct Marginal1D {
    double mean;
    double variance;

    double density(double x) const {
        const double d = x - mean;
        return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
    }
};

/// Position marginal from the section w(k, 0), momentum from w(0, s).
inline Marginal1D marginal(const GaussianChordState& state, Axis axis) {
    const int i = axis == Axis::Position ? 0 : 1;
    const double var = state.covariance()(i, i);
    if (!(var > 0.0)) throw std::invalid_argument("marginal: non-positive variance");
    return {state.mean()(i), var};
}

} // namespace chordosc

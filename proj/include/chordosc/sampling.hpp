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

// Random parameter, state and chord-point draws for the validation sweeps.
// Ranges stay inside each model's regime and away from critical damping.

#include <cmath>
#include <numbers>
#include <random>

#include "chordosc/chord_state.hpp"
#include "chordosc/models.hpp"

namespace chordosc::sampling {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ModelParams random_params(Variant v, Rng& rng) {
    ModelParams p;
    p.variant = v;
    switch (v) {
    case Variant::FiniteTemp:
        p.gamma = uniform(rng, 0.02, 1.5);
        p.D = uniform(rng, 0.0, 5.0);
        break;
    case Variant::ZeroTemp: p.gamma = uniform(rng, 0.02, 1.5); break;
    case Variant::HighTemp:
        p.gamma = uniform(rng, 0.02, 1.5);
        p.D = uniform(rng, 0.5, 10.0);
        break;
    case Variant::CLUnder:
        p.gamma = uniform(rng, 0.02, 0.9);
        p.D = uniform(rng, 0.1, 10.0);
        break;
    case Variant::CLOver:
        p.gamma = uniform(rng, 1.1, 3.0);
        p.D = uniform(rng, 0.5, 10.0);
        if (uniform(rng, 0.0, 1.0) < 0.5) {
            p.od_regime = OverdampedRegime::LowT;
            p.omega_c = p.beta() * uniform(rng, 5.0, 50.0);
        }
        break;
    case Variant::DrivenFT:
        p.gamma = uniform(rng, 0.02, 1.0);
        p.D = uniform(rng, 0.0, 5.0);
        p.drive = Drive{uniform(rng, 0.0, 1.0), uniform(rng, 0.2, 2.0)};
        break;
    case Variant::DrivenCL:
        p.gamma = uniform(rng, 0.02, 0.9);
        p.D = uniform(rng, 0.1, 5.0);
        p.drive = Drive{uniform(rng, 0.0, 1.0), uniform(rng, 0.2, 2.0)};
        break;
    }
    return p;
}

/// Rotated, possibly squeezed Gaussian with a random mean.
inline GaussianChordState random_state(Rng& rng) {
    const double a = uniform(rng, 0.3, 2.0);
    const double b = uniform(rng, 0.3, 2.0);
    const double th = uniform(rng, 0.0, std::numbers::pi);
    Mat2 rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Mat2 cov = rot * Vec2{a, b}.asDiagonal() * rot.transpose();
    return GaussianChordState(0.5 * (cov + cov.transpose()), Vec2{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)});
}

inline GaussianChordState random_coherent_state(Rng& rng) {
    return coherent_state(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
}

inline ChordVector random_chord_point(Rng& rng, double radius = 1.5) {
    return {uniform(rng, -radius, radius), uniform(rng, -radius, radius)};
}

} // namespace chordosc::sampling

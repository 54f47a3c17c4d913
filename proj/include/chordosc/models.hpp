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

// Closed-form propagators of the open oscillator in the chord representation.
// Every model maps a chord function as
//   w(r, tau + sigma) = w(L r, tau) exp(-r^T K r - i d.r),   L = map(-sigma),
// so a Gaussian (S, m) goes to (L^T S L + 2K, L^T m - d).

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chordosc/chord_state.hpp"
#include "chordosc/errors.hpp"
#include "chordosc/phase_maps.hpp"

namespace chordosc {

enum class Variant { FiniteTemp, ZeroTemp, HighTemp, CLUnder, CLOver, DrivenFT, DrivenCL };

inline constexpr Variant kAllVariants[] = {Variant::FiniteTemp, Variant::ZeroTemp, Variant::HighTemp,
                                           Variant::CLUnder,    Variant::CLOver,   Variant::DrivenFT,
                                           Variant::DrivenCL};

inline std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::FiniteTemp: return "FiniteTemp";
    case Variant::ZeroTemp: return "ZeroTemp";
    case Variant::HighTemp: return "HighTemp";
    case Variant::CLUnder: return "CLUnder";
    case Variant::CLOver: return "CLOver";
    case Variant::DrivenFT: return "DrivenFT";
    case Variant::DrivenCL: return "DrivenCL";
    }
    return "unknown";
}

inline std::optional<Variant> parse_variant(std::string_view name) {
    for (Variant v : kAllVariants)
        if (to_string(v) == name) return v;
    return std::nullopt;
}

/// Asymptotic regime of the strong-friction coefficients. There is no
/// crossover formula; the caller picks one.
enum class OverdampedRegime { HighT, LowT };

struct Drive {
    double amplitude = 0.0; // lambda
    double frequency = 1.0; // nu, in units of the oscillator frequency
};

/// Diffusion coefficients of the strong-friction model: Omega multiplies the
/// beta p-diffusion, Gamma = D + Lambda - Omega the mixed q-p term.
struct OverdampedCoefficients {
    double omega;
    double lambda;
    double gamma;
};

struct ModelParams {
    Variant variant = Variant::FiniteTemp;
    double gamma = 0.1;
    double D = 0.0;
    double omega_c = 0.0;
    OverdampedRegime od_regime = OverdampedRegime::HighT;
    std::optional<Drive> drive;

    double beta() const { return 2.0 * gamma; }

    bool is_driven() const { return variant == Variant::DrivenFT || variant == Variant::DrivenCL; }

    bool is_caldeira_leggett() const {
        return variant == Variant::CLUnder || variant == Variant::CLOver || variant == Variant::DrivenCL;
    }

    /// Planck occupation 1/(e^{1/D} - 1), zero at D = 0.
    double mean_occupation() const {
        if (D <= 0.0) return 0.0;
        return 1.0 / std::expm1(1.0 / D);
    }

    double gamma_plus() const { return 2.0 * gamma * (mean_occupation() + 0.5); }

    MapKind map_kind() const {
        switch (variant) {
        case Variant::CLUnder:
        case Variant::DrivenCL: return MapKind::CLUnder;
        case Variant::CLOver: return MapKind::CLOver;
        default: return MapKind::FiniteTemp;
        }
    }

    /// gamma for the finite-temperature family, beta for Caldeira-Leggett.
    double map_rate() const { return is_caldeira_leggett() ? beta() : gamma; }

    OverdampedCoefficients overdamped() const {
        const double b = beta();
        double om = 0.0;
        double la = 0.0;
        if (od_regime == OverdampedRegime::HighT) {
            om = D;
            la = 1.0 / (12.0 * D);
        } else {
            om = b / std::numbers::pi * std::log(omega_c / b);
            la = 1.0 / (b * std::numbers::pi) * std::log(b / (2.0 * std::numbers::pi * D));
        }
        return {om, la, D + la - om};
    }

    /// Throws std::invalid_argument for malformed values and regime_error for
    /// damping outside the model's regime.
    void validate() const {
        if (!std::isfinite(gamma) || !(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
        if (!std::isfinite(D) || D < 0.0) throw std::invalid_argument("D must be >= 0");
        switch (variant) {
        case Variant::CLUnder:
        case Variant::DrivenCL:
            if (gamma == 1.0) throw regime_error("critical damping gamma = 1 is not supported");
            if (gamma > 1.0) throw regime_error(std::string(to_string(variant)) + " requires gamma < 1");
            break;
        case Variant::CLOver:
            if (gamma == 1.0) throw regime_error("critical damping gamma = 1 is not supported");
            if (gamma < 1.0) throw regime_error("CLOver requires gamma > 1");
            if (drive) throw unsupported_error("no driven solution for the overdamped model");
            if (!(D > 0.0)) throw std::invalid_argument("CLOver requires D > 0");
            if (od_regime == OverdampedRegime::LowT && !(omega_c > 0.0))
                throw std::invalid_argument("CLOver LowT requires omega_c > 0");
            break;
        default: break;
        }
        if (is_driven()) {
            if (!drive) throw std::invalid_argument(std::string(to_string(variant)) + " requires a drive");
            if (!std::isfinite(drive->amplitude) || drive->amplitude < 0.0)
                throw std::invalid_argument("drive amplitude must be >= 0");
            if (!std::isfinite(drive->frequency) || drive->frequency < 0.0)
                throw std::invalid_argument("drive frequency must be >= 0");
        } else if (drive && variant != Variant::CLOver) {
            throw std::invalid_argument(std::string(to_string(variant)) + " does not take a drive");
        }
    }
};

/// Pull-back matrix, quadratic exponent and drive phase of one propagation.
struct PropagationStep {
    Mat2 pullback;
    Mat2 kernel;
    Vec2 drive;
};

inline PropagationStep propagation_step(const ModelParams& params, double tau, double sigma) {
    params.validate();
    if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be finite and >= 0");
    if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");

    const MapKind kind = params.map_kind();
    const double rate = params.map_rate();
    const auto kernels = dissipation_kernel(kind, rate, sigma);

    PropagationStep step{evolution_map(kind, rate, -sigma).entries, Mat2::Zero(), Vec2::Zero()};
    const Mat2& k = kernels.primary.entries;
    switch (params.variant) {
    case Variant::FiniteTemp:
    case Variant::DrivenFT: step.kernel = 0.5 * params.gamma_plus() * k; break;
    case Variant::ZeroTemp: step.kernel = 0.5 * params.gamma * k; break;
    case Variant::HighTemp: step.kernel = params.gamma * params.D * k; break;
    case Variant::CLUnder:
    case Variant::DrivenCL: step.kernel = params.D * params.beta() * k; break;
    case Variant::CLOver: {
        const auto od = params.overdamped();
        step.kernel = od.omega * params.beta() * k + od.gamma * kernels.cross->entries;
        break;
    }
    }
    if (params.is_driven())
        step.drive = drive_vector(kind, rate, params.drive->amplitude, params.drive->frequency, tau, sigma)
                         .components;
    return step;
}

/// Propagate a Gaussian state from absolute time tau over a duration sigma.
inline GaussianChordState propagate(const GaussianChordState& state, const ModelParams& params, double tau,
                                    double sigma) {
    const auto step = propagation_step(params, tau, sigma);
    const Mat2& l = step.pullback;
    const Mat2 cov = l.transpose() * state.covariance() * l + 2.0 * step.kernel;
    const Vec2 mean = l.transpose() * state.mean() - step.drive;
    Mat2 sym = 0.5 * (cov + cov.transpose());
    return GaussianChordState(sym, mean);
}

/// Propagate an arbitrary chord function at a single point r.
template <typename ChordFunction>
    requires std::invocable<ChordFunction, ChordVector>
Complex propagate_pointwise(ChordFunction&& w0, const ModelParams& params, double tau, double sigma,
                            const ChordVector& r) {
    const auto step = propagation_step(params, tau, sigma);
    const Vec2 v = r.vec();
    const Complex pulled = w0(ChordVector::from(step.pullback * v));
    return pulled * std::exp(Complex{-v.dot(step.kernel * v), -step.drive.dot(v)});
}

/// Long-time fixed point of an undriven model.
///
/// For the overdamped model the fixed point is diag(D + Lambda, Omega) rather
/// than an isotropic D I; in the HighT regime this is D I up to O(1/D).
inline GaussianChordState stationary_state(const ModelParams& params) {
    params.validate();
    const Mat2 id = Mat2::Identity();
    switch (params.variant) {
    case Variant::FiniteTemp:
        return GaussianChordState((params.mean_occupation() + 0.5) * id, Vec2::Zero());
    case Variant::ZeroTemp: return GaussianChordState(0.5 * id, Vec2::Zero());
    case Variant::HighTemp:
    case Variant::CLUnder: return GaussianChordState(params.D * id, Vec2::Zero());
    case Variant::CLOver: {
        const auto od = params.overdamped();
        Mat2 s = Mat2::Zero();
        s(0, 0) = params.D + od.lambda;
        s(1, 1) = od.omega;
        return GaussianChordState(s, Vec2::Zero());
    }
    case Variant::DrivenFT:
    case Variant::DrivenCL: break;
    }
    throw unsupported_error("stationary_state: driven models have no stationary state");
}

/// Energy transient from an initial energy E0 using the per-model closed
/// forms. These assume a coherent initial state; for displaced coherent
/// states the Caldeira-Leggett forms and the driven forms are only
/// approximate, and the DrivenCL form carries a doubled decay exponent. Use
/// energy(propagate(...)) for exact values.
inline double closed_form_energy(const ModelParams& params, double e0, double tau, double sigma) {
    params.validate();
    if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be finite and >= 0");
    const double g = params.gamma;
    const double b = params.beta();
    const double decay = std::exp(-2.0 * g * sigma);
    const double rise = -std::expm1(-2.0 * g * sigma);
    const double ratio = (1.0 + 0.25 * b * b) / (1.0 - 0.25 * b * b);

    auto drive_energy = [&] {
        const auto d = drive_vector(params.map_kind(), params.map_rate(), params.drive->amplitude,
                                    params.drive->frequency, tau, sigma);
        return 0.5 * d.components.squaredNorm();
    };

    switch (params.variant) {
    case Variant::FiniteTemp: return e0 * decay + (params.mean_occupation() + 0.5) * rise;
    case Variant::ZeroTemp: return e0 * decay + 0.5 * rise;
    case Variant::HighTemp: return e0 * decay + params.D * rise;
    case Variant::DrivenFT: return e0 * decay + (params.mean_occupation() + 0.5) * rise + drive_energy();
    case Variant::CLUnder:
    case Variant::DrivenCL: {
        const double w = detail::underdamped_frequency(b);
        const double c = std::cos(w * sigma);
        const double s = std::sin(w * sigma);
        const double a = dissipation_kernel(MapKind::CLUnder, b, sigma).primary.entries.trace();
        if (params.variant == Variant::CLUnder)
            return e0 * std::exp(-b * sigma) * (c * c + ratio * s * s) + params.D * b * a;
        return e0 * std::exp(-2.0 * b * sigma) * (c * c + ratio * s * s) + params.D * b * a + drive_energy();
    }
    case Variant::CLOver: {
        const double u = detail::overdamped_splitting(b);
        // e^{-beta sigma} cosh^2 and sinh^2 from decaying exponentials.
        const double ep = std::exp((u - 0.5 * b) * sigma);
        const double em = std::exp((-u - 0.5 * b) * sigma);
        const double ch = 0.5 * (ep + em);
        const double sh = 0.5 * (ep - em);
        const auto k = dissipation_kernel(MapKind::CLOver, b, sigma);
        const auto od = params.overdamped();
        return e0 * (ch * ch - ratio * sh * sh) + od.omega * b * k.primary.entries.trace() +
               od.gamma * k.cross->entries.trace();
    }
    }
    return 0.0;
}

} // namespace chordosc

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

// Evolution matrices of the damped classical flow on chord space, the
// quadratic dissipation kernels accumulated along its characteristics, and
// the phase vectors picked up under a periodic force.
//
// Conventions: for FiniteTemp maps `rate` is gamma; for the Caldeira-Leggett
// maps (CLUnder, CLOver) it is beta = 2 gamma. A map of duration sigma moves a
// chord point forward along the characteristic flow; propagators pull back
// with the map of duration -sigma.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chordosc/errors.hpp"
#include "chordosc/numerics.hpp"

namespace chordosc {

enum class MapKind { FiniteTemp, CLUnder, CLOver };

inline std::string_view to_string(MapKind kind) {
    switch (kind) {
    case MapKind::FiniteTemp: return "FiniteTemp";
    case MapKind::CLUnder: return "CLUnder";
    case MapKind::CLOver: return "CLOver";
    }
    return "unknown";
}

struct EvolutionMap {
    Mat2 entries;
    MapKind kind;
    double rate;
    double sigma;

    double determinant() const { return entries.determinant(); }
    Vec2 apply(const Vec2& r) const { return entries * r; }
};

enum class KernelKind { AlphaIdentity, A, B, C };

/// Symmetric 2x2 matrix K; the associated quadratic form is r^T K r.
struct QuadraticKernel {
    Mat2 entries;
    KernelKind kind;

    double form(const Vec2& r) const { return r.dot(entries * r); }
};

/// `primary` is alpha*I (FiniteTemp), A (CLUnder) or B (CLOver); `cross` holds
/// the mixed k*s kernel C of the overdamped model.
struct DissipationKernels {
    QuadraticKernel primary;
    std::optional<QuadraticKernel> cross;
};

struct DriveVector {
    Vec2 components;
    double amplitude;
    double frequency;
};

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

inline void check_rate(MapKind kind, double rate) {
    require_finite(rate, "damping rate");
    if (rate < 0.0) throw std::invalid_argument("damping rate must be non-negative");
    switch (kind) {
    case MapKind::FiniteTemp: return;
    case MapKind::CLUnder:
        if (rate == 2.0) throw regime_error("critical damping beta = 2 is not supported");
        if (rate > 2.0)
            throw regime_error("CLUnder requires beta < 2 (beta^2/4 < 1), got beta = " + std::to_string(rate));
        return;
    case MapKind::CLOver:
        if (rate == 2.0) throw regime_error("critical damping beta = 2 is not supported");
        if (rate < 2.0)
            throw regime_error("CLOver requires beta > 2 (beta^2/4 > 1), got beta = " + std::to_string(rate));
        return;
    }
}

/// omega = sqrt(1 - beta^2/4), the underdamped oscillation frequency.
inline double underdamped_frequency(double beta) { return std::sqrt(1.0 - 0.25 * beta * beta); }

/// mu = sqrt(beta^2/4 - 1), the overdamped relaxation splitting.
inline double overdamped_splitting(double beta) { return std::sqrt(0.25 * beta * beta - 1.0); }

// The Caldeira-Leggett pull-back map factors as
//   map(-x) = e^{-beta x/2} (c(x) I + q(x) G),  G = [[beta/2, -1], [1, -beta/2]]
// with (c, q) = (cos wx, sin(wx)/w) underdamped and (cosh ux, sinh(ux)/u)
// overdamped. Every kernel entry is a combination of the three moments
//   cc = int e^{-beta x} c^2,  cq = int e^{-beta x} c q,  qq = int e^{-beta x} q^2.
struct Moments {
    double cc;
    double cq;
    double qq;
};

inline Moments cl_moments(MapKind kind, double beta, double sigma) {
    const double e0 = numerics::exp_integral(-beta, sigma);
    if (kind == MapKind::CLUnder) {
        const double w = underdamped_frequency(beta);
        const Complex ez = numerics::exp_integral(Complex{-beta, 2.0 * w}, sigma);
        return {0.5 * (e0 + ez.real()), ez.imag() / (2.0 * w), (e0 - ez.real()) / (2.0 * w * w)};
    }
    const double u = overdamped_splitting(beta);
    const double ep = numerics::exp_integral(-beta + 2.0 * u, sigma);
    const double em = numerics::exp_integral(-beta - 2.0 * u, sigma);
    const double ch = 0.5 * (ep + em);
    return {0.5 * (e0 + ch), (ep - em) / (4.0 * u), (ch - e0) / (2.0 * u * u)};
}

/// int_0^sigma cos(nu (t_end - x)) e^{(i w - g) x} dx, t_end = tau + sigma.
inline Complex driven_moment(double w, double g, double nu, double t_end, double sigma) {
    const Complex i{0.0, 1.0};
    const Complex up = numerics::exp_integral(i * (w - nu) - g, sigma);
    const Complex down = numerics::exp_integral(i * (w + nu) - g, sigma);
    return 0.5 * (std::exp(i * nu * t_end) * up + std::exp(-i * nu * t_end) * down);
}

} // namespace detail

/// Characteristic frequency kappa = sqrt(1 + gamma^2) of the finite-temperature
/// flow. It does not enter the map itself.
inline double finite_temperature_kappa(double gamma) { return std::sqrt(1.0 + gamma * gamma); }

inline EvolutionMap evolution_map(MapKind kind, double rate, double sigma) {
    detail::check_rate(kind, rate);
    detail::require_finite(sigma, "sigma");
    Mat2 m;
    switch (kind) {
    case MapKind::FiniteTemp: {
        const double g = std::exp(rate * sigma);
        const double c = std::cos(sigma);
        const double s = std::sin(sigma);
        m << g * c, g * s, -g * s, g * c;
        break;
    }
    case MapKind::CLUnder: {
        const double w = detail::underdamped_frequency(rate);
        const double g = std::exp(0.5 * rate * sigma);
        const double c = std::cos(w * sigma);
        const double q = std::sin(w * sigma) / w;
        const double h = 0.5 * rate;
        m << g * (c - h * q), g * q, -g * q, g * (c + h * q);
        break;
    }
    case MapKind::CLOver: {
        // e^{beta sigma/2} cosh(mu sigma) etc. from separate exponentials, so
        // the decaying product stays finite where cosh alone would overflow.
        const double u = detail::overdamped_splitting(rate);
        const double h = 0.5 * rate;
        const double ep = std::exp((h + u) * sigma);
        const double em = std::exp((h - u) * sigma);
        const double gc = 0.5 * (ep + em);
        const double gq = 0.5 * (ep - em) / u;
        m << gc - h * gq, gq, -gq, gc + h * gq;
        break;
    }
    }
    return {m, kind, rate, sigma};
}

inline EvolutionMap compose(const EvolutionMap& a, const EvolutionMap& b) {
    if (a.kind != b.kind || a.rate != b.rate)
        throw std::invalid_argument("compose: maps belong to different families (kind or rate differ)");
    return {a.entries * b.entries, a.kind, a.rate, a.sigma + b.sigma};
}

inline EvolutionMap inverse(const EvolutionMap& a) { return evolution_map(a.kind, a.rate, -a.sigma); }

/// alpha(sigma) = (1 - e^{-2 gamma sigma}) / (2 gamma), the accumulated
/// |pull-back|^2 of the finite-temperature flow. Tends to 1/(2 gamma).
inline double alpha_kernel(double gamma, double sigma) {
    detail::require_finite(gamma, "gamma");
    detail::require_finite(sigma, "sigma");
    if (sigma < 0.0) throw std::invalid_argument("alpha_kernel: sigma must be non-negative");
    if (gamma < 0.0) throw std::invalid_argument("alpha_kernel: gamma must be non-negative");
    if (gamma < 1e-12) return sigma;
    return -std::expm1(-2.0 * gamma * sigma) / (2.0 * gamma);
}

inline DissipationKernels dissipation_kernel(MapKind kind, double rate, double sigma) {
    detail::check_rate(kind, rate);
    detail::require_finite(sigma, "sigma");
    if (sigma < 0.0) throw std::invalid_argument("dissipation_kernel: sigma must be non-negative");

    if (kind == MapKind::FiniteTemp)
        return {{alpha_kernel(rate, sigma) * Mat2::Identity(), KernelKind::AlphaIdentity}, std::nullopt};

    const double h = 0.5 * rate;
    const auto m = detail::cl_moments(kind, rate, sigma);
    // Row 2 of map(-x) is e^{-beta x/2} (q, c - h q): the s-component.
    Mat2 ss;
    ss(0, 0) = m.qq;
    ss(0, 1) = m.cq - h * m.qq;
    ss(1, 0) = ss(0, 1);
    ss(1, 1) = m.cc - 2.0 * h * m.cq + h * h * m.qq;

    if (kind == MapKind::CLUnder) return {{ss, KernelKind::A}, std::nullopt};

    // k*s with row 1 = e^{-beta x/2} (c + h q, -q), symmetrized.
    Mat2 ks;
    ks(0, 0) = m.cq + h * m.qq;
    ks(1, 1) = -m.cq + h * m.qq;
    ks(0, 1) = 0.5 * (m.cc - (h * h + 1.0) * m.qq);
    ks(1, 0) = ks(0, 1);
    return {{ss, KernelKind::B}, QuadraticKernel{ks, KernelKind::C}};
}

/// Phase vector (v1, v2) with v_j = int_0^sigma lambda cos(nu (tau + sigma - x)) map_{2j}(-x) dx.
/// Depends on the absolute start time tau.
inline DriveVector drive_vector(MapKind kind, double rate, double lambda, double nu, double tau,
                                double sigma) {
    detail::check_rate(kind, rate);
    if (kind == MapKind::CLOver)
        throw unsupported_error("drive_vector: no driven solution for the overdamped model");
    detail::require_finite(lambda, "lambda");
    detail::require_finite(nu, "nu");
    detail::require_finite(tau, "tau");
    detail::require_finite(sigma, "sigma");
    if (lambda < 0.0) throw std::invalid_argument("drive_vector: lambda must be non-negative");

    const bool ft = kind == MapKind::FiniteTemp;
    const double w = ft ? 1.0 : detail::underdamped_frequency(rate);
    const double g = ft ? rate : 0.5 * rate;
    if (g == 0.0 && std::abs(nu) == w)
        throw regime_error("drive_vector: undamped resonant drive (gamma = 0, nu = omega) diverges");

    const Complex moment = detail::driven_moment(w, g, nu, tau + sigma, sigma);
    Vec2 v;
    if (ft) {
        v << lambda * moment.imag(), lambda * moment.real();
    } else {
        const double q = moment.imag() / w;
        v << lambda * q, lambda * (moment.real() - g * q);
    }
    return {v, lambda, nu};
}

/// The drive vector written through the resonance denominators
/// Delta_pm = nu pm omega - i gamma, as it is usually quoted. Kept for
/// auditing only: the first component (and for CLUnder
/// both components) disagree with the defining integral, which is what
/// drive_vector evaluates.
inline DriveVector delta_form_drive_vector(MapKind kind, double rate, double lambda, double nu, double tau,
                                           double sigma) {
    detail::check_rate(kind, rate);
    if (kind == MapKind::CLOver)
        throw unsupported_error("delta_form_drive_vector: no driven solution for the overdamped model");
    const bool ft = kind == MapKind::FiniteTemp;
    const double w = ft ? 1.0 : detail::underdamped_frequency(rate);
    const double g = ft ? rate : 0.5 * rate;
    const Complex i{0.0, 1.0};
    const Complex dp{nu + w, -g};
    const Complex dm{nu - w, -g};
    const double t_end = tau + sigma;
    const Complex lower = dm * std::exp(-i * nu * t_end + i * (nu - w) * sigma) / std::norm(dm);
    const Complex upper = dp * std::exp(-i * nu * t_end + i * (nu + w) * sigma) / std::norm(dp);
    const Complex steady = dp * dm * std::exp(-i * nu * t_end);
    const double dd = std::norm(dp * dm);
    const double pre = (ft ? 0.5 : 0.5 / w) * lambda * std::exp(-g * sigma);

    const double v1 = pre * (lower.real() + upper.real()) - (ft ? 1.0 : w) * lambda / dd * steady.real();
    double v2 = pre * (lower.imag() + upper.imag()) - lambda / dd * (Complex{nu, g} * steady).imag();
    if (!ft) v2 -= g * v1;
    return {Vec2{v1, v2}, lambda, nu};
}

/// Underdamped Caldeira-Leggett map evaluated with complex
/// omega = sqrt(1 - beta^2/4); for beta > 2 this is omega = i mu and the real
/// part reproduces the overdamped map.
inline CMat2 continued_cl_map(double beta, double sigma) {
    const Complex w = std::sqrt(Complex{1.0 - 0.25 * beta * beta, 0.0});
    const Complex g = std::exp(Complex{0.5 * beta * sigma, 0.0});
    const Complex c = std::cos(w * sigma);
    const Complex q = std::sin(w * sigma) / w;
    const double h = 0.5 * beta;
    CMat2 m;
    m << g * (c - h * q), g * q, -g * q, g * (c + h * q);
    return m;
}

} // namespace chordosc

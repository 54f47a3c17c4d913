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

// Brute-force cross-checks for the closed forms: RK4 integration of the
// characteristic ODEs, adaptive quadrature of the kernel and drive integrals,
// and a truncated Fock-space Lindblad integrator for the finite-temperature
// model. None of these call the closed-form kernels, drives or propagators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chordosc/chord_state.hpp"
#include "chordosc/errors.hpp"
#include "chordosc/models.hpp"
#include "chordosc/phase_maps.hpp"

namespace chordosc::oracle {

struct OracleConfig {
    double rk4_step = 1e-4;
    double quad_tol = 1e-12;
    int fock_dim = 60;
    double fock_step = 1e-4;
    /// Richardson error estimate above which a characteristics value is
    /// flagged as not converged.
    double characteristics_tol = 1e-10;

    void validate() const {
        if (!(rk4_step > 0.0) || !(quad_tol > 0.0) || !(fock_step > 0.0) || !(characteristics_tol > 0.0))
            throw std::invalid_argument("OracleConfig: steps and tolerances must be positive");
        if (fock_dim < 10) throw std::invalid_argument("OracleConfig: fock_dim must be >= 10");
    }
};

/// Classical RK4 step for any state type with vector-space operators.
template <typename State, typename Rhs>
State rk4_step(const State& y, double t, double h, Rhs&& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = f(t + h, State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Forward-time characteristic flow dr/dtau of the chord master equation.
inline Vec2 characteristic_flow(MapKind kind, double rate, const Vec2& r) {
    const double k = r(0);
    const double s = r(1);
    if (kind == MapKind::FiniteTemp) return {s + rate * k, -k + rate * s};
    return {s, rate * s - k};
}

/// Columns of the evolution map obtained by integrating the characteristic
/// flow from the unit vectors with fixed-step RK4.
inline Mat2 integrate_map_columns(MapKind kind, double rate, double sigma, double step) {
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(sigma) / step)));
    const double h = sigma / n;
    auto rhs = [&](double, const Vec2& y) -> Vec2 { return characteristic_flow(kind, rate, y); };
    Mat2 out;
    for (int col = 0; col < 2; ++col) {
        Vec2 y = Vec2::Unit(col);
        for (int i = 0; i < n; ++i) y = rk4_step(y, i * h, h, rhs);
        out.col(col) = y;
    }
    return out;
}

/// Log-amplitude rate d(log w)/dtau along a characteristic, including the
/// drive phase.
class CharacteristicSystem {
public:
    explicit CharacteristicSystem(const ModelParams& p) : params_(p) {
        params_.validate();
        kind_ = p.map_kind();
        rate_ = p.map_rate();
        switch (p.variant) {
        case Variant::FiniteTemp:
        case Variant::DrivenFT: isotropic_ = 0.5 * p.gamma_plus(); break;
        case Variant::ZeroTemp: isotropic_ = 0.5 * p.gamma; break;
        case Variant::HighTemp: isotropic_ = p.gamma * p.D; break;
        case Variant::CLUnder:
        case Variant::DrivenCL: momentum_ = p.D * p.beta(); break;
        case Variant::CLOver: {
            const auto od = p.overdamped();
            momentum_ = od.omega * p.beta();
            mixed_ = od.gamma;
            break;
        }
        }
        if (p.is_driven()) {
            lambda_ = p.drive->amplitude;
            nu_ = p.drive->frequency;
        }
    }

    Vec2 flow(const Vec2& r) const { return characteristic_flow(kind_, rate_, r); }

    Complex log_rate(const Vec2& r, double t) const {
        const double k = r(0);
        const double s = r(1);
        const double re = -isotropic_ * (k * k + s * s) - momentum_ * s * s - mixed_ * k * s;
        const double im = lambda_ == 0.0 ? 0.0 : -lambda_ * std::cos(nu_ * t) * s;
        return {re, im};
    }

private:
    ModelParams params_;
    MapKind kind_{};
    double rate_ = 0.0;
    double isotropic_ = 0.0;
    double momentum_ = 0.0;
    double mixed_ = 0.0;
    double lambda_ = 0.0;
    double nu_ = 0.0;
};

struct CharacteristicsResult {
    Complex value;
    double error_estimate;
    bool converged;
};

namespace detail {

struct PullBack {
    Vec2 point;
    Complex exponent;
};

/// Integrate backwards from r at tau + sigma to tau with n RK4 steps.
inline PullBack pull_back(const CharacteristicSystem& sys, double tau, double sigma, const Vec2& r, int n) {
    using State = Eigen::Vector4d;
    const double t_end = tau + sigma;
    auto rhs = [&](double x, const State& y) -> State {
        const Vec2 pos = y.head<2>();
        const Vec2 f = sys.flow(pos);
        const Complex g = sys.log_rate(pos, t_end - x);
        return State{-f(0), -f(1), g.real(), g.imag()};
    };
    State y{r(0), r(1), 0.0, 0.0};
    const double h = sigma / n;
    for (int i = 0; i < n; ++i) y = rk4_step(y, i * h, h, rhs);
    return {y.head<2>(), Complex{y(2), y(3)}};
}

} // namespace detail

/// Value of the propagated chord function at r, obtained by integrating the
/// characteristic ODEs backwards from (r, tau + sigma) to tau and applying the
/// accumulated log-amplitude and phase to w0 at the pulled-back point. The
/// error estimate compares against a run with twice the step.
template <typename ChordFunction>
    requires std::invocable<ChordFunction, ChordVector>
CharacteristicsResult characteristics_value(const ModelParams& params, ChordFunction&& w0, double tau,
                                            double sigma, const ChordVector& r, const OracleConfig& cfg = {}) {
    cfg.validate();
    if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be finite and >= 0");
    const CharacteristicSystem sys(params);
    if (sigma == 0.0) return {w0(r), 0.0, true};

    int n = std::max(2, static_cast<int>(std::ceil(sigma / cfg.rk4_step)));
    n += n % 2;
    auto value_with = [&](int steps) {
        const auto pb = detail::pull_back(sys, tau, sigma, r.vec(), steps);
        return w0(ChordVector::from(pb.point)) * std::exp(pb.exponent);
    };
    const Complex fine = value_with(n);
    const Complex coarse = value_with(n / 2);
    const double err = std::abs(fine - coarse) / 15.0;
    return {fine, err, err <= cfg.characteristics_tol};
}

template <typename T>
struct QuadratureResult {
    T value;
    double error_estimate;
    bool converged;
};

namespace detail {

template <typename F>
QuadratureResult<double> integrate(F&& f, double length, const OracleConfig& cfg) {
    if (length == 0.0) return {0.0, 0.0, true};
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, length, 15, 1e-13,
                                                                                   &err);
    return {v, err, err <= cfg.quad_tol};
}

} // namespace detail

/// Kernels from direct quadrature of their defining integrands built from
/// evolution-map entries: alpha I for FiniteTemp, A for CLUnder, (B, C) for
/// CLOver. C is returned as the symmetric matrix of the k*s form, i.e. its
/// off-diagonal entries carry half the integral of N11 N22 + N12 N21.
inline QuadratureResult<DissipationKernels> kernel_quadrature(MapKind kind, double rate, double sigma,
                                                              const OracleConfig& cfg = {}) {
    cfg.validate();
    if (!(sigma >= 0.0)) throw std::invalid_argument("kernel_quadrature: sigma must be >= 0");
    evolution_map(kind, rate, 0.0); // regime check
    auto entry = [&](int i, int j) {
        return [=](double x) { return evolution_map(kind, rate, -x).entries(i, j); };
    };
    double max_err = 0.0;
    bool ok = true;
    auto run = [&](auto f) {
        const auto r = detail::integrate(f, sigma, cfg);
        max_err = std::max(max_err, r.error_estimate);
        ok = ok && r.converged;
        return r.value;
    };

    if (kind == MapKind::FiniteTemp) {
        auto r11 = entry(0, 0);
        auto r12 = entry(0, 1);
        const double a = run([&](double x) { return r11(x) * r11(x) + r12(x) * r12(x); });
        return {{{a * Mat2::Identity(), KernelKind::AlphaIdentity}, std::nullopt}, max_err, ok};
    }

    auto m11 = entry(0, 0);
    auto m12 = entry(0, 1);
    auto m21 = entry(1, 0);
    auto m22 = entry(1, 1);
    Mat2 ss;
    ss(0, 0) = run([&](double x) { return m21(x) * m21(x); });
    ss(0, 1) = run([&](double x) { return m21(x) * m22(x); });
    ss(1, 1) = run([&](double x) { return m22(x) * m22(x); });
    ss(1, 0) = ss(0, 1);
    if (kind == MapKind::CLUnder) return {{{ss, KernelKind::A}, std::nullopt}, max_err, ok};

    Mat2 ks;
    ks(0, 0) = run([&](double x) { return m11(x) * m21(x); });
    ks(0, 1) = 0.5 * run([&](double x) { return m11(x) * m22(x) + m12(x) * m21(x); });
    ks(1, 1) = run([&](double x) { return m12(x) * m22(x); });
    ks(1, 0) = ks(0, 1);
    return {{{ss, KernelKind::B}, QuadraticKernel{ks, KernelKind::C}}, max_err, ok};
}

/// Drive vector by quadrature of int_0^sigma lambda cos(nu (tau + sigma - x)) map_{2j}(-x) dx.
inline QuadratureResult<Vec2> drive_quadrature(MapKind kind, double rate, double lambda, double nu, double tau,
                                               double sigma, const OracleConfig& cfg = {}) {
    cfg.validate();
    if (kind == MapKind::CLOver) throw unsupported_error("drive_quadrature: no driven overdamped model");
    evolution_map(kind, rate, 0.0);
    const double t_end = tau + sigma;
    Vec2 v;
    double max_err = 0.0;
    bool ok = true;
    for (int j = 0; j < 2; ++j) {
        const auto r = detail::integrate(
            [&](double x) {
                return lambda * std::cos(nu * (t_end - x)) * evolution_map(kind, rate, -x).entries(1, j);
            },
            sigma, cfg);
        v(j) = r.value;
        max_err = std::max(max_err, r.error_estimate);
        ok = ok && r.converged;
    }
    return {v, max_err, ok};
}

struct FockTrace {
    std::vector<double> sigma;
    std::vector<double> energies;
    double max_trace_error = 0.0;
    /// Largest |rho - rho^dagger|. Only the upper triangle is evolved and the
    /// lower one is its conjugate, so this is zero by construction.
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
    /// Largest population of the two highest Fock levels over the run.
    double top_population = 0.0;
    bool reliable = true;
};

/// Population in the two highest levels above which a Fock run is flagged.
inline constexpr double kFockLeakageThreshold = 1e-8;

namespace detail {

/// rho_{m, m+d} for d >= 0, one contiguous band per d with a zero pad on each
/// side, real and imaginary parts split.
class BandedDensity {
public:
    explicit BandedDensity(int n) : n_(n), offset_(n + 1) {
        std::size_t pos = 0;
        for (int d = 0; d < n; ++d) {
            offset_[d] = pos + 1;
            pos += (n - d) + 2;
        }
        offset_[n] = pos + 1;
        re.assign(pos, 0.0);
        im.assign(pos, 0.0);
    }

    int dim() const { return n_; }
    std::size_t size() const { return re.size(); }
    /// Storage slots [0, band_end(d)) hold bands 0..d-1 with their pads.
    std::size_t band_end(int d) const { return offset_[d] - 1; }
    std::size_t index(int m, int d) const { return offset_[d] + m; }

    Complex get(int m, int l) const {
        if (l >= m) {
            const auto i = index(m, l - m);
            return {re[i], im[i]};
        }
        const auto i = index(l, m - l);
        return {re[i], -im[i]};
    }

    void set(int m, int l, Complex v) {
        const auto i = index(m, l - m);
        re[i] = v.real();
        im[i] = v.imag();
    }

    std::vector<double> re;
    std::vector<double> im;

private:
    int n_;
    std::vector<std::size_t> offset_;
};

/// d rho / dtau = -i [a^dag a, rho] + L[rho] on an N x N truncation. Within a
/// band the generator couples rho_{m,l} only to rho_{m+-1,l+-1}; the rates are
/// tabulated per storage slot (zero on the pads). The truncated a a^dag has a
/// zero last diagonal entry, which keeps the trace exactly conserved.
class FockLindbladian {
public:
    FockLindbladian(int n, double gamma, double nbar) : layout_(n) {
        const std::size_t size = layout_.size();
        diag_re_.assign(size, 0.0);
        diag_im_.assign(size, 0.0);
        up_.assign(size, 0.0);
        down_.assign(size, 0.0);
        const double cool = gamma * (1.0 + nbar);
        const double heat = gamma * nbar;
        auto aad = [n](int m) { return m < n - 1 ? m + 1.0 : 0.0; };
        for (int d = 0; d < n; ++d) {
            for (int m = 0; m + d < n; ++m) {
                const int l = m + d;
                const auto i = layout_.index(m, d);
                diag_re_[i] = -cool * (m + l) - heat * (aad(m) + aad(l));
                diag_im_[i] = static_cast<double>(d); // -i (m - l)
                if (l + 1 < n) up_[i] = 2.0 * cool * std::sqrt((m + 1.0) * (l + 1.0));
                if (m > 0) down_[i] = 2.0 * heat * std::sqrt(static_cast<double>(m) * l);
            }
        }
    }

    /// Applies the generator to the first `size` storage slots, which must end
    /// on a band boundary.
    void apply(const std::vector<double>& xr, const std::vector<double>& xi, std::vector<double>& yr,
               std::vector<double>& yi, std::size_t size) const {
        yr[0] = yi[0] = yr[size - 1] = yi[size - 1] = 0.0;
        for (std::size_t i = 1; i + 1 < size; ++i) {
            yr[i] = diag_re_[i] * xr[i] - diag_im_[i] * xi[i] + up_[i] * xr[i + 1] + down_[i] * xr[i - 1];
            yi[i] = diag_re_[i] * xi[i] + diag_im_[i] * xr[i] + up_[i] * xi[i + 1] + down_[i] * xi[i - 1];
        }
    }

private:
    BandedDensity layout_;
    std::vector<double> diag_re_;
    std::vector<double> diag_im_;
    std::vector<double> up_;
    std::vector<double> down_;
};

} // namespace detail

/// Energy <a^dag a + 1/2> of a coherent initial state (x0, p0) under the
/// finite-temperature Lindblad equation, integrated in a truncated Fock basis
/// with RK4 and reported at each time of `sigma_grid` (non-decreasing, >= 0).
inline FockTrace fock_energy_trace(const ModelParams& params, double x0, double p0,
                                   std::span<const double> sigma_grid, const OracleConfig& cfg = {}) {
    cfg.validate();
    params.validate();
    if (params.variant != Variant::FiniteTemp && params.variant != Variant::ZeroTemp)
        throw unsupported_error("fock_energy_trace: only the finite-temperature Lindblad model is available");
    if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()) ||
        (!sigma_grid.empty() && sigma_grid.front() < 0.0))
        throw std::invalid_argument("fock_energy_trace: sigma_grid must be non-decreasing and >= 0");

    const int n = cfg.fock_dim;
    const double nbar = params.variant == Variant::ZeroTemp ? 0.0 : params.mean_occupation();
    const detail::FockLindbladian lindblad(n, params.gamma, nbar);

    // Coherent amplitude alpha = (x0 + i p0)/sqrt(2), truncated and renormalized.
    const Complex alpha = Complex{x0, p0} / std::numbers::sqrt2;
    std::vector<Complex> psi(n);
    psi[0] = std::exp(-0.5 * std::norm(alpha));
    for (int m = 1; m < n; ++m) psi[m] = psi[m - 1] * alpha / std::sqrt(static_cast<double>(m));
    double norm2 = 0.0;
    for (const auto& c : psi) norm2 += std::norm(c);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : psi) c *= inv;

    detail::BandedDensity rho(n);
    for (int m = 0; m < n; ++m)
        for (int l = m; l < n; ++l) rho.set(m, l, psi[m] * std::conj(psi[l]));

    FockTrace out;
    out.min_eigenvalue = 1.0;

    auto observe = [&](double t) {
        double e = 0.0;
        double tr = 0.0;
        for (int m = 0; m < n; ++m) {
            const double pop = rho.re[rho.index(m, 0)];
            e += (m + 0.5) * pop;
            tr += pop;
        }
        const double top = rho.re[rho.index(n - 1, 0)] + rho.re[rho.index(n - 2, 0)];
        Eigen::MatrixXcd dense(n, n);
        for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l) dense(m, l) = rho.get(m, l);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense, Eigen::EigenvaluesOnly);
        out.sigma.push_back(t);
        out.energies.push_back(e);
        out.max_trace_error = std::max(out.max_trace_error, std::abs(tr - 1.0));
        out.top_population = std::max(out.top_population, top);
        out.min_eigenvalue = std::min(out.min_eigenvalue, eig.eigenvalues().minCoeff());
    };

    // Bands never mix, so bands that start at zero stay zero; only the
    // populated ones are integrated.
    int bands = 0;
    for (int d = 0; d < n; ++d)
        for (int m = 0; m + d < n; ++m)
            if (rho.re[rho.index(m, d)] != 0.0 || rho.im[rho.index(m, d)] != 0.0) bands = d + 1;
    const std::size_t size = rho.band_end(bands);
    std::vector<double> k1r(size), k1i(size), k2r(size), k2i(size), k3r(size), k3i(size), k4r(size),
        k4i(size), tr(size), ti(size);
    auto step = [&](double h) {
        lindblad.apply(rho.re, rho.im, k1r, k1i, size);
        for (std::size_t i = 0; i < size; ++i) {
            tr[i] = rho.re[i] + 0.5 * h * k1r[i];
            ti[i] = rho.im[i] + 0.5 * h * k1i[i];
        }
        lindblad.apply(tr, ti, k2r, k2i, size);
        for (std::size_t i = 0; i < size; ++i) {
            tr[i] = rho.re[i] + 0.5 * h * k2r[i];
            ti[i] = rho.im[i] + 0.5 * h * k2i[i];
        }
        lindblad.apply(tr, ti, k3r, k3i, size);
        for (std::size_t i = 0; i < size; ++i) {
            tr[i] = rho.re[i] + h * k3r[i];
            ti[i] = rho.im[i] + h * k3i[i];
        }
        lindblad.apply(tr, ti, k4r, k4i, size);
        const double w = h / 6.0;
        for (std::size_t i = 0; i < size; ++i) {
            rho.re[i] += w * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
            rho.im[i] += w * (k1i[i] + 2.0 * k2i[i] + 2.0 * k3i[i] + k4i[i]);
        }
        // Populations are real.
        for (int m = 0; m < n; ++m) rho.im[rho.index(m, 0)] = 0.0;
    };

    double t = 0.0;
    for (double target : sigma_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const int steps = std::max(1, static_cast<int>(std::ceil(span / cfg.fock_step - 1e-9)));
            const double h = span / steps;
            for (int i = 0; i < steps; ++i) step(h);
            t = target;
        }
        observe(target);
    }
    out.reliable = out.top_population <= kFockLeakageThreshold;
    return out;
}

} // namespace chordosc::oracle

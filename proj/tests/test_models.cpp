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

#include <cmath>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include "chordosc/errors.hpp"
#include "chordosc/models.hpp"
#include "chordosc/oracle.hpp"
#include "chordosc/sampling.hpp"

using namespace chordosc;

namespace {

double max_diff(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

ModelParams make(Variant v, double gamma, double D = 0.0) {
    ModelParams p;
    p.variant = v;
    p.gamma = gamma;
    p.D = D;
    return p;
}

ModelParams driven(Variant v, double gamma, double D, double lambda, double nu) {
    auto p = make(v, gamma, D);
    p.drive = Drive{lambda, nu};
    return p;
}

} // namespace

TEST(ModelParams, DerivedQuantities) {
    auto p = make(Variant::FiniteTemp, 0.1, 1.0);
    EXPECT_NEAR(p.mean_occupation() + 0.5, 1.0819767068693265, 1e-15);
    EXPECT_NEAR(p.gamma_plus(), 0.2 * 1.0819767068693265, 1e-15);
    EXPECT_DOUBLE_EQ(make(Variant::FiniteTemp, 0.1, 0.0).mean_occupation(), 0.0);
    EXPECT_DOUBLE_EQ(p.beta(), 0.2);
    EXPECT_EQ(make(Variant::DrivenCL, 0.3, 1.0).map_kind(), MapKind::CLUnder);
    EXPECT_DOUBLE_EQ(make(Variant::DrivenCL, 0.3, 1.0).map_rate(), 0.6);
    EXPECT_DOUBLE_EQ(make(Variant::HighTemp, 0.3, 1.0).map_rate(), 0.3);
}

TEST(ModelParams, OverdampedCoefficients) {
    auto p = make(Variant::CLOver, 1.5, 2.0);
    const auto hi = p.overdamped();
    EXPECT_DOUBLE_EQ(hi.omega, 2.0);
    EXPECT_DOUBLE_EQ(hi.lambda, 1.0 / 24.0);
    EXPECT_NEAR(hi.gamma, hi.lambda, 1e-15);
    p.od_regime = OverdampedRegime::LowT;
    p.omega_c = 30.0;
    p.D = 0.1;
    const auto lo = p.overdamped();
    EXPECT_NEAR(lo.omega, 3.0 / std::numbers::pi * std::log(10.0), 1e-15);
    EXPECT_NEAR(lo.lambda, std::log(3.0 / (0.2 * std::numbers::pi)) / (3.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(lo.gamma, 0.1 + lo.lambda - lo.omega, 1e-15);
}

TEST(ModelParams, Validation) {
    EXPECT_THROW(make(Variant::FiniteTemp, 0.0).validate(), std::invalid_argument);
    EXPECT_THROW(make(Variant::FiniteTemp, 0.1, -1.0).validate(), std::invalid_argument);
    EXPECT_THROW(make(Variant::CLUnder, 1.0, 1.0).validate(), regime_error);
    EXPECT_THROW(make(Variant::CLUnder, 1.2, 1.0).validate(), regime_error);
    EXPECT_THROW(make(Variant::CLOver, 1.0, 1.0).validate(), regime_error);
    EXPECT_THROW(make(Variant::CLOver, 0.8, 1.0).validate(), regime_error);
    EXPECT_THROW(make(Variant::CLOver, 1.5, 0.0).validate(), std::invalid_argument);
    auto low = make(Variant::CLOver, 1.5, 0.1);
    low.od_regime = OverdampedRegime::LowT;
    EXPECT_THROW(low.validate(), std::invalid_argument);
    EXPECT_THROW(driven(Variant::CLOver, 1.5, 1.0, 0.1, 1.0).validate(), unsupported_error);
    EXPECT_THROW(make(Variant::DrivenFT, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(driven(Variant::FiniteTemp, 0.1, 1.0, 0.1, 1.0).validate(), std::invalid_argument);
    EXPECT_THROW(driven(Variant::DrivenFT, 0.1, 1.0, -0.1, 1.0).validate(), std::invalid_argument);
    EXPECT_NO_THROW(driven(Variant::DrivenCL, 0.1, 1.0, 0.1, 0.9).validate());
    EXPECT_THROW(propagate(ground_state(), make(Variant::FiniteTemp, 0.1), 0.0, -1.0), std::invalid_argument);
}

TEST(Propagate, ZeroSpanIsIdentity) {
    sampling::Rng rng(31);
    for (Variant v : kAllVariants) {
        const auto p = sampling::random_params(v, rng);
        const auto s0 = sampling::random_state(rng);
        const auto s1 = propagate(s0, p, 2.0, 0.0);
        EXPECT_LE(max_diff(s1.covariance(), s0.covariance()), 1e-15) << to_string(v);
        EXPECT_LE((s1.mean() - s0.mean()).cwiseAbs().maxCoeff(), 1e-15) << to_string(v);
    }
}

TEST(Propagate, AgreesWithCharacteristicsOracle) {
    sampling::Rng rng(32);
    for (Variant v : kAllVariants) {
        const auto p = sampling::random_params(v, rng);
        const auto s0 = sampling::random_state(rng);
        const double tau = sampling::uniform(rng, 0.0, 5.0);
        const double sigma = sampling::uniform(rng, 0.5, 3.0);
        const auto s1 = propagate(s0, p, tau, sigma);
        auto w0 = [&](const ChordVector& r) { return evaluate(s0, r); };
        for (int j = 0; j < 4; ++j) {
            const auto r = sampling::random_chord_point(rng);
            const auto o = oracle::characteristics_value(p, w0, tau, sigma, r);
            EXPECT_TRUE(o.converged);
            EXPECT_LE(std::abs(o.value - evaluate(s1, r)), 1e-8) << to_string(v);
        }
    }
}

TEST(Propagate, PointwiseHandlesNonGaussianInitialData) {
    // First Fock state: w(r) = (1 - |r|^2/2) e^{-|r|^2/4}.
    auto fock1 = [](const ChordVector& r) {
        const double n2 = r.k * r.k + r.s * r.s;
        return Complex{(1.0 - 0.5 * n2) * std::exp(-0.25 * n2), 0.0};
    };
    sampling::Rng rng(33);
    for (Variant v : {Variant::FiniteTemp, Variant::CLUnder, Variant::DrivenCL, Variant::CLOver}) {
        const auto p = sampling::random_params(v, rng);
        for (int j = 0; j < 3; ++j) {
            const auto r = sampling::random_chord_point(rng);
            const auto o = oracle::characteristics_value(p, fock1, 1.0, 2.0, r);
            EXPECT_LE(std::abs(o.value - propagate_pointwise(fock1, p, 1.0, 2.0, r)), 1e-8) << to_string(v);
        }
    }
}

TEST(Propagate, PointwiseMatchesGaussianUpdate) {
    sampling::Rng rng(34);
    for (Variant v : kAllVariants) {
        const auto p = sampling::random_params(v, rng);
        const auto s0 = sampling::random_state(rng);
        const auto s1 = propagate(s0, p, 0.7, 1.9);
        const auto r = sampling::random_chord_point(rng);
        const auto w = propagate_pointwise([&](const ChordVector& x) { return evaluate(s0, x); }, p, 0.7, 1.9, r);
        EXPECT_LE(std::abs(w - evaluate(s1, r)), 1e-14) << to_string(v);
    }
}

TEST(Propagate, SemigroupIncludingDrive) {
    sampling::Rng rng(35);
    for (Variant v : kAllVariants) {
        const auto p = sampling::random_params(v, rng);
        const auto s0 = sampling::random_state(rng);
        const double tau = 1.3;
        const auto split = propagate(propagate(s0, p, tau, 0.8), p, tau + 0.8, 1.7);
        const auto whole = propagate(s0, p, tau, 2.5);
        EXPECT_LE(max_diff(split.covariance(), whole.covariance()), 1e-12) << to_string(v);
        EXPECT_LE((split.mean() - whole.mean()).cwiseAbs().maxCoeff(), 1e-12) << to_string(v);
    }
}

TEST(Propagate, DriveShiftsMeanOnly) {
    sampling::Rng rng(36);
    for (Variant v : {Variant::DrivenFT, Variant::DrivenCL}) {
        auto p = sampling::random_params(v, rng);
        auto bare = p;
        bare.variant = v == Variant::DrivenFT ? Variant::FiniteTemp : Variant::CLUnder;
        bare.drive.reset();
        const auto s0 = sampling::random_state(rng);
        const auto a = propagate(s0, p, 0.4, 6.0);
        const auto b = propagate(s0, bare, 0.4, 6.0);
        EXPECT_EQ(a.covariance(), b.covariance());
        EXPECT_GT((a.mean() - b.mean()).norm(), 0.0);
    }
}

TEST(Propagate, ZeroTemperatureDriveKeepsCoherence) {
    const auto p = driven(Variant::DrivenFT, 0.01, 0.0, 0.1, 1.0);
    for (double sigma : {1.0, 10.0, 50.0, 100.0}) {
        const auto s = propagate(ground_state(), p, 0.0, sigma);
        EXPECT_NEAR(s.covariance().determinant(), 0.25, 1e-10);
    }
    // Resonant amplitude approaches lambda / (2 gamma).
    const auto late = propagate(ground_state(), p, 0.0, 2000.0);
    // The counter-rotating part adds an oscillation of at most lambda/4.
    EXPECT_NEAR(late.mean().norm(), 0.1 / 0.02, 0.026);
}

TEST(StationaryState, IsotropicForms) {
    const auto s0 = coherent_state(1.5, -0.5);
    struct Case {
        ModelParams p;
        double diag;
    };
    const auto ft = make(Variant::FiniteTemp, 0.2, 1.0);
    const Case cases[] = {{ft, ft.mean_occupation() + 0.5},
                          {make(Variant::ZeroTemp, 0.2), 0.5},
                          {make(Variant::HighTemp, 0.2, 3.0), 3.0},
                          {make(Variant::CLUnder, 0.2, 3.0), 3.0}};
    for (const auto& c : cases) {
        const auto st = stationary_state(c.p);
        EXPECT_LE(max_diff(st.covariance(), c.diag * Mat2::Identity()), 1e-15);
        const auto late = propagate(s0, c.p, 0.0, 80.0 / c.p.gamma);
        EXPECT_LE(max_diff(late.covariance(), st.covariance()), 1e-8) << to_string(c.p.variant);
        EXPECT_LE(late.mean().norm(), 1e-8);
    }
}

TEST(StationaryState, OverdampedFixedPoint) {
    auto p = make(Variant::CLOver, 1.4, 2.0);
    const auto st = stationary_state(p);
    const auto od = p.overdamped();
    EXPECT_DOUBLE_EQ(st.covariance()(0, 0), 2.0 + od.lambda);
    EXPECT_DOUBLE_EQ(st.covariance()(1, 1), od.omega);
    EXPECT_DOUBLE_EQ(st.covariance()(0, 1), 0.0);
    // A fixed point of every finite propagation, not only the limit.
    const auto moved = propagate(st, p, 0.0, 0.37);
    EXPECT_LE(max_diff(moved.covariance(), st.covariance()), 1e-13);
}

TEST(StationaryState, DrivenUnsupported) {
    EXPECT_THROW(stationary_state(driven(Variant::DrivenFT, 0.1, 1.0, 0.1, 1.0)), unsupported_error);
}

TEST(ClosedFormEnergy, ExactForFiniteTemperatureFamily) {
    sampling::Rng rng(37);
    for (Variant v : {Variant::FiniteTemp, Variant::ZeroTemp, Variant::HighTemp}) {
        for (int i = 0; i < 30; ++i) {
            const auto p = sampling::random_params(v, rng);
            const auto s0 = sampling::random_coherent_state(rng);
            const double sigma = sampling::uniform(rng, 0.0, 20.0);
            EXPECT_NEAR(closed_form_energy(p, energy(s0), 0.0, sigma), energy(propagate(s0, p, 0.0, sigma)), 1e-9);
        }
    }
}

TEST(ClosedFormEnergy, DrivenFiniteTemperatureFromGroundState) {
    sampling::Rng rng(38);
    for (int i = 0; i < 30; ++i) {
        const auto p = sampling::random_params(Variant::DrivenFT, rng);
        const double tau = sampling::uniform(rng, 0.0, 5.0);
        const double sigma = sampling::uniform(rng, 0.0, 20.0);
        EXPECT_NEAR(closed_form_energy(p, 0.5, tau, sigma), energy(propagate(ground_state(), p, tau, sigma)), 1e-9);
    }
}

TEST(ClosedFormEnergy, CaldeiraLeggettFormsExactOnlyFromGroundState) {
    const auto under = make(Variant::CLUnder, 0.3, 2.0);
    const auto over = make(Variant::CLOver, 1.6, 2.0);
    for (const auto& p : {under, over}) {
        EXPECT_NEAR(closed_form_energy(p, 0.5, 0.0, 3.0), energy(propagate(ground_state(), p, 0.0, 3.0)), 1e-12);
        // Displaced starts: the closed form ignores the direction of the mean.
        const auto s0 = coherent_state(2.0, 0.0);
        EXPECT_GT(std::abs(closed_form_energy(p, energy(s0), 0.0, 3.0) - energy(propagate(s0, p, 0.0, 3.0))), 1e-3);
    }
}

TEST(ClosedFormEnergy, DrivenCaldeiraLeggettDecaysTooFast) {
    // The driven CL closed form carries e^{-2 beta sigma}; with lambda = 0 it
    // should reduce to the undriven one but does not.
    const auto p = driven(Variant::DrivenCL, 0.3, 2.0, 0.0, 1.0);
    const auto bare = make(Variant::CLUnder, 0.3, 2.0);
    const double e0 = 0.5;
    EXPECT_GT(std::abs(closed_form_energy(p, e0, 0.0, 3.0) - closed_form_energy(bare, e0, 0.0, 3.0)), 1e-3);
    EXPECT_NEAR(energy(propagate(ground_state(), p, 0.0, 3.0)), closed_form_energy(bare, e0, 0.0, 3.0), 1e-12);
}

TEST(ClosedFormEnergy, CaldeiraLeggettLowTemperaturePathology) {
    // The stationary energy is D, below the ground-state energy when D < 1/2.
    const auto p = make(Variant::CLUnder, 0.1, 0.1);
    EXPECT_NEAR(closed_form_energy(p, 0.5, 0.0, 400.0), 0.1, 1e-12);
    EXPECT_TRUE(physicality_warning(propagate(ground_state(), p, 0.0, 400.0)).has_value());
}

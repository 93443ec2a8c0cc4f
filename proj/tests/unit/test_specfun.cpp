#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fyk/errors.hpp"
#include "fyk/specfun.hpp"
#include "oracles.hpp"

using namespace fyk;

TEST(GammaFn, SmallIntegerAndHalfInteger) {
    EXPECT_DOUBLE_EQ(gamma_fn(1.0), 1.0);
    EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(gamma_fn(5.0), 24.0, 24.0 * 1e-14);
}

TEST(GammaFn, ReflectionIdentity) {
    for (double x = 0.01; x < 1.0; x += 0.01) {
        const double lhs = gamma_fn(x) * gamma_fn(1.0 - x);
        const double rhs = std::numbers::pi / std::sin(std::numbers::pi * x);
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << x;
    }
}

TEST(GammaFn, MatchesBoostUpToFifty) {
    for (double x = 0.05; x <= 50.0; x += 0.37)
        EXPECT_NEAR(gamma_fn(x) / boost::math::tgamma(x), 1.0, 1e-12) << x;
}

TEST(GammaFn, RejectsNonPositive) {
    EXPECT_THROW(gamma_fn(0.0), DomainError);
    EXPECT_THROW(gamma_fn(-1.5), DomainError);
}

TEST(BesselK, HalfOrderClosedForm) {
    EXPECT_NEAR(bessel_k(0.5, 1.0), std::sqrt(std::numbers::pi / 2) * std::exp(-1.0), 1e-14);
    EXPECT_NEAR(bessel_k(0.5, 2.0), std::sqrt(std::numbers::pi / 4) * std::exp(-2.0), 1e-14);
}

TEST(BesselK, AgreesWithIntegralRepresentation) {
    for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double t = 0.01; t <= 20.0; t *= 1.3) {
            const double ref = oracle::bessel_k(nu, t);
            EXPECT_NEAR(bessel_k(nu, t) / ref, 1.0, 1e-9) << nu << " " << t;
        }
}

TEST(BesselK, MonotoneAndAsymptoticallyBounded) {
    for (double nu : {0.2, 0.6}) {
        double prev = bessel_k(nu, 0.01);
        double hi = 0.0, lo = 1e300;
        for (double t = 0.02; t <= 60.0; t *= 1.1) {
            const double v = bessel_k(nu, t);
            EXPECT_LT(v, prev);
            prev = v;
            if (t > 5.0) {
                const double s = std::sqrt(t) * bessel_k_scaled(nu, t);
                hi = std::max(hi, s);
                lo = std::min(lo, s);
            }
        }
        // sqrt(t) e^t K_nu(t) -> sqrt(pi/2).
        EXPECT_LT(hi, 1.5);
        EXPECT_GT(lo, 1.0);
    }
    EXPECT_THROW(bessel_k(0.3, 0.0), DomainError);
    EXPECT_THROW(bessel_k(0.3, -1.0), DomainError);
}

TEST(ProfilePhi, HalfOrderIsExponential) {
    const ProblemIndex idx{3, 0.5};
    for (double t : {0.0, 0.1, 1.0, 3.0, 10.0}) EXPECT_NEAR(profile_phi(idx, t), std::exp(-t), 1e-14);
    EXPECT_NEAR(profile_phi(idx, 1.0), 0.36787944117144233, 1e-15);
}

TEST(ProfilePhi, NormalizedAtZeroAndDecays) {
    for (double g = 0.1; g < 0.95; g += 0.1) {
        const ProblemIndex idx{5, g};
        EXPECT_DOUBLE_EQ(profile_phi(idx, 0.0), 1.0);
        EXPECT_LT(profile_phi(idx, 40.0), 1e-15);
        EXPECT_NEAR(phi_normalization(g), std::pow(2.0, 1.0 - g) / std::tgamma(g), 1e-14);
    }
}

// phi'' comes from Richardson-extrapolated central differences of the
// analytic phi'. Near t = 0 the three terms grow like t^{2g-2} and cancel,
// so the residual is measured against the largest of them.
TEST(ProfilePhi, SolvesTheProfileOde) {
    for (double g = 0.1; g < 0.95; g += 0.1) {
        const ProblemIndex idx{5, g};
        for (double t = 1e-3; t <= 20.0; t *= 1.25) {
            auto D = [&](double h) { return (profile_phi_deriv(idx, t + h) - profile_phi_deriv(idx, t - h)) / (2 * h); };
            const double h = 0.02 * t;
            const double d2 = (4.0 * D(0.5 * h) - D(h)) / 3.0;
            const double d1 = profile_phi_deriv(idx, t);
            const double f0 = profile_phi(idx, t);
            const double drift = (1.0 - 2.0 * g) / t * d1;
            const double scale = std::max({1.0, f0, std::abs(d2), std::abs(drift)});
            EXPECT_LE(std::abs(d2 + drift - f0), 1e-6 * scale) << g << " " << t;
            const double fd1 = (profile_phi(idx, t + 1e-6 * t) - profile_phi(idx, t - 1e-6 * t)) / (2e-6 * t);
            EXPECT_NEAR(d1, fd1, 1e-6 * std::max(1.0, std::abs(d1))) << g << " " << t;
        }
    }
}

TEST(Constants, CriticalHalfCase) {
    const Constants c = constants(ProblemIndex{3, 0.5});
    EXPECT_NEAR(c.alpha, 2.0, 1e-14);
    EXPECT_NEAR(c.kappa, 1.0, 1e-14);
    EXPECT_NEAR(c.green_const, 1.0 / (2.0 * std::numbers::pi * std::numbers::pi), 1e-15);
    EXPECT_NEAR(c.sphere_area, 4.0 * std::numbers::pi, 1e-14);
}

TEST(Constants, MatchIndependentFormulas) {
    for (int n : {2, 3, 5, 8})
        for (double g : {0.2, 0.5, 0.7, 0.95}) {
            const Constants c = constants(ProblemIndex{n, g});
            EXPECT_NEAR(c.alpha / oracle::alpha(n, g), 1.0, 1e-12);
            EXPECT_NEAR(c.kappa / oracle::kappa(g), 1.0, 1e-12);
            EXPECT_NEAR(c.green_const / oracle::green_const(n, g), 1.0, 1e-12);
            EXPECT_NEAR(c.sphere_area / oracle::sphere_area(n), 1.0, 1e-13);
        }
}

TEST(Constants, RejectInvalidIndex) {
    EXPECT_THROW(constants(ProblemIndex{1, 0.6}), DomainError);
    EXPECT_THROW(constants(ProblemIndex{3, 0.0}), DomainError);
    EXPECT_THROW(constants(ProblemIndex{3, 1.0}), DomainError);
    EXPECT_NO_THROW(constants(ProblemIndex{2, 0.99}));
}

// Calibrate d2 the long way: W(0, 0) must reproduce w(0) = alpha, and
// W(0, 0) = (2 pi)^{-n} |S^{n-1}| d2 int t^{n-1-g} K_g(t) dt.
TEST(Normalization, CalibratedTransformConstant) {
    for (auto [n, g] : {std::pair{3, 0.5}, {4, 0.3}, {5, 0.7}, {7, 0.25}}) {
        const ProblemIndex idx{n, g};
        boost::math::quadrature::exp_sinh<double> q;
        const double I = q.integrate(
            [&](double t) { return t > 0 && t < 800 ? std::pow(t, n - 1.0 - g) * oracle::bessel_k(g, t) : 0.0; }, 1e-12);
        const double d2 = oracle::alpha(n, g) * std::pow(2.0 * std::numbers::pi, n) / (oracle::sphere_area(n) * I);
        EXPECT_NEAR(what_normalization(idx) / d2, 1.0, 1e-8) << n << " " << g;
    }
}

TEST(Normalization, PoissonConstantIntegratesToOne) {
    for (auto [n, g] : {std::pair{3, 0.5}, {4, 0.3}, {6, 0.8}}) {
        const ProblemIndex idx{n, g};
        boost::math::quadrature::exp_sinh<double> q;
        // int_{R^n} (|y|^2 + 1)^{-(n+2g)/2} dy in polar form.
        const double I = oracle::sphere_area(n) *
                         q.integrate([&](double r) { return std::exp((n - 1.0) * std::log(r) - 0.5 * (n + 2 * g) * std::log1p(r * r)); },
                                     1e-13);
        EXPECT_NEAR(poisson_constant(idx) * I, 1.0, 1e-10);
    }
}

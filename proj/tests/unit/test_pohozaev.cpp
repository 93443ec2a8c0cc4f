#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fyk/errors.hpp"
#include "fyk/moments.hpp"
#include "fyk/pohozaev.hpp"
#include "oracles.hpp"

using namespace fyk;

TEST(Hemisphere, WeightedAreaAgainstPolarQuadrature) {
    for (auto [n, g] : {std::pair{3, 0.5}, {4, 0.3}, {5, 0.7}, {7, 0.1}, {8, 0.95}}) {
        const ProblemIndex idx{n, g};
        const double ref = oracle::weighted_half_sphere(n, g);
        EXPECT_NEAR(hemisphere_weighted_area(idx) / ref, 1.0, 1e-10);
        const double rule = sphere_area(n) * hemisphere_rule(idx).apply([](double) { return 1.0; });
        EXPECT_NEAR(rule / ref, 1.0, 1e-8) << n << " " << g;
    }
    EXPECT_NEAR(hemisphere_weighted_area(ProblemIndex{3, 0.5}), std::numbers::pi * std::numbers::pi, 1e-12);
}

TEST(Pohozaev, VanishesOnTheBubble) {
    for (auto [n, g] : {std::pair{3, 0.5}, {5, 0.5}, {5, 0.7}}) {
        const ProblemIndex idx{n, g};
        const double scale = constants(idx).kappa * compute_integrals(idx, IntegralMethod::bessel_moments).C0;
        const AxisymmetricField W = bubble_field(idx, 2.1);
        for (double r : {0.5, 1.0, 2.0}) {
            const PohozaevReport rep = pohozaev_P(idx, W, r, idx.critical_power(), nullptr, 0.0);
            EXPECT_LE(std::abs(rep.total), 1e-4 * scale) << n << " " << g << " " << r;
            EXPECT_LE(std::abs(rep.total), 1e-8 * std::abs(rep.boundary_term));
            EXPECT_DOUBLE_EQ(rep.r, r);
        }
    }
}

TEST(Pohozaev, BoundaryDataEntersThroughF) {
    const ProblemIndex idx{5, 0.5};
    const AxisymmetricField W = bubble_field(idx, 1.5);
    const double p = idx.critical_power();
    const PohozaevReport a = pohozaev_P(idx, W, 1.0, p, nullptr, 0.0);
    const PohozaevReport b = pohozaev_P(idx, W, 1.0, p, [](double) { return 2.0; }, 1.0);
    EXPECT_NEAR(b.boundary_term, 0.5 * a.boundary_term, 1e-12 * std::abs(a.boundary_term));
    EXPECT_DOUBLE_EQ(b.surface_term, a.surface_term);
    EXPECT_THROW(pohozaev_P(idx, W, 2.0, p, nullptr, 0.0), DomainError);
}

TEST(Pohozaev, SingularProfileLimit) {
    const ProblemIndex idx{3, 0.5};
    const double pi2 = std::numbers::pi * std::numbers::pi;
    // Only the cross term of c(|x|^{-mu} + 1) survives: -kappa c^2 (mu^2/2) times the weighted area.
    EXPECT_NEAR(singular_profile_Pprime(idx, 1.0), -2.0 * pi2, 1e-10);
    EXPECT_NEAR(pohozaev_Pprime(idx, singular_profile_field(idx, 1.0), 1.0), -2.0 * pi2, 1e-8);
    for (auto [n, g] : {std::pair{4, 0.3}, {6, 0.8}})
        for (double c : {0.5, -2.0}) {
            const ProblemIndex j{n, g};
            const double v = pohozaev_Pprime(j, singular_profile_field(j, c), 1.0);
            EXPECT_NEAR(v / singular_profile_Pprime(j, c), 1.0, 1e-8);
            EXPECT_LT(v, 0.0);
        }
    EXPECT_NEAR(pohozaev_Pprime(idx, constant_field(3.0), 1.0), 0.0, 1e-14);
}

TEST(Coefficient, Examples) {
    const auto a = coefficient(ProblemIndex{6, 0.5});
    EXPECT_TRUE(a.positive);
    EXPECT_TRUE(a.gate);
    EXPECT_NEAR(a.c_value, 1.0 / 12.0, 1e-15);
    const auto b = coefficient(ProblemIndex{4, 0.6});
    EXPECT_FALSE(b.positive);
    EXPECT_FALSE(b.gate);
    EXPECT_NEAR(b.numerator, -4.16, 1e-12);
    const auto c = coefficient(ProblemIndex{7, 0.1});
    EXPECT_TRUE(c.positive && c.gate);
    const auto d = coefficient(ProblemIndex{4, 0.7});
    EXPECT_TRUE(d.positive && d.gate);
    EXPECT_NEAR(d.numerator, 1.56, 1e-12);
    EXPECT_NEAR(coefficient(ProblemIndex{4, 0.9}).numerator, 15.64, 1e-12);
    EXPECT_EQ(coefficient(ProblemIndex{5, 0.5}).numerator, 0.0);
}

TEST(Coefficient, GateThresholds) {
    EXPECT_EQ(dimension_gate_min_n(0.1), 7);
    EXPECT_EQ(dimension_gate_min_n(0.229), 7);
    EXPECT_EQ(dimension_gate_min_n(0.23), 6);
    EXPECT_EQ(dimension_gate_min_n(0.3), 6);
    EXPECT_EQ(dimension_gate_min_n(0.5), 6);
    EXPECT_EQ(dimension_gate_min_n(0.6), 5);
    EXPECT_EQ(dimension_gate_min_n(0.7), 4);
}

TEST(Coefficient, SweepAgreesWithGate) {
    const SweepReport r = coefficient_sweep(3, 30, 1e-3);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.checked, r.agree);
    EXPECT_EQ(r.checked + r.boundary.size() + r.out_of_domain.size(), 28u * 999u);
    ASSERT_EQ(r.boundary.size(), 1u);
    EXPECT_EQ(r.boundary[0].n, 5);
    EXPECT_DOUBLE_EQ(r.boundary[0].gamma, 0.5);
    EXPECT_LT(std::abs(r.boundary[0].numerator), 1e-12);
    for (const auto& c : r.out_of_domain) EXPECT_LE(c.n, 2.0 + 2.0 * c.gamma);
}

TEST(Coefficient, AssemblyFromQuadrature) {
    for (auto [n, g] : {std::pair{4, 0.8}, {5, 0.6}, {6, 0.5}, {7, 0.2}, {8, 0.35}}) {
        const ProblemIndex idx{n, g};
        const IntegralSet s = compute_integrals(idx, IntegralMethod::bessel_moments);
        auto c = combined_integrals(idx, s);
        for (double& v : c) v /= s.C0;
        const double f = assemble_Fhat(idx, c);
        EXPECT_NEAR(f / coefficient(idx).c_value, 1.0, 1e-6) << n << " " << g;
    }
    EXPECT_NEAR(assemble_Fhat(ProblemIndex{5, 0.5}, combined_closed_forms(ProblemIndex{5, 0.5})), 0.0, 1e-14);
}

TEST(LocalSignBound, ArithmeticAndLimits) {
    const ProblemIndex idx{5, 0.5};
    const std::array<double, 4> C{1, 1, 1, 1};
    const double e = 1e-3, r = 0.1, eta = 0.1;
    const double expect = e * e - std::pow(e, 2.1) * std::pow(r, 1.9) - std::pow(e, 4.0) * std::pow(r, -3.0) -
                          std::pow(e, 5.0) * std::pow(r, 5.0) / (std::pow(e, 10.0) + std::pow(r, 10.0));
    EXPECT_NEAR(local_sign_bound(idx, e, r, C, eta), expect, 1e-20);
    double prev = 1.0;
    for (double eps : {1e-4, 1e-8, 1e-12}) {
        const double dev = std::abs(local_sign_bound(idx, eps, r, C, eta) / (eps * eps) - 1.0);
        EXPECT_LT(dev, prev);
        prev = dev;
    }
    EXPECT_LT(prev, 1e-3);
    const double a = local_sign_bound(idx, e, r, {1, 1, 1, 1}, eta);
    const double b = local_sign_bound(idx, e, r, {1, 1, 2, 1}, eta);
    EXPECT_LT(b, a);
    EXPECT_THROW(local_sign_bound(idx, -1.0, r, C, eta), DomainError);
}

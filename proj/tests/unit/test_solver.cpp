#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fyk/bubble.hpp"
#include "fyk/errors.hpp"
#include "fyk/solver.hpp"
#include "oracles.hpp"

using namespace fyk;

namespace {

double max_abs_finite(const Eigen::MatrixXd& m, int i_lo, int i_hi, int j_lo, int j_hi) {
    double v = 0.0;
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = j_lo; j <= j_hi; ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

// Interior residual of the operator on |x|^{-mu} over [0.5, 2]^2.
double power_residual(const ProblemIndex& idx, int nodes) {
    const WeightedGrid g = WeightedGrid::make(idx, 4.0, 4.0, nodes, nodes);
    const double mu = idx.mu();
    const GridFunction f = GridFunction::sample(g, [&](double r, double z) {
        const double rho = std::hypot(r, z);
        return rho > 0 ? std::pow(rho, -mu) : 0.0;
    });
    const GridFunction L = apply_operator(idx, g, f);
    const int lo = static_cast<int>(std::lround(0.5 / g.hr())), hi = static_cast<int>(std::lround(2.0 / g.hr()));
    return max_abs_finite(L.values, lo, hi, lo, hi);
}

}  // namespace

TEST(Grid, ValidatesNodeCountsAndWeight) {
    const ProblemIndex idx{3, 0.3};
    EXPECT_THROW(WeightedGrid::make(idx, 1.0, 1.0, 7, 20), DomainError);
    WeightedGrid g = WeightedGrid::make(idx, 1.0, 1.0, 9, 9);
    EXPECT_DOUBLE_EQ(g.weight_exponent, 0.4);
    g.weight_exponent = 0.1;
    EXPECT_THROW(g.validate(), DomainError);
}

TEST(SymmetricTensorParse, FormsAndTraceCheck) {
    const SymmetricTensor a = SymmetricTensor::parse("tracefree:diag(1,-1,0)");
    EXPECT_TRUE(a.trace_free);
    EXPECT_EQ(a.entries.rows(), 3);
    EXPECT_DOUBLE_EQ(a.entries(1, 1), -1.0);
    const SymmetricTensor b = SymmetricTensor::parse("1,2;2,-1");
    EXPECT_DOUBLE_EQ(b.entries(0, 1), 2.0);
    EXPECT_THROW(SymmetricTensor::parse("tracefree:diag(1,1)"), DomainError);
    EXPECT_THROW(SymmetricTensor::parse("1,2;3,4"), DomainError);
}

TEST(Operator, AnnihilatesConstants) {
    const ProblemIndex idx{4, 0.3};
    const WeightedGrid g = WeightedGrid::make(idx, 3.0, 3.0, 31, 31);
    const GridFunction L = apply_operator(idx, g, GridFunction::sample(g, [](double, double) { return 2.5; }));
    EXPECT_LE(max_abs_finite(L.values, 0, g.nr - 2, 0, g.nz - 2), 1e-12);
    EXPECT_TRUE(std::isnan(L.values(g.nr - 1, 3)));
}

TEST(Operator, ExactOnWeightedPower) {
    for (double gam : {0.2, 0.5, 0.8}) {
        const ProblemIndex idx{3, gam};
        const WeightedGrid g = WeightedGrid::make(idx, 2.0, 2.0, 21, 21);
        const GridFunction f = GridFunction::sample(g, [&](double, double z) { return std::pow(z, 2.0 * gam); });
        const GridFunction L = apply_operator(idx, g, f);
        EXPECT_LE(max_abs_finite(L.values, 0, g.nr - 2, 1, g.nz - 2), 1e-10) << gam;
        // Trace row: -xN^{1-2g} d/dxN of xN^{2g} = -2g.
        for (int i = 0; i < g.nr - 1; ++i) EXPECT_NEAR(L.values(i, 0), -2.0 * gam, 1e-12);
    }
}

TEST(Operator, PowerResidualDecreasesUnderRefinement) {
    for (auto [n, gam] : {std::pair{3, 0.5}, {4, 0.3}}) {
        const ProblemIndex idx{n, gam};
        const double a = power_residual(idx, 33), b = power_residual(idx, 65), c = power_residual(idx, 129);
        EXPECT_GT(std::log2(a / b), 1.5) << n;
        EXPECT_GT(std::log2(b / c), 1.5) << n;
    }
}

TEST(Barrier, ExamplesAndVanishingFactors) {
    const ProblemIndex idx{5, 0.3};
    const HalfSpacePoint x{{0.4, 0.1, 0.0, 0.0, 0.0}, 0.3};
    EXPECT_DOUBLE_EQ(barrier_values(idx, idx.mu(), x).power, 0.0);
    EXPECT_DOUBLE_EQ(barrier_values(idx, 0.0, x).power, 0.0);
    EXPECT_THROW(barrier_values(idx, 1.0, {{0, 0, 0, 0, 0}, 0.0}), DomainError);
}

TEST(Barrier, MatchesFiniteDifferences) {
    // -div(z^a grad f) in axisymmetric form, by central differences.
    for (auto [n, gam, mu] : {std::tuple{5, 0.3, 2.0}, {4, 0.7, 1.1}, {3, 0.5, 0.5}}) {
        const ProblemIndex idx{n, gam};
        const double a = 1.0 - 2.0 * gam;
        auto op = [&](auto f, double r, double z) {
            const double h = 1e-4;
            const double frr = (f(r + h, z) - 2 * f(r, z) + f(r - h, z)) / (h * h);
            const double fr = (f(r + h, z) - f(r - h, z)) / (2 * h);
            auto flux = [&](double zz) { return std::pow(zz, a) * (f(r, zz + 0.5 * h) - f(r, zz - 0.5 * h)) / h; };
            const double dz = (flux(z + 0.5 * h) - flux(z - 0.5 * h)) / h;
            return -(std::pow(z, a) * (frr + (n - 1.0) / r * fr) + dz);
        };
        auto power = [&](double r, double z) { return std::pow(r * r + z * z, -0.5 * mu); };
        auto weighted = [&](double r, double z) {
            return std::pow(z, 2 * gam) * std::pow(r * r + z * z, -0.5 * (mu + 2 * gam));
        };
        for (auto [r, z] : {std::pair{0.7, 0.4}, {1.5, 1.1}}) {
            std::vector<double> xb(n, 0.0);
            xb[0] = r;
            const BarrierValues b = barrier_values(idx, mu, {xb, z});
            EXPECT_NEAR(b.power, op(power, r, z), 1e-5 * std::max(1.0, std::abs(b.power)));
            EXPECT_NEAR(b.weighted, op(weighted, r, z), 1e-5 * std::max(1.0, std::abs(b.weighted)));
        }
    }
}

TEST(Extension, ConstantDataGivesConstant) {
    const ProblemIndex idx{4, 0.3};
    const WeightedGrid g = WeightedGrid::make(idx, 3.0, 3.0, 17, 17);
    SolveReport rep;
    const GridFunction u =
        solve_extension(idx, g, [](double) { return 1.0; }, [](double, double) { return 1.0; }, &rep);
    EXPECT_LE((u.values.array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_LE(rep.residual, 1e-12);
}

TEST(Extension, ScaleCovariance) {
    // W_{2,0}(2x) = 2^{-mu/2} W_{1,0}(x); the discrete problem inherits this exactly.
    const ProblemIndex idx{5, 0.7};
    const GridFunction a = solve_bubble_extension(idx, WeightedGrid::make(idx, 4.0, 4.0, 33, 33), 1.0);
    const GridFunction b = solve_bubble_extension(idx, WeightedGrid::make(idx, 8.0, 8.0, 33, 33), 2.0);
    const double f = std::pow(2.0, -0.5 * idx.mu());
    EXPECT_LE((b.values - f * a.values).cwiseAbs().maxCoeff(), 1e-9 * a.values.cwiseAbs().maxCoeff());
}

TEST(Extension, ConvergesAtSecondOrderForHalf) {
    const ConvergenceStudy st = extension_convergence(ProblemIndex{3, 0.5}, 8.0, {33, 65, 129});
    ASSERT_EQ(st.order.size(), 2u);
    for (double p : st.order) EXPECT_GE(p, 1.5);
    // Against the harmonic closed form as well.
    const ProblemIndex idx{3, 0.5};
    const WeightedGrid g = WeightedGrid::make(idx, 8.0, 8.0, 129, 129);
    const GridFunction u = solve_bubble_extension(idx, g);
    double err = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            err = std::max(err, std::abs(u.values(i, j) - oracle::half_bubble_extension(3, g.r(i), g.z(j))));
    EXPECT_NEAR(err, st.error.back(), 1e-8);
}

TEST(Extension, ConvergesForOtherOrders) {
    const ConvergenceStudy st = extension_convergence(ProblemIndex{4, 0.3}, 8.0, {33, 65, 129});
    EXPECT_LT(st.error[2], st.error[1]);
    EXPECT_LT(st.error[1], st.error[0]);
    EXPECT_GT(st.order.back(), 1.5);
}

TEST(Lambda1, MatchesBesselZeroAndScales) {
    const ProblemIndex idx{3, 0.5};
    double prev = 0.0;
    std::vector<double> scaled;
    for (double R : {0.5, 1.0, 2.0}) {
        const Lambda1Report r = rayleigh_lambda1(idx, R, 1.0 / 128.0);
        EXPECT_GT(r.lambda1, 0.0);
        if (prev > 0.0) EXPECT_LT(r.lambda1, prev);
        prev = r.lambda1;
        scaled.push_back(r.lambda1 * R * R);
        EXPECT_NEAR(r.lambda1 * R * R / oracle::lambda1_R2(3, 0.5), 1.0, 1e-3);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    EXPECT_LE((*hi - *lo) / *lo, 1e-3);
    EXPECT_NEAR(oracle::lambda1_R2(3, 0.5), 14.681970642123893, 1e-12);
    EXPECT_NEAR(lambda1_exact(idx, 1.0), 14.681970642123893, 1e-12);
}

TEST(Lambda1, OtherIndexAgainstOracle) {
    const ProblemIndex idx{5, 0.3};
    const Lambda1Report r = rayleigh_lambda1(idx, 1.0, 1.0 / 128.0);
    EXPECT_NEAR(r.lambda1 / oracle::lambda1_R2(5, 0.3), 1.0, 1e-3);
}

TEST(Green, ExponentAndConstant) {
    const ProblemIndex idx{3, 0.5};
    const GreenReport rep = green_asymptotics(idx, 1.0, 1.0 / 64.0, 512);
    EXPECT_NEAR(rep.slope, -2.0, 0.04);
    EXPECT_NEAR(rep.constant / oracle::green_const(3, 0.5), 1.0, 0.05);
    const GreenReport half = green_asymptotics(idx, 1.0, 1.0 / 64.0, 512, 32, 0.5);
    ASSERT_EQ(half.profile.size(), rep.profile.size());
    for (std::size_t k = 0; k < rep.profile.size(); ++k) EXPECT_NEAR(half.profile[k] / rep.profile[k], 0.5, 1e-12);
}

TEST(Green, RejectsInconsistentParameters) {
    const ProblemIndex idx{3, 0.5};
    EXPECT_THROW(green_asymptotics(idx, 1.0, 0.1, 512), DomainError);
    EXPECT_THROW(green_asymptotics(ProblemIndex{3, 0.6}, 1.0, 1.0 / 64.0, 512), DomainError);
}

TEST(Cutoff, SmoothStep) {
    EXPECT_DOUBLE_EQ(cutoff_chi(0.5), 1.0);
    EXPECT_DOUBLE_EQ(cutoff_chi(1.0), 1.0);
    EXPECT_DOUBLE_EQ(cutoff_chi(2.0), 0.0);
    EXPECT_DOUBLE_EQ(cutoff_chi(3.0), 0.0);
    EXPECT_NEAR(cutoff_chi(1.5), 0.5, 1e-15);
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.01) {
        EXPECT_LE(cutoff_chi(t), prev);
        prev = cutoff_chi(t);
    }
}

class Linearized : public ::testing::Test {
protected:
    const ProblemIndex idx{3, 0.25};
    const WeightedGrid grid = WeightedGrid::make(idx, 20.0, 20.0, 121, 121, TraceFacePolicy::weighted_flux);
    const SymmetricTensor pi = SymmetricTensor::parse("tracefree:diag(1,-1,0)");
};

TEST_F(Linearized, ZeroTensorGivesZero) {
    const LinearizedResult r = solve_linearized(idx, SymmetricTensor::zero(3), 0.1, grid);
    EXPECT_EQ(r.psi.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(Linearized, LinearInTheTensor) {
    const LinearizedResult a = solve_linearized(idx, pi, 0.1, grid);
    SymmetricTensor p3 = pi;
    p3.entries *= -3.0;
    const LinearizedResult b = solve_linearized(idx, p3, 0.1, grid);
    const double scale = a.psi.values.cwiseAbs().maxCoeff();
    EXPECT_GT(scale, 0.0);
    for (const HalfSpacePoint& x : {HalfSpacePoint{{0.5, 0.2, 0.1}, 0.3}, HalfSpacePoint{{1.5, 0.0, -2.0}, 0.9}})
        EXPECT_NEAR(b.value(x), -3.0 * a.value(x), 1e-10 * scale);
    SymmetricTensor q = SymmetricTensor::parse("tracefree:0,1,0;1,0,0;0,0,0");
    SymmetricTensor sum = pi;
    sum.entries += q.entries;
    const LinearizedResult c = solve_linearized(idx, q, 0.1, grid);
    const LinearizedResult d = solve_linearized(idx, sum, 0.1, grid);
    for (const HalfSpacePoint& x : {HalfSpacePoint{{0.7, 0.3, -0.2}, 0.4}, HalfSpacePoint{{2.0, -1.0, 0.5}, 1.3}})
        EXPECT_NEAR(d.value(x), a.value(x) + c.value(x), 1e-10 * scale);
}

TEST_F(Linearized, OrthogonalityPinningAndEnvelope) {
    LinearizedOptions opts;
    opts.estimate_truncation = true;
    const LinearizedResult r = solve_linearized(idx, pi, 0.1, grid, opts);
    EXPECT_LE(r.orth_gradient, 1e-3);
    EXPECT_LE(r.orth_trace, 1e-3);
    EXPECT_LE(r.pinning[0], 1e-12);
    EXPECT_LE(r.pinning[1], 1e-12);
    EXPECT_LE(r.solve.residual, 1e-8);
    EXPECT_GT(r.energy, 0.0);
    EXPECT_TRUE(std::isfinite(r.envelope_inner));
    EXPECT_LT(r.envelope_outer, 10.0 * r.envelope_inner);
    EXPECT_LT(r.truncation, 2e-2);
    EXPECT_EQ(r.z_coefficients.size(), 4u);
}

TEST_F(Linearized, RejectsTraceAndDimensionErrors) {
    SymmetricTensor bad = SymmetricTensor::parse("diag(1,0,0)");
    EXPECT_THROW(solve_linearized(idx, bad, 0.1, grid), DomainError);
    const ProblemIndex crit{3, 0.5};
    const WeightedGrid g = WeightedGrid::make(crit, 20.0, 20.0, 21, 21, TraceFacePolicy::weighted_flux);
    EXPECT_THROW(solve_linearized(crit, pi, 0.1, g), DomainError);
}

#include "fyk/hankel.hpp"

#include <cmath>
#include <numbers>

#include "fyk/errors.hpp"
#include "fyk/parallel.hpp"

namespace fyk {

namespace {

// Upper cutoff: k^{n+4} e^{-k} has dropped 40 e-folds below its peak.
double k_cutoff(int n) {
    const double p = n + 4.0;
    const double peak = p * (std::log(p) - 1.0);
    double k = p;
    while (p * std::log(k) - k > peak - 40.0) k += 0.5;
    return k;
}

constexpr double kArgCut = 700.0;  // phi(t) ~ e^{-t} underflows past this

}  // namespace

BubbleTransform::BubbleTransform(const ProblemIndex& idx, double r_max) : idx_(idx), r_max_(r_max) {
    idx_.validate();
    if (!(r_max > 0.0)) throw DomainError("BubbleTransform requires r_max > 0");
    const double kmax = k_cutoff(idx.n);
    // 16-point panels stay spectrally accurate while k r per panel <= 8.
    const double h = std::min(1.0, 8.0 / r_max);
    const double k0 = std::min(0.5, h);
    quad::Rule rule = quad::graded_to_zero(k0, 0.25, 22);
    std::vector<double> breaks;
    for (double a = k0; a < kmax; a += h) breaks.push_back(a);
    breaks.push_back(kmax);
    rule.append(quad::composite(breaks));

    const double g = idx.gamma;
    const double c = std::pow(2.0 * std::numbers::pi, -0.5 * idx.n) * what_normalization(idx);
    k_ = rule.x;
    g_.resize(k_.size());
    for (std::size_t m = 0; m < k_.size(); ++m) {
        const double k = k_[m];
        g_[m] = c * rule.w[m] * std::pow(k, idx.n - 1.0 - 2.0 * g) * bessel_kx(g, k);
    }
}

BubbleTransform::Jet BubbleTransform::at(double r, double z) const {
    const double rs[1] = {r};
    const double zs[1] = {z};
    const GridJet gj = on_grid(rs, zs, kAll);
    Jet j;
    j.value = gj.value(0, 0);
    j.dr = gj.dr(0, 0);
    j.dz = gj.dz(0, 0);
    j.dz_weighted = gj.dz_weighted(0, 0);
    j.laplace = gj.laplace(0, 0);
    j.drr = gj.drr(0, 0);
    j.quad = gj.quad(0, 0);
    j.drz = gj.drz(0, 0);
    return j;
}

BubbleTransform::GridJet BubbleTransform::on_grid(std::span<const double> rs, std::span<const double> zs,
                                                  unsigned fields) const {
    for (double r : rs)
        if (r < 0.0 || r > r_max_ * (1.0 + 1e-12)) throw DomainError("BubbleTransform: r outside [0, r_max]");
    for (double z : zs)
        if (z < 0.0) throw DomainError("BubbleTransform: xN must be >= 0");

    const int n = idx_.n;
    const double g = idx_.gamma;
    const double nu = 0.5 * n - 1.0;
    const double d1 = phi_normalization(g);
    const Eigen::Index nr = static_cast<Eigen::Index>(rs.size());
    const Eigen::Index nz = static_cast<Eigen::Index>(zs.size());
    const Eigen::Index nk = static_cast<Eigen::Index>(k_.size());

    const bool need_l1 = fields & (kDr | kDrr | kDrz);
    const bool need_l2 = fields & kQuad;
    Eigen::MatrixXd L0(nr, nk), L1, L2;
    if (need_l1) L1.resize(nr, nk);
    if (need_l2) L2.resize(nr, nk);
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t i) {
        const double r = rs[i];
        for (Eigen::Index m = 0; m < nk; ++m) {
            const double x = k_[m] * r;
            L0(i, m) = bessel_lambda(nu, x);
            if (need_l1) L1(i, m) = bessel_lambda(nu + 1.0, x);
            if (need_l2) L2(i, m) = bessel_lambda(nu + 2.0, x);
        }
    });

    // z-tables: T0 = g phi(kz), Tz = g k phi'(kz), Ta = g xN^{1-2g} k phi'(kz).
    const bool need_z = fields & (kDz | kDrz);
    const bool need_a = fields & kDzWeighted;
    Eigen::MatrixXd T0(nz, nk), Tz, Ta;
    if (need_z) Tz.resize(nz, nk);
    if (need_a) Ta.resize(nz, nk);
    parallel_for(static_cast<std::size_t>(nz), [&](std::size_t j) {
        const double z = zs[j];
        for (Eigen::Index m = 0; m < nk; ++m) {
            const double k = k_[m];
            const double t = k * z;
            if (t > kArgCut) {
                T0(j, m) = 0.0;
                if (need_z) Tz(j, m) = 0.0;
                if (need_a) Ta(j, m) = 0.0;
                continue;
            }
            T0(j, m) = g_[m] * (t == 0.0 ? 1.0 : d1 * bessel_kx(g, t));
            if (need_z || need_a) {
                // t^{1-g} K_{1-g}(t); phi'(t) = -d1 t^{2g-1} [t^{1-g} K_{1-g}(t)].
                const double kx1 = bessel_kx(1.0 - g, t);
                if (need_z) {
                    Tz(j, m) = z > 0.0 ? -g_[m] * d1 * k * std::pow(t, 2.0 * g - 1.0) * kx1
                                       : std::numeric_limits<double>::quiet_NaN();
                }
                if (need_a) Ta(j, m) = -g_[m] * d1 * std::pow(k, 2.0 * g) * kx1;
            }
        }
    });

    Eigen::ArrayXd k2(nk);
    for (Eigen::Index m = 0; m < nk; ++m) k2(m) = k_[m] * k_[m];
    Eigen::Map<const Eigen::ArrayXd> rv(rs.data(), nr);

    GridJet out;
    if (fields & kValue) out.value = L0 * T0.transpose();
    if (fields & (kLaplace | kDr | kDrr)) {
        const Eigen::MatrixXd T2 = (T0.array().rowwise() * k2.transpose()).matrix();
        if (fields & kLaplace) out.laplace = -(L0 * T2.transpose());
        if (fields & (kDr | kDrr)) {
            const Eigen::MatrixXd P1 = L1 * T2.transpose();
            if (fields & kDr) out.dr = -(P1.array().colwise() * rv).matrix();
            if (fields & kDrr) out.drr = -(L0 * T2.transpose()) + (n - 1.0) * P1;
        }
    }
    if (fields & kQuad) {
        const Eigen::MatrixXd T4 = (T0.array().rowwise() * (k2 * k2).transpose()).matrix();
        out.quad = L2 * T4.transpose();
    }
    if (fields & kDz) out.dz = L0 * Tz.transpose();
    if (fields & kDzWeighted) out.dz_weighted = L0 * Ta.transpose();
    if (fields & kDrz) {
        const Eigen::MatrixXd Tz2 = (Tz.array().rowwise() * k2.transpose()).matrix();
        out.drz = -((L1 * Tz2.transpose()).array().colwise() * rv).matrix();
    }
    return out;
}

}  // namespace fyk

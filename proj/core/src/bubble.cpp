#include "fyk/bubble.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "fyk/errors.hpp"
#include "fyk/hankel.hpp"
#include "fyk/quadrature.hpp"

namespace fyk {

namespace {

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double shifted_norm(const std::vector<double>& x, const std::vector<double>& sigma) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - (sigma.empty() ? 0.0 : sigma[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

void check_point(const ProblemIndex& idx, const std::vector<double>& xbar) {
    if (static_cast<int>(xbar.size()) != idx.n) {
        std::ostringstream os;
        os << "point has " << xbar.size() << " tangential coordinates, expected " << idx.n;
        throw DomainError(os.str());
    }
}

// Transforms are reused across calls; r_max is rounded up to a power of two.
const BubbleTransform& transform_for(const ProblemIndex& idx, double r) {
    const int level = std::max(0, static_cast<int>(std::ceil(std::log2(std::max(r, 1.0)))));
    using Key = std::tuple<int, double, int>;
    static thread_local std::map<Key, std::unique_ptr<BubbleTransform>> cache;
    auto& slot = cache[Key{idx.n, idx.gamma, level}];
    if (!slot) slot = std::make_unique<BubbleTransform>(idx, std::ldexp(1.0, level));
    return *slot;
}

double unit_trace(const ProblemIndex& idx, double r) {
    return constants(idx).alpha * std::pow(1.0 + r * r, -0.5 * idx.mu());
}

}  // namespace

void BubbleParams::validate(const ProblemIndex& idx) const {
    if (!(lambda > 0.0)) throw DomainError("bubble lambda must be positive");
    if (!sigma.empty() && static_cast<int>(sigma.size()) != idx.n)
        throw DomainError("bubble sigma must have length n");
}

double trace_bubble(const ProblemIndex& idx, const BubbleParams& p, const std::vector<double>& xbar) {
    idx.validate();
    p.validate(idx);
    check_point(idx, xbar);
    const double d = shifted_norm(xbar, p.sigma);
    return constants(idx).alpha * std::pow(p.lambda / (p.lambda * p.lambda + d * d), 0.5 * idx.mu());
}

double extension_poisson(const ProblemIndex& idx, double r, double z, double rel_tol) {
    idx.validate();
    if (z < 0.0) throw DomainError("extension requires xN >= 0");
    if (z == 0.0) return unit_trace(idx, r);
    const int n = idx.n;
    const double pk = poisson_constant(idx);
    // y = x + z u w: the kernel becomes u^{n-1} (1+u^2)^{-(n+2g)/2} in u.
    auto angular = [&](double rho) {
        if (n == 1) return unit_trace(idx, std::abs(r - rho)) + unit_trace(idx, r + rho);
        auto f = [&](double th) {
            const double d2 = r * r + rho * rho + 2.0 * r * rho * std::cos(th);
            return std::pow(std::sin(th), n - 2) * unit_trace(idx, std::sqrt(std::max(d2, 0.0)));
        };
        return sphere_area(n - 1) * quad::gauss_kronrod(f, 0.0, std::numbers::pi, 1e-13, 12).value;
    };
    auto radial = [&](double u) {
        // For u > 1 the kernel is rewritten to avoid inf * 0 at huge u.
        const double ker = u <= 1.0 ? std::pow(u, n - 1) * std::pow(1.0 + u * u, -0.5 * n - idx.gamma)
                                    : std::pow(u, -1.0 - 2.0 * idx.gamma) * std::pow(1.0 + 1.0 / (u * u), -0.5 * n - idx.gamma);
        if (ker == 0.0) return 0.0;
        return ker * angular(z * u);
    };
    // The radial integrand peaks near u ~ 1 and near u ~ r/z.
    std::vector<double> cuts{0.0, 1.0};
    if (r / z > 2.0) {
        cuts.push_back(0.5 * r / z);
        cuts.push_back(r / z);
        cuts.push_back(2.0 * r / z);
    }
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += quad::gauss_kronrod(radial, cuts[i], cuts[i + 1], rel_tol, 15).value;
    total += quad::exp_sinh(radial, cuts.back(), rel_tol).value;
    return pk * total;
}

double extension(const ProblemIndex& idx, const BubbleParams& p, const HalfSpacePoint& x, ExtensionRoute route) {
    idx.validate();
    p.validate(idx);
    check_point(idx, x.xbar);
    if (x.xN < 0.0) throw DomainError("extension requires xN >= 0");
    const double lam = p.lambda;
    const double r = shifted_norm(x.xbar, p.sigma) / lam;
    const double z = x.xN / lam;
    const double scale = std::pow(lam, -0.5 * idx.mu());
    if (z == 0.0) return scale * unit_trace(idx, r);
    if (route == ExtensionRoute::poisson_kernel) return scale * extension_poisson(idx, r, z);
    return scale * transform_for(idx, r).at(r, z).value;
}

double neumann_trace(const ProblemIndex& idx, const BubbleParams& p, const std::vector<double>& xbar, double h) {
    idx.validate();
    p.validate(idx);
    check_point(idx, xbar);
    if (!(h > 0.0)) throw DomainError("neumann_trace requires h > 0");
    const double g = idx.gamma;
    HalfSpacePoint x{xbar, 0.0};
    const double w0 = extension(idx, p, x);
    // D(z) = (W(z) - W(0)) / z^{2g} = b + c z^{2-2g} + d z^2 + ...
    std::array<double, 3> hs{}, ds{};
    for (int i = 0; i < 3; ++i) {
        hs[i] = h / (1 << i);
        x.xN = hs[i];
        ds[i] = (extension(idx, p, x) - w0) / std::pow(hs[i], 2.0 * g);
    }
    const std::array<double, 2> ex{2.0 - 2.0 * g, 2.0};
    const double b = quad::richardson(hs, ds, ex);
    const double b_coarse = quad::richardson(std::span(hs).first(2), std::span(ds).first(2), std::span(ex).first(1));
    if (!std::isfinite(b) || std::abs(b - b_coarse) > 1e-2 * std::abs(b)) {
        std::ostringstream os;
        os << "neumann_trace extrapolation unstable: " << b_coarse << " vs " << b;
        throw NumericError(os.str());
    }
    // x^{1-2g} d/dx (b x^{2g}) = 2 g b.
    return -constants(idx).kappa * 2.0 * g * b;
}

double jacobi_field(const ProblemIndex& idx, int k, const HalfSpacePoint& x) {
    idx.validate();
    check_point(idx, x.xbar);
    if (k < 0 || k > idx.n) throw DomainError("jacobi_field index must lie in [0, n]");
    constexpr double d = 1e-4;
    BubbleParams plus, minus;
    if (k == 0) {
        plus.lambda = 1.0 + d;
        minus.lambda = 1.0 - d;
        return -(extension(idx, plus, x) - extension(idx, minus, x)) / (2.0 * d);
    }
    plus.sigma.assign(idx.n, 0.0);
    minus.sigma.assign(idx.n, 0.0);
    plus.sigma[k - 1] = d;
    minus.sigma[k - 1] = -d;
    return (extension(idx, plus, x) - extension(idx, minus, x)) / (2.0 * d);
}

double jacobi_field_radial(const ProblemIndex& idx, const HalfSpacePoint& x) {
    idx.validate();
    check_point(idx, x.xbar);
    const double r = norm(x.xbar);
    const auto j = transform_for(idx, r).at(r, x.xN);
    const double zterm = x.xN > 0.0 ? x.xN * j.dz : 0.0;
    return r * j.dr + zterm + 0.5 * idx.mu() * j.value;
}

}  // namespace fyk

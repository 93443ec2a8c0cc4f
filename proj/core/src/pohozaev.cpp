#include "fyk/pohozaev.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "fyk/errors.hpp"
#include "fyk/hankel.hpp"

namespace fyk {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

void check_radius(const AxisymmetricField& field, double r) {
    if (!(r > 0.0) || r > field.max_radius * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "radius " << r << " outside the sampled domain (0, " << field.max_radius << "]";
        throw DomainError(os.str());
    }
}

// Integral over the half-sphere of radius r of xN^{1-2g} times the bracket.
double surface_integral(const ProblemIndex& idx, const AxisymmetricField& field, double r) {
    const double mu = idx.mu();
    const quad::Rule rule = hemisphere_rule(idx);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double s = rule.x[q];
        const double rb = r * std::cos(s);
        const double xn = r * std::sin(s);
        const FieldSample u = field.sample(rb, xn);
        const double ur = (rb * u.d_rbar + xn * u.d_N) / r;
        const double grad2 = u.d_rbar * u.d_rbar + u.d_N * u.d_N;
        const double bracket = 0.5 * mu * u.value * ur - 0.5 * r * grad2 + r * ur * ur;
        sum += rule.w[q] * bracket;
    }
    // dsigma = r^n dS and xN^{1-2g} = r^{1-2g} sin^{1-2g} s.
    return sphere_area(idx.n) * std::pow(r, idx.n + 1.0 - 2.0 * idx.gamma) * sum;
}

}  // namespace

AxisymmetricField bubble_field(const ProblemIndex& idx, double max_radius) {
    auto bt = std::make_shared<BubbleTransform>(idx, max_radius);
    AxisymmetricField f;
    f.max_radius = max_radius;
    f.sample = [bt](double rb, double xn) {
        const double rs[1] = {rb};
        const double zs[1] = {xn};
        const unsigned fields = BubbleTransform::kValue | BubbleTransform::kDr |
                                (xn > 0.0 ? BubbleTransform::kDz : 0u);
        const auto g = bt->on_grid(rs, zs, fields);
        FieldSample s;
        s.value = g.value(0, 0);
        s.d_rbar = g.dr(0, 0);
        s.d_N = xn > 0.0 ? g.dz(0, 0) : std::numeric_limits<double>::quiet_NaN();
        return s;
    };
    return f;
}

AxisymmetricField singular_profile_field(const ProblemIndex& idx, double c) {
    const double mu = idx.mu();
    AxisymmetricField f;
    f.max_radius = std::numeric_limits<double>::infinity();
    f.sample = [mu, c](double rb, double xn) {
        const double rho2 = rb * rb + xn * xn;
        if (!(rho2 > 0.0)) throw DomainError("singular profile is undefined at the origin");
        const double pw = std::pow(rho2, -0.5 * mu);
        // d/dx_i |x|^{-mu} = -mu x_i |x|^{-mu-2}
        const double d = -mu * c * pw / rho2;
        return FieldSample{c * (pw + 1.0), d * rb, d * xn};
    };
    return f;
}

AxisymmetricField constant_field(double c) {
    AxisymmetricField f;
    f.max_radius = std::numeric_limits<double>::infinity();
    f.sample = [c](double, double) { return FieldSample{c, 0.0, 0.0}; };
    return f;
}

quad::Rule hemisphere_rule(const ProblemIndex& idx) {
    idx.validate();
    const double a = 1.0 - 2.0 * idx.gamma;
    // Grading toward s = 0 resolves the xN^{1-2g} weight and the xN^{2g-1}
    // behaviour of normal derivatives at the equator. The innermost panel
    // carries the s^a weight exactly through Gauss-Jacobi nodes; Legendre
    // nodes there lose a few percent once gamma is close to 1.
    const double delta = 0.25 * std::pow(0.25, 24);
    const quad::Rule gj = quad::gauss_jacobi(16, 0.0, a);
    quad::Rule rule;
    for (std::size_t q = 0; q < gj.size(); ++q) {
        const double s = 0.5 * delta * (1.0 + gj.x[q]);
        rule.x.push_back(s);
        rule.w.push_back(std::pow(0.5 * delta, 1.0 + a) * gj.w[q] / std::pow(std::sin(s), a));
    }
    std::vector<double> breaks;
    for (int k = 24; k >= 0; --k) breaks.push_back(0.25 * std::pow(0.25, k));
    for (int k = 2; k <= 6; ++k) breaks.push_back(0.25 * k);
    breaks.push_back(kHalfPi);
    rule.append(quad::composite(breaks));
    for (std::size_t q = 0; q < rule.size(); ++q)
        rule.w[q] *= std::pow(std::sin(rule.x[q]), a) * std::pow(std::cos(rule.x[q]), idx.n - 1.0);
    return rule;
}

double hemisphere_weighted_area(const ProblemIndex& idx) {
    idx.validate();
    const double a = 1.0 - idx.gamma;
    const double b = 0.5 * idx.n;
    return sphere_area(idx.n) * 0.5 * std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

PohozaevReport pohozaev_P(const ProblemIndex& idx, const AxisymmetricField& field, double r, double p,
                          const RadialFunction& f, double delta) {
    idx.validate();
    check_radius(field, r);
    if (delta < 0.0) throw DomainError("delta must be nonnegative");
    PohozaevReport rep;
    rep.r = r;
    rep.surface_term = surface_integral(idx, field, r);
    const double u = field.sample(r, 0.0).value;
    const double fr = f ? f(r) : 1.0;
    const double sphere = sphere_area(idx.n) * std::pow(r, idx.n - 1.0);
    rep.boundary_term = r / (p + 1.0) * sphere * std::pow(fr, -delta) * std::pow(u, p + 1.0);
    rep.total = constants(idx).kappa * rep.surface_term + rep.boundary_term;
    return rep;
}

double pohozaev_Pprime(const ProblemIndex& idx, const AxisymmetricField& field, double r) {
    idx.validate();
    check_radius(field, r);
    return constants(idx).kappa * surface_integral(idx, field, r);
}

double singular_profile_Pprime(const ProblemIndex& idx, double c) {
    const double mu = idx.mu();
    return -constants(idx).kappa * c * c * 0.5 * mu * mu * hemisphere_weighted_area(idx);
}

double assemble_Fhat(const ProblemIndex& idx, const std::array<double, 3>& combined) {
    idx.validate();
    const double n = idx.n;
    const double f1 = (4.0 * n - 5.0) / (2.0 * n * (n - 1.0)) * combined[0];
    const double f2 = 1.0 / (2.0 * (n - 1.0)) * combined[1];
    const double f3 = 0.0;  // vanishes because the mean curvature does
    const double f0 = -(n - 2.0 * idx.gamma) / (4.0 * (n - 1.0)) * combined[2];
    return f0 - (f1 + f2 + f3);
}

int dimension_gate_min_n(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0,1)");
    if (gamma <= std::sqrt(1.0 / 19.0)) return 7;
    if (gamma <= 0.5) return 6;
    if (gamma <= std::sqrt(5.0 / 11.0)) return 5;
    return 4;
}

CoefficientReport coefficient(const ProblemIndex& idx) {
    if (idx.n < 3) throw DomainError("coefficient requires n >= 3");
    if (!(idx.gamma > 0.0 && idx.gamma < 1.0)) throw DomainError("gamma must lie in (0,1)");
    const double n = idx.n;
    const double g2 = idx.gamma * idx.gamma;
    CoefficientReport c;
    c.n = idx.n;
    c.gamma = idx.gamma;
    c.numerator = 3.0 * n * n + n * (16.0 * g2 - 22.0) + 20.0 * (1.0 - g2);
    c.c_value = c.numerator / (8.0 * n * (n - 1.0) * (1.0 - g2));
    c.positive = c.c_value > 0.0;
    c.gate = idx.n >= dimension_gate_min_n(idx.gamma);
    return c;
}

SweepStatus classify(const CoefficientReport& c, double zero_tol) {
    if (c.n <= 2.0 + 2.0 * c.gamma) return SweepStatus::out_of_domain;
    if (std::abs(c.numerator) < zero_tol) return SweepStatus::boundary;
    return c.positive == c.gate ? SweepStatus::agree : SweepStatus::mismatch;
}

std::vector<double> sweep_gammas(double step) {
    if (!(step > 0.0 && step < 1.0)) throw DomainError("gamma step must lie in (0,1)");
    const int m = static_cast<int>(std::ceil(1.0 / step - 1e-9));
    std::vector<double> g;
    for (int j = 1; j < m; ++j) g.push_back(j * step);
    return g;
}

SweepReport coefficient_sweep(int n_lo, int n_hi, double step, double zero_tol) {
    if (n_lo < 3 || n_hi < n_lo) throw DomainError("sweep needs 3 <= n_lo <= n_hi");
    SweepReport rep;
    const std::vector<double> gammas = sweep_gammas(step);
    for (int n = n_lo; n <= n_hi; ++n) {
        for (double g : gammas) {
            const CoefficientReport c = coefficient(ProblemIndex{n, g});
            switch (classify(c, zero_tol)) {
                case SweepStatus::out_of_domain: rep.out_of_domain.push_back(c); break;
                case SweepStatus::boundary: rep.boundary.push_back(c); break;
                case SweepStatus::agree: ++rep.checked; ++rep.agree; break;
                case SweepStatus::mismatch: ++rep.checked; rep.mismatches.push_back(c); break;
            }
        }
    }
    return rep;
}

double local_sign_bound(const ProblemIndex& idx, double eps, double r, const std::array<double, 4>& C,
                        double eta) {
    idx.validate();
    if (!(eps > 0.0 && r > 0.0 && eta > 0.0)) throw DomainError("eps_hat, r and eta must be positive");
    const double n = idx.n;
    const double mu = idx.mu();
    return eps * eps * C[0] - std::pow(eps, 2.0 + eta) * std::pow(r, 2.0 - eta) * C[1] -
           std::pow(eps, mu) * std::pow(r, -mu + 1.0) * C[2] -
           std::pow(eps, n) * std::pow(r, n) * C[3] / (std::pow(eps, 2.0 * n) + std::pow(r, 2.0 * n));
}

}  // namespace fyk

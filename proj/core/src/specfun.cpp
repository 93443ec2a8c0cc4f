#include "fyk/specfun.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "fyk/errors.hpp"

namespace fyk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_order(double nu) {
    if (!(nu > 0.0 && nu < 1.0)) {
        std::ostringstream os;
        os << "bessel order must lie in (0,1), got " << nu;
        throw DomainError(os.str());
    }
}

// Power series of t^nu K_nu(t): (pi / (2 sin nu pi)) [t^nu I_{-nu} - t^nu I_nu].
double kx_series(double nu, double t) {
    const double q = 0.25 * t * t;
    double a = 1.0 / std::tgamma(1.0 - nu);  // k = 0 term of t^nu I_{-nu} / 2^nu
    double b = 1.0 / std::tgamma(1.0 + nu);  // k = 0 term of t^{-nu} I_nu 2^nu
    double sa = a;
    double sb = b;
    for (int k = 1; k < 200; ++k) {
        a *= q / (k * (k - nu));
        b *= q / (k * (k + nu));
        sa += a;
        sb += b;
        if (a < 1e-18 * sa && b < 1e-18 * sb) break;
    }
    const double lead = std::pow(2.0, nu) * sa;
    const double tail = std::pow(t, 2.0 * nu) * std::pow(2.0, -nu) * sb;
    return kPi / (2.0 * std::sin(nu * kPi)) * (lead - tail);
}

// e^t K_nu(t) = int_0^inf exp(-t (cosh s - 1)) cosh(nu s) ds. The integrand
// is entire with double-exponential decay, so the plain trapezoid rule
// converges geometrically in 1/h.
double k_scaled_integral(double nu, double t) {
    constexpr double h = 0.125;
    double sum = 0.5;
    for (int j = 1; j < 4000; ++j) {
        const double s = j * h;
        const double e = t * (std::cosh(s) - 1.0) - nu * s;
        if (e > 45.0) break;
        sum += std::exp(-t * (std::cosh(s) - 1.0)) * std::cosh(nu * s);
    }
    return h * sum;
}

constexpr double kSeriesCut = 1.0;

}  // namespace

bool ProblemIndex::at_critical_dimension() const {
    return std::abs(n - 2.0 - 2.0 * gamma) < 1e-12;
}

void ProblemIndex::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        std::ostringstream os;
        os << "gamma must lie in (0,1), got " << gamma;
        throw DomainError(os.str());
    }
    if (!(n > 2.0 * gamma)) {
        std::ostringstream os;
        os << "need n > 2 gamma, got n=" << n << " gamma=" << gamma;
        throw DomainError(os.str());
    }
}

double gamma_fn(double x) {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "gamma_fn requires x > 0, got " << x;
        throw DomainError(os.str());
    }
    return std::tgamma(x);
}

double bessel_k_scaled(double nu, double t) {
    check_order(nu);
    if (!(t > 0.0)) throw DomainError("bessel_k requires t > 0");
    if (t <= kSeriesCut) return std::exp(t) * kx_series(nu, t) * std::pow(t, -nu);
    return k_scaled_integral(nu, t);
}

double bessel_k(double nu, double t) {
    check_order(nu);
    if (!(t > 0.0)) throw DomainError("bessel_k requires t > 0");
    if (t <= kSeriesCut) return kx_series(nu, t) * std::pow(t, -nu);
    return std::exp(-t) * k_scaled_integral(nu, t);
}

double bessel_kx(double nu, double t) {
    check_order(nu);
    if (t < 0.0) throw DomainError("bessel_kx requires t >= 0");
    if (t == 0.0) return std::pow(2.0, nu - 1.0) * std::tgamma(nu);
    if (t <= kSeriesCut) return kx_series(nu, t);
    if (t > 740.0) return 0.0;
    return std::pow(t, nu) * std::exp(-t) * k_scaled_integral(nu, t);
}

double bessel_lambda(double nu, double x) {
    if (nu < 0.0 || x < 0.0) throw DomainError("bessel_lambda requires nu >= 0, x >= 0");
    if (x <= 2.0) {
        const double q = -0.25 * x * x;
        double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
        double sum = term;
        for (int k = 1; k < 60; ++k) {
            term *= q / (k * (k + nu));
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return boost::math::cyl_bessel_j(nu, x) * std::pow(x, -nu);
}

double sphere_area(int n) {
    if (n < 1) throw DomainError("sphere_area requires n >= 1");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double phi_normalization(double gamma) {
    return std::pow(2.0, 1.0 - gamma) / std::tgamma(gamma);
}

double profile_phi(const ProblemIndex& idx, double t) {
    if (t < 0.0) throw DomainError("profile_phi requires t >= 0");
    if (t == 0.0) return 1.0;
    return phi_normalization(idx.gamma) * bessel_kx(idx.gamma, t);
}

// phi'(t) = -d1 t^gamma K_{1-gamma}(t) = -d1 t^{2 gamma - 1} [t^{1-gamma} K_{1-gamma}(t)].
double profile_phi_deriv(const ProblemIndex& idx, double t) {
    if (!(t > 0.0)) throw DomainError("profile_phi_deriv requires t > 0");
    const double g = idx.gamma;
    return -phi_normalization(g) * std::pow(t, 2.0 * g - 1.0) * bessel_kx(1.0 - g, t);
}

double profile_phi_tderiv(const ProblemIndex& idx, double t) {
    if (t < 0.0) throw DomainError("profile_phi_tderiv requires t >= 0");
    if (t == 0.0) return 0.0;
    const double g = idx.gamma;
    return -phi_normalization(g) * std::pow(t, 2.0 * g) * bessel_kx(1.0 - g, t);
}

double what_normalization(const ProblemIndex& idx) {
    idx.validate();
    const double mu = idx.mu();
    const double alpha = constants(idx).alpha;
    return alpha * std::pow(2.0 * kPi, 0.5 * idx.n) * std::pow(2.0, 1.0 - 0.5 * mu) /
           std::tgamma(0.5 * mu);
}

double profile_what(const ProblemIndex& idx, double t) {
    if (!(t > 0.0)) throw DomainError("profile_what requires t > 0");
    return what_normalization(idx) * std::pow(t, -2.0 * idx.gamma) * bessel_kx(idx.gamma, t);
}

double poisson_constant(const ProblemIndex& idx) {
    idx.validate();
    return std::tgamma(0.5 * idx.n + idx.gamma) /
           (std::pow(kPi, 0.5 * idx.n) * std::tgamma(idx.gamma));
}

Constants constants(const ProblemIndex& idx) {
    idx.validate();
    const double n = idx.n;
    const double g = idx.gamma;
    const double mu = n - 2.0 * g;
    Constants c;
    c.alpha = std::pow(2.0, 0.5 * mu) *
              std::pow(std::tgamma(0.5 * (n + 2.0 * g)) / std::tgamma(0.5 * mu), mu / (4.0 * g));
    c.kappa = std::pow(2.0, -(1.0 - 2.0 * g)) * std::tgamma(g) / std::tgamma(1.0 - g);
    c.green_const = std::tgamma(0.5 * mu) / (std::pow(kPi, 0.5 * n) * std::pow(2.0, 2.0 * g) * std::tgamma(g));
    c.sphere_area = sphere_area(idx.n);
    return c;
}

}  // namespace fyk

#pragma once

namespace fyk {

// The pair (n, gamma). Plain aggregate; call validate() or let operations do it.
struct ProblemIndex {
    int n = 3;
    double gamma = 0.5;

    void validate() const;  // throws DomainError unless 0 < gamma < 1 and n > 2 gamma
    double mu() const { return n - 2.0 * gamma; }
    double weight_exponent() const { return 1.0 - 2.0 * gamma; }
    // Critical exponent (n + 2 gamma)/(n - 2 gamma).
    double critical_power() const { return (n + 2.0 * gamma) / (n - 2.0 * gamma); }
    // n > 2 + 2 gamma: C0 and the nine integrals are finite.
    bool above_critical_dimension() const { return n > 2.0 + 2.0 * gamma + 1e-12; }
    // n == 2 + 2 gamma: the integrals diverge logarithmically.
    bool at_critical_dimension() const;
};

struct Constants {
    double alpha = 0;        // bubble normalization
    double kappa = 0;        // fractional Neumann constant
    double green_const = 0;  // Green's function constant g
    double sphere_area = 0;  // |S^{n-1}|
};

double gamma_fn(double x);

// K_nu(t) for nu in (0, 1), t > 0.
double bessel_k(double nu, double t);
// e^t K_nu(t); avoids underflow for large t.
double bessel_k_scaled(double nu, double t);
// t^nu K_nu(t), t >= 0; finite at 0 where it equals 2^{nu-1} Gamma(nu).
double bessel_kx(double nu, double t);

// x^{-nu} J_nu(x) for nu >= 0, x >= 0; entire in x.
double bessel_lambda(double nu, double x);

// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

// phi(t) = d1 t^gamma K_gamma(t) with phi(0) = 1.
double profile_phi(const ProblemIndex& idx, double t);
double profile_phi_deriv(const ProblemIndex& idx, double t);
// t phi'(t), finite and -> 0 as t -> 0.
double profile_phi_tderiv(const ProblemIndex& idx, double t);

double phi_normalization(double gamma);  // d1 = 2^{1-gamma}/Gamma(gamma)
// d2, the exact transform constant of the unit bubble (see README).
double what_normalization(const ProblemIndex& idx);
// \hat w(t) = d2 t^{-gamma} K_gamma(t).
double profile_what(const ProblemIndex& idx, double t);

// Poisson kernel constant p_{n,gamma} = Gamma((n+2g)/2) / (pi^{n/2} Gamma(g)).
double poisson_constant(const ProblemIndex& idx);

Constants constants(const ProblemIndex& idx);

}  // namespace fyk

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fyk/quadrature.hpp"
#include "fyk/specfun.hpp"

namespace fyk {

// Value and first derivatives of an axisymmetric field U(|x̄|, xN).
struct FieldSample {
    double value = 0;
    double d_rbar = 0;
    double d_N = 0;
};

struct AxisymmetricField {
    std::function<FieldSample(double rbar, double xN)> sample;
    double max_radius = 0;  // sample is valid for |x| <= max_radius
};

// Exact unit bubble extension W_{1,0} via the Fourier-Bessel route.
AxisymmetricField bubble_field(const ProblemIndex& idx, double max_radius);
// c (|x|^{-mu} + 1), mu = n - 2g; the blow-up limit profile.
AxisymmetricField singular_profile_field(const ProblemIndex& idx, double c);
// U = c everywhere.
AxisymmetricField constant_field(double c);

// Rule in the elevation angle s in [0, pi/2] (xN = sin s on the unit
// sphere) whose weights already carry sin^{1-2g} s cos^{n-1} s. Multiply by
// |S^{n-1}| to integrate over the upper unit half-sphere.
quad::Rule hemisphere_rule(const ProblemIndex& idx);
// |S^{n-1}| B(1-g, n/2) / 2, the weighted area of the unit half-sphere.
double hemisphere_weighted_area(const ProblemIndex& idx);

struct PohozaevReport {
    double r = 0;
    double surface_term = 0;   // half-sphere integral, without the kappa factor
    double boundary_term = 0;  // r/(p+1) times the boundary-sphere integral
    double total = 0;          // kappa * surface_term + boundary_term
};

// Radial boundary data f(|x̄|).
using RadialFunction = std::function<double(double)>;

PohozaevReport pohozaev_P(const ProblemIndex& idx, const AxisymmetricField& field, double r, double p,
                          const RadialFunction& f, double delta);
// The kappa-weighted half-sphere part alone.
double pohozaev_Pprime(const ProblemIndex& idx, const AxisymmetricField& field, double r);

// -kappa c^2 (mu^2/2) times the weighted half-sphere area: the exact value of
// pohozaev_Pprime on singular_profile_field at r = 1.
double singular_profile_Pprime(const ProblemIndex& idx, double c);

// Coefficient of eps^2 |pi|^2 kappa C0 in the energy expansion, assembled from
// the three combined integrals divided by C0.
double assemble_Fhat(const ProblemIndex& idx, const std::array<double, 3>& combined_over_c0);

struct CoefficientReport {
    int n = 0;
    double gamma = 0;
    double numerator = 0;  // 3n^2 + n(16g^2 - 22) + 20(1 - g^2)
    double c_value = 0;    // numerator / (8 n (n-1) (1 - g^2))
    bool positive = false;
    bool gate = false;     // dimension table
};

CoefficientReport coefficient(const ProblemIndex& idx);
// Smallest admissible n for the given gamma under the dimension table.
int dimension_gate_min_n(double gamma);

struct SweepReport {
    std::size_t checked = 0;
    std::size_t agree = 0;
    std::vector<CoefficientReport> mismatches;
    std::vector<CoefficientReport> boundary;      // |numerator| < zero_tol
    std::vector<CoefficientReport> out_of_domain;  // n <= 2 + 2g
    bool pass() const { return mismatches.empty(); }
};

enum class SweepStatus { agree, mismatch, boundary, out_of_domain };
SweepStatus classify(const CoefficientReport& c, double zero_tol = 1e-12);
// step, 2 step, ... strictly below 1.
std::vector<double> sweep_gammas(double step);
SweepReport coefficient_sweep(int n_lo, int n_hi, double gamma_step, double zero_tol = 1e-12);

// eps^2 C1 - eps^{2+eta} r^{2-eta} C2 - eps^{n-2g} r^{-n+2g+1} C3 - eps^n r^n C4 / (eps^{2n} + r^{2n}).
double local_sign_bound(const ProblemIndex& idx, double eps_hat, double r, const std::array<double, 4>& C,
                        double eta);

}  // namespace fyk

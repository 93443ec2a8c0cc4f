#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fyk/specfun.hpp"

namespace fyk {

// Requested orders per moment family.
struct MomentOrders {
    std::vector<int> A, Ap, App, B, Bp, Bpp;
};

// A_a = int t^{a-2g} phi^2, A'_a = int t^{a-2g} phi phi', A''_a = int t^{a-2g} phi'^2,
// B_b = int t^{n-1-b+2g} w^2, B'_b = int t^{n-1-b+2g} w w', B''_b = int t^{n-1-b+2g} w'^2.
struct MomentTable {
    ProblemIndex idx;
    std::map<int, double> A, Ap, App, B, Bp, Bpp;
};

// Leading small-t exponent of each integrand; convergence needs > -1.
double moment_exponent(const ProblemIndex& idx, const std::string& family, int order);

MomentTable compute_moments(const ProblemIndex& idx, const MomentOrders& orders, double rel_tol = 1e-12);

struct RecurrenceResidual {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double residual = 0;  // |lhs - rhs| / |lhs|
};

// The A-chain (a odd) and B-chain (b even) relations. The A'' relation is
// A_a = ((a-1)/2 + g) / ((a+1)/2 - g) A''_a.
std::vector<RecurrenceResidual> verify_recurrences(const MomentTable& table, const std::vector<int>& alphas,
                                                   const std::vector<int>& betas);

enum class IntegralMethod { bessel_moments, direct_2d };

// I_1..I_9 and C0. With critical set (n = 2 + 2g) every entry is the
// coefficient of log R in the integral over |x| < R.
struct IntegralSet {
    ProblemIndex idx;
    std::array<double, 9> I{};
    double C0 = 0;
    bool critical = false;
    double error_estimate = 0;  // absolute, from truncation and far-field modelling

    double ratio(int k) const { return I.at(k - 1) / C0; }
};

// Everything the direct route produces: the nine integrals and the three
// Z^0-weighted integrals integrated directly.
struct DirectIntegrals {
    IntegralSet set;
    std::array<double, 3> combined{};
};

IntegralSet compute_integrals(const ProblemIndex& idx, IntegralMethod method);
DirectIntegrals direct_integrals(const ProblemIndex& idx, double box = 32.0);

std::array<double, 9> integral_closed_forms(const ProblemIndex& idx);  // I_k / C0

// (int x^{3-2g} lap W Z0, int x^{2-2g} W_N Z0, int x^{1-2g} W Z0) from the nine integrals.
std::array<double, 3> combined_integrals(const ProblemIndex& idx, const IntegralSet& set);
std::array<double, 3> combined_closed_forms(const ProblemIndex& idx);  // divided by C0

}  // namespace fyk

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fyk::quad {

// Nodes and weights of a fixed rule.
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
    void append(const Rule& other);
    double apply(const std::function<double(double)>& f) const;
};

// 16-point Gauss-Legendre on [a, b].
Rule gauss_panel(double a, double b);
// Composite 16-point rule on consecutive breakpoints.
Rule composite(std::span<const double> breaks);
// Panels [lo*q^m, lo*q^{m-1}], ..., [lo*q, lo] plus [0, lo*q^m]; resolves
// algebraic endpoint behaviour at 0.
Rule graded_to_zero(double lo, double q, int levels);

// Gauss-Jacobi nodes on [-1, 1] for weight (1-x)^a (1+x)^b by Golub-Welsch.
Rule gauss_jacobi(int m, double a, double b);

// Adaptive double-exponential quadrature on [a, b] (finite) or [a, inf).
struct Result {
    double value = 0;
    double error = 0;
};
Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol);
Result exp_sinh(const std::function<double(double)>& f, double a, double rel_tol);
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     unsigned max_depth = 15);

// Richardson extrapolation of samples v[i] = v + sum_j c_j h_i^{p_j}.
// Solves the (m+1)x(m+1) Vandermonde-like system for the limit; m =
// exponents.size() must equal h.size() - 1.
double richardson(std::span<const double> h, std::span<const double> v,
                  std::span<const double> exponents);

}  // namespace fyk::quad

#pragma once

#include <vector>

#include "fyk/specfun.hpp"

namespace fyk {

// (lambda, sigma) of the bubble family; an empty sigma means the origin.
struct BubbleParams {
    double lambda = 1.0;
    std::vector<double> sigma;

    void validate(const ProblemIndex& idx) const;
};

struct HalfSpacePoint {
    std::vector<double> xbar;
    double xN = 0.0;
};

enum class ExtensionRoute { fourier_bessel, poisson_kernel };

double trace_bubble(const ProblemIndex& idx, const BubbleParams& p, const std::vector<double>& xbar);

double extension(const ProblemIndex& idx, const BubbleParams& p, const HalfSpacePoint& x,
                 ExtensionRoute route = ExtensionRoute::fourier_bessel);

// Unit bubble extension at (r, xN) through the Poisson kernel, by nested
// adaptive quadrature. Used as an independent route.
double extension_poisson(const ProblemIndex& idx, double r, double z, double rel_tol = 1e-11);

// -kappa lim xN^{1-2g} dW/dxN, by Richardson extrapolation of difference
// quotients on xN = h, h/2, h/4.
double neumann_trace(const ProblemIndex& idx, const BubbleParams& p, const std::vector<double>& xbar,
                     double h = 0.05);

// Z^0 = -dW/dlambda, Z^k = dW/dsigma_k at (1, 0), by central differences.
double jacobi_field(const ProblemIndex& idx, int k, const HalfSpacePoint& x);
// x . grad W + (mu/2) W from analytic derivatives; cross-check for Z^0.
double jacobi_field_radial(const ProblemIndex& idx, const HalfSpacePoint& x);

}  // namespace fyk

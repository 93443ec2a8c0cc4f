#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fyk/quadrature.hpp"
#include "fyk/specfun.hpp"

namespace fyk {

// Fourier-Bessel evaluation of the unit-bubble extension W_{1,0}(r, xN) and
// its derivatives. W is the inverse transform of \hat w(|xi|) phi(|xi| xN),
// reduced to a Hankel integral of order n/2 - 1. The k-rule is fixed at
// construction and resolves oscillations for r <= r_max.
class BubbleTransform {
public:
    enum Field : unsigned {
        kValue = 1u << 0,     // W
        kDr = 1u << 1,        // dW/dr
        kDz = 1u << 2,        // dW/dxN (xN > 0)
        kDzWeighted = 1u << 3,  // xN^{1-2g} dW/dxN (finite at xN = 0)
        kLaplace = 1u << 4,   // tangential Laplacian
        kDrr = 1u << 5,       // d^2W/dr^2
        kQuad = 1u << 6,      // (W_rr - W_r/r) / r^2, smooth at r = 0
        kDrz = 1u << 7,       // d^2W/dr dxN
        kAll = 0xffu,
    };

    struct Jet {
        double value = 0, dr = 0, dz = 0, dz_weighted = 0, laplace = 0, drr = 0, quad = 0, drz = 0;
    };

    // Field tables, entry (i, j) at (rs[i], zs[j]).
    struct GridJet {
        Eigen::MatrixXd value, dr, dz, dz_weighted, laplace, drr, quad, drz;
    };

    BubbleTransform(const ProblemIndex& idx, double r_max);

    Jet at(double r, double z) const;
    GridJet on_grid(std::span<const double> rs, std::span<const double> zs, unsigned fields = kAll) const;

    const ProblemIndex& index() const { return idx_; }
    std::size_t nodes() const { return k_.size(); }
    double r_max() const { return r_max_; }

private:
    ProblemIndex idx_;
    double r_max_;
    std::vector<double> k_;
    std::vector<double> g_;  // quadrature weight times the radial transform density
};

}  // namespace fyk

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fyk/bubble.hpp"
#include "fyk/grid.hpp"

namespace fyk {

// Discrete -div(xN^{1-2g} grad U) in finite-volume form. Interior nodes and
// the axis r = 0 hold the operator value. Row j = 0 holds the one-sided
// weighted flux -xN^{1-2g} dU/dxN at the trace, exact for a + b xN^{2g}.
// Nodes on the outer faces r = r_extent and xN = z_extent are NaN.
GridFunction apply_operator(const ProblemIndex& idx, const WeightedGrid& grid, const GridFunction& field);

// Exact flat values of -div(xN^{1-2g} grad .) applied to |x|^{-mu} and to
// xN^{2g} |x|^{-(mu+2g)}.
struct BarrierValues {
    double power = 0;
    double weighted = 0;
};
BarrierValues barrier_values(const ProblemIndex& idx, double mu, const HalfSpacePoint& x);

struct SolveReport {
    std::size_t unknowns = 0;
    double residual = 0;  // ||A u - b|| / ||b||
};

using TraceData = std::function<double(double r)>;
using FaceData = std::function<double(double r, double z)>;

// Weighted-harmonic extension on the grid: trace on xN = 0, outer data on
// r = r_extent and xN = z_extent.
GridFunction solve_extension(const ProblemIndex& idx, const WeightedGrid& grid, const TraceData& trace,
                             const FaceData& outer, SolveReport* report = nullptr);
// Extension of the bubble trace w_{lambda,0}, with outer data from the
// Fourier-Bessel extension.
GridFunction solve_bubble_extension(const ProblemIndex& idx, const WeightedGrid& grid, double lambda = 1.0,
                                    SolveReport* report = nullptr);

// Max-norm error of solve_bubble_extension on [0, L]^2 for each node count,
// and the observed orders between consecutive refinements.
struct ConvergenceStudy {
    std::vector<int> nodes;
    std::vector<double> h;
    std::vector<double> error;
    std::vector<double> order;
};
ConvergenceStudy extension_convergence(const ProblemIndex& idx, double L, const std::vector<int>& nodes);

// First Dirichlet eigenvalue of the weighted Rayleigh quotient on the half
// ball B_R^+ (free on the flat face), on a polar grid with radial spacing h.
struct Lambda1Report {
    double R = 0;
    double lambda1 = 0;
    int iterations = 0;
    int radial_cells = 0;
};
Lambda1Report rayleigh_lambda1(const ProblemIndex& idx, double R, double h, int angular_cells = 24);
// j_{(n-2g)/2, 1}^2 / R^2: the ground state is radial with effective
// dimension n + 2 - 2g.
double lambda1_exact(const ProblemIndex& idx, double R);

// Green function of the half ball with a mollified boundary delta of the
// given mass, fitted as G = A |x|^{-s} + C on [4 width, R/4].
struct GreenReport {
    double slope = 0;          // -s
    double constant = 0;       // A
    double offset = 0;         // C
    double loglog_slope = 0;   // plain two-parameter fit, for reference
    double loglog_constant = 0;
    double mass = 1;
    std::vector<double> radius;   // fit abscissae
    std::vector<double> profile;  // angular mean of G at those radii
};
GreenReport green_asymptotics(const ProblemIndex& idx, double R, double width, int radial_cells,
                              int angular_cells = 32, double mass = 1.0);

// Smooth cutoff: 1 on [0, 1], 0 on [2, inf).
double cutoff_chi(double t);

struct LinearizedOptions {
    bool estimate_truncation = false;  // re-solve on a 2/3-size box and compare near the origin
};

// Psi = psi(r, xN) pi_ij x_i x_j / r^2. The source is a pure degree-2
// harmonic in x̄ because pi is trace-free, so only psi is discretised.
struct LinearizedResult {
    GridFunction psi;
    SymmetricTensor pi;
    double eps_hat = 0;
    SolveReport solve;
    double energy = 0;             // weighted Dirichlet energy of Psi
    double orth_gradient = 0;      // |int xN^{1-2g} grad Psi . grad W| / (|Psi|_E |W|_E)
    double orth_trace = 0;         // |int w^p Psi| / (|w^p|_2 |Psi(., 0)|_2)
    std::array<double, 2> pinning{};  // |Psi(0)|, max_i |d_i Psi(0)| after projection
    std::vector<double> z_coefficients;  // removed multiples of Z^0..Z^n
    double envelope_inner = 0;     // sup |Psi| (1 + |x|^{mu-1}) / (eps |pi|_inf) for |x| <= L/3
    double envelope_outer = 0;     // same for |x| > L/3
    double truncation = 0;         // max change near the origin when the box shrinks (if requested)

    double value(const HalfSpacePoint& x) const;
};

LinearizedResult solve_linearized(const ProblemIndex& idx, const SymmetricTensor& pi, double eps_hat,
                                  const WeightedGrid& grid, const LinearizedOptions& opts = {});

}  // namespace fyk

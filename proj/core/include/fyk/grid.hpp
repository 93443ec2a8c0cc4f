#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fyk/specfun.hpp"

namespace fyk {

// How the xN = 0 face is closed when assembling a system.
enum class TraceFacePolicy {
    dirichlet,      // trace values are prescribed
    weighted_flux,  // xN^{1-2g} dU/dxN is prescribed (or tied to U by a Robin law)
};

// Uniform axisymmetric node grid on [0, r_extent] x [0, z_extent] in the
// variables r = |x̄| and xN. Node (i, j) sits at (i hr, j hz); row j = 0 is
// the trace face. Finite-volume cells are clipped at r = 0 and xN = 0 and
// carry the measure r^{n-1} xN^{1-2g} dr dxN (the |S^{n-1}| factor is
// left out).
struct WeightedGrid {
    int n = 3;
    double gamma = 0.5;
    double r_extent = 1.0;
    double z_extent = 1.0;
    int nr = 9;
    int nz = 9;
    double weight_exponent = 0.0;  // 1 - 2 gamma
    TraceFacePolicy trace_face = TraceFacePolicy::dirichlet;

    static WeightedGrid make(const ProblemIndex& idx, double r_extent, double z_extent, int nr, int nz,
                             TraceFacePolicy policy = TraceFacePolicy::dirichlet);
    void validate() const;

    double hr() const { return r_extent / (nr - 1); }
    double hz() const { return z_extent / (nz - 1); }
    double r(int i) const { return i * hr(); }
    double z(int j) const { return j * hz(); }
    std::vector<double> r_nodes() const;
    std::vector<double> z_nodes() const;

    // int r^{n-1} dr over the cell of node i.
    double cell_r_measure(int i) const;
    // int xN^{1-2g} dxN over the cell of node j.
    double cell_z_weight(int j) const;
    // Unweighted cell length in xN.
    double cell_z_length(int j) const;
    // r^{n-1} at the face between nodes i and i+1.
    double face_r_area(int i) const;
    // 1 / int xN^{2g-1} dxN between nodes j and j+1; exact transmissibility
    // for profiles a + b xN^{2g}.
    double face_z_conductance(int j) const;
};

// Node values, entry (i, j) at (r_i, z_j).
struct GridFunction {
    WeightedGrid grid;
    Eigen::MatrixXd values;

    static GridFunction zeros(const WeightedGrid& g);
    template <class F>
    static GridFunction sample(const WeightedGrid& g, F&& f) {
        GridFunction u = zeros(g);
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) u.values(i, j) = f(g.r(i), g.z(j));
        return u;
    }
};

// Symmetric n x n tensor, e.g. a second fundamental form.
struct SymmetricTensor {
    Eigen::MatrixXd entries;
    bool trace_free = false;

    // Checks symmetry and, if trace_free is set, |trace| <= 1e-12 |entries|.
    void validate() const;
    double norm2() const { return entries.squaredNorm(); }
    double max_abs() const { return entries.cwiseAbs().maxCoeff(); }
    static SymmetricTensor zero(int n);
    // Parses "diag(a,b,...)" or a row-major "a,b,c;d,e,f;..." matrix; a
    // "tracefree:" prefix sets trace_free.
    static SymmetricTensor parse(const std::string& text);
};

}  // namespace fyk

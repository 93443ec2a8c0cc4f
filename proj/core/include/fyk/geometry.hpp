#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fyk/bubble.hpp"
#include "fyk/grid.hpp"

namespace fyk {

// Curvature data at a boundary point in Fermi coordinates.
struct MetricJet {
    int n = 0;
    double H = 0;              // mean curvature tr(pi)/n
    Eigen::VectorXd H_grad;    // H_{,i}; tied to g_Nk by tr_ij g_Nk = 2 n H_{,k}
    SymmetricTensor pi;        // second fundamental form
    Eigen::MatrixXd Rij_h;     // boundary Ricci tensor
    std::vector<double> Riem_h;  // R_{ikjl}[h], flattened ((i n + k) n + j) n + l
    double RNN = 0;
    Eigen::MatrixXd RiNjN;
    std::vector<double> g_Nk;  // d^2 g^{ij} / dxN dx_k, flattened (i n + j) n + k

    static MetricJet zero(int n);
    double riem(int i, int k, int j, int l) const { return Riem_h[((i * n + k) * n + j) * n + l]; }
    double& riem(int i, int k, int j, int l) { return Riem_h[((i * n + k) * n + j) * n + l]; }
    double gnk(int i, int j, int k) const { return g_Nk[(i * n + j) * n + k]; }
    double pi_norm2() const { return pi.entries.squaredNorm(); }

    // Index symmetries, R_ij = R_ikjk and tr(R_iNjN) = R_NN, to tol relative.
    void validate(double tol = 1e-10) const;
};

// A jet in the conformal gauge: R_ij[h] = 0 and H = 0 at the point, and
// R_NN = (1-2n)/(2(n-1)) |pi|^2.
class NormalizedJet {
public:
    explicit NormalizedJet(MetricJet jet, double tol = 1e-12);
    const MetricJet& jet() const { return jet_; }

    // Random gauge-compliant jet: trace-free pi, Weyl-free curvature with
    // vanishing Ricci, R_iNjN adjusted to the required trace.
    static NormalizedJet random(int n, std::uint64_t seed, double scale = 1.0);

private:
    MetricJet jet_;
};

double sqrt_det_expansion(const MetricJet& jet, const HalfSpacePoint& x);
Eigen::MatrixXd inverse_metric_expansion(const MetricJet& jet, const HalfSpacePoint& x);
// 2 R_NN + |pi|^2 + R[h] - H^2, which the gauge forces to -(n/(n-1)) |pi|^2.
double gauss_codazzi_scalar(const NormalizedJet& jet);

// g^{ij}(x) on R^N_+ with its first derivatives; dg[k] = d g / dx_k for
// k < n and dg[n] = d g / dxN.
struct InverseMetricField {
    int n = 0;
    std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& g, std::vector<Eigen::MatrixXd>& dg)> eval;

    static InverseMetricField flat(int n);
    // The second-order expansion of a jet, differentiated exactly.
    static InverseMetricField from_jet(const MetricJet& jet);
};

struct CharacteristicSample {
    double s = 0;
    Eigen::VectorXd p;  // length n + 1
    double z = 0;
    Eigen::VectorXd x;  // length n + 1
};

struct CharacteristicReport {
    std::vector<CharacteristicSample> trajectory;
    double sup_p = 0;        // sup_s |p|
    double sup_pdot = 0;     // sup_s |dp/ds|
    double sup_grad_p = 0;   // sup_s of the spectral norm of d p / d xbar0 (central differences)
    double hamiltonian = 0;  // sup_s |p_N + (xN/2)(g^{ij} p_i p_j + p_N^2)|
};

// Characteristics of f_N + (xN/2)(g^{ij} f_i f_j + f_N^2) = 0 from the data
// f = -K |x̄|^2 on xN = 0, integrated on s in [0, 2r] by adaptive Dormand-Prince.
CharacteristicReport eikonal_characteristics(const ProblemIndex& idx, double K, const std::vector<double>& xbar0,
                                             double r, const InverseMetricField& metric, int samples = 65);

// Sup of the three report norms over a fixed set of starting points in
// B(0, 2r): the origin and +-r, +-2r along each axis and the diagonal.
CharacteristicReport eikonal_bundle(const ProblemIndex& idx, double K, double r, const InverseMetricField& metric);

}  // namespace fyk

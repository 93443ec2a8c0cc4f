#include "fyk/geometry.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "fyk/errors.hpp"

namespace fyk {

namespace {

double scale_of(const MetricJet& j) {
    double s = 1.0;
    for (double v : j.Riem_h) s = std::max(s, std::abs(v));
    s = std::max({s, j.pi.entries.cwiseAbs().maxCoeff(), std::abs(j.RNN)});
    return s;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError("metric jet: " + what);
}

// Kulkarni-Nomizu product (h o k)_{abcd} = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad.
void add_kn(std::vector<double>& T, int n, const Eigen::MatrixXd& h, const Eigen::MatrixXd& k, double c) {
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc)
                for (int d = 0; d < n; ++d)
                    T[((a * n + b) * n + cc) * n + d] +=
                        c * (h(a, cc) * k(b, d) + h(b, d) * k(a, cc) - h(a, d) * k(b, cc) - h(b, cc) * k(a, d));
}

Eigen::MatrixXd ricci_of(const std::vector<double>& T, int n) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) R(i, j) += T[((i * n + k) * n + j) * n + k];
    return R;
}

}  // namespace

MetricJet MetricJet::zero(int n) {
    if (n < 1) throw DomainError("jet dimension must be positive");
    MetricJet j;
    j.n = n;
    j.H_grad = Eigen::VectorXd::Zero(n);
    j.pi = SymmetricTensor::zero(n);
    j.Rij_h = Eigen::MatrixXd::Zero(n, n);
    j.Riem_h.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    j.RiNjN = Eigen::MatrixXd::Zero(n, n);
    j.g_Nk.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    return j;
}

void MetricJet::validate(double tol) const {
    require(n >= 1, "dimension must be positive");
    require(pi.entries.rows() == n && Rij_h.rows() == n && Rij_h.cols() == n && RiNjN.rows() == n &&
                RiNjN.cols() == n,
            "matrix sizes must equal n");
    require(Riem_h.size() == static_cast<std::size_t>(n) * n * n * n, "Riemann array must have n^4 entries");
    require(g_Nk.size() == static_cast<std::size_t>(n) * n * n, "g_Nk array must have n^3 entries");
    require(H_grad.size() == 0 || H_grad.size() == n, "H gradient must have n entries");
    pi.validate();
    const double t = tol * scale_of(*this);
    require((Rij_h - Rij_h.transpose()).cwiseAbs().maxCoeff() <= t, "boundary Ricci must be symmetric");
    require((RiNjN - RiNjN.transpose()).cwiseAbs().maxCoeff() <= t, "R_iNjN must be symmetric");
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    const double v = riem(i, k, j, l);
                    require(std::abs(v + riem(k, i, j, l)) <= t, "Riemann must be antisymmetric in (i,k)");
                    require(std::abs(v + riem(i, k, l, j)) <= t, "Riemann must be antisymmetric in (j,l)");
                    require(std::abs(v - riem(j, l, i, k)) <= t, "Riemann must be symmetric under pair exchange");
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) require(std::abs(gnk(i, j, k) - gnk(j, i, k)) <= t, "g_Nk must be symmetric in (i,j)");
    require((ricci_of(Riem_h, n) - Rij_h).cwiseAbs().maxCoeff() <= t, "R_ij must equal the contraction R_ikjk");
    require(std::abs(RiNjN.trace() - RNN) <= t, "trace of R_iNjN must equal R_NN");
    if (H_grad.size() == n)
        for (int k = 0; k < n; ++k) {
            double tr = 0.0;
            for (int i = 0; i < n; ++i) tr += gnk(i, i, k);
            require(std::abs(tr - 2.0 * n * H_grad(k)) <= t, "trace of g_Nk must equal 2 n dH");
        }
}

NormalizedJet::NormalizedJet(MetricJet jet, double tol) : jet_(std::move(jet)) {
    jet_.validate();
    const int n = jet_.n;
    if (n < 2) throw DomainError("normalized jets need n >= 2");
    const double p2 = jet_.pi_norm2();
    const double s = std::max(1.0, scale_of(jet_));
    if (std::abs(jet_.H) > tol * s) throw DomainError("normalized jet needs H = 0");
    if (jet_.Rij_h.cwiseAbs().maxCoeff() > tol * s) throw DomainError("normalized jet needs R_ij[h] = 0");
    const double target = (1.0 - 2.0 * n) / (2.0 * (n - 1.0)) * p2;
    if (std::abs(jet_.RNN - target) > tol * std::max(1.0, p2))
        throw DomainError("normalized jet needs R_NN = (1-2n)/(2(n-1)) |pi|^2");
}

NormalizedJet NormalizedJet::random(int n, std::uint64_t seed, double scale) {
    if (n < 2) throw DomainError("normalized jets need n >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, scale);
    auto sym = [&] {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = N01(rng);
        return Eigen::MatrixXd(0.5 * (A + A.transpose()));
    };
    MetricJet j = MetricJet::zero(n);
    Eigen::MatrixXd P = sym();
    P.diagonal().array() -= P.trace() / n;
    j.pi = SymmetricTensor{P, true};
    if (n >= 3) {
        // Algebraic curvature tensor from Kulkarni-Nomizu products, then its Weyl part.
        const Eigen::MatrixXd A = sym(), B = sym(), C = sym();
        add_kn(j.Riem_h, n, A, A, 1.0);
        add_kn(j.Riem_h, n, B, C, 1.0);
        const Eigen::MatrixXd ric = ricci_of(j.Riem_h, n);
        const double scal = ric.trace();
        Eigen::MatrixXd Pm = (ric - scal / (2.0 * (n - 1.0)) * Eigen::MatrixXd::Identity(n, n)) / (n - 2.0);
        add_kn(j.Riem_h, n, Pm, Eigen::MatrixXd::Identity(n, n), -1.0);
    }
    j.Rij_h = ricci_of(j.Riem_h, n);  // zero up to rounding
    j.RNN = (1.0 - 2.0 * n) / (2.0 * (n - 1.0)) * j.pi_norm2();
    j.RiNjN = sym();
    j.RiNjN.diagonal().array() += (j.RNN - j.RiNjN.trace()) / n;
    for (int k = 0; k < n; ++k) {
        const Eigen::MatrixXd G = sym();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) j.g_Nk[(a * n + b) * n + k] = G(a, b);
        // d_k tr(d_N g^{ij}) = 2 n H_{,k}.
        j.H_grad(k) = G.trace() / (2.0 * n);
    }
    return NormalizedJet(std::move(j), 1e-10);
}

double sqrt_det_expansion(const MetricJet& jet, const HalfSpacePoint& x) {
    const int n = jet.n;
    if (static_cast<int>(x.xbar.size()) != n) throw DomainError("point dimension does not match the jet");
    Eigen::Map<const Eigen::VectorXd> xb(x.xbar.data(), n);
    const double t = x.xN;
    double v = 1.0 - n * jet.H * t + 0.5 * (n * n * jet.H * jet.H - jet.pi_norm2() - jet.RNN) * t * t;
    if (jet.H_grad.size() == n) v -= n * jet.H_grad.dot(xb) * t;
    v -= xb.dot(jet.Rij_h * xb) / 6.0;
    return v;
}

Eigen::MatrixXd inverse_metric_expansion(const MetricJet& jet, const HalfSpacePoint& x) {
    const int n = jet.n;
    if (static_cast<int>(x.xbar.size()) != n) throw DomainError("point dimension does not match the jet");
    const double t = x.xN;
    const Eigen::MatrixXd& P = jet.pi.entries;
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n) + 2.0 * t * P + t * t * (3.0 * P * P + jet.RiNjN);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                acc += t * jet.gnk(i, j, k) * x.xbar[k];
                for (int l = 0; l < n; ++l) acc += jet.riem(i, k, j, l) * x.xbar[k] * x.xbar[l] / 3.0;
            }
            g(i, j) += acc;
        }
    return g;
}

double gauss_codazzi_scalar(const NormalizedJet& nj) {
    const MetricJet& j = nj.jet();
    return 2.0 * j.RNN + j.pi_norm2() + j.Rij_h.trace() - j.H * j.H;
}

InverseMetricField InverseMetricField::flat(int n) {
    InverseMetricField m;
    m.n = n;
    m.eval = [n](const Eigen::VectorXd&, Eigen::MatrixXd& g, std::vector<Eigen::MatrixXd>& dg) {
        g = Eigen::MatrixXd::Identity(n, n);
        dg.assign(n + 1, Eigen::MatrixXd::Zero(n, n));
    };
    return m;
}

InverseMetricField InverseMetricField::from_jet(const MetricJet& jet) {
    jet.validate();
    InverseMetricField m;
    m.n = jet.n;
    m.eval = [jet](const Eigen::VectorXd& x, Eigen::MatrixXd& g, std::vector<Eigen::MatrixXd>& dg) {
        const int n = jet.n;
        HalfSpacePoint p{std::vector<double>(x.data(), x.data() + n), x(n)};
        g = inverse_metric_expansion(jet, p);
        const double t = x(n);
        const Eigen::MatrixXd& P = jet.pi.entries;
        dg.assign(n + 1, Eigen::MatrixXd::Zero(n, n));
        for (int q = 0; q < n; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = t * jet.gnk(i, j, q);
                    for (int l = 0; l < n; ++l) acc += (jet.riem(i, q, j, l) + jet.riem(i, l, j, q)) * x(l) / 3.0;
                    dg[q](i, j) = acc;
                }
        Eigen::MatrixXd dN = 2.0 * P + 2.0 * t * (3.0 * P * P + jet.RiNjN);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) dN(i, j) += jet.gnk(i, j, k) * x(k);
        dg[n] = dN;
    };
    return m;
}

namespace {

using State = std::vector<double>;  // [p (N), z, x (N)]

struct CharacteristicSystem {
    int n;
    const InverseMetricField* metric;

    // Hamiltonian F = p_N + (xN/2)(g^{ij} p_i p_j + p_N^2) and its flow.
    void operator()(const State& y, State& dy, double) const {
        const int N = n + 1;
        Eigen::Map<const Eigen::VectorXd> p(y.data(), N);
        Eigen::Map<const Eigen::VectorXd> x(y.data() + N + 1, N);
        Eigen::MatrixXd g;
        std::vector<Eigen::MatrixXd> dg;
        metric->eval(x, g, dg);
        const Eigen::VectorXd pb = p.head(n);
        const double pN = p(n), xN = x(n);
        const double gpp = pb.dot(g * pb);
        dy.assign(y.size(), 0.0);
        for (int k = 0; k < n; ++k) dy[k] = -0.5 * xN * pb.dot(dg[k] * pb);
        dy[n] = -0.5 * (gpp + pN * pN) - 0.5 * xN * pb.dot(dg[n] * pb);
        dy[N] = xN * gpp + pN * (1.0 + xN * pN);
        const Eigen::VectorXd gp = g * pb;
        for (int k = 0; k < n; ++k) dy[N + 1 + k] = xN * gp(k);
        dy[N + 1 + n] = 1.0 + xN * pN;
    }
};

std::vector<State> integrate(const CharacteristicSystem& sys, const State& y0, const std::vector<double>& times) {
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(1e-10, 1e-10, ode::runge_kutta_dopri5<State>());
    std::vector<State> out;
    out.reserve(times.size());
    State y = y0;
    try {
        ode::integrate_times(stepper, std::cref(sys), y, times.begin(), times.end(), 1e-4 * (times.back() + 1e-300),
                             [&](const State& s, double) { out.push_back(s); });
    } catch (const std::exception& e) {
        throw NumericError(std::string("characteristic integration failed: ") + e.what());
    }
    if (out.size() != times.size()) throw NumericError("characteristic integration stopped early");
    for (const State& s : out)
        for (double v : s)
            if (!std::isfinite(v)) throw NumericError("characteristic integration produced non-finite values");
    return out;
}

State initial_state(int n, double K, const std::vector<double>& xb) {
    const int N = n + 1;
    State y(2 * N + 1, 0.0);
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) {
        y[k] = -2.0 * K * xb[k];
        y[N + 1 + k] = xb[k];
        r2 += xb[k] * xb[k];
    }
    y[N] = -K * r2;
    return y;
}

}  // namespace

CharacteristicReport eikonal_characteristics(const ProblemIndex& idx, double K, const std::vector<double>& xbar0,
                                             double r, const InverseMetricField& metric, int samples) {
    idx.validate();
    const int n = idx.n;
    const int N = n + 1;
    if (!(K > 0.0 && r > 0.0)) throw DomainError("K and r must be positive");
    if (!(r < 1.0 / (K * K))) throw DomainError("characteristics need r < K^{-2}");
    if (static_cast<int>(xbar0.size()) != n) throw DomainError("starting point must have n coordinates");
    if (metric.n != n || !metric.eval) throw DomainError("metric dimension does not match n");
    double r0 = 0.0;
    for (double v : xbar0) r0 += v * v;
    if (std::sqrt(r0) > 2.0 * r * (1.0 + 1e-12)) throw DomainError("starting point must satisfy |xbar0| <= 2r");
    if (samples < 2) throw DomainError("need at least two samples");

    std::vector<double> times(samples);
    for (int k = 0; k < samples; ++k) times[k] = 2.0 * r * k / (samples - 1);
    const CharacteristicSystem sys{n, &metric};
    const std::vector<State> base = integrate(sys, initial_state(n, K, xbar0), times);

    // Central differences in each starting coordinate.
    const double d = 1e-6 * std::max(r, 1e-3);
    std::vector<std::vector<State>> plus(n), minus(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> a = xbar0, b = xbar0;
        a[k] += d;
        b[k] -= d;
        plus[k] = integrate(sys, initial_state(n, K, a), times);
        minus[k] = integrate(sys, initial_state(n, K, b), times);
    }

    CharacteristicReport rep;
    for (int t = 0; t < samples; ++t) {
        const State& y = base[t];
        CharacteristicSample smp;
        smp.s = times[t];
        smp.p = Eigen::Map<const Eigen::VectorXd>(y.data(), N);
        smp.z = y[N];
        smp.x = Eigen::Map<const Eigen::VectorXd>(y.data() + N + 1, N);
        State dy;
        sys(y, dy, times[t]);
        Eigen::MatrixXd g;
        std::vector<Eigen::MatrixXd> dg;
        metric.eval(smp.x, g, dg);
        const Eigen::VectorXd pb = smp.p.head(n);
        const double pN = smp.p(n), xN = smp.x(n);
        const double F = pN + 0.5 * xN * (pb.dot(g * pb) + pN * pN);
        Eigen::MatrixXd J(N, n);
        for (int k = 0; k < n; ++k)
            for (int c = 0; c < N; ++c) J(c, k) = (plus[k][t][c] - minus[k][t][c]) / (2.0 * d);
        rep.sup_p = std::max(rep.sup_p, smp.p.norm());
        rep.sup_pdot = std::max(rep.sup_pdot, Eigen::Map<const Eigen::VectorXd>(dy.data(), N).norm());
        rep.sup_grad_p = std::max(rep.sup_grad_p, Eigen::JacobiSVD<Eigen::MatrixXd>(J).singularValues()(0));
        rep.hamiltonian = std::max(rep.hamiltonian, std::abs(F));
        rep.trajectory.push_back(std::move(smp));
    }
    return rep;
}

CharacteristicReport eikonal_bundle(const ProblemIndex& idx, double K, double r, const InverseMetricField& metric) {
    const int n = idx.n;
    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (double a : {-2.0 * r, -r, r, 2.0 * r}) {
            std::vector<double> v(n, 0.0);
            v[k] = a;
            starts.push_back(v);
        }
    for (double a : {-2.0 * r, 2.0 * r}) starts.emplace_back(n, a / std::sqrt(static_cast<double>(n)));
    CharacteristicReport out;
    for (const auto& x0 : starts) {
        const CharacteristicReport c = eikonal_characteristics(idx, K, x0, r, metric, 33);
        out.sup_p = std::max(out.sup_p, c.sup_p);
        out.sup_pdot = std::max(out.sup_pdot, c.sup_pdot);
        out.sup_grad_p = std::max(out.sup_grad_p, c.sup_grad_p);
        out.hamiltonian = std::max(out.hamiltonian, c.hamiltonian);
    }
    return out;
}

}  // namespace fyk

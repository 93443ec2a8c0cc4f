#include "fyk/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>
#include <boost/math/special_functions/bessel.hpp>

#include "fyk/errors.hpp"
#include "fyk/hankel.hpp"
#include "fyk/quadrature.hpp"

namespace fyk {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_grid(const ProblemIndex& idx, const WeightedGrid& g) {
    idx.validate();
    g.validate();
    if (g.n != idx.n || std::abs(g.gamma - idx.gamma) > 1e-15)
        throw DomainError("grid was built for a different (n, gamma)");
}

// Visits every face of the Cartesian grid with its transmissibility.
template <class F>
void for_each_face(const WeightedGrid& g, F&& face) {
    const double hr = g.hr();
    for (int j = 0; j < g.nz; ++j) {
        const double wz = g.cell_z_weight(j);
        for (int i = 0; i + 1 < g.nr; ++i) face(i, j, i + 1, j, g.face_r_area(i) * wz / hr);
    }
    for (int i = 0; i < g.nr; ++i) {
        const double vr = g.cell_r_measure(i);
        for (int j = 0; j + 1 < g.nz; ++j) face(i, j, i, j + 1, vr * g.face_z_conductance(j));
    }
}

// Symmetric finite-volume system on the Cartesian grid. Fixed nodes carry
// Dirichlet values; the rest are unknowns.
struct CartesianSystem {
    SpMat A;
    Eigen::VectorXd b;
    Eigen::MatrixXi map;  // unknown index or -1
    std::size_t size() const { return static_cast<std::size_t>(b.size()); }
};

CartesianSystem assemble(const WeightedGrid& g, const Eigen::Matrix<bool, -1, -1>& fixed,
                         const Eigen::MatrixXd& fixed_values, double centrifugal,
                         const std::vector<double>* robin) {
    CartesianSystem sys;
    sys.map = Eigen::MatrixXi::Constant(g.nr, g.nz, -1);
    int count = 0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            if (!fixed(i, j)) sys.map(i, j) = count++;
    sys.b = Eigen::VectorXd::Zero(count);
    Triplets t;
    t.reserve(static_cast<std::size_t>(count) * 5);
    for_each_face(g, [&](int i0, int j0, int i1, int j1, double T) {
        const int p = sys.map(i0, j0);
        const int q = sys.map(i1, j1);
        if (p >= 0) t.emplace_back(p, p, T);
        if (q >= 0) t.emplace_back(q, q, T);
        if (p >= 0 && q >= 0) {
            t.emplace_back(p, q, -T);
            t.emplace_back(q, p, -T);
        } else if (p >= 0) {
            sys.b(p) += T * fixed_values(i1, j1);
        } else if (q >= 0) {
            sys.b(q) += T * fixed_values(i0, j0);
        }
    });
    if (centrifugal != 0.0) {
        const double h = g.hr();
        for (int i = 0; i < g.nr; ++i) {
            const double lo = std::max(0.0, (i - 0.5) * h);
            const double hi = std::min(g.r_extent, (i + 0.5) * h);
            // int r^{n-3} dr over the cell
            const double m = g.n == 2 ? std::log(hi / lo) : (std::pow(hi, g.n - 2) - std::pow(lo, g.n - 2)) / (g.n - 2);
            for (int j = 0; j < g.nz; ++j)
                if (sys.map(i, j) >= 0) t.emplace_back(sys.map(i, j), sys.map(i, j), centrifugal * m * g.cell_z_weight(j));
        }
    }
    if (robin) {
        for (int i = 0; i < g.nr; ++i)
            if (sys.map(i, 0) >= 0) t.emplace_back(sys.map(i, 0), sys.map(i, 0), -(*robin)[i] * g.cell_r_measure(i));
    }
    sys.A.resize(count, count);
    sys.A.setFromTriplets(t.begin(), t.end());
    return sys;
}

Eigen::VectorXd solve_sparse(const SpMat& A, const Eigen::VectorXd& b, SolveReport* report) {
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw NumericError("sparse factorization failed");
    Eigen::VectorXd x = ldlt.solve(b);
    const double bn = b.norm();
    const double res = bn > 0.0 ? (A * x - b).norm() / bn : (A * x).norm();
    if (ldlt.info() != Eigen::Success || !std::isfinite(res) || res > 1e-8) {
        std::ostringstream os;
        os << "linear solve did not converge, relative residual " << res;
        throw NumericError(os.str());
    }
    if (report) {
        report->unknowns = static_cast<std::size_t>(b.size());
        report->residual = res;
    }
    return x;
}

void scatter(const CartesianSystem& sys, const Eigen::VectorXd& x, Eigen::MatrixXd& values) {
    for (int i = 0; i < values.rows(); ++i)
        for (int j = 0; j < values.cols(); ++j)
            if (sys.map(i, j) >= 0) values(i, j) = x(sys.map(i, j));
}

// Polar finite-volume grid on the half ball: cell centres rho_i = (i+1/2) h,
// elevation s_j = (j+1/2) hs with xN = rho sin s. Dirichlet on rho = R,
// natural conditions on the flat face and the axis.
struct PolarSystem {
    int m = 0, ns = 0;
    double h = 0, hs = 0;
    std::vector<double> rho, s, ang;  // ang_j = int sin^a cos^{n-1} over the cell
    SpMat K;
    Eigen::VectorXd M;
    int id(int i, int j) const { return i * ns + j; }
};

PolarSystem assemble_polar(const ProblemIndex& idx, double R, int m, int ns) {
    if (m < 8 || ns < 8) throw DomainError("polar grids need at least 8 cells per direction");
    PolarSystem P;
    P.m = m;
    P.ns = ns;
    P.h = R / m;
    P.hs = 0.5 * std::numbers::pi / ns;
    const double a = 1.0 - 2.0 * idx.gamma;
    const int n = idx.n;
    auto ws = [&](double s) { return std::pow(std::sin(s), a) * std::pow(std::cos(s), n - 1.0); };
    P.rho.resize(m);
    for (int i = 0; i < m; ++i) P.rho[i] = (i + 0.5) * P.h;
    P.s.resize(ns);
    P.ang.resize(ns);
    std::vector<double> cond(ns > 0 ? ns - 1 : 0);
    for (int j = 0; j < ns; ++j) {
        P.s[j] = (j + 0.5) * P.hs;
        P.ang[j] = quad::tanh_sinh(ws, j * P.hs, (j + 1) * P.hs, 1e-13).value;
    }
    for (int j = 0; j + 1 < ns; ++j)
        cond[j] = 1.0 / quad::gauss_kronrod([&](double s) { return 1.0 / ws(s); }, P.s[j], P.s[j + 1], 1e-13).value;

    const double e = n + a;  // radial measure rho^{n+a}
    auto pint = [](double p, double lo, double hi) { return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1); };
    Triplets t;
    P.M.resize(m * ns);
    for (int i = 0; i < m; ++i) {
        const double lo = i * P.h, hi = (i + 1) * P.h;
        const double mass = pint(e, lo, hi);
        const double sfac = pint(e - 2.0, lo, hi);
        for (int j = 0; j < ns; ++j) {
            const int p = P.id(i, j);
            P.M(p) = mass * P.ang[j];
            if (i + 1 < m) {
                const double T = std::pow(hi, e) / P.h * P.ang[j];
                const int q = P.id(i + 1, j);
                t.emplace_back(p, p, T);
                t.emplace_back(q, q, T);
                t.emplace_back(p, q, -T);
                t.emplace_back(q, p, -T);
            } else {
                t.emplace_back(p, p, std::pow(hi, e) / (0.5 * P.h) * P.ang[j]);
            }
            if (j + 1 < ns) {
                const double T = sfac * cond[j];
                const int q = P.id(i, j + 1);
                t.emplace_back(p, p, T);
                t.emplace_back(q, q, T);
                t.emplace_back(p, q, -T);
                t.emplace_back(q, p, -T);
            }
        }
    }
    P.K.resize(m * ns, m * ns);
    P.K.setFromTriplets(t.begin(), t.end());
    return P;
}

// Unit bubble extension and trace on scaled coordinates.
Eigen::MatrixXd bubble_values(const ProblemIndex& idx, const WeightedGrid& g, double lambda, unsigned fields,
                              BubbleTransform::GridJet* jet = nullptr) {
    std::vector<double> rs = g.r_nodes(), zs = g.z_nodes();
    for (double& r : rs) r /= lambda;
    for (double& z : zs) z /= lambda;
    const BubbleTransform bt(idx, rs.back());
    BubbleTransform::GridJet gj = bt.on_grid(rs, zs, fields | BubbleTransform::kValue);
    const double scale = std::pow(lambda, -0.5 * idx.mu());
    Eigen::MatrixXd v = scale * gj.value;
    if (jet) *jet = std::move(gj);
    return v;
}

}  // namespace

GridFunction apply_operator(const ProblemIndex& idx, const WeightedGrid& grid, const GridFunction& field) {
    check_grid(idx, grid);
    if (field.values.rows() != grid.nr || field.values.cols() != grid.nz)
        throw DomainError("field shape does not match the grid");
    const Eigen::MatrixXd& u = field.values;
    Eigen::MatrixXd net = Eigen::MatrixXd::Zero(grid.nr, grid.nz);
    for_each_face(grid, [&](int i0, int j0, int i1, int j1, double T) {
        const double f = T * (u(i1, j1) - u(i0, j0));
        net(i0, j0) += f;
        net(i1, j1) -= f;
    });
    GridFunction out = GridFunction::zeros(grid);
    for (int i = 0; i < grid.nr; ++i) {
        for (int j = 0; j < grid.nz; ++j) {
            if (i == grid.nr - 1 || j == grid.nz - 1) {
                out.values(i, j) = kNaN;
            } else if (j == 0) {
                out.values(i, j) = -grid.face_z_conductance(0) * (u(i, 1) - u(i, 0));
            } else {
                out.values(i, j) = -net(i, j) / (grid.cell_r_measure(i) * grid.cell_z_length(j));
            }
        }
    }
    return out;
}

BarrierValues barrier_values(const ProblemIndex& idx, double mu, const HalfSpacePoint& x) {
    idx.validate();
    if (mu < 0.0 || mu > idx.mu() + 1e-14) throw DomainError("barrier exponent must lie in [0, n - 2 gamma]");
    if (x.xN < 0.0) throw DomainError("xN must be nonnegative");
    double r2 = x.xN * x.xN;
    for (double c : x.xbar) r2 += c * c;
    if (!(r2 > 0.0)) throw DomainError("barrier values are undefined at the origin");
    const double g = idx.gamma;
    const double rho = std::sqrt(r2);
    const double wt = std::pow(x.xN, 1.0 - 2.0 * g);
    BarrierValues b;
    b.power = wt * mu * (idx.mu() - mu) * std::pow(rho, -(mu + 2.0));
    b.weighted = wt * (mu + 2.0 * g) * (idx.n - mu) * std::pow(rho, -(mu + 2.0)) * std::pow(x.xN / rho, 2.0 * g);
    return b;
}

GridFunction solve_extension(const ProblemIndex& idx, const WeightedGrid& grid, const TraceData& trace,
                             const FaceData& outer, SolveReport* report) {
    check_grid(idx, grid);
    if (!trace || !outer) throw DomainError("extension needs trace and outer data");
    Eigen::Matrix<bool, -1, -1> fixed = Eigen::Matrix<bool, -1, -1>::Constant(grid.nr, grid.nz, false);
    Eigen::MatrixXd vals = Eigen::MatrixXd::Zero(grid.nr, grid.nz);
    for (int i = 0; i < grid.nr; ++i) {
        fixed(i, 0) = true;
        vals(i, 0) = trace(grid.r(i));
        fixed(i, grid.nz - 1) = true;
        vals(i, grid.nz - 1) = outer(grid.r(i), grid.z_extent);
    }
    for (int j = 1; j < grid.nz - 1; ++j) {
        fixed(grid.nr - 1, j) = true;
        vals(grid.nr - 1, j) = outer(grid.r_extent, grid.z(j));
    }
    const CartesianSystem sys = assemble(grid, fixed, vals, 0.0, nullptr);
    const Eigen::VectorXd x = solve_sparse(sys.A, sys.b, report);
    GridFunction u{grid, vals};
    scatter(sys, x, u.values);
    return u;
}

GridFunction solve_bubble_extension(const ProblemIndex& idx, const WeightedGrid& grid, double lambda,
                                    SolveReport* report) {
    check_grid(idx, grid);
    if (!(lambda > 0.0)) throw DomainError("bubble lambda must be positive");
    const Eigen::MatrixXd exact = bubble_values(idx, grid, lambda, BubbleTransform::kValue);
    const double alpha = constants(idx).alpha;
    const double mu = idx.mu();
    const double hr = grid.hr(), hz = grid.hz();
    auto trace = [&](double r) { return alpha * std::pow(lambda / (lambda * lambda + r * r), 0.5 * mu); };
    // Outer data read from the exact table at the matching node.
    auto outer = [&](double r, double z) {
        return exact(static_cast<int>(std::lround(r / hr)), static_cast<int>(std::lround(z / hz)));
    };
    return solve_extension(idx, grid, trace, outer, report);
}

ConvergenceStudy extension_convergence(const ProblemIndex& idx, double L, const std::vector<int>& nodes) {
    if (nodes.size() < 2) throw DomainError("convergence study needs at least two grids");
    ConvergenceStudy st;
    for (int nn : nodes) {
        const WeightedGrid g = WeightedGrid::make(idx, L, L, nn, nn);
        const GridFunction u = solve_bubble_extension(idx, g);
        const Eigen::MatrixXd exact = bubble_values(idx, g, 1.0, BubbleTransform::kValue);
        st.nodes.push_back(nn);
        st.h.push_back(g.hr());
        st.error.push_back((u.values - exact).cwiseAbs().maxCoeff());
    }
    for (std::size_t k = 0; k + 1 < st.error.size(); ++k)
        st.order.push_back(std::log(st.error[k] / st.error[k + 1]) / std::log(st.h[k] / st.h[k + 1]));
    return st;
}

double lambda1_exact(const ProblemIndex& idx, double R) {
    idx.validate();
    if (!(R > 0.0)) throw DomainError("radius must be positive");
    const double j = boost::math::cyl_bessel_j_zero(0.5 * idx.mu(), 1);
    return j * j / (R * R);
}

Lambda1Report rayleigh_lambda1(const ProblemIndex& idx, double R, double h, int angular_cells) {
    idx.validate();
    if (!(R > 0.0) || !(h > 0.0)) throw DomainError("radius and spacing must be positive");
    const int m = static_cast<int>(std::lround(R / h));
    const PolarSystem P = assemble_polar(idx, R, m, angular_cells);
    Eigen::SimplicialLDLT<SpMat> ldlt(P.K);
    if (ldlt.info() != Eigen::Success) throw NumericError("eigen-solver factorization failed");
    Eigen::VectorXd x = Eigen::VectorXd::Ones(P.M.size());
    double lam = 0.0;
    Lambda1Report rep;
    rep.R = R;
    rep.radial_cells = m;
    for (int it = 1; it <= 1000; ++it) {
        Eigen::VectorXd y = ldlt.solve(P.M.cwiseProduct(x));
        const double mn = std::sqrt(y.dot(P.M.cwiseProduct(y)));
        if (!(mn > 0.0) || !std::isfinite(mn)) throw NumericError("inverse iteration broke down");
        y /= mn;
        const double next = y.dot(P.K * y);
        x = y;
        rep.iterations = it;
        if (it > 1 && std::abs(next - lam) <= 1e-14 * std::abs(next)) {
            lam = next;
            break;
        }
        lam = next;
        if (it == 1000) throw NumericError("inverse iteration did not converge");
    }
    if (!(lam > 0.0)) throw NumericError("nonpositive first eigenvalue");
    rep.lambda1 = lam;
    return rep;
}

GreenReport green_asymptotics(const ProblemIndex& idx, double R, double width, int radial_cells, int angular_cells,
                              double mass) {
    idx.validate();
    if (idx.n < 2.0 + 2.0 * idx.gamma) throw DomainError("Green asymptotics need n >= 2 + 2 gamma");
    if (!(R > 0.0 && width > 0.0)) throw DomainError("radius and mollifier width must be positive");
    if (!(4.0 * width < 0.25 * R)) throw DomainError("fit annulus [4 width, R/4] is empty");
    const PolarSystem P = assemble_polar(idx, R, radial_cells, angular_cells);
    if (P.h * 4.0 > width) throw DomainError("mollifier must span at least four radial cells");

    // Bump (1 - (rho/w)^2)^2 on the flat face, scaled to the requested mass.
    Eigen::VectorXd b = Eigen::VectorXd::Zero(P.M.size());
    const int n = idx.n;
    double total = 0.0;
    std::vector<double> q(P.m, 0.0);
    for (int i = 0; i < P.m; ++i) {
        const double lo = i * P.h, hi = std::min((i + 1) * P.h, width);
        if (lo >= width) break;
        const quad::Rule rule = quad::gauss_panel(lo, hi);
        q[i] = rule.apply([&](double r) {
            const double t = 1.0 - (r / width) * (r / width);
            return t * t * std::pow(r, n - 1.0);
        });
        total += q[i];
    }
    const double S = sphere_area(n);
    const double kappa = constants(idx).kappa;
    for (int i = 0; i < P.m; ++i) b(P.id(i, 0)) = q[i] * mass / (S * total) / kappa;

    Eigen::SimplicialLDLT<SpMat> ldlt(P.K);
    if (ldlt.info() != Eigen::Success) throw NumericError("Green system factorization failed");
    const Eigen::VectorXd G = ldlt.solve(b);
    const double res = (P.K * G - b).norm() / b.norm();
    if (!(res < 1e-8)) throw NumericError("Green solve residual too large");

    GreenReport rep;
    rep.mass = mass;
    double asum = 0;
    for (double a : P.ang) asum += a;
    for (int i = 0; i < P.m; ++i) {
        if (P.rho[i] < 4.0 * width || P.rho[i] > 0.25 * R) continue;
        double v = 0;
        for (int j = 0; j < P.ns; ++j) v += P.ang[j] * G(P.id(i, j));
        rep.radius.push_back(P.rho[i]);
        rep.profile.push_back(v / asum);
    }
    const std::size_t k = rep.radius.size();
    if (k < 3) throw DomainError("fit annulus holds fewer than three nodes");

    // Two-parameter log-log fit.
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t t = 0; t < k; ++t) {
            const double x = std::log(rep.radius[t]), y = std::log(rep.profile[t]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        rep.loglog_slope = slope;
        rep.loglog_constant = std::exp((sy - slope * sx) / k);
    }
    // A |x|^{-s} + C: linear least squares in (A, C) for fixed s, relative residuals.
    auto fit = [&](double s, double& A, double& C) {
        Eigen::MatrixXd X(k, 2);
        Eigen::VectorXd y(k);
        for (std::size_t t = 0; t < k; ++t) {
            const double wgt = 1.0 / rep.profile[t];
            X(t, 0) = std::pow(rep.radius[t], -s) * wgt;
            X(t, 1) = wgt;
            y(t) = 1.0;
        }
        const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
        A = c(0);
        C = c(1);
        return (X * c - y).squaredNorm();
    };
    double lo = 0.5 * idx.mu(), hi = 1.5 * idx.mu();
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double A = 0, C = 0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = fit(x1, A, C), f2 = fit(x2, A, C);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = fit(x1, A, C);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = fit(x2, A, C);
        }
    }
    const double s = 0.5 * (lo + hi);
    fit(s, A, C);
    rep.slope = -s;
    rep.constant = A;
    rep.offset = C;
    return rep;
}

double cutoff_chi(double t) {
    auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double a = f(2.0 - t);
    return a / (a + f(t - 1.0));
}

double LinearizedResult::value(const HalfSpacePoint& x) const {
    const WeightedGrid& g = psi.grid;
    const int n = static_cast<int>(pi.entries.rows());
    if (static_cast<int>(x.xbar.size()) != n) throw DomainError("point dimension does not match the tensor");
    Eigen::Map<const Eigen::VectorXd> xb(x.xbar.data(), n);
    const double r = xb.norm();
    if (r > g.r_extent || x.xN > g.z_extent || x.xN < 0.0) return 0.0;
    if (r == 0.0) return 0.0;
    const double s = pi.max_abs();
    if (s == 0.0) return 0.0;
    const double P = xb.dot(pi.entries * xb) / (r * r) / s;
    // Bilinear interpolation of psi.
    const double fr = std::min(r / g.hr(), g.nr - 1.000000001);
    const double fz = std::min(x.xN / g.hz(), g.nz - 1.000000001);
    const int i = static_cast<int>(fr), j = static_cast<int>(fz);
    const double a = fr - i, c = fz - j;
    const Eigen::MatrixXd& v = psi.values;
    const double val = (1 - a) * (1 - c) * v(i, j) + a * (1 - c) * v(i + 1, j) + (1 - a) * c * v(i, j + 1) +
                       a * c * v(i + 1, j + 1);
    return val * P;
}

LinearizedResult solve_linearized(const ProblemIndex& idx, const SymmetricTensor& pi, double eps_hat,
                                  const WeightedGrid& grid, const LinearizedOptions& opts) {
    check_grid(idx, grid);
    pi.validate();
    if (!pi.trace_free) throw DomainError("the tensor must be trace-free");
    if (pi.entries.rows() != idx.n) throw DomainError("tensor size must equal n");
    if (!(idx.n > 2.0 + 2.0 * idx.gamma)) throw DomainError("the linearized problem needs n > 2 + 2 gamma");
    if (!(eps_hat > 0.0)) throw DomainError("eps_hat must be positive");

    const int n = idx.n;
    const double g = idx.gamma;
    const double mu = idx.mu();
    const double p = (n + 2.0 * g) / (n - 2.0 * g);
    const double kappa = constants(idx).kappa;
    const double alpha = constants(idx).alpha;
    const double s = pi.max_abs();  // source scale; Psi = psi * (pi_ij w_i w_j) / s

    BubbleTransform::GridJet jet;
    const Eigen::MatrixXd W = bubble_values(idx, grid, 1.0, BubbleTransform::kQuad, &jet);

    Eigen::Matrix<bool, -1, -1> fixed = Eigen::Matrix<bool, -1, -1>::Constant(grid.nr, grid.nz, false);
    for (int j = 0; j < grid.nz; ++j) fixed(0, j) = fixed(grid.nr - 1, j) = true;
    for (int i = 0; i < grid.nr; ++i) fixed(i, grid.nz - 1) = true;
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(grid.nr, grid.nz);
    std::vector<double> robin(grid.nr);
    for (int i = 0; i < grid.nr; ++i) {
        const double w = alpha * std::pow(1.0 + grid.r(i) * grid.r(i), -0.5 * mu);
        robin[i] = p / kappa * std::pow(w, p - 1.0);
    }
    const double ell = 2.0 * n;  // l (l + n - 2) at l = 2
    CartesianSystem sys = assemble(grid, fixed, zero, ell, &robin);

    const double e1 = 3.0 - 2.0 * g;  // int xN^{2-2g} dxN over a cell
    const double hz = grid.hz();
    for (int i = 0; i < grid.nr; ++i) {
        for (int j = 0; j < grid.nz; ++j) {
            const int k = sys.map(i, j);
            if (k < 0) continue;
            const double lo = std::max(0.0, (j - 0.5) * hz), hi = std::min(grid.z_extent, (j + 0.5) * hz);
            const double zw = (std::pow(hi, e1) - std::pow(lo, e1)) / e1;
            const double r = grid.r(i), z = grid.z(j);
            const double chi = cutoff_chi(eps_hat * std::hypot(r, z));
            sys.b(k) = s * 2.0 * eps_hat * chi * r * r * jet.quad(i, j) * grid.cell_r_measure(i) * zw;
        }
    }

    LinearizedResult res;
    res.pi = pi;
    res.eps_hat = eps_hat;
    res.psi = GridFunction::zeros(grid);
    if (s > 0.0) {
        const Eigen::VectorXd x = solve_sparse(sys.A, sys.b, &res.solve);
        scatter(sys, x, res.psi.values);
    } else {
        res.solve.unknowns = sys.size();
    }
    const Eigen::MatrixXd& psi = res.psi.values;

    // Angular moments of P = pi_ij w_i w_j / s over S^{n-1}.
    const double S = sphere_area(n);
    const Eigen::MatrixXd Ph = s > 0.0 ? Eigen::MatrixXd(pi.entries / s) : Eigen::MatrixXd::Zero(n, n);
    const double mean_P = S * Ph.trace() / n;
    const double mean_P2 = S * (Ph.trace() * Ph.trace() + 2.0 * (Ph * Ph).trace()) / (n * (n + 2.0));

    // Energies and cross terms from the face sums.
    double e_psi = 0, e_w = 0, cross = 0;
    for_each_face(grid, [&](int i0, int j0, int i1, int j1, double T) {
        const double dp = psi(i1, j1) - psi(i0, j0);
        const double dw = W(i1, j1) - W(i0, j0);
        e_psi += T * dp * dp;
        e_w += T * dw * dw;
        cross += T * dp * dw;
    });
    {
        const double h = grid.hr();
        for (int i = 1; i < grid.nr; ++i) {
            const double lo = (i - 0.5) * h, hi = std::min(grid.r_extent, (i + 0.5) * h);
            const double m = (std::pow(hi, n - 2) - std::pow(lo, n - 2)) / (n - 2);
            for (int j = 0; j < grid.nz; ++j) e_psi += ell * m * grid.cell_z_weight(j) * psi(i, j) * psi(i, j);
        }
    }
    res.energy = mean_P2 * e_psi;
    const double norm_psi = std::sqrt(mean_P2 * e_psi);
    const double norm_w = std::sqrt(S * e_w);
    res.orth_gradient = norm_psi > 0.0 ? std::abs(mean_P * cross) / (norm_psi * norm_w) : 0.0;

    double tw = 0, tw2 = 0, tp2 = 0;
    for (int i = 0; i < grid.nr; ++i) {
        const double vr = grid.cell_r_measure(i);
        const double wp = std::pow(W(i, 0), p);
        tw += wp * psi(i, 0) * vr;
        tw2 += wp * wp * vr;
        tp2 += psi(i, 0) * psi(i, 0) * vr;
    }
    const double tnorm = std::sqrt(S * tw2) * std::sqrt(mean_P2 * tp2);
    res.orth_trace = tnorm > 0.0 ? std::abs(mean_P * tw) / tnorm : 0.0;

    // Pinning at the origin: Psi(0) and central differences along each axis.
    auto P_at = [&](const Eigen::VectorXd& w) { return w.dot(Ph * w); };
    const double psi0 = psi(0, 0) * (n > 0 ? P_at(Eigen::VectorXd::Unit(n, 0)) : 0.0);
    res.z_coefficients.assign(n + 1, 0.0);
    res.z_coefficients[0] = 2.0 * psi0 / (alpha * mu);
    double grad_max = 0.0;
    for (int k = 0; k < n; ++k) {
        const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, k);
        const double d = psi(1, 0) * (P_at(e) - P_at(-e)) / (2.0 * grid.hr());
        res.z_coefficients[k + 1] = d / (alpha * mu);
        grad_max = std::max(grad_max, std::abs(d));
    }
    // Z^0 lives in the l = 0 sector and Z^i in l = 1, so the coefficients
    // above are identically zero here and the projection leaves psi as is.
    res.pinning = {std::abs(psi0), grad_max};

    const double rho_P = Ph.size() ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Ph).eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    const double L3 = std::min(grid.r_extent, grid.z_extent) / 3.0;
    for (int i = 0; i < grid.nr; ++i) {
        for (int j = 0; j < grid.nz; ++j) {
            const double rr = std::hypot(grid.r(i), grid.z(j));
            const double env = s > 0.0 ? std::abs(psi(i, j)) * rho_P * (1.0 + std::pow(rr, mu - 1.0)) / (eps_hat * s) : 0.0;
            if (rr <= L3)
                res.envelope_inner = std::max(res.envelope_inner, env);
            else
                res.envelope_outer = std::max(res.envelope_outer, env);
        }
    }

    if (opts.estimate_truncation && s > 0.0) {
        const int nr2 = static_cast<int>(std::lround((grid.nr - 1) * 2.0 / 3.0)) + 1;
        const int nz2 = static_cast<int>(std::lround((grid.nz - 1) * 2.0 / 3.0)) + 1;
        const WeightedGrid g2 = WeightedGrid::make(idx, grid.hr() * (nr2 - 1), grid.hz() * (nz2 - 1), nr2, nz2,
                                                   grid.trace_face);
        const LinearizedResult small = solve_linearized(idx, pi, eps_hat, g2, {});
        double diff = 0, ref = 0;
        for (int i = 0; i < nr2; ++i)
            for (int j = 0; j < nz2; ++j) {
                if (std::hypot(grid.r(i), grid.z(j)) > 5.0) continue;
                diff = std::max(diff, std::abs(small.psi.values(i, j) - psi(i, j)));
                ref = std::max(ref, std::abs(psi(i, j)));
            }
        res.truncation = ref > 0.0 ? diff / ref : 0.0;
    }
    return res;
}

}  // namespace fyk

#include "fyk/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fyk/errors.hpp"

namespace fyk::quad {

void Rule::append(const Rule& other) {
    x.insert(x.end(), other.x.begin(), other.x.end());
    w.insert(w.end(), other.w.begin(), other.w.end());
}

double Rule::apply(const std::function<double(double)>& f) const {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
}

Rule gauss_panel(double a, double b) {
    using G = boost::math::quadrature::gauss<double, 16>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Rule r;
    r.x.reserve(16);
    r.w.reserve(16);
    // Boost stores the non-negative half of a symmetric rule.
    for (std::size_t i = xs.size(); i-- > 0;) {
        if (xs[i] == 0.0) continue;
        r.x.push_back(c - h * xs[i]);
        r.w.push_back(h * ws[i]);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        r.x.push_back(c + h * xs[i]);
        r.w.push_back(h * ws[i]);
    }
    return r;
}

Rule composite(std::span<const double> breaks) {
    Rule r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) r.append(gauss_panel(breaks[i], breaks[i + 1]));
    return r;
}

Rule graded_to_zero(double lo, double q, int levels) {
    std::vector<double> b;
    b.push_back(0.0);
    for (int k = levels; k >= 0; --k) b.push_back(lo * std::pow(q, k));
    return composite(b);
}

Rule gauss_jacobi(int m, double a, double b) {
    if (m < 1 || a <= -1.0 || b <= -1.0) throw DomainError("gauss_jacobi: invalid parameters");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const double k = i;
        const double s = 2.0 * k + a + b;
        double diag;
        if (i == 0) {
            diag = (b - a) / (a + b + 2.0);
        } else {
            diag = (b * b - a * a) / (s * (s + 2.0));
        }
        J(i, i) = diag;
        if (i + 1 < m) {
            const double k1 = k + 1.0;
            const double s1 = 2.0 * k1 + a + b;
            const double num = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b);
            const double den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            J(i, i + 1) = J(i + 1, i) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                       std::tgamma(a + b + 2.0);
    Rule r;
    for (int i = 0; i < m; ++i) {
        r.x.push_back(es.eigenvalues()(i));
        const double v = es.eigenvectors()(0, i);
        r.w.push_back(mu0 * v * v);
    }
    return r;
}

namespace {

void check(const Result& r, double rel_tol, const char* who) {
    if (!std::isfinite(r.value) || r.error > std::max(1e3 * rel_tol * std::abs(r.value), 1e-300)) {
        std::ostringstream os;
        os << who << " did not converge: value=" << r.value << " error=" << r.error;
        throw NumericError(os.str());
    }
}

// Boost reports non-finite samples and similar failures by exception.
template <class F>
double guarded(const char* who, F&& run) {
    try {
        return run();
    } catch (const std::exception& e) {
        throw NumericError(std::string(who) + ": " + e.what());
    }
}

}  // namespace

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    Result r;
    r.value = guarded("tanh_sinh", [&] { return integrator.integrate(f, a, b, rel_tol, &r.error); });
    check(r, rel_tol, "tanh_sinh");
    return r;
}

Result exp_sinh(const std::function<double(double)>& f, double a, double rel_tol) {
    static thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
    Result r;
    r.value = guarded("exp_sinh", [&] {
        return integrator.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol, &r.error);
    });
    check(r, rel_tol, "exp_sinh");
    return r;
}

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     unsigned max_depth) {
    Result r;
    r.value = guarded("gauss_kronrod", [&] {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &r.error);
    });
    return r;
}

double richardson(std::span<const double> h, std::span<const double> v, std::span<const double> exponents) {
    const std::size_t m = h.size();
    if (v.size() != m || exponents.size() + 1 != m) throw DomainError("richardson: size mismatch");
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        A(i, 0) = 1.0;
        for (std::size_t j = 0; j < exponents.size(); ++j) A(i, j + 1) = std::pow(h[i], exponents[j]);
        rhs(i) = v[i];
    }
    return A.fullPivLu().solve(rhs)(0);
}

}  // namespace fyk::quad

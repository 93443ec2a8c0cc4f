#include "fyk/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "fyk/errors.hpp"
#include "fyk/hankel.hpp"
#include "fyk/parallel.hpp"
#include "fyk/quadrature.hpp"

namespace fyk {

namespace {

constexpr double kPi = std::numbers::pi;

// tphi'(t) - 2 g phi(t) = t^{2g+1} w'(t) d1/d2.
double wprime_core(const ProblemIndex& idx, double t) {
    return profile_phi_tderiv(idx, t) - 2.0 * idx.gamma * profile_phi(idx, t);
}

// Integrand of one moment written through phi and t phi' so that no power of
// t overflows near 0.
std::function<double(double)> moment_integrand(const ProblemIndex& idx, const std::string& family, int order) {
    const double g = idx.gamma;
    const double n = idx.n;
    const double a = order;
    const double s = std::pow(what_normalization(idx) / phi_normalization(g), 2.0);
    if (family == "A")
        return [=](double t) { return std::pow(t, a - 2 * g) * std::pow(profile_phi(idx, t), 2); };
    // t phi' = -d1 t^{2g} [t^{1-g} K_{1-g}]; fold the powers before multiplying
    // so that tiny abscissae do not produce inf * 0.
    const double d1 = phi_normalization(g);
    if (family == "Ap")
        return [=](double t) { return -d1 * std::pow(t, a - 1) * profile_phi(idx, t) * bessel_kx(1 - g, t); };
    if (family == "App") {
        return [=](double t) { return d1 * d1 * std::pow(t, a + 2 * g - 2) * std::pow(bessel_kx(1 - g, t), 2); };
    }
    if (family == "B")
        return [=](double t) { return s * std::pow(t, n - 1 - a - 2 * g) * std::pow(profile_phi(idx, t), 2); };
    if (family == "Bp")
        return [=](double t) {
            return s * std::pow(t, n - 2 - a - 2 * g) * profile_phi(idx, t) * wprime_core(idx, t);
        };
    if (family == "Bpp")
        return [=](double t) { return s * std::pow(t, n - 3 - a - 2 * g) * std::pow(wprime_core(idx, t), 2); };
    throw DomainError("unknown moment family " + family);
}

double integrate_moment(const ProblemIndex& idx, const std::string& family, int order, double rel_tol) {
    const double ex = moment_exponent(idx, family, order);
    if (!(ex > -1.0 + 1e-12)) {
        std::ostringstream os;
        os << "moment " << family << "[" << order << "] diverges at t = 0 for n=" << idx.n
           << " gamma=" << idx.gamma << " (leading exponent " << ex << ")";
        throw DomainError(os.str());
    }
    auto f = moment_integrand(idx, family, order);
    // Large-t behaviour ~ t^p e^{-2t}; p bounds the polynomial factor.
    const double p = std::max(0.0, std::max<double>(order, idx.n) + 2.0);
    double T = 40.0 + p;
    for (int attempt = 0; attempt < 6; ++attempt, T *= 1.5) {
        const double partial = quad::tanh_sinh(f, 0.0, T, rel_tol).value;
        const double tail = std::abs(f(T)) / std::max(0.5, 2.0 - p / T);
        if (tail <= 1e-13 * std::abs(partial)) return partial;
    }
    throw NumericError("moment tail did not fall below tolerance: " + family + "[" + std::to_string(order) + "]");
}

// Coefficient c of c/t in a B-type integrand at the critical dimension.
double log_coefficient(const ProblemIndex& idx, const std::string& family, int order) {
    auto f = moment_integrand(idx, family, order);
    const double t = 1e-12;
    return t * f(t);
}

// Fields consumed by the direct route at one point.
struct PointFields {
    double W, Wr, Wzw, lap, Wrr;
};

// Twelve integrands without the r^{n-1} measure: I_1..I_9, then the three
// Z^0-weighted ones.
std::array<double, 12> integrands(const ProblemIndex& idx, double r, double z, const PointFields& f) {
    const double g = idx.gamma;
    const double za = std::pow(z, 1.0 - 2.0 * g);
    const double z2g = std::pow(z, 2.0 * g);
    const double z0 = r * f.Wr + z2g * f.Wzw + 0.5 * idx.mu() * f.W;
    std::array<double, 12> v{};
    v[0] = za * f.W * f.W;
    v[1] = za * r * f.W * f.Wr;
    v[2] = z * f.W * f.Wzw;
    v[3] = z * r * f.Wr * f.Wzw;
    v[4] = z * z * za * f.W * f.lap;
    v[5] = z * z * za * f.Wr * f.Wr;
    v[6] = z * z2g * f.Wzw * f.Wzw;
    v[7] = z * z * za * r * f.Wr * f.Wrr;
    v[8] = z * z * z * f.Wzw * f.lap;
    v[9] = z * z * za * f.lap * z0;
    v[10] = z * f.Wzw * z0;
    v[11] = za * f.W * z0;
    return v;
}

// Large-|x| expansion of W. The transform d2 t^{-g} K_g(t) splits into
// k^{-2g} A(k^2) + B(k^2) with A, B entire, so W is a sum of (-lap)^j applied
// to alpha |x|^{-mu} and to beta xN^{2g} |x|^{-n-2g} (the Poisson kernel),
// beta = d2 2^{-g-1} Gamma(-g) p_{n,g}. Two terms of each series are kept; the
// remainder is O(|x|^{-4}) relative.
struct FarField {
    // c xN^s r^e |x|^{-p}
    struct Term {
        double c, s, e, p;
    };
    ProblemIndex idx;
    std::vector<Term> terms;

    explicit FarField(const ProblemIndex& i) : idx(i) {
        const double g = i.gamma;
        const double n = i.n;
        const double mu = i.mu();
        const double q = n + 2 * g;
        const double alpha = constants(i).alpha;
        const double beta = what_normalization(i) * std::pow(2.0, -g - 1.0) * std::tgamma(-g) * poisson_constant(i);
        const double ca = 1.0 / (4.0 * (1.0 - g));
        const double cb = 1.0 / (4.0 * (1.0 + g));
        terms = {{alpha, 0, 0, mu},
                 {beta, 2 * g, 0, q},
                 {ca * alpha * mu * n, 0, 0, mu + 2},
                 {-ca * alpha * mu * (mu + 2), 0, 2, mu + 4},
                 {cb * beta * q * n, 2 * g, 0, q + 2},
                 {-cb * beta * q * (q + 2), 2 * g, 2, q + 4}};
    }

    PointFields at(double r, double z) const {
        const double n = idx.n;
        const double g = idx.gamma;
        const double rho2 = r * r + z * z;
        const double rho = std::sqrt(rho2);
        PointFields f{0, 0, 0, 0, 0};
        for (const auto& t : terms) {
            const double zs = std::pow(z, t.s);
            const double re = std::pow(r, t.e);
            const double rp = std::pow(rho, -t.p);
            const double base = t.c * zs * re * rp;
            f.W += base;
            // The r^{e-1}, r^{e-2} pieces carry a factor e and vanish for e = 0.
            double dr = -t.p * r * base / rho2;
            double drr = -t.p * (t.e + 1) * base / rho2 + t.p * (t.p + 2) * r * r * base / (rho2 * rho2);
            double lap = -t.p * (2 * t.e + n) * base / rho2 + t.p * (t.p + 2) * r * r * base / (rho2 * rho2);
            if (t.e != 0) {
                dr += t.e * base / r;
                drr += t.e * (t.e - 1) * base / (r * r) - t.p * t.e * base / rho2;
                lap += t.e * (t.e + n - 2) * base / (r * r);
            }
            f.Wr += dr;
            f.Wrr += drr;
            f.lap += lap;
            // xN^{1-2g} d/dxN
            double zw = -t.p * t.c * std::pow(z, t.s + 2 - 2 * g) * re * rp / rho2;
            if (t.s != 0) zw += t.s * t.c * std::pow(z, t.s - 2 * g) * re * rp;
            f.Wzw += zw;
        }
        return f;
    }
};

std::vector<double> box_breaks(double lo, double box) {
    std::vector<double> b{lo};
    for (double x = lo + 0.25; x < std::min(2.0, box) - 1e-12; x += 0.25) b.push_back(x);
    double x = 2.0;
    while (x < box - 1e-12) {
        b.push_back(x);
        x *= 1.5;
    }
    b.push_back(box);
    return b;
}

DirectIntegrals direct_regular(const ProblemIndex& idx, double box) {
    const int n = idx.n;
    const double S = sphere_area(n);

    const auto rb = box_breaks(0.0, box);
    const quad::Rule rr = quad::composite(rb);
    quad::Rule zr = quad::graded_to_zero(0.25, 0.2, 16);
    zr.append(quad::composite(box_breaks(0.25, box)));

    std::vector<double> rs = rr.x, zs = zr.x;
    rs.push_back(box);
    zs.push_back(box);
    const BubbleTransform bt(idx, box);
    const unsigned fields = BubbleTransform::kValue | BubbleTransform::kDr | BubbleTransform::kDzWeighted |
                            BubbleTransform::kLaplace | BubbleTransform::kDrr;
    const auto gj = bt.on_grid(rs, zs, fields);

    std::array<double, 12> inner{};
    const Eigen::Index nr = static_cast<Eigen::Index>(rr.size());
    const Eigen::Index nz = static_cast<Eigen::Index>(zr.size());
    for (Eigen::Index i = 0; i < nr; ++i) {
        const double r = rr.x[i];
        const double wr = rr.w[i] * std::pow(r, n - 1);
        for (Eigen::Index j = 0; j < nz; ++j) {
            const double z = zr.x[j];
            PointFields f{gj.value(i, j), gj.dr(i, j), gj.dz_weighted(i, j), gj.laplace(i, j), gj.drr(i, j)};
            const auto v = integrands(idx, r, z, f);
            for (int k = 0; k < 12; ++k) inner[k] += wr * zr.w[j] * v[k];
        }
    }

    // Far-field model on the box edges: its relative mismatch scales the error bar.
    const FarField ff(idx);
    double mismatch = 0;
    for (Eigen::Index j = 0; j < nz; ++j)
        mismatch = std::max(mismatch, std::abs(ff.at(box, zs[j]).W / gj.value(nr, j) - 1.0));
    for (Eigen::Index i = 0; i < nr; ++i)
        mismatch = std::max(mismatch, std::abs(ff.at(rs[i], box).W / gj.value(i, nz) - 1.0));

    // Exterior of the box in polar form: rho = rho_b(theta)/u, u in (0, 1].
    quad::Rule th = quad::graded_to_zero(kPi / 4, 0.25, 14);
    th.append(quad::composite(std::vector<double>{kPi / 4, 3 * kPi / 8, kPi / 2}));
    const quad::Rule ur = quad::graded_to_zero(1.0, 0.25, 14);
    std::array<double, 12> outer{};
    for (std::size_t a = 0; a < th.size(); ++a) {
        const double c = std::cos(th.x[a]);
        const double s = std::sin(th.x[a]);
        const double rho_b = box / std::max(c, s);
        for (std::size_t b = 0; b < ur.size(); ++b) {
            const double rho = rho_b / ur.x[b];
            const double jac = rho_b / (ur.x[b] * ur.x[b]) * rho;  // d rho and the polar rho
            const double r = rho * c;
            const double z = rho * s;
            const auto v = integrands(idx, r, z, ff.at(r, z));
            const double wt = th.w[a] * ur.w[b] * jac * std::pow(r, n - 1);
            for (int k = 0; k < 12; ++k) outer[k] += wt * v[k];
        }
    }

    DirectIntegrals out;
    out.set.idx = idx;
    double err = 0;
    for (int k = 0; k < 12; ++k) {
        const double total = S * (inner[k] + outer[k]);
        err = std::max(err, S * std::abs(outer[k]) * std::max(mismatch, 1e-12) * 4.0);
        if (k < 9)
            out.set.I[k] = total;
        else
            out.combined[k - 9] = total;
    }
    out.set.C0 = out.set.I[5];
    out.set.error_estimate = err;
    if (err > 1e-4 * std::abs(out.set.C0)) {
        std::ostringstream os;
        os << "direct_2d: far-field error bar " << err << " exceeds tolerance for C0=" << out.set.C0
           << " (enlarge the box)";
        throw NumericError(os.str());
    }
    return out;
}

// Critical dimension: d/dlog R of the truncated integrals, as shell integrals
// R^{n+1} |S| int f(R cos t, R sin t) cos^{n-1} t dt, extrapolated in 1/R.
DirectIntegrals direct_critical(const ProblemIndex& idx) {
    const int n = idx.n;
    const double S = sphere_area(n);
    const double g = idx.gamma;
    const std::vector<double> radii{8.0, 16.0, 32.0, 64.0, 128.0};
    const BubbleTransform bt(idx, radii.back());
    const quad::Rule th = quad::composite(std::vector<double>{0.0, kPi / 4, kPi / 2});

    std::vector<std::array<double, 12>> shells(radii.size());
    parallel_for(radii.size(), [&](std::size_t s) {
        const double R = radii[s];
        std::array<double, 12> acc{};
        for (std::size_t a = 0; a < th.size(); ++a) {
            const double r = R * std::cos(th.x[a]);
            const double z = R * std::sin(th.x[a]);
            const auto j = bt.at(r, z);
            const auto v = integrands(idx, r, z, PointFields{j.value, j.dr, j.dz_weighted, j.laplace, j.drr});
            const double wt = th.w[a] * std::pow(std::cos(th.x[a]), n - 1);
            for (int k = 0; k < 12; ++k) acc[k] += wt * v[k];
        }
        for (double& x : acc) x *= S * std::pow(R, n + 1);
        shells[s] = acc;
    });

    std::vector<double> ex{2 * g, 4 * g, 2.0, 2.0 + 2 * g, 6 * g, 4.0};
    std::sort(ex.begin(), ex.end());
    ex.erase(std::unique(ex.begin(), ex.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             ex.end());
    ex.resize(radii.size() - 1);
    std::vector<double> h;
    for (double R : radii) h.push_back(1.0 / R);

    DirectIntegrals out;
    out.set.idx = idx;
    out.set.critical = true;
    double err = 0;
    for (int k = 0; k < 12; ++k) {
        std::vector<double> v;
        for (const auto& sh : shells) v.push_back(sh[k]);
        const double lim = quad::richardson(h, v, ex);
        std::vector<double> ex_c(ex.begin(), ex.end() - 1);
        const double lim_c = quad::richardson(std::span(h).last(ex.size()), std::span(v).last(ex.size()), ex_c);
        err = std::max(err, std::abs(lim - lim_c));
        if (k < 9)
            out.set.I[k] = lim;
        else
            out.combined[k - 9] = lim;
    }
    out.set.C0 = out.set.I[5];
    out.set.error_estimate = err;
    return out;
}

}  // namespace

double moment_exponent(const ProblemIndex& idx, const std::string& family, int order) {
    const double g = idx.gamma;
    const double n = idx.n;
    if (family == "A") return order - 2 * g;
    if (family == "Ap") return order - 1.0;
    if (family == "App") return order + 2 * g - 2;
    if (family == "B") return n - 1 - order - 2 * g;
    if (family == "Bp") return n - 2 - order - 2 * g;
    if (family == "Bpp") return n - 3 - order - 2 * g;
    throw DomainError("unknown moment family " + family);
}

MomentTable compute_moments(const ProblemIndex& idx, const MomentOrders& orders, double rel_tol) {
    idx.validate();
    struct Job {
        std::string family;
        int order;
        std::map<int, double>* slot;
    };
    MomentTable t;
    t.idx = idx;
    std::vector<Job> jobs;
    for (int a : orders.A) jobs.push_back({"A", a, &t.A});
    for (int a : orders.Ap) jobs.push_back({"Ap", a, &t.Ap});
    for (int a : orders.App) jobs.push_back({"App", a, &t.App});
    for (int b : orders.B) jobs.push_back({"B", b, &t.B});
    for (int b : orders.Bp) jobs.push_back({"Bp", b, &t.Bp});
    for (int b : orders.Bpp) jobs.push_back({"Bpp", b, &t.Bpp});
    for (const auto& j : jobs) {
        if (j.order < 0) throw DomainError("moment orders must be non-negative");
        if (!(moment_exponent(idx, j.family, j.order) > -1.0 + 1e-12)) {
            std::ostringstream os;
            os << "moment " << j.family << "[" << j.order << "] diverges for n=" << idx.n
               << " gamma=" << idx.gamma;
            throw DomainError(os.str());
        }
    }
    std::vector<double> values(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        values[i] = integrate_moment(idx, jobs[i].family, jobs[i].order, rel_tol);
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) (*jobs[i].slot)[jobs[i].order] = values[i];
    return t;
}

std::vector<RecurrenceResidual> verify_recurrences(const MomentTable& t, const std::vector<int>& alphas,
                                                   const std::vector<int>& betas) {
    const double g = t.idx.gamma;
    const double n = t.idx.n;
    auto get = [](const std::map<int, double>& m, const char* fam, int k) {
        auto it = m.find(k);
        if (it == m.end()) {
            std::ostringstream os;
            os << "moment table lacks " << fam << "[" << k << "]";
            throw DomainError(os.str());
        }
        return it->second;
    };
    std::vector<RecurrenceResidual> out;
    auto push = [&](std::string name, double lhs, double rhs) {
        out.push_back({std::move(name), lhs, rhs, std::abs(lhs - rhs) / std::abs(lhs)});
    };
    for (int a : alphas) {
        if (a < 1 || a % 2 == 0) throw DomainError("A-chain orders must be odd and >= 1");
        const double A = get(t.A, "A", a);
        const double h = 0.5 * (a + 1);
        const std::string s = std::to_string(a);
        push("A[" + s + "] from A[" + std::to_string(a + 2) + "]", A,
             (a + 2.0) / (a + 1.0) / (h * h - g * g) * get(t.A, "A", a + 2));
        push("A[" + s + "] from A'[" + std::to_string(a + 1) + "]", A, -get(t.Ap, "Ap", a + 1) / (h - g));
        push("A[" + s + "] from A''[" + s + "]", A, (0.5 * (a - 1) + g) / (h - g) * get(t.App, "App", a));
    }
    for (int b : betas) {
        if (b < 2 || b % 2 == 1) throw DomainError("B-chain orders must be even and >= 2");
        const double B = get(t.B, "B", b);
        const std::string s = std::to_string(b);
        const std::string s2 = std::to_string(b - 2);
        push("B[" + s + "] from B[" + s2 + "]", B,
             4.0 * (n - b + 1) * get(t.B, "B", b - 2) / ((n - b) * (n + 2 * g - b) * (n - 2 * g - b)));
        push("B[" + s + "] from B'[" + std::to_string(b - 1) + "]", B,
             -2.0 * get(t.Bp, "Bp", b - 1) / (n + 2 * g - b));
        push("B[" + s2 + "] from B''[" + s2 + "]", get(t.B, "B", b - 2),
             (n - 2 * g - b) * get(t.Bpp, "Bpp", b - 2) / (n + 2 * g - b + 2));
    }
    return out;
}

IntegralSet compute_integrals(const ProblemIndex& idx, IntegralMethod method) {
    idx.validate();
    const bool critical = idx.at_critical_dimension();
    if (!critical && !idx.above_critical_dimension()) {
        std::ostringstream os;
        os << "the nine integrals need n >= 2 + 2 gamma, got n=" << idx.n << " gamma=" << idx.gamma;
        throw DomainError(os.str());
    }
    if (method == IntegralMethod::direct_2d) return direct_integrals(idx).set;

    MomentOrders o;
    o.A = {1, 3};
    o.Ap = {2, 4};
    o.App = {3};
    if (!critical) {
        o.B = {2};
        o.Bp = {1};
    }
    const MomentTable t = compute_moments(idx, o);
    double B2, Bp1;
    if (critical) {
        B2 = log_coefficient(idx, "B", 2);
        Bp1 = log_coefficient(idx, "Bp", 1);
    } else {
        B2 = t.B.at(2);
        Bp1 = t.Bp.at(1);
    }
    const double n = idx.n;
    const double S = sphere_area(idx.n) * std::pow(2.0 * kPi, -n);
    const double A1 = t.A.at(1), A3 = t.A.at(3), Ap2 = t.Ap.at(2), Ap4 = t.Ap.at(4), App3 = t.App.at(3);

    IntegralSet s;
    s.idx = idx;
    s.critical = critical;
    s.I[0] = S * A1 * B2;
    s.I[1] = -S * (n * A1 * B2 + A1 * Bp1 + Ap2 * B2);
    s.I[2] = S * Ap2 * B2;
    s.I[3] = -S * (n * Ap2 * B2 + Ap2 * Bp1 + App3 * B2);
    s.I[4] = -S * A3 * B2;
    s.I[5] = S * A3 * B2;
    s.I[6] = S * App3 * B2;
    s.I[7] = -S * ((n + 1) * A3 * B2 + A3 * Bp1 + Ap4 * B2);
    s.I[8] = -S * Ap4 * B2;
    s.C0 = s.I[5];
    s.error_estimate = 1e-11 * std::abs(s.C0);
    return s;
}

DirectIntegrals direct_integrals(const ProblemIndex& idx, double box) {
    idx.validate();
    if (idx.at_critical_dimension()) return direct_critical(idx);
    if (!idx.above_critical_dimension()) throw DomainError("direct integrals need n >= 2 + 2 gamma");
    return direct_regular(idx, box);
}

std::array<double, 9> integral_closed_forms(const ProblemIndex& idx) {
    const double g = idx.gamma;
    const double n = idx.n;
    return {3.0 / (2.0 * (1 - g * g)),
            -3.0 * n / (4.0 * (1 - g * g)),
            -3.0 / (2.0 * (1 + g)),
            (3.0 * n - 2.0 * (1 + g)) / (4.0 * (1 + g)),
            -1.0,
            1.0,
            (2.0 - g) / (1.0 + g),
            -n / 2.0,
            2.0 - g};
}

std::array<double, 3> combined_integrals(const ProblemIndex& idx, const IntegralSet& s) {
    const double half_mu = 0.5 * idx.mu();
    const auto& I = s.I;
    return {I[7] + (idx.n - 1.0) * I[5] + I[8] + half_mu * I[4],
            I[3] + I[6] + half_mu * I[2],
            I[1] + I[2] + half_mu * I[0]};
}

std::array<double, 3> combined_closed_forms(const ProblemIndex& idx) {
    const double g = idx.gamma;
    return {1.0, 3.0 / (2.0 * (1.0 + g)), -3.0 / (2.0 * (1.0 - g * g))};
}

}  // namespace fyk

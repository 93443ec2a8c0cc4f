#include "fyk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fyk/bubble.hpp"
#include "fyk/errors.hpp"
#include "fyk/moments.hpp"
#include "fyk/parallel.hpp"
#include "fyk/pohozaev.hpp"
#include "fyk/solver.hpp"
#include "fyk/specfun.hpp"

namespace fyk::cli {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match table " + name);
    rows.push_back(std::move(row));
}

std::string Table::slug() const {
    std::string s;
    for (char c : name) s += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
    return s;
}

namespace {

std::string format_cell(const Cell& c) {
    struct V {
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(double v) const {
            if (std::isnan(v)) return "nan";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.15g", v);
            return buf;
        }
    };
    return std::visit(V{}, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    struct V {
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return nullptr;
            return v;
        }
    };
    return std::visit(V{}, c);
}

}  // namespace

std::string to_csv(const Table& t) {
    std::ostringstream os;
    os << "# table: " << t.name << '\n';
    for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
        os << '\n';
    }
    return os.str();
}

std::string to_json(const std::string& command, const std::vector<Table>& tables, bool passed, int indent) {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["status"] = passed ? "pass" : "tolerance_breach";
    doc["tables"] = nlohmann::ordered_json::array();
    for (const Table& t : tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const Cell& c : row) jr.push_back(cell_json(c));
            jt["rows"].push_back(std::move(jr));
        }
        doc["tables"].push_back(std::move(jt));
    }
    return doc.dump(indent);
}

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Everything the parser fills in; flags override config-file values.
struct RunConfig {
    std::optional<int> n;
    std::optional<double> gamma;
    std::vector<std::string> index_list;
    double tol = kUnset;
    std::string out_dir;
    std::string format = "csv";

    std::string method = "bessel_moments";
    std::string n_range = "3:30";
    double gamma_step = 1e-3;
    double zero_tol = 1e-12;
    std::vector<double> r_list{0.5, 1.0, 2.0};
    double c1 = 1.0;
    std::vector<int> nodes{33, 65, 129};
    double extent = 8.0;
    double radius = 1.0;
    double width = 1.0 / 64.0;
    int cells = 512;
    int angular = 32;
    double mass = 1.0;
    std::vector<double> radii{0.5, 1.0, 2.0};
    double spacing = 1.0 / 128.0;
    std::string pi;
    double eps_hat = 0.1;
    double lin_extent = 30.0;
    int lin_nodes = 241;
    bool truncation = true;

    double tol_or(double fallback) const { return std::isnan(tol) ? fallback : tol; }
    void validate() const {
        if (!std::isnan(tol) && !(tol > 0.0)) throw UsageError("--tol must be positive");
        if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    }
};

ProblemIndex make_index(int n, double g) {
    ProblemIndex idx{n, g};
    idx.validate();
    return idx;
}

std::vector<ProblemIndex> indices(const RunConfig& cfg) {
    std::vector<ProblemIndex> out;
    for (const std::string& item : cfg.index_list) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("--index entries look like n:gamma, got " + item);
        try {
            out.push_back(make_index(std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))));
        } catch (const std::invalid_argument&) {
            throw UsageError("cannot parse index " + item);
        }
    }
    if (cfg.n || cfg.gamma) {
        if (!cfg.n || !cfg.gamma) throw UsageError("--n and --gamma must be given together");
        out.push_back(make_index(*cfg.n, *cfg.gamma));
    }
    if (out.empty()) throw UsageError("no problem index: pass --n and --gamma or --index n:gamma");
    return out;
}

ProblemIndex single_index(const RunConfig& cfg) {
    const auto all = indices(cfg);
    if (all.size() != 1) throw UsageError("this command takes exactly one problem index");
    return all.front();
}

struct Outcome {
    std::vector<Table> tables;
    bool passed = true;
};

Table constants_table() {
    return Table{"constants", {"n", "gamma", "alpha", "kappa", "green_const", "sphere_area"}, false};
}

Outcome cmd_constants(const RunConfig& cfg) {
    Outcome o;
    Table t = constants_table();
    for (const ProblemIndex& idx : indices(cfg)) {
        const Constants c = constants(idx);
        t.add({static_cast<long long>(idx.n), idx.gamma, c.alpha, c.kappa, c.green_const, c.sphere_area});
    }
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_integrals(const RunConfig& cfg) {
    std::vector<IntegralMethod> methods;
    if (cfg.method == "bessel_moments" || cfg.method == "both") methods.push_back(IntegralMethod::bessel_moments);
    if (cfg.method == "direct_2d" || cfg.method == "both") methods.push_back(IntegralMethod::direct_2d);
    if (methods.empty()) throw UsageError("--method must be bessel_moments, direct_2d or both");
    const std::vector<ProblemIndex> idxs = indices(cfg);
    for (const ProblemIndex& idx : idxs)
        if (!(idx.n >= 2.0 + 2.0 * idx.gamma)) throw UsageError("integrals need n >= 2 + 2 gamma");

    struct Job {
        ProblemIndex idx;
        IntegralMethod method;
        IntegralSet set;
    };
    std::vector<Job> jobs;
    for (const ProblemIndex& idx : idxs)
        for (IntegralMethod m : methods) jobs.push_back({idx, m, {}});
    parallel_for(jobs.size(), [&](std::size_t k) { jobs[k].set = compute_integrals(jobs[k].idx, jobs[k].method); });

    Outcome o;
    Table ratios{"integral ratios",
                 {"n", "gamma", "method", "k", "computed_ratio", "closed_form", "abs_residual", "critical", "pass"}};
    Table comb{"combined ratios", {"n", "gamma", "method", "j", "computed_ratio", "closed_form", "abs_residual", "pass"}};
    for (const Job& j : jobs) {
        const std::string mname = j.method == IntegralMethod::bessel_moments ? "bessel_moments" : "direct_2d";
        const double tol = cfg.tol_or(j.method == IntegralMethod::bessel_moments ? 1e-6 : 1e-4);
        const auto closed = integral_closed_forms(j.idx);
        for (int k = 1; k <= 9; ++k) {
            const double v = j.set.ratio(k), e = closed[k - 1];
            const double res = std::abs(v - e);
            const bool ok = res <= tol * std::max(1.0, std::abs(e));
            o.passed = o.passed && ok;
            ratios.add({static_cast<long long>(j.idx.n), j.idx.gamma, mname, static_cast<long long>(k), v, e, res,
                        j.set.critical, ok});
        }
        const auto c = combined_integrals(j.idx, j.set);
        const auto ce = combined_closed_forms(j.idx);
        for (int k = 0; k < 3; ++k) {
            const double v = c[k] / j.set.C0;
            const double res = std::abs(v - ce[k]);
            const bool ok = res <= tol * std::max(1.0, std::abs(ce[k]));
            o.passed = o.passed && ok;
            comb.add({static_cast<long long>(j.idx.n), j.idx.gamma, mname, static_cast<long long>(k + 1), v, ce[k],
                      res, ok});
        }
    }
    o.tables.push_back(std::move(ratios));
    o.tables.push_back(std::move(comb));
    return o;
}

const char* status_name(SweepStatus s) {
    switch (s) {
        case SweepStatus::agree: return "agree";
        case SweepStatus::mismatch: return "mismatch";
        case SweepStatus::boundary: return "boundary";
        case SweepStatus::out_of_domain: return "out_of_domain";
    }
    return "?";
}

Outcome cmd_coeff_scan(const RunConfig& cfg) {
    int lo = 0, hi = 0;
    char extra = 0;
    if (std::sscanf(cfg.n_range.c_str(), "%d:%d%c", &lo, &hi, &extra) != 2)
        throw UsageError("--n-range looks like lo:hi, got " + cfg.n_range);
    if (lo < 3 || hi > 64 || hi < lo) throw UsageError("--n-range must lie within [3, 64]");
    if (!(cfg.gamma_step > 0.0 && cfg.gamma_step < 1.0)) throw UsageError("--gamma-step must lie in (0, 1)");
    const double zero_tol = cfg.tol_or(cfg.zero_tol);

    Outcome o;
    Table rows{"coefficient sweep", {"n", "gamma", "numerator", "c_value", "positive", "gate", "status"}, true};
    Table summary{"coefficient sweep verdict",
                  {"n_lo", "n_hi", "gamma_step", "checked", "agree", "mismatch", "boundary", "out_of_domain", "verdict"}};
    long long counts[4] = {0, 0, 0, 0};
    for (int n = lo; n <= hi; ++n)
        for (double g : sweep_gammas(cfg.gamma_step)) {
            const CoefficientReport c = coefficient(ProblemIndex{n, g});
            const SweepStatus s = classify(c, zero_tol);
            ++counts[static_cast<int>(s)];
            rows.add({static_cast<long long>(n), g, c.numerator, c.c_value, c.positive, c.gate,
                      std::string(status_name(s))});
        }
    const long long mism = counts[static_cast<int>(SweepStatus::mismatch)];
    const long long agree = counts[static_cast<int>(SweepStatus::agree)];
    o.passed = mism == 0;
    summary.add({static_cast<long long>(lo), static_cast<long long>(hi), cfg.gamma_step, agree + mism, agree, mism,
                 counts[static_cast<int>(SweepStatus::boundary)], counts[static_cast<int>(SweepStatus::out_of_domain)],
                 std::string(o.passed ? "PASS" : "FAIL")});
    o.tables.push_back(std::move(rows));
    o.tables.push_back(std::move(summary));
    return o;
}

Outcome cmd_pohozaev(const RunConfig& cfg) {
    Outcome o;
    const double tol = cfg.tol_or(1e-4);
    Table ident{"pohozaev identity",
                {"n", "gamma", "r", "surface_term", "boundary_term", "total", "scale", "rel_total", "pass"}};
    Table lim{"pohozaev limit",
              {"n", "gamma", "c", "computed", "derived", "rel_error", "printed", "rel_to_printed", "negative", "pass"}};
    for (const ProblemIndex& idx : indices(cfg)) {
        for (double r : cfg.r_list)
            if (!(r > 0.0)) throw UsageError("--r-list entries must be positive");
        const double rmax = *std::max_element(cfg.r_list.begin(), cfg.r_list.end());
        const Constants k = constants(idx);
        // kappa C0 sets the scale; at the critical dimension C0 is the log coefficient.
        const double scale = k.kappa * compute_integrals(idx, IntegralMethod::bessel_moments).C0;
        const AxisymmetricField W = bubble_field(idx, rmax * 1.01);
        for (double r : cfg.r_list) {
            const PohozaevReport rep = pohozaev_P(idx, W, r, idx.critical_power(), nullptr, 0.0);
            const double rel = std::abs(rep.total) / scale;
            const bool ok = rel <= tol;
            o.passed = o.passed && ok;
            ident.add({static_cast<long long>(idx.n), idx.gamma, r, rep.surface_term, rep.boundary_term, rep.total,
                       scale, rel, ok});
        }
        const double computed = pohozaev_Pprime(idx, singular_profile_field(idx, cfg.c1), 1.0);
        const double derived = singular_profile_Pprime(idx, cfg.c1);
        const double printed = -k.kappa * 0.5 * idx.mu() * hemisphere_weighted_area(idx);
        const double rel = std::abs(computed - derived) / std::abs(derived);
        const bool ok = rel <= 1e-2 && computed < 0.0;
        o.passed = o.passed && ok;
        lim.add({static_cast<long long>(idx.n), idx.gamma, cfg.c1, computed, derived, rel, printed,
                 std::abs(computed - printed) / std::abs(printed), computed < 0.0, ok});
    }
    o.tables.push_back(std::move(ident));
    o.tables.push_back(std::move(lim));
    return o;
}

Outcome cmd_extension(const RunConfig& cfg) {
    const ProblemIndex idx = single_index(cfg);
    if (cfg.nodes.size() < 2) throw UsageError("--nodes needs at least two grids");
    for (int m : cfg.nodes)
        if (m < 8) throw UsageError("node counts must be at least 8");
    if (!(cfg.extent > 0.0)) throw UsageError("--extent must be positive");
    Outcome o;
    const ConvergenceStudy st = extension_convergence(idx, cfg.extent, cfg.nodes);
    Table conv{"extension convergence", {"nodes", "h", "linf_error", "order"}};
    for (std::size_t k = 0; k < st.nodes.size(); ++k)
        conv.add({static_cast<long long>(st.nodes[k]), st.h[k], st.error[k], k ? st.order[k - 1] : kUnset});
    int good = 0;
    for (double p : st.order) good += p >= 1.5;
    const bool order_ok = good >= 2 || (st.order.size() < 2 && good == static_cast<int>(st.order.size()));

    const double tol = cfg.tol_or(1e-3);
    Table neu{"neumann trace ratio", {"rbar", "neumann_trace", "trace_power", "ratio", "pass"}};
    bool neu_ok = true;
    for (int k = 0; k <= 6; ++k) {
        std::vector<double> xb(idx.n, 0.0);
        xb[0] = 0.5 * k;
        const double a = neumann_trace(idx, BubbleParams{}, xb);
        const double b = std::pow(trace_bubble(idx, BubbleParams{}, xb), idx.critical_power());
        const bool ok = std::abs(a / b - 1.0) <= tol;
        neu_ok = neu_ok && ok;
        neu.add({xb[0], a, b, a / b, ok});
    }

    const int finest = cfg.nodes.back();
    const WeightedGrid g = WeightedGrid::make(idx, cfg.extent, cfg.extent, finest, finest);
    SolveReport sr;
    const GridFunction u = solve_bubble_extension(idx, g, 1.0, &sr);
    Table grid{"extension solution", {"r", "xN", "U"}, true};
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) grid.add({g.r(i), g.z(j), u.values(i, j)});

    Table sum{"extension summary", {"n", "gamma", "extent", "pairs_order_ge_1_5", "solve_residual", "pass"}};
    o.passed = order_ok && neu_ok;
    sum.add({static_cast<long long>(idx.n), idx.gamma, cfg.extent, static_cast<long long>(good), sr.residual,
             o.passed});
    o.tables = {std::move(sum), std::move(conv), std::move(neu), std::move(grid)};
    return o;
}

Outcome cmd_green(const RunConfig& cfg) {
    const ProblemIndex idx = single_index(cfg);
    if (cfg.cells < 8 || cfg.angular < 8) throw UsageError("cell counts must be at least 8");
    const GreenReport rep = green_asymptotics(idx, cfg.radius, cfg.width, cfg.cells, cfg.angular, cfg.mass);
    const double gconst = constants(idx).green_const * cfg.mass;
    const double slope_err = std::abs(rep.slope + idx.mu()) / idx.mu();
    const double const_err = std::abs(rep.constant - gconst) / gconst;
    const double tol = cfg.tol_or(0.02);
    Outcome o;
    o.passed = slope_err <= tol && const_err <= 2.5 * tol;
    Table sum{"green asymptotics",
              {"n", "gamma", "R", "width", "slope", "expected_slope", "slope_rel_error", "constant", "expected_constant",
               "constant_rel_error", "offset", "loglog_slope", "loglog_constant", "pass"}};
    sum.add({static_cast<long long>(idx.n), idx.gamma, cfg.radius, cfg.width, rep.slope, -idx.mu(), slope_err,
             rep.constant, gconst, const_err, rep.offset, rep.loglog_slope, rep.loglog_constant, o.passed});
    Table prof{"green profile", {"radius", "G"}, true};
    for (std::size_t k = 0; k < rep.radius.size(); ++k) prof.add({rep.radius[k], rep.profile[k]});
    o.tables = {std::move(sum), std::move(prof)};
    return o;
}

Outcome cmd_lambda1(const RunConfig& cfg) {
    const ProblemIndex idx = single_index(cfg);
    if (cfg.radii.size() < 2) throw UsageError("--radii needs at least two radii");
    for (double R : cfg.radii)
        if (!(R > 0.0)) throw UsageError("--radii entries must be positive");
    if (!(cfg.spacing > 0.0)) throw UsageError("--spacing must be positive");
    std::vector<Lambda1Report> reps(cfg.radii.size());
    parallel_for(reps.size(), [&](std::size_t k) { reps[k] = rayleigh_lambda1(idx, cfg.radii[k], cfg.spacing); });
    Table t{"eigenvalue scaling", {"R", "radial_cells", "lambda1", "lambda1_R2", "exact_R2", "rel_to_exact"}};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Lambda1Report& r : reps) {
        const double s = r.lambda1 * r.R * r.R;
        const double e = lambda1_exact(idx, r.R) * r.R * r.R;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        t.add({r.R, static_cast<long long>(r.radial_cells), r.lambda1, s, e, std::abs(s - e) / e});
    }
    Outcome o;
    const double resid = (hi - lo) / lo;
    o.passed = resid <= cfg.tol_or(1e-3) && lo > 0.0;
    Table sum{"eigenvalue scaling summary", {"n", "gamma", "h", "scaling_residual", "pass"}};
    sum.add({static_cast<long long>(idx.n), idx.gamma, cfg.spacing, resid, o.passed});
    o.tables = {std::move(sum), std::move(t)};
    return o;
}

Outcome cmd_linearized(const RunConfig& cfg) {
    if (cfg.pi.empty()) throw UsageError("solve linearized needs --pi");
    SymmetricTensor pi;
    try {
        pi = SymmetricTensor::parse(cfg.pi);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const int n = static_cast<int>(pi.entries.rows());
    if (cfg.n && *cfg.n != n) throw UsageError("--n disagrees with the size of --pi");
    if (!cfg.index_list.empty()) throw UsageError("solve linearized takes --gamma, not --index");
    const ProblemIndex idx = make_index(n, cfg.gamma.value_or(0.25));
    if (cfg.lin_nodes < 8) throw UsageError("node counts must be at least 8");
    const WeightedGrid g = WeightedGrid::make(idx, cfg.lin_extent, cfg.lin_extent, cfg.lin_nodes, cfg.lin_nodes,
                                              TraceFacePolicy::weighted_flux);
    LinearizedOptions opts;
    opts.estimate_truncation = cfg.truncation;
    const LinearizedResult res = solve_linearized(idx, pi, cfg.eps_hat, g, opts);
    const double tol = cfg.tol_or(1e-3);
    Outcome o;
    o.passed = res.orth_gradient <= tol && res.orth_trace <= tol && res.pinning[0] <= tol && res.pinning[1] <= tol &&
               std::isfinite(res.envelope_inner) && std::isfinite(res.envelope_outer);
    Table sum{"linearized summary",
              {"n", "gamma", "eps_hat", "pi_max", "solve_residual", "energy", "orth_gradient", "orth_trace",
               "pinning_value", "pinning_gradient", "envelope_inner", "envelope_outer", "truncation", "pass"}};
    sum.add({static_cast<long long>(n), idx.gamma, cfg.eps_hat, pi.max_abs(), res.solve.residual, res.energy,
             res.orth_gradient, res.orth_trace, res.pinning[0], res.pinning[1], res.envelope_inner,
             res.envelope_outer, cfg.truncation ? res.truncation : kUnset, o.passed});
    Table zc{"jacobi coefficients", {"k", "coefficient"}};
    for (std::size_t k = 0; k < res.z_coefficients.size(); ++k)
        zc.add({static_cast<long long>(k), res.z_coefficients[k]});
    Table grid{"linearized profile", {"r", "xN", "psi"}, true};
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) grid.add({g.r(i), g.z(j), res.psi.values(i, j)});
    o.tables = {std::move(sum), std::move(zc), std::move(grid)};
    return o;
}

void emit(const std::string& command, const Outcome& o, const RunConfig& cfg, std::ostream& out) {
    const bool to_dir = !cfg.out_dir.empty();
    if (to_dir) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path base(cfg.out_dir);
        auto write = [](const std::filesystem::path& path, const std::string& text) {
            std::ofstream f(path);
            f << text;
            if (!f) throw NumericError("cannot write " + path.string());
        };
        if (cfg.format == "json") {
            write(base / (command + ".json"), to_json(command, o.tables, o.passed) + "\n");
        } else {
            for (const Table& t : o.tables) write(base / (command + "-" + t.slug() + ".csv"), to_csv(t));
        }
    }
    std::vector<Table> shown;
    for (const Table& t : o.tables)
        if (!to_dir || !t.bulk) shown.push_back(t);
    if (cfg.format == "json") {
        out << to_json(command, shown, o.passed) << '\n';
    } else {
        for (const Table& t : shown) out << to_csv(t);
        out << "# status: " << (o.passed ? "pass" : "tolerance_breach") << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks for fractional Yamabe bubble analysis", "fyk"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value file; command-line flags override it");

    RunConfig cfg;
    int n_value = 0;
    double g_value = 0.0;
    auto* n_opt = app.add_option("--n", n_value, "boundary dimension n");
    auto* g_opt = app.add_option("--gamma", g_value, "fractional order gamma in (0,1)");
    app.add_option("--index", cfg.index_list, "problem indices as n:gamma, repeatable")->delimiter(',');
    app.add_option("--tol", cfg.tol, "tolerance overriding the command default");
    app.add_option("--out", cfg.out_dir, "directory receiving one file per table");
    app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* c_const = app.add_subcommand("constants", "alpha, kappa, g and |S^{n-1}|");
    auto* c_int = app.add_subcommand("integrals", "ratios of the nine weighted integrals to C0");
    c_int->add_option("--method", cfg.method, "bessel_moments, direct_2d or both")
        ->check(CLI::IsMember({"bessel_moments", "direct_2d", "both"}));
    auto* c_scan = app.add_subcommand("coeff-scan", "sign of the energy coefficient against the dimension table");
    c_scan->add_option("--n-range", cfg.n_range, "lo:hi within [3, 64]");
    c_scan->add_option("--gamma-step", cfg.gamma_step, "gamma spacing");
    auto* c_poh = app.add_subcommand("pohozaev", "Pohozaev functional on the bubble and the singular profile");
    c_poh->add_option("--r-list", cfg.r_list, "radii")->delimiter(',');
    c_poh->add_option("--c", cfg.c1, "amplitude of the singular profile");
    auto* c_solve = app.add_subcommand("solve", "grid solvers");
    c_solve->require_subcommand(1);
    auto* s_ext = c_solve->add_subcommand("extension", "extension solve and convergence study");
    s_ext->add_option("--nodes", cfg.nodes, "node counts per axis")->delimiter(',');
    s_ext->add_option("--extent", cfg.extent, "box side L of [0,L]^2");
    auto* s_green = c_solve->add_subcommand("green", "Green function asymptotics");
    s_green->add_option("--radius", cfg.radius, "half-ball radius");
    s_green->add_option("--width", cfg.width, "mollifier width");
    s_green->add_option("--cells", cfg.cells, "radial cells");
    s_green->add_option("--angular", cfg.angular, "angular cells");
    s_green->add_option("--mass", cfg.mass, "mass of the boundary delta");
    auto* s_lam = c_solve->add_subcommand("lambda1", "first eigenvalue scaling");
    s_lam->add_option("--radii", cfg.radii, "half-ball radii")->delimiter(',');
    s_lam->add_option("--spacing", cfg.spacing, "radial spacing");
    auto* s_lin = c_solve->add_subcommand("linearized", "linearized correction Psi");
    s_lin->add_option("--pi", cfg.pi, "e.g. tracefree:diag(1,-1,0) or 1,0;0,-1");
    s_lin->add_option("--eps", cfg.eps_hat, "eps_hat");
    s_lin->add_option("--extent", cfg.lin_extent, "box side");
    s_lin->add_option("--nodes", cfg.lin_nodes, "nodes per axis");
    s_lin->add_option("--truncation", cfg.truncation, "re-solve on a smaller box to estimate truncation");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    if (n_opt->count()) cfg.n = n_value;
    if (g_opt->count()) cfg.gamma = g_value;

    try {
        cfg.validate();
        std::string name;
        Outcome o;
        if (c_const->parsed()) {
            name = "constants";
            o = cmd_constants(cfg);
        } else if (c_int->parsed()) {
            name = "integrals";
            o = cmd_integrals(cfg);
        } else if (c_scan->parsed()) {
            name = "coeff-scan";
            o = cmd_coeff_scan(cfg);
        } else if (c_poh->parsed()) {
            name = "pohozaev";
            o = cmd_pohozaev(cfg);
        } else if (s_ext->parsed()) {
            name = "solve-extension";
            o = cmd_extension(cfg);
        } else if (s_green->parsed()) {
            name = "solve-green";
            o = cmd_green(cfg);
        } else if (s_lam->parsed()) {
            name = "solve-lambda1";
            o = cmd_lambda1(cfg);
        } else {
            name = "solve-linearized";
            o = cmd_linearized(cfg);
        }
        emit(name, o, cfg, out);
        return o.passed ? kOk : kToleranceBreach;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace fyk::cli

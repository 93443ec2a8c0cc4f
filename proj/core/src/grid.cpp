#include "fyk/grid.hpp"

#include <cmath>
#include <regex>
#include <sstream>

#include "fyk/errors.hpp"

namespace fyk {

WeightedGrid WeightedGrid::make(const ProblemIndex& idx, double r_extent, double z_extent, int nr, int nz,
                                TraceFacePolicy policy) {
    idx.validate();
    WeightedGrid g;
    g.n = idx.n;
    g.gamma = idx.gamma;
    g.r_extent = r_extent;
    g.z_extent = z_extent;
    g.nr = nr;
    g.nz = nz;
    g.weight_exponent = 1.0 - 2.0 * idx.gamma;
    g.trace_face = policy;
    g.validate();
    return g;
}

void WeightedGrid::validate() const {
    if (!(r_extent > 0.0 && z_extent > 0.0)) throw DomainError("grid extents must be positive");
    if (nr < 8 || nz < 8) throw DomainError("grids need at least 8 nodes per axis");
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("grid gamma must lie in (0,1)");
    if (std::abs(weight_exponent - (1.0 - 2.0 * gamma)) > 1e-14)
        throw DomainError("grid weight exponent must equal 1 - 2 gamma");
}

std::vector<double> WeightedGrid::r_nodes() const {
    std::vector<double> v(nr);
    for (int i = 0; i < nr; ++i) v[i] = r(i);
    return v;
}

std::vector<double> WeightedGrid::z_nodes() const {
    std::vector<double> v(nz);
    for (int j = 0; j < nz; ++j) v[j] = z(j);
    return v;
}

double WeightedGrid::cell_r_measure(int i) const {
    const double h = hr();
    const double lo = std::max(0.0, (i - 0.5) * h);
    const double hi = std::min(r_extent, (i + 0.5) * h);
    return (std::pow(hi, n) - std::pow(lo, n)) / n;
}

double WeightedGrid::cell_z_weight(int j) const {
    const double h = hz();
    const double lo = std::max(0.0, (j - 0.5) * h);
    const double hi = std::min(z_extent, (j + 0.5) * h);
    const double e = 2.0 - 2.0 * gamma;
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

double WeightedGrid::cell_z_length(int j) const {
    const double h = hz();
    return std::min(z_extent, (j + 0.5) * h) - std::max(0.0, (j - 0.5) * h);
}

double WeightedGrid::face_r_area(int i) const { return std::pow((i + 0.5) * hr(), n - 1); }

double WeightedGrid::face_z_conductance(int j) const {
    const double e = 2.0 * gamma;
    return e / (std::pow(z(j + 1), e) - std::pow(z(j), e));
}

GridFunction GridFunction::zeros(const WeightedGrid& g) {
    g.validate();
    return GridFunction{g, Eigen::MatrixXd::Zero(g.nr, g.nz)};
}

void SymmetricTensor::validate() const {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw DomainError("tensor must be a nonempty square matrix");
    const double scale = std::max(1.0, entries.norm());
    if ((entries - entries.transpose()).norm() > 1e-14 * scale) throw DomainError("tensor must be symmetric");
    if (trace_free && std::abs(entries.trace()) > 1e-12 * entries.norm())
        throw DomainError("tensor marked trace-free has nonzero trace");
}

SymmetricTensor SymmetricTensor::zero(int n) {
    return SymmetricTensor{Eigen::MatrixXd::Zero(n, n), true};
}

SymmetricTensor SymmetricTensor::parse(const std::string& text) {
    std::string s = text;
    SymmetricTensor t;
    const std::string prefix = "tracefree:";
    if (s.rfind(prefix, 0) == 0) {
        t.trace_free = true;
        s = s.substr(prefix.size());
    }
    auto numbers = [](const std::string& list) {
        std::vector<double> v;
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            double x = 0;
            try {
                x = std::stod(item, &used);
            } catch (const std::exception&) {
                throw DomainError("cannot parse tensor entry '" + item + "'");
            }
            if (item.find_first_not_of(" \t", used) != std::string::npos)
                throw DomainError("cannot parse tensor entry '" + item + "'");
            v.push_back(x);
        }
        return v;
    };
    std::smatch m;
    if (std::regex_match(s, m, std::regex(R"(\s*diag\((.*)\)\s*)"))) {
        const auto d = numbers(m[1].str());
        t.entries = Eigen::MatrixXd::Zero(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) t.entries(i, i) = d[i];
    } else {
        std::vector<std::vector<double>> rows;
        std::stringstream ss(s);
        std::string row;
        while (std::getline(ss, row, ';')) rows.push_back(numbers(row));
        const std::size_t k = rows.size();
        t.entries.resize(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            if (rows[i].size() != k) throw DomainError("tensor rows must have equal length");
            for (std::size_t j = 0; j < k; ++j) t.entries(i, j) = rows[i][j];
        }
    }
    t.validate();
    return t;
}

}  // namespace fyk

#include "gaugelab/testfunction.hpp"

#include "gaugelab/errors.hpp"
#include "gaugelab/format.hpp"

#include <cmath>
#include <numbers>

namespace gaugelab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string axis_tag(int j) { return "ax" + std::to_string(j); }

} // namespace

double bump_radial(double r0, double r1, double r) {
    if (!(r0 > 0.0) || !(r1 > r0))
        throw ArgumentError("bump_radial: need 0 < r0 < r1");
    if (r <= r0 || r >= r1) return 0.0;
    const double width = r1 - r0;
    return std::exp(4.0 / (width * width) - 1.0 / ((r - r0) * (r1 - r)));
}

double zonal_basis(int dim, int degree, double t) {
    if (dim < 2 || dim > 4) throw ArgumentError("zonal_basis: dim must be 2, 3 or 4");
    if (degree < 0 || degree > 8) throw ArgumentError("zonal_basis: degree must be in [0, 8]");
    double prev = 1.0;
    if (degree == 0) return prev;
    double cur = dim == 4 ? 2.0 * t : t; // U_1 = 2t, T_1 = P_1 = t
    for (int l = 1; l < degree; ++l) {
        double next;
        if (dim == 3)
            next = ((2.0 * l + 1.0) * t * cur - l * prev) / (l + 1.0);
        else
            next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void TestFunction::validate() const {
    if (dim < 2 || dim > 4) throw ArgumentError("TestFunction: dim must be 2, 3 or 4");
    if (!(r0 > 0.0) || !(r1 > r0)) throw ArgumentError("TestFunction: need 0 < r0 < r1");
    if (static_cast<int>(axis.size()) != dim)
        throw ArgumentError("TestFunction: axis size must equal dim");
    double n2 = 0.0;
    for (double a : axis) {
        if (!std::isfinite(a)) throw ArgumentError("TestFunction: axis must be finite");
        n2 += a * a;
    }
    if (std::fabs(n2 - 1.0) > 1e-8)
        throw ArgumentError("TestFunction: axis must be a unit vector");
    if (coeffs.empty() || coeffs.size() > 5)
        throw ArgumentError("TestFunction: coefficient degree must be in [0, 4]");
    double c2 = 0.0;
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw ArgumentError("TestFunction: coefficients must be finite");
        c2 += c * c;
    }
    if (c2 == 0.0) throw ArgumentError("TestFunction: coefficients must not all vanish");
    bool even = false, odd = false;
    for (std::size_t l = 0; l < coeffs.size(); ++l)
        if (coeffs[l] != 0.0) (l % 2 == 0 ? even : odd) = true;
    // mixed parity would break the evenness of the squared angular factor
    if (even && odd)
        throw ArgumentError("TestFunction: coefficients must not mix even and odd degrees");
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw ArgumentError("TestFunction: norm must be positive");
}

double TestFunction::angular(double t) const {
    t = std::min(1.0, std::max(-1.0, t));
    double z = 0.0;
    for (std::size_t l = 0; l < coeffs.size(); ++l)
        if (coeffs[l] != 0.0) z += coeffs[l] * zonal_basis(dim, static_cast<int>(l), t);
    return z * z;
}

double TestFunction::eval(const double* x) const {
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) r2 += x[i] * x[i];
    const double r = std::sqrt(r2);
    if (r <= r0 || r >= r1) return 0.0;
    double dot = 0.0;
    for (int i = 0; i < dim; ++i) dot += x[i] * axis[i];
    return norm * bump_radial(r0, r1, r) * angular(dot / r);
}

double TestFunction::operator()(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim)
        throw ArgumentError("TestFunction: point dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw ArgumentError("TestFunction: point must be finite");
    return eval(x.data());
}

TestFunction make_test_function(int dim, double r0, double r1, std::vector<double> axis,
                                std::vector<double> coeffs, double norm, std::string id) {
    TestFunction phi;
    phi.dim = dim;
    phi.r0 = r0;
    phi.r1 = r1;
    double n2 = 0.0;
    for (double a : axis) n2 += a * a;
    if (n2 > 0.0 && std::isfinite(n2)) {
        const double inv = 1.0 / std::sqrt(n2);
        for (double& a : axis) a *= inv;
    }
    phi.axis = std::move(axis);
    phi.coeffs = std::move(coeffs);
    phi.norm = norm;
    phi.id = std::move(id);
    if (phi.id.empty()) phi.id = "phi(dim=" + std::to_string(dim) + ")";
    phi.validate();
    return phi;
}

std::vector<std::vector<double>> family_axes(int dim, int count) {
    if (count < 1) throw ArgumentError("family_axes: count must be positive");
    std::vector<std::vector<double>> axes;
    if (dim == 2) {
        for (int j = 0; j < count; ++j) {
            const double t = kPi * j / count;
            axes.push_back({std::cos(t), std::sin(t)});
        }
    } else if (dim == 3) {
        const double ga = kPi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < count; ++j) {
            const double z = (j + 0.5) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            axes.push_back({r * std::cos(ga * j), r * std::sin(ga * j), z});
        }
    } else if (dim == 4) {
        if (count > 12)
            throw ArgumentError("family_axes: dim 4 provides at most 12 axes");
        static const int signs[8][3] = {{1, 1, 1},   {-1, 1, 1},  {1, -1, 1},  {1, 1, -1},
                                        {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}, {-1, -1, -1}};
        for (int j = 0; j < count && j < 4; ++j) {
            std::vector<double> e(4, 0.0);
            e[j] = 1.0;
            axes.push_back(e);
        }
        for (int j = 4; j < count; ++j) {
            const int* s = signs[j - 4];
            axes.push_back({0.5, 0.5 * s[0], 0.5 * s[1], 0.5 * s[2]});
        }
    } else {
        throw ArgumentError("family_axes: dim must be 2, 3 or 4");
    }
    return axes;
}

std::vector<TestFunction> standard_family(int dim, const FamilySpec& spec) {
    if (spec.k_min > spec.k_max) throw ArgumentError("standard_family: k_min > k_max");
    if (spec.axes < 1) throw ArgumentError("standard_family: need at least one axis");
    if (spec.max_degree < 1 || spec.max_degree > 4)
        throw ArgumentError("standard_family: max_degree must be in [1, 4]");
    const auto axes = family_axes(dim, spec.axes);
    std::vector<TestFunction> family;
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        const double r0 = std::ldexp(1.0, k);
        const double r1 = std::ldexp(1.0, k + 1);
        const std::string ann = "ann" + std::to_string(k);
        std::vector<double> e1(dim, 0.0);
        e1[0] = 1.0;
        family.push_back(make_test_function(dim, r0, r1, e1, {1.0}, 1.0, ann + "|rad"));
        for (int j = 0; j < static_cast<int>(axes.size()); ++j) {
            for (int d = 1; d <= spec.max_degree; ++d) {
                std::vector<double> b(d + 1, 0.0);
                // dim 2: sqrt(2) cos(d th) squared = 1 + cos(2d th)
                b[d] = dim == 2 ? std::numbers::sqrt2 : 1.0;
                family.push_back(make_test_function(dim, r0, r1, axes[j], b, 1.0,
                                                    ann + "|" + axis_tag(j) + "|sq" +
                                                        std::to_string(d)));
            }
        }
    }
    return family;
}

} // namespace gaugelab

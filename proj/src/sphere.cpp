#include "gaugelab/sphere.hpp"

#include "gaugelab/errors.hpp"
#include "gaugelab/quadrature.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace gaugelab::num {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes mapped to [a, b].
void mapped_gl(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    const GaussLegendre& gl = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        x.push_back(c + h * gl.x[i]);
        w.push_back(h * gl.w[i]);
    }
}

// Panels split at multiples of pi/2 (and +-0 for [-1,1] variables) so that
// coordinate-hyperplane kinks fall on panel boundaries.
void split_gl(int n, double a, double b, int panels, std::vector<double>& x,
              std::vector<double>& w) {
    for (int p = 0; p < panels; ++p)
        mapped_gl(n, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, x, w);
}

SphereRule circle_rule(int level) {
    const int quad = level > 0 ? level : 256;
    const int m = 4 * quad;
    SphereRule rule;
    rule.dim = 2;
    rule.points.reserve(2 * m);
    rule.weights.assign(m, 2.0 * kPi / m);
    for (int i = 0; i < m; ++i) {
        const double t = 2.0 * kPi * i / m;
        rule.points.push_back(std::cos(t));
        rule.points.push_back(std::sin(t));
    }
    return rule;
}

SphereRule sphere3_rule(int level) {
    const int n = level > 0 ? level : 48;
    std::vector<double> ux, uw, px, pw;
    split_gl(n, -1.0, 1.0, 2, ux, uw);
    split_gl(n, 0.0, 2.0 * kPi, 4, px, pw);
    SphereRule rule;
    rule.dim = 3;
    for (std::size_t i = 0; i < ux.size(); ++i) {
        const double u = ux[i];
        const double r = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (std::size_t j = 0; j < px.size(); ++j) {
            rule.points.push_back(r * std::cos(px[j]));
            rule.points.push_back(r * std::sin(px[j]));
            rule.points.push_back(u);
            rule.weights.push_back(uw[i] * pw[j]);
        }
    }
    return rule;
}

SphereRule sphere4_rule(int level) {
    const int n = level > 0 ? level : 16;
    std::vector<double> tx, tw, ux, uw, px, pw;
    split_gl(n, 0.0, kPi, 2, tx, tw);
    split_gl(n, -1.0, 1.0, 2, ux, uw);
    split_gl(n, 0.0, 2.0 * kPi, 4, px, pw);
    SphereRule rule;
    rule.dim = 4;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        const double st = std::sin(tx[i]);
        const double ct = std::cos(tx[i]);
        const double wt1 = tw[i] * st * st;
        for (std::size_t j = 0; j < ux.size(); ++j) {
            const double u = ux[j];
            const double ru = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (std::size_t k = 0; k < px.size(); ++k) {
                rule.points.push_back(ct);
                rule.points.push_back(st * u);
                rule.points.push_back(st * ru * std::cos(px[k]));
                rule.points.push_back(st * ru * std::sin(px[k]));
                rule.weights.push_back(wt1 * uw[j] * pw[k]);
            }
        }
    }
    return rule;
}

double halton(std::size_t i, int base) {
    double f = 1.0, r = 0.0;
    std::size_t n = i;
    while (n > 0) {
        f /= base;
        r += f * (n % base);
        n /= base;
    }
    return r;
}

} // namespace

const SphereRule& sphere_rule(int n, int level) {
    if (n < 2 || n > 4) throw ArgumentError("sphere_rule: dimension must be 2, 3 or 4");
    static std::map<std::pair<int, int>, SphereRule> cache;
    auto it = cache.find({n, level});
    if (it != cache.end()) return it->second;
    SphereRule rule;
    switch (n) {
        case 2: rule = circle_rule(level); break;
        case 3: rule = sphere3_rule(level); break;
        default: rule = sphere4_rule(level); break;
    }
    return cache.emplace(std::make_pair(n, level), std::move(rule)).first->second;
}

double sphere_mean(int n, const std::function<double(const double*)>& g, int level) {
    const SphereRule& rule = sphere_rule(n, level);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rule.count(); ++i) {
        num += rule.weights[i] * g(&rule.points[i * n]);
        den += rule.weights[i];
    }
    return num / den;
}

std::vector<double> sphere_points(int n, int count) {
    if (count <= 0) throw ArgumentError("sphere_points: count must be positive");
    std::vector<double> pts(static_cast<std::size_t>(count) * n);
    if (n == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * kPi * (i + 0.5) / count;
            pts[2 * i] = std::cos(t);
            pts[2 * i + 1] = std::sin(t);
        }
    } else if (n == 3) {
        const double ga = kPi * (3.0 - std::sqrt(5.0)); // golden angle
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double t = ga * i;
            pts[3 * i] = r * std::cos(t);
            pts[3 * i + 1] = r * std::sin(t);
            pts[3 * i + 2] = z;
        }
    } else if (n == 4) {
        // Halton sequence fed through Box-Muller, then normalized.
        for (int i = 0; i < count; ++i) {
            const std::size_t k = static_cast<std::size_t>(i) + 13;
            const double u1 = std::max(halton(k, 2), 1e-12);
            const double u2 = halton(k, 3);
            const double u3 = std::max(halton(k, 5), 1e-12);
            const double u4 = halton(k, 7);
            const double r1 = std::sqrt(-2.0 * std::log(u1));
            const double r2 = std::sqrt(-2.0 * std::log(u3));
            double x[4] = {r1 * std::cos(2.0 * kPi * u2), r1 * std::sin(2.0 * kPi * u2),
                           r2 * std::cos(2.0 * kPi * u4), r2 * std::sin(2.0 * kPi * u4)};
            double nrm = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
            if (nrm < 1e-9) {
                x[0] = 1.0;
                nrm = 1.0;
            }
            for (int d = 0; d < 4; ++d) pts[4 * i + d] = x[d] / nrm;
        }
    } else {
        throw ArgumentError("sphere_points: dimension must be 2, 3 or 4");
    }
    return pts;
}

} // namespace gaugelab::num

#include "gaugelab/l0embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "gaugelab/bessel.hpp"
#include "gaugelab/errors.hpp"
#include "gaugelab/format.hpp"
#include "gaugelab/quadrature.hpp"
#include "gaugelab/sphere.hpp"
#include "gaugelab/symeig.hpp"

namespace gaugelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

void check_scan_dim(int dim) {
    if (dim < 2 || dim > 4)
        throw ArgumentError("pairing machinery supports dimensions 2, 3 and 4");
}

double lam_of(int dim) { return 0.5 * (dim - 2); }

double surf_of(int dim) {
    switch (dim) {
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        default: return 2.0 * kPi * kPi;
    }
}

// |K_d| -- the degree-independent magnitude of the transform coefficient;
// the sign alternates as (-1)^{d/2}.
double kmag_of(int dim) {
    switch (dim) {
        case 2: return 2.0 * kPi;
        case 3: return 2.0 * std::pow(kPi, 1.5);
        default: return 2.0 * kPi * kPi;
    }
}

// beta_d for even d = 2i: the normalized-pairing weight of M_d(u).
std::array<double, 5> beta_of(int dim) {
    const double denom = surf_of(dim) * (-pairing_kappa(dim));
    std::array<double, 5> beta{};
    for (int i = 0; i < 5; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        beta[i] = sign * pairing_lambda(dim, 2 * i) / denom;
    }
    return beta;
}

// ---------------------------------------------------------------------------
// Zonal product linearization: A_l A_lp = sum_d G[l][lp][d] A_d.
// dim 2 is the cosine product rule; dim 3 projects with Gauss-Legendre
// (exact through degree 79), dim 4 with the Chebyshev-U rule (degree 159).
// ---------------------------------------------------------------------------

using LinTensor = std::array<std::array<std::array<double, 9>, 5>, 5>;

const LinTensor& linearization(int dim) {
    check_scan_dim(dim);
    static LinTensor cache[3];
    static bool ready[3] = {false, false, false};
    const int slot = dim - 2;
    if (ready[slot]) return cache[slot];
    LinTensor& g = cache[slot];
    for (auto& a : g)
        for (auto& b : a) b.fill(0.0);
    if (dim == 2) {
        for (int l = 0; l < 5; ++l)
            for (int lp = 0; lp < 5; ++lp) {
                g[l][lp][l + lp] += 0.5;
                g[l][lp][std::abs(l - lp)] += 0.5;
            }
    } else {
        std::vector<double> x, w;
        if (dim == 3) {
            const num::GaussLegendre& gl = num::gauss_legendre(40);
            x = gl.x;
            w = gl.w;
        } else {
            const int m = 80;
            for (int i = 1; i <= m; ++i) {
                const double th = i * kPi / (m + 1);
                x.push_back(std::cos(th));
                w.push_back(kPi / (m + 1) * std::sin(th) * std::sin(th));
            }
        }
        std::vector<std::array<double, 9>> basis(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            for (int d = 0; d <= 8; ++d) basis[i][d] = zonal_basis(dim, d, x[i]);
        for (int l = 0; l < 5; ++l)
            for (int lp = 0; lp < 5; ++lp)
                for (int d = 0; d <= 8; ++d) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < x.size(); ++i)
                        s += w[i] * basis[i][l] * basis[i][lp] * basis[i][d];
                    const double hd = dim == 3 ? 2.0 / (2.0 * d + 1.0) : kPi / 2.0;
                    g[l][lp][d] = s / hd;
                }
    }
    ready[slot] = true;
    return g;
}

// Z^2 expanded over the zonal basis; coeffs has length <= 5.
std::array<double, 9> square_expand(int dim, const std::vector<double>& coeffs) {
    const LinTensor& g = linearization(dim);
    std::array<double, 9> w{};
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        if (coeffs[l] == 0.0) continue;
        for (std::size_t lp = 0; lp < coeffs.size(); ++lp) {
            if (coeffs[lp] == 0.0) continue;
            const double c = coeffs[l] * coeffs[lp];
            for (int d = 0; d <= 8; ++d) w[d] += c * g[l][lp][d];
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// Radial pieces.
// ---------------------------------------------------------------------------

// B_d(z) = (z/2)^{-lam} J_{lam+d}(z); ascending series below z = 0.5 where the
// power/Bessel split loses digits.
double scaled_bessel(double lam, int d, double z) {
    if (z < 0.5) {
        const double q = 0.25 * z * z;
        double sum = 0.0, term = std::pow(0.5 * z, d) * std::exp(-std::lgamma(lam + d + 1.0));
        for (int k = 0; k < 12; ++k) {
            sum += term;
            term *= -q / ((k + 1.0) * (lam + d + k + 1.0));
        }
        return sum;
    }
    return std::pow(0.5 * z, -lam) * num::bessel_j(lam + d, z);
}

// integral of f(r) * rho(r) over the bump support (smooth integrand).
double bump_integral(double r0, double r1, const std::function<double(double)>& f) {
    const num::GaussLegendre& gl = num::gauss_legendre(16);
    const int panels = 8;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = r0 + (r1 - r0) * p / panels;
        const double b = r0 + (r1 - r0) * (p + 1) / panels;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < 16; ++i) {
            const double r = c + h * gl.x[i];
            total += h * gl.w[i] * bump_radial(r0, r1, r) * f(r);
        }
    }
    return total;
}

// R_d(t) = int rho(r) r^{n-1} B_d(rt) dr with oscillation-resolving panels.
double radial_transform(int dim, double r0, double r1, int d, double t) {
    const double lam = lam_of(dim);
    const num::GaussLegendre& gl = num::gauss_legendre(12);
    const int panels = std::max(2, static_cast<int>(std::ceil((r1 - r0) * t / 3.0)));
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = r0 + (r1 - r0) * p / panels;
        const double b = r0 + (r1 - r0) * (p + 1) / panels;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < 12; ++i) {
            const double r = c + h * gl.x[i];
            total += h * gl.w[i] * bump_radial(r0, r1, r) * std::pow(r, dim - 1) *
                     scaled_bessel(lam, d, r * t);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Angular integrals M_d(u) = int_S ln||theta||_K A_d(<theta,u>) dsigma for
// even d, every axis at once from a single pass of gauge evaluations.
// ---------------------------------------------------------------------------

int finer_level(int dim, int level) {
    if (level > 0) return level + (level + 1) / 2;
    switch (dim) {
        case 2: return 384;
        case 3: return 64;
        default: return 24;
    }
}

std::vector<std::array<double, 5>> angular_integrals(const StarBody& body,
                                                     const std::vector<std::vector<double>>& axes,
                                                     int level) {
    const int dim = body.dimension();
    const num::SphereRule& rule = num::sphere_rule(dim, level);
    std::vector<double> lg(rule.count());
    for (std::size_t i = 0; i < rule.count(); ++i) {
        const double v = std::log(body.gauge(&rule.points[i * dim]));
        if (!std::isfinite(v))
            throw NumericalError("gauge must be positive and finite at every angular "
                                 "quadrature node; a degenerate body direction was hit");
        lg[i] = v;
    }
    std::vector<std::array<double, 5>> m(axes.size());
    for (auto& row : m) row.fill(0.0);
    for (std::size_t i = 0; i < rule.count(); ++i) {
        const double* pt = &rule.points[i * dim];
        const double wl = rule.weights[i] * lg[i];
        for (std::size_t a = 0; a < axes.size(); ++a) {
            double t = 0.0;
            for (int k = 0; k < dim; ++k) t += pt[k] * axes[a][k];
            t = std::min(1.0, std::max(-1.0, t));
            // zonal recurrence up to degree 8, accumulating even degrees
            m[a][0] += wl;
            double prev = 1.0;
            double cur = dim == 4 ? 2.0 * t : t;
            for (int l = 2; l <= 8; ++l) {
                double next;
                if (dim == 3)
                    next = ((2.0 * l - 1.0) * t * cur - (l - 1.0) * prev) / l;
                else
                    next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
                if (l % 2 == 0) m[a][l / 2] += wl * cur;
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Generalized eigenproblem on a parity block: maximize b^T Q b / b^T S b.
// ---------------------------------------------------------------------------

struct BlockResult {
    double mu = -std::numeric_limits<double>::infinity();
    std::vector<double> b; // full-length layout, parity-pure
};

BlockResult top_pencil(const std::vector<int>& idx, const double (*q)[5], const double (*s)[5]) {
    const int m = static_cast<int>(idx.size());
    std::vector<double> chol(m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            double sum = s[idx[i]][idx[j]];
            for (int k = 0; k < j; ++k) sum -= chol[i * m + k] * chol[j * m + k];
            if (i == j) {
                if (sum <= 0.0)
                    throw NumericalError("zonal Gram block is not positive definite");
                chol[i * m + i] = std::sqrt(sum);
            } else {
                chol[i * m + j] = sum / chol[j * m + j];
            }
        }
    // W = L^{-1} Q_block
    std::vector<double> wmat(m * m);
    for (int col = 0; col < m; ++col)
        for (int i = 0; i < m; ++i) {
            double sum = q[idx[i]][idx[col]];
            for (int k = 0; k < i; ++k) sum -= chol[i * m + k] * wmat[k * m + col];
            wmat[i * m + col] = sum / chol[i * m + i];
        }
    // B = W L^{-T}: forward-solve on rows of W.
    std::vector<double> bmat(m * m);
    for (int row = 0; row < m; ++row)
        for (int i = 0; i < m; ++i) {
            double sum = wmat[row * m + i];
            for (int k = 0; k < i; ++k) sum -= chol[i * m + k] * bmat[row * m + k];
            bmat[row * m + i] = sum / chol[i * m + i];
        }
    // top eigenvalue of B = -(smallest eigenvalue of -B)
    std::vector<double> neg(m * m);
    for (int i = 0; i < m * m; ++i) neg[i] = -0.5 * (bmat[i] + bmat[(i % m) * m + i / m]);
    const num::EigenPair ep = num::sym_eigen_min(neg, m);
    // b = L^{-T} y (back substitution), so b^T S b = |y|^2 = 1.
    std::vector<double> y = ep.vector;
    std::vector<double> bb(m);
    for (int i = m - 1; i >= 0; --i) {
        double sum = y[i];
        for (int k = i + 1; k < m; ++k) sum -= chol[k * m + i] * bb[k];
        bb[i] = sum / chol[i * m + i];
    }
    BlockResult out;
    out.mu = -ep.value;
    out.b.assign(5, 0.0);
    for (int i = 0; i < m; ++i) out.b[idx[i]] = bb[i];
    // canonical sign: the largest-magnitude coefficient is positive
    int arg = 0;
    for (int i = 1; i < 5; ++i)
        if (std::fabs(out.b[i]) > std::fabs(out.b[arg])) arg = i;
    if (out.b[arg] < 0.0)
        for (double& v : out.b) v = -v;
    return out;
}

// ---------------------------------------------------------------------------
// Circle projection quadrature for the measure recovery: locate kinks and
// logarithmic dips of h, grade Gauss-Legendre panels toward them, and refine
// every cell below the oscillation wavelength of the highest harmonic.
// ---------------------------------------------------------------------------

double eval_h(const StarBody& body, double t) {
    const double x[2] = {std::cos(t), std::sin(t)};
    return std::log(body.gauge(x));
}

std::vector<double> detect_circle_breaks(const StarBody& body) {
    const int m0 = 4096;
    const double step = 2.0 * kPi / m0;
    const double offset = step * 0.3819660112501051; // keeps atoms off the grid
    std::vector<double> hg(m0);
    for (int i = 0; i < m0; ++i) {
        double t = i * step + offset;
        double v = eval_h(body, t);
        for (int tries = 0; !std::isfinite(v) && tries < 5; ++tries)
            v = eval_h(body, t += 1e-9);
        if (!std::isfinite(v))
            throw NumericalError("gauge vanishes on an arc; cannot project its logarithm");
        hg[i] = v;
    }
    std::vector<double> d2(m0);
    std::vector<double> mag(m0);
    for (int i = 0; i < m0; ++i) {
        d2[i] = hg[(i + m0 - 1) % m0] - 2.0 * hg[i] + hg[(i + 1) % m0];
        mag[i] = std::fabs(d2[i]);
    }
    std::vector<double> sorted = mag;
    std::nth_element(sorted.begin(), sorted.begin() + m0 / 2, sorted.end());
    const double threshold = std::max(8.0 * sorted[m0 / 2], 1e-9);
    std::vector<double> breaks;
    for (int i = 0; i < m0; ++i) {
        const int im = (i + m0 - 1) % m0, ip = (i + 1) % m0;
        if (mag[i] <= threshold || mag[i] < mag[im] || mag[i] < mag[ip]) continue;
        // refine by ternary search on sgn * h (minimum for dips, maximum for
        // upward kinks), which converges on the V shape
        const double sgn = d2[i] > 0.0 ? 1.0 : -1.0;
        double a = i * step + offset - step, b = i * step + offset + step;
        for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (sgn * eval_h(body, m1) < sgn * eval_h(body, m2))
                b = m2;
            else
                a = m1;
        }
        double pos = std::fmod(0.5 * (a + b), 2.0 * kPi);
        if (pos < 0.0) pos += 2.0 * kPi;
        breaks.push_back(pos);
    }
    std::sort(breaks.begin(), breaks.end());
    return breaks;
}

struct CircleNodes {
    std::vector<double> x, w;
};

void graded_cuts(double a, double b, double wmax, std::vector<double>& cuts) {
    // geometric grading toward both endpoints, then a width cap for the
    // trigonometric projections
    const double len = b - a;
    const int depth = 44;
    std::vector<double> raw;
    raw.push_back(a);
    for (int l = depth; l >= 1; --l) raw.push_back(a + 0.5 * len * std::ldexp(1.0, -l));
    raw.push_back(a + 0.5 * len);
    for (int l = 1; l <= depth; ++l) raw.push_back(b - 0.5 * len * std::ldexp(1.0, -l));
    raw.push_back(b);
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
        const double lo = raw[i], hi = raw[i + 1];
        const int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) / wmax)));
        for (int p = 0; p < parts; ++p) cuts.push_back(lo + (hi - lo) * p / parts);
    }
}

CircleNodes projection_nodes(const std::vector<double>& breaks, int max_freq) {
    const num::GaussLegendre& gl = num::gauss_legendre(10);
    const double wmax = 2.0 / std::max(1, max_freq);
    std::vector<double> cuts;
    if (breaks.empty()) {
        const int panels = std::max<int>(64, static_cast<int>(std::ceil(2.0 * kPi / wmax)));
        for (int p = 0; p < panels; ++p) cuts.push_back(2.0 * kPi * p / panels);
        cuts.push_back(2.0 * kPi);
    } else {
        for (std::size_t k = 0; k < breaks.size(); ++k) {
            const double a = breaks[k];
            const double b = k + 1 < breaks.size() ? breaks[k + 1] : breaks[0] + 2.0 * kPi;
            graded_cuts(a, b, wmax, cuts);
        }
        cuts.push_back(breaks[0] + 2.0 * kPi);
    }
    CircleNodes nodes;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double c = 0.5 * (cuts[i] + cuts[i + 1]), h = 0.5 * (cuts[i + 1] - cuts[i]);
        if (h <= 0.0) continue;
        for (int j = 0; j < 10; ++j) {
            nodes.x.push_back(c + h * gl.x[j]);
            nodes.w.push_back(h * gl.w[j]);
        }
    }
    return nodes;
}

std::string axis_id(int j) { return "ax" + std::to_string(j); }

double scale_of(int dim, double w0, double i_rho) {
    return w0 * kmag_of(dim) * (-pairing_kappa(dim)) * i_rho * surf_of(dim);
}

} // namespace

// ---------------------------------------------------------------------------
// Closed-form constants.
// ---------------------------------------------------------------------------

double pairing_lambda(int dim, int degree) {
    check_scan_dim(dim);
    if (degree < 0 || degree > 8 || degree % 2 != 0)
        throw ArgumentError("pairing_lambda: degree must be even in [0, 8]");
    const double lam = lam_of(dim);
    // 2^{2lam+1} Gamma(lam+1+d/2) / Gamma(d/2); the Gamma pole at d = 0 makes
    // Lambda_0 = 0, which is exactly the vanishing of int phi^.
    return std::exp((2.0 * lam + 1.0) * kLn2 + std::lgamma(lam + 1.0 + 0.5 * degree) -
                    std::lgamma(0.5 * degree));
}

double pairing_kappa(int dim) {
    check_scan_dim(dim);
    const double lam = lam_of(dim);
    return -std::exp(lam * kLn2 * 2.0 + std::lgamma(lam + 1.0));
}

double radial_mass_integral(double r0, double r1) {
    if (!(r0 > 0.0) || !(r1 > r0))
        throw ArgumentError("radial_mass_integral: need 0 < r0 < r1");
    return bump_integral(r0, r1, [](double r) { return 1.0 / r; });
}

// ---------------------------------------------------------------------------
// SpectralTransform.
// ---------------------------------------------------------------------------

int SpectralTransform::index_of(int degree) const {
    for (std::size_t i = 0; i < degs_.size(); ++i)
        if (degs_[i] == degree) return static_cast<int>(i);
    return -1;
}

double SpectralTransform::coefficient(int degree) const {
    const int i = index_of(degree);
    if (i < 0) throw ArgumentError("SpectralTransform: degree not stored");
    return coefs_[i];
}

double SpectralTransform::radial(int degree, double t) const {
    const int i = index_of(degree);
    if (i < 0) throw ArgumentError("SpectralTransform: degree not stored");
    if (t < 0.0) t = -t;
    if (t >= tmax_) return 0.0;
    const std::vector<double>& s = samples_[i];
    const int m = static_cast<int>(s.size());
    int j0 = static_cast<int>(std::floor(t / dt_)) - 1;
    j0 = std::max(0, std::min(m - 4, j0));
    const double x = t / dt_ - j0;
    const double w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
    const double w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
    const double w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
    const double w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
    return w0 * s[j0] + w1 * s[j0 + 1] + w2 * s[j0 + 2] + w3 * s[j0 + 3];
}

double SpectralTransform::value(const double* xi) const {
    double t2 = 0.0;
    for (int i = 0; i < dim_; ++i) t2 += xi[i] * xi[i];
    const double t = std::sqrt(t2);
    if (t < 1e-12) return value_at_zero();
    double dot = 0.0;
    for (int i = 0; i < dim_; ++i) dot += xi[i] * axis_[i];
    const double u = std::min(1.0, std::max(-1.0, dot / t));
    double acc = 0.0;
    for (std::size_t i = 0; i < degs_.size(); ++i)
        acc += coefs_[i] * radial(degs_[i], t) * zonal_basis(dim_, degs_[i], u);
    return acc;
}

double SpectralTransform::value(const std::vector<double>& xi) const {
    if (static_cast<int>(xi.size()) != dim_)
        throw ArgumentError("SpectralTransform: point dimension mismatch");
    return value(xi.data());
}

double SpectralTransform::value_at_zero() const { return coefs_[0] * samples_[0][0]; }

double SpectralTransform::integral() const {
    // Simpson over the grid of surf * coef_0 * t^{n-1} R_0(t); degrees >= 2
    // integrate to zero against the constant by zonal orthogonality.
    const std::vector<double>& s = samples_[0];
    const int m = static_cast<int>(s.size());
    auto f = [&](int i) { return std::pow(i * dt_, dim_ - 1) * s[i]; };
    double acc = 0.0;
    int i = 0;
    for (; i + 2 < m; i += 2) acc += dt_ / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
    if (i + 1 < m) acc += dt_ / 2.0 * (f(i) + f(i + 1));
    return surf_ * coefs_[0] * acc;
}

double SpectralTransform::l1_bound() const {
    const int m = static_cast<int>(samples_[0].size());
    double acc = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        double env = 0.0;
        for (std::size_t k = 0; k < degs_.size(); ++k)
            env += std::fabs(coefs_[k] * samples_[k][i]) * zonal_basis(dim_, degs_[k], 1.0);
        acc += std::pow(i * dt_, dim_ - 1) * env * dt_;
    }
    return surf_ * acc;
}

SpectralTransform fourier_of_test_function(const TestFunction& phi,
                                           const SpectralGridSpec& grid) {
    phi.validate();
    const int dim = phi.dim;
    check_scan_dim(dim);
    SpectralTransform tf;
    tf.dim_ = dim;
    tf.axis_ = phi.axis;
    tf.surf_ = surf_of(dim);
    tf.tmax_ = grid.t_max > 0.0 ? grid.t_max : 240.0 / phi.r0;
    tf.dt_ = grid.dt > 0.0 ? grid.dt : 0.25 / phi.r1;
    if (!(tf.tmax_ > 0.0) || !(tf.dt_ > 0.0))
        throw ArgumentError("fourier_of_test_function: grid extents must be positive");
    const int m = static_cast<int>(std::floor(tf.tmax_ / tf.dt_)) + 1;
    if (m < 32)
        throw NumericalError("spectral grid too coarse: fewer than 32 radial nodes; "
                             "decrease dt or increase t_max");
    if (m > 2000000)
        throw ArgumentError("spectral grid spec asks for more than 2e6 nodes");
    const std::array<double, 9> w = square_expand(dim, phi.coeffs);
    const double kmag = kmag_of(dim);
    for (int d = 0; d <= 8; d += 2) {
        if (d > 0 && std::fabs(w[d]) < 1e-15 * std::fabs(w[0])) continue;
        const double sign = (d / 2) % 2 == 0 ? 1.0 : -1.0;
        tf.degs_.push_back(d);
        tf.coefs_.push_back(phi.norm * w[d] * sign * kmag);
    }
    for (std::size_t k = 0; k < tf.degs_.size(); ++k) {
        std::vector<double> s(m);
        for (int i = 0; i < m; ++i)
            s[i] = radial_transform(dim, phi.r0, phi.r1, tf.degs_[k], i * tf.dt_);
        tf.samples_.push_back(std::move(s));
    }
    // decay fit on the grid tail: window envelopes around 0.6*tmax and tmax
    auto window_env = [&](int lo, int hi) {
        double env = 0.0;
        for (int i = lo; i < hi; ++i) {
            double e = 0.0;
            for (std::size_t k = 0; k < tf.degs_.size(); ++k)
                e += std::fabs(tf.coefs_[k] * tf.samples_[k][i]) *
                     zonal_basis(dim, tf.degs_[k], 1.0);
            env = std::max(env, e);
        }
        return env;
    };
    const double e1 = window_env(static_cast<int>(0.55 * m), static_cast<int>(0.65 * m));
    const double e2 = window_env(static_cast<int>(0.88 * m), m);
    const double t1 = 0.60 * tf.tmax_, t2 = 0.94 * tf.tmax_;
    double fitted = 64.0; // a vanished tail counts as super-polynomial decay
    if (e2 > 0.0 && e1 > 0.0)
        fitted = std::log(e1 / e2) / std::log((1.0 + t2) / (1.0 + t1));
    if (fitted < 8.0)
        throw NumericalError("spectral decay fit failed: fitted order " +
                             format_double(fitted) +
                             " < 8; refine the grid (smaller dt) or extend t_max");
    tf.fitted_m_ = std::min(fitted, 8.0);
    double kconst = 0.0;
    for (int i = 0; i < m; ++i) {
        double e = 0.0;
        for (std::size_t k = 0; k < tf.degs_.size(); ++k)
            e += std::fabs(tf.coefs_[k] * tf.samples_[k][i]) *
                 zonal_basis(dim, tf.degs_[k], 1.0);
        kconst = std::max(kconst, e * std::pow(1.0 + i * tf.dt_, 8.0));
    }
    tf.fitted_k_ = kconst;
    return tf;
}

// ---------------------------------------------------------------------------
// Pairing.
// ---------------------------------------------------------------------------

PairingResult log_pairing(const StarBody& body, const TestFunction& phi, double tol) {
    phi.validate();
    check_scan_dim(body.dimension());
    if (body.dimension() != phi.dim)
        throw ArgumentError("log_pairing: body and test function dimensions differ");
    if (!(tol > 0.0)) throw ArgumentError("log_pairing: tol must be positive");
    const int dim = phi.dim;
    const std::array<double, 9> w = square_expand(dim, phi.coeffs);
    const std::array<double, 5> beta = beta_of(dim);
    const double i_rho = radial_mass_integral(phi.r0, phi.r1);
    const double scale = phi.norm * scale_of(dim, w[0], i_rho);
    std::vector<std::vector<double>> axes{phi.axis};
    const auto mc = angular_integrals(body, axes, 0);
    const auto mf = angular_integrals(body, axes, finer_level(dim, 0));
    double normalized = -1.0, err = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const double ratio = w[2 * i] / w[0];
        if (ratio == 0.0) continue;
        normalized += ratio * beta[i] * mf[0][i];
        err += std::fabs(ratio * beta[i] * (mf[0][i] - mc[0][i]));
    }
    PairingResult out;
    out.value = scale * normalized;
    out.scale = scale;
    out.error = scale * err + 1e-14 * scale;
    if (out.error > tol * scale)
        throw NumericalError("log_pairing: angular quadrature error estimate " +
                             format_double(out.error) + " exceeds tol * scale; raise the "
                             "sphere level or loosen tol");
    return out;
}

// ---------------------------------------------------------------------------
// Scan.
// ---------------------------------------------------------------------------

L0Report l0_scan(const StarBody& body, const L0ScanConfig& cfg) {
    const int dim = body.dimension();
    check_scan_dim(dim);
    if (!(cfg.tol > 0.0)) throw ArgumentError("l0_scan: tol must be positive");
    if (cfg.sphere_level < 0) throw ArgumentError("l0_scan: sphere_level must be >= 0");
    const FamilySpec& fam = cfg.family;
    if (fam.k_min > fam.k_max) throw ArgumentError("l0_scan: family k_min > k_max");
    if (fam.k_min < -30 || fam.k_max > 30)
        throw ArgumentError("l0_scan: annulus exponents must lie in [-30, 30]");
    if (fam.max_degree < 1 || fam.max_degree > 4)
        throw ArgumentError("l0_scan: max_degree must be in [1, 4]");
    const int annuli = fam.k_max - fam.k_min + 1;
    const int family_size = annuli * (1 + fam.axes * fam.max_degree);
    if (family_size < 20)
        throw ArgumentError("l0_scan: family spec must define at least 20 test functions");

    const auto axes = family_axes(dim, fam.axes);
    const std::array<double, 5> beta = beta_of(dim);
    const LinTensor& g = linearization(dim);
    const auto mc = angular_integrals(body, axes, cfg.sphere_level);
    const auto mf = angular_integrals(body, axes, finer_level(dim, cfg.sphere_level));

    L0Report report;
    report.body_spec = body.spec_string();
    report.tol = cfg.tol;
    report.family = fam;
    report.family_size = family_size;
    for (std::size_t a = 0; a < axes.size(); ++a)
        for (int i = 1; i <= 4; ++i)
            report.angular_error =
                std::max(report.angular_error, std::fabs(beta[i] * (mf[a][i] - mc[a][i])));

    struct Best {
        double normalized = -std::numeric_limits<double>::infinity();
        std::string id;
        TestFunction phi;
    } best;

    auto push_entry = [&](const std::string& id, double w0, const double* wd,
                          std::size_t axis_index, double i_rho, const TestFunction& phi) {
        L0Entry entry;
        entry.id = id;
        entry.scale = scale_of(dim, w0, i_rho);
        double normalized = -1.0;
        for (int i = 1; i <= 4; ++i)
            if (wd[2 * i] != 0.0)
                normalized += wd[2 * i] / w0 * beta[i] * mf[axis_index][i];
        entry.pairing = normalized * entry.scale;
        report.entries.push_back(entry);
        if (normalized > best.normalized) {
            best.normalized = normalized;
            best.id = id;
            best.phi = phi;
        }
    };

    for (int k = fam.k_min; k <= fam.k_max; ++k) {
        const double r0 = std::ldexp(1.0, k), r1 = std::ldexp(1.0, k + 1);
        const double i_rho = radial_mass_integral(r0, r1);
        const std::string ann = "ann" + std::to_string(k);
        std::vector<double> e1(dim, 0.0);
        e1[0] = 1.0;
        {
            const TestFunction phi = make_test_function(dim, r0, r1, e1, {1.0}, 1.0, ann + "|rad");
            const std::array<double, 9> w = square_expand(dim, phi.coeffs);
            push_entry(phi.id, w[0], w.data(), 0, i_rho, phi);
        }
        for (std::size_t a = 0; a < axes.size(); ++a)
            for (int d = 1; d <= fam.max_degree; ++d) {
                std::vector<double> b(d + 1, 0.0);
                b[d] = dim == 2 ? std::numbers::sqrt2 : 1.0;
                const TestFunction phi = make_test_function(
                    dim, r0, r1, axes[a], b, 1.0,
                    ann + "|" + axis_id(static_cast<int>(a)) + "|sq" + std::to_string(d));
                const std::array<double, 9> w = square_expand(dim, phi.coeffs);
                push_entry(phi.id, w[0], w.data(), a, i_rho, phi);
            }
    }

    if (cfg.optimize) {
        // coefficient-optimized squared members on the middle annulus: the
        // pairing is annulus-independent, so one annulus records them all
        const double r0 = std::ldexp(1.0, std::min(std::max(0, fam.k_min), fam.k_max));
        const double r1 = 2.0 * r0;
        const double i_rho = radial_mass_integral(r0, r1);
        const std::string ann =
            "ann" + std::to_string(std::min(std::max(0, fam.k_min), fam.k_max));
        for (std::size_t a = 0; a < axes.size(); ++a) {
            double q[5][5], s[5][5];
            for (int l = 0; l <= 4; ++l)
                for (int lp = 0; lp <= 4; ++lp) {
                    s[l][lp] = g[l][lp][0];
                    double acc = -g[l][lp][0];
                    for (int i = 1; i <= 4; ++i)
                        acc += g[l][lp][2 * i] * beta[i] * mf[a][i];
                    q[l][lp] = acc;
                }
            std::vector<int> even, odd;
            for (int l = 0; l <= fam.max_degree; ++l) (l % 2 == 0 ? even : odd).push_back(l);
            BlockResult top = top_pencil(even, q, s);
            if (!odd.empty()) {
                const BlockResult other = top_pencil(odd, q, s);
                if (other.mu > top.mu) top = other;
            }
            std::vector<double> b = top.b;
            while (b.size() > 1 && b.back() == 0.0) b.pop_back();
            const std::string id = ann + "|" + axis_id(static_cast<int>(a)) + "|opt";
            const TestFunction phi = make_test_function(dim, r0, r1, axes[a], b, 1.0, id);
            L0Entry entry;
            entry.id = id;
            entry.scale = scale_of(dim, 1.0, i_rho); // b normalized to w_0 = 1
            entry.pairing = top.mu * entry.scale;
            report.entries.push_back(entry);
            if (top.mu > best.normalized) {
                best.normalized = top.mu;
                best.id = id;
                best.phi = phi;
            }
        }
    }

    report.max_normalized = best.normalized;
    if (best.normalized > cfg.tol) {
        report.verdict = "refuted";
        report.witness_id = best.id;
        report.witness = best.phi;
    } else {
        report.verdict = "consistent";
    }
    return report;
}

std::string l0_report_to_json(const L0Report& report) {
    nlohmann::ordered_json j;
    j["body"] = report.body_spec;
    j["verdict"] = report.verdict;
    j["tol"] = report.tol;
    j["max_normalized_pairing"] = report.max_normalized;
    j["witness_id"] = report.witness_id;
    j["family"] = {{"k_min", report.family.k_min},
                   {"k_max", report.family.k_max},
                   {"axes", report.family.axes},
                   {"max_degree", report.family.max_degree},
                   {"size", report.family_size}};
    j["angular_quadrature_error"] = report.angular_error;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const L0Entry& e : report.entries) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["pairing"] = e.pairing;
        je["scale"] = e.scale;
        je["normalized"] = e.pairing / e.scale;
        if (!e.note.empty()) je["note"] = e.note;
        entries.push_back(je);
    }
    j["entries"] = entries;
    if (report.witness) {
        const TestFunction& w = *report.witness;
        j["witness"] = {{"id", w.id},         {"r0", w.r0},
                        {"r1", w.r1},         {"axis", w.axis},
                        {"coefficients", w.coeffs}, {"norm", w.norm}};
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Measure recovery on the circle.
// ---------------------------------------------------------------------------

RepresentingMeasure2D recover_measure_2d(const StarBody& body, int harmonics) {
    if (body.dimension() != 2)
        throw ArgumentError("recover_measure_2d: body must be 2-dimensional");
    if (harmonics < 8 || harmonics % 2 != 0)
        throw ArgumentError("recover_measure_2d: harmonics must be even and >= 8");
    if (harmonics > 4096)
        throw ArgumentError("recover_measure_2d: the kernel coefficient 1/j underflows "
                            "the projection accuracy floor past N = 4096; use a smaller N");
    const int n = harmonics;
    const std::vector<double> breaks = detect_circle_breaks(body);
    const CircleNodes nodes = projection_nodes(breaks, n);
    const std::size_t m = nodes.x.size();
    std::vector<double> hx(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double v = eval_h(body, nodes.x[i]);
        if (!std::isfinite(v))
            throw NumericalError("gauge vanishes at a projection node; cannot recover");
        hx[i] = v;
    }
    // trigonometric projections by cos/sin recurrences per node
    const int half = n / 2;
    std::vector<double> ac(half + 1, 0.0), as(half + 1, 0.0);
    double odd_content = 0.0, habs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double wh = nodes.w[i] * hx[i];
        habs += std::fabs(wh);
        const double c1 = std::cos(nodes.x[i]);
        odd_content += wh * c1; // frequency-1 content must vanish for even gauges
        const double c2 = std::cos(2.0 * nodes.x[i]), s2 = std::sin(2.0 * nodes.x[i]);
        double ck = 1.0, sk = 0.0; // cos/sin(2k x), k = 0
        ac[0] += wh;
        for (int k = 1; k <= half; ++k) {
            const double cn = ck * c2 - sk * s2;
            const double sn = sk * c2 + ck * s2;
            ck = cn;
            sk = sn;
            ac[k] += wh * ck;
            as[k] += wh * sk;
        }
    }
    // frequency-3 evenness probe
    double odd3 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        odd3 += nodes.w[i] * hx[i] * std::cos(3.0 * nodes.x[i]);
    const double odd_tol = 1e-7 * (1.0 + habs);
    if (std::fabs(odd_content) > odd_tol || std::fabs(odd3) > odd_tol)
        throw NumericalError("recover_measure_2d: odd harmonic content of ln gauge "
                             "exceeds the evenness tolerance");
    const double a0 = ac[0] / (2.0 * kPi);
    RepresentingMeasure2D out;
    out.c = a0 + kLn2;
    out.band_limit = half;
    std::vector<double> pc(half + 1, 0.0), ps(half + 1, 0.0);
    for (int j = 1; j <= half; ++j) {
        const double sign = j % 2 == 1 ? 1.0 : -1.0; // (-1)^{j+1}
        pc[j] = sign * j * (ac[j] / kPi);
        ps[j] = sign * j * (as[j] / kPi);
        if (std::fabs(pc[j]) > 1.0 + 1e-6 || std::fabs(ps[j]) > 1.0 + 1e-6)
            throw NumericalError("recover_measure_2d: coefficient tail does not converge "
                                 "(moment " + std::to_string(j) + " exceeds the total "
                                 "mass); the angular spectrum decays too slowly for N = " +
                                 std::to_string(n));
    }
    out.angles.resize(n);
    out.weights.assign(n, 1.0 / n);
    for (int i = 0; i < n; ++i) {
        const double si = i * kPi / n;
        out.angles[i] = si;
        double acc = 0.0;
        for (int j = 1; j < half; ++j)
            acc += 2.0 * (pc[j] * std::cos(2.0 * j * si) + ps[j] * std::sin(2.0 * j * si));
        acc += pc[half] * std::cos(n * si);
        out.weights[i] += acc / n;
    }
    return out;
}

double verify_representation(const StarBody& body, const RepresentingMeasure2D& measure,
                             int samples, int* flagged) {
    if (body.dimension() != 2)
        throw ArgumentError("verify_representation: body must be 2-dimensional");
    if (samples < 1) throw ArgumentError("verify_representation: samples must be >= 1");
    if (measure.angles.size() != measure.weights.size())
        throw ArgumentError("verify_representation: angle/weight size mismatch");
    if (measure.band_limit < 0)
        throw ArgumentError("verify_representation: band limit must be >= 0");
    for (double w : measure.weights)
        if (!std::isfinite(w))
            throw ArgumentError("verify_representation: weights must be finite");
    double mass = 0.0;
    for (double w : measure.weights) mass += w;
    const int half = measure.band_limit;
    std::vector<double> pc(half + 1, 0.0), ps(half + 1, 0.0);
    if (half > 0)
        for (std::size_t i = 0; i < measure.angles.size(); ++i) {
            const double s = measure.angles[i], w = measure.weights[i];
            for (int j = 1; j <= half; ++j) {
                pc[j] += w * std::cos(2.0 * j * s);
                ps[j] += w * std::sin(2.0 * j * s);
            }
        }
    auto rhs_angular = [&](double t) {
        if (half == 0) {
            double acc = measure.c;
            for (std::size_t i = 0; i < measure.angles.size(); ++i)
                acc += measure.weights[i] * std::log(std::fabs(std::cos(t - measure.angles[i])));
            return acc;
        }
        double acc = measure.c - kLn2 * mass;
        for (int j = 1; j <= half; ++j) {
            const double sign = j % 2 == 1 ? 1.0 : -1.0;
            acc += sign / j * (pc[j] * std::cos(2.0 * j * t) + ps[j] * std::sin(2.0 * j * t));
        }
        return acc;
    };
    int flags = 0;
    double worst = 0.0;
    const double radii[3] = {0.25, 1.0, 4.0};
    for (int i = 0; i < samples; ++i) {
        double t = 2.0 * kPi * i / samples;
        bool bumped = false;
        for (int tries = 0; tries < 3; ++tries) {
            const bool lhs_bad = !std::isfinite(eval_h(body, t));
            bool atom_hit = false;
            if (half == 0)
                for (std::size_t j = 0; j < measure.angles.size() && !atom_hit; ++j)
                    if (std::fabs(measure.weights[j]) > 1e-14 &&
                        std::fabs(std::cos(t - measure.angles[j])) < 1e-9)
                        atom_hit = true;
            if (!lhs_bad && !atom_hit) break;
            t += 1e-9;
            bumped = true;
        }
        if (bumped) ++flags;
        const double ha = eval_h(body, t);
        const double ra = rhs_angular(t);
        for (double r : radii) {
            const double lhs = std::log(r) + ha;
            const double rhs = mass * std::log(r) + ra;
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
    }
    if (flagged) *flagged = flags;
    return worst;
}

std::string measure_to_json(const RepresentingMeasure2D& measure) {
    nlohmann::ordered_json j;
    j["angles"] = measure.angles;
    j["weights"] = measure.weights;
    j["c"] = measure.c;
    j["band_limit"] = measure.band_limit;
    return j.dump(2) + "\n";
}

std::string measure_to_csv(const RepresentingMeasure2D& measure) {
    std::string out = "angle,weight\n";
    for (std::size_t i = 0; i < measure.angles.size(); ++i)
        out += format_double(measure.angles[i]) + "," + format_double(measure.weights[i]) + "\n";
    out += "# C=" + format_double(measure.c) + "\n";
    return out;
}

} // namespace gaugelab

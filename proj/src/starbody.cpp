#include "gaugelab/starbody.hpp"

#include "gaugelab/errors.hpp"
#include "gaugelab/format.hpp"
#include "gaugelab/kernels.hpp"
#include "gaugelab/rng.hpp"
#include "gaugelab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gaugelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// "k=v" -> v, or throw naming the production.
std::string field(const std::string& kv, const std::string& key, const char* production) {
    if (kv.compare(0, key.size(), key) != 0 || kv.size() <= key.size() || kv[key.size()] != '=')
        throw ArgumentError(std::string("body spec: expected '") + key + "=' in " + production);
    return kv.substr(key.size() + 1);
}

// Find t with M(t) <= 1 <= M(t_hi) and tighten by bisection; returns a point
// where M is close to 1 (used only to size the gauge bracket).
double orlicz_unit_point(const OrliczFunction& m) {
    double lo = 1.0, hi = 1.0;
    const double m1 = m.m(1.0);
    if (!(m1 >= 0.0))
        throw NumericalError("orlicz: M(1) is not a non-negative number");
    if (m1 < 1.0) {
        for (int i = 0; i < 200 && m.m(hi) < 1.0; ++i) hi *= 2.0;
        if (m.m(hi) < 1.0) throw NumericalError("orlicz: M never reaches 1 (bracketing failure)");
    } else if (m1 > 1.0) {
        for (int i = 0; i < 200 && m.m(lo) > 1.0; ++i) lo *= 0.5;
        if (m.m(lo) > 1.0) throw NumericalError("orlicz: M exceeds 1 at all scales (bracketing failure)");
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (m.m(mid) < 1.0 ? lo : hi) = mid;
    }
    return hi;
}

double orlicz_solve(const OrliczFunction& m, double unit, const double* x, int n, double tol) {
    const double mx = kernels::max_abs(x, static_cast<std::size_t>(n));
    if (mx == 0.0) throw ArgumentError("orlicz gauge: x = 0 (implicit equation undefined)");
    const double sx = kernels::sum_abs(x, static_cast<std::size_t>(n));
    // F(s) = sum M(|x_k|/s) - 1 is decreasing in s. F(mx/unit) >= 0 because the
    // largest term alone reaches 1; F(sx/unit') <= 0 by convexity of M.
    double lo = mx / unit;
    double hi = sx / unit + lo * 1e-12;
    auto fval = [&](double s) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += m.m(std::fabs(x[k]) / s);
        return sum - 1.0;
    };
    double fl = fval(lo);
    if (std::fabs(fl) <= tol) return lo;
    if (fl < 0.0) {
        // unit was only approximate; widen downward.
        for (int i = 0; i < 60 && fl < 0.0; ++i) {
            lo *= 0.5;
            fl = fval(lo);
        }
        if (fl < 0.0) throw NumericalError("orlicz gauge: lower bracket failed");
    }
    double fh = fval(hi);
    for (int i = 0; i < 60 && fh > 0.0; ++i) {
        hi *= 2.0;
        fh = fval(hi);
    }
    if (fh > 0.0) throw NumericalError("orlicz gauge: upper bracket failed");
    double mid = hi;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = fval(mid);
        if (std::fabs(fm) <= tol || hi - lo <= 1e-16 * hi) return mid;
        (fm > 0.0 ? lo : hi) = mid;
    }
    return mid;
}

// Row-major inverse by Gauss elimination with partial pivoting.
std::vector<double> invert(std::vector<double> a, int n) {
    std::vector<double> inv(n * n, 0.0);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) throw ArgumentError("image body: zero matrix");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
        if (std::fabs(a[piv * n + col]) <= 1e-12 * scale)
            throw ArgumentError("image body: matrix is not invertible");
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        const double d = a[col * n + col];
        for (int c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    return inv;
}

} // namespace

OrliczFunction OrliczFunction::poly(double q) {
    if (!(q >= 1.0) || std::isinf(q))
        throw ArgumentError("orlicz poly exponent must satisfy q >= 1");
    OrliczFunction f;
    f.m = [q](double t) { return std::pow(t, q); };
    f.derivative_order = q >= 2.0 ? 2 : (q > 1.0 ? 1 : 0);
    f.tag = "poly(" + format_double(q) + ")";
    return f;
}

double orlicz_gauge(const OrliczFunction& m, const double* x, int n, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("orlicz gauge: tol must be > 0");
    return orlicz_solve(m, orlicz_unit_point(m), x, n, tol);
}

StarBody StarBody::lq(int n, double q) {
    if (n < 1) throw ArgumentError("lq body: dimension must be >= 1");
    if (!(q > 0.0)) throw ArgumentError("lq body: q must be in (0, inf]");
    StarBody b;
    b.kind_ = BodyKind::lq;
    b.n_ = n;
    b.q_ = q;
    b.convex_ = q >= 1.0;
    b.smooth_ = n == 1 || (q > 1.0 && !std::isinf(q));
    return b;
}

StarBody StarBody::orlicz(int n, OrliczFunction m) {
    if (n < 1) throw ArgumentError("orlicz body: dimension must be >= 1");
    if (!m.m) throw ArgumentError("orlicz body: evaluator missing");
    StarBody b;
    b.kind_ = BodyKind::orlicz;
    b.n_ = n;
    b.orlicz_ = std::move(m);
    b.orlicz_unit_ = orlicz_unit_point(b.orlicz_);
    b.convex_ = true;
    b.smooth_ = b.orlicz_.derivative_order >= 2;
    return b;
}

StarBody StarBody::qsum(StarBody left, StarBody right, double q) {
    if (!(q >= 1.0)) throw ArgumentError("qsum body: q must be >= 1");
    StarBody b;
    b.kind_ = BodyKind::qsum;
    b.n_ = left.dimension() + right.dimension();
    b.q_ = q;
    b.convex_ = left.convex() && right.convex();
    b.smooth_ = left.smooth() && right.smooth();
    b.left_ = std::make_shared<const StarBody>(std::move(left));
    b.right_ = std::make_shared<const StarBody>(std::move(right));
    return b;
}

StarBody StarBody::image(int n, std::vector<double> t_row_major) {
    if (n < 1) throw ArgumentError("image body: dimension must be >= 1");
    if (static_cast<int>(t_row_major.size()) != n * n)
        throw ArgumentError("image body: matrix must be n*n row-major");
    StarBody b;
    b.kind_ = BodyKind::image;
    b.n_ = n;
    b.tinv_ = invert(std::move(t_row_major), n);
    b.convex_ = true;
    b.smooth_ = true;
    return b;
}

StarBody StarBody::synth2d(std::vector<double> angles, std::vector<double> weights,
                           double c, std::string source_path) {
    if (angles.empty() || angles.size() != weights.size())
        throw ArgumentError("synth2d body: angle/weight lists must match and be non-empty");
    for (double w : weights)
        if (!(w >= 0.0)) throw ArgumentError("synth2d body: weights must be >= 0");
    for (double a : angles)
        if (!std::isfinite(a)) throw ArgumentError("synth2d body: angles must be finite");
    StarBody b;
    b.kind_ = BodyKind::synth2d;
    b.n_ = 2;
    b.angles_ = std::move(angles);
    b.weights_ = std::move(weights);
    b.c_ = c;
    b.source_path_ = std::move(source_path);
    return b;
}

double StarBody::gauge(const double* x) const {
    const auto n = static_cast<std::size_t>(n_);
    switch (kind_) {
        case BodyKind::lq: {
            if (std::isinf(q_)) return kernels::max_abs(x, n);
            if (q_ == 1.0) return kernels::sum_abs(x, n);
            if (q_ == 2.0) return std::sqrt(kernels::sum_sq(x, n));
            return std::pow(kernels::sum_abs_pow(x, n, q_), 1.0 / q_);
        }
        case BodyKind::orlicz: {
            if (kernels::max_abs(x, n) == 0.0) return 0.0;
            return orlicz_solve(orlicz_, orlicz_unit_, x, n_, 1e-13);
        }
        case BodyKind::qsum: {
            const double gx = left_->gauge(x);
            const double gy = right_->gauge(x + left_->dimension());
            if (q_ == 1.0) return gx + gy;
            if (q_ == 2.0) return std::hypot(gx, gy);
            if (gx == 0.0) return gy;
            if (gy == 0.0) return gx;
            // factor out the max to keep pow() in range
            const double m = std::max(gx, gy);
            return m * std::pow(std::pow(gx / m, q_) + std::pow(gy / m, q_), 1.0 / q_);
        }
        case BodyKind::image: {
            double ss = 0.0;
            for (int i = 0; i < n_; ++i) {
                const double yi = kernels::dot(tinv_.data() + i * n_, x, n);
                ss += yi * yi;
            }
            return std::sqrt(ss);
        }
        case BodyKind::synth2d: {
            const double r = std::hypot(x[0], x[1]);
            if (r == 0.0) return 0.0;
            const double t = std::atan2(x[1], x[0]);
            double h = c_;
            for (std::size_t j = 0; j < angles_.size(); ++j)
                h += weights_[j] * std::log(std::fabs(std::cos(t - angles_[j])));
            return r * std::exp(h);
        }
    }
    return 0.0;
}

double StarBody::gauge(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw ArgumentError("gauge: expected " + std::to_string(n_) + " coordinates, got " +
                            std::to_string(x.size()));
    for (double v : x)
        if (!std::isfinite(v)) throw ArgumentError("gauge: non-finite coordinate");
    return gauge(x.data());
}

std::pair<double, double> StarBody::euclid_bounds(int sphere_samples) const {
    if (sphere_samples < 100)
        throw ArgumentError("euclid_bounds: need at least 100 sphere samples");
    std::vector<double> pts;
    if (n_ == 1) {
        pts = {1.0, -1.0};
    } else if (n_ <= 4) {
        pts = num::sphere_points(n_, sphere_samples);
    } else {
        num::RngStream rng(0x5eedb0d1, static_cast<std::uint64_t>(n_));
        pts.resize(static_cast<std::size_t>(n_) * sphere_samples);
        for (int i = 0; i < sphere_samples; ++i) {
            double ss = 0.0;
            for (int j = 0; j < n_; ++j) {
                const double z = rng.normal();
                pts[i * n_ + j] = z;
                ss += z * z;
            }
            const double inv = 1.0 / std::sqrt(ss);
            for (int j = 0; j < n_; ++j) pts[i * n_ + j] *= inv;
        }
    }
    const int count = static_cast<int>(pts.size()) / n_;
    // Scan pass: rank every sample, keep a handful of candidates per side so a
    // shallow basin with a deep floor is not lost to the raw sample winner.
    std::vector<std::pair<double, int>> ranked(count);
    for (int i = 0; i < count; ++i)
        ranked[i] = {gauge(pts.data() + i * static_cast<std::size_t>(n_)), i};
    std::sort(ranked.begin(), ranked.end());

    // Polish pass: pattern search over the sphere. Coordinate probes handle
    // V-shaped extrema (l_inf corners) as well as smooth ones.
    auto polish = [&](int idx, bool maximize) {
        std::vector<double> x(pts.begin() + idx * static_cast<std::size_t>(n_),
                              pts.begin() + (idx + 1) * static_cast<std::size_t>(n_));
        std::vector<double> cand(n_);
        double best = gauge(x.data());
        double step = 0.05;
        while (step > 1e-10) {
            bool improved = false;
            for (int j = 0; j < n_; ++j) {
                for (double sgn : {1.0, -1.0}) {
                    cand = x;
                    cand[j] += sgn * step;
                    double ss = 0.0;
                    for (double v : cand) ss += v * v;
                    const double inv = 1.0 / std::sqrt(ss);
                    for (auto& v : cand) v *= inv;
                    const double g = gauge(cand.data());
                    if (maximize ? g > best : g < best) {
                        best = g;
                        x = cand;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        return best;
    };

    const int keep = std::min(count, 3);
    double lo = ranked.front().first, hi = ranked.back().first;
    for (int k = 0; k < keep; ++k) {
        lo = std::min(lo, polish(ranked[k].second, false));
        hi = std::max(hi, polish(ranked[count - 1 - k].second, true));
    }
    return {lo, hi};
}

std::string StarBody::spec_string() const {
    switch (kind_) {
        case BodyKind::lq:
            return "lq:n=" + std::to_string(n_) +
                   ",q=" + (std::isinf(q_) ? std::string("inf") : format_double(q_));
        case BodyKind::orlicz:
            if (orlicz_.tag.empty())
                throw UnsupportedOperation("orlicz body without a grammar tag cannot serialize");
            return "orlicz:n=" + std::to_string(n_) + ",M=" + orlicz_.tag;
        case BodyKind::qsum:
            if (right_->kind() == BodyKind::qsum)
                throw UnsupportedOperation("spec grammar cannot express right-nested q-sums");
            return "qsum:left=" + left_->spec_string() + ",right=" + right_->spec_string() +
                   ",q=" + format_double(q_);
        case BodyKind::image: {
            // serialize the body as the image of the *inverse* of tinv_? The
            // original T is not stored; invert back (exact enough for specs).
            std::string s = "image:T=";
            const auto t = invert(tinv_, n_);
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) s += ',';
                s += format_double(t[i]);
            }
            return s;
        }
        case BodyKind::synth2d:
            if (source_path_.empty())
                throw UnsupportedOperation("synth2d body built in memory has no file to reference");
            return "synth2d:file=" + source_path_;
    }
    throw ArgumentError("unknown body kind");
}

namespace {

StarBody parse_synth_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ArgumentError("synth2d: cannot open file '" + path + "'");
    std::vector<double> angles, weights;
    bool have_c = false;
    double c = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        // tolerate CR line endings and surrounding spaces
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t p = 0;
        while (p < line.size() && (line[p] == ' ' || line[p] == '#')) ++p;
        const std::string body = line.substr(p);
        if (body.empty()) continue;
        if (body.rfind("angle", 0) == 0) continue; // column header
        if (body.rfind("C=", 0) == 0) {
            c = parse_double(body.substr(2));
            have_c = true;
            continue;
        }
        const auto parts = split(body, ',');
        if (parts.size() != 2)
            throw ArgumentError("synth2d: expected 'angle,weight' rows in '" + path + "'");
        angles.push_back(parse_double(parts[0]));
        weights.push_back(parse_double(parts[1]));
    }
    if (!have_c) throw ArgumentError("synth2d: file '" + path + "' is missing its C= line");
    return StarBody::synth2d(std::move(angles), std::move(weights), c, path);
}

} // namespace

StarBody StarBody::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ArgumentError("body spec must be one of lq:, orlicz:, qsum:, image:, synth2d:");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "lq") {
        const auto parts = split(rest, ',');
        if (parts.size() != 2) throw ArgumentError("lq spec: expected lq:n=<int>,q=<float|inf>");
        const int n = parse_int(field(parts[0], "n", "lq:n=<int>,q=<float|inf>"));
        const std::string qs = field(parts[1], "q", "lq:n=<int>,q=<float|inf>");
        return lq(n, qs == "inf" ? kInf : parse_double(qs));
    }
    if (kind == "orlicz") {
        const auto parts = split(rest, ',');
        if (parts.size() != 2)
            throw ArgumentError("orlicz spec: expected orlicz:n=<int>,M=poly(<q>)");
        const int n = parse_int(field(parts[0], "n", "orlicz:n=<int>,M=poly(<q>)"));
        const std::string m = field(parts[1], "M", "orlicz:n=<int>,M=poly(<q>)");
        if (m.rfind("poly(", 0) != 0 || m.back() != ')')
            throw ArgumentError("orlicz spec: M must be poly(<q>)");
        return orlicz(n, OrliczFunction::poly(parse_double(m.substr(5, m.size() - 6))));
    }
    if (kind == "qsum") {
        // Flat grammar: take the LAST ",right=" and LAST ",q=" so left-nested
        // q-sums parse; right-nested ones are unserializable and rejected.
        if (rest.rfind("left=", 0) != 0)
            throw ArgumentError("qsum spec: expected qsum:left=<spec>,right=<spec>,q=<float>");
        const auto rpos = rest.rfind(",right=");
        const auto qpos = rest.rfind(",q=");
        if (rpos == std::string::npos || qpos == std::string::npos || qpos <= rpos)
            throw ArgumentError("qsum spec: expected qsum:left=<spec>,right=<spec>,q=<float>");
        const std::string left_spec = rest.substr(5, rpos - 5);
        const std::string right_spec = rest.substr(rpos + 7, qpos - (rpos + 7));
        if (right_spec.rfind("qsum:", 0) == 0)
            throw ArgumentError("qsum spec: right leg must not itself be a q-sum (nest on the left)");
        const double q = parse_double(rest.substr(qpos + 3));
        return qsum(parse(left_spec), parse(right_spec), q);
    }
    if (kind == "image") {
        if (rest.rfind("T=", 0) != 0) throw ArgumentError("image spec: expected image:T=<row-major floats>");
        const auto parts = split(rest.substr(2), ',');
        std::vector<double> t;
        t.reserve(parts.size());
        for (const auto& p : parts) t.push_back(parse_double(p));
        const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(t.size()))));
        if (n < 1 || static_cast<std::size_t>(n) * n != t.size())
            throw ArgumentError("image spec: entry count must be a perfect square");
        return image(n, std::move(t));
    }
    if (kind == "synth2d") {
        if (rest.rfind("file=", 0) != 0)
            throw ArgumentError("synth2d spec: expected synth2d:file=<path>");
        return parse_synth_file(rest.substr(5));
    }
    throw ArgumentError("unknown body kind '" + kind +
                        "' (expected lq, orlicz, qsum, image, synth2d)");
}

double StarBody::lq_exponent() const {
    if (kind_ != BodyKind::lq) throw UnsupportedOperation("lq_exponent: not an lq body");
    return q_;
}

const std::vector<double>& StarBody::synth_angles() const {
    if (kind_ != BodyKind::synth2d) throw UnsupportedOperation("synth_angles: not a synth2d body");
    return angles_;
}

const std::vector<double>& StarBody::synth_weights() const {
    if (kind_ != BodyKind::synth2d) throw UnsupportedOperation("synth_weights: not a synth2d body");
    return weights_;
}

double StarBody::synth_constant() const {
    if (kind_ != BodyKind::synth2d) throw UnsupportedOperation("synth_constant: not a synth2d body");
    return c_;
}

double qsum_gauge(const StarBody& body_x, const StarBody& body_y, double q,
                  const std::vector<double>& x, const std::vector<double>& y) {
    if (static_cast<int>(x.size()) != body_x.dimension() ||
        static_cast<int>(y.size()) != body_y.dimension())
        throw ArgumentError("qsum_gauge: component dimensions do not match the bodies");
    if (!(q >= 1.0)) throw ArgumentError("qsum_gauge: q must be >= 1");
    std::vector<double> xy(x);
    xy.insert(xy.end(), y.begin(), y.end());
    return StarBody::qsum(body_x, body_y, q).gauge(xy);
}

namespace {

// d2/ds2 by the 5-point stencil at step h.
double stencil_d2(const std::function<double(double)>& f, double s, double h) {
    return (-f(s + 2 * h) + 16.0 * f(s + h) - 30.0 * f(s) + 16.0 * f(s - h) - f(s - 2 * h)) /
           (12.0 * h * h);
}

double stencil_d1(const std::function<double(double)>& f, double s, double h) {
    return (-f(s + 2 * h) + 8.0 * f(s + h) - 8.0 * f(s - h) + f(s - 2 * h)) / (12.0 * h);
}

// Three-step extrapolation with an observed convergence order. Gauges that
// are analytic in the scanned coordinate converge at h^4, but odd-power
// structure (|s|^3 for an l3 or cubic q-sum leg) degrades the stencil to
// O(h); fitting the order from successive halvings removes either leading
// term instead of assuming one.
double extrapolate_order(double d1, double d2, double d3, double* err_out) {
    const double e12 = d1 - d2;
    const double e23 = d2 - d3;
    double value, err;
    if (e23 != 0.0 && e12 / e23 > 1.5 && e12 / e23 < 64.0) {
        const double p = std::log2(e12 / e23);
        const double denom = std::exp2(p) - 1.0;
        value = d3 - e23 / denom;
        err = std::fabs(e23 / denom) * 0.5 + std::fabs(e23) * 1e-3;
    } else {
        value = d3 + (d3 - d2) / 15.0;
        err = std::fabs(d3 - d2) / 15.0;
    }
    if (err_out) *err_out = err;
    return value;
}

double second_derivative_along(const StarBody& body, std::vector<double> point, int axis,
                               double h, double* err_out) {
    auto f = [&](double s) {
        point[axis] = s;
        return body.gauge(point.data());
    };
    const double s0 = point[axis];
    const double d1 = stencil_d2(f, s0, h);
    const double d2 = stencil_d2(f, s0, 0.5 * h);
    const double d3 = stencil_d2(f, s0, 0.25 * h);
    double err = 0.0;
    const double value = extrapolate_order(d1, d2, d3, &err);
    if (err_out) {
        // round-off floor of the smallest-step stencil
        point[axis] = s0;
        const double g0 = std::fabs(body.gauge(point.data()));
        *err_out = err + 64.0 * 1e-16 * std::max(1.0, g0) / (h * h * 0.75);
    }
    return value;
}

double first_derivative_along(const StarBody& body, std::vector<double> point, int axis, double h) {
    auto f = [&](double s) {
        point[axis] = s;
        return body.gauge(point.data());
    };
    const double s0 = point[axis];
    const double d1 = stencil_d1(f, s0, h);
    const double d2 = stencil_d1(f, s0, 0.5 * h);
    const double d3 = stencil_d1(f, s0, 0.25 * h);
    return extrapolate_order(d1, d2, d3, nullptr);
}

} // namespace

double second_derivative_x1(const StarBody& body, double x1, const std::vector<double>& xrest,
                            double h, double* err_out) {
    if (!body.smooth())
        throw UnsupportedOperation("second_derivative_x1: body has no smoothness flag");
    if (!(h > 0.0)) throw ArgumentError("second_derivative_x1: h must be > 0");
    if (static_cast<int>(xrest.size()) != body.dimension() - 1)
        throw ArgumentError("second_derivative_x1: xrest must have dimension n-1");
    std::vector<double> point;
    point.reserve(body.dimension());
    point.push_back(x1);
    point.insert(point.end(), xrest.begin(), xrest.end());
    return second_derivative_along(body, std::move(point), 0, h, err_out);
}

Prop3Report prop3_conditions_scan(const StarBody& body, const Prop3ScanSpec& spec) {
    const int n = body.dimension();
    if (n < 4) throw ArgumentError("prop3 scan: requires dimension >= 4");
    if (!body.smooth())
        throw UnsupportedOperation("prop3 scan: body has no smoothness flag");
    const int axis = spec.axis < 0 ? n - 1 : spec.axis;
    if (axis < 0 || axis >= n) throw ArgumentError("prop3 scan: axis out of range");
    if (spec.directions < 8) throw ArgumentError("prop3 scan: need at least 8 directions");

    const auto dirs = num::sphere_points(n - 1, spec.directions);
    const int count = static_cast<int>(dirs.size()) / (n - 1);

    // Embed a section direction into R^n with 0 at the scanned axis.
    auto embed = [&](int i) {
        std::vector<double> p(n, 0.0);
        int k = 0;
        for (int j = 0; j < n; ++j)
            if (j != axis) p[j] = dirs[i * (n - 1) + k++];
        return p;
    };

    Prop3Report rep;
    std::vector<double> x1s = spec.x1_grid;
    std::sort(x1s.begin(), x1s.end(), std::greater<>());
    rep.cond3_profile.reserve(x1s.size());
    std::vector<double> sup(x1s.size(), 0.0);

    for (int i = 0; i < count; ++i) {
        auto p = embed(i);
        const double d1 = first_derivative_along(body, p, axis, spec.h);
        const double d2 = second_derivative_along(body, p, axis, spec.h, nullptr);
        rep.cond1_max_violation = std::max(rep.cond1_max_violation, std::fabs(d1) + std::fabs(d2));
        rep.cond2_c = std::max(rep.cond2_c, std::fabs(d2));
        for (std::size_t k = 0; k < x1s.size(); ++k) {
            auto pk = p;
            pk[axis] = x1s[k];
            // Keep the whole stencil on one side of the axis hyperplane so
            // odd |x1|^p structure does not smear the estimate near 0.
            const double hk = x1s[k] > 0.0 ? std::min(spec.h, x1s[k] / 4.0) : spec.h;
            const double dd = second_derivative_along(body, pk, axis, hk, nullptr);
            sup[k] = std::max(sup[k], std::fabs(dd));
            rep.cond2_c = std::max(rep.cond2_c, std::fabs(dd));
        }
    }
    for (std::size_t k = 0; k < x1s.size(); ++k) rep.cond3_profile.emplace_back(x1s[k], sup[k]);
    return rep;
}

} // namespace gaugelab

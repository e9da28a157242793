#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gaugelab {

// Orlicz function M: [0,inf) -> [0,inf), M(0) = 0, nondecreasing, convex.
// The gauge it induces solves sum_k M(|x_k| / s) = 1 for s.
struct OrliczFunction {
    std::function<double(double)> m;
    int derivative_order = 0; // 0, 1, or 2 derivatives available
    std::string tag;          // serialization form, e.g. "poly(4)"

    static OrliczFunction poly(double q); // M(t) = t^q, q >= 1
};

// Solve sum_k M(|x_k|/s) = 1 by bracketing + bisection (<= 200 iterations).
// Throws ArgumentError for x = 0, NumericalError if the bracket fails.
double orlicz_gauge(const OrliczFunction& m, const double* x, int n, double tol);

enum class BodyKind { lq, orlicz, qsum, image, synth2d };

// Origin-symmetric star body given by its Minkowski functional ("gauge").
// Values are immutable after construction; evaluation is pure.
class StarBody {
public:
    // q in (0, inf]; infinity means the max gauge (explicit kind, not a limit).
    static StarBody lq(int n, double q);
    static StarBody orlicz(int n, OrliczFunction m);
    static StarBody qsum(StarBody left, StarBody right, double q); // q >= 1
    // K = T(unit euclidean ball): gauge(x) = |T^{-1} x|_2. T row-major n*n.
    static StarBody image(int n, std::vector<double> t_row_major);
    // 2-D body from an angular measure: gauge(r u(t)) = r exp(h(t)),
    // h(t) = sum_j w_j ln|cos(t - s_j)| + c. Weights must be >= 0.
    static StarBody synth2d(std::vector<double> angles, std::vector<double> weights,
                            double c, std::string source_path = {});

    int dimension() const { return n_; }
    BodyKind kind() const { return kind_; }
    // Second directional derivatives exist away from coordinate-hyperplane
    // degeneracies (e.g. lq with 1 < q < inf, any ellipsoid).
    bool smooth() const { return smooth_; }
    bool convex() const { return convex_; }

    // Unchecked fast path: x points at dimension() doubles.
    double gauge(const double* x) const;
    // Checked evaluation: dimension and finiteness validated (ArgumentError).
    double gauge(const std::vector<double>& x) const;

    // (min, max) of the gauge over a quasi-uniform sample of the euclidean
    // unit sphere; sphere_samples >= 100.
    std::pair<double, double> euclid_bounds(int sphere_samples) const;

    // Canonical spec string, grammar:
    //   lq:n=<int>,q=<float|inf>
    //   orlicz:n=<int>,M=poly(<q>)
    //   qsum:left=<spec>,right=<spec>,q=<float>
    //   image:T=<row-major floats>
    //   synth2d:file=<path>
    std::string spec_string() const;
    static StarBody parse(const std::string& spec);

    // Introspection used by tests and the measure-recovery round trip.
    double lq_exponent() const;                      // lq kind only
    const std::vector<double>& synth_angles() const; // synth2d kind only
    const std::vector<double>& synth_weights() const;
    double synth_constant() const;

private:
    StarBody() = default;

    BodyKind kind_ = BodyKind::lq;
    int n_ = 0;
    bool smooth_ = false;
    bool convex_ = false;

    double q_ = 2.0; // lq / qsum exponent
    OrliczFunction orlicz_;
    double orlicz_unit_ = 1.0; // t with M(t) = 1, cached for the bracket
    std::shared_ptr<const StarBody> left_, right_;
    std::vector<double> tinv_; // row-major inverse for image kind
    std::vector<double> angles_, weights_;
    double c_ = 0.0;
    std::string source_path_;
};

// (|x|_X^q + |y|_Y^q)^(1/q); q >= 1.
double qsum_gauge(const StarBody& body_x, const StarBody& body_y, double q,
                  const std::vector<double>& x, const std::vector<double>& y);

// Central second derivative of s -> gauge(x1 + s at coordinate `axis`, rest
// fixed) at s = 0 ... i.e. d^2/dx1^2 of gauge((x1, xrest)) evaluated by
// 5-point stencils at steps h and h/2 with Richardson extrapolation.
// err_out (optional) receives the extrapolation error estimate.
// Throws UnsupportedOperation for bodies without the smoothness flag.
double second_derivative_x1(const StarBody& body, double x1,
                            const std::vector<double>& xrest, double h,
                            double* err_out = nullptr);

struct Prop3ScanSpec {
    int axis = -1;            // scanned coordinate; -1 = last
    int directions = 64;      // section-sphere sample count
    std::vector<double> x1_grid = {1.0, 0.7, 0.4, 0.2, 0.1, 0.03, 0.01, 3e-3, 1e-3};
    double h = 1e-2;          // base finite-difference step
};

struct Prop3Report {
    // max over section directions of |first| + |second| derivative at x1 = 0.
    double cond1_max_violation = 0.0;
    // max |second derivative| over the whole (x1, direction) grid.
    double cond2_c = 0.0;
    // (x1, sup over directions of |second derivative|), decreasing x1.
    std::vector<std::pair<double, double>> cond3_profile;
};

// Scan the derivative conditions (vanishing first/second derivative at the
// hyperplane, bounded second derivative, uniform decay of the profile).
// Requires n >= 4 and a smooth body.
Prop3Report prop3_conditions_scan(const StarBody& body, const Prop3ScanSpec& spec);

} // namespace gaugelab

#include "gaugelab/bessel.hpp"

#include "gaugelab/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace gaugelab::num {

namespace {

constexpr double kPi = std::numbers::pi;

// Hankel asymptotic expansion, valid for x comfortably above nu^2/2.
double hankel_j(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = std::fabs(term);
    for (int k = 1; k <= 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * x * k);
        const double at = std::fabs(term);
        if (at > prev) break; // divergence point of the asymptotic series
        prev = at;
        const int r = k % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (at < 1e-18) break;
    }
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Ascending series for integer order n with n! accumulated iteratively.
double series_int_j(int n, double x) {
    const double hx = 0.5 * x;
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    double term = std::pow(hx, n) / fact;
    double sum = term;
    const double x2 = hx * hx;
    for (int k = 1; k <= 200; ++k) {
        term *= -x2 / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::fabs(term) < 1e-18 * (std::fabs(sum) + 1e-300)) break;
    }
    return sum;
}

double j0_impl(double x) { return x < 14.0 ? series_int_j(0, x) : hankel_j(0.0, x); }
double j1_impl(double x) { return x < 14.0 ? series_int_j(1, x) : hankel_j(1.0, x); }

// Miller downward recurrence for integer order, normalized with
// J_0 + 2 J_2 + 2 J_4 + ... = 1.
double miller_int_j(int n, double x) {
    const int half = static_cast<int>(x * 0.5);
    int m = std::max(n, half) + 44;
    m += m & 1;
    double jp = 0.0, jc = 1e-300;
    double sum = 0.0;
    double jn = 0.0;
    for (int k = m; k >= 1; --k) {
        const double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 == n) jn = jc;
        if ((k - 1) % 2 == 0) sum += (k - 1 == 0) ? jc : 2.0 * jc;
        // rescale to avoid overflow
        if (std::fabs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            sum *= 1e-250;
            jn *= 1e-250;
        }
    }
    return jn / sum;
}

double integer_j(int n, double x) {
    if (n == 0) return j0_impl(x);
    if (n == 1) return j1_impl(x);
    if (x == 0.0) return 0.0;
    if (x < 2.0) return series_int_j(n, x); // no cancellation this small
    if (x > n + 4.0) {
        // upward recurrence is stable when the order stays below the argument
        double jm = j0_impl(x), jc = j1_impl(x);
        for (int k = 1; k < n; ++k) {
            const double jp = (2.0 * k / x) * jc - jm;
            jm = jc;
            jc = jp;
        }
        return jc;
    }
    return miller_int_j(n, x);
}

// Spherical Bessel j_l via downward recurrence normalized with
// sum_l (2l+1) j_l^2 = 1; ascending series for small arguments.
double spherical_j(int l, double x) {
    if (x == 0.0) return l == 0 ? 1.0 : 0.0;
    if (l == 0) return std::sin(x) / x;
    if (x < 0.35) {
        // j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
        double dfact = 1.0;
        for (int k = 3; k <= 2 * l + 1; k += 2) dfact *= k;
        double term = std::pow(x, l) / dfact;
        double sum = term;
        const double hx2 = 0.5 * x * x;
        for (int k = 1; k <= 60; ++k) {
            term *= -hx2 / (k * (2.0 * l + 2.0 * k + 1.0));
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    // Downward recurrence j_{k-1} = ((2k+1)/x) j_k - j_{k+1} from a seeded
    // high index; magnitude normalized by sum_k (2k+1) j_k^2 = 1, sign fixed
    // against the closed forms of j_0 or j_1 (they have no common zero).
    const int m = l + 24 + static_cast<int>(x);
    double jnext = 0.0; // j_{k+1}
    double jcur = 1.0;  // j_k, seeded at k = m; squares must not underflow in norm
    double norm = (2.0 * m + 1.0) * jcur * jcur;
    double jl = (l == m) ? jcur : 0.0;
    for (int k = m; k >= 1; --k) {
        const double jprev = ((2.0 * k + 1.0) / x) * jcur - jnext;
        jnext = jcur;
        jcur = jprev; // now holds j_{k-1}
        norm += (2.0 * (k - 1) + 1.0) * jcur * jcur;
        if (k - 1 == l) jl = jcur;
        if (std::fabs(jcur) > 1e150) {
            jcur *= 1e-150;
            jnext *= 1e-150;
            jl *= 1e-150;
            norm *= 1e-300;
        }
    }
    const double j0_est = jcur;  // unnormalized j_0
    const double j1_est = jnext; // unnormalized j_1
    double r = jl / std::sqrt(norm);
    const double j0_true = std::sin(x) / x;
    const double j1_true = std::sin(x) / (x * x) - std::cos(x) / x;
    const double ref_est = std::fabs(j0_true) >= std::fabs(j1_true) ? j0_est : j1_est;
    const double ref_true = std::fabs(j0_true) >= std::fabs(j1_true) ? j0_true : j1_true;
    if (ref_est * ref_true < 0.0) r = -r;
    return r;
}

} // namespace

double bessel_j(double nu, double x) {
    if (!(x >= 0.0)) throw ArgumentError("bessel_j: argument must be >= 0");
    const double two_nu = 2.0 * nu;
    const double k = std::round(two_nu);
    if (std::fabs(two_nu - k) > 1e-12 || k < 0.0 || k > 20.0)
        throw ArgumentError("bessel_j: order must be k/2 with 0 <= k <= 20");
    const int ik = static_cast<int>(k);
    if (ik % 2 == 0) return integer_j(ik / 2, x);
    // half-integer: J_{l+1/2}(x) = sqrt(2x/pi) * j_l(x)
    const int l = (ik - 1) / 2;
    if (x == 0.0) return 0.0;
    return std::sqrt(2.0 * x / kPi) * spherical_j(l, x);
}

} // namespace gaugelab::num

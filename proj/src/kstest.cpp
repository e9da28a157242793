#include "gaugelab/kstest.hpp"

#include "gaugelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaugelab::num {

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.755) {
        // 1 - sqrt(2 pi)/lambda * sum_{k odd} exp(-(k pi)^2 / (8 lambda^2))
        const double v = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 19; k += 2) {
            const double term = std::exp(-v * k * k);
            s += term;
            if (term < 1e-18 * s) break;
        }
        const double q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s;
        return std::clamp(q, 0.0, 1.0);
    }
    if (lambda > 6.8116) return 0.0;
    double s = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n1 = a.size(), n2 = b.size();
    const double en1 = static_cast<double>(n1), en2 = static_cast<double>(n2);
    std::size_t i = 0, j = 0;
    double f1 = 0.0, f2 = 0.0, d = 0.0;
    while (i < n1 && j < n2) {
        const double d1 = a[i], d2 = b[j];
        if (d1 <= d2) f1 = static_cast<double>(++i) / en1;
        if (d2 <= d1) f2 = static_cast<double>(++j) / en2;
        d = std::max(d, std::fabs(f1 - f2));
    }
    d = std::max(d, std::fabs(1.0 - f2));
    d = std::max(d, std::fabs(f1 - 1.0));
    const double ne = en1 * en2 / (en1 + en2);
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q(std::sqrt(ne) * d);
    return r;
}

} // namespace gaugelab::num

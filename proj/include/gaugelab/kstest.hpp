#pragma once

#include <vector>

namespace gaugelab::num {

struct KsResult {
    double statistic = 0.0; // sup |F1 - F2|
    double p_value = 1.0;   // asymptotic Kolmogorov survival value
};

// Two-sample Kolmogorov-Smirnov test. The statistic is the exact sup
// distance between the empirical CDFs; the p-value is the asymptotic
// Kolmogorov distribution evaluated at sqrt(n1*n2/(n1+n2)) * D.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
// with the theta-transformed series for small lambda.
double kolmogorov_q(double lambda);

} // namespace gaugelab::num

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gaugelab::num {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    std::size_t evals = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod (G7, K15) on [a, b]. b may be +infinity,
// in which case [a, inf) is mapped to [0, 1). Stops when the summed error
// estimate drops below max(abs_tol, rel_tol * |value|) or the evaluation
// budget runs out (converged = false; the estimate is still honest).
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol = 0.0,
                        std::size_t max_evals = 500000);

// integral_0^b t^(eps-1) h(t) dt for 0 < eps <= 1, computed with the exact
// substitution u = t^eps, which removes the endpoint singularity:
//   integral = (1/eps) * integral_0^{b^eps} h(u^(1/eps)) du.
// h must be defined at 0 (the substitution evaluates it there).
QuadResult integrate_power_weighted(const std::function<double(double)>& h, double eps,
                                    double b, double abs_tol, double rel_tol = 0.0,
                                    std::size_t max_evals = 500000);

struct GaussLegendre {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// n-point Gauss-Legendre rule (cached per n).
const GaussLegendre& gauss_legendre(int n);

} // namespace gaugelab::num

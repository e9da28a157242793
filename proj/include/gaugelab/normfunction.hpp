#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace gaugelab {

// Radial profile of the Fourier transform of the uniform probability measure
// on S^{n-1}: a Bessel closed form away from 0, its power series near 0.
// omega(n, 0) = 1 exactly. Supported for 2 <= n <= 22.
double omega(int n, double r);

struct MixtureAtom {
    double radius = 0.0;
    double weight = 0.0;
};

// sum_k w_k * omega(n, t * r_k) for nonnegative weights summing to 1.
double schoenberg_mixture(int n, const std::vector<MixtureAtom>& atoms, double t);

// Even continuous scalar profile with f(0) = 1, addressed by a catalog tag.
//
// Tag grammar (canonical forms):
//   exp_pow:p=<float in (0,2]>          f(t) = exp(-|t|^p)
//   omega:n=<int>                       f(t) = omega(n, |t|)
//   mixture:n=<int>,atoms=<r>:<w>;...   f(t) = sum_k w_k omega(n, |t| r_k)
//   constant                            f(t) = 1
class NormFunction {
  public:
    static NormFunction exp_pow(double p);
    static NormFunction omega_kernel(int n);
    static NormFunction mixture(int n, std::vector<MixtureAtom> atoms);
    static NormFunction constant();
    static NormFunction parse(const std::string& tag);

    // Evaluates on |t|, so evenness is exact by construction.
    double operator()(double t) const { return eval_(std::fabs(t)); }
    const std::string& tag() const { return tag_; }

  private:
    NormFunction(std::function<double(double)> eval, std::string tag)
        : eval_(std::move(eval)), tag_(std::move(tag)) {}

    std::function<double(double)> eval_;
    std::string tag_;
};

} // namespace gaugelab

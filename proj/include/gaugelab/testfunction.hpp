#pragma once

#include <string>
#include <vector>

namespace gaugelab {

// Smooth bump supported on [r0, r1], scaled so the maximum (at the midpoint)
// is exactly 1: exp(4/(r1-r0)^2 - 1/((r-r0)(r1-r))) inside, 0 outside.
// Infinitely differentiable across the endpoints.
double bump_radial(double r0, double r1, double r);

// Zonal angular basis on [-1, 1] used by the pairing machinery: Chebyshev T_l
// for dim 2, Legendre P_l for dim 3, Chebyshev U_l for dim 4 (the Gegenbauer
// family attached to each sphere's harmonic decomposition).
double zonal_basis(int dim, int degree, double t);

// Even, non-negative, compactly supported test function
//   phi(x) = norm * rho(|x|) * Z(<x/|x|, axis>)^2,
// rho the bump on [r0, r1], Z = sum_l coeffs[l] * zonal_basis(dim, l, .).
// Z^2 keeps phi >= 0 for every coefficient choice; even degrees and squaring
// keep phi even.
struct TestFunction {
    int dim = 0;
    double r0 = 0.0;
    double r1 = 0.0;
    std::vector<double> axis;   // unit vector, size dim
    std::vector<double> coeffs; // size <= 5 (degree <= 4 before squaring)
    double norm = 1.0;          // overall scale, > 0
    std::string id;

    // Throws ArgumentError when any field is out of contract.
    void validate() const;

    // Angular factor Z(t)^2 at t = <unit, axis>.
    double angular(double t) const;

    // Unchecked fast path; x points at dim doubles.
    double eval(const double* x) const;
    double operator()(const std::vector<double>& x) const;
};

// Convenience constructor: normalizes the axis, fills the id when empty.
TestFunction make_test_function(int dim, double r0, double r1, std::vector<double> axis,
                                std::vector<double> coeffs, double norm = 1.0,
                                std::string id = {});

// Scan axes: uniform half-circle angles (dim 2), Fibonacci hemisphere points
// (dim 3), coordinate axes followed by half-diagonals (1,+-1,+-1,+-1)/2
// (dim 4, count <= 12).
std::vector<std::vector<double>> family_axes(int dim, int count);

struct FamilySpec {
    int k_min = -2; // annuli [2^k, 2^{k+1}], k_min <= k <= k_max
    int k_max = 2;
    int axes = 12;
    int max_degree = 4; // highest zonal degree squared per axis
};

// The standard scan family: per annulus one radial member (psi = 1) plus, for
// every axis and degree 1 <= d <= max_degree, the squared zonal harmonic of
// degree d. In dim 2 the squared member is (1 + cos 2d(theta - theta_axis)).
std::vector<TestFunction> standard_family(int dim, const FamilySpec& spec = {});

} // namespace gaugelab

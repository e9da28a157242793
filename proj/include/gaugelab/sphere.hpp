#pragma once

#include <functional>
#include <vector>

namespace gaugelab::num {

// Quadrature rule on the unit sphere S^{n-1}: row-major nodes (count x n) and
// positive weights summing to the surface area |S^{n-1}|.
//
// n = 2: uniform angle grid (trapezoid; exact for trigonometric polynomials
//        below the grid degree).
// n = 3, 4: product Gauss rules in spherical coordinates. Angular panels are
//        split at multiples of pi/2 so integrands with kinks on coordinate
//        hyperplanes (lq gauges) stay smooth inside each panel.
//
// level scales the node count per panel; the default targets ~1e-10 for
// smooth integrands. Rules are cached per (n, level).
struct SphereRule {
    int dim = 0;
    std::vector<double> points;  // count * dim
    std::vector<double> weights; // count
    std::size_t count() const { return weights.size(); }
};

const SphereRule& sphere_rule(int n, int level = 0);

// Mean of g over S^{n-1}: sphere_rule quadrature divided by the surface area.
// g receives a unit vector of length n.
double sphere_mean(int n, const std::function<double(const double*)>& g, int level = 0);

// Quasi-uniform unit vectors (row-major count x n): uniform angles (n=2),
// Fibonacci spiral (n=3), Halton-seeded normalized Gaussians (n=4).
std::vector<double> sphere_points(int n, int count);

} // namespace gaugelab::num

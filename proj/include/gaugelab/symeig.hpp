#pragma once

#include <vector>

namespace gaugelab::num {

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector; // unit Euclidean norm
};

// Smallest eigenvalue and eigenvector of a symmetric matrix (row-major m*m),
// by cyclic Jacobi rotations run to off-diagonal norm <= 1e-13 * ||A||_F.
// Requires symmetry within 1e-12 relative to the matrix scale.
EigenPair sym_eigen_min(const std::vector<double>& a, int m);

// All eigenvalues, ascending (same Jacobi sweep machinery).
std::vector<double> sym_eigenvalues(const std::vector<double>& a, int m);

} // namespace gaugelab::num

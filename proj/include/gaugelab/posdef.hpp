#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaugelab/normfunction.hpp"
#include "gaugelab/starbody.hpp"

namespace gaugelab {

// Certificate that f(gauge(.)) fails the positive-definiteness test on a
// specific point set: coefficients' * Gram * coefficients = value < 0.
struct GramWitness {
    std::vector<std::vector<double>> points;
    std::vector<double> coefficients; // unit eigenvector of the Gram matrix
    double quadratic_form_value = 0.0;
    double min_eigenvalue = 0.0;
    std::string f_tag;
    std::string body_spec;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0; // random trial that produced the refined config
};

// Row-major m x m matrix with entry (i,j) = f(gauge(x_i - x_j)). Exactly
// symmetric by construction (each pair evaluated once).
std::vector<double> gram_matrix(const NormFunction& f, const StarBody& body,
                                const std::vector<std::vector<double>>& points);

double min_gram_eigenvalue(const NormFunction& f, const StarBody& body,
                           const std::vector<std::vector<double>>& points);

// Randomized search for a witness: half the budget scores random
// configurations (integer lattice draws and Gaussian clouds over 8 length
// scales), half refines the 5 best by step-halving coordinate descent on the
// smallest eigenvalue. Returns absence when nothing dips below -tol; absence
// is inconclusive, not a proof.
std::optional<GramWitness> refute_positive_definiteness(const NormFunction& f,
                                                        const StarBody& body, int m,
                                                        long long budget, std::uint64_t seed,
                                                        double tol);

// Quadratic form recomputed from the witness fields alone (f tag and body
// spec are re-parsed); the stored value must match within 1e-10.
double recompute_quadratic_form(const GramWitness& w);

std::string witness_to_json(const GramWitness& w);
GramWitness witness_from_json(const std::string& text); // malformed -> ArgumentError

} // namespace gaugelab

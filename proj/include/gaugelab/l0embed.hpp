#pragma once

#include "gaugelab/starbody.hpp"
#include "gaugelab/testfunction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gaugelab {

// ---------------------------------------------------------------------------
// Spherical-harmonic Fourier transform of a TestFunction.
//
// phi(x) = rho(|x|) Z(<x^,u>)^2 expands over the zonal basis as
// sum_d w_d A_d(<x^,u>), and its Fourier transform (convention
// phi^(xi) = int phi(x) e^{-i(x,xi)} dx, real and even here) is
//   phi^(xi) = sum_d coef_d R_d(|xi|) A_d(<xi^,u>),
// with per-degree Hankel-type radial transforms
//   R_d(t) = int rho(r) r^{n-1} B_d(rt) dr,   B_d(z) = (z/2)^{-lam} J_{lam+d}(z),
// lam = (n-2)/2. The degree-0 kernel is the sphere characteristic function:
// coef_0 B_0 = |S^{n-1}| Omega_n.
// ---------------------------------------------------------------------------

struct SpectralGridSpec {
    double t_max = 0.0; // radial grid extent; 0 = automatic (covers the decay fit)
    double dt = 0.0;    // grid step; 0 = automatic (several nodes per oscillation)
};

class SpectralTransform {
public:
    int dim() const { return dim_; }
    double t_max() const { return tmax_; }
    double dt() const { return dt_; }

    // Stored even degrees and their transform coefficients.
    const std::vector<int>& degrees() const { return degs_; }
    double coefficient(int degree) const;

    // Radial transform R_degree at radius t, cubic interpolation between grid
    // nodes; 0 beyond the grid (covered by the fitted decay bound).
    double radial(int degree, double t) const;

    // phi^ at a point (unchecked fast path takes dim doubles).
    double value(const double* xi) const;
    double value(const std::vector<double>& xi) const;
    double value_at_zero() const;

    // Grid quadrature of phi^ over R^n (exactly 0 in exact arithmetic) and an
    // upper proxy for int |phi^|; their ratio is the honest cancellation check.
    double integral() const;
    double l1_bound() const;

    // Decay bound |phi^(xi)| <= K (1+|xi|)^{-m} fitted on the tail of the
    // grid; construction fails unless the fitted order reaches m = 8.
    double decay_order() const { return fitted_m_; }
    double decay_constant() const { return fitted_k_; }

private:
    friend SpectralTransform fourier_of_test_function(const TestFunction&,
                                                      const SpectralGridSpec&);
    SpectralTransform() = default;

    int index_of(int degree) const; // -1 when absent

    int dim_ = 0;
    double tmax_ = 0.0, dt_ = 0.0;
    double surf_ = 0.0;
    std::vector<double> axis_;
    std::vector<int> degs_;
    std::vector<double> coefs_;
    std::vector<std::vector<double>> samples_;
    double fitted_m_ = 0.0, fitted_k_ = 0.0;
};

// Build the transform on a radial grid. Throws NumericalError when the grid
// cannot support the order-8 decay fit (too coarse or too short).
SpectralTransform fourier_of_test_function(const TestFunction& phi,
                                           const SpectralGridSpec& grid = {});

// ---------------------------------------------------------------------------
// Logarithmic pairing <(ln ||.||_K)^, phi> = int ln||x||_K phi^(x) dx.
//
// The integrand splits as ln|x|_2 + ln||x/|x|_2||_K. Radially the split
// yields two closed-form integrals of the bump profile,
//   int t^{n-1} R_d(t) dt          = Lambda_d * int rho(r)/r dr,
//   int t^{n-1} ln t * R_0(t) dt   = kappa    * int rho(r)/r dr,
// (Lambda_0 = 0, kappa < 0), leaving one angular integral per degree:
//   M_d(u) = int_S ln||theta||_K A_d(<theta,u>) dsigma.
// The normalization scale is the magnitude of the degree-0 term, so
//   pairing / scale = -1 + sum_{d>=2} (w_d/w_0) beta_d M_d(u).
// For the Euclidean ball every M_d vanishes and the ratio is exactly -1.
// ---------------------------------------------------------------------------

// Closed-form pairing constants, exposed for oracle cross-checks.
double pairing_lambda(int dim, int degree);    // Lambda_d, even degree 0..8
double pairing_kappa(int dim);                 // kappa (negative)
double radial_mass_integral(double r0, double r1); // int rho(r)/r dr of the bump

struct PairingResult {
    double value = 0.0; // the pairing
    double scale = 0.0; // magnitude of the degree-0 term (> 0)
    double error = 0.0; // angular quadrature error estimate, same units as value
};

// tol bounds the accepted quadrature error relative to scale; exceeding it
// throws NumericalError.
PairingResult log_pairing(const StarBody& body, const TestFunction& phi,
                          double tol = 1e-6);

// ---------------------------------------------------------------------------
// Family scan: sign criterion for L0 embedding.
// ---------------------------------------------------------------------------

struct L0ScanConfig {
    FamilySpec family;
    double tol = 1e-4;     // refute when a normalized pairing exceeds +tol
    int sphere_level = 0;  // angular quadrature refinement (0 = default)
    bool optimize = true;  // add per-axis optimized squared-combination members
};

struct L0Entry {
    std::string id;
    double pairing = 0.0;
    double scale = 0.0;
    std::string note; // non-empty when the evaluation failed (error message)
};

struct L0Report {
    std::string body_spec;
    std::vector<L0Entry> entries;
    double max_normalized = 0.0;
    std::string verdict;    // "refuted" | "consistent"
    std::string witness_id; // empty when consistent
    std::optional<TestFunction> witness;
    double tol = 0.0;
    double angular_error = 0.0; // normalized-units quadrature error estimate
    FamilySpec family;
    int family_size = 0;
};

// Evaluates the pairing for every member of the standard family (plus, per
// axis, the squared zonal combination maximizing the normalized pairing over
// coefficients, found by a 5x5 generalized eigenproblem split by parity).
// Verdict "refuted" iff some normalized pairing exceeds +tol; "consistent" is
// not a proof of embedding. The family spec must define >= 20 members.
L0Report l0_scan(const StarBody& body, const L0ScanConfig& cfg = {});

std::string l0_report_to_json(const L0Report& report);

// ---------------------------------------------------------------------------
// Representing measure on the circle: ln||x||_K = int ln|(x,xi)| dmu(xi) + C.
// ---------------------------------------------------------------------------

struct RepresentingMeasure2D {
    std::vector<double> angles;  // grid on [0, pi), antipodes identified
    std::vector<double> weights; // cell masses; negative entries refute validity
    double c = 0.0;
    // Harmonic resolution the weights were recovered at (N/2); 0 marks an
    // exact atomic measure (hand-built), evaluated with the un-truncated
    // kernel by verify_representation.
    int band_limit = 0;
};

// Fourier deconvolution of h(t) = ln||(cos t, sin t)||_K against the kernel
// ln|cos t| (zeroth coefficient -ln 2, even harmonics (-1)^{j+1}/j). The mass
// is pinned to 1 by homogeneity; C comes from the zeroth coefficients. The
// projection quadrature locates gauge kinks/zeros first and grades panels
// toward them, so atomic synthetic bodies round-trip at machine precision.
// harmonics must be even, in [8, 4096]; odd-harmonic content of h beyond
// evenness tolerance and non-convergent moment tails raise NumericalError.
RepresentingMeasure2D recover_measure_2d(const StarBody& body, int harmonics);

// Max over sampled directions (uniform angles, radii {1/4, 1, 4}) of
//   | ln||x||_K - sum_j w_j ln|(x, xi_j)| - C |,
// the sum evaluated through the kernel truncated at the measure's band limit
// (quadrature-consistent weighting; exact kernel when band_limit = 0).
// Samples where the gauge vanishes (directions orthogonal to an atom) are
// perturbed by 1e-9 radians and counted in *flagged when given.
double verify_representation(const StarBody& body, const RepresentingMeasure2D& measure,
                             int samples, int* flagged = nullptr);

std::string measure_to_json(const RepresentingMeasure2D& measure);
// CSV rows "angle,weight" with a trailing "# C=<float>" line; the format
// synth2d bodies parse back.
std::string measure_to_csv(const RepresentingMeasure2D& measure);

} // namespace gaugelab

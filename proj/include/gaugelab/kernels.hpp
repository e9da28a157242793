#pragma once

#include <cstddef>

// Batch array kernels used by the hot loops (gauge evaluation over point
// batches, Gram assembly, Jacobi rotations, quadrature reductions).
//
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vector implementation selected once at runtime. Backends are
// required to agree to floating-point reassociation accuracy; the test suite
// checks them against each other on the same inputs.
namespace gaugelab::kernels {

enum class Backend { scalar, avx2 };

// Backend active for subsequent kernel calls.
Backend active_backend();
const char* backend_name();

bool avx2_supported();

// Force a specific backend (tests use this to compare implementations).
// Throws if the backend is not available on this machine/build.
void force_backend(Backend b);

// Reset to the default choice (environment GAUGELAB_KERNELS=scalar|avx2
// overrides, otherwise the widest supported backend).
void reset_backend();

double reduce_add(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double sum_quartic(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

// sum_i |x_i|^q for arbitrary q > 0. Dispatches to the specialized kernels
// for q in {1, 2, 4}; the general case is a scalar pow loop in both backends.
double sum_abs_pow(const double* x, std::size_t n, double q);

// Plane rotation: (a_i, b_i) <- (c*a_i - s*b_i, s*a_i + c*b_i).
void rot_apply(double* a, double* b, std::size_t n, double c, double s);

// y_i += alpha * x_i
void axpy(double alpha, const double* x, double* y, std::size_t n);

} // namespace gaugelab::kernels

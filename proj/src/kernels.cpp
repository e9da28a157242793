#include "gaugelab/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace gaugelab::kernels {

namespace {

struct Vtable {
    double (*reduce_add)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum_sq)(const double*, std::size_t);
    double (*sum_abs)(const double*, std::size_t);
    double (*sum_quartic)(const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    void (*rot_apply)(double*, double*, std::size_t, double, double);
    void (*axpy)(double, const double*, double*, std::size_t);
};

// ---------------------------------------------------------------- scalar --

double s_reduce_add(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double s_sum_sq(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double s_sum_abs(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
    return acc;
}

double s_sum_quartic(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = x[i] * x[i];
        acc += s * s;
    }
    return acc;
}

double s_max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

void s_rot_apply(double* a, double* b, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i];
        const double bi = b[i];
        a[i] = c * ai - s * bi;
        b[i] = s * ai + c * bi;
    }
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr Vtable kScalar{s_reduce_add, s_dot,     s_sum_sq,    s_sum_abs,
                         s_sum_quartic, s_max_abs, s_rot_apply, s_axpy};

} // namespace

#if defined(GAUGELAB_BUILD_AVX2)
namespace avx2 {
// Implemented in kernels_avx2.cpp (compiled with -mavx2 -mfma).
double reduce_add(const double*, std::size_t);
double dot(const double*, const double*, std::size_t);
double sum_sq(const double*, std::size_t);
double sum_abs(const double*, std::size_t);
double sum_quartic(const double*, std::size_t);
double max_abs(const double*, std::size_t);
void rot_apply(double*, double*, std::size_t, double, double);
void axpy(double, const double*, double*, std::size_t);
} // namespace avx2
#endif

namespace {

#if defined(GAUGELAB_BUILD_AVX2)
constexpr Vtable kAvx2{avx2::reduce_add, avx2::dot,     avx2::sum_sq,
                       avx2::sum_abs,    avx2::sum_quartic, avx2::max_abs,
                       avx2::rot_apply,  avx2::axpy};
#endif

bool cpu_has_avx2() {
#if defined(GAUGELAB_BUILD_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend default_backend() {
    if (const char* env = std::getenv("GAUGELAB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
        return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const Vtable*> g_vt{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Vtable* table_for(Backend b) {
#if defined(GAUGELAB_BUILD_AVX2)
    if (b == Backend::avx2) return &kAvx2;
#else
    (void)b;
#endif
    return &kScalar;
}

const Vtable& vt() {
    const Vtable* t = g_vt.load(std::memory_order_acquire);
    if (!t) {
        const Backend b = default_backend();
        t = table_for(b);
        g_backend.store(b, std::memory_order_relaxed);
        g_vt.store(t, std::memory_order_release);
    }
    return *t;
}

} // namespace

Backend active_backend() {
    vt();
    return g_backend.load(std::memory_order_relaxed);
}

const char* backend_name() {
    return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_supported() { return cpu_has_avx2(); }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2())
        throw std::runtime_error("kernels: avx2 backend not available");
    g_backend.store(b, std::memory_order_relaxed);
    g_vt.store(table_for(b), std::memory_order_release);
}

void reset_backend() {
    const Backend b = default_backend();
    g_backend.store(b, std::memory_order_relaxed);
    g_vt.store(table_for(b), std::memory_order_release);
}

double reduce_add(const double* x, std::size_t n) { return vt().reduce_add(x, n); }
double dot(const double* x, const double* y, std::size_t n) { return vt().dot(x, y, n); }
double sum_sq(const double* x, std::size_t n) { return vt().sum_sq(x, n); }
double sum_abs(const double* x, std::size_t n) { return vt().sum_abs(x, n); }
double sum_quartic(const double* x, std::size_t n) { return vt().sum_quartic(x, n); }
double max_abs(const double* x, std::size_t n) { return vt().max_abs(x, n); }
void rot_apply(double* a, double* b, std::size_t n, double c, double s) { vt().rot_apply(a, b, n, c, s); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { vt().axpy(alpha, x, y, n); }

double sum_abs_pow(const double* x, std::size_t n, double q) {
    if (q == 1.0) return sum_abs(x, n);
    if (q == 2.0) return sum_sq(x, n);
    if (q == 4.0) return sum_quartic(x, n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), q);
    return acc;
}

} // namespace gaugelab::kernels

#include "gaugelab/symeig.hpp"

#include "gaugelab/errors.hpp"
#include "gaugelab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gaugelab::num {

namespace {

struct JacobiState {
    std::vector<double> a;  // row-major m*m, kept symmetric
    std::vector<double> vt; // row i = eigenvector i candidate
    int m;
};

void check_symmetry(const std::vector<double>& a, int m) {
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-12 * (1.0 + scale);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::fabs(a[i * m + j] - a[j * m + i]) > tol)
                throw ArgumentError("sym_eigen: matrix is not symmetric");
}

double off_norm(const std::vector<double>& a, int m) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) s += a[i * m + j] * a[i * m + j];
    return std::sqrt(2.0 * s);
}

void jacobi_run(JacobiState& st) {
    const int m = st.m;
    auto& a = st.a;
    auto& vt = st.vt;

    double fro = 0.0;
    for (double v : a) fro += v * v;
    fro = std::sqrt(fro);
    const double stop = 1e-13 * (fro > 0.0 ? fro : 1.0);

    for (int sweep = 0; sweep < 80; ++sweep) {
        if (off_norm(a, m) <= stop) return;
        for (int p = 0; p < m - 1; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = a[p * m + q];
                if (std::fabs(apq) <= 1e-300) continue;
                const double app = a[p * m + p];
                const double aqq = a[q * m + q];
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A <- J^T A J with J the (p,q) rotation: rows via the batch
                // kernel, columns by symmetry from the rotated rows.
                kernels::rot_apply(&a[p * m], &a[q * m], m, c, s);
                for (int i = 0; i < m; ++i) {
                    a[i * m + p] = a[p * m + i];
                    a[i * m + q] = a[q * m + i];
                }
                const double app_new = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                const double aqq_new = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p * m + p] = app_new;
                a[q * m + q] = aqq_new;
                a[p * m + q] = 0.0;
                a[q * m + p] = 0.0;

                kernels::rot_apply(&vt[p * m], &vt[q * m], m, c, s);
            }
        }
    }
    if (off_norm(a, m) > stop * 100.0)
        throw NumericalError("sym_eigen: Jacobi sweeps did not converge");
}

JacobiState diagonalize(const std::vector<double>& a_in, int m) {
    if (m <= 0) throw ArgumentError("sym_eigen: empty matrix");
    if (static_cast<int>(a_in.size()) != m * m)
        throw ArgumentError("sym_eigen: size mismatch");
    check_symmetry(a_in, m);
    JacobiState st;
    st.m = m;
    st.a = a_in;
    // Exact symmetrization so row/column updates stay consistent.
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double v = 0.5 * (st.a[i * m + j] + st.a[j * m + i]);
            st.a[i * m + j] = v;
            st.a[j * m + i] = v;
        }
    st.vt.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) st.vt[i * m + i] = 1.0;
    jacobi_run(st);
    return st;
}

} // namespace

EigenPair sym_eigen_min(const std::vector<double>& a, int m) {
    JacobiState st = diagonalize(a, m);
    int imin = 0;
    for (int i = 1; i < m; ++i)
        if (st.a[i * m + i] < st.a[imin * m + imin]) imin = i;
    EigenPair out;
    out.value = st.a[imin * m + imin];
    out.vector.assign(st.vt.begin() + static_cast<std::size_t>(imin) * m,
                      st.vt.begin() + static_cast<std::size_t>(imin + 1) * m);
    double nrm = std::sqrt(kernels::sum_sq(out.vector.data(), out.vector.size()));
    if (nrm > 0.0)
        for (double& v : out.vector) v /= nrm;
    return out;
}

std::vector<double> sym_eigenvalues(const std::vector<double>& a, int m) {
    JacobiState st = diagonalize(a, m);
    std::vector<double> ev(m);
    for (int i = 0; i < m; ++i) ev[i] = st.a[i * m + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace gaugelab::num

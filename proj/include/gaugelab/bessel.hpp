#pragma once

namespace gaugelab::num {

// Bessel function of the first kind J_nu(x) for x >= 0 and the order set
// needed by the spherical transforms: nu = k/2 with 0 <= k <= 20 (integer
// and half-integer orders). Ascending series for small x, Hankel asymptotics
// for large x, stabilized recurrences in between; relative accuracy ~1e-12
// away from zeros on [0, 60].
double bessel_j(double nu, double x);

} // namespace gaugelab::num

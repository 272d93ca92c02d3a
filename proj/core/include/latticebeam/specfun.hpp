#pragma once

#include <vector>

namespace latticebeam::specfun {

/// Highest Bessel order accepted by the evaluators below.
inline constexpr int kMaxBesselOrder = 512;

/// J_n(x), Bessel function of the first kind of integer order n.
///
/// Accurate to about 1e-13 absolute for 0 <= x <= 500 and 0 <= n <= 512.
/// Small arguments use the ascending power series; everything else runs
/// Miller's downward recurrence normalised with J_0 + 2 sum J_2k = 1.
///
/// Throws DomainError for x < 0 or non-finite x, RangeError for n outside
/// [0, kMaxBesselOrder].
double bessel_j(int n, double x);

/// J_0(x) .. J_{n_max}(x) in one pass. Element i agrees with bessel_j(i, x).
std::vector<double> bessel_j_sequence(int n_max, double x);

}  // namespace latticebeam::specfun

#include "latticebeam/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latticebeam/error.hpp"

namespace latticebeam::specfun {
namespace {

// Below this argument the ascending series loses at most a couple of ulps to
// cancellation (sum of |terms| is I_n(x) <= I_0(2) ~ 2.3).
constexpr double kSeriesLimit = 2.0;

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;

void check_arguments(int n, double x) {
    if (n < 0 || n > kMaxBesselOrder) {
        throw RangeError("Bessel order " + std::to_string(n) + " outside [0, " +
                         std::to_string(kMaxBesselOrder) + "]");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("Bessel argument must be finite and non-negative, got " +
                          std::to_string(x));
    }
}

// sum_k (-1)^k (x/2)^(2k+n) / (k! (n+k)!), with leading term supplied.
double ascending_series(int n, double x, double leading) {
    const double q = -0.25 * x * x;
    double term = leading;
    double sum = leading;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

std::vector<double> series_sequence(int n_max, double x) {
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    const double half = 0.5 * x;
    double leading = 1.0;  // (x/2)^n / n!
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) leading *= half / n;
        if (leading == 0.0) break;  // underflow: remaining orders are exactly 0 in double
        out[static_cast<std::size_t>(n)] = ascending_series(n, x, leading);
    }
    return out;
}

int miller_start_order(int n_max, double x) {
    const double top = std::max(static_cast<double>(n_max), x);
    int start = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(40.0 * top));
    return start + (start & 1);  // even, so the normalisation sum sees it
}

// Downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from an arbitrary seed,
// normalised afterwards with J_0 + 2 sum_{k>=1} J_{2k} = 1.
std::vector<double> miller_sequence(int n_max, double x) {
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    const int start = miller_start_order(n_max, x);
    const double two_over_x = 2.0 / x;

    double above = 0.0;   // J_{k+1}
    double current = 1e-30;  // J_k, arbitrary scale
    double even_sum = 0.0;   // 2 * sum of even orders >= 2 seen so far

    for (int k = start; k > 0; --k) {
        if (k <= n_max) out[static_cast<std::size_t>(k)] = current;
        if ((k & 1) == 0) even_sum += 2.0 * current;

        const double below = k * two_over_x * current - above;
        above = current;
        current = below;

        if (std::abs(current) > kRescaleAbove) {
            current *= kRescaleFactor;
            above *= kRescaleFactor;
            even_sum *= kRescaleFactor;
            for (double& v : out) v *= kRescaleFactor;
        }
    }
    out[0] = current;
    const double norm = 1.0 / (current + even_sum);
    for (double& v : out) v *= norm;
    return out;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
    check_arguments(n_max, x);
    if (x == 0.0) {
        std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    return x < kSeriesLimit ? series_sequence(n_max, x) : miller_sequence(n_max, x);
}

double bessel_j(int n, double x) {
    check_arguments(n, x);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x < kSeriesLimit) {
        double leading = 1.0;
        for (int i = 1; i <= n && leading != 0.0; ++i) leading *= 0.5 * x / i;
        return leading == 0.0 ? 0.0 : ascending_series(n, x, leading);
    }
    return miller_sequence(n, x)[static_cast<std::size_t>(n)];
}

}  // namespace latticebeam::specfun

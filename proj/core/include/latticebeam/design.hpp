#pragma once

// Fourier-Bessel field design for single-site addressing in a 1-D lattice.
//
// The field A(rho, theta) = J0(k rho) + sum_n a_2n J_2n(k rho) exp(i 2n theta)
// is pinned to A(0) = 1 and forced to vanish at the first M lattice sites
// rho_m = m * lambda_f / 2 on the lattice axis. Only even orders appear,
// which makes the field mirror-symmetric about the addressed site.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace latticebeam::design {

inline constexpr int kMaxSites = 16;
inline constexpr int kDefaultScanDepth = 50;
/// Pivots smaller than this (absolute) make solve_design give up.
inline constexpr double kPivotThreshold = 1e-13;

class LatticeSpec {
public:
    /// Addressing wavelength lambda and lattice (trap) wavelength lambda_f, in um.
    LatticeSpec(double lambda_um, double lambda_f_um);

    double lambda() const noexcept { return lambda_; }
    double lambda_f() const noexcept { return lambda_f_; }
    /// k = 2 pi / lambda, rad/um.
    double wavenumber() const noexcept;
    /// d = lambda_f / 2.
    double site_spacing() const noexcept { return 0.5 * lambda_f_; }
    double site_radius(int m) const noexcept { return m * site_spacing(); }

private:
    double lambda_;
    double lambda_f_;
};

struct FieldPoint {
    double rho;
    double theta;  // [0, 2pi)

    /// Throws DomainError for negative or non-finite rho; wraps theta.
    FieldPoint(double rho_um, double theta_rad);
    static FieldPoint cartesian(double x_um, double y_um);
};

class FourierBesselDesign {
public:
    /// coefficients[i] is a_{2(i+1)}. An empty list is the bare J0 beam.
    FourierBesselDesign(LatticeSpec lattice, std::vector<double> coefficients,
                        double residual_max);

    static FourierBesselDesign pure_bessel(const LatticeSpec& lattice);

    const LatticeSpec& lattice() const noexcept { return lattice_; }
    int m_sites() const noexcept { return static_cast<int>(coefficients_.size()); }
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    /// a_{2n} for n = 1..M.
    double coefficient(int n) const { return coefficients_.at(static_cast<std::size_t>(n - 1)); }
    double residual_max() const noexcept { return residual_max_; }

private:
    LatticeSpec lattice_;
    std::vector<double> coefficients_;
    double residual_max_;
};

struct CrosstalkReport {
    /// site_intensity[m-1] = |A(rho_m, 0)|^2 for m = 1..m_limit.
    std::vector<double> site_intensity;
    double max_intensity = 0.0;
    int m_max = 0;  // 1-based site index
};

/// Builds a report from per-site intensities (index 0 is site 1).
CrosstalkReport make_report(std::vector<double> site_intensity);

/// Solves sum_n a_2n J_2n(k rho_m) = -J0(k rho_m) for m = 1..M by Gaussian
/// elimination with partial pivoting.
///
/// Throws RangeError unless 1 <= m_sites <= kMaxSites, SingularSystemError
/// when a pivot falls below kPivotThreshold.
FourierBesselDesign solve_design(const LatticeSpec& lattice, int m_sites);

std::complex<double> evaluate_field(const FourierBesselDesign& design, const FieldPoint& point);
std::complex<double> evaluate_field_xy(const FourierBesselDesign& design, double x_um,
                                       double y_um);

/// Crosstalk at lattice-site centres on the axis (theta = 0), sites 1..m_limit.
CrosstalkReport crosstalk_report(const FourierBesselDesign& design,
                                 int m_limit = kDefaultScanDepth);

/// Design file: {"lambda_um", "lambda_f_um", "m_sites", "coefficients", "residual_max"}.
/// Numbers carry 17 significant digits so parse(serialize(d)) is bit-exact.
std::string serialize_design(const FourierBesselDesign& design);
/// Throws FormatError on malformed input.
FourierBesselDesign parse_design(const std::string& json_text);

}  // namespace latticebeam::design

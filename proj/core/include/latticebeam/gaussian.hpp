#pragma once

// Gaussian-focusing baseline: how tight a focus (and how fast a lens) is
// needed to address a single lattice site with intensity crosstalk epsilon.
//
// All lengths are micrometres. The lens-aperture relation D ~ p w0 z_lens / z_R
// is not exposed separately; z_lens cancels once it is folded into the NA
// expression, which is what numerical_aperture() evaluates.

#include <string>
#include <vector>

namespace latticebeam::gaussian {

inline constexpr double kDefaultApertureRatio = 3.0;

class GaussianBeam {
public:
    /// Throws DomainError unless waist and wavelength are positive.
    GaussianBeam(double waist_um, double wavelength_um, double peak_intensity = 1.0);

    double waist() const noexcept { return waist_; }
    double wavelength() const noexcept { return wavelength_; }
    double peak_intensity() const noexcept { return peak_intensity_; }
    double rayleigh_range() const noexcept;
    /// Squared 1/e^2 radius w^2(z).
    double radius_squared(double z_um) const noexcept;

private:
    double waist_;
    double wavelength_;
    double peak_intensity_;
};

struct AddressingScenario {
    double lambda_um = 0.78;
    double lambda_f_um = 0.8;
    double epsilon = 1e-5;
    double aperture_ratio = kDefaultApertureRatio;

    double site_spacing() const noexcept { return 0.5 * lambda_f_um; }
    /// Throws DomainError on non-physical values.
    void validate() const;
};

/// I0 exp(-2 rho^2 / w^2(z)). No (w0/w)^2 axial prefactor: this is the
/// transverse profile only, and downstream code only uses z = 0.
double intensity(const GaussianBeam& beam, double rho_um, double z_um);

/// Waist w0 that leaves intensity fraction epsilon at distance lambda_f/2.
double waist_for_crosstalk(double epsilon, double lambda_f_um);

/// Lens NA needed for waist w0_tilde = w0/lambda_f.
/// `wavelength_ratio` is lambda/lambda_f (addressing over lattice).
double numerical_aperture(double w0_tilde, double wavelength_ratio,
                          double aperture_ratio = kDefaultApertureRatio);

/// Fraction of a Gaussian beam's power outside an aperture of diameter p*w.
double aperture_blocked_fraction(double aperture_ratio);

struct SampleRange {
    double min;
    double max;
    double step;

    /// Number of samples min, min+step, ... <= max (with a 1e-9 relative slack
    /// on the end point). Throws DomainError if the range is empty or invalid.
    std::size_t count() const;
    double at(std::size_t i) const noexcept { return min + static_cast<double>(i) * step; }
};

struct NaSample {
    double w0_tilde;
    double na;
};

std::vector<NaSample> na_curve(double wavelength_ratio, const SampleRange& w0_tilde_range,
                               double aperture_ratio = kDefaultApertureRatio);

/// CSV with header `w0_tilde,na`, values printed with %.6g.
std::string na_curve_csv(const std::vector<NaSample>& rows);

}  // namespace latticebeam::gaussian

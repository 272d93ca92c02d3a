#include "latticebeam/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "latticebeam/error.hpp"
#include "latticebeam/text_format.hpp"

namespace latticebeam::gaussian {

GaussianBeam::GaussianBeam(double waist_um, double wavelength_um, double peak_intensity)
    : waist_(waist_um), wavelength_(wavelength_um), peak_intensity_(peak_intensity) {
    if (!(waist_um > 0.0) || !(wavelength_um > 0.0)) {
        throw DomainError("GaussianBeam needs positive waist and wavelength");
    }
}

double GaussianBeam::rayleigh_range() const noexcept {
    return std::numbers::pi * waist_ * waist_ / wavelength_;
}

double GaussianBeam::radius_squared(double z_um) const noexcept {
    const double zr = rayleigh_range();
    return waist_ * waist_ * (1.0 + (z_um * z_um) / (zr * zr));
}

void AddressingScenario::validate() const {
    if (!(lambda_um > 0.0) || !(lambda_f_um > 0.0)) {
        throw DomainError("wavelengths must be positive");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    if (!(aperture_ratio > 0.0)) throw DomainError("aperture ratio p must be positive");
}

double intensity(const GaussianBeam& beam, double rho_um, double z_um) {
    if (!(rho_um >= 0.0)) throw DomainError("rho must be non-negative");
    return beam.peak_intensity() * std::exp(-2.0 * rho_um * rho_um / beam.radius_squared(z_um));
}

double waist_for_crosstalk(double epsilon, double lambda_f_um) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    if (!(lambda_f_um > 0.0)) throw DomainError("lattice wavelength must be positive");
    // extended precision: exp(-2 d^2 / w0^2) amplifies waist error by 2|ln eps|
    const long double w = std::sqrt(-1.0L / (2.0L * std::log(static_cast<long double>(epsilon))));
    return static_cast<double>(w * lambda_f_um);
}

double numerical_aperture(double w0_tilde, double wavelength_ratio, double aperture_ratio) {
    if (!(w0_tilde > 0.0) || !(wavelength_ratio > 0.0) || !(aperture_ratio > 0.0)) {
        throw DomainError("numerical_aperture needs positive w0_tilde, wavelength ratio and p");
    }
    const double x = aperture_ratio / (2.0 * std::numbers::pi * w0_tilde) * wavelength_ratio;
    return x / std::sqrt(1.0 + x * x);
}

double aperture_blocked_fraction(double aperture_ratio) {
    if (!(aperture_ratio > 0.0)) throw DomainError("aperture ratio p must be positive");
    return std::exp(-0.5 * aperture_ratio * aperture_ratio);
}

std::size_t SampleRange::count() const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(step > 0.0)) {
        throw DomainError("sample range needs finite bounds and a positive step");
    }
    if (max < min) throw DomainError("empty sample range (max < min)");
    const double span = (max - min) / step;
    return static_cast<std::size_t>(std::floor(span * (1.0 + 1e-9) + 1e-9)) + 1;
}

std::vector<NaSample> na_curve(double wavelength_ratio, const SampleRange& w0_tilde_range,
                               double aperture_ratio) {
    const std::size_t n = w0_tilde_range.count();
    std::vector<NaSample> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = w0_tilde_range.at(i);
        rows.push_back({w, numerical_aperture(w, wavelength_ratio, aperture_ratio)});
    }
    return rows;
}

std::string na_curve_csv(const std::vector<NaSample>& rows) {
    std::string out = "w0_tilde,na\n";
    for (const auto& r : rows) {
        out += format_g(r.w0_tilde, 6);
        out += ',';
        out += format_g(r.na, 6);
        out += '\n';
    }
    return out;
}

}  // namespace latticebeam::gaussian

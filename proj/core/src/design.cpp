#include "latticebeam/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "latticebeam/error.hpp"
#include "latticebeam/specfun.hpp"

namespace latticebeam::design {
namespace {

using Matrix = std::vector<std::vector<double>>;

// Dense solve with row pivoting; small systems only.
std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (!(std::abs(a[pivot][col]) >= kPivotThreshold)) {
            throw SingularSystemError("design system is singular: pivot " +
                                      std::to_string(std::abs(a[pivot][col])) + " in column " +
                                      std::to_string(col + 1));
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

}  // namespace

LatticeSpec::LatticeSpec(double lambda_um, double lambda_f_um)
    : lambda_(lambda_um), lambda_f_(lambda_f_um) {
    if (!(lambda_um > 0.0) || !std::isfinite(lambda_um) || !(lambda_f_um > 0.0) ||
        !std::isfinite(lambda_f_um)) {
        throw DomainError("lattice wavelengths must be finite and positive");
    }
}

double LatticeSpec::wavenumber() const noexcept { return 2.0 * std::numbers::pi / lambda_; }

FieldPoint::FieldPoint(double rho_um, double theta_rad) : rho(rho_um), theta(theta_rad) {
    if (!(rho_um >= 0.0) || !std::isfinite(rho_um)) {
        throw DomainError("field point radius must be finite and non-negative");
    }
    if (!std::isfinite(theta_rad)) throw DomainError("field point azimuth must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta_rad, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta >= two_pi) theta = 0.0;
}

FieldPoint FieldPoint::cartesian(double x_um, double y_um) {
    return FieldPoint(std::hypot(x_um, y_um), std::atan2(y_um, x_um));
}

FourierBesselDesign::FourierBesselDesign(LatticeSpec lattice, std::vector<double> coefficients,
                                         double residual_max)
    : lattice_(lattice), coefficients_(std::move(coefficients)), residual_max_(residual_max) {
    if (coefficients_.size() > static_cast<std::size_t>(kMaxSites)) {
        throw RangeError("design carries more than " + std::to_string(kMaxSites) +
                         " coefficients");
    }
    for (double c : coefficients_) {
        if (!std::isfinite(c)) throw DomainError("design coefficient is not finite");
    }
}

FourierBesselDesign FourierBesselDesign::pure_bessel(const LatticeSpec& lattice) {
    return FourierBesselDesign(lattice, {}, 0.0);
}

CrosstalkReport make_report(std::vector<double> site_intensity) {
    CrosstalkReport report;
    report.site_intensity = std::move(site_intensity);
    const auto& s = report.site_intensity;
    if (!s.empty()) {
        const auto it = std::max_element(s.begin(), s.end());
        report.max_intensity = *it;
        report.m_max = static_cast<int>(it - s.begin()) + 1;
    }
    return report;
}

FourierBesselDesign solve_design(const LatticeSpec& lattice, int m_sites) {
    if (m_sites < 1 || m_sites > kMaxSites) {
        throw RangeError("number of zeroed sites must lie in [1, " + std::to_string(kMaxSites) +
                         "], got " + std::to_string(m_sites));
    }
    const auto m = static_cast<std::size_t>(m_sites);
    Matrix basis(m, std::vector<double>(m));
    std::vector<double> rhs(m);
    for (std::size_t row = 0; row < m; ++row) {
        const double kr = lattice.wavenumber() * lattice.site_radius(static_cast<int>(row) + 1);
        const auto j = specfun::bessel_j_sequence(2 * m_sites, kr);
        for (std::size_t n = 0; n < m; ++n) basis[row][n] = j[2 * (n + 1)];
        rhs[row] = -j[0];
    }
    auto coefficients = solve_dense(std::move(basis), std::move(rhs));
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw SingularSystemError("design solution is not finite");
    }

    FourierBesselDesign design(lattice, std::move(coefficients), 0.0);
    double residual = 0.0;
    for (int site = 1; site <= m_sites; ++site) {
        residual = std::max(
            residual, std::abs(evaluate_field(design, FieldPoint(lattice.site_radius(site), 0.0))));
    }
    return FourierBesselDesign(lattice, design.coefficients(), residual);
}

std::complex<double> evaluate_field(const FourierBesselDesign& design, const FieldPoint& point) {
    const int orders = 2 * design.m_sites();
    const auto j = specfun::bessel_j_sequence(orders, design.lattice().wavenumber() * point.rho);
    std::complex<double> field = j[0];
    for (int n = 1; n <= design.m_sites(); ++n) {
        const double order = 2.0 * n;
        field += design.coefficient(n) * j[static_cast<std::size_t>(2 * n)] *
                 std::polar(1.0, order * point.theta);
    }
    return field;
}

std::complex<double> evaluate_field_xy(const FourierBesselDesign& design, double x_um,
                                       double y_um) {
    return evaluate_field(design, FieldPoint::cartesian(x_um, y_um));
}

CrosstalkReport crosstalk_report(const FourierBesselDesign& design, int m_limit) {
    if (m_limit < 1 || m_limit < design.m_sites()) {
        throw RangeError("scan depth " + std::to_string(m_limit) +
                         " must cover every zeroed site (M = " +
                         std::to_string(design.m_sites()) + ")");
    }
    std::vector<double> intensity(static_cast<std::size_t>(m_limit));
    for (int m = 1; m <= m_limit; ++m) {
        intensity[static_cast<std::size_t>(m - 1)] =
            std::norm(evaluate_field(design, FieldPoint(design.lattice().site_radius(m), 0.0)));
    }
    return make_report(std::move(intensity));
}

}  // namespace latticebeam::design

#include "latticebeam/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>
#include <utility>

#include "latticebeam/error.hpp"
#include "latticebeam/text_format.hpp"

namespace latticebeam::synthesis {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> plane_wave_sum(const PlaneWaveSet& waves, double x, double y) {
    const double k = waves.wavenumber();
    std::complex<double> acc = 0.0;
    for (const auto& w : waves.waves()) {
        acc += w.weight * std::polar(1.0, k * (x * std::cos(w.phi) + y * std::sin(w.phi)));
    }
    return acc / static_cast<double>(waves.n_beams());
}

std::uint64_t levels(int bits) { return (std::uint64_t{1} << bits) - 1; }

}  // namespace

PlaneWaveSet::PlaneWaveSet(double wavenumber, std::vector<PlaneWave> waves)
    : k_(wavenumber), waves_(std::move(waves)) {
    if (!(k_ > 0.0) || !std::isfinite(k_)) throw DomainError("wavenumber must be positive");
    if (waves_.size() < static_cast<std::size_t>(kMinBeams)) {
        throw DomainError("a plane-wave set needs at least " + std::to_string(kMinBeams) +
                          " beams");
    }
    double previous = -1.0;
    for (const auto& w : waves_) {
        if (!(w.phi >= 0.0 && w.phi < kTwoPi) || !(w.phi > previous)) {
            throw DomainError("beam azimuths must be strictly increasing in [0, 2pi)");
        }
        if (!std::isfinite(w.weight.real()) || !std::isfinite(w.weight.imag())) {
            throw DomainError("beam weight is not finite");
        }
        previous = w.phi;
    }
}

PlaneWaveSet PlaneWaveSet::uniform(double wavenumber, int n_beams) {
    if (n_beams < kMinBeams) {
        throw UndersamplingError("at least " + std::to_string(kMinBeams) + " beams required");
    }
    std::vector<PlaneWave> waves(static_cast<std::size_t>(n_beams));
    for (int j = 0; j < n_beams; ++j) {
        waves[static_cast<std::size_t>(j)] = {kTwoPi * j / n_beams, 1.0};
    }
    return PlaneWaveSet(wavenumber, std::move(waves));
}

double PlaneWaveSet::wavelength() const noexcept { return kTwoPi / k_; }

bool PlaneWaveSet::equally_spaced() const noexcept {
    const double n = static_cast<double>(waves_.size());
    for (std::size_t j = 0; j < waves_.size(); ++j) {
        if (std::abs(waves_[j].phi - kTwoPi * static_cast<double>(j) / n) > 1e-12) return false;
    }
    return true;
}

void QuantizationSpec::validate() const {
    if (amplitude_bits < 1 || amplitude_bits > 32 || phase_bits < 1 || phase_bits > 32) {
        throw RangeError("quantisation bit depths must lie in [1, 32]");
    }
}

WarningSink stderr_warnings() {
    return [](const std::string& message) { std::clog << "warning: " << message << '\n'; };
}

PlaneWaveSet synthesize_waves(const design::FourierBesselDesign& design, int n_beams) {
    const int highest_order = 2 * design.m_sites();
    const int required = std::max(kMinBeams, 2 * highest_order + 2);
    if (n_beams < required) {
        throw UndersamplingError(std::to_string(n_beams) + " beams cannot carry azimuthal order " +
                                 std::to_string(highest_order) + "; need at least " +
                                 std::to_string(required));
    }
    std::vector<PlaneWave> waves(static_cast<std::size_t>(n_beams));
    for (int j = 0; j < n_beams; ++j) {
        const double phi = kTwoPi * j / n_beams;
        // i^(2n) = (-1)^n
        std::complex<double> w = 1.0;
        for (int n = 1; n <= design.m_sites(); ++n) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            w += sign * design.coefficient(n) * std::polar(1.0, 2.0 * n * phi);
        }
        waves[static_cast<std::size_t>(j)] = {phi, w};
    }
    return PlaneWaveSet(design.lattice().wavenumber(), std::move(waves));
}

std::complex<double> evaluate_synthesized(const PlaneWaveSet& waves, double x_um, double y_um) {
    return plane_wave_sum(waves, x_um, y_um);
}

double predicted_ring_diameter(const PlaneWaveSet& waves) noexcept {
    return waves.n_beams() * waves.wavelength() / 4.0;
}

PlaneWaveSet steer(const PlaneWaveSet& waves, const ShiftVector& shift, const WarningSink& warn) {
    if (!std::isfinite(shift.dx) || !std::isfinite(shift.dy)) {
        throw DomainError("shift must be finite");
    }
    const double half_ring = 0.5 * predicted_ring_diameter(waves);
    if (warn && std::hypot(shift.dx, shift.dy) >= half_ring) {
        warn("shift of " + format_g(std::hypot(shift.dx, shift.dy), 4) +
             " um reaches the secondary ring (d_ring/2 = " + format_g(half_ring, 4) + " um)");
    }
    const double k = waves.wavenumber();
    std::vector<PlaneWave> out = waves.waves();
    for (auto& w : out) {
        w.weight *= std::polar(1.0, -k * (shift.dx * std::cos(w.phi) + shift.dy * std::sin(w.phi)));
    }
    return PlaneWaveSet(k, std::move(out));
}

SlmWords slm_words(const PlaneWaveSet& waves, const QuantizationSpec& spec) {
    spec.validate();
    SlmWords words;
    words.spec = spec;
    for (const auto& w : waves.waves()) words.w_max = std::max(words.w_max, std::abs(w.weight));
    if (!(words.w_max > 0.0)) throw DegenerateError("cannot quantise: every weight is zero");

    const auto amp_levels = static_cast<double>(levels(spec.amplitude_bits));
    const std::uint64_t phase_count = std::uint64_t{1} << spec.phase_bits;
    const double phase_step = kTwoPi / static_cast<double>(phase_count);

    words.amplitude.reserve(waves.waves().size());
    words.phase.reserve(waves.waves().size());
    for (const auto& w : waves.waves()) {
        const double a = std::abs(w.weight) / words.w_max * amp_levels;
        words.amplitude.push_back(static_cast<std::uint64_t>(std::llround(a)));
        // round() is symmetric about zero, so conjugate weights get mirrored words
        const auto p = static_cast<std::int64_t>(std::llround(std::arg(w.weight) / phase_step));
        const auto wrapped = ((p % static_cast<std::int64_t>(phase_count)) +
                              static_cast<std::int64_t>(phase_count)) %
                             static_cast<std::int64_t>(phase_count);
        words.phase.push_back(static_cast<std::uint64_t>(wrapped));
    }
    return words;
}

PlaneWaveSet apply_slm_words(const PlaneWaveSet& layout, const SlmWords& words) {
    words.spec.validate();
    if (words.amplitude.size() != layout.waves().size() ||
        words.phase.size() != layout.waves().size()) {
        throw DomainError("SLM word count does not match the number of beams");
    }
    const auto amp_levels = static_cast<double>(levels(words.spec.amplitude_bits));
    const double phase_step =
        kTwoPi / static_cast<double>(std::uint64_t{1} << words.spec.phase_bits);
    std::vector<PlaneWave> out = layout.waves();
    for (std::size_t j = 0; j < out.size(); ++j) {
        // level / levels first, so the top word reproduces w_max exactly
        const double amplitude = words.w_max * (static_cast<double>(words.amplitude[j]) / amp_levels);
        out[j].weight = std::polar(amplitude, static_cast<double>(words.phase[j]) * phase_step);
    }
    return PlaneWaveSet(layout.wavenumber(), std::move(out));
}

PlaneWaveSet quantize(const PlaneWaveSet& waves, const QuantizationSpec& spec) {
    return apply_slm_words(waves, slm_words(waves, spec));
}

design::CrosstalkReport lattice_crosstalk(const PlaneWaveSet& waves,
                                          const design::LatticeSpec& lattice, int m_limit) {
    if (m_limit < 1) throw RangeError("scan depth must be at least one site");
    const double centre = std::norm(plane_wave_sum(waves, 0.0, 0.0));
    if (!(centre > 0.0)) throw DegenerateError("synthesised field vanishes at the origin");
    std::vector<double> intensity(static_cast<std::size_t>(m_limit));
    for (int m = 1; m <= m_limit; ++m) {
        intensity[static_cast<std::size_t>(m - 1)] =
            std::norm(plane_wave_sum(waves, lattice.site_radius(m), 0.0)) / centre;
    }
    return design::make_report(std::move(intensity));
}

std::vector<double> azimuthal_max_profile(const PlaneWaveSet& waves,
                                          const std::vector<double>& radii) {
    const double centre = std::abs(plane_wave_sum(waves, 0.0, 0.0));
    if (!(centre > 0.0)) throw DegenerateError("synthesised field vanishes at the origin");

    const int n = waves.n_beams();
    const int n_az = 4 * n;
    const double k = waves.wavenumber();
    std::vector<double> profile;
    profile.reserve(radii.size());

    if (waves.equally_spaced()) {
        // theta_a - phi_j = 2 pi (a - 4j) / (4N): a circular correlation against
        // one table of 4N kernel values per radius.
        std::vector<double> cosines(static_cast<std::size_t>(n_az));
        for (int m = 0; m < n_az; ++m) cosines[static_cast<std::size_t>(m)] = std::cos(kTwoPi * m / n_az);
        std::vector<std::complex<double>> kernel(static_cast<std::size_t>(n_az));
        for (double r : radii) {
            for (int m = 0; m < n_az; ++m) {
                kernel[static_cast<std::size_t>(m)] = std::polar(1.0, k * r * cosines[static_cast<std::size_t>(m)]);
            }
            double best = 0.0;
            for (int a = 0; a < n_az; ++a) {
                std::complex<double> acc = 0.0;
                for (int j = 0; j < n; ++j) {
                    const int idx = ((a - 4 * j) % n_az + n_az) % n_az;
                    acc += waves.waves()[static_cast<std::size_t>(j)].weight *
                           kernel[static_cast<std::size_t>(idx)];
                }
                best = std::max(best, std::abs(acc));
            }
            profile.push_back(best / n / centre);
        }
        return profile;
    }

    for (double r : radii) {
        double best = 0.0;
        for (int a = 0; a < n_az; ++a) {
            const double theta = kTwoPi * a / n_az;
            best = std::max(best, std::abs(plane_wave_sum(waves, r * std::cos(theta),
                                                          r * std::sin(theta))));
        }
        profile.push_back(best / centre);
    }
    return profile;
}

RingAnalysis ring_analysis(const PlaneWaveSet& waves, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw DomainError("ring threshold must lie in (0, 1]");
    }
    RingAnalysis result;
    result.predicted_diameter = predicted_ring_diameter(waves);

    const double step = waves.wavelength() / 20.0;
    const double inner = 0.25 * result.predicted_diameter;
    const double outer = result.predicted_diameter;

    // one sample either side of the annulus so its end points can be tested
    // as local maxima
    std::vector<double> radii;
    for (auto i = static_cast<long>(std::floor(inner / step)); i * step <= outer + step; ++i) {
        radii.push_back(static_cast<double>(i) * step);
    }
    const auto profile = azimuthal_max_profile(waves, radii);

    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] > inner && radii[i] <= outer) {
            result.peak_amplitude = std::max(result.peak_amplitude, profile[i]);
        }
    }
    const double level = threshold * result.peak_amplitude;
    for (std::size_t i = 1; i + 1 < radii.size(); ++i) {
        if (radii[i] <= inner || radii[i] > outer) continue;
        if (profile[i] >= level && profile[i] > profile[i - 1] && profile[i] >= profile[i + 1]) {
            result.measured_diameter = 2.0 * radii[i];
            result.ring_amplitude = profile[i];
            return result;
        }
    }
    throw NotFoundError("no secondary ring within " + format_g(outer, 4) + " um of the centre");
}

}  // namespace latticebeam::synthesis

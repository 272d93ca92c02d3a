#pragma once

// Finite-N plane-wave realisation of a Fourier-Bessel design.
//
// N plane waves of wavenumber k arrive from azimuths phi_j = 2 pi j / N. Wave
// j carries the complex weight w_j = A_j exp(i chi_j) and the synthesised field
// is
//
//     A(x, y) = (1/N) sum_j w_j exp[i k (x cos phi_j + y sin phi_j)].
//
// With w_j = 1 + sum_n a_2n (-1)^n exp(i 2n phi_j) this reproduces the design
// field up to aliased Bessel orders >= N - 2M. The 1/N factor keeps the
// uniform set at A(0) = 1, the same gauge the design module uses.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latticebeam/design.hpp"

namespace latticebeam::synthesis {

inline constexpr int kMinBeams = 4;
inline constexpr double kDefaultRingThreshold = 0.5;

struct PlaneWave {
    double phi;  // azimuth, radians in [0, 2pi)
    std::complex<double> weight;
};

class PlaneWaveSet {
public:
    /// Throws DomainError unless k > 0, N >= kMinBeams and the azimuths are
    /// strictly increasing inside [0, 2pi).
    PlaneWaveSet(double wavenumber, std::vector<PlaneWave> waves);

    /// N equally spaced waves with unit weight: the discretised J0 beam.
    static PlaneWaveSet uniform(double wavenumber, int n_beams);

    double wavenumber() const noexcept { return k_; }
    double wavelength() const noexcept;
    int n_beams() const noexcept { return static_cast<int>(waves_.size()); }
    const std::vector<PlaneWave>& waves() const noexcept { return waves_; }
    const PlaneWave& operator[](std::size_t j) const { return waves_.at(j); }

    /// True when phi_j = 2 pi j / N for every j (to 1e-12).
    bool equally_spaced() const noexcept;

private:
    double k_;
    std::vector<PlaneWave> waves_;
};

struct QuantizationSpec {
    int amplitude_bits = 14;
    int phase_bits = 14;

    /// Throws RangeError unless both lie in [1, 32].
    void validate() const;
};

struct ShiftVector {
    double dx = 0.0;
    double dy = 0.0;
};

/// Receives human-readable warnings (steering beyond the field of view).
using WarningSink = std::function<void(const std::string&)>;

/// Writes "warning: ..." lines to std::clog.
WarningSink stderr_warnings();

/// Plane-wave weights for `design` on N equally spaced beams.
/// Throws UndersamplingError if n_beams < 4M + 2 (or < kMinBeams).
PlaneWaveSet synthesize_waves(const design::FourierBesselDesign& design, int n_beams);

std::complex<double> evaluate_synthesized(const PlaneWaveSet& waves, double x_um, double y_um);

/// Translates the synthesised field by (dx, dy) via per-beam phase offsets:
/// the steered set satisfies A'(r) = A(r - shift) exactly as a finite sum.
/// Warns through `warn` when |shift| >= d_ring / 2.
PlaneWaveSet steer(const PlaneWaveSet& waves, const ShiftVector& shift,
                   const WarningSink& warn = stderr_warnings());

/// Integer modulator words, one pair per beam. Amplitude word a maps to
/// a / (2^Ba - 1) * w_max; phase word p maps to p * 2pi / 2^Bp.
struct SlmWords {
    QuantizationSpec spec;
    double w_max = 0.0;
    std::vector<std::uint64_t> amplitude;
    std::vector<std::uint64_t> phase;
};

/// Round-to-nearest polar quantisation of every weight.
/// Throws DegenerateError if every weight is zero.
SlmWords slm_words(const PlaneWaveSet& waves, const QuantizationSpec& spec);
/// Rebuilds weights from words, keeping the azimuths and k of `layout`.
PlaneWaveSet apply_slm_words(const PlaneWaveSet& layout, const SlmWords& words);
/// apply_slm_words(waves, slm_words(waves, spec)).
PlaneWaveSet quantize(const PlaneWaveSet& waves, const QuantizationSpec& spec);

/// Intensity at lattice sites rho_m on the axis, relative to |A(0,0)|^2.
/// Throws RangeError for m_limit < 1, DegenerateError if A(0,0) = 0.
design::CrosstalkReport lattice_crosstalk(const PlaneWaveSet& waves,
                                          const design::LatticeSpec& lattice,
                                          int m_limit = design::kDefaultScanDepth);

/// Secondary-ring estimate d_ring ~ N lambda / 4.
double predicted_ring_diameter(const PlaneWaveSet& waves) noexcept;

struct RingAnalysis {
    double measured_diameter = 0.0;   // um
    double predicted_diameter = 0.0;  // um
    double ring_amplitude = 0.0;      // |A| / |A(0,0)| at the detected radius
    double peak_amplitude = 0.0;      // strongest secondary maximum in the scan

    double ratio() const noexcept { return measured_diameter / predicted_diameter; }
};

/// Locates the first ring of secondary maxima of an (approximately uniform,
/// unsteered) synthesis.
///
/// The radial profile P(rho) = max_theta |A(rho, theta)| / |A(0,0)| is sampled
/// every lambda/20 at 4N azimuths, for d_pred/4 < rho <= d_pred (half the
/// predicted ring radius out to twice it). The ring radius is the smallest
/// local radial maximum of P with P >= threshold * max P over that annulus;
/// the measured diameter is twice that radius.
///
/// Throws NotFoundError if no such local maximum exists in the annulus.
RingAnalysis ring_analysis(const PlaneWaveSet& waves,
                           double threshold = kDefaultRingThreshold);

/// Radial profile used by ring_analysis: max over 4N azimuths of |A| / |A(0,0)|
/// at each radius in `radii`.
std::vector<double> azimuthal_max_profile(const PlaneWaveSet& waves,
                                          const std::vector<double>& radii);

/// {"k_rad_per_um": k, "waves": [{"phi", "re", "im"}, ...]} with 17 significant digits.
std::string serialize_waves(const PlaneWaveSet& waves);
/// Throws FormatError on malformed input.
PlaneWaveSet parse_waves(const std::string& json_text);

/// CSV `pixel,amp_word,phase_word`, one integer row per beam.
std::string slm_words_csv(const SlmWords& words);

}  // namespace latticebeam::synthesis

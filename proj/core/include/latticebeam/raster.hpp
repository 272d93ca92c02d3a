#pragma once

// Point-sampled intensity maps |A(x, y)|^2 of a design or a plane-wave set,
// and their CSV / 16-bit PGM export. Samples sit on pixel corners with no
// area averaging; keep step <= lambda/10 for publication-quality maps.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "latticebeam/design.hpp"
#include "latticebeam/synthesis.hpp"

namespace latticebeam::raster {

inline constexpr std::size_t kMaxAxisSamples = 16384;
inline constexpr double kDefaultLogFloor = 1e-8;

struct GridSpec {
    double x_min = -10.0;
    double x_max = 10.0;
    double y_min = -10.0;
    double y_max = 10.0;
    double step = 0.05;

    /// Square grid [-extent, extent]^2.
    static GridSpec centered(double extent_um, double step_um);

    /// Throws DomainError on inverted bounds or step <= 0, RangeError when an
    /// axis would exceed kMaxAxisSamples.
    void validate() const;
    std::size_t nx() const;
    std::size_t ny() const;
};

struct IntensityGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double x_min = 0.0;
    double y_min = 0.0;
    double step = 0.0;
    std::vector<double> values;  // row-major: values[iy * nx + ix]

    double x(std::size_t ix) const noexcept { return x_min + static_cast<double>(ix) * step; }
    double y(std::size_t iy) const noexcept { return y_min + static_cast<double>(iy) * step; }
    double at(std::size_t ix, std::size_t iy) const { return values.at(iy * nx + ix); }

    struct Peak {
        std::size_t ix;
        std::size_t iy;
        double value;
    };
    /// First sample (row-major order) holding the largest value.
    Peak argmax() const;
};

IntensityGrid raster_field(const design::FourierBesselDesign& design, const GridSpec& grid);
IntensityGrid raster_field(const synthesis::PlaneWaveSet& waves, const GridSpec& grid);

enum class ExportFormat { csv, pgm16 };
enum class ScalingKind { linear, log10 };

struct Scaling {
    ScalingKind kind = ScalingKind::linear;
    double floor = kDefaultLogFloor;  // log10 only; must lie in (0, 1)
};

/// "csv" or "pgm16"/"pgm"; anything else throws FormatError.
ExportFormat parse_export_format(std::string_view name);
/// "linear" or "log10"/"log"; anything else throws FormatError.
ScalingKind parse_scaling(std::string_view name);

/// 16-bit pixel words in row-major order, bottom row (iy = 0) first.
std::vector<std::uint16_t> pixel_words(const IntensityGrid& grid, const Scaling& scaling);

/// CSV: header `x,y,intensity`, then one `%.9g` row per sample, row-major.
/// PGM: binary P5, maxval 65535, big-endian, top row (largest y) first.
std::string export_grid(const IntensityGrid& grid, ExportFormat format,
                        const Scaling& scaling = {});

/// Reads the CSV produced by export_grid back into a grid.
IntensityGrid parse_grid_csv(const std::string& csv);

/// Grid geometry and scaling metadata accompanying a PGM.
std::string sidecar_json(const IntensityGrid& grid, const Scaling& scaling);

}  // namespace latticebeam::raster

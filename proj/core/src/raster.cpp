#include "latticebeam/raster.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <json.hpp>

#include "latticebeam/error.hpp"
#include "latticebeam/text_format.hpp"

namespace latticebeam::raster {
namespace {

std::size_t axis_samples(double lo, double hi, double step) {
    const double span = (hi - lo) / step;
    if (!(span * (1.0 + 1e-9) + 1e-9 < static_cast<double>(kMaxAxisSamples))) {
        throw RangeError("grid too large: more than " + std::to_string(kMaxAxisSamples) +
                         " samples per axis");
    }
    return static_cast<std::size_t>(std::floor(span * (1.0 + 1e-9) + 1e-9)) + 1;
}

IntensityGrid empty_grid(const GridSpec& grid) {
    grid.validate();
    IntensityGrid out;
    out.nx = grid.nx();
    out.ny = grid.ny();
    out.x_min = grid.x_min;
    out.y_min = grid.y_min;
    out.step = grid.step;
    out.values.assign(out.nx * out.ny, 0.0);
    return out;
}

std::uint16_t to_word(double t) {
    return static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
}

}  // namespace

GridSpec GridSpec::centered(double extent_um, double step_um) {
    return GridSpec{-extent_um, extent_um, -extent_um, extent_um, step_um};
}

void GridSpec::validate() const {
    for (double v : {x_min, x_max, y_min, y_max, step}) {
        if (!std::isfinite(v)) throw DomainError("grid bounds must be finite");
    }
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    if (!(x_max > x_min) || !(y_max > y_min)) {
        throw DomainError("grid needs x_max > x_min and y_max > y_min");
    }
    (void)nx();
    (void)ny();
}

std::size_t GridSpec::nx() const { return axis_samples(x_min, x_max, step); }
std::size_t GridSpec::ny() const { return axis_samples(y_min, y_max, step); }

IntensityGrid::Peak IntensityGrid::argmax() const {
    if (values.empty()) throw DomainError("empty grid has no maximum");
    const auto it = std::max_element(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(it - values.begin());
    return {idx % nx, idx / nx, *it};
}

IntensityGrid raster_field(const design::FourierBesselDesign& design, const GridSpec& grid) {
    auto out = empty_grid(grid);
    for (std::size_t iy = 0; iy < out.ny; ++iy) {
        for (std::size_t ix = 0; ix < out.nx; ++ix) {
            out.values[iy * out.nx + ix] =
                std::norm(design::evaluate_field_xy(design, out.x(ix), out.y(iy)));
        }
    }
    return out;
}

IntensityGrid raster_field(const synthesis::PlaneWaveSet& waves, const GridSpec& grid) {
    auto out = empty_grid(grid);
    const auto n = static_cast<std::size_t>(waves.n_beams());
    const double k = waves.wavenumber();

    // exp(ik(x cos + y sin)) factors into a column table times a row table.
    std::vector<std::complex<double>> column(out.nx * n);
    for (std::size_t ix = 0; ix < out.nx; ++ix) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto& w = waves.waves()[j];
            column[ix * n + j] = w.weight * std::polar(1.0, k * out.x(ix) * std::cos(w.phi));
        }
    }
    std::vector<std::complex<double>> row(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t iy = 0; iy < out.ny; ++iy) {
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = std::polar(1.0, k * out.y(iy) * std::sin(waves.waves()[j].phi));
        }
        for (std::size_t ix = 0; ix < out.nx; ++ix) {
            std::complex<double> acc = 0.0;
            const auto* c = &column[ix * n];
            for (std::size_t j = 0; j < n; ++j) acc += c[j] * row[j];
            out.values[iy * out.nx + ix] = std::norm(acc * inv_n);
        }
    }
    return out;
}

ExportFormat parse_export_format(std::string_view name) {
    if (name == "csv") return ExportFormat::csv;
    if (name == "pgm16" || name == "pgm") return ExportFormat::pgm16;
    throw FormatError("unsupported export format '" + std::string(name) + "'");
}

ScalingKind parse_scaling(std::string_view name) {
    if (name == "linear") return ScalingKind::linear;
    if (name == "log10" || name == "log") return ScalingKind::log10;
    throw FormatError("unsupported intensity scaling '" + std::string(name) + "'");
}

std::vector<std::uint16_t> pixel_words(const IntensityGrid& grid, const Scaling& scaling) {
    std::vector<std::uint16_t> words(grid.values.size(), 0);
    if (scaling.kind == ScalingKind::linear) {
        const double peak = grid.values.empty()
                                ? 0.0
                                : *std::max_element(grid.values.begin(), grid.values.end());
        if (!(peak > 0.0)) return words;
        for (std::size_t i = 0; i < words.size(); ++i) words[i] = to_word(grid.values[i] / peak);
        return words;
    }
    if (!(scaling.floor > 0.0 && scaling.floor < 1.0)) {
        throw DomainError("log10 scaling floor must lie in (0, 1)");
    }
    const double decades = -std::log10(scaling.floor);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const double v = std::max(grid.values[i], scaling.floor);
        words[i] = to_word((std::log10(v) + decades) / decades);
    }
    return words;
}

std::string export_grid(const IntensityGrid& grid, ExportFormat format, const Scaling& scaling) {
    if (format == ExportFormat::csv) {
        std::string out = "x,y,intensity\n";
        for (std::size_t iy = 0; iy < grid.ny; ++iy) {
            for (std::size_t ix = 0; ix < grid.nx; ++ix) {
                out += format_g(grid.x(ix), 9) + ',' + format_g(grid.y(iy), 9) + ',' +
                       format_g(grid.values[iy * grid.nx + ix], 9) + '\n';
            }
        }
        return out;
    }

    const auto words = pixel_words(grid, scaling);
    std::string out = "P5\n" + std::to_string(grid.nx) + ' ' + std::to_string(grid.ny) + "\n65535\n";
    out.reserve(out.size() + 2 * words.size());
    for (std::size_t r = 0; r < grid.ny; ++r) {
        const std::size_t iy = grid.ny - 1 - r;
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const std::uint16_t w = words[iy * grid.nx + ix];
            out += static_cast<char>(w >> 8);
            out += static_cast<char>(w & 0xFF);
        }
    }
    return out;
}

IntensityGrid parse_grid_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,intensity") {
        throw FormatError("intensity CSV must start with the header x,y,intensity");
    }
    std::vector<double> xs, ys, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x = 0, y = 0, v = 0;
        char c1 = 0, c2 = 0;
        std::istringstream row(line);
        if (!(row >> x >> c1 >> y >> c2 >> v) || c1 != ',' || c2 != ',') {
            throw FormatError("malformed intensity CSV row: " + line);
        }
        xs.push_back(x);
        ys.push_back(y);
        vs.push_back(v);
    }
    if (vs.empty()) throw FormatError("intensity CSV has no samples");

    IntensityGrid grid;
    grid.x_min = xs.front();
    grid.y_min = ys.front();
    grid.nx = 1;
    while (grid.nx < ys.size() && ys[grid.nx] == ys.front()) ++grid.nx;
    if (vs.size() % grid.nx != 0) throw FormatError("intensity CSV is not a full grid");
    grid.ny = vs.size() / grid.nx;
    if (grid.nx > 1) {
        grid.step = xs[1] - xs[0];
    } else if (grid.ny > 1) {
        grid.step = ys[1] - ys[0];
    }
    grid.values = std::move(vs);
    return grid;
}

std::string sidecar_json(const IntensityGrid& grid, const Scaling& scaling) {
    nlohmann::ordered_json doc;
    doc["nx"] = grid.nx;
    doc["ny"] = grid.ny;
    doc["x_min_um"] = grid.x_min;
    doc["y_min_um"] = grid.y_min;
    doc["step_um"] = grid.step;
    doc["row_order"] = "top_row_is_max_y";
    doc["maxval"] = 65535;
    doc["scaling"] = scaling.kind == ScalingKind::linear ? "linear" : "log10";
    if (scaling.kind == ScalingKind::log10) doc["log_floor"] = scaling.floor;
    doc["max_intensity"] =
        grid.values.empty() ? 0.0 : *std::max_element(grid.values.begin(), grid.values.end());
    return doc.dump(2) + "\n";
}

}  // namespace latticebeam::raster

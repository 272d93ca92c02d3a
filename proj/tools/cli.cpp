#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "latticebeam/latticebeam.hpp"
#include "latticebeam/text_format.hpp"

#ifndef LATTICEBEAM_VERSION
#define LATTICEBEAM_VERSION "unknown"
#endif

namespace latticebeam::cli {
namespace {

using nlohmann::ordered_json;

// Bad flag values caught after parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { human, csv, json };

struct RunConfig {
    OutputFormat format = OutputFormat::human;
    std::string output;
    bool quiet = false;

    double lambda = 0.78;
    double lattice = 0.8;
    int sites = 6;
    int max_sites = 6;
    int n_beams = 256;
    int bits = 14;
    int amplitude_bits = 0;  // 0: same as bits
    int phase_bits = 0;
    int scan_depth = design::kDefaultScanDepth;

    std::string design_path;
    std::string waves_path;
    bool uniform = false;
    bool exact = false;
    std::string shift;

    // crosstalk only: 0 means the ideal design field
    int crosstalk_beams = 0;
    int crosstalk_bits = 0;

    double epsilon = 1e-5;
    double aperture_ratio = gaussian::kDefaultApertureRatio;
    std::vector<double> ratios{1.0, 2.0, 10.0};
    std::string range = "0.1:1.0:0.01";

    double extent = 10.0;
    double step = 0.05;
    std::string export_format = "pgm16";
    std::string scale = "log10";
    double floor = raster::kDefaultLogFloor;
    int map_bits = 0;

    double threshold = synthesis::kDefaultRingThreshold;
};

struct Context {
    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) throw IoError("write to '" + path + "' failed");
}

// Reports go to -o when given, stdout otherwise.
void emit(const Context& ctx, const std::string& text) {
    if (ctx.cfg.output.empty()) {
        ctx.out << text;
    } else {
        write_file(ctx.cfg.output, text);
    }
}

// Commands whose -o is a data file: stdout gets a short note instead.
void note(const Context& ctx, const std::string& text) {
    if (!ctx.cfg.quiet) ctx.out << text << '\n';
}

std::string sig3(double v) { return format_g(v, 3); }

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string pad(widths[c] - row[c].size(), ' ');
            if (c == 0) {
                line += row[c] + pad;
            } else {
                line += "  " + pad + row[c];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw UsageError("invalid number '" + text + "' in " + what);
    }
    return v;
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const auto end = text.find(sep, start);
        values.push_back(parse_number(text.substr(start, end - start), what));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return values;
}

synthesis::ShiftVector parse_shift(const std::string& text) {
    const auto v = split_numbers(text, ',', "--shift");
    if (v.size() != 2) throw UsageError("--shift expects dx,dy");
    return {v[0], v[1]};
}

gaussian::SampleRange parse_range(const std::string& text) {
    const auto v = split_numbers(text, ':', "--range");
    if (v.size() != 3) throw UsageError("--range expects min:max:step");
    gaussian::SampleRange range{v[0], v[1], v[2]};
    if (!(range.min > 0.0) || !(range.step > 0.0) || !(range.max >= range.min)) {
        throw UsageError("--range needs 0 < min <= max and step > 0");
    }
    return range;
}

design::LatticeSpec lattice_of(const RunConfig& cfg) {
    return design::LatticeSpec(cfg.lambda, cfg.lattice);
}

design::FourierBesselDesign design_of(const RunConfig& cfg) {
    if (!cfg.design_path.empty()) return design::parse_design(read_file(cfg.design_path));
    return design::solve_design(lattice_of(cfg), cfg.sites);
}

synthesis::WarningSink warnings_of(const Context& ctx) {
    if (ctx.cfg.quiet) return {};
    return [&err = ctx.err](const std::string& message) { err << "warning: " << message << '\n'; };
}

ordered_json report_json(const design::CrosstalkReport& report) {
    ordered_json j;
    j["max_intensity"] = report.max_intensity;
    j["m_max"] = report.m_max;
    j["site_intensity"] = report.site_intensity;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_design(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto d = design::solve_design(lattice_of(cfg), cfg.sites);
    const auto file = design::serialize_design(d);
    if (!cfg.output.empty()) write_file(cfg.output, file);

    switch (cfg.format) {
    case OutputFormat::json:
        ctx.out << file;
        break;
    case OutputFormat::csv:
        ctx.out << "order,coefficient\n";
        for (int n = 1; n <= d.m_sites(); ++n) {
            ctx.out << 2 * n << ',' << format_exact(d.coefficient(n)) << '\n';
        }
        break;
    case OutputFormat::human: {
        if (cfg.quiet && !cfg.output.empty()) break;
        std::vector<std::vector<std::string>> rows;
        for (int n = 1; n <= d.m_sites(); ++n) {
            rows.push_back({"a" + std::to_string(2 * n), format_g(d.coefficient(n), 6)});
        }
        rows.push_back({"max residual", format_g(d.residual_max(), 3)});
        ctx.out << "M = " << d.m_sites() << ", lambda = " << format_g(cfg.lambda, 6)
                << " um, lambda_f = " << format_g(cfg.lattice, 6) << " um\n"
                << render_table(rows);
        break;
    }
    }
    return kSuccess;
}

int cmd_crosstalk(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto d = design_of(cfg);
    design::CrosstalkReport report;
    if (cfg.crosstalk_beams > 0) {
        auto waves = synthesis::synthesize_waves(d, cfg.crosstalk_beams);
        if (cfg.crosstalk_bits > 0) {
            waves = synthesis::quantize(waves, {cfg.crosstalk_bits, cfg.crosstalk_bits});
        }
        report = synthesis::lattice_crosstalk(waves, d.lattice(), cfg.scan_depth);
    } else {
        if (cfg.crosstalk_bits > 0) throw UsageError("--bits needs --n-beams");
        report = design::crosstalk_report(d, cfg.scan_depth);
    }

    std::string text;
    switch (cfg.format) {
    case OutputFormat::json: {
        ordered_json j;
        j["m_sites"] = d.m_sites();
        j["n_beams"] = cfg.crosstalk_beams;
        j["bits"] = cfg.crosstalk_bits;
        j.update(report_json(report));
        text = j.dump(2) + "\n";
        break;
    }
    case OutputFormat::csv:
        text = "m,intensity\n";
        for (std::size_t m = 0; m < report.site_intensity.size(); ++m) {
            text += std::to_string(m + 1) + ',' + format_exact(report.site_intensity[m]) + '\n';
        }
        break;
    case OutputFormat::human: {
        std::vector<std::vector<std::string>> rows{{"site", "|A|^2"}};
        for (std::size_t m = 0; m < report.site_intensity.size(); ++m) {
            rows.push_back({std::to_string(m + 1), sig3(report.site_intensity[m])});
        }
        text = render_table(rows) + "max |A|^2 = " + sig3(report.max_intensity) + " at site " +
               std::to_string(report.m_max) + "\n";
        break;
    }
    }
    emit(ctx, text);
    return kSuccess;
}

struct Table1Column {
    design::FourierBesselDesign design;
    design::CrosstalkReport ideal;
    design::CrosstalkReport quantized;
};

int cmd_table1(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto lattice = lattice_of(cfg);
    std::vector<Table1Column> columns;
    for (int m = 1; m <= cfg.max_sites; ++m) {
        auto d = design::solve_design(lattice, m);
        auto ideal = design::crosstalk_report(d, cfg.scan_depth);
        const auto waves = synthesis::quantize(synthesis::synthesize_waves(d, cfg.n_beams),
                                               {cfg.bits, cfg.bits});
        auto quantized = synthesis::lattice_crosstalk(waves, lattice, cfg.scan_depth);
        columns.push_back({std::move(d), std::move(ideal), std::move(quantized)});
    }

    using Cell = std::function<std::string(const Table1Column&)>;
    const auto grid = [&](const std::string& corner, const std::vector<std::string>& labels,
                          const std::vector<Cell>& cells, const std::string& column_prefix) {
        std::vector<std::vector<std::string>> rows{{corner}};
        for (int m = 1; m <= cfg.max_sites; ++m) rows[0].push_back(column_prefix + std::to_string(m));
        for (std::size_t r = 0; r < labels.size(); ++r) {
            rows.push_back({labels[r]});
            for (const auto& c : columns) rows.back().push_back(cells[r](c));
        }
        return rows;
    };
    const auto coefficient_cell = [](int n, const std::function<std::string(double)>& fmt) {
        return Cell([n, fmt](const Table1Column& c) {
            return n <= c.design.m_sites() ? fmt(c.design.coefficient(n)) : std::string();
        });
    };

    std::string text;
    if (cfg.format == OutputFormat::json) {
        ordered_json j;
        j["lambda_um"] = cfg.lambda;
        j["lambda_f_um"] = cfg.lattice;
        j["n_beams"] = cfg.n_beams;
        j["bits"] = cfg.bits;
        j["scan_depth"] = cfg.scan_depth;
        j["columns"] = ordered_json::array();
        for (const auto& c : columns) {
            ordered_json col;
            col["m_sites"] = c.design.m_sites();
            col["coefficients"] = c.design.coefficients();
            col["max_intensity"] = c.ideal.max_intensity;
            col["m_max"] = c.ideal.m_max;
            col["quantized_max_intensity"] = c.quantized.max_intensity;
            col["quantized_m_max"] = c.quantized.m_max;
            j["columns"].push_back(col);
        }
        text = j.dump(2) + "\n";
    } else {
        const bool csv = cfg.format == OutputFormat::csv;
        const std::function<std::string(double)> fmt = [csv](double v) {
            return csv ? format_exact(v) : format_g(v, 3);
        };
        std::vector<std::string> labels;
        std::vector<Cell> cells;
        for (int n = 1; n <= cfg.max_sites; ++n) {
            labels.push_back("a" + std::to_string(2 * n));
            cells.push_back(coefficient_cell(n, fmt));
        }
        const std::string tag = " (N=" + std::to_string(cfg.n_beams) + ", " +
                                std::to_string(cfg.bits) + "-bit)";
        labels.push_back(csv ? "max_intensity" : "max|A|^2");
        cells.push_back([fmt](const Table1Column& c) { return fmt(c.ideal.max_intensity); });
        labels.push_back("m_max");
        cells.push_back([](const Table1Column& c) { return std::to_string(c.ideal.m_max); });
        labels.push_back(csv ? "quantized_max_intensity" : "max|A|^2" + tag);
        cells.push_back([fmt](const Table1Column& c) { return fmt(c.quantized.max_intensity); });
        labels.push_back(csv ? "quantized_m_max" : "m_max" + tag);
        cells.push_back([](const Table1Column& c) { return std::to_string(c.quantized.m_max); });

        const auto rows = grid(csv ? "quantity" : "", labels, cells, csv ? "M" : "M=");
        if (csv) {
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + row[c];
                text += '\n';
            }
        } else {
            text = "lambda = " + format_g(cfg.lambda, 6) + " um, lambda_f = " +
                   format_g(cfg.lattice, 6) + " um\n" + render_table(rows);
        }
    }
    emit(ctx, text);
    return kSuccess;
}

int cmd_gaussian(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    gaussian::AddressingScenario scenario{cfg.lambda, cfg.lattice, cfg.epsilon, cfg.aperture_ratio};
    scenario.validate();
    const double w0 = gaussian::waist_for_crosstalk(cfg.epsilon, cfg.lattice);
    const double w0_tilde = gaussian::waist_for_crosstalk(cfg.epsilon, 1.0);
    const double na = gaussian::numerical_aperture(w0_tilde, cfg.lambda / cfg.lattice, cfg.aperture_ratio);
    const double blocked = gaussian::aperture_blocked_fraction(cfg.aperture_ratio);

    std::string text;
    switch (cfg.format) {
    case OutputFormat::json: {
        ordered_json j;
        j["epsilon"] = cfg.epsilon;
        j["lambda_um"] = cfg.lambda;
        j["lambda_f_um"] = cfg.lattice;
        j["w0_um"] = w0;
        j["w0_tilde"] = w0_tilde;
        j["aperture_ratio"] = cfg.aperture_ratio;
        j["numerical_aperture"] = na;
        j["blocked_fraction"] = blocked;
        text = j.dump(2) + "\n";
        break;
    }
    case OutputFormat::csv:
        text = "epsilon,lambda_um,lambda_f_um,w0_um,w0_tilde,aperture_ratio,numerical_aperture,"
               "blocked_fraction\n" +
               format_exact(cfg.epsilon) + ',' + format_exact(cfg.lambda) + ',' +
               format_exact(cfg.lattice) + ',' + format_exact(w0) + ',' + format_exact(w0_tilde) +
               ',' + format_exact(cfg.aperture_ratio) + ',' + format_exact(na) + ',' +
               format_exact(blocked) + '\n';
        break;
    case OutputFormat::human:
        text = render_table({
            {"crosstalk epsilon", format_g(cfg.epsilon, 4)},
            {"waist w0 (um)", format_g(w0, 4)},
            {"w0 / lambda_f", format_g(w0_tilde, 4)},
            {"NA (p = " + format_g(cfg.aperture_ratio, 4) + ")", format_g(na, 4)},
            {"power outside aperture", format_g(blocked, 4)},
        });
        break;
    }
    emit(ctx, text);
    return kSuccess;
}

int cmd_na_curve(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto range = parse_range(cfg.range);
    for (double r : cfg.ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("--ratios must be positive");
    }
    // ratios are lambda_f / lambda; the library takes lambda / lambda_f
    std::vector<std::vector<gaussian::NaSample>> curves;
    for (double r : cfg.ratios) curves.push_back(gaussian::na_curve(1.0 / r, range, cfg.aperture_ratio));
    const std::size_t n = curves.front().size();

    std::string text;
    if (cfg.format == OutputFormat::json) {
        ordered_json j;
        j["aperture_ratio"] = cfg.aperture_ratio;
        j["ratios"] = cfg.ratios;
        j["w0_tilde"] = ordered_json::array();
        for (std::size_t i = 0; i < n; ++i) j["w0_tilde"].push_back(curves.front()[i].w0_tilde);
        j["na"] = ordered_json::array();
        for (const auto& curve : curves) {
            ordered_json column = ordered_json::array();
            for (const auto& s : curve) column.push_back(s.na);
            j["na"].push_back(column);
        }
        text = j.dump(2) + "\n";
    } else if (cfg.format == OutputFormat::csv || !cfg.output.empty()) {
        text = "w0_tilde";
        for (double r : cfg.ratios) text += ",na_ratio_" + format_g(r, 6);
        text += '\n';
        for (std::size_t i = 0; i < n; ++i) {
            text += format_g(curves.front()[i].w0_tilde, 6);
            for (const auto& curve : curves) text += ',' + format_g(curve[i].na, 6);
            text += '\n';
        }
    } else {
        std::vector<std::vector<std::string>> rows{{"w0/lambda_f"}};
        for (double r : cfg.ratios) rows[0].push_back("NA(" + format_g(r, 6) + ")");
        for (std::size_t i = 0; i < n; ++i) {
            rows.push_back({sig3(curves.front()[i].w0_tilde)});
            for (const auto& curve : curves) rows.back().push_back(sig3(curve[i].na));
        }
        text = render_table(rows);
    }
    emit(ctx, text);
    return kSuccess;
}

std::string waves_text(const synthesis::PlaneWaveSet& waves, OutputFormat format) {
    switch (format) {
    case OutputFormat::json:
        return synthesis::serialize_waves(waves);
    case OutputFormat::csv: {
        std::string text = "j,phi,re,im\n";
        for (std::size_t j = 0; j < waves.waves().size(); ++j) {
            const auto& w = waves[j];
            text += std::to_string(j) + ',' + format_exact(w.phi) + ',' +
                    format_exact(w.weight.real()) + ',' + format_exact(w.weight.imag()) + '\n';
        }
        return text;
    }
    case OutputFormat::human:
        break;
    }
    std::vector<std::vector<std::string>> rows{{"j", "phi", "|w|", "arg w"}};
    for (std::size_t j = 0; j < waves.waves().size(); ++j) {
        const auto& w = waves[j];
        rows.push_back({std::to_string(j), sig3(w.phi), sig3(std::abs(w.weight)), sig3(std::arg(w.weight))});
    }
    return "k = " + format_g(waves.wavenumber(), 6) + " rad/um, N = " +
           std::to_string(waves.n_beams()) + "\n" + render_table(rows);
}

// The plane-wave file always uses the JSON format; stdout follows --format.
void deliver_waves(const Context& ctx, const synthesis::PlaneWaveSet& waves) {
    if (ctx.cfg.output.empty()) {
        ctx.out << waves_text(waves, ctx.cfg.format);
        return;
    }
    write_file(ctx.cfg.output, synthesis::serialize_waves(waves));
    note(ctx, "wrote " + std::to_string(waves.n_beams()) + " plane waves to " + ctx.cfg.output);
}

int cmd_synth(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.uniform) {
        deliver_waves(ctx, synthesis::PlaneWaveSet::uniform(lattice_of(cfg).wavenumber(), cfg.n_beams));
    } else {
        deliver_waves(ctx, synthesis::synthesize_waves(design_of(cfg), cfg.n_beams));
    }
    return kSuccess;
}

int cmd_steer(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto shift = parse_shift(cfg.shift);
    const auto waves = synthesis::parse_waves(read_file(cfg.waves_path));
    deliver_waves(ctx, synthesis::steer(waves, shift, warnings_of(ctx)));
    return kSuccess;
}

int cmd_quantize(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto waves = synthesis::parse_waves(read_file(cfg.waves_path));
    const synthesis::QuantizationSpec spec{cfg.amplitude_bits ? cfg.amplitude_bits : cfg.bits,
                                           cfg.phase_bits ? cfg.phase_bits : cfg.bits};
    const auto words = synthesis::slm_words(waves, spec);
    const auto rebuilt = synthesis::apply_slm_words(waves, words);
    double worst = 0.0;
    for (std::size_t j = 0; j < waves.waves().size(); ++j) {
        worst = std::max(worst, std::abs(waves[j].weight - rebuilt[j].weight));
    }

    std::string text;
    if (cfg.format == OutputFormat::json) {
        ordered_json j;
        j["amplitude_bits"] = spec.amplitude_bits;
        j["phase_bits"] = spec.phase_bits;
        j["w_max"] = words.w_max;
        j["max_weight_error"] = worst;
        j["amplitude"] = words.amplitude;
        j["phase"] = words.phase;
        text = j.dump(2) + "\n";
    } else {
        text = synthesis::slm_words_csv(words);
    }
    if (!cfg.output.empty()) {
        write_file(cfg.output, text);
        note(ctx, "wrote " + std::to_string(words.amplitude.size()) + " SLM words (" +
                      std::to_string(spec.amplitude_bits) + "-bit amplitude, " +
                      std::to_string(spec.phase_bits) + "-bit phase) to " + cfg.output +
                      "; max |dw| = " + sig3(worst));
    } else if (cfg.format == OutputFormat::human) {
        ctx.out << "w_max = " << format_g(words.w_max, 6) << ", max |dw| = " << sig3(worst) << '\n'
                << text;
    } else {
        ctx.out << text;
    }
    return kSuccess;
}

int cmd_map(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.output.empty()) throw UsageError("map needs -o PATH");
    const auto format = raster::parse_export_format(cfg.export_format);
    const raster::Scaling scaling{raster::parse_scaling(cfg.scale), cfg.floor};
    if (scaling.kind == raster::ScalingKind::log10 && !(cfg.floor > 0.0 && cfg.floor < 1.0)) {
        throw UsageError("--floor must lie in (0, 1)");
    }
    const auto spec = raster::GridSpec::centered(cfg.extent, cfg.step);
    spec.validate();
    const auto shift = cfg.shift.empty() ? synthesis::ShiftVector{} : parse_shift(cfg.shift);

    raster::IntensityGrid grid;
    if (cfg.exact) {
        grid = raster::raster_field(design_of(cfg), spec);
    } else {
        auto waves = cfg.uniform
                         ? synthesis::PlaneWaveSet::uniform(lattice_of(cfg).wavenumber(), cfg.n_beams)
                         : synthesis::synthesize_waves(design_of(cfg), cfg.n_beams);
        if (!cfg.shift.empty()) waves = synthesis::steer(waves, shift, warnings_of(ctx));
        if (cfg.map_bits > 0) waves = synthesis::quantize(waves, {cfg.map_bits, cfg.map_bits});
        grid = raster::raster_field(waves, spec);
    }

    write_file(cfg.output, raster::export_grid(grid, format, scaling));
    if (format == raster::ExportFormat::pgm16) {
        write_file(cfg.output + ".json", raster::sidecar_json(grid, scaling));
    }

    const auto peak = grid.argmax();
    switch (cfg.format) {
    case OutputFormat::json: {
        ordered_json j;
        j["path"] = cfg.output;
        j["nx"] = grid.nx;
        j["ny"] = grid.ny;
        j["peak_x_um"] = grid.x(peak.ix);
        j["peak_y_um"] = grid.y(peak.iy);
        j["peak_intensity"] = peak.value;
        ctx.out << j.dump(2) << '\n';
        break;
    }
    case OutputFormat::csv:
        ctx.out << "path,nx,ny,peak_x_um,peak_y_um,peak_intensity\n"
                << cfg.output << ',' << grid.nx << ',' << grid.ny << ',' << format_exact(grid.x(peak.ix))
                << ',' << format_exact(grid.y(peak.iy)) << ',' << format_exact(peak.value) << '\n';
        break;
    case OutputFormat::human:
        note(ctx, "wrote " + std::to_string(grid.nx) + " x " + std::to_string(grid.ny) + " map to " +
                      cfg.output + "; peak " + sig3(peak.value) + " at (" +
                      format_g(grid.x(peak.ix), 6) + ", " + format_g(grid.y(peak.iy), 6) + ") um");
        break;
    }
    return kSuccess;
}

int cmd_ring(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto waves = synthesis::PlaneWaveSet::uniform(lattice_of(cfg).wavenumber(), cfg.n_beams);
    const auto ring = synthesis::ring_analysis(waves, cfg.threshold);

    std::string text;
    switch (cfg.format) {
    case OutputFormat::json: {
        ordered_json j;
        j["n_beams"] = cfg.n_beams;
        j["lambda_um"] = cfg.lambda;
        j["predicted_diameter_um"] = ring.predicted_diameter;
        j["measured_diameter_um"] = ring.measured_diameter;
        j["ratio"] = ring.ratio();
        j["ring_amplitude"] = ring.ring_amplitude;
        text = j.dump(2) + "\n";
        break;
    }
    case OutputFormat::csv:
        text = "n_beams,lambda_um,predicted_diameter_um,measured_diameter_um,ratio,ring_amplitude\n" +
               std::to_string(cfg.n_beams) + ',' + format_exact(cfg.lambda) + ',' +
               format_exact(ring.predicted_diameter) + ',' + format_exact(ring.measured_diameter) +
               ',' + format_exact(ring.ratio()) + ',' + format_exact(ring.ring_amplitude) + '\n';
        break;
    case OutputFormat::human:
        text = render_table({
            {"predicted d_ring (um)", sig3(ring.predicted_diameter)},
            {"measured d_ring (um)", sig3(ring.measured_diameter)},
            {"measured / predicted", sig3(ring.ratio())},
            {"ring |A| / |A(0)|", sig3(ring.ring_amplitude)},
        });
        break;
    }
    emit(ctx, text);
    return kSuccess;
}

// ---------------------------------------------------------------------------

void add_lattice_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--lambda", cfg.lambda, "addressing wavelength (um)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--lattice", cfg.lattice, "lattice wavelength lambda_f (um)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

CLI::Option* add_sites(CLI::App* sub, RunConfig& cfg) {
    return sub->add_option("--sites", cfg.sites, "number of zeroed sites M")
        ->check(CLI::Range(1, design::kMaxSites))
        ->capture_default_str();
}

void add_design_source(CLI::App* sub, RunConfig& cfg) {
    add_lattice_options(sub, cfg);
    auto* sites = add_sites(sub, cfg);
    auto* file = sub->add_option("--design", cfg.design_path, "design file from `design -o`");
    file->excludes(sites)->excludes("--lambda")->excludes("--lattice");
}

CLI::Option* add_beams(CLI::App* sub, RunConfig& cfg, int minimum) {
    return sub->add_option("--n-beams", cfg.n_beams, "number of plane waves N")
        ->check(CLI::Range(minimum, 1 << 20))
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Fourier-Bessel lattice-addressing fields: design, synthesis and maps",
                 "latticebeam"};
    app.require_subcommand(0, 1);

    std::string format = "human";
    bool show_version = false;
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"human", "csv", "json"}))
        ->capture_default_str();
    app.add_option("-o,--output", cfg.output, "output path");
    app.add_flag("--quiet", cfg.quiet, "suppress notes and warnings");
    app.add_flag("--version", show_version, "print the version to stderr");

    const auto subcommand = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        return sub;
    };

    auto* design_cmd = subcommand("design", "solve for the coefficients zeroing M sites");
    add_lattice_options(design_cmd, cfg);
    add_sites(design_cmd, cfg);

    auto* crosstalk_cmd = subcommand("crosstalk", "per-site crosstalk of a design");
    add_design_source(crosstalk_cmd, cfg);
    crosstalk_cmd->add_option("--n-beams", cfg.crosstalk_beams, "evaluate an N-beam synthesis instead")
        ->check(CLI::Range(synthesis::kMinBeams, 1 << 20));
    crosstalk_cmd->add_option("--bits", cfg.crosstalk_bits, "quantise the synthesis to B bits")
        ->check(CLI::Range(1, 32));
    crosstalk_cmd->add_option("--scan-depth", cfg.scan_depth, "sites scanned")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();

    auto* table1_cmd = subcommand("table1", "coefficients and crosstalk for M = 1..6");
    add_lattice_options(table1_cmd, cfg);
    add_beams(table1_cmd, cfg, synthesis::kMinBeams);
    table1_cmd->add_option("--bits", cfg.bits, "SLM bit depth")->check(CLI::Range(1, 32))->capture_default_str();
    table1_cmd->add_option("--max-sites", cfg.max_sites, "largest M")
        ->check(CLI::Range(1, design::kMaxSites))
        ->capture_default_str();
    table1_cmd->add_option("--scan-depth", cfg.scan_depth, "sites scanned")
        ->check(CLI::Range(design::kMaxSites, 100000))
        ->capture_default_str();

    auto* gaussian_cmd = subcommand("gaussian", "Gaussian waist and NA for a crosstalk target");
    add_lattice_options(gaussian_cmd, cfg);
    gaussian_cmd->add_option("--epsilon", cfg.epsilon, "crosstalk at the neighbouring site")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gaussian_cmd->add_option("--aperture-ratio", cfg.aperture_ratio, "lens diameter over beam radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* na_cmd = subcommand("na-curve", "lens NA against w0/lambda_f");
    na_cmd->add_option("--ratios", cfg.ratios, "lambda_f/lambda values, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    na_cmd->add_option("--range", cfg.range, "w0/lambda_f samples min:max:step")->capture_default_str();
    na_cmd->add_option("--aperture-ratio", cfg.aperture_ratio, "lens diameter over beam radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* synth_cmd = subcommand("synth", "plane-wave weights for a design or a plain Bessel beam");
    add_design_source(synth_cmd, cfg);
    synth_cmd->add_flag("--uniform", cfg.uniform, "equal weights (J0 beam)")->excludes("--design")->excludes("--sites");
    add_beams(synth_cmd, cfg, synthesis::kMinBeams);

    auto* steer_cmd = subcommand("steer", "translate a plane-wave set");
    steer_cmd->add_option("--waves", cfg.waves_path, "plane-wave file")->required();
    steer_cmd->add_option("--shift", cfg.shift, "dx,dy in um")->required();

    auto* quantize_cmd = subcommand("quantize", "SLM amplitude and phase words");
    quantize_cmd->add_option("--waves", cfg.waves_path, "plane-wave file")->required();
    quantize_cmd->add_option("--bits", cfg.bits, "bit depth of both words")->check(CLI::Range(1, 32))->capture_default_str();
    quantize_cmd->add_option("--amp-bits", cfg.amplitude_bits, "amplitude bit depth")->check(CLI::Range(1, 32));
    quantize_cmd->add_option("--phase-bits", cfg.phase_bits, "phase bit depth")->check(CLI::Range(1, 32));

    auto* map_cmd = subcommand("map", "render |A|^2 to a 16-bit PGM or CSV");
    add_design_source(map_cmd, cfg);
    map_cmd->add_flag("--uniform", cfg.uniform, "equal weights (J0 beam)")->excludes("--design")->excludes("--sites");
    auto* map_beams = add_beams(map_cmd, cfg, synthesis::kMinBeams);
    auto* map_bits = map_cmd->add_option("--bits", cfg.map_bits, "quantise the weights to B bits")->check(CLI::Range(1, 32));
    auto* map_shift = map_cmd->add_option("--shift", cfg.shift, "steer by dx,dy (um)");
    map_cmd->add_flag("--exact", cfg.exact, "evaluate the design series instead of a synthesis")
        ->excludes("--uniform")
        ->excludes(map_beams)
        ->excludes(map_bits)
        ->excludes(map_shift);
    map_cmd->add_option("--extent", cfg.extent, "half-width of the square map (um)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    map_cmd->add_option("--step", cfg.step, "sample spacing (um)")->check(CLI::PositiveNumber)->capture_default_str();
    map_cmd->add_option("--export", cfg.export_format, "file format")
        ->check(CLI::IsMember({"pgm16", "pgm", "csv"}))
        ->capture_default_str();
    map_cmd->add_option("--scale", cfg.scale, "PGM intensity scaling")
        ->check(CLI::IsMember({"linear", "log10", "log"}))
        ->capture_default_str();
    map_cmd->add_option("--floor", cfg.floor, "log10 floor")->capture_default_str();

    auto* ring_cmd = subcommand("ring", "predicted and measured secondary-ring diameter");
    ring_cmd->add_option("--lambda", cfg.lambda, "addressing wavelength (um)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_beams(ring_cmd, cfg, 8);
    ring_cmd->add_option("--threshold", cfg.threshold, "fraction of the strongest secondary maximum")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? kSuccess : kUsage;
    }

    if (show_version) {
        err << "latticebeam " << LATTICEBEAM_VERSION << '\n';
        if (app.get_subcommands().empty()) return kSuccess;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return kUsage;
    }
    cfg.format = format == "csv" ? OutputFormat::csv
                 : format == "json" ? OutputFormat::json
                                    : OutputFormat::human;

    const Context ctx{cfg, out, err};
    const std::vector<std::pair<CLI::App*, int (*)(const Context&)>> handlers = {
        {design_cmd, cmd_design},     {crosstalk_cmd, cmd_crosstalk}, {table1_cmd, cmd_table1},
        {gaussian_cmd, cmd_gaussian}, {na_cmd, cmd_na_curve},         {synth_cmd, cmd_synth},
        {steer_cmd, cmd_steer},       {quantize_cmd, cmd_quantize},   {map_cmd, cmd_map},
        {ring_cmd, cmd_ring},
    };
    const auto fail = [&err](const std::exception& e, int code) {
        err << "error: " << e.what() << '\n';
        return code;
    };
    try {
        for (const auto& [sub, handler] : handlers) {
            if (sub->parsed()) return handler(ctx);
        }
    } catch (const UsageError& e) {
        return fail(e, kUsage);
    } catch (const DomainError& e) {
        return fail(e, kUsage);
    } catch (const RangeError& e) {
        return fail(e, kUsage);
    } catch (const UndersamplingError& e) {
        return fail(e, kUsage);
    } catch (const NotFoundError& e) {
        return fail(e, kNotFound);
    } catch (const IoError& e) {
        return fail(e, kIoFailure);
    } catch (const FormatError& e) {
        return fail(e, kIoFailure);
    } catch (const std::exception& e) {
        return fail(e, kNumerical);
    }
    return kUsage;
}

}  // namespace latticebeam::cli

#include <doctest.h>

#include <cmath>
#include <string>

#include "latticebeam/design.hpp"
#include "latticebeam/error.hpp"
#include "latticebeam/raster.hpp"
#include "latticebeam/synthesis.hpp"

using namespace latticebeam;
using namespace latticebeam::raster;

namespace {

const design::LatticeSpec kRubidium(0.78, 0.8);
const synthesis::WarningSink kSilent = [](const std::string&) {};

std::uint16_t big_endian_word(const std::string& bytes, std::size_t offset) {
    return static_cast<std::uint16_t>((static_cast<unsigned char>(bytes[offset]) << 8) |
                                      static_cast<unsigned char>(bytes[offset + 1]));
}

}  // namespace

TEST_CASE("grid geometry") {
    const auto g = GridSpec::centered(10.0, 0.05);
    CHECK(g.nx() == 401);
    CHECK(g.ny() == 401);
    CHECK(GridSpec{0.0, 1.0, 0.0, 0.3, 0.1}.ny() == 4);
    CHECK_THROWS_AS(GridSpec::centered(10.0, 0.0).validate(), DomainError);
    CHECK_THROWS_AS((GridSpec{1.0, 0.0, 0.0, 1.0, 0.1}.validate()), DomainError);
    CHECK_THROWS_AS(GridSpec::centered(10.0, 1e-3).validate(), RangeError);
    CHECK_THROWS_AS(raster_field(synthesis::PlaneWaveSet::uniform(1.0, 8),
                                 GridSpec::centered(100.0, 1e-3)),
                    RangeError);
}

TEST_CASE("uniform synthesis peaks at the origin") {
    const auto waves = synthesis::PlaneWaveSet::uniform(kRubidium.wavenumber(), 100);
    const auto grid = raster_field(waves, GridSpec::centered(5.0, 0.05));
    const auto peak = grid.argmax();
    CHECK(std::abs(grid.x(peak.ix)) < 1e-12);
    CHECK(std::abs(grid.y(peak.iy)) < 1e-12);
    CHECK(std::abs(peak.value - 1.0) < 1e-12);
}

TEST_CASE("steered synthesis peaks at the shift") {
    const auto waves = synthesis::steer(
        synthesis::PlaneWaveSet::uniform(kRubidium.wavenumber(), 100), {4.0, 2.0}, kSilent);
    const auto grid = raster_field(waves, GridSpec::centered(10.0, 0.05));
    const auto peak = grid.argmax();
    CHECK(std::abs(grid.x(peak.ix) - 4.0) <= 0.05);
    CHECK(std::abs(grid.y(peak.iy) - 2.0) <= 0.05);
}

TEST_CASE("design and synthesis maps agree") {
    const auto d = design::solve_design(kRubidium, 6);
    const auto spec = GridSpec::centered(15.0, 0.25);
    const auto direct = raster_field(d, spec);
    const auto synth = raster_field(synthesis::synthesize_waves(d, 256), spec);
    REQUIRE(direct.values.size() == synth.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.values.size(); ++i) {
        worst = std::max(worst, std::abs(direct.values[i] - synth.values[i]));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("maps are reflection symmetric about y = 0") {
    const auto d = design::solve_design(kRubidium, 4);
    const auto waves = synthesis::synthesize_waves(d, 128);
    for (const auto& grid : {raster_field(d, GridSpec::centered(6.0, 0.1)),
                             raster_field(waves, GridSpec::centered(6.0, 0.1))}) {
        double worst = 0.0;
        for (std::size_t iy = 0; iy < grid.ny; ++iy) {
            for (std::size_t ix = 0; ix < grid.nx; ++ix) {
                worst = std::max(worst, std::abs(grid.at(ix, iy) - grid.at(ix, grid.ny - 1 - iy)));
            }
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("rasterisation is deterministic") {
    const auto waves = synthesis::synthesize_waves(design::solve_design(kRubidium, 3), 64);
    const auto spec = GridSpec{-3.0, 4.0, -2.0, 2.5, 0.07};
    const auto a = export_grid(raster_field(waves, spec), ExportFormat::pgm16);
    const auto b = export_grid(raster_field(waves, spec), ExportFormat::pgm16);
    CHECK(a == b);
}

TEST_CASE("PGM export") {
    IntensityGrid one;
    one.nx = one.ny = 1;
    one.step = 0.1;
    one.values = {1.0};
    const auto pgm = export_grid(one, ExportFormat::pgm16);
    const std::string header = "P5\n1 1\n65535\n";
    REQUIRE(pgm.size() == header.size() + 2);
    CHECK(pgm.substr(0, header.size()) == header);
    CHECK(big_endian_word(pgm, header.size()) == 65535);

    // 2 x 2, bottom row first in memory; the file starts with the top row
    IntensityGrid square;
    square.nx = square.ny = 2;
    square.step = 1.0;
    square.values = {0.0, 0.25, 0.5, 2.0};
    const auto words = pixel_words(square, {});
    CHECK(words == std::vector<std::uint16_t>{0, 8192, 16384, 65535});
    const auto bytes = export_grid(square, ExportFormat::pgm16);
    const std::size_t body = std::string("P5\n2 2\n65535\n").size();
    CHECK(big_endian_word(bytes, body) == 16384);
    CHECK(big_endian_word(bytes, body + 2) == 65535);
    CHECK(big_endian_word(bytes, body + 4) == 0);
    CHECK(big_endian_word(bytes, body + 6) == 8192);
}

TEST_CASE("linear scaling is monotone") {
    const auto grid = raster_field(synthesis::PlaneWaveSet::uniform(kRubidium.wavenumber(), 24),
                                   GridSpec::centered(4.0, 0.1));
    const auto words = pixel_words(grid, {});
    CHECK(*std::max_element(words.begin(), words.end()) == 65535);
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i + 1; j < std::min(words.size(), i + 40); ++j) {
            if (grid.values[i] < grid.values[j]) CHECK(words[i] <= words[j]);
        }
    }
}

TEST_CASE("log scaling darkens the zeroed sites") {
    const auto d = design::solve_design(kRubidium, 6);
    // step 0.4 puts samples exactly on the sites along +x
    const auto grid = raster_field(d, GridSpec{-12.0, 12.0, -0.4, 0.4, 0.4});
    const auto words = pixel_words(grid, {ScalingKind::log10, kDefaultLogFloor});
    const std::size_t origin = 30;
    REQUIRE(std::abs(grid.x(origin)) < 1e-12);
    CHECK(words[grid.nx + origin] == 65535);
    for (std::size_t m = 1; m <= 6; ++m) {
        CHECK(grid.at(origin + m, 1) < 1e-20);
        CHECK(words[grid.nx + origin + m] == 0);
    }

    IntensityGrid ramp;
    ramp.nx = 4;
    ramp.ny = 1;
    ramp.values = {1e-12, 1e-8, 1e-4, 1.0};
    CHECK(pixel_words(ramp, {ScalingKind::log10, 1e-8}) ==
          std::vector<std::uint16_t>{0, 0, 32768, 65535});
    CHECK_THROWS_AS(pixel_words(ramp, {ScalingKind::log10, 1.0}), DomainError);
}

TEST_CASE("CSV round trip") {
    const auto grid = raster_field(synthesis::synthesize_waves(design::solve_design(kRubidium, 2), 32),
                                   GridSpec{-1.0, 1.5, -0.5, 0.75, 0.25});
    const auto csv = export_grid(grid, ExportFormat::csv);
    CHECK(csv.rfind("x,y,intensity\n", 0) == 0);
    const auto back = parse_grid_csv(csv);
    REQUIRE(back.nx == grid.nx);
    REQUIRE(back.ny == grid.ny);
    CHECK(back.x_min == doctest::Approx(grid.x_min));
    CHECK(back.y_min == doctest::Approx(grid.y_min));
    CHECK(back.step == doctest::Approx(grid.step));
    // %.9g keeps 9 significant digits: relative to the map's peak, not per sample
    const double peak = grid.argmax().value;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        worst = std::max(worst, std::abs(back.values[i] - grid.values[i]));
    }
    CHECK(worst <= 1e-9 * peak);
    CHECK_THROWS_AS(parse_grid_csv("a,b,c\n"), FormatError);
    CHECK_THROWS_AS(parse_grid_csv("x,y,intensity\n0,0\n"), FormatError);
}

TEST_CASE("format names") {
    CHECK(parse_export_format("csv") == ExportFormat::csv);
    CHECK(parse_export_format("pgm16") == ExportFormat::pgm16);
    CHECK(parse_scaling("log10") == ScalingKind::log10);
    CHECK_THROWS_AS(parse_export_format("png"), FormatError);
    CHECK_THROWS_AS(parse_scaling("sqrt"), FormatError);
}

TEST_CASE("sidecar") {
    IntensityGrid grid;
    grid.nx = 2;
    grid.ny = 1;
    grid.x_min = -0.5;
    grid.step = 0.5;
    grid.values = {0.25, 1.0};
    const auto json = sidecar_json(grid, {ScalingKind::log10, 1e-6});
    CHECK(json.find("\"nx\": 2") != std::string::npos);
    CHECK(json.find("\"log_floor\": 1e-06") != std::string::npos);
    CHECK(json.find("\"max_intensity\": 1.0") != std::string::npos);
    CHECK(sidecar_json(grid, {}).find("log_floor") == std::string::npos);
}

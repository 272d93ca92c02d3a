#include <json.hpp>

#include "latticebeam/error.hpp"
#include "latticebeam/synthesis.hpp"
#include "latticebeam/text_format.hpp"

namespace latticebeam::synthesis {

std::string serialize_waves(const PlaneWaveSet& waves) {
    std::string out = "{\n  \"k_rad_per_um\": " + format_exact(waves.wavenumber()) +
                      ",\n  \"waves\": [\n";
    const auto& list = waves.waves();
    for (std::size_t j = 0; j < list.size(); ++j) {
        out += "    {\"phi\": " + format_exact(list[j].phi) +
               ", \"re\": " + format_exact(list[j].weight.real()) +
               ", \"im\": " + format_exact(list[j].weight.imag()) + "}";
        out += (j + 1 < list.size()) ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

PlaneWaveSet parse_waves(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("wave-set file is not valid JSON: ") + e.what());
    }
    try {
        std::vector<PlaneWave> waves;
        for (const auto& entry : doc.at("waves")) {
            waves.push_back({entry.at("phi").get<double>(),
                             {entry.at("re").get<double>(), entry.at("im").get<double>()}});
        }
        return PlaneWaveSet(doc.at("k_rad_per_um").get<double>(), std::move(waves));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("wave-set file: ") + e.what());
    } catch (const DomainError& e) {
        throw FormatError(std::string("wave-set file: ") + e.what());
    }
}

std::string slm_words_csv(const SlmWords& words) {
    std::string out = "pixel,amp_word,phase_word\n";
    for (std::size_t j = 0; j < words.amplitude.size(); ++j) {
        out += std::to_string(j) + ',' + std::to_string(words.amplitude[j]) + ',' +
               std::to_string(words.phase[j]) + '\n';
    }
    return out;
}

}  // namespace latticebeam::synthesis

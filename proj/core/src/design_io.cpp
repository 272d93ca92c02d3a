#include <json.hpp>

#include "latticebeam/design.hpp"
#include "latticebeam/error.hpp"
#include "latticebeam/text_format.hpp"

namespace latticebeam::design {

std::string serialize_design(const FourierBesselDesign& design) {
    std::string out = "{\n";
    out += "  \"lambda_um\": " + format_exact(design.lattice().lambda()) + ",\n";
    out += "  \"lambda_f_um\": " + format_exact(design.lattice().lambda_f()) + ",\n";
    out += "  \"m_sites\": " + std::to_string(design.m_sites()) + ",\n";
    out += "  \"coefficients\": [";
    const auto& c = design.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_exact(c[i]);
    }
    out += "],\n";
    out += "  \"residual_max\": " + format_exact(design.residual_max()) + "\n";
    out += "}\n";
    return out;
}

FourierBesselDesign parse_design(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("design file is not valid JSON: ") + e.what());
    }
    try {
        const int m_sites = doc.at("m_sites").get<int>();
        auto coefficients = doc.at("coefficients").get<std::vector<double>>();
        if (m_sites < 0 || static_cast<std::size_t>(m_sites) != coefficients.size()) {
            throw FormatError("design file: m_sites does not match the coefficient count");
        }
        LatticeSpec lattice(doc.at("lambda_um").get<double>(), doc.at("lambda_f_um").get<double>());
        return FourierBesselDesign(lattice, std::move(coefficients),
                                   doc.at("residual_max").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("design file: ") + e.what());
    } catch (const DomainError& e) {
        throw FormatError(std::string("design file: ") + e.what());
    } catch (const RangeError& e) {
        throw FormatError(std::string("design file: ") + e.what());
    }
}

}  // namespace latticebeam::design

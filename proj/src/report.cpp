#include "realbloch/report.hpp"

#include <cstdint>
#include <iomanip>
#include <sstream>

namespace rb {

nlohmann::json to_json(const InvariantReport& report) {
    nlohmann::json j;
    j["value"] = report.value;
    j["nearest_integer"] = report.nearest_integer;
    j["residual"] = report.residual;
    j["method"] = report.method;
    j["grid"] = report.grid_spec;
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& h : report.history)
        hist.push_back({{"resolution", h.resolution}, {"value", h.value}});
    j["refinement_history"] = std::move(hist);
    return j;
}

nlohmann::json to_json(const RegularValueResult& result) {
    nlohmann::json j = to_json(result.report);
    j["degree"] = result.degree;
    j["preimages"] = result.preimages;
    j["signs"] = result.signs;
    return j;
}

nlohmann::json to_json(const SymmetryReport& report) {
    nlohmann::json j;
    j["max_deviation"] = report.max_deviation;
    j["expected_parity"] = report.expected_parity;
    j["declared_parity"] = report.declared_parity;
    j["parity_match"] = report.parity_match;
    j["class"] = report.symmetry_class == SymmetryClass::AI ? "AI" : "AII";
    return j;
}

nlohmann::json to_json(const AiConsistencyReport& report) {
    nlohmann::json j;
    j["applicable"] = report.applicable;
    j["symmetry_deviation"] = report.symmetry_deviation;
    if (!report.applicable) {
        j["verdict"] = "not applicable";
        return j;
    }
    nlohmann::json slices = nlohmann::json::array();
    for (const auto& s : report.slice_c1)
        slices.push_back({{"axes", {s.axis_a, s.axis_b}},
                          {"anchor", s.anchor},
                          {"c1", s.value}});
    j["slice_c1"] = std::move(slices);
    j["max_slice_c1"] = report.max_slice_c1;
    j["c1_vanishes"] = report.c1_vanishes;
    j["c2"] = to_json(report.c2);
    j["c2_even"] = report.c2_even;
    j["verdict"] = report.consistent ? "consistent" : "violated";
    return j;
}

nlohmann::json to_json(const CollapsePullbackReport& report) {
    nlohmann::json j;
    j["sphere_c2"] = to_json(report.sphere_c2);
    j["torus_c2"] = to_json(report.torus_c2);
    j["match"] = report.match;
    return j;
}

nlohmann::json to_json(const KRTorusAuditRow& row) {
    nlohmann::json j;
    j["d"] = row.d;
    j["recursion"] = row.recursion.render();
    j["printed"] = row.printed.render();
    j["match"] = row.match;
    j["recursion_summands"] = row.recursion_summands;
    j["printed_summands"] = row.printed_summands;
    j["summand_counts_equal"] = row.recursion_summands == row.printed_summands;
    return j;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

}  // namespace rb

#pragma once

#include <string>

#include <json.hpp>

#include "bks/scenario.hpp"

namespace bks {

inline constexpr const char* kSchemaVersion = "1.0.0";
inline constexpr const char* kToolName = "bkscheck";
inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
    std::string input;         // "builtin:hardy" or the file path as given
    std::string input_sha256;  // hex digest of the input text
};

/// Keys come out in a fixed order, so equal reports serialize to equal bytes.
nlohmann::ordered_json report_json(const AnalysisReport& report, const Provenance& provenance);
std::string report_text(const AnalysisReport& report, const Provenance& provenance);

std::string sha256_hex(std::string_view data);

}  // namespace bks

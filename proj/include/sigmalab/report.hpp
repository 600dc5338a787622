#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sigmalab/analysis.hpp"
#include "sigmalab/coefficients.hpp"

namespace sigmalab {

using Json = nlohmann::json;

Json to_json(Point2 p);
Json to_json(const EllipticityReport& report);
Json to_json(const UnimodalityVerdict& verdict);
Json to_json(const QuasiconformalDefect& defect);
Json to_json(const InjectivityResult& result);
Json to_json(const LewyReport& report);

/// Non-finite numbers become strings ("inf", "-inf", "nan") instead of null.
Json number(double value);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sigmalab

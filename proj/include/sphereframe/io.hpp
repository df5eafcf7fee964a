#pragma once

#include <string>

#include <json.hpp>

#include "sphereframe/constructions.hpp"
#include "sphereframe/diagnostics.hpp"
#include "sphereframe/frames.hpp"
#include "sphereframe/quadrature.hpp"

namespace sphereframe::io {

// Key order is kept as written so that write -> read -> write is byte-identical.
using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

Json to_json(const FrameSpec& spec);
Json to_json(const Signal& f);
Json to_json(const quadrature::RotationRule& grid);
Json to_json(const constructions::ZetaTable& table);

/// All readers throw ParseError on malformed or inconsistent input.
FrameSpec spec_from_json(const Json& j);
Signal signal_from_json(const Json& j);
quadrature::RotationRule grid_from_json(const Json& j);
constructions::ZetaTable zeta_from_json(const Json& j);

std::string dump(const Json& j);
Json parse(const std::string& text);

std::string write_spec(const FrameSpec& spec);
FrameSpec read_spec(const std::string& text);
std::string write_signal(const Signal& f);
Signal read_signal(const std::string& text);
std::string write_grid(const quadrature::RotationRule& grid);
quadrature::RotationRule read_grid(const std::string& text);

/// Whole-file helpers; failures to open or read raise ParseError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// report tables
Json report(const frames::FrameBounds& b, const frames::SpectralProfile& sigma);
Json report(const std::vector<diagnostics::ScaleLocalization>& rows);
Json report(const std::vector<diagnostics::ScaleAudit>& rows);
Json report(const frames::ParsevalReport& p);

}  // namespace sphereframe::io

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsector/fan.hpp"
#include "qsector/fourier.hpp"
#include "qsector/measure.hpp"
#include "qsector/solver.hpp"

namespace qsector::io {

using Json = nlohmann::ordered_json;

/// Malformed measure file; the message names the file position or the offending field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Complex numbers are always [re, im].
Json to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where);

/// {"dim": d, "components": [{"type": "gaussian", "mean": [[re, im], ...], "sigma": s, "weight": w},
///                           {"type": "disk", "center": [re, im], "radius": r, "weight": w}]}
Json to_json(const MassSpec& m);
MassSpec mass_from_json(const Json& j, const std::string& where = "");

Json to_json(const PlanarMassSpec& p);

Json to_json(const Configuration& x);
Json to_json(const HyperplaneDesc& h);
Json to_json(const DeviationReport& r);
Json to_json(const SixFan& fan);
Json to_json(const SolveResult& r, const SolveProblem& p);

/// A file holds one mass object, an array of them, or {"masses": [...]}.
std::vector<MassSpec> parse_masses(const std::string& text, const std::string& source = "<string>");
std::vector<MassSpec> load_masses(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qsector::io

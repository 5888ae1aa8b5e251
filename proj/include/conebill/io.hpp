#pragma once
/**
 * @file io.hpp
 * @brief Cone files, report and trajectory documents, ensemble tables.
 *
 * Structured documents are JSON. Doubles are written in shortest round-trip
 * form (CSV uses %.17g); non-finite values are written as the strings
 * "inf", "-inf" and "nan" and parsed back.
 */

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conebill/constants.hpp"
#include "conebill/harness.hpp"
#include "conebill/hardball.hpp"
#include "conebill/simulator.hpp"

namespace conebill {

using Json = nlohmann::json;

/// `{ "dim": m, "normals": [[...], ...] }`. Throws ParseError or the make_cone errors.
ConeSpec parse_cone(const std::string& text);
ConeSpec load_cone_file(const std::string& path);
Json cone_to_json(const ConeSpec& cone);

/// 17 significant digits.
std::string format_double(double x);
/// Comma-separated numbers ("1,2.5,-3").
std::vector<double> parse_number_list(const std::string& text);

Json number_to_json(double x);
double number_from_json(const Json& j);

Json to_json(const BoundsReport& report);
BoundsReport bounds_from_json(const Json& j);
std::string bounds_csv_header();
std::string bounds_csv_row(const BoundsReport& report);
std::string bounds_text(const BoundsReport& report);

Json to_json(const TrajectoryRecord& record, const std::optional<AuditVerdict>& verdict = std::nullopt);
TrajectoryRecord trajectory_from_json(const Json& j);

std::string ensemble_csv_header();
std::string ensemble_csv_row(const EnsembleRow& row);
Json to_json(const EnsembleRow& row);
/// Writes the rows in the requested format.
void write_ensemble(std::ostream& out, const std::vector<EnsembleRow>& rows, OutputFormat format);

Json to_json(const HardBallSystem& system, const BallRun& run);
Json to_json(const ConjugacyReport& report);

}  // namespace conebill

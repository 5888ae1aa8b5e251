#include "conebill/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace conebill {

namespace {

Json vector_to_json(const VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected an array of numbers");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
  return v;
}

Json optional_int(const std::optional<std::int64_t>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<std::int64_t> optional_int_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::int64_t>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

Terminal terminal_from(const std::string& s) {
  if (s == "Escaped") return Terminal::Escaped;
  if (s == "CornerHit") return Terminal::CornerHit;
  if (s == "StepLimit") return Terminal::StepLimit;
  throw Error(ErrorCode::ParseError, "unknown terminal status '" + s + "'");
}

}  // namespace

Json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::ParseError, "expected a number, got " + j.dump());
}

ConeSpec parse_cone(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("normals"))
    throw Error(ErrorCode::ParseError, "cone document needs 'dim' and 'normals'");
  if (!j["dim"].is_number_integer()) throw Error(ErrorCode::ParseError, "'dim' must be an integer");
  const auto dim = j["dim"].get<Eigen::Index>();
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "'dim' must be >= 1");
  if (!j["normals"].is_array()) throw Error(ErrorCode::ParseError, "'normals' must be an array");
  std::vector<VectorXd> normals;
  for (const auto& row : j["normals"]) normals.push_back(vector_from_json(row));
  return make_cone(dim, normals);
}

ConeSpec load_cone_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open cone file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_cone(buffer.str());
}

Json cone_to_json(const ConeSpec& cone) {
  Json normals = Json::array();
  for (Eigen::Index i = 0; i < cone.walls(); ++i) normals.push_back(vector_to_json(cone.normal(i)));
  return {{"dim", cone.dim()}, {"normals", normals}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw Error(ErrorCode::ParseError, "not a number: '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty number list");
  return out;
}

Json to_json(const BoundsReport& r) {
  return {
      {"n", r.n},
      {"m", r.m},
      {"lambda_min", number_to_json(r.lambda_min)},
      {"d", number_to_json(r.d)},
      {"delta", number_to_json(r.delta)},
      {"psi", number_to_json(r.psi)},
      {"charge_SQ", number_to_json(r.charge_SQ)},
      {"charge_phi", number_to_json(r.charge_phi)},
      {"bfk_C", number_to_json(r.bfk_C)},
      {"bound_main", number_to_json(r.bound_main)},
      {"bound_dd", number_to_json(r.bound_dd)},
      {"bound_sevryuk", number_to_json(r.bound_sevryuk)},
      {"bound_bfk", number_to_json(r.bound_bfk)},
      {"bound_wedge", optional_int(r.bound_wedge)},
      {"bound_tridiagonal", optional_int(r.bound_tridiagonal)},
      {"tridiagonal_applicable", r.tridiagonal_applicable},
      {"delta_certified_lower", number_to_json(r.delta_certified_lower)},
      {"bfk_C_certified_lower", number_to_json(r.bfk_C_certified_lower)},
  };
}

BoundsReport bounds_from_json(const Json& j) {
  BoundsReport r;
  r.n = field(j, "n").get<int>();
  r.m = field(j, "m").get<int>();
  r.lambda_min = number_from_json(field(j, "lambda_min"));
  r.d = number_from_json(field(j, "d"));
  r.delta = number_from_json(field(j, "delta"));
  r.psi = number_from_json(field(j, "psi"));
  r.charge_SQ = number_from_json(field(j, "charge_SQ"));
  r.charge_phi = number_from_json(field(j, "charge_phi"));
  r.bfk_C = number_from_json(field(j, "bfk_C"));
  r.bound_main = number_from_json(field(j, "bound_main"));
  r.bound_dd = number_from_json(field(j, "bound_dd"));
  r.bound_sevryuk = number_from_json(field(j, "bound_sevryuk"));
  r.bound_bfk = number_from_json(field(j, "bound_bfk"));
  r.bound_wedge = optional_int_from(field(j, "bound_wedge"));
  r.bound_tridiagonal = optional_int_from(field(j, "bound_tridiagonal"));
  r.tridiagonal_applicable = field(j, "tridiagonal_applicable").get<bool>();
  if (j.contains("delta_certified_lower")) r.delta_certified_lower = number_from_json(j["delta_certified_lower"]);
  if (j.contains("bfk_C_certified_lower")) r.bfk_C_certified_lower = number_from_json(j["bfk_C_certified_lower"]);
  return r;
}

std::string bounds_csv_header() {
  return "n,m,lambda_min,d,delta,psi,charge_SQ,charge_phi,bfk_C,bound_main,bound_dd,bound_sevryuk,bound_bfk,"
         "bound_wedge,bound_tridiagonal,tridiagonal_applicable,delta_certified_lower,bfk_C_certified_lower";
}

std::string bounds_csv_row(const BoundsReport& r) {
  std::ostringstream out;
  auto opt = [](const std::optional<std::int64_t>& x) { return x ? std::to_string(*x) : std::string(); };
  out << r.n << ',' << r.m << ',' << format_double(r.lambda_min) << ',' << format_double(r.d) << ','
      << format_double(r.delta) << ',' << format_double(r.psi) << ',' << format_double(r.charge_SQ) << ','
      << format_double(r.charge_phi) << ',' << format_double(r.bfk_C) << ',' << format_double(r.bound_main) << ','
      << format_double(r.bound_dd) << ',' << format_double(r.bound_sevryuk) << ',' << format_double(r.bound_bfk)
      << ',' << opt(r.bound_wedge) << ',' << opt(r.bound_tridiagonal) << ','
      << (r.tridiagonal_applicable ? "true" : "false") << ',' << format_double(r.delta_certified_lower) << ','
      << format_double(r.bfk_C_certified_lower);
  return out.str();
}

std::string bounds_text(const BoundsReport& r) {
  std::ostringstream out;
  auto line = [&](const char* name, const std::string& value) {
    out << "  " << name << std::string(24 - std::string(name).size(), ' ') << value << '\n';
  };
  out << "cone: n = " << r.n << " walls in R^" << r.m << '\n';
  line("lambda_min", format_double(r.lambda_min));
  line("d", format_double(r.d));
  line("delta", format_double(r.delta));
  line("delta_certified_lower", format_double(r.delta_certified_lower));
  line("psi", format_double(r.psi));
  line("charge_SQ", format_double(r.charge_SQ));
  line("charge_phi", format_double(r.charge_phi));
  line("bfk_C", format_double(r.bfk_C));
  line("bfk_C_certified_lower", format_double(r.bfk_C_certified_lower));
  line("bound_main", format_double(r.bound_main));
  line("bound_dd", format_double(r.bound_dd));
  line("bound_sevryuk", format_double(r.bound_sevryuk));
  line("bound_bfk", format_double(r.bound_bfk));
  line("bound_wedge", r.bound_wedge ? std::to_string(*r.bound_wedge) : "-");
  line("bound_tridiagonal", r.bound_tridiagonal ? std::to_string(*r.bound_tridiagonal) : "-");
  line("tridiagonal_applicable", r.tridiagonal_applicable ? "true" : "false");
  return out.str();
}

Json to_json(const TrajectoryRecord& record, const std::optional<AuditVerdict>& verdict) {
  Json events = Json::array();
  for (const auto& e : record.events)
    events.push_back({{"t", number_to_json(e.t)},
                      {"wall", e.wall},
                      {"q_at", vector_to_json(e.q_at)},
                      {"v_before", vector_to_json(e.v_before)},
                      {"v_after", vector_to_json(e.v_after)}});
  Json out = {
      {"initial",
       {{"q", vector_to_json(record.initial.q)},
        {"v", vector_to_json(record.initial.v)},
        {"t", number_to_json(record.initial.t)}}},
      {"events", events},
      {"terminal", std::string(to_string(record.terminal))},
      {"collisions", record.collisions()},
  };
  if (verdict) {
    Json checks = Json::array();
    for (const auto& c : verdict->checks)
      checks.push_back({{"name", c.name},
                        {"observed", number_to_json(c.observed)},
                        {"limit", number_to_json(c.limit)},
                        {"pass", c.pass}});
    out["audit"] = {{"pass", verdict->pass()}, {"checks", checks}};
  }
  return out;
}

TrajectoryRecord trajectory_from_json(const Json& j) {
  TrajectoryRecord record;
  const Json& initial = field(j, "initial");
  record.initial.q = vector_from_json(field(initial, "q"));
  record.initial.v = vector_from_json(field(initial, "v"));
  record.initial.t = number_from_json(field(initial, "t"));
  record.velocities.push_back(record.initial.v);
  for (const auto& e : field(j, "events")) {
    CollisionEvent event;
    event.t = number_from_json(field(e, "t"));
    event.wall = field(e, "wall").get<int>();
    event.q_at = vector_from_json(field(e, "q_at"));
    event.v_before = vector_from_json(field(e, "v_before"));
    event.v_after = vector_from_json(field(e, "v_after"));
    record.velocities.push_back(event.v_after);
    record.events.push_back(std::move(event));
  }
  record.terminal = terminal_from(field(j, "terminal").get<std::string>());
  return record;
}

std::string ensemble_csv_header() {
  return "cone_id,seed,lambda_min,d,delta,C,phi,bound_main,bound_dd,bound_sevryuk,bound_bfk,max_observed_N,"
         "zigzag_max_L,lemma1_ceiling,all_checks_pass";
}

std::string ensemble_csv_row(const EnsembleRow& r) {
  std::ostringstream out;
  out << r.cone_id << ',' << r.seed << ',' << format_double(r.lambda_min) << ',' << format_double(r.d) << ','
      << format_double(r.delta) << ',' << format_double(r.C) << ',' << format_double(r.phi) << ','
      << format_double(r.bound_main) << ',' << format_double(r.bound_dd) << ',' << format_double(r.bound_sevryuk)
      << ',' << format_double(r.bound_bfk) << ',' << r.max_observed_N << ',' << format_double(r.zigzag_max_L) << ','
      << format_double(r.lemma1_ceiling) << ',' << (r.all_checks_pass ? "true" : "false");
  return out.str();
}

Json to_json(const EnsembleRow& r) {
  return {{"cone_id", r.cone_id},
          {"seed", r.seed},
          {"lambda_min", number_to_json(r.lambda_min)},
          {"d", number_to_json(r.d)},
          {"delta", number_to_json(r.delta)},
          {"C", number_to_json(r.C)},
          {"phi", number_to_json(r.phi)},
          {"bound_main", number_to_json(r.bound_main)},
          {"bound_dd", number_to_json(r.bound_dd)},
          {"bound_sevryuk", number_to_json(r.bound_sevryuk)},
          {"bound_bfk", number_to_json(r.bound_bfk)},
          {"max_observed_N", r.max_observed_N},
          {"zigzag_max_L", number_to_json(r.zigzag_max_L)},
          {"lemma1_ceiling", number_to_json(r.lemma1_ceiling)},
          {"all_checks_pass", r.all_checks_pass}};
}

void write_ensemble(std::ostream& out, const std::vector<EnsembleRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << ensemble_csv_header() << '\n';
    for (const auto& row : rows) out << ensemble_csv_row(row) << '\n';
  } else {
    Json array = Json::array();
    for (const auto& row : rows) array.push_back(to_json(row));
    out << array.dump(2) << '\n';
  }
}

Json to_json(const HardBallSystem& system, const BallRun& run) {
  Json events = Json::array();
  for (const auto& e : run.events)
    events.push_back({{"t", number_to_json(e.t)},
                      {"pair", {e.left, e.left + 1}},
                      {"velocities_after", {number_to_json(e.velocity_left), number_to_json(e.velocity_right)}}});
  return {{"initial", {{"masses", system.masses}, {"positions", system.positions}, {"velocities", system.velocities}}},
          {"events", events},
          {"terminal", std::string(to_string(run.terminal))},
          {"collisions", run.events.size()}};
}

Json to_json(const ConjugacyReport& r) {
  return {{"ball_events", r.ball_events},
          {"cone_events", r.cone_events},
          {"sequences_match", r.sequences_match},
          {"max_time_rel_error", number_to_json(r.max_time_rel_error)},
          {"times_match", r.times_match},
          {"ball_terminal", std::string(to_string(r.ball_terminal))},
          {"cone_terminal", std::string(to_string(r.cone_terminal))},
          {"pass", r.pass()}};
}

}  // namespace conebill

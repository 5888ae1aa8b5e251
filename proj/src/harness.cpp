#include "conebill/harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conebill {

ConeSpec random_cone(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1 || n > dim)
    throw Error(ErrorCode::InvalidConfig, "random_cone needs 1 <= n <= dim");
  CounterRng rng(seed, 0);
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    MatrixXd normals(dim, n);
    for (int i = 0; i < n; ++i) normals.col(i) = rng.unit_vector(dim);
    const double lmin = min_eigenvalue(MatrixXd(normals.transpose() * normals));
    if (std::sqrt(std::max(lmin, 0.0)) > kSamplingConditionFloor) return make_cone(normals);
  }
  throw Error(ErrorCode::DegenerateSampling, "no well-conditioned cone after " +
                                                 std::to_string(kMaxSamplingAttempts) + " attempts");
}

std::uint64_t cone_seed(std::uint64_t seed, std::uint64_t cone_id) { return CounterRng(seed, cone_id).next_u64(); }

BilliardState sample_interior_state(const ConeSpec& cone, const VectorXd& center, CounterRng& rng) {
  const Eigen::Index dim = cone.dim();
  double radius = 0.1;
  while (true) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const VectorXd q = center + radius * rng.in_unit_ball(dim);
      if ((margins(cone, q).array() > 0).all()) return {q, rng.unit_vector(dim), 0.0};
    }
    // the inscribed ball around a unit center has radius d, so this terminates
    radius *= 0.5;
  }
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (trajectories < 0) throw Error(ErrorCode::InvalidConfig, "trajectories must be >= 0");
  if (search_budget < 0) throw Error(ErrorCode::InvalidConfig, "search budget must be >= 0");
  if (max_steps_override && *max_steps_override < 1) throw Error(ErrorCode::InvalidConfig, "max steps must be >= 1");
  if (!fixed_cone && (n_walls < 1 || n_walls > dim))
    throw Error(ErrorCode::InvalidConfig, "need 1 <= walls <= dim");
}

namespace {

struct TrialAccumulator {
  std::int64_t max_n = 0;
  double max_length = 0;
  bool pass = true;

  void add(const TrajectoryRecord& record, const BoundsReport& report) {
    const AuditVerdict verdict = audit(record, report);
    max_n = std::max(max_n, static_cast<std::int64_t>(record.collisions()));
    max_length = std::max(max_length, zigzag_length(record));
    pass = pass && verdict.pass();
  }
};

}  // namespace

std::vector<EnsembleRow> ensemble_run(const ExperimentConfig& config,
                                      const std::function<void(const EnsembleRow&)>& on_row) {
  config.validate();
  std::vector<EnsembleRow> rows;
  rows.reserve(static_cast<std::size_t>(config.trials));
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = cone_seed(config.seed, static_cast<std::uint64_t>(trial));
    const ConeSpec cone = config.fixed_cone ? *config.fixed_cone : random_cone(config.n_walls, config.dim, seed);
    const BoundsReport report = bounds_report(cone, config.search);
    const VectorXd center = inscribed_ball(cone).e;
    const std::int64_t max_steps = config.max_steps_override.value_or(default_max_steps(report));

    TrialAccumulator acc;
    CounterRng rng(seed, 1);
    for (int k = 0; k < config.trajectories; ++k)
      acc.add(run(sample_interior_state(cone, center, rng), cone, max_steps), report);
    if (config.search_budget > 0)
      acc.add(adversarial_search(cone, config.search_budget, seed).best_record, report);

    EnsembleRow row;
    row.cone_id = trial;
    row.seed = seed;
    row.lambda_min = report.lambda_min;
    row.d = report.d;
    row.delta = report.delta;
    row.C = report.bfk_C;
    row.phi = report.charge_phi;
    row.bound_main = report.bound_main;
    row.bound_dd = report.bound_dd;
    row.bound_sevryuk = report.bound_sevryuk;
    row.bound_bfk = report.bound_bfk;
    row.max_observed_N = acc.max_n;
    row.zigzag_max_L = acc.max_length;
    row.lemma1_ceiling = 2.0 / report.d;
    row.all_checks_pass = acc.pass && row.zigzag_max_L <= row.lemma1_ceiling + 1e-9;
    if (on_row) on_row(row);
    rows.push_back(row);
  }
  return rows;
}

SearchResult adversarial_search(const ConeSpec& cone, int budget, std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::InvalidConfig, "search budget must be >= 1");
  const InscribedBall ball = inscribed_ball(cone);
  const std::int64_t walls = cone.walls();
  const double lmin = lambda_min(cone);
  const double bound = factorial(static_cast<int>(walls)) * std::pow(4.0 / lmin, static_cast<double>(walls - 1));
  const std::int64_t max_steps = bound < 1e15 ? static_cast<std::int64_t>(std::ceil(bound)) + 1 : 1'000'000'000'000'000;
  const double length_scale = ball.d / 2.0;  // the zigzag ceiling keeps L d / 2 <= 1

  CounterRng rng(seed, 7);
  auto score_of = [&](const TrajectoryRecord& r) {
    return static_cast<double>(r.collisions()) + 0.5 * zigzag_length(r) * length_scale;
  };

  SearchResult result;
  BilliardState current = sample_interior_state(cone, ball.e, rng);
  TrajectoryRecord current_record = run(current, cone, max_steps);
  double current_score = score_of(current_record);
  result.best_initial = current;
  result.best_record = current_record;
  result.best_n = static_cast<std::int64_t>(current_record.collisions());
  result.evaluations = 1;

  for (int k = 1; k < budget; ++k) {
    const double progress = static_cast<double>(k) / static_cast<double>(budget);
    const double temperature = 0.5 * (1.0 - progress) + 1e-3;
    BilliardState proposal;
    if (rng.uniform() < 0.1) {
      proposal = sample_interior_state(cone, ball.e, rng);
    } else {
      const double spread = 0.5 * (1.0 - progress) + 0.01;
      proposal.v = (current.v + spread * rng.gaussian_vector(cone.dim())).normalized();
      proposal.q = current.q;
      for (int attempt = 0; attempt < 16; ++attempt) {
        const VectorXd q = current.q + spread * current.q.norm() * rng.in_unit_ball(cone.dim());
        if ((margins(cone, q).array() > 0).all()) {
          proposal.q = q;
          break;
        }
      }
      if (!(proposal.v.allFinite()) || proposal.v.norm() < 0.5) proposal.v = rng.unit_vector(cone.dim());
    }
    TrajectoryRecord record = run(proposal, cone, max_steps);
    ++result.evaluations;
    const double score = score_of(record);
    if (static_cast<std::int64_t>(record.collisions()) > result.best_n ||
        (static_cast<std::int64_t>(record.collisions()) == result.best_n && score > score_of(result.best_record))) {
      result.best_n = static_cast<std::int64_t>(record.collisions());
      result.best_initial = proposal;
      result.best_record = record;
    }
    if (score >= current_score || rng.uniform() < std::exp((score - current_score) / temperature)) {
      current = std::move(proposal);
      current_score = score;
    }
  }
  return result;
}

}  // namespace conebill

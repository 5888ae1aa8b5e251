#pragma once
/**
 * @file harness.hpp
 * @brief Seeded experiments: random cones, trajectory ensembles and adversarial search.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conebill/cone.hpp"
#include "conebill/constants.hpp"
#include "conebill/rng.hpp"
#include "conebill/simulator.hpp"

namespace conebill {

/// Random cones are resampled until sigma_min(A) exceeds this.
inline constexpr double kSamplingConditionFloor = 1e-3;
inline constexpr int kMaxSamplingAttempts = 1000;

/// n Gaussian-direction unit normals in R^dim; same seed gives the same cone bit for bit.
ConeSpec random_cone(int n, int dim, std::uint64_t seed);

/// Seed of ensemble cone `cone_id`; random_cone(n, dim, cone_seed(seed, id)) regenerates it.
std::uint64_t cone_seed(std::uint64_t seed, std::uint64_t cone_id);

/// q = center + 0.1 u with u uniform in the unit ball, resampled until strictly inside Q; v uniform on the sphere.
BilliardState sample_interior_state(const ConeSpec& cone, const VectorXd& center, CounterRng& rng);

enum class OutputFormat { csv, structured };

struct ExperimentConfig {
  int n_walls = 2;
  int dim = 2;
  int trials = 1;          ///< number of random cones
  int trajectories = 100;  ///< random initial conditions per cone
  std::uint64_t seed = 0;
  std::optional<std::int64_t> max_steps_override;
  int search_budget = 0;  ///< adversarial-search evaluations per cone (0 disables)
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  std::optional<ConeSpec> fixed_cone;  ///< used for every trial instead of random cones
  SearchOptions search;

  /// Throws InvalidConfig.
  void validate() const;
};

struct EnsembleRow {
  std::int64_t cone_id = 0;
  std::uint64_t seed = 0;
  double lambda_min = 0;
  double d = 0;
  double delta = 0;
  double C = 0;
  double phi = 0;
  double bound_main = 0;
  double bound_dd = 0;
  double bound_sevryuk = 0;
  double bound_bfk = 0;
  std::int64_t max_observed_N = 0;
  double zigzag_max_L = 0;
  double lemma1_ceiling = 0;
  bool all_checks_pass = true;
};

/// Runs every trial in order; `on_row` (if set) sees each row as soon as it is complete.
std::vector<EnsembleRow> ensemble_run(const ExperimentConfig& config,
                                      const std::function<void(const EnsembleRow&)>& on_row = {});

struct SearchResult {
  std::int64_t best_n = 0;
  BilliardState best_initial;
  TrajectoryRecord best_record;
  int evaluations = 0;
};

/// Simulated annealing over (q, v) maximizing the collision count; deterministic under seed.
SearchResult adversarial_search(const ConeSpec& cone, int budget, std::uint64_t seed);

}  // namespace conebill

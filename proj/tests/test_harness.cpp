#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "check.hpp"
#include "conebill/error.hpp"
#include "conebill/harness.hpp"
#include "conebill/io.hpp"
#include "conebill/rng.hpp"
#include "conebill/wedge.hpp"

using namespace conebill;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

SearchOptions light_search() {
  SearchOptions o;
  o.starts = 16;
  o.grid_refine = false;
  return o;
}

std::string render(const std::vector<EnsembleRow>& rows, OutputFormat format) {
  std::ostringstream out;
  write_ensemble(out, rows, format);
  return out.str();
}

}  // namespace

TEST_CASE("counter rng") {
  CounterRng a(5, 2), b(5, 2), c(5, 3);
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(a.counter() == 100);

  CounterRng u(1);
  double sum = 0, sq = 0;
  const int count = 200000;
  for (int k = 0; k < count; ++k) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    sum += x;
  }
  CHECK_NEAR(sum / count, 0.5, 5e-3);

  CounterRng g(2);
  sum = 0;
  for (int k = 0; k < count; ++k) {
    const double x = g.gaussian();
    sum += x;
    sq += x * x;
  }
  CHECK_NEAR(sum / count, 0.0, 1e-2);
  CHECK_NEAR(sq / count, 1.0, 2e-2);

  CounterRng s(3);
  for (int k = 0; k < 100; ++k) {
    CHECK_NEAR(s.unit_vector(4).norm(), 1.0, 1e-14);
    CHECK(s.in_unit_ball(3).norm() <= 1.0);
  }
}

TEST_CASE("random cones") {
  const ConeSpec a = random_cone(2, 2, 42), b = random_cone(2, 2, 42);
  CHECK((a.normals() - b.normals()).norm() == 0.0);
  CHECK((a.normals() - random_cone(2, 2, 43).normals()).norm() > 0.0);
  CHECK(lambda_min(random_cone(3, 3, 7)) > 0);

  const ConeSpec tall = random_cone(2, 5, 1);
  const ReducedCone r = reduce_to_span(tall);
  CHECK(r.cone.dim() == 2);
  CHECK((gram(r.cone) - gram(tall)).cwiseAbs().maxCoeff() <= 1e-12);

  for (std::uint64_t seed = 0; seed < 200; ++seed) CHECK(random_cone(4, 4, seed).smallest_singular_value() > kSamplingConditionFloor);

  CHECK_THROWS_AS(random_cone(3, 2, 0), Error);
  CHECK_THROWS_AS(random_cone(0, 2, 0), Error);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t id = 0; id < 1000; ++id) seeds.insert(cone_seed(9, id));
  CHECK(seeds.size() == 1000);
  CHECK(cone_seed(9, 4) == cone_seed(9, 4));
}

TEST_CASE("interior sampling") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ConeSpec cone = random_cone(3, 4, seed);
    const VectorXd center = inscribed_ball(cone).e;
    CounterRng rng(seed, 1);
    for (int k = 0; k < 20; ++k) {
      const BilliardState s = sample_interior_state(cone, center, rng);
      CHECK(margins(cone, s.q).minCoeff() > 0);
      CHECK((s.q - center).norm() <= 0.1 + 1e-15);
      CHECK_NEAR(s.v.norm(), 1.0, 1e-14);
    }
  }
  // A sliver wedge forces the sampling radius to shrink.
  const WedgeSpec thin = planar_wedge(0.01);
  CounterRng rng(1, 1);
  for (int k = 0; k < 20; ++k)
    CHECK(margins(thin.cone, sample_interior_state(thin.cone, inscribed_ball(thin.cone).e, rng).q).minCoeff() > 0);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.trials = 1;
  c.n_walls = 3;
  CHECK_THROWS_AS(c.validate(), Error);
  c.n_walls = 2;
  c.max_steps_override = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.max_steps_override.reset();
  c.search_budget = -1;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("wedge ensemble respects the sharp bound") {
  ExperimentConfig c;
  c.n_walls = 2;
  c.dim = 2;
  c.trials = 100;
  c.trajectories = 50;
  c.seed = 17;
  c.search = light_search();
  int streamed = 0;
  const auto rows = ensemble_run(c, [&](const EnsembleRow&) { ++streamed; });
  CHECK(streamed == 100);
  REQUIRE(rows.size() == 100);
  for (const EnsembleRow& row : rows) {
    CHECK(row.all_checks_pass);
    const ConeSpec cone = random_cone(2, 2, row.seed);
    CHECK(row.max_observed_N <= sharp_bound(wedge_angle(cone)));
    CHECK(row.zigzag_max_L <= row.lemma1_ceiling + 1e-9);
    CHECK_NEAR(row.lemma1_ceiling, 2 / row.d, 1e-15);
  }
}

TEST_CASE("ensemble on a fixed orthant") {
  ExperimentConfig c;
  c.n_walls = 3;
  c.dim = 3;
  c.trials = 2;
  c.trajectories = 200;
  c.fixed_cone = make_cone(MatrixXd::Identity(3, 3));
  c.search = light_search();
  for (const EnsembleRow& row : ensemble_run(c)) {
    CHECK(row.max_observed_N == 3);
    CHECK(row.all_checks_pass);
    CHECK(row.bound_main == 96);
  }
}

TEST_CASE("ensemble in a larger ambient space") {
  ExperimentConfig c;
  c.n_walls = 2;
  c.dim = 4;
  c.trials = 10;
  c.trajectories = 50;
  c.search = light_search();
  for (const EnsembleRow& row : ensemble_run(c)) CHECK(row.all_checks_pass);
}

TEST_CASE("ensemble output is deterministic") {
  ExperimentConfig c;
  c.n_walls = 3;
  c.dim = 3;
  c.trials = 5;
  c.trajectories = 20;
  c.seed = 123;
  c.search_budget = 50;
  c.search = light_search();
  const auto first = ensemble_run(c);
  const auto second = ensemble_run(c);
  CHECK(render(first, OutputFormat::csv) == render(second, OutputFormat::csv));
  CHECK(render(first, OutputFormat::structured) == render(second, OutputFormat::structured));
  c.seed = 124;
  CHECK(render(first, OutputFormat::csv) != render(ensemble_run(c), OutputFormat::csv));
}

TEST_CASE("adversarial search reaches the sharp wedge bound") {
  for (const auto& [theta, expected] : {std::pair{pi / 3, 3}, {2 * pi / 5, 3}, {pi / 2, 2}}) {
    const SearchResult r = adversarial_search(planar_wedge(theta).cone, 2000, 5);
    CHECK(r.best_n == expected);
    CHECK(r.best_record.collisions() == static_cast<std::size_t>(expected));
    CHECK(r.evaluations == 2000);
  }
  const SearchResult o = adversarial_search(make_cone(MatrixXd::Identity(3, 3)), 2000, 5);
  CHECK(o.best_n == 3);

  const SearchResult again = adversarial_search(planar_wedge(pi / 3).cone, 300, 8);
  const SearchResult same = adversarial_search(planar_wedge(pi / 3).cone, 300, 8);
  CHECK((again.best_initial.q - same.best_initial.q).norm() == 0.0);
  CHECK((again.best_initial.v - same.best_initial.v).norm() == 0.0);
  CHECK_THROWS_AS(adversarial_search(planar_wedge(pi / 3).cone, 0, 1), Error);
}

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "conebill/constants.hpp"
#include "conebill/hardball.hpp"
#include "conebill/harness.hpp"
#include "conebill/io.hpp"
#include "conebill/linalg.hpp"
#include "conebill/wedge.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace conebill;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  char elapsed[32];
  std::snprintf(elapsed, sizeof elapsed, "%.1fs", secs);
  std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << id << ". " << name << ": " << out.detail << " (" << elapsed
            << ")" << std::endl;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Criteria 1, 2 and 4 share one ensemble per n.
struct EnsembleTally {
  long cones = 0;
  long trajectories = 0;
  long main_violations = 0;
  long zigzag_violations = 0;
  long audit_failures = 0;
  long constant_violations = 0;
  std::int64_t max_n = 0;
  double worst_zigzag_ratio = 0;
  double seconds = 0;
};

std::vector<EnsembleTally> run_ensembles() {
  std::vector<EnsembleTally> tallies;
  for (int n = 2; n <= 5; ++n) {
    ExperimentConfig c;
    c.n_walls = n;
    c.dim = n;
    c.trials = 1000;
    c.trajectories = 100;
    c.seed = 20240601 + static_cast<std::uint64_t>(n);
    c.search.starts = 32;
    c.search.grid_refine = false;
    EnsembleTally t;
    const auto start = std::chrono::steady_clock::now();
    ensemble_run(c, [&](const EnsembleRow& row) {
      ++t.cones;
      t.trajectories += c.trajectories;
      t.max_n = std::max(t.max_n, row.max_observed_N);
      if (!(static_cast<double>(row.max_observed_N) <= row.bound_main)) ++t.main_violations;
      if (!(row.zigzag_max_L <= 2.0 / row.d + 1e-9)) ++t.zigzag_violations;
      t.worst_zigzag_ratio = std::max(t.worst_zigzag_ratio, row.zigzag_max_L * row.d / 2.0);
      if (!row.all_checks_pass) ++t.audit_failures;

      const ConeSpec cone = random_cone(n, n, row.seed);
      const double psi = capacity_delta(cone).psi;
      const double sq = charge_SQ(cone).value;
      const bool ok = row.d * row.d * n >= row.lambda_min - 1e-9 && row.delta * row.delta >= row.lambda_min / n - 1e-9 &&
                      row.phi <= psi + 1e-9 && row.C > 0 && row.C <= 1 && sq > 0 && sq <= pi / 2;
      if (!ok) ++t.constant_violations;
    });
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    tallies.push_back(t);
  }
  return tallies;
}

}  // namespace

int main() {
  std::vector<EnsembleTally> ensembles;
  const auto ensemble_start = std::chrono::steady_clock::now();

  report(1, "collision bound N <= n!(4/lambda_min)^(n-1)", [&] {
    ensembles = run_ensembles();
    Outcome out;
    std::ostringstream detail;
    long violations = 0, cones = 0, trajectories = 0;
    for (std::size_t k = 0; k < ensembles.size(); ++k) {
      const auto& t = ensembles[k];
      violations += t.main_violations;
      cones += t.cones;
      trajectories += t.trajectories;
      detail << "n=" << k + 2 << " maxN=" << t.max_n << " ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - ensemble_start).count();
    detail << "| " << cones << " cones, " << trajectories << " trajectories, " << violations << " violations";
    out.pass = violations == 0 && cones == 4000;
    out.detail = detail.str() + ", ensemble " + fmt(secs) + "s";
    return out;
  });

  report(2, "zigzag length L <= 2/d + 1e-9", [&] {
    long violations = 0, audits = 0;
    double worst = 0;
    for (const auto& t : ensembles) {
      violations += t.zigzag_violations;
      audits += t.audit_failures;
      worst = std::max(worst, t.worst_zigzag_ratio);
    }
    return Outcome{violations == 0 && audits == 0 && !ensembles.empty(),
                   std::to_string(violations) + " violations, max L d/2 = " + fmt(worst) + ", " +
                       std::to_string(audits) + " cones with a failed audit"};
  });

  report(3, "wedge sharpness ceil(pi/theta)", [] {
    Outcome out;
    std::ostringstream detail;
    const std::vector<std::pair<double, std::int64_t>> cases = {
        {pi / 2, 2}, {pi / 3, 3}, {2 * pi / 5, 3}, {pi / 5, 5}};
    for (const auto& [theta, expected] : cases) {
      const WedgeSpec w = planar_wedge(theta);
      const SearchResult s = adversarial_search(w.cone, 5000, 99);
      // Random trajectories must never exceed the bound.
      std::int64_t random_max = 0;
      CounterRng rng(4242, static_cast<std::uint64_t>(expected));
      const VectorXd center = inscribed_ball(w.cone).e;
      for (int k = 0; k < 20000; ++k) {
        const BilliardState st = sample_interior_state(w.cone, center, rng);
        random_max = std::max<std::int64_t>(random_max, static_cast<std::int64_t>(run(st, w.cone, 1000).collisions()));
      }
      const bool ok = s.best_n == expected && sharp_bound(theta) == expected && random_max <= expected;
      out.pass = out.pass && ok;
      detail << "theta=" << fmt(theta) << " search=" << s.best_n << " random<=" << random_max << " expect "
             << expected << "; ";
    }
    out.detail = detail.str();
    return out;
  });

  report(4, "constant inequalities on every random cone", [&] {
    long violations = 0, cones = 0;
    for (const auto& t : ensembles) {
      violations += t.constant_violations;
      cones += t.cones;
    }
    return Outcome{violations == 0 && cones == 4000,
                   std::to_string(cones) + " cones, " + std::to_string(violations) + " violations"};
  });

  report(5, "multistart delta and C agree with the grid oracle (1e-3)", [] {
    SearchOptions opts;
    opts.grid_refine = false;
    double worst_delta = 0, worst_c = 0;
    for (int k = 0; k < 100; ++k) {
      const int m = k < 50 ? 2 : 3;
      const ConeSpec cone = random_cone(m, m, 777000 + static_cast<std::uint64_t>(k));
      const double delta = capacity_delta_multistart(cone, opts).delta.value;
      const double c = bfk_constant(cone, opts).value;
      worst_delta = std::max(worst_delta, std::abs(delta - oracle::grid_delta(cone.normals())));
      worst_c = std::max(worst_c, std::abs(c - oracle::grid_bfk(cone.normals())));
    }
    return Outcome{worst_delta <= 1e-3 && worst_c <= 1e-3,
                   "100 cones (50 with m=2, 50 with m=3), max |delta err| = " + fmt(worst_delta) +
                       ", max |C err| = " + fmt(worst_c)};
  });

  report(6, "closed forms for orthants and wedges (1e-10)", [] {
    double worst = 0;
    for (int n = 2; n <= 8; ++n) {
      const ConeSpec o = make_cone(MatrixXd::Identity(n, n));
      worst = std::max({worst, std::abs(inscribed_ball(o).d - 1 / std::sqrt(n)),
                        std::abs(capacity_delta(o).delta.value - 1 / std::sqrt(n)), std::abs(lambda_min(o) - 1)});
    }
    for (int k = 1; k <= 20; ++k) {
      const double theta = pi * k / 21;
      const ConeSpec w = make_cone(gen::wedge_normals(theta));
      worst = std::max({worst, std::abs(inscribed_ball(w).d - std::sin(theta / 2)),
                        std::abs(lambda_min(w) - (1 - std::abs(std::cos(theta))))});
    }
    return Outcome{worst <= 1e-10, "orthants n=2..8 and 20 wedges, max error " + fmt(worst)};
  });

  report(7, "hard-ball conjugacy and equal-mass bound", [] {
    gen::Source src(2718);
    int matched = 0, equal_violations = 0;
    double worst_time = 0;
    auto draw = [&](bool equal) {
      HardBallSystem s;
      const int count = src.integer(3, 6);
      double x = 0;
      for (int i = 0; i < count; ++i) {
        s.masses.push_back(equal ? 1.0 : src.log_uniform(0.1, 10));
        x += src.uniform(0.1, 2);
        s.positions.push_back(x);
        s.velocities.push_back(src.uniform(-1, 1));
      }
      return s;
    };
    for (int k = 0; k < 200; ++k) {
      const ConjugacyReport rep = conjugacy_check(draw(false), 1'000'000);
      if (rep.pass()) ++matched;
      worst_time = std::max(worst_time, rep.max_time_rel_error);
    }
    for (int k = 0; k < 200; ++k) {
      const HardBallSystem s = draw(true);
      const auto count = static_cast<std::int64_t>(s.masses.size());
      if (static_cast<std::int64_t>(simulate_balls(s, 1'000'000).events.size()) > (count - 1) * count / 2)
        ++equal_violations;
    }
    return Outcome{matched == 200 && equal_violations == 0,
                   std::to_string(matched) + "/200 conjugate, max time rel err " + fmt(worst_time) + ", " +
                       std::to_string(equal_violations) + " equal-mass violations in 200 systems"};
  });

  report(8, "sign-flip invariance of spectrum, delta, psi, phi (<1e-9)", [] {
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      const int n = 2 + k % 4;
      const ConeSpec cone = random_cone(n, n, 31337 + static_cast<std::uint64_t>(k));
      const ConeSpec flipped = flip_normal(cone, k % n);
      const CapacityEstimate a = capacity_delta(cone), b = capacity_delta(flipped);
      const double spectrum =
          (symmetric_eigenvalues(gram(cone)) - symmetric_eigenvalues(gram(flipped))).cwiseAbs().maxCoeff();
      worst = std::max({worst, spectrum, std::abs(a.delta.value - b.delta.value), std::abs(a.psi - b.psi),
                        std::abs(charge_phi(cone).value - charge_phi(flipped).value)});
    }
    return Outcome{worst < 1e-9, "100 cones, n=2..5, max change " + fmt(worst)};
  });

  report(9, "byte-identical ensemble output for a repeated seed", [] {
    ExperimentConfig c;
    c.n_walls = 3;
    c.dim = 3;
    c.trials = 20;
    c.trajectories = 50;
    c.seed = 8675309;
    c.search_budget = 20;
    std::vector<std::string> outputs;
    for (OutputFormat format : {OutputFormat::csv, OutputFormat::csv, OutputFormat::structured, OutputFormat::structured}) {
      const std::string path = "acceptance_ensemble_" + std::to_string(outputs.size()) + ".out";
      {
        std::ofstream out(path, std::ios::binary);
        write_ensemble(out, ensemble_run(c), format);
      }
      outputs.push_back(slurp(path));
      std::remove(path.c_str());
    }
    bool same = outputs[0] == outputs[1] && outputs[2] == outputs[3] && !outputs[0].empty();
    std::string detail = "library csv and structured outputs identical";
#ifdef CONEBILL_CLI_PATH
    std::vector<std::string> cli;
    for (int k = 0; k < 2; ++k) {
      const std::string path = "acceptance_cli_" + std::to_string(k) + ".csv";
      const std::string cmd = std::string(CONEBILL_CLI_PATH) +
                              " ensemble --walls 3 --dim 3 --trials 10 --seed 8675309 --trajectories 30 --out " + path +
                              " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) same = false;
      cli.push_back(slurp(path));
      std::remove(path.c_str());
    }
    same = same && cli[0] == cli[1] && !cli[0].empty();
    detail += "; CLI output files identical";
#endif
    return Outcome{same, same ? detail : "outputs differ"};
  });

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}

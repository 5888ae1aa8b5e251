// conebill: command-line driver for cone billiard bounds, simulation and experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "conebill/cone.hpp"
#include "conebill/constants.hpp"
#include "conebill/hardball.hpp"
#include "conebill/harness.hpp"
#include "conebill/io.hpp"
#include "conebill/simulator.hpp"
#include "conebill/wedge.hpp"

using namespace conebill;

namespace {

VectorXd to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

void print_unfolding(const Unfolding& unfolding) {
  for (const auto& p : unfolding.points) std::cout << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Billiards in polyhedral cones: collision bounds, simulation and experiments"};
  app.require_subcommand(1);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Print every constant and collision bound of a cone");
  std::string bounds_cone;
  std::string bounds_format = "text";
  bool bounds_no_grid = false;
  bounds_cmd->add_option("--cone", bounds_cone, "Cone file")->required();
  bounds_cmd->add_option("--format", bounds_format, "text, csv or structured")
      ->check(CLI::IsMember({"text", "csv", "structured"}));
  bounds_cmd->add_flag("--no-grid", bounds_no_grid, "Skip the dense-grid polish for m <= 3");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run one trajectory");
  std::string sim_cone;
  std::string sim_q;
  std::string sim_v;
  std::optional<std::int64_t> sim_max_steps;
  bool sim_audit = false;
  sim_cmd->add_option("--cone", sim_cone, "Cone file")->required();
  sim_cmd->add_option("--q", sim_q, "Initial position, comma separated")->required();
  sim_cmd->add_option("--v", sim_v, "Initial velocity, comma separated")->required();
  sim_cmd->add_option("--max-steps", sim_max_steps, "Collision budget (default ceil(bound_main) + 1)");
  sim_cmd->add_flag("--audit", sim_audit, "Check the trajectory against every bound");

  // ensemble
  auto* ens_cmd = app.add_subcommand("ensemble", "Random cones x random trajectories, audited");
  ExperimentConfig config;
  std::string ens_format = "csv";
  std::string ens_cone;
  std::optional<std::int64_t> ens_max_steps;
  ens_cmd->add_option("--walls", config.n_walls, "Walls per cone")->required();
  ens_cmd->add_option("--dim", config.dim, "Ambient dimension")->required();
  ens_cmd->add_option("--trials", config.trials, "Number of cones")->required();
  ens_cmd->add_option("--seed", config.seed, "Seed")->required();
  ens_cmd->add_option("--out", config.output_path, "Output file")->required();
  ens_cmd->add_option("--format", ens_format, "csv or structured")->check(CLI::IsMember({"csv", "structured"}));
  ens_cmd->add_option("--trajectories", config.trajectories, "Trajectories per cone");
  ens_cmd->add_option("--search-budget", config.search_budget, "Adversarial search evaluations per cone");
  ens_cmd->add_option("--max-steps", ens_max_steps, "Override the collision budget");
  ens_cmd->add_option("--cone", ens_cone, "Use this cone for every trial");
  ens_cmd->add_option("--starts", config.search.starts, "Multistarts for the C search");

  // search
  auto* search_cmd = app.add_subcommand("search", "Adversarial search for many collisions");
  std::string search_cone;
  int search_budget = 2000;
  std::uint64_t search_seed = 0;
  search_cmd->add_option("--cone", search_cone, "Cone file")->required();
  search_cmd->add_option("--budget", search_budget, "Evaluations")->required();
  search_cmd->add_option("--seed", search_seed, "Seed")->required();

  // wedge
  auto* wedge_cmd = app.add_subcommand("wedge", "Two-wall cone with angle theta");
  double wedge_theta = std::numbers::pi / 2;
  bool wedge_search = false;
  bool wedge_unfold = false;
  int wedge_budget = 2000;
  std::uint64_t wedge_seed = 0;
  std::string wedge_q;
  std::string wedge_v;
  wedge_cmd->add_option("--theta", wedge_theta, "Wedge angle in radians, in (0, pi)")->required();
  wedge_cmd->add_flag("--search", wedge_search, "Search for the maximal collision count");
  wedge_cmd->add_option("--budget", wedge_budget, "Search evaluations");
  wedge_cmd->add_option("--seed", wedge_seed, "Search seed");
  wedge_cmd->add_option("--q", wedge_q, "Initial position for a single trajectory");
  wedge_cmd->add_option("--v", wedge_v, "Initial velocity for a single trajectory");
  wedge_cmd->add_flag("--unfold", wedge_unfold, "Print the unfolded trajectory as a two-column table");

  // hardball
  auto* ball_cmd = app.add_subcommand("hardball", "Point masses on a line");
  std::string ball_masses;
  std::string ball_positions;
  std::string ball_velocities;
  bool ball_conjugacy = false;
  std::int64_t ball_max_events = 1'000'000;
  ball_cmd->add_option("--masses", ball_masses, "Masses, comma separated")->required();
  ball_cmd->add_option("--positions", ball_positions, "Positions, strictly increasing")->required();
  ball_cmd->add_option("--velocities", ball_velocities, "Velocities")->required();
  ball_cmd->add_flag("--conjugacy", ball_conjugacy, "Compare against the cone billiard");
  ball_cmd->add_option("--max-events", ball_max_events, "Event budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bounds_cmd) {
      SearchOptions options;
      options.grid_refine = !bounds_no_grid;
      const BoundsReport report = bounds_report(load_cone_file(bounds_cone), options);
      if (bounds_format == "csv")
        std::cout << bounds_csv_header() << '\n' << bounds_csv_row(report) << '\n';
      else if (bounds_format == "structured")
        std::cout << to_json(report).dump(2) << '\n';
      else
        std::cout << bounds_text(report);
      return 0;
    }

    if (*sim_cmd) {
      const ConeSpec cone = load_cone_file(sim_cone);
      const BilliardState state = make_state(cone, to_vector(parse_number_list(sim_q)), to_vector(parse_number_list(sim_v)));
      std::optional<BoundsReport> report;
      if (sim_audit || !sim_max_steps) report = bounds_report(cone);
      const TrajectoryRecord record = run(state, cone, sim_max_steps.value_or(default_max_steps(*report)));
      std::optional<AuditVerdict> verdict;
      if (sim_audit) verdict = audit(record, *report);
      std::cout << to_json(record, verdict).dump(2) << '\n';
      if (record.terminal == Terminal::StepLimit) std::cerr << "warning: step limit reached\n";
      return verdict && !verdict->pass() ? 1 : 0;
    }

    if (*ens_cmd) {
      config.format = ens_format == "csv" ? OutputFormat::csv : OutputFormat::structured;
      config.max_steps_override = ens_max_steps;
      if (!ens_cone.empty()) config.fixed_cone = load_cone_file(ens_cone);
      std::ofstream out(config.output_path, std::ios::binary);
      if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + config.output_path + "'");
      std::vector<EnsembleRow> rows;
      bool failed = false;
      if (config.format == OutputFormat::csv) {
        out << ensemble_csv_header() << '\n';
        rows = ensemble_run(config, [&](const EnsembleRow& row) {
          out << ensemble_csv_row(row) << '\n' << std::flush;
          failed = failed || !row.all_checks_pass;
        });
      } else {
        rows = ensemble_run(config);
        write_ensemble(out, rows, config.format);
        for (const auto& row : rows) failed = failed || !row.all_checks_pass;
      }
      std::int64_t max_n = 0;
      for (const auto& row : rows) max_n = std::max(max_n, row.max_observed_N);
      std::cerr << rows.size() << " cones, max observed collisions " << max_n << ", "
                << (failed ? "CHECK FAILURES" : "all checks pass") << '\n';
      return failed ? 1 : 0;
    }

    if (*search_cmd) {
      const ConeSpec cone = load_cone_file(search_cone);
      const SearchResult result = adversarial_search(cone, search_budget, search_seed);
      Json out = {{"best_N", result.best_n},
                  {"evaluations", result.evaluations},
                  {"trajectory", to_json(result.best_record)}};
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*wedge_cmd) {
      const WedgeSpec wedge = planar_wedge(wedge_theta);
      Json out = {{"theta", wedge.theta}, {"sharp_bound", sharp_bound(wedge.theta)}, {"cone", cone_to_json(wedge.cone)}};
      std::optional<TrajectoryRecord> record;
      if (wedge_search) {
        const SearchResult result = adversarial_search(wedge.cone, wedge_budget, wedge_seed);
        out["search_best_N"] = result.best_n;
        record = result.best_record;
      } else if (!wedge_q.empty() && !wedge_v.empty()) {
        const BilliardState state =
            make_state(wedge.cone, to_vector(parse_number_list(wedge_q)), to_vector(parse_number_list(wedge_v)));
        record = run(state, wedge.cone, sharp_bound(wedge.theta) + 1);
        out["collisions"] = record->collisions();
      }
      if (wedge_unfold) {
        if (!record) throw Error(ErrorCode::InvalidConfig, "--unfold needs --search or --q/--v");
        print_unfolding(unfold(*record, wedge));
        return 0;
      }
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*ball_cmd) {
      HardBallSystem system{parse_number_list(ball_masses), parse_number_list(ball_positions),
                            parse_number_list(ball_velocities)};
      const BallRun run_result = simulate_balls(system, ball_max_events);
      Json out = to_json(system, run_result);
      if (ball_conjugacy) out["conjugacy"] = to_json(conjugacy_check(system, ball_max_events));
      std::cout << out.dump(2) << '\n';
      return ball_conjugacy && !out["conjugacy"]["pass"].get<bool>() ? 1 : 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

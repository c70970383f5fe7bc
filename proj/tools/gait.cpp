// Command-line front end: scenario runner and one-shot planner inspection.

#include <CLI11.hpp>

#include "inhand/inhand.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

inhand::Rot3 parse_quat(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4) {
    throw CLI::ValidationError("quaternion must be w,x,y,z");
  }
  return inhand::Rot3::from_quaternion(v[0], v[1], v[2], v[3]);
}

int run_command(const std::string& file, std::optional<std::uint64_t> seed,
                std::optional<int> reps, std::string log_dir,
                const std::string& report_format) {
  inhand::Scenario scenario = inhand::Scenario::load(file);
  if (seed) scenario.seed = *seed;
  if (reps) scenario.repetitions = *reps;

  if (log_dir.empty()) {
    if (const char* env = std::getenv("GAIT_LOG_DIR")) log_dir = env;
  }

  const inhand::ScenarioResult result = inhand::run_scenario(scenario);

  if (!log_dir.empty()) {
    std::filesystem::create_directories(log_dir);
    inhand::json metrics = inhand::json::array();
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
      const auto path = std::filesystem::path(log_dir) /
                        (scenario.name + "_rep" + std::to_string(i) +
                         ".jsonl");
      std::ofstream out(path);
      out << inhand::serialize_log(result.runs[i].log);
      metrics.push_back(inhand::metrics_to_json(result.runs[i].metrics));
    }
    std::ofstream mout(std::filesystem::path(log_dir) /
                       (scenario.name + "_metrics.json"));
    mout << metrics.dump(2) << '\n';
  }

  std::vector<inhand::RunMetrics> metrics;
  for (const auto& run : result.runs) metrics.push_back(run.metrics);
  const auto format = report_format == "csv" ? inhand::ReportFormat::Csv
                                             : inhand::ReportFormat::Table;
  std::cout << inhand::emit_report(metrics, format);
  return result.all_succeeded() ? 0 : 1;
}

int plan_command(const inhand::Rot3& start, const inhand::Rot3& goal,
                 double rho, double sigma_deg) {
  using namespace inhand;
  const SO3PlanResult result =
      so3_plan(start, goal, rho, deg_to_rad(sigma_deg));
  if (!plan_ok(result)) {
    std::cout << "planning failed: " << failure_of(result).detail << '\n';
    return 2;
  }
  const Plan& plan = plan_of(result);
  const auto& d = *plan.decomposition;
  std::cout << "connection: psi=" << rad_to_deg(d.psi)
            << " deg, theta=" << rad_to_deg(d.theta)
            << " deg, phi=" << rad_to_deg(d.phi) << " deg\n";
  std::cout << "actions: " << plan.actions.size() << '\n';
  for (const auto& a : plan.actions) {
    std::cout << "  t=" << a.timestamp << "s " << mode_name(a.mode) << ' '
              << rad_to_deg(a.magnitude) << " deg\n";
  }
  Rot3 replay = start;
  for (const auto& a : plan.actions) {
    replay = rot_about_axis(a.mode == Mode::RotX ? Axis::X : Axis::Z,
                            a.magnitude) *
             replay;
  }
  std::cout << "replay distance to goal z-manifold: "
            << build_goal_manifold(goal, deg_to_rad(sigma_deg))
                   .query_closest(replay)
                   .dist
            << " rad\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SO(3) in-hand reorientation planner and simulation harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario file");
  std::string scenario_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string log_dir;
  std::string report_format = "table";
  run->add_option("scenario", scenario_file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--reps", reps, "override the repetition count");
  run->add_option("--log-dir", log_dir,
                  "write per-repetition JSONL logs and metrics here "
                  "(default: $GAIT_LOG_DIR)");
  run->add_option("--report", report_format, "report format")
      ->check(CLI::IsMember({"csv", "table"}));

  auto* plan = app.add_subcommand("plan", "one-shot planner inspection");
  std::string start_quat, goal_quat;
  double rho = 0.2;
  double sigma_deg = 2.0;
  plan->add_option("--start", start_quat, "start orientation, w,x,y,z")
      ->required();
  plan->add_option("--goal", goal_quat, "goal orientation, w,x,y,z")
      ->required();
  plan->add_option("--rho", rho, "modal transition threshold (rad)");
  plan->add_option("--sigma", sigma_deg, "rotation step size (deg)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return run_command(scenario_file, seed, reps, log_dir, report_format);
    }
    return plan_command(parse_quat(start_quat), parse_quat(goal_quat), rho,
                        sigma_deg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

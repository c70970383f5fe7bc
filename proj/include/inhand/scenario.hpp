#pragma once

#include "inhand/controller.hpp"
#include "inhand/geometry.hpp"
#include "inhand/object_model.hpp"
#include "inhand/plant.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace inhand {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Cube faces

enum class CubeFace { A, B, C, D, E, F };

inline CubeFace cube_face_from_char(char c) {
  if (c >= 'a' && c <= 'f') c = static_cast<char>(c - 'a' + 'A');
  if (c < 'A' || c > 'F') {
    throw std::invalid_argument("cube face must be one of A..F");
  }
  return static_cast<CubeFace>(c - 'A');
}

inline char cube_face_char(CubeFace f) {
  return static_cast<char>('A' + static_cast<int>(f));
}

/// Canonical axis-aligned orientation presenting the named face. A is the
/// reference (identity); B is one +90 deg roll from A; opposite faces
/// (A-C, B-D, E-F) differ by a pi rotation. Representatives are chosen away
/// from the pitch singularity of the rotation metric.
inline Pose cube_face_goal(CubeFace face, const Vec3& t_center = Vec3::Zero()) {
  const Rot3 rx90 = rot_about_axis(Axis::X, kPi / 2.0);
  const Rot3 rz90 = rot_about_axis(Axis::Z, kPi / 2.0);
  Rot3 r;
  switch (face) {
    case CubeFace::A: r = Rot3::identity(); break;
    case CubeFace::B: r = rx90; break;
    case CubeFace::C: r = rot_about_axis(Axis::X, kPi); break;
    case CubeFace::D: r = rot_about_axis(Axis::X, -kPi / 2.0); break;
    case CubeFace::E: r = rz90 * rx90; break;
    case CubeFace::F: r = rot_about_axis(Axis::X, kPi) * rz90 * rx90; break;
  }
  return Pose{t_center, r};
}

// ---------------------------------------------------------------------------
// Scenario description

struct Scenario {
  std::string name = "scenario";
  std::variant<std::string, ObjectModel> object = std::string("cube");
  Pose start_pose;
  std::vector<Pose> goals;
  std::vector<Perturbation> perturbations;
  ControlParams params;
  TrackerModel tracker;
  std::uint64_t seed = 0;
  int repetitions = 1;

  void validate() const {
    if (goals.empty()) {
      throw std::invalid_argument("scenario: at least one goal required");
    }
    if (repetitions < 1) {
      throw std::invalid_argument("scenario: repetitions must be >= 1");
    }
    params.validate();
    resolve_object().validate();
  }

  ObjectModel resolve_object() const {
    if (std::holds_alternative<std::string>(object)) {
      return ObjectModel::preset(std::get<std::string>(object));
    }
    return std::get<ObjectModel>(object);
  }

  static Scenario from_json(const json& j);
  static Scenario load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    json j;
    in >> j;
    return from_json(j);
  }
};

// ---------------------------------------------------------------------------
// JSON helpers

namespace detail {

inline Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("expected a 3-element array");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline Rot3 rot_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument("expected a [w, x, y, z] quaternion");
  }
  return Rot3::from_quaternion(j[0].get<double>(), j[1].get<double>(),
                               j[2].get<double>(), j[3].get<double>());
}

inline Pose pose_from_json(const json& j, const Vec3& default_position) {
  Pose p;
  p.position = default_position;
  if (j.contains("face")) {
    const std::string f = j.at("face").get<std::string>();
    if (f.size() != 1) throw std::invalid_argument("bad cube face: " + f);
    p.orientation = cube_face_goal(cube_face_from_char(f[0])).orientation;
  } else {
    p.orientation = rot_from_json(j.at("R"));
  }
  if (j.contains("T")) p.position = vec3_from_json(j.at("T"));
  return p;
}

inline PerturbAxis perturb_axis_from_string(const std::string& s) {
  if (s == "rot_x") return PerturbAxis::RotX;
  if (s == "rot_y") return PerturbAxis::RotY;
  if (s == "rot_z") return PerturbAxis::RotZ;
  if (s == "trans_x") return PerturbAxis::TransX;
  if (s == "trans_y") return PerturbAxis::TransY;
  if (s == "trans_z") return PerturbAxis::TransZ;
  throw std::invalid_argument("unknown perturbation axis: " + s);
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "rot_x") return Mode::RotX;
  if (s == "rot_z") return Mode::RotZ;
  if (s == "trans_y") return Mode::TransY;
  if (s == "trans_z") return Mode::TransZ;
  throw std::invalid_argument("unknown mode: " + s);
}

inline ModeResponse mode_response_from_json(const json& j) {
  ModeResponse r;
  if (j.contains("gain_mean")) r.gain_mean = j["gain_mean"].get<double>();
  if (j.contains("gain_std")) r.gain_std = j["gain_std"].get<double>();
  if (j.contains("rot_coupling_std"))
    r.rot_coupling_std = vec3_from_json(j["rot_coupling_std"]);
  if (j.contains("trans_coupling_std"))
    r.trans_coupling_std = vec3_from_json(j["trans_coupling_std"]);
  if (j.contains("rot_bias")) r.rot_bias = vec3_from_json(j["rot_bias"]);
  if (j.contains("trans_bias")) r.trans_bias = vec3_from_json(j["trans_bias"]);
  return r;
}

inline ObjectModel object_model_from_json(const json& j) {
  ObjectModel m;
  m.name = j.value("name", std::string("object"));
  if (j.contains("modes")) {
    for (const auto& [key, value] : j.at("modes").items()) {
      m.mode_response(mode_from_string(key)) = mode_response_from_json(value);
    }
  }
  m.slip_probability = j.value("slip_probability", 0.0);
  m.slip_magnitude_std = j.value("slip_magnitude_std", 0.0);
  if (j.contains("basin")) {
    const auto& b = j.at("basin");
    m.basin.center_offset = b.value("center_offset", 0.0);
    m.basin.pull_strength = b.value("pull_strength", 0.0);
    m.basin.capture_range = b.value("capture_range", kPi);
    m.basin.noise_std = b.value("noise_std", 0.0);
    m.basin.period = b.value("period", 2.0 * kPi);
  }
  if (j.contains("stuck_states")) {
    for (const auto& s : j.at("stuck_states")) {
      m.stuck_states.push_back({s.at("roll_min").get<double>(),
                                s.at("roll_max").get<double>(),
                                s.at("escape_probability").get<double>()});
    }
  }
  return m;
}

}  // namespace detail

inline Scenario Scenario::from_json(const json& j) {
  Scenario s;
  s.name = j.value("name", std::string("scenario"));

  if (j.contains("params")) {
    const auto& p = j.at("params");
    s.params.rho = p.value("rho", s.params.rho);
    if (p.contains("sigma_r_deg"))
      s.params.sigma_r = deg_to_rad(p["sigma_r_deg"].get<double>());
    s.params.sigma_t = p.value("sigma_t", s.params.sigma_t);
    s.params.tau_r = p.value("tau_r", s.params.tau_r);
    s.params.tau_t = p.value("tau_t", s.params.tau_t);
    s.params.lambda = p.value("lambda", s.params.lambda);
    if (p.contains("t_center"))
      s.params.t_center = detail::vec3_from_json(p["t_center"]);
    if (p.contains("sigma_r_bounds_deg")) {
      const auto& b = p["sigma_r_bounds_deg"];
      s.params.sigma_r_bounds = {deg_to_rad(b.at(0).get<double>()),
                                 deg_to_rad(b.at(1).get<double>())};
    }
    s.params.max_iterations =
        p.value("max_iterations", s.params.max_iterations);
    s.params.settle_window = p.value("settle_window", s.params.settle_window);
  }

  if (j.contains("object")) {
    const auto& o = j.at("object");
    if (o.is_string()) {
      s.object = o.get<std::string>();
    } else {
      s.object = detail::object_model_from_json(o);
    }
  }

  if (j.contains("start_pose")) {
    s.start_pose = detail::pose_from_json(j.at("start_pose"),
                                          s.params.t_center);
  } else {
    s.start_pose.position = s.params.t_center;
  }

  for (const auto& g : j.at("goals")) {
    s.goals.push_back(detail::pose_from_json(g, s.params.t_center));
  }

  if (j.contains("perturbations")) {
    for (const auto& p : j.at("perturbations")) {
      s.perturbations.push_back(
          {p.at("time").get<double>(),
           detail::perturb_axis_from_string(p.at("axis").get<std::string>()),
           p.at("magnitude").get<double>()});
    }
  }

  if (j.contains("tracker")) {
    const auto& t = j.at("tracker");
    s.tracker.rot_noise_std_deg =
        t.value("rot_noise_std_deg", s.tracker.rot_noise_std_deg);
    s.tracker.trans_noise_std_mm =
        t.value("trans_noise_std_mm", s.tracker.trans_noise_std_mm);
    s.tracker.rate_hz = t.value("rate_hz", s.tracker.rate_hz);
    s.tracker.latency_ticks =
        t.value("latency_ticks", s.tracker.latency_ticks);
  }

  s.seed = j.value("seed", 0ULL);
  s.repetitions = j.value("repetitions", 1);
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Metrics and run results

struct RunMetrics {
  std::string object;
  double final_orientation_error_deg = 0.0;
  double total_plan_time_s = 0.0;  // wall clock, hardware dependent
  double total_time_s = 0.0;       // simulated clock
  bool success = false;
  int recovery_phases = 0;
  int replans = 0;
  int perturbations_survived = 0;
  std::vector<double> per_goal_errors_deg;
};

struct RunResult {
  RunMetrics metrics;
  TrajectoryRecord log;
  std::vector<ControlStatus> goal_statuses;
  // log.entries index ranges per goal, for trajectory-level checks
  std::vector<std::pair<std::size_t, std::size_t>> goal_spans;
  std::vector<Pose> true_trajectory;  // plant ground truth, one per action
};

struct ScenarioResult {
  std::vector<RunResult> runs;

  bool all_succeeded() const {
    return std::all_of(runs.begin(), runs.end(),
                       [](const RunResult& r) { return r.metrics.success; });
  }
};

/// Plant wrapper that injects scheduled perturbations between ticks and
/// records the ground-truth trajectory.
class PerturbingPlant : public PlantHandle {
 public:
  PerturbingPlant(CompliantPlant& inner, std::vector<Perturbation> schedule)
      : inner_(inner), schedule_(std::move(schedule)) {
    std::stable_sort(schedule_.begin(), schedule_.end(),
                     [](const Perturbation& a, const Perturbation& b) {
                       return a.time < b.time;
                     });
    true_trajectory_.push_back(inner_.state().true_pose);
  }

  void mode_action(const ModeAction& action) override {
    while (next_ < schedule_.size() &&
           schedule_[next_].time <= inner_.clock()) {
      inner_.apply_perturbation(schedule_[next_]);
      ++next_;
    }
    inner_.mode_action(action);
    true_trajectory_.push_back(inner_.state().true_pose);
  }

  double clock() const override { return inner_.clock(); }

  std::size_t perturbations_applied() const { return next_; }
  const std::vector<Pose>& true_trajectory() const { return true_trajectory_; }

 private:
  CompliantPlant& inner_;
  std::vector<Perturbation> schedule_;
  std::size_t next_ = 0;
  std::vector<Pose> true_trajectory_;
};

inline int count_recovery_phases(const TrajectoryRecord& log) {
  int phases = 0;
  bool in_recovery = false;
  for (const auto& e : log.entries) {
    if (e.phase == Phase::Recovery) {
      if (!in_recovery) ++phases;
      in_recovery = true;
    } else {
      in_recovery = false;
    }
  }
  return phases;
}

/// Runs every repetition of a scenario. Repetition k derives its RNG streams
/// from seed + k; runs are fully independent and ordered by index.
inline ScenarioResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const ObjectModel model = scenario.resolve_object();

  ScenarioResult result;
  result.runs.reserve(static_cast<std::size_t>(scenario.repetitions));

  for (int rep = 0; rep < scenario.repetitions; ++rep) {
    const std::uint64_t seed = scenario.seed + static_cast<std::uint64_t>(rep);
    CompliantPlant plant(model, scenario.start_pose, seed);
    TrackerEmulator tracker(plant, scenario.tracker,
                            seed ^ 0x9e3779b97f4a7c15ULL);
    PerturbingPlant wrapped(plant, scenario.perturbations);

    RunResult run;
    run.metrics.object = model.name;
    bool all_ok = true;

    for (const Pose& goal : scenario.goals) {
      const std::size_t begin = run.log.entries.size();
      ControlResult cr =
          object_control(goal, scenario.params, wrapped, tracker);
      run.log.entries.insert(run.log.entries.end(), cr.log.entries.begin(),
                             cr.log.entries.end());
      run.goal_spans.emplace_back(begin, run.log.entries.size());
      run.goal_statuses.push_back(cr.status);
      run.metrics.replans += cr.replans;
      run.metrics.total_plan_time_s += cr.plan_wall_time_s;
      run.metrics.per_goal_errors_deg.push_back(rad_to_deg(
          dist_R(goal.orientation, plant.state().true_pose.orientation)));
      if (cr.status != ControlStatus::Ok) {
        all_ok = false;
        break;
      }
    }

    run.metrics.total_time_s = plant.clock();
    run.metrics.recovery_phases = count_recovery_phases(run.log);
    run.metrics.perturbations_survived =
        static_cast<int>(wrapped.perturbations_applied());
    run.metrics.final_orientation_error_deg =
        run.metrics.per_goal_errors_deg.empty()
            ? 0.0
            : run.metrics.per_goal_errors_deg.back();
    run.metrics.success =
        all_ok &&
        run.metrics.final_orientation_error_deg <=
            rad_to_deg(scenario.params.tau_r);
    run.true_trajectory = wrapped.true_trajectory();
    result.runs.push_back(std::move(run));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

inline json pose_to_json(const Pose& p) {
  return json{{"T", {p.position.x(), p.position.y(), p.position.z()}},
              {"R",
               {p.orientation.w(), p.orientation.x(), p.orientation.y(),
                p.orientation.z()}}};
}

inline json entry_to_json(const TrajectoryEntry& e) {
  json j{{"t", e.time},
         {"phase", phase_name(e.phase)},
         {"pose", pose_to_json(e.observed)},
         {"sigma_r", e.sigma_r},
         {"replan_count", e.replan_count}};
  if (e.commanded) {
    j["action"] = {{"mode", mode_name(e.commanded->mode)},
                   {"magnitude", e.commanded->magnitude}};
  } else {
    j["action"] = nullptr;
  }
  return j;
}

/// Line-oriented trajectory log: one self-contained JSON record per entry.
inline std::string serialize_log(const TrajectoryRecord& log) {
  std::string out;
  for (const auto& e : log.entries) {
    out += entry_to_json(e).dump();
    out += '\n';
  }
  return out;
}

inline json metrics_to_json(const RunMetrics& m) {
  return json{{"object", m.object},
              {"final_orientation_error_deg", m.final_orientation_error_deg},
              {"total_plan_time_s", m.total_plan_time_s},
              {"total_time_s", m.total_time_s},
              {"success", m.success},
              {"recovery_phases", m.recovery_phases},
              {"replans", m.replans},
              {"perturbations_survived", m.perturbations_survived},
              {"per_goal_errors_deg", m.per_goal_errors_deg}};
}

enum class ReportFormat { Csv, Table };

/// Aggregated benchmark report, one row per object in first-seen order:
/// mean final error, mean plan time, mean simulated time and the success
/// fraction. Formatting is bit-stable for a given input.
inline std::string emit_report(const std::vector<RunMetrics>& metrics,
                               ReportFormat format) {
  if (metrics.empty()) {
    throw std::invalid_argument("emit_report: no metrics to report");
  }
  struct Row {
    std::string object;
    double err = 0.0, plan = 0.0, total = 0.0;
    int successes = 0, runs = 0;
  };
  std::vector<Row> rows;
  for (const auto& m : metrics) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const Row& r) { return r.object == m.object; });
    if (it == rows.end()) {
      rows.push_back({m.object, 0.0, 0.0, 0.0, 0, 0});
      it = rows.end() - 1;
    }
    it->err += m.final_orientation_error_deg;
    it->plan += m.total_plan_time_s;
    it->total += m.total_time_s;
    it->successes += m.success ? 1 : 0;
    it->runs += 1;
  }

  char buf[192];
  std::string out;
  if (format == ReportFormat::Csv) {
    out += "object,err_deg,plan_time_s,total_time_s,success\n";
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%s,%.2f,%.3f,%.1f,%d/%d\n",
                    r.object.c_str(), r.err / r.runs, r.plan / r.runs,
                    r.total / r.runs, r.successes, r.runs);
      out += buf;
    }
  } else {
    std::snprintf(buf, sizeof(buf), "%-10s %10s %14s %14s %9s\n", "object",
                  "err (deg)", "plan time (s)", "total time (s)", "success");
    out += buf;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%-10s %10.2f %14.3f %14.1f %6d/%d\n",
                    r.object.c_str(), r.err / r.runs, r.plan / r.runs,
                    r.total / r.runs, r.successes, r.runs);
      out += buf;
    }
  }
  return out;
}

}  // namespace inhand

// Copyright 2026 The uvcsafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uvc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uvc/config.hpp"
#include "uvc/dosimetry.hpp"
#include "uvc/event_log.hpp"
#include "uvc/paper_scenarios.hpp"
#include "uvc/simulator.hpp"
#include "uvc/timeline_io.hpp"

namespace uvc::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const double secs =
      std::chrono::duration<double>(now.time_since_epoch()).count();
  return format_iso8601(std::floor(secs), 0.0);
}

void report_error(std::ostream& err, const std::exception& e) {
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    fmt::print(err, "error: invalid configuration\n");
    for (const auto& x : v->violations()) fmt::print(err, "  {}: {}\n", x.field, x.message);
    return;
  }
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
    if (c->line() != 0)
      fmt::print(err, "error: line {}: {}\n", c->line(), c->what());
    else
      fmt::print(err, "error: {}\n", c->what());
    return;
  }
  fmt::print(err, "error: {}\n", e.what());
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    report_error(err, e);
    return kExitInputError;
  }
}

double on_time(const LampOnIntervals& iv, const RoomModel& room, LampTier tier) {
  double total = 0.0;
  for (const auto& [id, list] : iv) {
    const auto* lamp = room.find_lamp(id);
    if (lamp == nullptr || lamp->tier != tier) continue;
    for (const auto& x : list) total += x.duration();
  }
  return total;
}

struct DoseVerdict {
  CoverageReport report;
  double minimal_efficiency = 0.0;
  bool literal_pass = false;
  bool envelope_pass = false;
};

DoseVerdict dose_verdict(const RoomModel& room, double target, double cycle) {
  DoseVerdict v;
  const auto grid = make_floor_grid(room, 8, 6, 0.0, target);
  v.report = coverage_report(grid, cycle, room.lamps);
  v.literal_pass = v.report.max_time <= cycle;
  v.minimal_efficiency = minimal_uniform_efficiency(grid, room.lamps, cycle);
  v.envelope_pass = v.literal_pass || v.minimal_efficiency <= 1.0;
  return v;
}

void print_dose_summary(std::ostream& out, const DoseVerdict& v) {
  const auto& r = v.report;
  fmt::print(out,
             "dose map: target {:g} J/m2, cycle {:g} s: min {:.1f} s, max {:.1f} s, mean {:.1f} s, "
             "covered fraction {:.3f}\n",
             r.target_dose, r.cycle_seconds, r.min_time, r.max_time, r.mean_time,
             r.covered_fraction);
  if (!v.literal_pass) {
    fmt::print(out,
               "dose map: max time exceeds the cycle at the configured efficiency; "
               "minimal uniform UVC efficiency meeting it is {:.4f}\n",
               v.minimal_efficiency);
  }
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_paths"] = config_paths;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["out_dir"] = out_dir.string();
  j["tool_version"] = tool_version;
  j["started_at"] = started_at;
  j["outputs"] = outputs;
  j["status"] = status;
  return j;
}

void write_manifest(const fs::path& file, const RunManifest& m) {
  std::ofstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + file.string());
  f << m.to_json().dump(2) << '\n';
}

fs::path resolve_out_dir(const std::optional<fs::path>& flag, const fs::path& fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return fallback;
}

RoomModel load_room_arg(const std::string& arg) {
  if (arg == "builtin") return paper_default_room();
  return load_room_file(arg);
}

Scenario load_scenario_arg(const std::string& arg) {
  constexpr std::string_view prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) {
    const auto name = arg.substr(prefix.size());
    if (name == "midnight") return midnight_scenario();
    if (name.size() == 1) return paper_scenario(name[0]);
    throw std::invalid_argument("unknown built-in scenario '" + name + "'");
  }
  return load_scenario_file(arg);
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  Scenario s;
  RunManifest m;
  fs::path dir;
  const int rc = guarded(err, [&] {
    s = load_scenario_arg(o.scenario);
    if (o.seed) s.seed = *o.seed;
    if (o.tz_offset) s.policy.tz_offset = *o.tz_offset;
    require_valid(validate(s));
    dir = resolve_out_dir(o.out, fs::path("out") / s.name);
    fs::create_directories(dir);
    m.command = "simulate";
    m.config_paths = {o.scenario};
    m.seed = s.seed;
    m.out_dir = dir;
    m.started_at = utc_now();
    write_manifest(dir / "manifest.json", m);
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  return guarded(err, [&] {
    const auto result = simulate(s);
    m.outputs = write_run_artifacts(dir, result, s);
    const auto iv = lamp_on_intervals(result.timeline.commands, result.timeline.end_time);
    const bool pass = result.safety.pass();
    m.status = pass ? "pass" : "safety_violation";
    write_manifest(dir / "manifest.json", m);
    fmt::print(out, "{}: {} ({} violations, ceiling on {:.1f} s, desk on {:.1f} s) -> {}\n",
               s.name, pass ? "pass" : "FAIL", result.safety.violations.size(),
               on_time(iv, s.room, LampTier::Ceiling), on_time(iv, s.room, LampTier::Desk),
               dir.string());
    for (const auto& v : result.safety.violations)
      fmt::print(out, "  violation t={:.1f} s occupant {} lamp {} latency {:.2f} s\n",
                 v.timestamp, v.occupant_id, v.lamp_id, v.latency);
    return pass ? kExitOk : kExitSafetyViolation;
  });
}

int cmd_dosemap(const DosemapOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(o.target_dose >= 0.0) || !std::isfinite(o.target_dose))
      throw std::invalid_argument("--target-dose must be >= 0");
    if (!(o.cycle > 0.0) || !std::isfinite(o.cycle))
      throw std::invalid_argument("--cycle must be > 0");
    const auto room = load_room_arg(o.room);
    require_valid(validate(room));
    fs::path file = o.out ? *o.out : resolve_out_dir(std::nullopt, "out") / "dosemap.csv";
    if (file.has_parent_path()) fs::create_directories(file.parent_path());

    RunManifest m;
    m.command = "dosemap";
    m.config_paths = {o.room};
    m.out_dir = file.has_parent_path() ? file.parent_path() : fs::path(".");
    m.started_at = utc_now();
    const auto manifest = m.out_dir / (file.stem().string() + ".manifest.json");
    write_manifest(manifest, m);

    if (room.lamps.empty()) fmt::print(err, "warning: room has no lamps\n");
    const auto v = dose_verdict(room, o.target_dose, o.cycle);
    {
      std::ofstream f(file, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + file.string());
      write_dose_map_csv(f, v.report);
    }
    print_dose_summary(out, v);
    m.outputs = {file.filename().string()};
    m.status = "ok";
    write_manifest(manifest, m);
    return kExitOk;
  });
}

int cmd_paper_suite(const PaperSuiteOptions& o, std::ostream& out, std::ostream& err) {
  fs::path dir;
  RunManifest m;
  int rc = guarded(err, [&] {
    if (o.seeds == 0) throw std::invalid_argument("--seeds must be >= 1");
    dir = resolve_out_dir(o.out, fs::path("out") / "paper-suite");
    fs::create_directories(dir);
    m.command = "paper-suite";
    m.config_paths = {"builtin"};
    m.seed = 1;
    m.out_dir = dir;
    m.started_at = utc_now();
    write_manifest(dir / "manifest.json", m);
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  return guarded(err, [&] {
    std::vector<Scenario> runs;
    for (unsigned seed = 1; seed <= o.seeds; ++seed)
      for (auto& s : paper_scenarios(seed)) {
        if (o.reaction_deadline) s.policy.reaction_deadline = *o.reaction_deadline;
        require_valid(validate(s));
        runs.push_back(std::move(s));
      }

    std::vector<SimulationResult> results(runs.size());
    const unsigned jobs = std::max(1u, o.jobs);
    for (std::size_t first = 0; first < runs.size(); first += jobs) {
      std::vector<std::future<SimulationResult>> batch;
      for (std::size_t i = first; i < std::min(runs.size(), first + jobs); ++i)
        batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                   [&runs, i] { return simulate(runs[i]); }));
      for (std::size_t k = 0; k < batch.size(); ++k) results[first + k] = batch[k].get();
    }

    bool all_pass = true;
    nlohmann::json summary;
    summary["scenarios"] = nlohmann::json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& s = runs[i];
      const auto& r = results[i];
      const auto iv = lamp_on_intervals(r.timeline.commands, r.timeline.end_time);
      const bool pass = r.safety.pass();
      all_pass = all_pass && pass;
      const double ceiling = on_time(iv, s.room, LampTier::Ceiling);
      const double desk = on_time(iv, s.room, LampTier::Desk);
      fmt::print(out, "{} seed {}: {} ({} violations, ceiling on {:.1f} s, desk on {:.1f} s)\n",
                 s.name, s.seed, pass ? "pass" : "FAIL", r.safety.violations.size(), ceiling,
                 desk);
      if (s.seed == 1) {
        const auto files = write_run_artifacts(dir / s.name, r, s);
        for (const auto& f : files) m.outputs.push_back(s.name + "/" + f);
      }
      summary["scenarios"].push_back({{"scenario", s.name},
                                      {"seed", s.seed},
                                      {"verdict", pass ? "pass" : "fail"},
                                      {"violations", r.safety.violations.size()},
                                      {"ceiling_on_s", ceiling},
                                      {"desk_on_s", desk}});
    }

    const auto room = paper_default_room();
    const auto v = dose_verdict(room, kDefaultD90, 300.0);
    {
      std::ofstream f(dir / "dosemap.csv", std::ios::binary);
      if (!f) throw std::runtime_error("cannot write dosemap.csv");
      write_dose_map_csv(f, v.report);
    }
    m.outputs.push_back("dosemap.csv");
    print_dose_summary(out, v);
    const bool dose_pass = o.strict_dose ? v.literal_pass : v.envelope_pass;
    if (!o.strict_dose && !v.literal_pass && v.envelope_pass)
      fmt::print(out, "dose map: bound met within the efficiency envelope (efficiency <= 1)\n");

    summary["dose"] = {{"max_time_s", v.report.max_time},
                       {"min_time_s", v.report.min_time},
                       {"mean_time_s", v.report.mean_time},
                       {"covered_fraction", v.report.covered_fraction},
                       {"bound_met_at_configured_efficiency", v.literal_pass},
                       {"minimal_uniform_efficiency", v.minimal_efficiency},
                       {"strict", o.strict_dose},
                       {"verdict", dose_pass ? "pass" : "fail"}};
    summary["verdict"] = all_pass && dose_pass ? "pass" : "fail";
    {
      std::ofstream f(dir / "suite_summary.json", std::ios::binary);
      f << summary.dump(2) << '\n';
    }
    m.outputs.push_back("suite_summary.json");

    const int code = !all_pass ? kExitSafetyViolation : !dose_pass ? kExitDoseBoundMissed : kExitOk;
    m.status = code == kExitOk ? "pass" : code == kExitSafetyViolation ? "safety_violation"
                                                                       : "dose_bound_missed";
    write_manifest(dir / "manifest.json", m);
    fmt::print(out, "paper suite: {}\n", code == kExitOk ? "pass" : "FAIL");
    return code;
  });
}

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(o.tick > 0.0)) throw std::invalid_argument("--tick must be > 0");
    const auto room = load_room_arg(o.room);
    require_valid(validate(room));
    CyclePolicy policy = o.policy ? load_policy_file(*o.policy) : CyclePolicy{};
    FusionParams params =
        o.fusion ? fusion_from_json(parse_json_text(read_text_file(*o.fusion))) : FusionParams{};
    double zone = 0.0;
    const double epoch = parse_iso8601(o.start, &zone);
    policy.tz_offset = o.tz_offset ? *o.tz_offset : (o.policy ? policy.tz_offset : zone);
    require_valid(validate(policy));
    require_valid(validate(params));

    std::ifstream in(o.events, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + o.events.string());
    const auto log = read_event_log(in);
    for (const auto& w : log.warnings) fmt::print(err, "warning: line {}: {}\n", w.line, w.message);

    double until = o.until.value_or(0.0);
    if (!o.until) {
      for (const auto& e : log.events) until = std::max(until, e.timestamp);
      until += std::max(params.pir_hold, params.us_hold) + policy.vacancy_grace +
               std::max(policy.ceiling_cycle, policy.desk_cycle) + 1.0;
    }

    OccupancyFusion fusion(room, params);
    Controller controller(room, policy, epoch);
    auto state = controller.initial_state();
    std::vector<LampCommand> commands;
    std::size_t next = 0;
    const auto ticks = static_cast<std::size_t>(std::floor(until / o.tick + 1e-9));
    for (std::size_t i = 0; i <= ticks; ++i) {
      const double t = static_cast<double>(i) * o.tick;
      while (next < log.events.size() && log.events[next].timestamp <= t + 1e-6)
        fusion.ingest(log.events[next++]);
      auto step = controller.step(state, fusion.snapshot(t), t);
      state = std::move(step.state);
      commands.insert(commands.end(), step.commands.begin(), step.commands.end());
    }

    if (o.out) {
      if (o.out->has_parent_path()) fs::create_directories(o.out->parent_path());
      std::ofstream f(*o.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + o.out->string());
      write_command_log(f, commands);
    } else {
      write_command_log(out, commands);
    }
    for (const auto& a : fusion.anomalies())
      fmt::print(err, "anomaly: t={:.3f} {} {}\n", a.timestamp, a.source, a.description);
    return kExitOk;
  });
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!o.room && !o.scenario && !o.policy)
      throw std::invalid_argument("nothing to validate; pass --room, --scenario or --policy");
    if (o.room) {
      require_valid(validate(load_room_arg(*o.room)));
      fmt::print(out, "room {}: ok\n", *o.room);
    }
    if (o.scenario) {
      require_valid(validate(load_scenario_arg(*o.scenario)));
      fmt::print(out, "scenario {}: ok\n", *o.scenario);
    }
    if (o.policy) {
      require_valid(validate(load_policy_file(*o.policy)));
      fmt::print(out, "policy {}: ok\n", o.policy->string());
    }
    return kExitOk;
  });
}

int cmd_export_room(const fs::path& file, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + file.string());
    f << save_room(paper_default_room()) << '\n';
    fmt::print(out, "wrote {}\n", file.string());
    return kExitOk;
  });
}

int cmd_export_scenario(const std::string& name, const fs::path& file, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    const auto s = load_scenario_arg(name.rfind("builtin:", 0) == 0 ? name : "builtin:" + name);
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + file.string());
    f << scenario_to_json(s).dump(2) << '\n';
    fmt::print(out, "wrote {}\n", file.string());
    return kExitOk;
  });
}

}  // namespace uvc::cli

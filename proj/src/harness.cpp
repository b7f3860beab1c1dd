/*
 Copyright 2026 The isingmppi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "isingmppi/harness.hpp"

#include "isingmppi/io.hpp"
#include "isingmppi/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace imppi {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) bad_value(key, text);
  return v;
}

std::vector<std::size_t> parse_counts(std::string_view key, std::string_view text) {
  std::vector<std::size_t> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<std::size_t>(key, part));
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  bad_value(key, text);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

// Runs task(i) for i in [0, n) on `jobs` threads. Results must be written to
// per-index slots so the outcome does not depend on scheduling.
template <class Task>
void parallel_for(std::size_t n, std::size_t jobs, Task&& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t controller_tag(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kIsing: return 1;
    case ControllerKind::kLinear: return 2;
    case ControllerKind::kReference: return 3;
  }
  return 0;
}

std::vector<ControllerKind> table_controllers(const ExperimentConfig& cfg) {
  if (!cfg.controllers.empty()) return cfg.controllers;
  return {ControllerKind::kIsing, ControllerKind::kLinear, ControllerKind::kReference};
}

std::vector<ControllerKind> sweep_controllers(const ExperimentConfig& cfg) {
  if (cfg.controllers.empty()) return {ControllerKind::kIsing, ControllerKind::kLinear};
  for (auto k : cfg.controllers) {
    if (k == ControllerKind::kReference) {
      throw std::invalid_argument("run-sweep supports the ising and linear controllers only");
    }
  }
  return cfg.controllers;
}

std::size_t single_override(const std::vector<std::size_t>& values, std::size_t fallback,
                            const char* what) {
  if (values.empty()) return fallback;
  if (values.size() > 1) {
    throw std::invalid_argument(std::string("a single value is required for ") + what);
  }
  return values.front();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << text;
  if (!os) throw IoError("write failed: " + path.string());
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

}  // namespace

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kIsing: return "ising";
    case ControllerKind::kLinear: return "linear";
    case ControllerKind::kReference: return "reference";
  }
  return "unknown";
}

ControllerKind parse_controller_kind(std::string_view text) {
  text = trim(text);
  if (text == "ising") return ControllerKind::kIsing;
  if (text == "linear") return ControllerKind::kLinear;
  if (text == "reference") return ControllerKind::kReference;
  throw std::invalid_argument("unknown controller '" + std::string(text) +
                              "' (expected ising, linear or reference)");
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "controller") {
    controllers.clear();
    if (value == "all" || value == "default") return;
    for (auto part : split(value, ',')) controllers.push_back(parse_controller_kind(part));
  } else if (key == "n-traj") {
    n_traj = parse_number<std::size_t>(key, value);
  } else if (key == "n-seeds") {
    n_seeds = parse_number<std::size_t>(key, value);
  } else if (key == "sweeps") {
    sweeps = parse_counts(key, value);
  } else if (key == "iters") {
    iters = parse_counts(key, value);
  } else if (key == "lambda") {
    lambda = parse_number<double>(key, value);
  } else if (key == "horizon") {
    horizon = parse_number<std::size_t>(key, value);
  } else if (key == "dt") {
    dt = parse_number<double>(key, value);
  } else if (key == "bits") {
    bits = parse_number<int>(key, value);
  } else if (key == "k-speed") {
    k_speed = parse_number<double>(key, value);
  } else if (key == "k-steer") {
    k_steer = parse_number<double>(key, value);
  } else if (key == "sigma") {
    const auto parts = split(value, ',');
    if (parts.size() == 1) {
      sigma.fill(parse_number<double>(key, parts[0]));
    } else if (parts.size() == kControlDim) {
      for (std::size_t i = 0; i < parts.size(); ++i) sigma[i] = parse_number<double>(key, parts[i]);
    } else {
      bad_value(key, value);
    }
  } else if (key == "ds") {
    ds = parse_number<double>(key, value);
  } else if (key == "v0") {
    if (value == "auto") {
      v0.reset();
    } else {
      v0 = parse_number<double>(key, value);
    }
  } else if (key == "init") {
    if (value == "zeros") {
      init = InitMode::kZeros;
    } else if (value == "random") {
      init = InitMode::kRandom;
    } else {
      bad_value(key, value);
    }
  } else if (key == "seed0") {
    seed0 = parse_number<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    jobs = parse_number<std::size_t>(key, value);
  } else if (key == "timing") {
    timing = parse_bool(key, value);
  } else if (key == "out") {
    if (value.empty()) bad_value(key, value);
    out = std::filesystem::path(std::string(value));
  } else if (key == "traj-seed") {
    traj_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "sample-seed") {
    sample_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "step") {
    step = parse_number<std::size_t>(key, value);
  } else {
    throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
  }
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file: " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    set(view.substr(0, eq), view.substr(eq + 1));
  }
}

void ExperimentConfig::validate() const {
  if (n_traj < 1 || n_seeds < 1) throw std::invalid_argument("n-traj and n-seeds must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (!(ds > 0.0)) throw std::invalid_argument("ds must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (v0 && !std::isfinite(*v0)) throw std::invalid_argument("v0 must be finite");
  for (auto s : sweeps) if (s < 1) throw std::invalid_argument("sweeps must be >= 1");
  for (auto m : iters) if (m < 1) throw std::invalid_argument("iters must be >= 1");
}

double ExperimentConfig::initial_speed() const { return v0 ? *v0 : ds / dt; }

ReferenceTrajectory ExperimentConfig::scenario(std::uint64_t seed) const {
  return make_scenario(seed, ds, initial_speed());
}

std::size_t ExperimentConfig::default_sweeps(ControllerKind kind) const {
  return kind == ControllerKind::kIsing ? 200 : 1000;
}

std::size_t ExperimentConfig::default_iters(ControllerKind) const { return 4; }

ControllerConfig ExperimentConfig::controller_config(ControllerKind kind) const {
  return controller_config(kind, single_override(sweeps, default_sweeps(kind), "sweeps"),
                           single_override(iters, default_iters(kind), "iters"));
}

ControllerConfig ExperimentConfig::controller_config(ControllerKind kind, std::size_t sweeps_value,
                                                     std::size_t iters_value) const {
  switch (kind) {
    case ControllerKind::kIsing: {
      IsingMppiConfig c;
      c.horizon = horizon;
      c.iterations = iters_value;
      c.sweeps = sweeps_value;
      c.lambda = lambda;
      c.bits = bits;
      c.magnitudes = {k_speed, k_steer};
      c.dt = dt;
      c.init = init;
      c.validate();
      return c;
    }
    case ControllerKind::kLinear: {
      LinearMppiConfig c;
      c.horizon = horizon;
      c.iterations = iters_value;
      c.samples = sweeps_value;
      c.lambda = lambda;
      c.noise_sigma = sigma;
      c.dt = dt;
      c.validate();
      return c;
    }
    case ControllerKind::kReference: {
      ReferenceMppiConfig c;
      c.horizon = horizon;
      c.iterations = iters_value;
      c.samples = sweeps_value;
      c.lambda = lambda;
      c.noise_sigma = sigma;
      c.dt = dt;
      c.validate();
      return c;
    }
  }
  throw std::invalid_argument("unknown controller kind");
}

std::string ExperimentConfig::echo() const {
  std::vector<std::string> names;
  for (auto k : controllers) names.emplace_back(to_string(k));
  std::string ctrl;
  for (std::size_t i = 0; i < names.size(); ++i) ctrl += (i ? "," : "") + names[i];
  std::ostringstream os;
  os << "controller = " << (ctrl.empty() ? "default" : ctrl) << '\n'
     << "n-traj = " << n_traj << '\n'
     << "n-seeds = " << n_seeds << '\n'
     << "sweeps = " << (sweeps.empty() ? "default" : join(sweeps)) << '\n'
     << "iters = " << (iters.empty() ? "default" : join(iters)) << '\n'
     << "lambda = " << format_double(lambda) << '\n'
     << "horizon = " << horizon << '\n'
     << "dt = " << format_double(dt) << '\n'
     << "bits = " << bits << '\n'
     << "k-speed = " << format_double(k_speed) << '\n'
     << "k-steer = " << format_double(k_steer) << '\n'
     << "sigma = " << format_double(sigma[0]) << ',' << format_double(sigma[1]) << '\n'
     << "ds = " << format_double(ds) << '\n'
     << "v0 = " << (v0 ? format_double(*v0) : std::string("auto")) << '\n'
     << "init = " << (init == InitMode::kZeros ? "zeros" : "random") << '\n'
     << "seed0 = " << seed0 << '\n'
     << "timing = " << (timing ? "true" : "false") << '\n'
     << "traj-seed = " << traj_seed << '\n'
     << "sample-seed = " << sample_seed << '\n'
     << "step = " << step << '\n';
  return os.str();
}

std::string ExperimentConfig::get(std::string_view key) const {
  key = trim(key);
  if (key == "out") return out.string();
  std::istringstream lines(echo());
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    if (line.compare(0, eq, key) == 0 && eq == key.size()) return line.substr(eq + 3);
  }
  if (key == "jobs") return std::to_string(jobs);
  throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
}

std::uint64_t trial_seed(std::uint64_t traj_seed, std::uint64_t sample_seed, ControllerKind kind) {
  return combine_seeds({traj_seed, sample_seed, controller_tag(kind)});
}

AggregateRow aggregate(std::string controller, std::size_t iterations, std::size_t samples,
                       const std::vector<TrialResult>& trials, bool timing) {
  AggregateRow row;
  row.controller = std::move(controller);
  row.iterations = iterations;
  row.samples = samples;
  double sum = 0.0;
  double wall = 0.0;
  std::size_t steps = 0;
  for (const auto& t : trials) {
    if (t.diverged) {
      ++row.n_diverged;
      continue;
    }
    ++row.n_ok;
    sum += t.mse;
    for (const auto& s : t.per_step) wall += s.wall_time;
    steps += t.per_step.size();
  }
  if (row.n_ok == 0) {
    row.mean_mse = std::numeric_limits<double>::quiet_NaN();
    row.std_mse = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  row.mean_mse = sum / static_cast<double>(row.n_ok);
  double var = 0.0;
  for (const auto& t : trials) {
    if (!t.diverged) var += (t.mse - row.mean_mse) * (t.mse - row.mean_mse);
  }
  row.std_mse = std::sqrt(var / static_cast<double>(row.n_ok));
  if (timing && steps > 0) row.mean_wall_time = wall / static_cast<double>(steps);
  return row;
}

std::string trial_json(const ExperimentConfig& cfg, ControllerKind kind, std::uint64_t traj_seed,
                       std::uint64_t sample_seed, const TrialResult& trial) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["controller"] = to_string(kind);
  ordered_json config = ordered_json::object();
  std::istringstream echo(cfg.echo());
  for (std::string line; std::getline(echo, line);) {
    const auto eq = line.find(" = ");
    config[line.substr(0, eq)] = line.substr(eq + 3);
  }
  std::visit(
      [&](const auto& c) {
        config["resolved-iters"] = c.iterations;
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, IsingMppiConfig>) {
          config["resolved-sweeps"] = c.sweeps;
        } else {
          config["resolved-sweeps"] = c.samples;
        }
      },
      cfg.controller_config(kind));
  doc["config"] = std::move(config);
  doc["traj_seed"] = traj_seed;
  doc["sample_seed"] = sample_seed;
  doc["trial_seed"] = trial_seed(traj_seed, sample_seed, kind);
  doc["metric"] = "mean squared (px, py) error against the reference, heading excluded";
  doc["steps"] = trial.per_step.size();
  doc["diverged"] = trial.diverged;
  if (trial.diverged) {
    doc["mse"] = nullptr;
    doc["failure"] = trial.failure;
  } else {
    doc["mse"] = trial.mse;
  }
  ordered_json u0 = ordered_json::array();
  for (const auto& s : trial.per_step) u0.push_back({s.u0.accel, s.u0.steer_rate});
  doc["u0"] = std::move(u0);
  ordered_json realized = ordered_json::array();
  for (const auto& x : trial.realized) realized.push_back({x.px, x.py});
  doc["realized"] = std::move(realized);
  ordered_json reference = ordered_json::array();
  for (const auto& x : trial.reference) reference.push_back({x.px, x.py});
  doc["reference"] = std::move(reference);
  if (cfg.timing) {
    ordered_json wall = ordered_json::array();
    for (const auto& s : trial.per_step) wall.push_back(s.wall_time);
    doc["wall_time"] = std::move(wall);
  }
  return doc.dump(1) + "\n";
}

void write_table_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "controller,M,S,mean_mse,std_mse,n_ok,n_diverged,mean_wall_time\n";
  for (const auto& r : rows) {
    os << r.controller << ',' << r.iterations << ',' << r.samples << ',' << csv_number(r.mean_mse)
       << ',' << csv_number(r.std_mse) << ',' << r.n_ok << ',' << r.n_diverged << ','
       << csv_number(r.mean_wall_time) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "controller,M,S,mean_mse,std_mse\n";
  for (const auto& r : rows) {
    os << r.controller << ',' << r.iterations << ',' << r.samples << ',' << csv_number(r.mean_mse)
       << ',' << csv_number(r.std_mse) << '\n';
  }
}

std::vector<AggregateRow> run_table(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto kinds = table_controllers(cfg);

  std::vector<ReferenceTrajectory> scenarios(cfg.n_traj);
  parallel_for(cfg.n_traj, cfg.jobs, [&](std::size_t i) { scenarios[i] = cfg.scenario(cfg.seed0 + i); });

  const std::size_t per_controller = cfg.n_traj * cfg.n_seeds;
  std::vector<ControllerConfig> configs;
  for (auto k : kinds) configs.push_back(cfg.controller_config(k));
  std::vector<TrialResult> trials(kinds.size() * per_controller);

  parallel_for(trials.size(), cfg.jobs, [&](std::size_t idx) {
    const std::size_t c = idx / per_controller;
    const std::size_t rest = idx % per_controller;
    const std::size_t traj = rest / cfg.n_seeds;
    const std::size_t sample = rest % cfg.n_seeds;
    const std::uint64_t traj_seed = cfg.seed0 + traj;
    trials[idx] = run_closed_loop(scenarios[traj], configs[c], trial_seed(traj_seed, sample, kinds[c]));
    const std::string name = std::string(to_string(kinds[c])) + "_t" + std::to_string(traj_seed) +
                             "_s" + std::to_string(sample) + ".json";
    write_text_file(cfg.out / "trials" / name, trial_json(cfg, kinds[c], traj_seed, sample, trials[idx]));
  });

  std::vector<AggregateRow> rows;
  for (std::size_t c = 0; c < kinds.size(); ++c) {
    std::vector<TrialResult> subset(std::make_move_iterator(trials.begin() + c * per_controller),
                                    std::make_move_iterator(trials.begin() + (c + 1) * per_controller));
    const auto [m, s] = std::visit(
        [](const auto& cc) -> std::pair<std::size_t, std::size_t> {
          if constexpr (std::is_same_v<std::decay_t<decltype(cc)>, IsingMppiConfig>) {
            return {cc.iterations, cc.sweeps};
          } else {
            return {cc.iterations, cc.samples};
          }
        },
        configs[c]);
    rows.push_back(aggregate(std::string(to_string(kinds[c])), m, s, subset, cfg.timing));
  }
  std::ostringstream csv;
  write_table_csv(csv, rows);
  write_text_file(cfg.out / "table.csv", csv.str());
  return rows;
}

std::vector<AggregateRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto kinds = sweep_controllers(cfg);
  const std::vector<std::size_t> s_grid = cfg.sweeps.empty() ? std::vector<std::size_t>{10, 100, 1000} : cfg.sweeps;
  const std::vector<std::size_t> m_grid = cfg.iters.empty() ? std::vector<std::size_t>{1, 2, 3, 4} : cfg.iters;
  const ReferenceTrajectory scenario = cfg.scenario(cfg.seed0);

  struct Cell {
    ControllerKind kind;
    std::size_t m, s;
  };
  std::vector<Cell> cells;
  for (auto k : kinds) {
    for (auto m : m_grid) {
      for (auto s : s_grid) cells.push_back({k, m, s});
    }
  }
  std::vector<TrialResult> trials(cells.size() * cfg.n_seeds);
  parallel_for(trials.size(), cfg.jobs, [&](std::size_t idx) {
    const Cell& cell = cells[idx / cfg.n_seeds];
    const std::size_t sample = idx % cfg.n_seeds;
    const ControllerConfig cc = cfg.controller_config(cell.kind, cell.s, cell.m);
    trials[idx] = run_closed_loop(scenario, cc, trial_seed(cfg.seed0, sample, cell.kind));
  });

  std::vector<AggregateRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<TrialResult> subset(std::make_move_iterator(trials.begin() + c * cfg.n_seeds),
                                    std::make_move_iterator(trials.begin() + (c + 1) * cfg.n_seeds));
    rows.push_back(aggregate(std::string(to_string(cells[c].kind)), cells[c].m, cells[c].s, subset, cfg.timing));
  }
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_text_file(cfg.out / "sweep.csv", csv.str());
  return rows;
}

std::vector<std::filesystem::path> gen_trajectories(std::size_t n, std::uint64_t seed0, double ds,
                                                    const std::filesystem::path& out) {
  if (n < 1) throw std::invalid_argument("need at least one trajectory");
  std::vector<std::filesystem::path> paths;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = seed0 + i;
    const auto path = out / ("traj_" + std::to_string(seed) + ".csv");
    write_trajectory_file(path, make_scenario(seed, ds));
    paths.push_back(path);
  }
  return paths;
}

TrialResult run_trial(const ExperimentConfig& cfg) {
  cfg.validate();
  const ControllerKind kind = cfg.controllers.empty() ? ControllerKind::kIsing : cfg.controllers.front();
  const ReferenceTrajectory scenario = cfg.scenario(cfg.traj_seed);
  return run_closed_loop(scenario, cfg.controller_config(kind),
                         trial_seed(cfg.traj_seed, cfg.sample_seed, kind));
}

QuboProblem dump_qubo(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto ising = std::get<IsingMppiConfig>(cfg.controller_config(ControllerKind::kIsing));
  const ReferenceTrajectory scenario = cfg.scenario(cfg.traj_seed);
  if (cfg.step + ising.horizon >= scenario.states.size()) {
    throw std::invalid_argument("step " + std::to_string(cfg.step) + " is beyond the last solvable step");
  }
  const std::uint64_t seed = trial_seed(cfg.traj_seed, cfg.sample_seed, ControllerKind::kIsing);
  State x = scenario.initial_state;
  for (std::size_t k = 0; k < cfg.step; ++k) {
    const std::span<const State> window(scenario.states.data() + k + 1, ising.horizon);
    const ControlStepResult res = ising_mppi_step(x, window, ising, combine_seeds({seed, k}));
    x = step_nonlinear(x, res.u0, ising.dt, ising.model);
  }
  const std::span<const State> window(scenario.states.data() + cfg.step + 1, ising.horizon);
  const std::vector<Control> zero(ising.horizon);
  return build_step_qubo(x, window, ising, zero);
}

}  // namespace imppi

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

// Experiment runner. Talks to the library only through the C API.

#include "isingmppi/isingmppi.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
  void operator()(imppi_config* c) const { imppi_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<imppi_config, ConfigDeleter>;

// Flag name -> help text. The flag name doubles as the config key.
const std::vector<std::pair<std::string, std::string>> kSettings = {
    {"controller", "ising, linear, reference, a comma list, or all"},
    {"n-traj", "number of generated trajectories"},
    {"n-seeds", "sampling seeds per trajectory"},
    {"sweeps", "samples S (Gibbs sweeps or rollouts); comma list for run-sweep"},
    {"iters", "outer iterations M; comma list for run-sweep"},
    {"lambda", "temperature"},
    {"horizon", "horizon length N"},
    {"dt", "time step"},
    {"bits", "bits per control input L"},
    {"k-speed", "magnitude K of the acceleration encoding"},
    {"k-steer", "magnitude K of the steering-rate encoding"},
    {"sigma", "Gaussian noise std dev per input, 'a,b' or one value"},
    {"ds", "reference spacing along the path"},
    {"v0", "initial forward speed, or auto for ds/dt"},
    {"init", "Gibbs start for the ising controller: zeros or random"},
    {"out", "output directory"},
    {"seed0", "first trajectory seed"},
    {"jobs", "worker threads"},
    {"timing", "record wall times (outputs are then not reproducible)"},
    {"traj-seed", "trajectory seed for run-trial / dump-qubo"},
    {"sample-seed", "sampling seed for run-trial / dump-qubo"},
    {"step", "control step whose QUBO dump-qubo writes"},
};

struct Command {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> values;
};

void add_settings(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_file, "flat key = value settings file");
  for (const auto& [name, help] : kSettings) {
    cmd.app->add_option_function<std::string>(
        "--" + name, [&cmd, key = name](const std::string& v) { cmd.values[key] = v; }, help);
  }
}

int report(imppi_status st, const char* what) {
  if (st == IMPPI_OK) return 0;
  std::fprintf(stderr, "imppi: %s failed: %s: %s\n", what, imppi_status_string(st), imppi_last_error());
  return st == IMPPI_ERR_INVALID_ARGUMENT ? 2 : 1;
}

ConfigPtr make_config(const Command& cmd, int& rc) {
  imppi_config* raw = nullptr;
  rc = report(imppi_config_create(&raw), "config");
  ConfigPtr cfg(raw);
  if (rc) return cfg;
  if (!cmd.config_file.empty()) {
    rc = report(imppi_config_load_file(cfg.get(), cmd.config_file.c_str()), "--config");
    if (rc) return cfg;
  }
  for (const auto& [key, value] : cmd.values) {
    rc = report(imppi_config_set(cfg.get(), key.c_str(), value.c_str()), ("--" + key).c_str());
    if (rc) return cfg;
  }
  return cfg;
}

std::string echo(const imppi_config* cfg) {
  std::size_t needed = 0;
  imppi_config_echo(cfg, nullptr, 0, &needed);
  std::string text(needed, '\0');
  if (imppi_config_echo(cfg, text.data(), text.size(), nullptr) != IMPPI_OK) return {};
  text.resize(needed - 1);
  return text;
}

std::string get_setting(const imppi_config* cfg, const char* key) {
  std::size_t needed = 0;
  imppi_config_get(cfg, key, nullptr, 0, &needed);
  if (needed == 0) return {};
  std::string text(needed, '\0');
  if (imppi_config_get(cfg, key, text.data(), text.size(), nullptr) != IMPPI_OK) return {};
  text.resize(needed - 1);
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising-machine MPPI experiments on a kinematic bicycle"};
  app.require_subcommand(1);

  Command gen{app.add_subcommand("gen-trajectories", "write reference trajectory CSVs")};
  Command table{app.add_subcommand("run-table", "tracking error per controller over many trials")};
  Command sweep{app.add_subcommand("run-sweep", "MSE over a grid of iterations M and samples S")};
  Command trial{app.add_subcommand("run-trial", "one closed-loop trial with diagnostics")};
  Command dump{app.add_subcommand("dump-qubo", "write the QUBO instance of one control step")};
  for (Command* c : {&gen, &table, &sweep, &trial, &dump}) add_settings(*c);

  CLI11_PARSE(app, argc, argv);

  Command* active = nullptr;
  for (Command* c : {&gen, &table, &sweep, &trial, &dump}) {
    if (c->app->parsed()) active = c;
  }
  int rc = 0;
  ConfigPtr cfg = make_config(*active, rc);
  if (rc) return rc;

  // --out names a directory for every subcommand.
  const std::string out = get_setting(cfg.get(), "out");

  if (active == &gen) {
    rc = report(imppi_gen_trajectories(cfg.get(), out.c_str()), "gen-trajectories");
    if (!rc) std::printf("wrote trajectories to %s\n", out.c_str());
  } else if (active == &table) {
    rc = report(imppi_run_table(cfg.get()), "run-table");
    if (!rc) std::printf("wrote %s\n", (std::filesystem::path(out) / "table.csv").c_str());
  } else if (active == &sweep) {
    rc = report(imppi_run_sweep(cfg.get()), "run-sweep");
    if (!rc) std::printf("wrote %s\n", (std::filesystem::path(out) / "sweep.csv").c_str());
  } else if (active == &trial) {
    const std::string path = (std::filesystem::path(out) / "trial.json").string();
    double mse = 0.0;
    std::size_t steps = 0;
    const imppi_status st = imppi_run_trial(cfg.get(), path.c_str(), &mse, &steps);
    std::printf("%s", echo(cfg.get()).c_str());
    std::printf("steps = %zu\n", steps);
    if (st == IMPPI_OK) {
      std::printf("mse = %.6g\n", mse);
    } else if (st == IMPPI_ERR_DIVERGED) {
      std::printf("mse = inf (diverged: %s)\n", imppi_last_error());
    } else {
      return report(st, "run-trial");
    }
    std::printf("trial json = %s\n", path.c_str());
  } else if (active == &dump) {
    const std::string path = (std::filesystem::path(out) / "qubo.txt").string();
    rc = report(imppi_dump_qubo(cfg.get(), path.c_str()), "dump-qubo");
    if (!rc) std::printf("wrote %s\n", path.c_str());
  }
  return rc;
}

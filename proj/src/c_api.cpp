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

#include "isingmppi/isingmppi.h"

#include "isingmppi/harness.hpp"
#include "isingmppi/io.hpp"
#include "isingmppi/sampler.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

struct imppi_config {
  imppi::ExperimentConfig cfg;
};

struct imppi_qubo {
  imppi::QuboProblem q;
};

namespace {

thread_local std::string g_last_error;

imppi_status fail(imppi_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Maps the core's exception types onto status codes.
template <class Fn>
imppi_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const imppi::IoError& e) {
    return fail(IMPPI_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(IMPPI_ERR_IO, e.what());
  } catch (const imppi::DivergenceError& e) {
    return fail(IMPPI_ERR_DIVERGED, e.what());
  } catch (const std::domain_error& e) {
    return fail(IMPPI_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(IMPPI_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(IMPPI_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(IMPPI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(IMPPI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(IMPPI_ERR_INTERNAL, "unknown error");
  }
}

imppi_status copy_out(const std::string& text, char* buf, size_t len, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || len < text.size() + 1) return fail(IMPPI_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return IMPPI_OK;
}

#define IMPPI_REQUIRE(cond)                                                  \
  do {                                                                       \
    if (!(cond)) return fail(IMPPI_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* imppi_version(void) { return "1.0.0"; }

const char* imppi_status_string(imppi_status status) {
  switch (status) {
    case IMPPI_OK: return "ok";
    case IMPPI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case IMPPI_ERR_DOMAIN: return "domain error";
    case IMPPI_ERR_IO: return "i/o error";
    case IMPPI_ERR_DIVERGED: return "diverged";
    case IMPPI_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case IMPPI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* imppi_last_error(void) { return g_last_error.c_str(); }

imppi_status imppi_config_create(imppi_config** out) {
  IMPPI_REQUIRE(out);
  return guarded([&] {
    *out = new imppi_config{};
    return IMPPI_OK;
  });
}

void imppi_config_destroy(imppi_config* cfg) { delete cfg; }

imppi_status imppi_config_set(imppi_config* cfg, const char* key, const char* value) {
  IMPPI_REQUIRE(cfg && key && value);
  return guarded([&] {
    cfg->cfg.set(key, value);
    return IMPPI_OK;
  });
}

imppi_status imppi_config_load_file(imppi_config* cfg, const char* path) {
  IMPPI_REQUIRE(cfg && path);
  return guarded([&] {
    cfg->cfg.load_file(path);
    return IMPPI_OK;
  });
}

imppi_status imppi_config_echo(const imppi_config* cfg, char* buf, size_t len, size_t* needed) {
  IMPPI_REQUIRE(cfg);
  return guarded([&] { return copy_out(cfg->cfg.echo(), buf, len, needed); });
}

imppi_status imppi_config_get(const imppi_config* cfg, const char* key, char* buf, size_t len,
                              size_t* needed) {
  IMPPI_REQUIRE(cfg && key);
  return guarded([&] { return copy_out(cfg->cfg.get(key), buf, len, needed); });
}

imppi_status imppi_gen_trajectories(const imppi_config* cfg, const char* out_dir) {
  IMPPI_REQUIRE(cfg && out_dir);
  return guarded([&] {
    cfg->cfg.validate();
    imppi::gen_trajectories(cfg->cfg.n_traj, cfg->cfg.seed0, cfg->cfg.ds, out_dir);
    return IMPPI_OK;
  });
}

imppi_status imppi_run_table(const imppi_config* cfg) {
  IMPPI_REQUIRE(cfg);
  return guarded([&] {
    imppi::run_table(cfg->cfg);
    return IMPPI_OK;
  });
}

imppi_status imppi_run_sweep(const imppi_config* cfg) {
  IMPPI_REQUIRE(cfg);
  return guarded([&] {
    imppi::run_sweep(cfg->cfg);
    return IMPPI_OK;
  });
}

imppi_status imppi_run_trial(const imppi_config* cfg, const char* json_path, double* mse,
                             size_t* steps) {
  IMPPI_REQUIRE(cfg);
  return guarded([&] {
    const auto& c = cfg->cfg;
    const imppi::TrialResult trial = imppi::run_trial(c);
    if (json_path) {
      const auto kind = c.controllers.empty() ? imppi::ControllerKind::kIsing : c.controllers.front();
      const std::filesystem::path path(json_path);
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::ofstream os(path, std::ios::binary);
      if (!os) throw imppi::IoError("cannot open for writing: " + path.string());
      os << imppi::trial_json(c, kind, c.traj_seed, c.sample_seed, trial);
      if (!os) throw imppi::IoError("write failed: " + path.string());
    }
    if (mse) *mse = trial.mse;
    if (steps) *steps = trial.per_step.size();
    if (trial.diverged) return fail(IMPPI_ERR_DIVERGED, trial.failure.c_str());
    return IMPPI_OK;
  });
}

imppi_status imppi_dump_qubo(const imppi_config* cfg, const char* path) {
  IMPPI_REQUIRE(cfg && path);
  return guarded([&] {
    imppi::write_qubo_file(path, imppi::dump_qubo(cfg->cfg));
    return IMPPI_OK;
  });
}

imppi_status imppi_qubo_create(size_t d, const double* J, const double* h, imppi_qubo** out) {
  IMPPI_REQUIRE(J && h && out);
  return guarded([&] {
    if (d == 0) throw std::invalid_argument("QUBO dimension must be positive");
    auto handle = std::make_unique<imppi_qubo>();
    const auto n = static_cast<Eigen::Index>(d);
    handle->q.J = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(J, n, n);
    handle->q.h = Eigen::Map<const Eigen::VectorXd>(h, n);
    if (!handle->q.J.allFinite() || !handle->q.h.allFinite()) {
      throw std::domain_error("QUBO coefficients must be finite");
    }
    *out = handle.release();
    return IMPPI_OK;
  });
}

imppi_status imppi_qubo_read(const char* path, imppi_qubo** out) {
  IMPPI_REQUIRE(path && out);
  return guarded([&] {
    auto handle = std::make_unique<imppi_qubo>();
    handle->q = imppi::read_qubo_file(path);
    *out = handle.release();
    return IMPPI_OK;
  });
}

imppi_status imppi_qubo_write(const imppi_qubo* q, const char* path) {
  IMPPI_REQUIRE(q && path);
  return guarded([&] {
    imppi::write_qubo_file(path, q->q);
    return IMPPI_OK;
  });
}

void imppi_qubo_destroy(imppi_qubo* q) { delete q; }

size_t imppi_qubo_dim(const imppi_qubo* q) { return q ? q->q.dim() : 0; }

imppi_status imppi_qubo_symmetrize(imppi_qubo* q) {
  IMPPI_REQUIRE(q);
  return guarded([&] {
    q->q = imppi::symmetrize(std::move(q->q));
    return IMPPI_OK;
  });
}

imppi_status imppi_qubo_energy(const imppi_qubo* q, const uint8_t* bits, double* out) {
  IMPPI_REQUIRE(q && bits && out);
  return guarded([&] {
    *out = imppi::energy(q->q, std::span<const std::uint8_t>(bits, q->q.dim()));
    return IMPPI_OK;
  });
}

imppi_status imppi_gibbs_sample(const imppi_qubo* q, size_t sweeps, double lambda, uint64_t seed,
                                imppi_init_mode init, size_t burn_in, double* bit_means,
                                uint8_t* rounded) {
  IMPPI_REQUIRE(q);
  return guarded([&] {
    imppi::GibbsConfig gc;
    gc.sweeps = sweeps;
    gc.lambda = lambda;
    gc.seed = seed;
    gc.init = init == IMPPI_INIT_ZEROS ? imppi::InitMode::kZeros : imppi::InitMode::kRandom;
    gc.burn_in = burn_in;
    gc.record_energy = false;
    const imppi::SampleResult res = imppi::gibbs_sample(q->q, gc);
    for (std::size_t i = 0; i < q->q.dim(); ++i) {
      if (bit_means) bit_means[i] = res.bit_means(static_cast<Eigen::Index>(i));
      if (rounded) rounded[i] = res.rounded[i];
    }
    return IMPPI_OK;
  });
}

imppi_status imppi_qubo_brute_force_min(const imppi_qubo* q, uint8_t* argmin, double* energy) {
  IMPPI_REQUIRE(q);
  return guarded([&] {
    const imppi::MinimumResult res = imppi::brute_force_min(q->q);
    if (argmin) std::memcpy(argmin, res.argmin.data(), res.argmin.size());
    if (energy) *energy = res.energy;
    return IMPPI_OK;
  });
}

}  // extern "C"

// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/acs.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <stdexcept>
#include <sstream>
#include <string>

#include "acs/errors.hpp"
#include "acs/gmm/target.hpp"
#include "acs/io/config.hpp"
#include "acs/io/csv.hpp"
#include "acs/io/runner.hpp"

struct acs_config {
  acs::io::RunConfig value;
};

struct acs_dataset {
  acs::io::LoadedDataset value;
};

struct acs_target {
  acs::gmm::GmmTarget value;
};

namespace {

thread_local std::string g_last_error;

acs_status fail(acs_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
acs_status checked(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return ACS_OK;
  } catch (const acs::ConfigError& e) {
    return fail(ACS_ERR_CONFIG, e.what());
  } catch (const acs::ContractError& e) {
    return fail(ACS_ERR_CONTRACT, e.what());
  } catch (const acs::RuntimeError& e) {
    return fail(ACS_ERR_RUNTIME, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(ACS_ERR_RUNTIME, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ACS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ACS_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(ACS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ACS_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

acs::io::RunOptions options(size_t workers, acs_log_fn log, void* user) {
  require(workers > 0, "workers must be at least 1");
  acs::io::RunOptions o;
  o.workers = workers;
  if (log != nullptr) o.log = [log, user](const std::string& msg) { log(msg.c_str(), user); };
  return o;
}

}  // namespace

#define ACS_REQUIRE(cond, msg) \
  if (!(cond)) return fail(ACS_ERR_INVALID_ARGUMENT, msg)

extern "C" {

const char* acs_version(void) { return acs::io::tool_version(); }

const char* acs_last_error(void) { return g_last_error.c_str(); }

const char* acs_status_name(acs_status status) {
  switch (status) {
    case ACS_OK: return "ok";
    case ACS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ACS_ERR_CONFIG: return "configuration error";
    case ACS_ERR_RUNTIME: return "runtime error";
    case ACS_ERR_CONTRACT: return "contract violation";
    case ACS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void acs_string_free(char* text) { std::free(text); }

acs_status acs_config_default(acs_config** out) {
  ACS_REQUIRE(out != nullptr, "out must not be null");
  return checked([&] { *out = new acs_config{acs::io::default_config()}; });
}

acs_status acs_config_parse(const char* yaml, acs_config** out) {
  ACS_REQUIRE(yaml != nullptr && out != nullptr, "yaml and out must not be null");
  return checked([&] { *out = new acs_config{acs::io::parse_config(yaml)}; });
}

acs_status acs_config_load(const char* path, acs_config** out) {
  ACS_REQUIRE(path != nullptr && out != nullptr, "path and out must not be null");
  return checked([&] { *out = new acs_config{acs::io::load_config(path)}; });
}

acs_status acs_config_emit(const acs_config* config, char** out_yaml) {
  ACS_REQUIRE(config != nullptr && out_yaml != nullptr, "config and out_yaml must not be null");
  return checked([&] { *out_yaml = dup_string(acs::io::emit_config(config->value)); });
}

acs_status acs_config_set_seed(acs_config* config, uint64_t seed) {
  ACS_REQUIRE(config != nullptr, "config must not be null");
  config->value.plan.seed = seed;
  g_last_error.clear();
  return ACS_OK;
}

void acs_config_free(acs_config* config) { delete config; }

acs_status acs_distill(const acs_config* config, const char* out_dir, size_t workers, acs_log_fn log,
                       void* user_data) {
  ACS_REQUIRE(config != nullptr && out_dir != nullptr, "config and out_dir must not be null");
  return checked([&] { acs::io::run_distill(config->value, out_dir, options(workers, log, user_data)); });
}

acs_status acs_evaluate(const char* dataset_dir, const acs_config* config, const size_t* prefixes, size_t n_prefixes,
                        const char* out_dir, size_t workers, acs_log_fn log, void* user_data) {
  ACS_REQUIRE(dataset_dir != nullptr && out_dir != nullptr, "dataset_dir and out_dir must not be null");
  ACS_REQUIRE(prefixes != nullptr || n_prefixes == 0, "prefixes is null but n_prefixes is positive");
  return checked([&] {
    std::optional<acs::io::RunConfig> cfg;
    if (config != nullptr) cfg = config->value;
    const std::vector<std::size_t> ks(prefixes, prefixes + n_prefixes);
    acs::io::run_eval(dataset_dir, cfg, ks, out_dir, options(workers, log, user_data));
  });
}

acs_status acs_sweep(const char* kind, const acs_config* config, const char* out_dir, size_t workers, acs_log_fn log,
                     void* user_data) {
  ACS_REQUIRE(kind != nullptr && config != nullptr && out_dir != nullptr, "kind, config and out_dir must not be null");
  return checked([&] {
    acs::io::run_sweep(acs::io::sweep_kind_from_string(kind), config->value, out_dir,
                       options(workers, log, user_data));
  });
}

acs_status acs_replay(const char* manifest, const char* out_dir, size_t workers, acs_log_fn log, void* user_data,
                      int* identical, char** mismatches) {
  ACS_REQUIRE(manifest != nullptr && out_dir != nullptr && identical != nullptr,
              "manifest, out_dir and identical must not be null");
  return checked([&] {
    const auto result = acs::io::replay(manifest, out_dir, options(workers, log, user_data));
    *identical = result.identical() ? 1 : 0;
    if (mismatches != nullptr) {
      std::string text;
      for (const auto& name : result.mismatches) text += name + "\n";
      *mismatches = dup_string(text);
    }
  });
}

acs_status acs_dataset_load(const char* dir, acs_dataset** out) {
  ACS_REQUIRE(dir != nullptr && out != nullptr, "dir and out must not be null");
  return checked([&] { *out = new acs_dataset{acs::io::load_dataset(dir)}; });
}

size_t acs_dataset_curricula(const acs_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.dataset.curricula.size();
}

size_t acs_dataset_classes(const acs_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.dataset.num_classes;
}

size_t acs_dataset_dimension(const acs_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.dataset.dimension;
}

acs_status acs_dataset_count(const acs_dataset* dataset, size_t curriculum, int label, size_t* out) {
  ACS_REQUIRE(dataset != nullptr && out != nullptr, "dataset and out must not be null");
  const auto& ds = dataset->value.dataset;
  ACS_REQUIRE(curriculum < ds.curricula.size(), "curriculum index out of range");
  ACS_REQUIRE(label >= 0 && static_cast<size_t>(label) < ds.num_classes, "label out of range");
  return checked([&] { *out = ds.count(curriculum, label); });
}

acs_status acs_dataset_guidance(const acs_dataset* dataset, size_t curriculum, double* out) {
  ACS_REQUIRE(dataset != nullptr && out != nullptr, "dataset and out must not be null");
  ACS_REQUIRE(curriculum < dataset->value.dataset.curricula.size(), "curriculum index out of range");
  *out = dataset->value.dataset.curricula[curriculum].g;
  g_last_error.clear();
  return ACS_OK;
}

acs_status acs_dataset_points(const acs_dataset* dataset, size_t k, double* x_out, int* y_out, size_t capacity,
                              size_t* n_out) {
  ACS_REQUIRE(dataset != nullptr && n_out != nullptr, "dataset and n_out must not be null");
  const auto& ds = dataset->value.dataset;
  ACS_REQUIRE(k >= 1 && k <= ds.curricula.size(), "prefix k out of range");
  return checked([&] {
    const auto points = ds.points_before(k);
    *n_out = points.size();
    if (x_out == nullptr && y_out == nullptr) return;
    require(capacity >= points.size(), "capacity is smaller than the number of points");
    for (size_t i = 0; i < points.size(); ++i) {
      if (x_out != nullptr) std::copy(points[i].x.begin(), points[i].x.end(), x_out + i * ds.dimension);
      if (y_out != nullptr) y_out[i] = points[i].y;
    }
  });
}

acs_status acs_dataset_content_hash(const acs_dataset* dataset, char** out) {
  ACS_REQUIRE(dataset != nullptr && out != nullptr, "dataset and out must not be null");
  return checked([&] { *out = dup_string(dataset->value.content_hash); });
}

acs_status acs_dataset_describe(const acs_dataset* dataset, char** out) {
  ACS_REQUIRE(dataset != nullptr && out != nullptr, "dataset and out must not be null");
  return checked([&] {
    const auto& ds = dataset->value.dataset;
    std::ostringstream s;
    s << "classes: " << ds.num_classes << "\n"
      << "dimension: " << ds.dimension << "\n"
      << "base_seed: " << ds.plan.base_seed << "\n"
      << "content_hash: " << dataset->value.content_hash << "\n"
      << "curricula:\n";
    std::size_t total = 0;
    for (std::size_t i = 0; i < ds.curricula.size(); ++i) {
      const auto& rec = ds.curricula[i];
      total += ds.plan.sizes[i];
      s << "  - index: " << i << "\n"
        << "    per_class: " << ds.plan.sizes[i] << "\n"
        << "    cumulative_per_class: " << total << "\n"
        << "    g: " << acs::io::format_double(rec.g) << "\n";
      if (!rec.discriminator_fingerprint.empty())
        s << "    discriminator_fingerprint: " << rec.discriminator_fingerprint << "\n"
          << "    discriminator_training_accuracy: "
          << acs::io::format_double(rec.discriminator_training_accuracy) << "\n";
    }
    *out = dup_string(s.str());
  });
}

void acs_dataset_free(acs_dataset* dataset) { delete dataset; }

acs_status acs_target_from_config(const acs_config* config, acs_target** out) {
  ACS_REQUIRE(config != nullptr && out != nullptr, "config and out must not be null");
  return checked([&] { *out = new acs_target{acs::io::make_target(config->value)}; });
}

size_t acs_target_dimension(const acs_target* target) { return target == nullptr ? 0 : target->value.dimension(); }

size_t acs_target_classes(const acs_target* target) { return target == nullptr ? 0 : target->value.num_classes(); }

acs_status acs_target_exact_eps(const acs_target* target, const double* z, size_t dimension, int label,
                                double alpha_bar, double* eps_out) {
  ACS_REQUIRE(target != nullptr && z != nullptr && eps_out != nullptr, "target, z and eps_out must not be null");
  ACS_REQUIRE(dimension == target->value.dimension(), "dimension does not match the target");
  return checked([&] {
    const auto eps = target->value.exact_eps(std::span<const double>(z, dimension), label, alpha_bar);
    std::copy(eps.begin(), eps.end(), eps_out);
  });
}

acs_status acs_target_log_density(const acs_target* target, const double* z, size_t dimension, int label,
                                  double alpha_bar, double* out) {
  ACS_REQUIRE(target != nullptr && z != nullptr && out != nullptr, "target, z and out must not be null");
  ACS_REQUIRE(dimension == target->value.dimension(), "dimension does not match the target");
  return checked([&] { *out = target->value.log_density(std::span<const double>(z, dimension), label, alpha_bar); });
}

acs_status acs_target_sample(const acs_target* target, size_t n_per_class, uint64_t seed, double* x_out, int* y_out,
                             size_t capacity) {
  ACS_REQUIRE(target != nullptr && x_out != nullptr && y_out != nullptr, "target, x_out and y_out must not be null");
  const size_t n = n_per_class * target->value.num_classes();
  ACS_REQUIRE(capacity >= n, "capacity is smaller than n_per_class * classes");
  return checked([&] {
    const auto points = acs::gmm::sample_target(target->value, n_per_class, seed);
    const size_t d = target->value.dimension();
    for (size_t i = 0; i < points.size(); ++i) {
      std::copy(points[i].x.begin(), points[i].x.end(), x_out + i * d);
      y_out[i] = points[i].y;
    }
  });
}

void acs_target_free(acs_target* target) { delete target; }

}  // extern "C"

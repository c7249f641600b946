// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "acs/acs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(acs_status status) {
  switch (status) {
    case ACS_OK: return kExitOk;
    case ACS_ERR_CONFIG:
    case ACS_ERR_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitRuntime;
  }
}

int report(acs_status status) {
  if (status != ACS_OK) std::cerr << "acs: " << acs_status_name(status) << ": " << acs_last_error() << "\n";
  return exit_code(status);
}

void log_to_stderr(const char* message, void*) { std::cerr << "acs: " << message << "\n"; }

struct ConfigHandle {
  acs_config* ptr = nullptr;
  ~ConfigHandle() { acs_config_free(ptr); }
};

acs_status open_config(const std::string& path, ConfigHandle& out) {
  return path.empty() ? acs_config_default(&out.ptr) : acs_config_load(path.c_str(), &out.ptr);
}

std::string take(char* text) {
  std::string s = text == nullptr ? "" : text;
  acs_string_free(text);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversary-guided curriculum sampling for dataset distillation"};
  app.set_version_flag("--version", std::string(acs_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::size_t workers = 1;
  bool quiet = false;
  app.add_option("-j,--workers", workers, "Worker threads for sampling")->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages");

  std::string config_path;
  std::string out_dir;

  auto* distill = app.add_subcommand("distill", "Distill a dataset with curriculum sampling");
  std::optional<std::uint64_t> seed;
  distill->add_option("-c,--config", config_path, "Configuration file (defaults if omitted)");
  distill->add_option("-o,--out", out_dir, "Output directory")->required();
  distill->add_option("--seed", seed, "Override the plan's base seed");

  auto* eval = app.add_subcommand("eval", "Evaluate a distilled dataset");
  std::string dataset_dir;
  std::vector<std::size_t> prefixes;
  eval->add_option("-d,--dataset", dataset_dir, "Distill output directory")->required();
  eval->add_option("-c,--config", config_path, "Evaluation settings (the dataset's own if omitted)");
  eval->add_option("-k,--prefix", prefixes, "Evaluate only these nested prefixes (curricula count)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  eval->add_option("-o,--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a guidance or curricula sweep");
  std::string kind;
  sweep->add_option("kind", kind, "guidance or curricula")
      ->required()
      ->check(CLI::IsMember({"guidance", "curricula"}));
  sweep->add_option("-c,--config", config_path, "Configuration file (defaults if omitted)");
  sweep->add_option("-o,--out", out_dir, "Output directory")->required();

  auto* inspect = app.add_subcommand("inspect", "Show defaults, a resolved configuration, or a dataset summary");
  bool defaults = false;
  auto* defaults_flag = inspect->add_flag("--defaults", defaults, "Print the default configuration");
  auto* config_opt = inspect->add_option("-c,--config", config_path, "Validate and print a configuration");
  auto* dataset_opt = inspect->add_option("-d,--dataset", dataset_dir, "Summarize a distilled dataset");
  defaults_flag->excludes(config_opt)->excludes(dataset_opt);
  config_opt->excludes(dataset_opt);

  auto* replay = app.add_subcommand("replay", "Re-run a recorded command and compare output hashes");
  std::string manifest;
  replay->add_option("-m,--manifest", manifest, "Manifest file or output directory")->required();
  replay->add_option("-o,--out", out_dir, "Directory for the re-run outputs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const acs_log_fn log = quiet ? nullptr : log_to_stderr;

  if (distill->parsed()) {
    ConfigHandle cfg;
    if (acs_status s = open_config(config_path, cfg); s != ACS_OK) return report(s);
    if (seed) acs_config_set_seed(cfg.ptr, *seed);
    if (acs_status s = acs_distill(cfg.ptr, out_dir.c_str(), workers, log, nullptr); s != ACS_OK) return report(s);
    acs_dataset* ds = nullptr;
    if (acs_status s = acs_dataset_load(out_dir.c_str(), &ds); s != ACS_OK) return report(s);
    char* hash = nullptr;
    const acs_status s = acs_dataset_content_hash(ds, &hash);
    acs_dataset_free(ds);
    if (s != ACS_OK) return report(s);
    std::cout << "dataset_content_hash: " << take(hash) << "\n";
    return kExitOk;
  }

  if (eval->parsed()) {
    ConfigHandle cfg;
    if (!config_path.empty())
      if (acs_status s = open_config(config_path, cfg); s != ACS_OK) return report(s);
    return report(acs_evaluate(dataset_dir.c_str(), cfg.ptr, prefixes.data(), prefixes.size(), out_dir.c_str(),
                               workers, log, nullptr));
  }

  if (sweep->parsed()) {
    ConfigHandle cfg;
    if (acs_status s = open_config(config_path, cfg); s != ACS_OK) return report(s);
    return report(acs_sweep(kind.c_str(), cfg.ptr, out_dir.c_str(), workers, log, nullptr));
  }

  if (inspect->parsed()) {
    if (!dataset_dir.empty()) {
      acs_dataset* ds = nullptr;
      if (acs_status s = acs_dataset_load(dataset_dir.c_str(), &ds); s != ACS_OK) return report(s);
      char* text = nullptr;
      const acs_status s = acs_dataset_describe(ds, &text);
      acs_dataset_free(ds);
      if (s != ACS_OK) return report(s);
      std::cout << take(text);
      return kExitOk;
    }
    if (!defaults && config_path.empty()) {
      std::cerr << "acs: inspect needs --defaults, --config or --dataset\n";
      return kExitConfig;
    }
    ConfigHandle cfg;
    if (acs_status s = open_config(config_path, cfg); s != ACS_OK) return report(s);
    char* yaml = nullptr;
    if (acs_status s = acs_config_emit(cfg.ptr, &yaml); s != ACS_OK) return report(s);
    std::cout << take(yaml);
    return kExitOk;
  }

  if (replay->parsed()) {
    int identical = 0;
    char* mismatches = nullptr;
    if (acs_status s = acs_replay(manifest.c_str(), out_dir.c_str(), workers, log, nullptr, &identical, &mismatches);
        s != ACS_OK)
      return report(s);
    const std::string diff = take(mismatches);
    if (!identical) {
      std::cerr << "acs: replay differs from the recorded run in:\n" << diff;
      return kExitRuntime;
    }
    std::cout << "replay identical\n";
    return kExitOk;
  }
  return kExitConfig;
}

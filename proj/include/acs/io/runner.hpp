// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acs/curriculum/curriculum.hpp"
#include "acs/io/config.hpp"

namespace acs::io {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kDatasetSchemaVersion = 1;
inline constexpr const char* kManifestFile = "manifest.yaml";

const char* tool_version();

using LogFn = std::function<void(const std::string&)>;

struct RunOptions {
  std::size_t workers = 1;
  LogFn log;
};

/// Files written by a command, keyed by name relative to the output
/// directory, with their SHA-256.
struct RunSummary {
  std::filesystem::path out_dir;
  std::map<std::string, std::string> files;
  std::string dataset_hash;  // distill only
};

void write_dataset_csv(const std::filesystem::path& path, const curriculum::DistilledDataset& dataset);
void write_trajectories_csv(const std::filesystem::path& path, const curriculum::DistilledDataset& dataset);

struct LoadedDataset {
  RunConfig config;  // configuration the dataset was distilled with
  curriculum::DistilledDataset dataset;
  std::string content_hash;
};

/// Reads a distill output directory (or its manifest), verifies the recorded
/// file hashes and the dataset invariants.
LoadedDataset load_dataset(const std::filesystem::path& dir_or_manifest);

RunSummary run_distill(const RunConfig& config, const std::filesystem::path& out_dir, const RunOptions& options = {});

/// Evaluates nested prefixes of a distilled dataset. `prefixes` empty means
/// every k in [1, N_c]. The target always comes from the dataset's own
/// configuration; evaluation settings come from `config` when given.
RunSummary run_eval(const std::filesystem::path& dataset_dir, const std::optional<RunConfig>& config,
                    const std::vector<std::size_t>& prefixes, const std::filesystem::path& out_dir,
                    const RunOptions& options = {});

enum class SweepKind { kGuidance, kCurricula };
SweepKind sweep_kind_from_string(const std::string& name);
const char* to_string(SweepKind kind);

RunSummary run_sweep(SweepKind kind, const RunConfig& config, const std::filesystem::path& out_dir,
                     const RunOptions& options = {});

struct ReplayResult {
  RunSummary summary;
  /// Files whose hash differs from the manifest or that are missing.
  std::vector<std::string> mismatches;
  bool identical() const { return mismatches.empty(); }
};

/// Re-executes the command recorded in a manifest into `out_dir` and
/// compares every produced file hash with the recorded one.
ReplayResult replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                    const RunOptions& options = {});

}  // namespace acs::io

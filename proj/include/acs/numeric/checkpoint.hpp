// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "acs/numeric/mlp.hpp"

namespace acs::numeric {

// Binary model checkpoint, little-endian:
//   magic "ACSMLP\0\0" | u32 version | u32 kind length | kind bytes
//   | u32 layer count + 1 | u64 widths... | u8 activation | u64 seed
//   | per layer: u32 rank, u64 dims..., f64 values... (weights then bias)
// `kind` is a free-form tag naming what the network is used for.

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_model(std::ostream& out, const MlpModel& model, const std::string& kind);
/// Reads a checkpoint. `kind` receives the stored tag when non-null.
MlpModel read_model(std::istream& in, std::string* kind = nullptr);

void save_model(const std::filesystem::path& path, const MlpModel& model, const std::string& kind);
MlpModel load_model(const std::filesystem::path& path, std::string* kind = nullptr);

}  // namespace acs::numeric

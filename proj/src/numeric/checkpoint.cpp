// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/numeric/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "acs/errors.hpp"

namespace acs::numeric {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr std::array<char, 8> kMagic{'A', 'C', 'S', 'M', 'L', 'P', '\0', '\0'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw RuntimeError("checkpoint: unexpected end of file");
  return value;
}

void put_array(std::ostream& out, const DenseArray& a) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(a.rank()));
  for (std::size_t d : a.shape()) put<std::uint64_t>(out, d);
  out.write(reinterpret_cast<const char*>(a.values().data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
}

DenseArray get_array(std::istream& in) {
  const auto rank = get<std::uint32_t>(in);
  if (rank > 8) throw RuntimeError("checkpoint: implausible array rank");
  std::vector<std::size_t> shape(rank);
  std::size_t count = 1;
  for (auto& d : shape) {
    d = get<std::uint64_t>(in);
    count *= d;
  }
  if (count > (std::size_t{1} << 32)) throw RuntimeError("checkpoint: implausible array size");
  std::vector<double> values(count);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw RuntimeError("checkpoint: truncated array data");
  return DenseArray(std::move(shape), std::move(values));
}

}  // namespace

void write_model(std::ostream& out, const MlpModel& model, const std::string& kind) {
  model.validate();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(kind.size()));
  out.write(kind.data(), static_cast<std::streamsize>(kind.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.widths.size()));
  for (std::size_t w : model.widths) put<std::uint64_t>(out, w);
  put<std::uint8_t>(out, model.activation == Activation::kRelu ? 0 : 1);
  put<std::uint64_t>(out, model.seed);
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    put_array(out, model.weights[l]);
    put_array(out, model.biases[l]);
  }
  if (!out) throw RuntimeError("checkpoint: write failed");
}

MlpModel read_model(std::istream& in, std::string* kind) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw RuntimeError("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw RuntimeError("checkpoint: unsupported version " + std::to_string(version));
  const auto kind_len = get<std::uint32_t>(in);
  if (kind_len > 4096) throw RuntimeError("checkpoint: implausible kind tag");
  std::string tag(kind_len, '\0');
  in.read(tag.data(), kind_len);
  if (!in) throw RuntimeError("checkpoint: truncated kind tag");
  if (kind != nullptr) *kind = tag;

  MlpModel model;
  const auto width_count = get<std::uint32_t>(in);
  if (width_count < 2 || width_count > 1024) throw RuntimeError("checkpoint: implausible layer count");
  for (std::uint32_t i = 0; i < width_count; ++i) model.widths.push_back(get<std::uint64_t>(in));
  const auto act = get<std::uint8_t>(in);
  if (act > 1) throw RuntimeError("checkpoint: unknown activation tag");
  model.activation = act == 0 ? Activation::kRelu : Activation::kTanh;
  model.seed = get<std::uint64_t>(in);
  for (std::uint32_t l = 0; l + 1 < width_count; ++l) {
    model.weights.push_back(get_array(in));
    model.biases.push_back(get_array(in));
  }
  try {
    model.validate();
  } catch (const ContractError& e) {
    throw RuntimeError(std::string("checkpoint: ") + e.what());
  }
  return model;
}

void save_model(const std::filesystem::path& path, const MlpModel& model, const std::string& kind) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot open " + path.string() + " for writing");
  write_model(out, model, kind);
}

MlpModel load_model(const std::filesystem::path& path, std::string* kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot open " + path.string());
  return read_model(in, kind);
}

}  // namespace acs::numeric

// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/io/runner.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <system_error>
#include <tuple>

#include "acs/errors.hpp"
#include "acs/evaluation/evaluation.hpp"
#include "acs/hash.hpp"
#include "acs/io/csv.hpp"
#include "acs/numeric/checkpoint.hpp"
#include "acs/numeric/rng.hpp"

namespace fs = std::filesystem;

namespace acs::io {
namespace {

constexpr const char* kDatasetFile = "dataset.csv";
constexpr const char* kTrajectoryFile = "trajectories.csv";
constexpr const char* kDenoiserCheckpoint = "checkpoints/denoiser.ckpt";

void log(const RunOptions& options, const std::string& message) {
  if (options.log) options.log(message);
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path normalized(const fs::path& p) {
  fs::path out = fs::absolute(p).lexically_normal();
  if (out.filename().empty()) out = out.parent_path();
  return out;
}

// Collects outputs in a sibling directory and moves them into place only once
// the command has succeeded, so a failed run leaves nothing behind.
class Staging {
 public:
  explicit Staging(const fs::path& target) : final_(normalized(target)) {
    if (fs::exists(final_)) {
      if (!fs::is_directory(final_)) throw RuntimeError("output path " + final_.string() + " is not a directory");
      if (!fs::is_empty(final_) && !fs::exists(final_ / kManifestFile))
        throw RuntimeError("refusing to overwrite " + final_.string() + ": not empty and has no " + kManifestFile);
    }
    fs::create_directories(final_.parent_path());
    staging_ = final_.parent_path() / (final_.filename().string() + ".partial");
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  const fs::path& dir() const { return staging_; }
  const fs::path& final_dir() const { return final_; }

  void commit() {
    fs::remove_all(final_);
    fs::rename(staging_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path staging_;
  bool committed_ = false;
};

std::map<std::string, std::string> hash_outputs(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().lexically_relative(dir).generic_string();
    if (name == kManifestFile) continue;
    files[name] = sha256_file(entry.path());
  }
  return files;
}

std::string to_text(std::size_t v) { return std::to_string(v); }
std::string to_text(std::uint64_t v, int) { return std::to_string(v); }

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? ";" : "") + std::to_string(sizes[i]);
  return out;
}

// --- manifest -------------------------------------------------------------

struct CurriculumEntry {
  std::size_t size = 0;
  double g = 0.0;
  std::string fingerprint;
  std::uint64_t discriminator_seed = 0;
  double training_accuracy = 0.0;
  std::string checkpoint;
};

struct DenoiserEntry {
  std::string kind;
  std::string checkpoint;
  double initial_heldout_loss = 0.0;
  double final_heldout_loss = 0.0;
};

struct Manifest {
  std::string command;
  std::map<std::string, std::string> args;
  RunConfig config;
  std::optional<DenoiserEntry> denoiser;
  std::vector<CurriculumEntry> curricula;
  std::string dataset_hash;
  std::map<std::string, std::string> metrics;
  std::map<std::string, std::string> files;
};

void write_manifest(const fs::path& dir, const Manifest& m, const diffusion::NoiseSchedule& schedule) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kManifestSchemaVersion;
  out << YAML::Key << "tool" << YAML::Value << "acs";
  out << YAML::Key << "tool_version" << YAML::Value << tool_version();
  out << YAML::Key << "command" << YAML::Value << m.command;
  out << YAML::Key << "created_utc" << YAML::Value << utc_now();
  out << YAML::Key << "args" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : m.args) out << YAML::Key << k << YAML::Value << v;
  out << YAML::EndMap;
  out << YAML::Key << "config" << YAML::Value << YAML::Load(emit_config(m.config));
  out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << "cosine";
  out << YAML::Key << "steps" << YAML::Value << schedule.steps();
  out << YAML::Key << "eta" << YAML::Value << format_double(schedule.eta());
  out << YAML::Key << "alpha_bar" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double a : schedule.alpha_bars()) out << format_double(a);
  out << YAML::EndSeq << YAML::EndMap;
  if (m.denoiser) {
    out << YAML::Key << "denoiser" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << m.denoiser->kind;
    out << YAML::Key << "conditioning" << YAML::Value << std::string(diffusion::kConditioningScheme);
    if (!m.denoiser->checkpoint.empty()) {
      out << YAML::Key << "checkpoint" << YAML::Value << m.denoiser->checkpoint;
      out << YAML::Key << "initial_heldout_loss" << YAML::Value << format_double(m.denoiser->initial_heldout_loss);
      out << YAML::Key << "final_heldout_loss" << YAML::Value << format_double(m.denoiser->final_heldout_loss);
    }
    out << YAML::EndMap;
  }
  if (!m.curricula.empty()) {
    out << YAML::Key << "curricula" << YAML::Value << YAML::BeginSeq;
    for (std::size_t i = 0; i < m.curricula.size(); ++i) {
      const auto& c = m.curricula[i];
      out << YAML::BeginMap;
      out << YAML::Key << "index" << YAML::Value << i;
      out << YAML::Key << "size" << YAML::Value << c.size;
      out << YAML::Key << "g" << YAML::Value << format_double(c.g);
      out << YAML::Key << "discriminator_fingerprint" << YAML::Value << c.fingerprint;
      out << YAML::Key << "discriminator_seed" << YAML::Value << c.discriminator_seed;
      out << YAML::Key << "discriminator_training_accuracy" << YAML::Value << format_double(c.training_accuracy);
      out << YAML::Key << "checkpoint" << YAML::Value << c.checkpoint;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (!m.dataset_hash.empty()) out << YAML::Key << "dataset_content_hash" << YAML::Value << m.dataset_hash;
  if (!m.metrics.empty()) {
    out << YAML::Key << "metrics" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : m.metrics) out << YAML::Key << k << YAML::Value << v;
    out << YAML::EndMap;
  }
  out << YAML::Key << "files" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : m.files) out << YAML::Key << k << YAML::Value << v;
  out << YAML::EndMap;
  out << YAML::EndMap;
  std::ofstream f(dir / kManifestFile);
  f << out.c_str() << "\n";
  if (!f) throw RuntimeError("cannot write " + (dir / kManifestFile).string());
}

fs::path manifest_path(const fs::path& dir_or_manifest) {
  return fs::is_directory(dir_or_manifest) ? dir_or_manifest / kManifestFile : dir_or_manifest;
}

Manifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw RuntimeError("manifest not found: " + path.string());
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw RuntimeError("cannot read manifest " + path.string() + ": " + e.what());
  }
  try {
    if (!root.IsMap() || !root["schema_version"] || root["schema_version"].as<int>() != kManifestSchemaVersion)
      throw RuntimeError("unsupported manifest schema in " + path.string());
    Manifest m;
    m.command = root["command"].as<std::string>();
    for (const auto& kv : root["args"]) m.args[kv.first.as<std::string>()] = kv.second.as<std::string>();
    m.config = parse_config(YAML::Dump(root["config"]));
    if (root["denoiser"]) {
      DenoiserEntry d;
      d.kind = root["denoiser"]["kind"].as<std::string>();
      if (root["denoiser"]["checkpoint"]) d.checkpoint = root["denoiser"]["checkpoint"].as<std::string>();
      m.denoiser = d;
    }
    if (root["curricula"]) {
      for (const auto& c : root["curricula"]) {
        CurriculumEntry e;
        e.size = c["size"].as<std::size_t>();
        e.g = parse_double(c["g"].as<std::string>());
        e.fingerprint = c["discriminator_fingerprint"].as<std::string>();
        e.discriminator_seed = parse_uint(c["discriminator_seed"].as<std::string>());
        e.training_accuracy = parse_double(c["discriminator_training_accuracy"].as<std::string>());
        e.checkpoint = c["checkpoint"].as<std::string>();
        m.curricula.push_back(std::move(e));
      }
    }
    if (root["dataset_content_hash"]) m.dataset_hash = root["dataset_content_hash"].as<std::string>();
    if (root["metrics"])
      for (const auto& kv : root["metrics"]) m.metrics[kv.first.as<std::string>()] = kv.second.as<std::string>();
    for (const auto& kv : root["files"]) m.files[kv.first.as<std::string>()] = kv.second.as<std::string>();
    return m;
  } catch (const YAML::Exception& e) {
    throw RuntimeError("malformed manifest " + path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw RuntimeError("manifest " + path.string() + " holds an invalid configuration: " + e.what());
  }
}

// --- denoiser -------------------------------------------------------------

struct BuiltDenoiser {
  diffusion::Denoiser denoiser;
  DenoiserEntry entry;
};

BuiltDenoiser build_denoiser(const RunConfig& config, const std::shared_ptr<const gmm::GmmTarget>& target,
                             const diffusion::NoiseSchedule& schedule, const fs::path& out_dir,
                             const RunOptions& options) {
  if (config.denoiser.kind == DenoiserSource::kAnalytic)
    return {diffusion::Denoiser::analytic(target), DenoiserEntry{"analytic_gmm", "", 0.0, 0.0}};
  const auto& spec = config.denoiser;
  const std::size_t d = target->dimension();
  std::vector<std::size_t> widths{d + target->num_classes() + 1};
  widths.insert(widths.end(), spec.hidden.begin(), spec.hidden.end());
  widths.push_back(d);
  log(options, "training denoiser (" + std::to_string(spec.optimizer.steps) + " steps)");
  const auto data = gmm::sample_target(*target, spec.train_per_class, spec.data_seed);
  auto model = numeric::MlpModel::initialize(widths, spec.activation, spec.optimizer.seed);
  auto training = diffusion::train_denoiser(data, std::move(model), schedule, spec.optimizer);
  fs::create_directories((out_dir / kDenoiserCheckpoint).parent_path());
  numeric::save_model(out_dir / kDenoiserCheckpoint, *training.model, "denoiser");
  log(options, "denoiser held-out loss " + format_double(training.initial_heldout_loss) + " -> " +
                   format_double(training.final_heldout_loss));
  return {training.denoiser,
          DenoiserEntry{"learned_mlp", kDenoiserCheckpoint, training.initial_heldout_loss, training.final_heldout_loss}};
}

evaluation::Experiment make_experiment(const RunConfig& config, const gmm::GmmTarget& target,
                                       const diffusion::Denoiser& denoiser, const diffusion::NoiseSchedule& schedule,
                                       std::size_t workers) {
  evaluation::Experiment e;
  e.target = &target;
  e.denoiser = &denoiser;
  e.schedule = &schedule;
  e.eval = config.evaluation.eval;
  e.coverage_radius = config.evaluation.coverage_radius;
  e.workers = workers;
  return e;
}

std::size_t checked_workers(std::size_t workers) {
  if (workers == 0) throw ConfigError("worker count must be at least 1");
  return workers;
}

}  // namespace

const char* tool_version() { return "0.3.0"; }

// --- dataset files --------------------------------------------------------

void write_dataset_csv(const fs::path& path, const curriculum::DistilledDataset& dataset) {
  std::vector<std::string> header{"curriculum", "class", "index", "seed"};
  for (std::size_t j = 0; j < dataset.dimension; ++j) header.push_back("x" + std::to_string(j));
  CsvTable table(std::move(header));
  for (const auto& record : dataset.curricula)
    for (const auto& s : record.samples) {
      std::vector<std::string> row{to_text(s.curriculum), std::to_string(s.point.y), to_text(s.index),
                                   to_text(s.record.seed, 0)};
      for (double v : s.point.x) row.push_back(format_double(v));
      table.add_row(std::move(row));
    }
  write_csv(path, table);
}

void write_trajectories_csv(const fs::path& path, const curriculum::DistilledDataset& dataset) {
  CsvTable table({"curriculum", "class", "index", "seed", "step", "guidance_norm"});
  for (const auto& record : dataset.curricula)
    for (const auto& s : record.samples) {
      const auto& norms = s.record.guidance_norms;
      // Norms are stored in sampling order, t = T down to 1.
      for (std::size_t k = 0; k < norms.size(); ++k)
        table.add_row({to_text(s.curriculum), std::to_string(s.point.y), to_text(s.index), to_text(s.record.seed, 0),
                       std::to_string(norms.size() - k), format_double(norms[k])});
    }
  write_csv(path, table);
}

LoadedDataset load_dataset(const fs::path& dir_or_manifest) {
  const fs::path mpath = manifest_path(dir_or_manifest);
  const fs::path dir = mpath.parent_path();
  const Manifest m = read_manifest(mpath);
  if (m.command != "distill") throw RuntimeError(mpath.string() + " does not describe a distilled dataset");
  for (const auto& [name, digest] : m.files) {
    const fs::path p = dir / name;
    if (!fs::exists(p)) throw RuntimeError("dataset file missing: " + p.string());
    if (sha256_file(p) != digest) throw RuntimeError("dataset file modified since distillation: " + p.string());
  }

  LoadedDataset out;
  out.config = m.config;
  const gmm::GmmTarget target = make_target(m.config);
  auto& ds = out.dataset;
  ds.plan = make_plan(m.config);
  ds.num_classes = target.num_classes();
  ds.dimension = target.dimension();
  if (m.curricula.size() != ds.plan.curricula()) throw RuntimeError("manifest curricula disagree with its plan");
  ds.curricula.resize(m.curricula.size());
  for (std::size_t i = 0; i < m.curricula.size(); ++i) {
    auto& rec = ds.curricula[i];
    const auto& e = m.curricula[i];
    rec.g = e.g;
    rec.discriminator_fingerprint = e.fingerprint;
    rec.discriminator_seed = e.discriminator_seed;
    rec.discriminator_training_accuracy = e.training_accuracy;
    if (!e.checkpoint.empty())
      rec.discriminator = adversary::Discriminator{numeric::load_model(dir / e.checkpoint), e.fingerprint,
                                                   e.discriminator_seed};
  }

  const CsvTable table = read_csv(dir / kDatasetFile);
  if (table.header.size() != 4 + ds.dimension) throw RuntimeError("dataset.csv has the wrong number of columns");
  for (const auto& row : table.rows) {
    curriculum::DistilledSample s;
    s.curriculum = parse_uint(row[0]);
    s.point.y = static_cast<int>(parse_int(row[1]));
    s.index = parse_uint(row[2]);
    s.record.seed = parse_uint(row[3]);
    s.record.label = s.point.y;
    for (std::size_t j = 0; j < ds.dimension; ++j) s.point.x.push_back(parse_double(row[4 + j]));
    s.record.final_point = s.point.x;
    if (s.curriculum >= ds.curricula.size()) throw RuntimeError("dataset.csv names an unknown curriculum");
    ds.curricula[s.curriculum].samples.push_back(std::move(s));
  }

  const CsvTable traj = read_csv(dir / kTrajectoryFile);
  std::map<std::tuple<std::size_t, int, std::size_t>, std::vector<double>> norms;
  for (const auto& row : traj.rows)
    norms[{parse_uint(row[0]), static_cast<int>(parse_int(row[1])), parse_uint(row[2])}].push_back(parse_double(row[5]));
  for (auto& rec : ds.curricula)
    for (auto& s : rec.samples)
      if (auto it = norms.find({s.curriculum, s.point.y, s.index}); it != norms.end())
        s.record.guidance_norms = it->second;

  curriculum::validate_dataset(ds);
  out.content_hash = curriculum::content_hash(ds);
  if (!m.dataset_hash.empty() && out.content_hash != m.dataset_hash)
    throw RuntimeError("dataset content hash does not match its manifest");
  return out;
}

// --- commands -------------------------------------------------------------

RunSummary run_distill(const RunConfig& config, const fs::path& out_dir, const RunOptions& options) {
  validate_config(config);
  const std::size_t workers = checked_workers(options.workers);
  Staging staging(out_dir);
  const fs::path dir = staging.dir();

  auto target = std::make_shared<const gmm::GmmTarget>(make_target(config));
  const auto schedule = make_schedule(config);
  const auto plan = make_plan(config);
  BuiltDenoiser built = build_denoiser(config, target, schedule, dir, options);

  const auto dataset = curriculum::run_acs(
      plan, built.denoiser, schedule, target->num_classes(), workers,
      [&](std::size_t i, const curriculum::CurriculumRecord& rec) {
        log(options, "curriculum " + std::to_string(i) + ": " + std::to_string(rec.samples.size()) + " samples, g = " +
                         format_double(rec.g));
      });

  Manifest m;
  m.command = "distill";
  m.config = config;
  m.denoiser = built.entry;
  write_dataset_csv(dir / kDatasetFile, dataset);
  write_trajectories_csv(dir / kTrajectoryFile, dataset);
  for (std::size_t i = 0; i < dataset.curricula.size(); ++i) {
    const auto& rec = dataset.curricula[i];
    CurriculumEntry e{plan.sizes[i], rec.g, rec.discriminator_fingerprint, rec.discriminator_seed,
                      rec.discriminator_training_accuracy, ""};
    if (rec.discriminator) {
      e.checkpoint = "checkpoints/discriminator_" + std::to_string(i) + ".ckpt";
      fs::create_directories((dir / e.checkpoint).parent_path());
      numeric::save_model(dir / e.checkpoint, rec.discriminator->model, "discriminator");
    }
    m.curricula.push_back(std::move(e));
  }
  m.dataset_hash = curriculum::content_hash(dataset);
  m.files = hash_outputs(dir);
  write_manifest(dir, m, schedule);
  staging.commit();
  return RunSummary{staging.final_dir(), m.files, m.dataset_hash};
}

RunSummary run_eval(const fs::path& dataset_dir, const std::optional<RunConfig>& config,
                    const std::vector<std::size_t>& prefixes, const fs::path& out_dir, const RunOptions& options) {
  checked_workers(options.workers);
  if (config) validate_config(*config);
  const LoadedDataset loaded = load_dataset(dataset_dir);
  RunConfig cfg = config ? *config : loaded.config;
  cfg.target = loaded.config.target;
  const auto& ds = loaded.dataset;
  const std::size_t nc = ds.curricula.size();
  std::vector<std::size_t> ks = prefixes;
  if (ks.empty()) {
    ks.resize(nc);
    std::iota(ks.begin(), ks.end(), std::size_t{1});
  }
  for (std::size_t k : ks)
    if (k < 1 || k > nc)
      throw ConfigError("prefix " + std::to_string(k) + " is outside [1, " + std::to_string(nc) + "]");

  Staging staging(out_dir);
  const fs::path dir = staging.dir();
  const gmm::GmmTarget target = make_target(cfg);
  const auto& ev = cfg.evaluation;

  CsvTable acc({"k", "images_per_class", "repetition", "accuracy"});
  CsvTable summary({"k", "images_per_class", "mean_accuracy", "stddev", "coverage"});
  CsvTable coverage({"k", "class", "coverage"});
  for (std::size_t k : ks) {
    const auto subset = curriculum::nested_subset(ds, k);
    const auto points = subset.points();
    const std::size_t ipc = subset.total_per_class(0);
    log(options, "evaluating prefix k = " + std::to_string(k) + " (" + std::to_string(ipc) + " per class)");
    const auto report = evaluation::train_eval_classifier(points, target, ev.eval);
    const auto cov = evaluation::mode_coverage(points, target, ev.coverage_radius);
    for (std::size_t r = 0; r < report.accuracies.size(); ++r)
      acc.add_row({to_text(k), to_text(ipc), to_text(r), format_double(report.accuracies[r])});
    summary.add_row({to_text(k), to_text(ipc), format_double(report.mean), format_double(report.stddev),
                     format_double(cov.overall)});
    for (std::size_t y = 0; y < cov.per_class.size(); ++y)
      coverage.add_row({to_text(k), to_text(y), format_double(cov.per_class[y])});
  }
  write_csv(dir / "eval_accuracy.csv", acc);
  write_csv(dir / "eval_summary.csv", summary);
  write_csv(dir / "coverage.csv", coverage);

  log(options, "training oracle classifier");
  const auto oracle = evaluation::train_oracle(target, ev.oracle_train_per_class, ev.eval.classifier, ev.eval.seed);
  const auto curve = evaluation::complexity_curve(ds, oracle);
  // Log-density gap of each curriculum against the unguided first one.
  CsvTable curve_table({"curriculum", "size", "g", "oracle_accuracy", "mean_log_density", "log_density_gap"});
  std::vector<double> index;
  const double reference = evaluation::mean_log_density(ds.points_of(0), target);
  double worst_gap = 0.0;
  for (std::size_t i = 0; i < curve.accuracy.size(); ++i) {
    const double density = evaluation::mean_log_density(ds.points_of(i), target);
    worst_gap = std::max(worst_gap, reference - density);
    curve_table.add_row({to_text(i), to_text(ds.plan.sizes[i]), format_double(ds.curricula[i].g),
                         format_double(curve.accuracy[i]), format_double(density), format_double(reference - density)});
    index.push_back(static_cast<double>(i));
  }
  if (worst_gap > ev.fidelity_bound)
    log(options, "warning: guided samples lose " + format_double(worst_gap) + " nats of log-density (bound " +
                     format_double(ev.fidelity_bound) + ")");
  write_csv(dir / "complexity_curve.csv", curve_table);

  const auto real =
      gmm::sample_target(target, ev.scatter_real_per_class, numeric::derive_seed({ev.eval.seed, 0x73636174ULL}));
  evaluation::pca_scatter_export(ds, real, dir / "scatter.csv");

  Manifest m;
  m.command = "eval";
  m.config = cfg;
  m.args["dataset"] = normalized(manifest_path(dataset_dir).parent_path()).string();
  m.args["dataset_content_hash"] = loaded.content_hash;
  std::string klist;
  for (std::size_t i = 0; i < ks.size(); ++i) klist += (i ? "," : "") + std::to_string(ks[i]);
  m.args["prefixes"] = klist;
  m.metrics["complexity_spearman"] = format_double(evaluation::spearman(index, curve.accuracy));
  m.metrics["max_log_density_gap"] = format_double(worst_gap);
  m.metrics["fidelity_within_bound"] = worst_gap <= ev.fidelity_bound ? "true" : "false";
  m.files = hash_outputs(dir);
  write_manifest(dir, m, make_schedule(cfg));
  staging.commit();
  return RunSummary{staging.final_dir(), m.files, {}};
}

SweepKind sweep_kind_from_string(const std::string& name) {
  if (name == "guidance") return SweepKind::kGuidance;
  if (name == "curricula") return SweepKind::kCurricula;
  throw ConfigError("unknown sweep kind '" + name + "' (expected guidance or curricula)");
}

const char* to_string(SweepKind kind) { return kind == SweepKind::kGuidance ? "guidance" : "curricula"; }

RunSummary run_sweep(SweepKind kind, const RunConfig& config, const fs::path& out_dir, const RunOptions& options) {
  validate_config(config);
  const std::size_t workers = checked_workers(options.workers);
  Staging staging(out_dir);
  const fs::path dir = staging.dir();

  auto target = std::make_shared<const gmm::GmmTarget>(make_target(config));
  const auto schedule = make_schedule(config);
  BuiltDenoiser built = build_denoiser(config, target, schedule, dir, options);
  const auto experiment = make_experiment(config, *target, built.denoiser, schedule, workers);
  const auto& sw = config.sweep;

  if (kind == SweepKind::kGuidance) {
    auto base = make_plan(config);
    base.sizes = sw.sizes;
    base.guidance.assign(sw.sizes.size(), 0.0);
    log(options, "guidance sweep over " + std::to_string(sw.guidance_grid.size()) + " values");
    const auto rows = evaluation::sweep_guidance(base, sw.guidance_grid, sw.seeds, experiment);
    CsvTable table({"g", "seed", "prefix", "images_per_class", "mean_accuracy", "stddev", "coverage"});
    std::map<std::pair<double, std::size_t>, std::pair<std::vector<double>, std::vector<double>>> agg;
    for (const auto& r : rows) {
      std::size_t ipc = 0;
      for (std::size_t i = 0; i < r.prefix; ++i) ipc += sw.sizes[i];
      table.add_row({format_double(r.g), to_text(r.seed, 0), to_text(r.prefix), to_text(ipc),
                     format_double(r.report.mean), format_double(r.report.stddev), format_double(r.coverage)});
      agg[{r.g, r.prefix}].first.push_back(r.report.mean);
      agg[{r.g, r.prefix}].second.push_back(r.coverage);
    }
    write_csv(dir / "sweep_guidance.csv", table);
    CsvTable summary({"g", "prefix", "mean_accuracy", "seed_stddev", "mean_coverage"});
    for (const auto& [key, vals] : agg) {
      const auto acc = evaluation::EvalReport::from_accuracies(vals.first);
      const auto cov = evaluation::EvalReport::from_accuracies(vals.second);
      summary.add_row({format_double(key.first), to_text(key.second), format_double(acc.mean),
                       format_double(acc.stddev), format_double(cov.mean)});
    }
    write_csv(dir / "sweep_guidance_summary.csv", summary);
  } else {
    log(options, "curricula sweep over " + std::to_string(sw.curricula_grid.size()) + " values");
    const auto rows = evaluation::sweep_curricula(make_plan(config), sw.budget, sw.curricula_grid, sw.seeds, experiment);
    CsvTable table({"curricula", "seed", "sizes", "mean_accuracy", "stddev", "coverage"});
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> agg;
    for (const auto& r : rows) {
      table.add_row({to_text(r.curricula), to_text(r.seed, 0), join_sizes(r.sizes), format_double(r.report.mean),
                     format_double(r.report.stddev), format_double(r.coverage)});
      agg[r.curricula].first.push_back(r.report.mean);
      agg[r.curricula].second.push_back(r.coverage);
    }
    write_csv(dir / "sweep_curricula.csv", table);
    CsvTable summary({"curricula", "mean_accuracy", "seed_stddev", "mean_coverage"});
    for (const auto& [nc, vals] : agg) {
      const auto acc = evaluation::EvalReport::from_accuracies(vals.first);
      const auto cov = evaluation::EvalReport::from_accuracies(vals.second);
      summary.add_row({to_text(nc), format_double(acc.mean), format_double(acc.stddev), format_double(cov.mean)});
    }
    write_csv(dir / "sweep_curricula_summary.csv", summary);
  }

  Manifest m;
  m.command = "sweep";
  m.args["kind"] = to_string(kind);
  m.config = config;
  m.denoiser = built.entry;
  m.files = hash_outputs(dir);
  write_manifest(dir, m, schedule);
  staging.commit();
  return RunSummary{staging.final_dir(), m.files, {}};
}

ReplayResult replay(const fs::path& manifest, const fs::path& out_dir, const RunOptions& options) {
  const Manifest m = read_manifest(manifest_path(manifest));
  if (normalized(out_dir) == normalized(manifest_path(manifest).parent_path()))
    throw ConfigError("replay output directory must differ from the recorded run");
  ReplayResult result;
  if (m.command == "distill") {
    result.summary = run_distill(m.config, out_dir, options);
  } else if (m.command == "eval") {
    const auto dataset = m.args.at("dataset");
    std::vector<std::size_t> ks;
    std::stringstream ss(m.args.at("prefixes"));
    for (std::string item; std::getline(ss, item, ',');) ks.push_back(parse_uint(item));
    if (load_dataset(dataset).content_hash != m.args.at("dataset_content_hash"))
      throw RuntimeError("input dataset " + dataset + " changed since the recorded evaluation");
    result.summary = run_eval(dataset, m.config, ks, out_dir, options);
  } else if (m.command == "sweep") {
    result.summary = run_sweep(sweep_kind_from_string(m.args.at("kind")), m.config, out_dir, options);
  } else {
    throw RuntimeError("manifest records unknown command '" + m.command + "'");
  }
  for (const auto& [name, digest] : m.files) {
    auto it = result.summary.files.find(name);
    if (it == result.summary.files.end() || it->second != digest) result.mismatches.push_back(name);
  }
  for (const auto& [name, digest] : result.summary.files)
    if (!m.files.contains(name)) result.mismatches.push_back(name);
  return result;
}

}  // namespace acs::io

// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/io/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "acs/errors.hpp"
#include "acs/io/csv.hpp"

namespace acs::io {
namespace {

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

// Re-raises contract violations found while validating a section as config
// errors pointing at that section.
template <typename Fn>
void at_line(int line, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    if (e.line() > 0) throw;
    throw ConfigError(e.what(), line);
  } catch (const ContractError& e) {
    throw ConfigError(e.what(), line);
  }
}

void require_map(const YAML::Node& node, const std::string& section) {
  if (!node.IsMap()) throw ConfigError("'" + section + "' must be a mapping", line_of(node));
}

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed, const std::string& section) {
  require_map(map, section);
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string key = it->first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in '" + section + "'", line_of(it->first));
  }
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

double as_double(const YAML::Node& node, const std::string& name) {
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) throw ConfigError(name + " must be finite", line_of(node));
    return v;
  } catch (const YAML::Exception&) {
    throw ConfigError(name + ": expected a number", line_of(node));
  }
}

std::uint64_t as_uint(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) throw ConfigError(name + ": expected a non-negative integer", line_of(node));
  try {
    return parse_uint(node.Scalar());
  } catch (const RuntimeError&) {
    throw ConfigError(name + ": expected a non-negative integer", line_of(node));
  }
}

bool as_bool(const YAML::Node& node, const std::string& name) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(name + ": expected true or false", line_of(node));
  }
}

std::string as_string(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) throw ConfigError(name + ": expected a string", line_of(node));
  return node.Scalar();
}

template <typename T, typename Conv>
std::vector<T> as_list(const YAML::Node& node, const std::string& name, Conv conv) {
  if (!node.IsSequence()) throw ConfigError(name + ": expected a list", line_of(node));
  std::vector<T> out;
  for (const auto& item : node) out.push_back(conv(item, name));
  return out;
}

std::vector<std::size_t> as_sizes(const YAML::Node& node, const std::string& name) {
  return as_list<std::size_t>(node, name, [](const YAML::Node& n, const std::string& nm) {
    return static_cast<std::size_t>(as_uint(n, nm));
  });
}

std::vector<double> as_doubles(const YAML::Node& node, const std::string& name) {
  return as_list<double>(node, name, as_double);
}

numeric::Activation as_activation(const YAML::Node& node, const std::string& name) {
  const std::string s = as_string(node, name);
  if (s == "relu") return numeric::Activation::kRelu;
  if (s == "tanh") return numeric::Activation::kTanh;
  throw ConfigError(name + ": activation must be 'relu' or 'tanh'", line_of(node));
}

void validate_hidden(const std::vector<std::size_t>& hidden, const std::string& name) {
  if (std::any_of(hidden.begin(), hidden.end(), [](std::size_t w) { return w == 0; }))
    throw ConfigError(name + ": hidden layer widths must be positive");
}

void read_optimizer(const YAML::Node& node, const std::string& section, numeric::OptimizerConfig& opt) {
  check_keys(node, {"learning_rate", "momentum", "steps", "batch_size", "seed"}, section);
  if (node["learning_rate"]) opt.learning_rate = as_double(node["learning_rate"], where(section, "learning_rate"));
  if (node["momentum"]) opt.momentum = as_double(node["momentum"], where(section, "momentum"));
  if (node["steps"]) opt.steps = as_uint(node["steps"], where(section, "steps"));
  if (node["batch_size"]) opt.batch_size = as_uint(node["batch_size"], where(section, "batch_size"));
  if (node["seed"]) opt.seed = as_uint(node["seed"], where(section, "seed"));
  at_line(line_of(node), [&] { opt.validate(); });
}

void read_network(const YAML::Node& node, const std::string& section, std::vector<std::size_t>& hidden,
                  numeric::Activation& activation, numeric::OptimizerConfig& opt) {
  if (node["hidden"]) {
    hidden = as_sizes(node["hidden"], where(section, "hidden"));
    at_line(line_of(node["hidden"]), [&] { validate_hidden(hidden, where(section, "hidden")); });
  }
  if (node["activation"]) activation = as_activation(node["activation"], where(section, "activation"));
  if (node["optimizer"]) read_optimizer(node["optimizer"], where(section, "optimizer"), opt);
}

gmm::Component read_component(const YAML::Node& node, std::size_t dimension, const std::string& name) {
  check_keys(node, {"weight", "mean", "stddev", "covariance"}, name);
  if (!node["mean"]) throw ConfigError(name + ": 'mean' is required", line_of(node));
  const double weight = node["weight"] ? as_double(node["weight"], name + ".weight") : 1.0;
  std::vector<double> mean = as_doubles(node["mean"], name + ".mean");
  if (mean.size() != dimension) throw ConfigError(name + ".mean: expected " + std::to_string(dimension) + " entries", line_of(node["mean"]));
  if (node["stddev"] && node["covariance"])
    throw ConfigError(name + ": give either 'stddev' or 'covariance', not both", line_of(node));
  if (node["covariance"]) {
    const YAML::Node cov = node["covariance"];
    if (!cov.IsSequence() || cov.size() != dimension)
      throw ConfigError(name + ".covariance: expected a " + std::to_string(dimension) + "x" + std::to_string(dimension) + " matrix", line_of(cov));
    gmm::Component c;
    c.weight = weight;
    c.mean = std::move(mean);
    for (const auto& row : cov) {
      const auto values = as_doubles(row, name + ".covariance");
      if (values.size() != dimension) throw ConfigError(name + ".covariance: row width mismatch", line_of(row));
      c.covariance.insert(c.covariance.end(), values.begin(), values.end());
    }
    return c;
  }
  const double stddev = node["stddev"] ? as_double(node["stddev"], name + ".stddev") : 1.0;
  return gmm::Component::isotropic(weight, std::move(mean), stddev);
}

void read_target(const YAML::Node& node, TargetSpec& spec) {
  check_keys(node, {"scenario", "dimension", "classes"}, "target");
  if (node["scenario"]) {
    if (node["dimension"] || node["classes"])
      throw ConfigError("target: 'scenario' cannot be combined with explicit 'dimension'/'classes'", line_of(node));
    spec = TargetSpec{};
    spec.scenario = as_string(node["scenario"], "target.scenario");
    at_line(line_of(node["scenario"]), [&] { gmm::builtin_scenario(spec.scenario); });
    return;
  }
  if (!node["dimension"] || !node["classes"])
    throw ConfigError("target: give either 'scenario' or both 'dimension' and 'classes'", line_of(node));
  spec.scenario.clear();
  spec.dimension = as_uint(node["dimension"], "target.dimension");
  if (spec.dimension == 0) throw ConfigError("target.dimension must be positive", line_of(node["dimension"]));
  const YAML::Node classes = node["classes"];
  if (!classes.IsSequence() || classes.size() == 0)
    throw ConfigError("target.classes: expected a non-empty list", line_of(classes));
  spec.classes.clear();
  std::size_t y = 0;
  for (const auto& cls : classes) {
    const std::string name = "target.classes[" + std::to_string(y) + "]";
    check_keys(cls, {"components"}, name);
    const YAML::Node comps = cls["components"];
    if (!comps || !comps.IsSequence() || comps.size() == 0)
      throw ConfigError(name + ".components: expected a non-empty list", line_of(cls));
    std::vector<gmm::Component> parsed;
    std::size_t k = 0;
    for (const auto& comp : comps)
      parsed.push_back(read_component(comp, spec.dimension, name + ".components[" + std::to_string(k++) + "]"));
    spec.classes.push_back(std::move(parsed));
    ++y;
  }
  at_line(line_of(node), [&] { gmm::GmmTarget(spec.dimension, spec.classes); });
}

void read_schedule(const YAML::Node& node, ScheduleSpec& spec) {
  check_keys(node, {"steps", "final_alpha_bar", "eta"}, "schedule");
  if (node["steps"]) spec.steps = as_uint(node["steps"], "schedule.steps");
  if (node["final_alpha_bar"]) spec.final_alpha_bar = as_double(node["final_alpha_bar"], "schedule.final_alpha_bar");
  if (node["eta"]) spec.eta = as_double(node["eta"], "schedule.eta");
  at_line(line_of(node), [&] { diffusion::NoiseSchedule::cosine(spec.steps, spec.final_alpha_bar, spec.eta); });
}

void read_denoiser(const YAML::Node& node, DenoiserSpec& spec) {
  check_keys(node, {"kind", "hidden", "activation", "train_per_class", "data_seed", "optimizer"}, "denoiser");
  if (node["kind"]) {
    const std::string kind = as_string(node["kind"], "denoiser.kind");
    if (kind == "analytic") spec.kind = DenoiserSource::kAnalytic;
    else if (kind == "learned") spec.kind = DenoiserSource::kLearned;
    else throw ConfigError("denoiser.kind must be 'analytic' or 'learned'", line_of(node["kind"]));
  }
  read_network(node, "denoiser", spec.hidden, spec.activation, spec.optimizer);
  if (node["train_per_class"]) spec.train_per_class = as_uint(node["train_per_class"], "denoiser.train_per_class");
  if (spec.train_per_class == 0) throw ConfigError("denoiser.train_per_class must be positive", line_of(node));
  if (node["data_seed"]) spec.data_seed = as_uint(node["data_seed"], "denoiser.data_seed");
}

void read_plan(const YAML::Node& node, PlanSpec& spec) {
  check_keys(node, {"sizes", "guidance", "guidance_per_curriculum", "seed", "gradient_through_denoiser"}, "plan");
  if (node["sizes"]) spec.sizes = as_sizes(node["sizes"], "plan.sizes");
  if (node["guidance"]) spec.guidance = as_double(node["guidance"], "plan.guidance");
  if (node["guidance_per_curriculum"])
    spec.guidance_per_curriculum = as_doubles(node["guidance_per_curriculum"], "plan.guidance_per_curriculum");
  if (node["seed"]) spec.seed = as_uint(node["seed"], "plan.seed");
  if (node["gradient_through_denoiser"])
    spec.gradient_through_denoiser = as_bool(node["gradient_through_denoiser"], "plan.gradient_through_denoiser");
}

void read_discriminator(const YAML::Node& node, adversary::DiscriminatorConfig& spec) {
  check_keys(node, {"hidden", "activation", "optimizer"}, "discriminator");
  read_network(node, "discriminator", spec.hidden, spec.activation, spec.optimizer);
}

void read_evaluation(const YAML::Node& node, EvaluationSpec& spec) {
  check_keys(node, {"repetitions", "test_per_class", "seed", "coverage_radius", "oracle_train_per_class",
                    "scatter_real_per_class", "fidelity_bound", "classifier"},
             "evaluation");
  if (node["repetitions"]) spec.eval.repetitions = as_uint(node["repetitions"], "evaluation.repetitions");
  if (node["test_per_class"]) spec.eval.test_per_class = as_uint(node["test_per_class"], "evaluation.test_per_class");
  if (node["seed"]) spec.eval.seed = as_uint(node["seed"], "evaluation.seed");
  if (node["coverage_radius"]) spec.coverage_radius = as_double(node["coverage_radius"], "evaluation.coverage_radius");
  if (node["oracle_train_per_class"])
    spec.oracle_train_per_class = as_uint(node["oracle_train_per_class"], "evaluation.oracle_train_per_class");
  if (node["scatter_real_per_class"])
    spec.scatter_real_per_class = as_uint(node["scatter_real_per_class"], "evaluation.scatter_real_per_class");
  if (node["fidelity_bound"]) spec.fidelity_bound = as_double(node["fidelity_bound"], "evaluation.fidelity_bound");
  if (node["classifier"]) {
    const YAML::Node c = node["classifier"];
    check_keys(c, {"hidden", "activation", "optimizer"}, "evaluation.classifier");
    read_network(c, "evaluation.classifier", spec.eval.classifier.hidden, spec.eval.classifier.activation,
                 spec.eval.classifier.optimizer);
  }
}

void read_sweep(const YAML::Node& node, SweepSpec& spec) {
  check_keys(node, {"guidance_grid", "sizes", "curricula_grid", "budget", "seeds"}, "sweep");
  if (node["guidance_grid"]) spec.guidance_grid = as_doubles(node["guidance_grid"], "sweep.guidance_grid");
  if (node["sizes"]) spec.sizes = as_sizes(node["sizes"], "sweep.sizes");
  if (node["curricula_grid"]) spec.curricula_grid = as_sizes(node["curricula_grid"], "sweep.curricula_grid");
  if (node["budget"]) spec.budget = as_uint(node["budget"], "sweep.budget");
  if (node["seeds"])
    spec.seeds = as_list<std::uint64_t>(node["seeds"], "sweep.seeds", as_uint);
}

// Section-level invariants that are not checked while reading.
void validate_sections(const RunConfig& c, const YAML::Node* root) {
  auto line = [root](const char* key) { return root != nullptr && (*root)[key] ? line_of((*root)[key]) : 0; };
  at_line(line("plan"), [&] { make_plan(c).validate(); });
  at_line(line("discriminator"), [&] {
    validate_hidden(c.discriminator.hidden, "discriminator.hidden");
    c.discriminator.optimizer.validate();
  });
  at_line(line("denoiser"), [&] {
    validate_hidden(c.denoiser.hidden, "denoiser.hidden");
    c.denoiser.optimizer.validate();
    if (c.denoiser.train_per_class == 0) throw ConfigError("denoiser.train_per_class must be positive");
  });
  at_line(line("evaluation"), [&] {
    c.evaluation.eval.validate();
    validate_hidden(c.evaluation.eval.classifier.hidden, "evaluation.classifier.hidden");
    if (!(c.evaluation.coverage_radius > 0.0)) throw ConfigError("evaluation.coverage_radius must be positive");
    if (!(c.evaluation.fidelity_bound > 0.0)) throw ConfigError("evaluation.fidelity_bound must be positive");
    if (c.evaluation.oracle_train_per_class == 0)
      throw ConfigError("evaluation.oracle_train_per_class must be positive");
  });
  at_line(line("sweep"), [&] {
    const auto& s = c.sweep;
    if (s.guidance_grid.empty()) throw ConfigError("sweep.guidance_grid must not be empty");
    for (double g : s.guidance_grid)
      if (!(g >= 0.0)) throw ConfigError("sweep.guidance_grid values must be non-negative");
    if (s.sizes.empty() || std::any_of(s.sizes.begin(), s.sizes.end(), [](std::size_t n) { return n == 0; }))
      throw ConfigError("sweep.sizes must be a non-empty list of positive counts");
    if (s.curricula_grid.empty()) throw ConfigError("sweep.curricula_grid must not be empty");
    for (std::size_t nc : s.curricula_grid) evaluation::prefix_split(s.budget, nc);
    if (s.seeds.empty()) throw ConfigError("sweep.seeds must not be empty");
  });
  at_line(line("schedule"), [&] { make_schedule(c); });
  at_line(line("target"), [&] { make_target(c); });
}

// --- emission -----------------------------------------------------------

void emit_optimizer(YAML::Emitter& out, const numeric::OptimizerConfig& o) {
  out << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "learning_rate" << YAML::Value << format_double(o.learning_rate);
  out << YAML::Key << "momentum" << YAML::Value << format_double(o.momentum);
  out << YAML::Key << "steps" << YAML::Value << o.steps;
  out << YAML::Key << "batch_size" << YAML::Value << o.batch_size;
  out << YAML::Key << "seed" << YAML::Value << o.seed;
  out << YAML::EndMap;
}

void emit_network(YAML::Emitter& out, const std::vector<std::size_t>& hidden, numeric::Activation act,
                  const numeric::OptimizerConfig& opt) {
  out << YAML::Key << "hidden" << YAML::Value << YAML::Flow << hidden;
  out << YAML::Key << "activation" << YAML::Value << std::string(numeric::to_string(act));
  emit_optimizer(out, opt);
}

void emit_doubles(YAML::Emitter& out, const std::vector<double>& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) out << format_double(v);
  out << YAML::EndSeq;
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("malformed YAML: " + e.msg, e.mark.line + 1);
  }
  RunConfig config = default_config();
  if (root.IsNull()) throw ConfigError("configuration is empty");
  try {
    check_keys(root, {"schema_version", "target", "schedule", "denoiser", "plan", "discriminator", "evaluation", "sweep"},
               "<root>");
    if (!root["schema_version"]) throw ConfigError("'schema_version' is required", line_of(root));
    const std::uint64_t version = as_uint(root["schema_version"], "schema_version");
    if (version != kConfigSchemaVersion)
      throw ConfigError("unsupported schema_version " + std::to_string(version) + " (expected " +
                            std::to_string(kConfigSchemaVersion) + ")",
                        line_of(root["schema_version"]));
    if (root["target"]) read_target(root["target"], config.target);
    if (root["schedule"]) read_schedule(root["schedule"], config.schedule);
    if (root["denoiser"]) read_denoiser(root["denoiser"], config.denoiser);
    if (root["plan"]) read_plan(root["plan"], config.plan);
    if (root["discriminator"]) read_discriminator(root["discriminator"], config.discriminator);
    if (root["evaluation"]) read_evaluation(root["evaluation"], config.evaluation);
    if (root["sweep"]) read_sweep(root["sweep"], config.sweep);
  } catch (const YAML::Exception& e) {
    throw ConfigError("invalid configuration: " + e.msg, e.mark.is_null() ? 0 : e.mark.line + 1);
  }
  validate_sections(config, &root);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open configuration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const RunConfig& config) { validate_sections(config, nullptr); }

std::string emit_config(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kConfigSchemaVersion;

  out << YAML::Key << "target" << YAML::Value << YAML::BeginMap;
  if (!c.target.scenario.empty()) {
    out << YAML::Key << "scenario" << YAML::Value << c.target.scenario;
  } else {
    out << YAML::Key << "dimension" << YAML::Value << c.target.dimension;
    out << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
    for (const auto& cls : c.target.classes) {
      out << YAML::BeginMap << YAML::Key << "components" << YAML::Value << YAML::BeginSeq;
      for (const auto& comp : cls) {
        out << YAML::BeginMap;
        out << YAML::Key << "weight" << YAML::Value << format_double(comp.weight);
        out << YAML::Key << "mean" << YAML::Value;
        emit_doubles(out, comp.mean);
        out << YAML::Key << "covariance" << YAML::Value << YAML::BeginSeq;
        const std::size_t d = comp.mean.size();
        for (std::size_t i = 0; i < d; ++i)
          emit_doubles(out, std::vector<double>(comp.covariance.begin() + static_cast<std::ptrdiff_t>(i * d),
                                                comp.covariance.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)));
        out << YAML::EndSeq << YAML::EndMap;
      }
      out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "steps" << YAML::Value << c.schedule.steps;
  out << YAML::Key << "final_alpha_bar" << YAML::Value << format_double(c.schedule.final_alpha_bar);
  out << YAML::Key << "eta" << YAML::Value << format_double(c.schedule.eta);
  out << YAML::EndMap;

  out << YAML::Key << "denoiser" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value
      << (c.denoiser.kind == DenoiserSource::kAnalytic ? "analytic" : "learned");
  emit_network(out, c.denoiser.hidden, c.denoiser.activation, c.denoiser.optimizer);
  out << YAML::Key << "train_per_class" << YAML::Value << c.denoiser.train_per_class;
  out << YAML::Key << "data_seed" << YAML::Value << c.denoiser.data_seed;
  out << YAML::EndMap;

  out << YAML::Key << "plan" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "sizes" << YAML::Value << YAML::Flow << c.plan.sizes;
  out << YAML::Key << "guidance" << YAML::Value << format_double(c.plan.guidance);
  out << YAML::Key << "guidance_per_curriculum" << YAML::Value;
  emit_doubles(out, c.plan.guidance_per_curriculum);
  out << YAML::Key << "seed" << YAML::Value << c.plan.seed;
  out << YAML::Key << "gradient_through_denoiser" << YAML::Value << c.plan.gradient_through_denoiser;
  out << YAML::EndMap;

  out << YAML::Key << "discriminator" << YAML::Value << YAML::BeginMap;
  emit_network(out, c.discriminator.hidden, c.discriminator.activation, c.discriminator.optimizer);
  out << YAML::EndMap;

  out << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "repetitions" << YAML::Value << c.evaluation.eval.repetitions;
  out << YAML::Key << "test_per_class" << YAML::Value << c.evaluation.eval.test_per_class;
  out << YAML::Key << "seed" << YAML::Value << c.evaluation.eval.seed;
  out << YAML::Key << "coverage_radius" << YAML::Value << format_double(c.evaluation.coverage_radius);
  out << YAML::Key << "oracle_train_per_class" << YAML::Value << c.evaluation.oracle_train_per_class;
  out << YAML::Key << "scatter_real_per_class" << YAML::Value << c.evaluation.scatter_real_per_class;
  out << YAML::Key << "fidelity_bound" << YAML::Value << format_double(c.evaluation.fidelity_bound);
  out << YAML::Key << "classifier" << YAML::Value << YAML::BeginMap;
  emit_network(out, c.evaluation.eval.classifier.hidden, c.evaluation.eval.classifier.activation,
               c.evaluation.eval.classifier.optimizer);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "guidance_grid" << YAML::Value;
  emit_doubles(out, c.sweep.guidance_grid);
  out << YAML::Key << "sizes" << YAML::Value << YAML::Flow << c.sweep.sizes;
  out << YAML::Key << "curricula_grid" << YAML::Value << YAML::Flow << c.sweep.curricula_grid;
  out << YAML::Key << "budget" << YAML::Value << c.sweep.budget;
  out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << c.sweep.seeds;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

gmm::GmmTarget make_target(const RunConfig& config) {
  if (!config.target.scenario.empty()) return gmm::builtin_scenario(config.target.scenario);
  return gmm::GmmTarget(config.target.dimension, config.target.classes);
}

diffusion::NoiseSchedule make_schedule(const RunConfig& config) {
  return diffusion::NoiseSchedule::cosine(config.schedule.steps, config.schedule.final_alpha_bar, config.schedule.eta);
}

curriculum::CurriculumPlan make_plan(const RunConfig& config) {
  curriculum::CurriculumPlan plan = curriculum::CurriculumPlan::with_global_guidance(
      config.plan.sizes, config.plan.guidance, config.plan.seed, config.discriminator);
  if (!config.plan.guidance_per_curriculum.empty()) plan.guidance = config.plan.guidance_per_curriculum;
  plan.gradient_through_denoiser = config.plan.gradient_through_denoiser;
  return plan;
}

}  // namespace acs::io

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modalshift/city.hpp"
#include "modalshift/competition.hpp"
#include "modalshift/los.hpp"
#include "modalshift/mode_choice.hpp"
#include "modalshift/population.hpp"
#include "modalshift/report.hpp"
#include "modalshift/residential.hpp"
#include "modalshift/scenario.hpp"

namespace modalshift {

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t n_households = 1000;
  std::filesystem::path city;
  std::filesystem::path survey;
  std::filesystem::path population;  // empty: built-in defaults
  std::filesystem::path tariffs;
  std::filesystem::path expert_matrix;
  std::filesystem::path scenario;  // optional default for the scenario command
  GAParams ga;
  CompetitionParams competition;
  std::filesystem::path output_dir = "out";
  unsigned workers = 1;

  /// n > 0, parameter checks, and every referenced path exists.
  void validate() const;
};

/// Relative paths are resolved against `base_dir`.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Hash of everything that affects results; the worker count and output
/// directory are excluded. Input files enter by content.
std::string config_hash(const RunConfig& config);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

struct RunInputs {
  CityModel city;
  SurveySummary survey;
  PopulationConfig population;
  TariffConfig tariffs;
  ExpertScoreMatrix matrix;
};
RunInputs load_inputs(const RunConfig& config);

struct PipelineParams {
  GAParams ga;
  CompetitionParams competition;
  TariffConfig tariffs;
  ExpertScoreMatrix matrix;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};
PipelineParams pipeline_params(const RunConfig& config, const RunInputs& inputs);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunOutputs {
  std::vector<AlternativeSet> alternatives;  // by household index
  PeriodPlan plan;
  AllocationResult allocation;
  std::vector<std::optional<ModeDecision>> decisions;  // by worker index; empty when unhoused
  std::vector<WorkerOutcome> outcomes;                 // by worker index
  std::vector<StageTiming> timings;
};

/// Residential choice, competition and mode choice on a fixed population.
/// Every random draw comes from a sub-stream of params.seed keyed by agent
/// identity, so results do not depend on the worker count and a second run
/// on a changed city reuses the same draws.
RunOutputs run_pipeline(const CityModel& city, const Population& population, const PipelineParams& params);

struct ScenarioResult {
  CityModel city;
  RunOutputs outputs;
  ShiftReport report;
};

/// Re-runs the pipeline on the scenario city with the baseline's population
/// and seeds, and diffs against `baseline`.
ScenarioResult run_scenario(const CityModel& baseline_city, const Population& population,
                            const RunOutputs& baseline, const ScenarioSpec& spec,
                            const PipelineParams& params);

struct ManifestFile {
  std::string name;
  std::string checksum;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string command;
  std::vector<StageTiming> timings;
  std::vector<ManifestFile> files;
};

std::string serialize_manifest(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view json_text);

/// Writes `content` to dir/name and records it in the manifest.
void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& content,
                  RunManifest& manifest);

}  // namespace modalshift

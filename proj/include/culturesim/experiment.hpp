#pragma once

// Batch experiments: presets, JSON configuration, parallel execution of
// (cell, run) jobs and CSV/manifest output.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "culturesim/metrics.hpp"
#include "culturesim/world.hpp"

namespace culturesim {

enum class Preset : std::uint8_t { Exp1Sweep, Exp2SR, Exp3Chaining, Custom };

std::string_view preset_name(Preset p);  // "exp1", "exp2", "exp3", "custom"
Preset parse_preset(std::string_view name);

struct ExperimentSpec {
  Preset preset = Preset::Custom;
  std::vector<double> c_values;  // EXP1 grid
  std::vector<double> p_values;
  int runs_per_cell = 100;
  WorldConfig world;
  std::filesystem::path output_dir = "culturesim_out";

  /// Throws ConfigError naming the field.
  void validate() const;
};

/// Desk-scale preset: 25 runs, EXP1 over a 10x10 grid with tau = 35.1,
/// EXP2/EXP3 with everyone creating at p = 0.5 in both arms.
ExperimentSpec preset_spec(Preset preset);

/// Parses a JSON config. Keys: preset, runs_per_cell, output_dir,
/// grid {C, p}, world {...}. Unknown keys, wrong types and out-of-range
/// values throw ConfigError naming the field.
ExperimentSpec parse_config(std::string_view json_text);
ExperimentSpec load_config(const std::filesystem::path& path);

/// Every field, defaults included, as pretty-printed JSON.
std::string effective_config(const ExperimentSpec& spec);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string digest_hex(std::string_view text);

/// Worker count from CULTURESIM_WORKERS, else the hardware concurrency.
std::size_t workers_from_env();

struct ExperimentResult {
  std::vector<std::filesystem::path> files;  // relative to output_dir, manifest excluded
  std::string config_digest;
  std::vector<SurfaceRow> surface;  // EXP1
  AveragedSeries series;            // CUSTOM, and the SR arm for EXP2/EXP3
  AveragedSeries series_no_sr;      // EXP2/EXP3
};

/// Runs one (config, run_index) job; defaults to world::run.
using JobRunner = std::function<RunSeries(const WorldConfig&, std::uint64_t,
                                          std::shared_ptr<const TemplateSet>)>;

/// Runs every job, writes outputs atomically and a manifest. Output bytes do
/// not depend on `workers`. A failing job is retried once; a second failure
/// writes a manifest with status "failed" and throws.
ExperimentResult execute(const ExperimentSpec& spec, std::size_t workers,
                         const JobRunner& runner = {});

/// Same jobs and aggregation as execute() without touching the filesystem.
ExperimentResult compute(const ExperimentSpec& spec, std::size_t workers,
                         const JobRunner& runner = {});

std::string series_csv(const AveragedSeries& s);
std::string surface_csv(const std::vector<SurfaceRow>& rows);

/// Per-iteration mean fitness read back from a series CSV.
std::vector<double> read_series_fitness(const std::filesystem::path& path);

struct SeriesAnalysis {
  TimeToThreshold ttt;
  double log10_ttt = 0.0;
  double npv = 0.0;
  bool has_piv = false;
  double piv = 0.0;
};

SeriesAnalysis analyze_series(const std::vector<double>& fitness, double tau,
                              double interest_percent, const std::vector<double>* baseline);

}  // namespace culturesim

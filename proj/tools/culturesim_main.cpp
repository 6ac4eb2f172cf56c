#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "culturesim/experiment.hpp"
#include "culturesim/fitness.hpp"

using namespace culturesim;

namespace {

int run_spec(const ExperimentSpec& spec) {
  const auto workers = workers_from_env();
  const auto result = execute(spec, workers);
  std::cout << "wrote";
  for (const auto& f : result.files) std::cout << ' ' << (spec.output_dir / f).string();
  std::cout << ' ' << (spec.output_dir / "manifest.json").string() << '\n';
  std::cout << "config digest " << result.config_digest << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"culturesim: lattice simulations of creation, imitation and social regulation"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  run_cmd->add_option("config", config_path, "Config file")->required();

  struct PresetArgs {
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
  };
  PresetArgs preset_args;
  const std::pair<const char*, Preset> presets[] = {
      {"exp1", Preset::Exp1Sweep}, {"exp2", Preset::Exp2SR}, {"exp3", Preset::Exp3Chaining}};
  const char* blurbs[] = {"(C, p) sweep: time to threshold and PIV surface",
                          "Social regulation on/off, single-step fitness",
                          "Social regulation on/off, chained actions under templates"};
  std::vector<std::pair<CLI::App*, Preset>> preset_cmds;
  for (std::size_t k = 0; k < 3; ++k) {
    auto* cmd = app.add_subcommand(presets[k].first, blurbs[k]);
    cmd->add_option("--runs", preset_args.runs, "Runs per cell")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", preset_args.seed, "Base seed");
    cmd->add_option("--out", preset_args.out, "Output directory");
    preset_cmds.emplace_back(cmd, presets[k].second);
  }

  std::string series_path, baseline_path;
  double tau = 9.0, rate = 0.0;
  auto* analyze_cmd = app.add_subcommand("analyze", "TTT, NPV and PIV of a stored series CSV");
  analyze_cmd->add_option("series", series_path, "Series CSV")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--tau", tau, "Fitness threshold")->required();
  analyze_cmd->add_option("--rate", rate, "Interest rate in percent per iteration")->required();
  analyze_cmd->add_option("--baseline", baseline_path, "All-creators series CSV for PIV")
      ->check(CLI::ExistingFile);

  std::string templates_path;
  auto* vt_cmd = app.add_subcommand("validate-templates", "Check a template JSON file");
  vt_cmd->add_option("file", templates_path, "Template file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_spec(load_config(config_path));

    for (const auto& [cmd, preset] : preset_cmds) {
      if (!*cmd) continue;
      ExperimentSpec spec = preset_spec(preset);
      if (preset_args.runs) spec.runs_per_cell = *preset_args.runs;
      if (preset_args.seed) spec.world.base_seed = *preset_args.seed;
      if (preset_args.out) spec.output_dir = *preset_args.out;
      return run_spec(spec);
    }

    if (*analyze_cmd) {
      const auto series = read_series_fitness(series_path);
      std::optional<std::vector<double>> baseline;
      if (!baseline_path.empty()) baseline = read_series_fitness(baseline_path);
      const auto a = analyze_series(series, tau, rate, baseline ? &*baseline : nullptr);
      std::printf("iterations %zu\n", series.size());
      std::printf("ttt %d%s\n", a.ttt.iterations, a.ttt.censored ? " (censored)" : "");
      std::printf("log10_ttt %.17g\n", a.log10_ttt);
      std::printf("npv %.17g\n", a.npv);
      if (a.has_piv) std::printf("piv %.17g\n", a.piv);
      return 0;
    }

    if (*vt_cmd) {
      const auto ts = load_template_file(templates_path);
      std::size_t matched = 0;
      for (const auto& d : all_subactions()) matched += ts.any_match(d) ? 1 : 0;
      std::printf("ok: %zu templates, %zu of 729 sub-actions matched\n", ts.size(), matched);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

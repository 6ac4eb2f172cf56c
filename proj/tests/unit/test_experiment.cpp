#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "culturesim/experiment.hpp"

using namespace culturesim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "culturesim_unit" / name;
  fs::remove_all(dir);
  return dir;
}

ExperimentSpec tiny(Preset preset) {
  auto s = preset_spec(preset);
  s.runs_per_cell = 3;
  s.world.lattice_side = 8;
  s.world.iterations = 12;
  if (preset == Preset::Exp1Sweep) s.c_values = s.p_values = {0.5, 1.0};
  return s;
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const auto s = parse_config("{}");
  CHECK(s.preset == Preset::Custom);
  CHECK(s.world.lattice_side == 32);
  CHECK(s.world.iterations == 100);
  CHECK(s.world.base_seed == 0);
  CHECK(s.runs_per_cell == 100);
}

TEST_CASE("config errors name the field") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"preset":"exp1","grid":{"C":[0.2,1.5],"p":[0.5]}})"),
                       doctest::Contains("grid.C[1]"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"runs":5})"), doctest::Contains("runs: unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"world":{"latice_side":5}})"),
                       doctest::Contains("world.latice_side"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"world":{"lattice_side":"big"}})"),
                       doctest::Contains("world.lattice_side"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"world":{"creator_fraction":2}})"),
                       doctest::Contains("world.creator_fraction"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"world":{"base_seed":-1}})"),
                       doctest::Contains("world.base_seed"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"runs_per_cell":0})"), doctest::Contains("runs_per_cell"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"preset":"exp9"})"), doctest::Contains("preset"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"preset":"exp2","world":{"chaining_enabled":true}})"),
                       doctest::Contains("world.chaining_enabled"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"preset":"exp3","world":{"fitness_regime":"single_step"}})"),
                       doctest::Contains("world.fitness_regime"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"preset":"exp2","world":{"sr_enabled":true}})"),
                       doctest::Contains("world.sr_enabled"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"grid":{"C":[0.5],"p":[0.5]}})"), doctest::Contains("grid"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[1,2"), doctest::Contains("invalid JSON"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("presets") {
  const auto e2 = preset_spec(Preset::Exp2SR);
  CHECK(e2.world.fitness_regime == FitnessRegime::SingleStep);
  CHECK_FALSE(e2.world.chaining_enabled);
  CHECK(e2.runs_per_cell == 25);
  const auto e3 = preset_spec(Preset::Exp3Chaining);
  CHECK(e3.world.fitness_regime == FitnessRegime::Template);
  CHECK(e3.world.chaining_enabled);
  const auto e1 = preset_spec(Preset::Exp1Sweep);
  CHECK(e1.c_values.size() == 10);
  CHECK(e1.world.tau == 35.1);
  for (auto p : {Preset::Exp1Sweep, Preset::Exp2SR, Preset::Exp3Chaining, Preset::Custom}) {
    CHECK(parse_preset(preset_name(p)) == p);
    CHECK_NOTHROW(preset_spec(p).validate());
  }
}

TEST_CASE("effective config round trips and is stable") {
  auto s = tiny(Preset::Exp1Sweep);
  s.world.base_seed = 18446744073709551615ULL;
  const auto text = effective_config(s);
  CHECK(effective_config(parse_config(text)) == text);
  CHECK(digest_hex(text) == digest_hex(effective_config(parse_config(text))));
  CHECK(digest_hex("") == "cbf29ce484222325");
  CHECK(digest_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("exp1 writes one surface and a manifest") {
  auto s = tiny(Preset::Exp1Sweep);
  s.output_dir = scratch("exp1");
  const auto r = execute(s, 2);
  CHECK(r.surface.size() == 4);
  const auto csv = slurp(s.output_dir / "surface.csv");
  CHECK(csv.rfind("C,p,runs,mean_ttt_log10,censored_count,mean_piv\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(r.surface.back().mean_piv == 0.0);
  const auto manifest = slurp(s.output_dir / "manifest.json");
  CHECK(manifest.find(digest_hex(slurp(s.output_dir / "config.json"))) != std::string::npos);
  CHECK(manifest.find("surface.csv") != std::string::npos);
  CHECK(manifest.find("\"complete\"") != std::string::npos);
}

TEST_CASE("exp1 adds the baseline when the grid lacks it") {
  auto s = tiny(Preset::Exp1Sweep);
  s.c_values = {0.5};
  s.p_values = {0.5};
  const auto r = compute(s, 1);
  REQUIRE(r.surface.size() == 1);
  CHECK(r.surface[0].creator_fraction == 0.5);
}

TEST_CASE("paired presets write two series") {
  for (auto p : {Preset::Exp2SR, Preset::Exp3Chaining}) {
    auto s = tiny(p);
    s.output_dir = scratch(std::string(preset_name(p)));
    const auto r = execute(s, 1);
    const auto on = slurp(s.output_dir / "series_sr_on.csv");
    const auto off = slurp(s.output_dir / "series_sr_off.csv");
    CHECK(on.rfind("iter,mean_fitness,diversity,frac_low,frac_mid,frac_high\n", 0) == 0);
    CHECK(std::count(on.begin(), on.end(), '\n') == 13);
    CHECK(on != off);
    // shared seeds: the first iteration is identical in both arms
    CHECK(r.series.mean_fitness[0] == r.series_no_sr.mean_fitness[0]);
  }
}

TEST_CASE("worker count never changes output bytes") {
  for (auto p : {Preset::Exp1Sweep, Preset::Exp2SR, Preset::Custom}) {
    auto s = tiny(p);
    s.world.iterations = 8;
    if (p == Preset::Custom) s.runs_per_cell = 5;
    const auto one = scratch("w1"), three = scratch("w3");
    s.output_dir = one;
    const auto a = execute(s, 1);
    s.output_dir = three;
    execute(s, 3);
    for (const auto& f : a.files)
      if (f.extension() == ".csv") CHECK(slurp(one / f) == slurp(three / f));
  }
}

TEST_CASE("csv uses 17 significant digits") {
  AveragedSeries s;
  s.mean_fitness = {0.1};
  s.diversity = {1.0 / 3.0};
  s.segregation = {Segregation{0.0, 1.0, 0.0}};
  CHECK(series_csv(s) == "iter,mean_fitness,diversity,frac_low,frac_mid,frac_high\n"
                         "1,0.10000000000000001,0.33333333333333331,0,0,1\n");
}

TEST_CASE("series analysis from CSV") {
  const auto dir = scratch("analyze");
  fs::create_directories(dir);
  AveragedSeries s;
  s.mean_fitness = {1, 5, 9, 12};
  s.diversity = {1, 1, 1, 1};
  s.segregation.assign(4, Segregation{});
  {
    std::ofstream(dir / "s.csv") << series_csv(s);
  }
  const auto f = read_series_fitness(dir / "s.csv");
  CHECK(f == std::vector<double>{1, 5, 9, 12});
  const auto a = analyze_series(f, 9.0, 0.0, &f);
  CHECK(a.ttt.iterations == 3);
  CHECK(a.npv == 27.0);
  CHECK(a.piv == 0.0);
  {
    std::ofstream(dir / "bad.csv") << "x,y\n1,2\n";
  }
  CHECK_THROWS_AS(read_series_fitness(dir / "bad.csv"), ParameterError);
}

TEST_CASE("worker count from the environment") {
  setenv("CULTURESIM_WORKERS", "3", 1);
  CHECK(workers_from_env() == 3);
  setenv("CULTURESIM_WORKERS", "zero", 1);
  CHECK_THROWS_AS(workers_from_env(), ConfigError);
  unsetenv("CULTURESIM_WORKERS");
  CHECK(workers_from_env() >= 1);
}

TEST_CASE("a job that fails once is retried from its seed") {
  auto s = tiny(Preset::Exp2SR);
  std::atomic<int> failures{0};
  const JobRunner flaky = [&](const WorldConfig& cfg, std::uint64_t k,
                              std::shared_ptr<const TemplateSet> t) {
    if (k == 1 && failures.fetch_add(1) == 0) throw std::runtime_error("transient");
    return run(cfg, k, std::move(t));
  };
  const auto a = compute(s, 2, flaky);
  const auto b = compute(s, 1);
  CHECK(failures.load() >= 1);
  CHECK(a.series.mean_fitness == b.series.mean_fitness);
  CHECK(a.series_no_sr.mean_fitness == b.series_no_sr.mean_fitness);
}

TEST_CASE("a job that fails twice aborts with a failed manifest") {
  auto s = tiny(Preset::Exp2SR);
  s.output_dir = scratch("failing");
  const JobRunner broken = [](const WorldConfig& cfg, std::uint64_t k,
                              std::shared_ptr<const TemplateSet> t) {
    if (k == 2) throw std::runtime_error("persistent");
    return run(cfg, k, std::move(t));
  };
  CHECK_THROWS_WITH(execute(s, 2, broken), doctest::Contains("failed twice"));
  const auto manifest = slurp(s.output_dir / "manifest.json");
  CHECK(manifest.find("\"failed\"") != std::string::npos);
  CHECK(manifest.find("persistent") != std::string::npos);
  CHECK_FALSE(fs::exists(s.output_dir / "series_sr_on.csv"));
  CHECK(fs::exists(s.output_dir / "config.json"));
}

TEST_CASE("a missing template file fails cleanly") {
  auto s = tiny(Preset::Exp3Chaining);
  s.world.templates_path = "/nonexistent/templates.json";
  s.output_dir = scratch("missing_templates");
  CHECK_THROWS(execute(s, 1));
  CHECK(slurp(s.output_dir / "manifest.json").find("\"failed\"") != std::string::npos);
}

#include "culturesim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace culturesim {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

const Json& expect(const Json& j, const std::string& field, bool ok, const char* type) {
  if (!ok) fail(field, std::string("expected ") + type);
  return j;
}

double get_real(const Json& j, const std::string& field) {
  expect(j, field, j.is_number(), "a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

long long get_int(const Json& j, const std::string& field) {
  expect(j, field, j.is_number_integer(), "an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    fail(field, "out of range");
  return j.get<long long>();
}

bool get_bool(const Json& j, const std::string& field) {
  expect(j, field, j.is_boolean(), "true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& field) {
  expect(j, field, j.is_string(), "a string");
  return j.get<std::string>();
}

std::vector<double> get_reals(const Json& j, const std::string& field) {
  expect(j, field, j.is_array(), "an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(get_real(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

std::string_view regime_name(FitnessRegime r) {
  return r == FitnessRegime::SingleStep ? "single_step" : "template";
}

std::string_view gate_name(ChainGate g) {
  return g == ChainGate::AnyTemplate ? "any_template" : "acceptable";
}

void apply_world(WorldConfig& w, const Json& j) {
  expect(j, "world", j.is_object(), "an object");
  for (const auto& [key, v] : j.items()) {
    const std::string f = "world." + key;
    if (key == "lattice_side") {
      const auto n = get_int(v, f);
      if (n < 2 || n > 4096) fail(f, "must lie in [2, 4096]");
      w.lattice_side = static_cast<int>(n);
    } else if (key == "iterations") {
      const auto n = get_int(v, f);
      if (n < 1 || n > 1000000) fail(f, "must lie in [1, 1000000]");
      w.iterations = static_cast<int>(n);
    } else if (key == "creator_fraction") {
      w.creator_fraction = get_real(v, f);
    } else if (key == "creator_creativity") {
      w.creator_creativity = get_real(v, f);
    } else if (key == "sr_enabled") {
      w.sr_enabled = get_bool(v, f);
    } else if (key == "chaining_enabled") {
      w.chaining_enabled = get_bool(v, f);
    } else if (key == "fitness_regime") {
      const auto s = get_string(v, f);
      if (s == "single_step") w.fitness_regime = FitnessRegime::SingleStep;
      else if (s == "template") w.fitness_regime = FitnessRegime::Template;
      else fail(f, "must be \"single_step\" or \"template\"");
    } else if (key == "trend_learning") {
      w.trend_learning = get_bool(v, f);
    } else if (key == "tau") {
      w.tau = get_real(v, f);
    } else if (key == "max_chain_length") {
      const auto n = get_int(v, f);
      if (n < 1 || n > 1000000) fail(f, "must lie in [1, 1000000]");
      w.max_chain_length = static_cast<std::size_t>(n);
    } else if (key == "chain_gate") {
      const auto s = get_string(v, f);
      if (s == "any_template") w.chain_gate = ChainGate::AnyTemplate;
      else if (s == "acceptable") w.chain_gate = ChainGate::AcceptableOnly;
      else fail(f, "must be \"any_template\" or \"acceptable\"");
    } else if (key == "base_seed") {
      expect(v, f, v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
             "a non-negative integer");
      w.base_seed = v.get<std::uint64_t>();
    } else if (key == "templates_path") {
      w.templates_path = get_string(v, f);
    } else {
      fail(f, "unknown key");
    }
  }
}

Json world_json(const WorldConfig& w) {
  Json j;
  j["lattice_side"] = w.lattice_side;
  j["iterations"] = w.iterations;
  j["creator_fraction"] = w.creator_fraction;
  j["creator_creativity"] = w.creator_creativity;
  j["sr_enabled"] = w.sr_enabled;
  j["chaining_enabled"] = w.chaining_enabled;
  j["fitness_regime"] = regime_name(w.fitness_regime);
  j["trend_learning"] = w.trend_learning;
  j["tau"] = w.tau;
  j["max_chain_length"] = w.max_chain_length;
  j["chain_gate"] = gate_name(w.chain_gate);
  j["base_seed"] = w.base_seed;
  j["templates_path"] = w.templates_path;
  return j;
}

void check_world(const WorldConfig& w) {
  try {
    w.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("world.") + e.what());
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << bytes;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

struct Group {
  WorldConfig cfg;
};

struct Plan {
  std::vector<Group> groups;
  std::size_t runs = 0;
  std::vector<std::size_t> surface_groups;  // EXP1 cells in output order
  std::size_t baseline_group = 0;
};

Plan make_plan(const ExperimentSpec& spec) {
  Plan plan;
  plan.runs = static_cast<std::size_t>(spec.runs_per_cell);
  switch (spec.preset) {
    case Preset::Exp1Sweep: {
      std::optional<std::size_t> corner;
      for (double c : spec.c_values) {
        for (double p : spec.p_values) {
          WorldConfig cfg = spec.world;
          cfg.creator_fraction = c;
          cfg.creator_creativity = p;
          if (c == 1.0 && p == 1.0) corner = plan.groups.size();
          plan.surface_groups.push_back(plan.groups.size());
          plan.groups.push_back({cfg});
        }
      }
      if (!corner) {
        WorldConfig cfg = spec.world;
        cfg.creator_fraction = 1.0;
        cfg.creator_creativity = 1.0;
        corner = plan.groups.size();
        plan.groups.push_back({cfg});
      }
      plan.baseline_group = *corner;
      break;
    }
    case Preset::Exp2SR:
    case Preset::Exp3Chaining: {
      WorldConfig on = spec.world;
      on.sr_enabled = true;
      WorldConfig off = spec.world;
      off.sr_enabled = false;
      plan.groups = {{on}, {off}};
      break;
    }
    case Preset::Custom:
      plan.groups = {{spec.world}};
      break;
  }
  return plan;
}

class JobFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::vector<RunSeries>> run_jobs(const Plan& plan, std::size_t workers,
                                             std::shared_ptr<const TemplateSet> templates,
                                             const JobRunner& runner) {
  const std::size_t total = plan.groups.size() * plan.runs;
  std::vector<std::vector<RunSeries>> results(plan.groups.size(),
                                              std::vector<RunSeries>(plan.runs));
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t g = job / plan.runs, k = job % plan.runs;
      for (int attempt = 0; attempt < 2; ++attempt) {
        try {
          results[g][k] = runner ? runner(plan.groups[g].cfg, k, templates)
                                 : run(plan.groups[g].cfg, k, templates);
          errors[job].clear();
          break;
        } catch (const std::exception& e) {
          errors[job] = e.what();
        }
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(total, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t job = 0; job < total; ++job)
    if (!errors[job].empty())
      throw JobFailure("job " + std::to_string(job) + " (group " +
                       std::to_string(job / plan.runs) + ", run " +
                       std::to_string(job % plan.runs) + ") failed twice: " + errors[job]);
  return results;
}

}  // namespace

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::Exp1Sweep: return "exp1";
    case Preset::Exp2SR: return "exp2";
    case Preset::Exp3Chaining: return "exp3";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

Preset parse_preset(std::string_view name) {
  if (name == "exp1") return Preset::Exp1Sweep;
  if (name == "exp2") return Preset::Exp2SR;
  if (name == "exp3") return Preset::Exp3Chaining;
  if (name == "custom") return Preset::Custom;
  fail("preset", "must be one of exp1, exp2, exp3, custom");
}

ExperimentSpec preset_spec(Preset preset) {
  ExperimentSpec s;
  s.preset = preset;
  if (preset == Preset::Custom) return s;
  s.runs_per_cell = 25;
  s.output_dir = std::string("culturesim_") + std::string(preset_name(preset));
  switch (preset) {
    case Preset::Exp1Sweep:
      for (int k = 1; k <= 10; ++k) {
        s.c_values.push_back(k / 10.0);
        s.p_values.push_back(k / 10.0);
      }
      s.world.tau = 35.1;
      break;
    case Preset::Exp2SR:
      s.world.creator_fraction = 1.0;
      s.world.creator_creativity = 0.5;
      break;
    case Preset::Exp3Chaining:
      s.world.creator_fraction = 1.0;
      s.world.creator_creativity = 0.5;
      s.world.fitness_regime = FitnessRegime::Template;
      s.world.chaining_enabled = true;
      s.world.chain_gate = ChainGate::AnyTemplate;
      s.world.max_chain_length = 1000;
      break;
    case Preset::Custom:
      break;
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (runs_per_cell < 1 || runs_per_cell > 100000) fail("runs_per_cell", "must lie in [1, 100000]");
  if (output_dir.empty()) fail("output_dir", "must not be empty");
  const auto check_grid = [](const std::vector<double>& v, const std::string& name) {
    if (v.empty()) fail(name, "must not be empty");
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!(v[k] >= 0.0 && v[k] <= 1.0))
        fail(name + "[" + std::to_string(k) + "]", "must lie in [0, 1]");
  };
  switch (preset) {
    case Preset::Exp1Sweep:
      check_grid(c_values, "grid.C");
      check_grid(p_values, "grid.p");
      if (world.sr_enabled) fail("world.sr_enabled", "exp1 runs without social regulation");
      for (double c : c_values) {
        WorldConfig w = world;
        w.creator_fraction = c;
        check_world(w);
      }
      return;
    case Preset::Exp2SR:
      if (world.fitness_regime != FitnessRegime::SingleStep)
        fail("world.fitness_regime", "exp2 requires \"single_step\"");
      if (world.chaining_enabled) fail("world.chaining_enabled", "exp2 requires false");
      break;
    case Preset::Exp3Chaining:
      if (world.fitness_regime != FitnessRegime::Template)
        fail("world.fitness_regime", "exp3 requires \"template\"");
      if (!world.chaining_enabled) fail("world.chaining_enabled", "exp3 requires true");
      break;
    case Preset::Custom:
      break;
  }
  if (!c_values.empty() || !p_values.empty()) fail("grid", "only used by exp1");
  if (preset == Preset::Exp2SR || preset == Preset::Exp3Chaining) {
    if (world.sr_enabled) fail("world.sr_enabled", "set per arm by the preset");
    WorldConfig w = world;
    w.sr_enabled = true;
    check_world(w);
  }
  check_world(world);
}

ExperimentSpec parse_config(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    fail("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("config", "expected a JSON object");
  Preset preset = Preset::Custom;
  if (j.contains("preset")) preset = parse_preset(get_string(j["preset"], "preset"));
  ExperimentSpec s = preset_spec(preset);
  for (const auto& [key, v] : j.items()) {
    if (key == "preset") continue;
    if (key == "runs_per_cell") {
      const auto n = get_int(v, key);
      if (n < 1 || n > 100000) fail(key, "must lie in [1, 100000]");
      s.runs_per_cell = static_cast<int>(n);
    } else if (key == "output_dir") {
      s.output_dir = get_string(v, key);
    } else if (key == "grid") {
      expect(v, key, v.is_object(), "an object");
      for (const auto& [gk, gv] : v.items()) {
        if (gk == "C") s.c_values = get_reals(gv, "grid.C");
        else if (gk == "p") s.p_values = get_reals(gv, "grid.p");
        else fail("grid." + gk, "unknown key");
      }
    } else if (key == "world") {
      apply_world(s.world, v);
    } else {
      fail(key, "unknown key");
    }
  }
  s.validate();
  return s;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string effective_config(const ExperimentSpec& spec) {
  Json j;
  j["preset"] = preset_name(spec.preset);
  j["runs_per_cell"] = spec.runs_per_cell;
  j["output_dir"] = spec.output_dir.generic_string();
  if (spec.preset == Preset::Exp1Sweep) j["grid"] = {{"C", spec.c_values}, {"p", spec.p_values}};
  j["world"] = world_json(spec.world);
  return j.dump(2) + "\n";
}

std::string digest_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t workers_from_env() {
  if (const char* v = std::getenv("CULTURESIM_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n >= 1) return static_cast<std::size_t>(n);
    throw ConfigError(std::string("CULTURESIM_WORKERS: expected a positive integer, got \"") + v +
                      "\"");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult compute(const ExperimentSpec& spec, std::size_t workers,
                         const JobRunner& runner) {
  spec.validate();
  const Plan plan = make_plan(spec);
  auto templates = templates_for(spec.world);
  auto results = run_jobs(plan, workers, std::move(templates), runner);
  ExperimentResult out;
  out.config_digest = digest_hex(effective_config(spec));
  switch (spec.preset) {
    case Preset::Exp1Sweep: {
      std::vector<SurfaceCell> cells;
      for (std::size_t g : plan.surface_groups)
        cells.push_back({plan.groups[g].cfg.creator_fraction,
                         plan.groups[g].cfg.creator_creativity, results[g]});
      out.surface = surface(cells, results[plan.baseline_group], spec.world.tau);
      break;
    }
    case Preset::Exp2SR:
    case Preset::Exp3Chaining:
      out.series = average_runs(results[0]);
      out.series_no_sr = average_runs(results[1]);
      break;
    case Preset::Custom:
      out.series = average_runs(results[0]);
      break;
  }
  return out;
}

ExperimentResult execute(const ExperimentSpec& spec, std::size_t workers,
                         const JobRunner& runner) {
  spec.validate();
  const auto& dir = spec.output_dir;
  std::filesystem::create_directories(dir);
  const std::string config_text = effective_config(spec);
  write_atomic(dir / "config.json", config_text);

  Json manifest;
  manifest["config"] = "config.json";
  manifest["config_digest"] = digest_hex(config_text);

  ExperimentResult result;
  std::vector<std::pair<std::string, std::string>> outputs;
  try {
    result = compute(spec, workers, runner);
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    manifest["files"] = Json::array();
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    throw;
  }
  switch (spec.preset) {
    case Preset::Exp1Sweep:
      outputs.emplace_back("surface.csv", surface_csv(result.surface));
      break;
    case Preset::Exp2SR:
    case Preset::Exp3Chaining:
      outputs.emplace_back("series_sr_on.csv", series_csv(result.series));
      outputs.emplace_back("series_sr_off.csv", series_csv(result.series_no_sr));
      break;
    case Preset::Custom:
      outputs.emplace_back("series.csv", series_csv(result.series));
      break;
  }
  Json files = Json::array();
  for (const auto& [name, bytes] : outputs) {
    write_atomic(dir / name, bytes);
    result.files.emplace_back(name);
    files.push_back({{"path", name}, {"bytes", bytes.size()}, {"digest", digest_hex(bytes)}});
  }
  manifest["status"] = "complete";
  manifest["files"] = files;
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  result.files.insert(result.files.begin(), "config.json");
  return result;
}

std::string series_csv(const AveragedSeries& s) {
  std::string out = "iter,mean_fitness,diversity,frac_low,frac_mid,frac_high\n";
  for (std::size_t t = 0; t < s.mean_fitness.size(); ++t) {
    const auto& seg = s.segregation[t];
    out += std::to_string(t + 1) + ',' + fmt17(s.mean_fitness[t]) + ',' + fmt17(s.diversity[t]) +
           ',' + fmt17(seg.low) + ',' + fmt17(seg.mid) + ',' + fmt17(seg.high) + '\n';
  }
  return out;
}

std::string surface_csv(const std::vector<SurfaceRow>& rows) {
  std::string out = "C,p,runs,mean_ttt_log10,censored_count,mean_piv\n";
  for (const auto& r : rows)
    out += fmt17(r.creator_fraction) + ',' + fmt17(r.creativity) + ',' + std::to_string(r.runs) +
           ',' + fmt17(r.mean_ttt_log10) + ',' + std::to_string(r.censored_count) + ',' +
           fmt17(r.mean_piv) + '\n';
  return out;
}

std::vector<double> read_series_fitness(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("iter,mean_fitness", 0) != 0)
    throw ParameterError(path.string() + ": header must start with iter,mean_fitness");
  std::vector<double> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos) throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    const std::string cell = line.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
      throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": bad mean_fitness \"" + cell + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError(path.string() + ": no rows");
  return out;
}

SeriesAnalysis analyze_series(const std::vector<double>& fitness, double tau,
                              double interest_percent, const std::vector<double>* baseline) {
  SeriesAnalysis a;
  a.ttt = time_to_threshold(fitness, tau);
  a.log10_ttt = std::log10(static_cast<double>(a.ttt.iterations));
  a.npv = npv(fitness, discount_rate(interest_percent));
  if (baseline) {
    a.has_piv = true;
    a.piv = piv(fitness, *baseline);
  }
  return a;
}

}  // namespace culturesim

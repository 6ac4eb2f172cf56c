#include "culturesim/metrics.hpp"

#include <cmath>
#include <string>

namespace culturesim {

double discount_rate(double interest_percent) {
  if (!(interest_percent >= 0.0) || !std::isfinite(interest_percent))
    throw ParameterError("interest rate must be a finite non-negative percentage");
  return 100.0 / (100.0 + interest_percent);
}

double npv(std::span<const double> benefits, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw ParameterError("discount rate r must satisfy 0 < r <= 1");
  double total = 0.0, weight = 1.0;
  for (double b : benefits) {
    total += weight * b;
    weight *= r;
  }
  return total;
}

TimeToThreshold time_to_threshold(std::span<const double> mean_fitness, double tau) {
  if (mean_fitness.empty()) throw ParameterError("time to threshold needs a non-empty series");
  for (std::size_t t = 0; t < mean_fitness.size(); ++t)
    if (mean_fitness[t] >= tau) return {static_cast<int>(t + 1), false};
  return {static_cast<int>(mean_fitness.size() + 1), true};
}

double piv(std::span<const double> series, std::span<const double> baseline) {
  if (series.size() != baseline.size())
    throw ParameterError("PIV series and baseline differ in length (" +
                         std::to_string(series.size()) + " vs " +
                         std::to_string(baseline.size()) + ")");
  double total = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (baseline[t] == 0.0) continue;
    total += series[t] / baseline[t] - 1.0;
  }
  return total;
}

Segregation segregation_stats(const PCreateHistogram& hist) {
  std::uint64_t total = 0;
  for (auto c : hist) total += c;
  if (total == 0) return {};
  const double n = static_cast<double>(total);
  Segregation s;
  s.low = hist.front() / n;
  s.high = hist.back() / n;
  s.mid = static_cast<double>(total - hist.front() - hist.back()) / n;
  return s;
}

AveragedSeries average_runs(std::span<const RunSeries> runs) {
  AveragedSeries out;
  if (runs.empty()) return out;
  const std::size_t n = runs.front().mean_fitness.size();
  for (const auto& r : runs)
    if (r.mean_fitness.size() != n) throw ParameterError("runs differ in length");
  out.mean_fitness.assign(n, 0.0);
  out.diversity.assign(n, 0.0);
  out.segregation.assign(n, Segregation{});
  const double k = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < n; ++t) {
    for (const auto& r : runs) {
      out.mean_fitness[t] += r.mean_fitness[t];
      out.diversity[t] += r.diversity[t];
      const auto s = segregation_stats(r.p_create_hist[t]);
      out.segregation[t].low += s.low;
      out.segregation[t].mid += s.mid;
      out.segregation[t].high += s.high;
    }
    out.mean_fitness[t] /= k;
    out.diversity[t] /= k;
    out.segregation[t].low /= k;
    out.segregation[t].mid /= k;
    out.segregation[t].high /= k;
  }
  return out;
}

std::vector<SurfaceRow> surface(std::span<const SurfaceCell> cells,
                                std::span<const RunSeries> baselines, double tau) {
  std::vector<SurfaceRow> rows;
  rows.reserve(cells.size());
  for (const auto& cell : cells) {
    if (cell.runs.empty()) throw ParameterError("surface cell has no runs");
    SurfaceRow row;
    row.creator_fraction = cell.creator_fraction;
    row.creativity = cell.creativity;
    row.runs = cell.runs.size();
    double log_sum = 0.0, piv_sum = 0.0;
    std::size_t horizon = 0;
    for (const auto& run : cell.runs) {
      horizon = run.mean_fitness.size();
      const auto ttt = time_to_threshold(run.mean_fitness, tau);
      if (ttt.censored) {
        ++row.censored_count;
      } else {
        log_sum += std::log10(static_cast<double>(ttt.iterations));
      }
      if (run.run_index >= baselines.size())
        throw ParameterError("no baseline run for run_index " + std::to_string(run.run_index));
      piv_sum += piv(run.mean_fitness, baselines[run.run_index].mean_fitness);
    }
    const std::size_t reached = row.runs - row.censored_count;
    row.mean_ttt_log10 = reached > 0 ? log_sum / static_cast<double>(reached)
                                     : std::log10(static_cast<double>(horizon + 1));
    row.mean_piv = piv_sum / static_cast<double>(row.runs);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace culturesim

#pragma once

// Time-series analyses over run results: discounting (NPV), time to
// threshold, present innovation value relative to the all-creators baseline,
// p(C) segregation and (C, p) surfaces.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "culturesim/world.hpp"

namespace culturesim {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// r = ((100 + i) / 100)^-1 for an interest rate of i percent per period.
double discount_rate(double interest_percent);

/// sum_t r^(t-1) b_t, 0 < r <= 1.
double npv(std::span<const double> benefits, double r);

struct TimeToThreshold {
  int iterations = 0;  // 1-based; horizon + 1 when censored
  bool censored = false;
};

TimeToThreshold time_to_threshold(std::span<const double> mean_fitness, double tau);

/// -N + sum_t F_t / B_t, skipping (and not counting) iterations where B_t = 0.
double piv(std::span<const double> series, std::span<const double> baseline);

struct Segregation {
  double low = 0.0;   // p(C) <= 0.1
  double high = 0.0;  // p(C) >= 0.9
  double mid = 0.0;
};

Segregation segregation_stats(const PCreateHistogram& hist);

/// Per-iteration average of several runs (fitness, diversity, segregation).
struct AveragedSeries {
  std::vector<double> mean_fitness;
  std::vector<double> diversity;
  std::vector<Segregation> segregation;
};

AveragedSeries average_runs(std::span<const RunSeries> runs);

struct SurfaceCell {
  double creator_fraction = 0.0;
  double creativity = 0.0;
  std::vector<RunSeries> runs;
};

struct SurfaceRow {
  double creator_fraction = 0.0;
  double creativity = 0.0;
  std::size_t runs = 0;
  double mean_ttt_log10 = 0.0;  // over uncensored runs; log10(horizon + 1) if all censored
  std::size_t censored_count = 0;
  double mean_piv = 0.0;
};

/// One row per cell. `baselines[k]` is the (C, p) = (1, 1) run paired with
/// run_index k.
std::vector<SurfaceRow> surface(std::span<const SurfaceCell> cells,
                                std::span<const RunSeries> baselines, double tau);

}  // namespace culturesim

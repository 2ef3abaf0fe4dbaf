#pragma once

// What-if exploration on any NetworkSpec. Every reported acceptance value is
// a plain forward pass at the reported point, so any of them can be
// recomputed independently and compared bit for bit.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "acceptance/network.hpp"

namespace acceptance {

struct SweepRequest {
  std::string variable;
  double start = 0.0;
  double end = 1.0;
  std::size_t steps = 11;
  ScenarioInput base;
};

struct SweepPoint {
  double x = 0.0;
  double acceptance = 0.0;
};

/// steps points at start + k*(end-start)/(steps-1), the last one exactly end;
/// other inputs held at base.
std::vector<SweepPoint> sweep(const NetworkSpec& spec, const SweepRequest& req);

struct GridRequest {
  std::string var_a;
  std::string var_b;
  std::size_t steps_a = 11;
  std::size_t steps_b = 11;
  ScenarioInput base;
};

struct GridResult {
  std::vector<double> a_values;  // ascending, one per row
  std::vector<double> b_values;  // ascending, one per column
  std::vector<std::vector<double>> acceptance;  // [row a][column b]
};

/// Both variables swept over [0, 1].
GridResult grid_sweep(const NetworkSpec& spec, const GridRequest& req);

struct Distribution {
  enum class Kind { uniform, triangular, point };

  Kind kind = Kind::uniform;
  double lo = 0.0;
  double mode = 0.0;
  double hi = 1.0;

  static Distribution uniform(double lo, double hi) { return {Kind::uniform, lo, lo, hi}; }
  static Distribution triangular(double lo, double mode, double hi) {
    return {Kind::triangular, lo, mode, hi};
  }
  static Distribution point(double v) { return {Kind::point, v, v, v}; }

  /// Inverse-CDF draw from u in [0, 1).
  double quantile(double u) const;
};

const char* to_string(Distribution::Kind kind) noexcept;

struct MonteCarloRequest {
  std::vector<Distribution> distributions;  // one per input, in input order
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

inline constexpr std::array<int, 5> kQuantilePercents = {5, 25, 50, 75, 95};

struct MonteCarloSummary {
  std::size_t samples = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1), 0 for one sample
  double min = 0.0;
  double max = 0.0;
  std::array<double, kQuantilePercents.size()> quantiles{};  // nearest rank
};

/// Sample k draws from a generator keyed by (seed, k), so the result does not
/// depend on evaluation order or thread count.
MonteCarloSummary monte_carlo(const NetworkSpec& spec, const MonteCarloRequest& req);

/// Draws of sample k; exposed so callers can recompute any sample.
std::vector<double> monte_carlo_sample(const MonteCarloRequest& req, std::uint64_t k);

/// Nearest-rank percentile of sorted data: element ceil(p/100 * n), 1-based.
double nearest_rank(const std::vector<double>& sorted, int percent);

struct Variant {
  std::string label;
  std::map<std::string, double> deltas;  // variable -> additive change
};

struct VariantResult {
  std::string label;
  ScenarioInput input;
  double acceptance = 0.0;
  double delta = 0.0;  // acceptance - baseline acceptance
  std::vector<std::string> clamped;  // variables pulled back into [0, 1]
};

struct ScenarioComparison {
  ScenarioInput baseline;
  double baseline_acceptance = 0.0;
  std::vector<VariantResult> variants;
};

/// Applies each variant's deltas to baseline. Results are clamped to [0, 1]
/// (and reported) unless baseline.allow_out_of_domain is set.
ScenarioComparison compare(const NetworkSpec& spec, const ScenarioInput& baseline,
                           const std::vector<Variant>& variants);

}  // namespace acceptance

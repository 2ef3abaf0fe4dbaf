#include "acceptance/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "acceptance/errors.hpp"
#include "acceptance/random.hpp"

namespace acceptance {

namespace {

std::size_t require_variable(const NetworkSpec& spec, const std::string& name) {
  if (auto idx = spec.input_index(name)) return *idx;
  throw Error(ErrorKind::unknown_variable, "unknown variable '" + name + "'");
}

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// The last point is pinned to `end` so rounding cannot leave it just short.
double grid_value(double start, double end, std::size_t k, std::size_t steps) {
  if (k + 1 == steps) return end;
  return start + static_cast<double>(k) * (end - start) / static_cast<double>(steps - 1);
}

void require_distribution(const Distribution& d, const std::string& name) {
  const auto fail = [&](const char* rule) {
    throw Error(ErrorKind::invalid_request, "distribution for '" + name + "': " + rule);
  };
  if (!in_unit_interval(d.lo) || !in_unit_interval(d.hi) || !in_unit_interval(d.mode)) {
    fail("support must lie within [0, 1]");
  }
  if (d.lo > d.hi) fail("lo must not exceed hi");
  if (d.kind == Distribution::Kind::triangular && (d.mode < d.lo || d.mode > d.hi)) {
    fail("mode must lie in [lo, hi]");
  }
}

}  // namespace

std::vector<SweepPoint> sweep(const NetworkSpec& spec, const SweepRequest& req) {
  require_valid_spec(spec);
  const auto idx = require_variable(spec, req.variable);
  if (req.steps < 2) throw Error(ErrorKind::invalid_request, "sweep needs at least 2 steps");
  if (!in_unit_interval(req.start) || !in_unit_interval(req.end) || req.start > req.end) {
    throw Error(ErrorKind::invalid_request, "sweep range must satisfy 0 <= start <= end <= 1");
  }
  require_valid_input(spec, req.base);

  std::vector<SweepPoint> out;
  out.reserve(req.steps);
  auto x = req.base.values;
  for (std::size_t k = 0; k < req.steps; ++k) {
    x[idx] = grid_value(req.start, req.end, k, req.steps);
    out.push_back({x[idx], detail::acceptance_unchecked(spec, x)});
  }
  return out;
}

GridResult grid_sweep(const NetworkSpec& spec, const GridRequest& req) {
  require_valid_spec(spec);
  const auto ia = require_variable(spec, req.var_a);
  const auto ib = require_variable(spec, req.var_b);
  if (ia == ib) throw Error(ErrorKind::invalid_request, "grid variables must differ");
  if (req.steps_a < 2 || req.steps_b < 2) {
    throw Error(ErrorKind::invalid_request, "grid needs at least 2 steps per axis");
  }
  require_valid_input(spec, req.base);

  GridResult out;
  for (std::size_t p = 0; p < req.steps_a; ++p) out.a_values.push_back(grid_value(0, 1, p, req.steps_a));
  for (std::size_t q = 0; q < req.steps_b; ++q) out.b_values.push_back(grid_value(0, 1, q, req.steps_b));

  auto x = req.base.values;
  out.acceptance.assign(req.steps_a, std::vector<double>(req.steps_b));
  for (std::size_t p = 0; p < req.steps_a; ++p) {
    x[ia] = out.a_values[p];
    for (std::size_t q = 0; q < req.steps_b; ++q) {
      x[ib] = out.b_values[q];
      out.acceptance[p][q] = detail::acceptance_unchecked(spec, x);
    }
  }
  return out;
}

const char* to_string(Distribution::Kind kind) noexcept {
  switch (kind) {
    case Distribution::Kind::uniform: return "uniform";
    case Distribution::Kind::triangular: return "triangular";
    case Distribution::Kind::point: return "point";
  }
  return "uniform";
}

double Distribution::quantile(double u) const {
  switch (kind) {
    case Kind::point:
      return lo;
    case Kind::uniform:
      return lo + (hi - lo) * u;
    case Kind::triangular: {
      const double width = hi - lo;
      if (width == 0.0) return lo;
      const double split = (mode - lo) / width;
      if (u < split) return lo + std::sqrt(u * width * (mode - lo));
      return hi - std::sqrt((1.0 - u) * width * (hi - mode));
    }
  }
  return lo;
}

std::vector<double> monte_carlo_sample(const MonteCarloRequest& req, std::uint64_t k) {
  CounterRng rng(req.seed, k);
  std::vector<double> x(req.distributions.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(req.distributions[i].quantile(uniform01(rng)), 0.0, 1.0);
  }
  return x;
}

double nearest_rank(const std::vector<double>& sorted, int percent) {
  if (sorted.empty()) throw Error(ErrorKind::empty_input, "no samples");
  const auto n = sorted.size();
  const auto p = static_cast<std::size_t>(std::clamp(percent, 0, 100));
  const std::size_t rank = std::max<std::size_t>(1, (p * n + 99) / 100);
  return sorted[std::min(rank, n) - 1];
}

MonteCarloSummary monte_carlo(const NetworkSpec& spec, const MonteCarloRequest& req) {
  require_valid_spec(spec);
  if (req.distributions.size() != spec.input_count()) {
    throw Error(ErrorKind::shape, "monte carlo needs one distribution per input (" +
                                      std::to_string(spec.input_count()) + ")");
  }
  for (std::size_t i = 0; i < req.distributions.size(); ++i) {
    require_distribution(req.distributions[i], spec.input_names[i]);
  }
  if (req.samples == 0) throw Error(ErrorKind::invalid_request, "samples must be >= 1");

  std::vector<double> values(req.samples);
  const auto evaluate = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      values[k] = detail::acceptance_unchecked(spec, monte_carlo_sample(req, k));
    }
  };
  const std::size_t workers =
      req.samples < 20000 ? 1 : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    evaluate(0, req.samples);
  } else {
    std::vector<std::jthread> pool;
    const auto chunk = (req.samples + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const auto begin = std::min(req.samples, w * chunk);
      const auto end = std::min(req.samples, begin + chunk);
      pool.emplace_back(evaluate, begin, end);
    }
  }

  MonteCarloSummary s;
  s.samples = req.samples;
  // Shifted by the first sample: identical samples give that value exactly.
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double mean_offset = sum / static_cast<double>(values.size());
  s.mean = shift + mean_offset;
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - shift - mean_offset) * (v - shift - mean_offset);
    s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  for (std::size_t q = 0; q < kQuantilePercents.size(); ++q) {
    s.quantiles[q] = nearest_rank(values, kQuantilePercents[q]);
  }
  return s;
}

ScenarioComparison compare(const NetworkSpec& spec, const ScenarioInput& baseline,
                           const std::vector<Variant>& variants) {
  require_valid_spec(spec);
  require_valid_input(spec, baseline);

  std::set<std::string> labels;
  for (const auto& v : variants) {
    if (!labels.insert(v.label).second) {
      throw Error(ErrorKind::invalid_request, "duplicate variant label '" + v.label + "'");
    }
    for (const auto& [name, delta] : v.deltas) {
      require_variable(spec, name);
      if (!std::isfinite(delta)) {
        throw Error(ErrorKind::invalid_value,
                    "variant '" + v.label + "': delta for '" + name + "' is not finite");
      }
    }
  }

  ScenarioComparison out;
  out.baseline = baseline;
  out.baseline_acceptance = detail::acceptance_unchecked(spec, baseline.values);
  for (const auto& v : variants) {
    VariantResult r;
    r.label = v.label;
    r.input = baseline;
    for (const auto& [name, delta] : v.deltas) {
      const auto i = *spec.input_index(name);
      double x = r.input.values[i] + delta;
      if (!baseline.allow_out_of_domain && (x < 0.0 || x > 1.0)) {
        x = std::clamp(x, 0.0, 1.0);
        r.clamped.push_back(name);
      }
      r.input.values[i] = x;
    }
    r.acceptance = detail::acceptance_unchecked(spec, r.input.values);
    r.delta = r.acceptance - out.baseline_acceptance;
    out.variants.push_back(std::move(r));
  }
  return out;
}

}  // namespace acceptance

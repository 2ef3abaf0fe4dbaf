#include "acceptance/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "acceptance/errors.hpp"
#include "acceptance/random.hpp"

namespace acceptance {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::string feature_name(std::size_t i) {
  return i < kCanonicalInputs.size() ? std::string(kCanonicalInputs[i])
                                     : "feature " + std::to_string(i);
}

void require_batch(const NetworkSpec& spec, std::span<const std::vector<double>> inputs,
                   std::span<const double> targets) {
  if (inputs.empty()) throw Error(ErrorKind::empty_input, "batch is empty");
  if (inputs.size() != targets.size()) {
    throw Error(ErrorKind::shape, "batch has " + std::to_string(inputs.size()) +
                                      " inputs but " + std::to_string(targets.size()) +
                                      " targets");
  }
  for (const auto& x : inputs) {
    if (x.size() != spec.input_count()) {
      throw Error(ErrorKind::shape, "batch row has " + std::to_string(x.size()) +
                                        " inputs, network expects " +
                                        std::to_string(spec.input_count()));
    }
  }
}

ParameterGradients zero_gradients(const NetworkSpec& spec) {
  ParameterGradients g;
  g.w_in.assign(spec.input_count(), std::vector<double>(spec.hidden_size, 0.0));
  g.b_hidden.assign(spec.hidden_size, 0.0);
  g.w_out.assign(spec.hidden_size, 0.0);
  return g;
}

// Batch MSE and its gradient in one pass over the batch.
double loss_and_gradients(const NetworkSpec& spec,
                          std::span<const std::vector<double>> inputs,
                          std::span<const double> targets, ParameterGradients& g) {
  g = zero_gradients(spec);
  const auto n = spec.hidden_size;
  const double inv_count = 1.0 / static_cast<double>(inputs.size());
  std::vector<double> pre(n), post(n);
  double loss = 0.0;

  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const auto& x = inputs[s];
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) sum += spec.w_in[i][j] * x[i];
      pre[j] = sum + spec.b_hidden[j];
      post[j] = pre[j] > 0.0 ? pre[j] : 0.0;
    }
    double linear = 0.0;
    for (std::size_t j = 0; j < n; ++j) linear += spec.w_out[j] * post[j];
    linear += spec.b_out;

    double y = linear;
    double dy_dlinear = 1.0;
    if (spec.output_activation == OutputActivation::sigmoid) {
      y = sigmoid(linear);
      dy_dlinear = y * (1.0 - y);
    }
    const double err = y - targets[s];
    loss += err * err;

    const double d_linear = 2.0 * err * inv_count * dy_dlinear;
    g.b_out += d_linear;
    for (std::size_t j = 0; j < n; ++j) {
      g.w_out[j] += d_linear * post[j];
      const double d_pre = d_linear * spec.w_out[j] * relu_derivative(pre[j]);
      if (d_pre == 0.0) continue;
      g.b_hidden[j] += d_pre;
      for (std::size_t i = 0; i < x.size(); ++i) g.w_in[i][j] += d_pre * x[i];
    }
  }
  return loss * inv_count;
}

double batch_mse(const NetworkSpec& spec, const Dataset& data) {
  double loss = 0.0;
  for (const auto& row : data.rows) {
    const double err = detail::acceptance_unchecked(spec, row.inputs) - row.target;
    loss += err * err;
  }
  return loss / static_cast<double>(data.rows.size());
}

}  // namespace

std::vector<double> ParameterGradients::flatten() const {
  std::vector<double> flat;
  for (const auto& row : w_in) flat.insert(flat.end(), row.begin(), row.end());
  flat.insert(flat.end(), b_hidden.begin(), b_hidden.end());
  flat.insert(flat.end(), w_out.begin(), w_out.end());
  flat.push_back(b_out);
  return flat;
}

std::vector<FeatureRange> observed_ranges(const std::vector<Sample>& rows) {
  if (rows.empty()) return {};
  std::vector<FeatureRange> ranges;
  for (double x : rows.front().inputs) ranges.push_back({x, x});
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < ranges.size() && i < row.inputs.size(); ++i) {
      ranges[i].min = std::min(ranges[i].min, row.inputs[i]);
      ranges[i].max = std::max(ranges[i].max, row.inputs[i]);
    }
  }
  return ranges;
}

void require_valid_dataset(const Dataset& dataset) {
  if (dataset.feature_ranges.size() != kInputCount) {
    throw Error(ErrorKind::shape, "dataset needs " + std::to_string(kInputCount) +
                                      " feature ranges, has " +
                                      std::to_string(dataset.feature_ranges.size()));
  }
  for (std::size_t i = 0; i < kInputCount; ++i) {
    const auto& r = dataset.feature_ranges[i];
    if (!finite(r.min) || !finite(r.max)) {
      throw Error(ErrorKind::invalid_value, "feature range of '" + feature_name(i) +
                                                "' is not finite");
    }
    if (!(r.min < r.max)) throw DegenerateFeatureError(feature_name(i));
  }
  for (std::size_t k = 0; k < dataset.rows.size(); ++k) {
    const auto& row = dataset.rows[k];
    if (row.inputs.size() != kInputCount) {
      throw Error(ErrorKind::shape, "row " + std::to_string(k) + " has " +
                                        std::to_string(row.inputs.size()) + " inputs");
    }
    if (!finite(row.target)) {
      throw Error(ErrorKind::invalid_value, "row " + std::to_string(k) + ": target is not finite");
    }
    for (std::size_t i = 0; i < kInputCount; ++i) {
      const double x = row.inputs[i];
      const auto& r = dataset.feature_ranges[i];
      if (!finite(x) || x < r.min || x > r.max) {
        throw Error(ErrorKind::invalid_value, "row " + std::to_string(k) + ": '" +
                                                  feature_name(i) +
                                                  "' is not a finite value inside its range");
      }
    }
  }
}

void TrainingConfig::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorKind::invalid_request, "training config: " + what);
  };
  if (!(finite(learning_rate) && learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) fail("beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) fail("beta2 must lie in (0, 1)");
  if (!(finite(epsilon) && epsilon > 0.0)) fail("epsilon must be positive");
  if (epochs == 0) fail("epochs must be positive");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) fail("split_ratio must lie in (0, 1)");
  if (hidden_size == 0) fail("hidden_size must be positive");
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty() || predictions.size() != targets.size()) {
    throw Error(ErrorKind::shape, "mse needs two equal, nonzero-length vectors (got " +
                                      std::to_string(predictions.size()) + " and " +
                                      std::to_string(targets.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    if (!finite(predictions[k]) || !finite(targets[k])) {
      throw Error(ErrorKind::invalid_value, "mse: non-finite value at index " + std::to_string(k));
    }
    const double d = predictions[k] - targets[k];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

Dataset normalize(const Dataset& dataset) {
  require_valid_dataset(dataset);
  Dataset out = dataset;
  for (auto& row : out.rows) {
    for (std::size_t i = 0; i < kInputCount; ++i) {
      const auto& r = dataset.feature_ranges[i];
      row.inputs[i] = (row.inputs[i] - r.min) / (r.max - r.min);
    }
  }
  return out;
}

Dataset denormalize(const Dataset& normalized) {
  Dataset out = normalized;
  for (auto& row : out.rows) {
    for (std::size_t i = 0; i < kInputCount && i < row.inputs.size(); ++i) {
      const auto& r = normalized.feature_ranges.at(i);
      row.inputs[i] = row.inputs[i] * (r.max - r.min) + r.min;
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, double ratio,
                                          std::uint64_t seed) {
  if (dataset.rows.empty()) throw Error(ErrorKind::empty_input, "cannot split an empty dataset");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorKind::invalid_request, "split ratio must lie in (0, 1)");
  }
  const auto count = dataset.rows.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Engine64 engine(seed);
  for (std::size_t i = count - 1; i > 0; --i) {
    std::swap(order[i], order[uniform_index(engine, i + 1)]);
  }

  const auto train_count =
      static_cast<std::size_t>(std::floor(ratio * static_cast<double>(count)));
  Dataset train{{}, dataset.feature_ranges};
  Dataset test{{}, dataset.feature_ranges};
  train.rows.reserve(train_count);
  test.rows.reserve(count - train_count);
  for (std::size_t k = 0; k < count; ++k) {
    (k < train_count ? train : test).rows.push_back(dataset.rows[order[k]]);
  }
  return {std::move(train), std::move(test)};
}

ParameterGradients backward(const NetworkSpec& spec,
                            std::span<const std::vector<double>> inputs,
                            std::span<const double> targets) {
  require_valid_spec(spec);
  require_batch(spec, inputs, targets);
  ParameterGradients g;
  loss_and_gradients(spec, inputs, targets, g);
  return g;
}

AdamUpdate adam_step(std::span<const double> params, std::span<const double> grads,
                     const AdamState& state, const TrainingConfig& config) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw Error(ErrorKind::shape, "adam_step: parameter, gradient, and state sizes differ");
  }
  for (std::size_t k = 0; k < grads.size(); ++k) {
    if (!finite(grads[k])) {
      throw DivergenceError(0, "non-finite gradient at parameter " + std::to_string(k));
    }
  }

  AdamUpdate out{std::vector<double>(params.begin(), params.end()), state};
  auto& s = out.state;
  s.t += 1;
  const double t = static_cast<double>(s.t);
  const double m_correction = 1.0 - std::pow(config.beta1, t);
  const double v_correction = 1.0 - std::pow(config.beta2, t);
  for (std::size_t k = 0; k < grads.size(); ++k) {
    const double g = grads[k];
    s.m[k] = config.beta1 * s.m[k] + (1.0 - config.beta1) * g;
    s.v[k] = config.beta2 * s.v[k] + (1.0 - config.beta2) * g * g;
    const double m_hat = s.m[k] / m_correction;
    const double v_hat = s.v[k] / v_correction;
    out.params[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
  return out;
}

NetworkSpec initialize_network(std::size_t hidden_size, OutputActivation activation,
                               std::uint64_t seed) {
  auto spec = NetworkSpec::zeros(hidden_size, activation);
  Engine64 engine(mix64(seed));
  const double hidden_scale = std::sqrt(1.0 / static_cast<double>(kInputCount));
  const double output_scale = std::sqrt(1.0 / static_cast<double>(hidden_size));
  for (auto& row : spec.w_in) {
    for (auto& w : row) w = uniform(engine, -hidden_scale, hidden_scale);
  }
  for (auto& b : spec.b_hidden) b = uniform(engine, -hidden_scale, hidden_scale);
  for (auto& w : spec.w_out) w = uniform(engine, -output_scale, output_scale);
  spec.b_out = uniform(engine, -output_scale, output_scale);
  return spec;
}

TrainingResult train(const Dataset& dataset, const TrainingConfig& config) {
  config.validate();
  if (dataset.rows.empty()) throw Error(ErrorKind::empty_input, "dataset has no rows");
  const Dataset normalized = normalize(dataset);
  auto [train_set, test_set] = split_dataset(normalized, config.split_ratio, config.seed);
  if (train_set.rows.empty() || test_set.rows.empty()) {
    throw Error(ErrorKind::empty_input,
                "dataset of " + std::to_string(dataset.size()) +
                    " rows leaves an empty train or test set at split ratio " +
                    std::to_string(config.split_ratio));
  }

  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  inputs.reserve(train_set.size());
  targets.reserve(train_set.size());
  for (const auto& row : train_set.rows) {
    inputs.push_back(row.inputs);
    targets.push_back(row.target);
  }

  TrainingResult result{initialize_network(config.hidden_size, config.output_activation,
                                           config.seed),
                        {}};
  auto& spec = result.spec;
  auto& history = result.history;
  history.train_mse.reserve(config.epochs);

  auto params = spec.flatten();
  auto state = AdamState::zeros(params.size());
  ParameterGradients grads;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const double loss = loss_and_gradients(spec, inputs, targets, grads);
    if (!finite(loss)) {
      throw DivergenceError(epoch, "training diverged: non-finite loss at epoch " +
                                       std::to_string(epoch));
    }
    history.train_mse.push_back(loss);
    history.epochs_run = epoch;

    AdamUpdate update;
    try {
      update = adam_step(params, grads.flatten(), state, config);
    } catch (const DivergenceError& e) {
      throw DivergenceError(epoch, "training diverged at epoch " + std::to_string(epoch) +
                                       ": " + e.what());
    }
    params = std::move(update.params);
    state = std::move(update.state);
    spec.assign(params);
  }

  history.test_mse = batch_mse(spec, test_set);
  if (!finite(history.test_mse)) {
    throw DivergenceError(config.epochs, "training diverged: non-finite test loss");
  }
  if (!validate_spec(spec).empty()) {
    throw DivergenceError(config.epochs, "training diverged: non-finite parameters");
  }
  return result;
}

Dataset generate_synthetic(const NetworkSpec& spec, std::size_t n, double noise_std,
                           std::uint64_t seed) {
  require_valid_spec(spec);
  if (spec.input_count() != kInputCount) {
    throw Error(ErrorKind::shape, "synthetic data needs a " + std::to_string(kInputCount) +
                                      "-input network");
  }
  if (n == 0) throw Error(ErrorKind::invalid_request, "synthetic dataset needs n >= 1");
  if (!(finite(noise_std) && noise_std >= 0.0)) {
    throw Error(ErrorKind::invalid_request, "noise_std must be finite and nonnegative");
  }

  Dataset out;
  out.feature_ranges.assign(kInputCount, FeatureRange{0.0, 1.0});
  out.rows.reserve(n);
  Engine64 input_engine(seed);
  Engine64 noise_engine(mix64(seed));
  for (std::size_t k = 0; k < n; ++k) {
    Sample s;
    s.inputs.resize(kInputCount);
    for (auto& x : s.inputs) x = uniform01(input_engine);
    s.target = detail::acceptance_unchecked(spec, s.inputs);
    if (noise_std > 0.0) s.target += noise_std * standard_normal(noise_engine);
    out.rows.push_back(std::move(s));
  }
  return out;
}

}  // namespace acceptance

#pragma once

// Supervised training of a NetworkSpec: min-max normalization, seeded
// train/test split, exact backpropagation of the batch MSE, and
// bias-corrected Adam over the full batch.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "acceptance/network.hpp"

namespace acceptance {

struct FeatureRange {
  double min = 0.0;
  double max = 1.0;

  bool operator==(const FeatureRange&) const = default;
};

struct Sample {
  std::vector<double> inputs;
  double target = 0.0;

  bool operator==(const Sample&) const = default;
};

/// Rows in input order of kCanonicalInputs plus the per-feature ranges used
/// to map raw values to [0, 1].
struct Dataset {
  std::vector<Sample> rows;
  std::vector<FeatureRange> feature_ranges;

  std::size_t size() const noexcept { return rows.size(); }
  bool operator==(const Dataset&) const = default;
};

/// Per-column observed min/max of the rows.
std::vector<FeatureRange> observed_ranges(const std::vector<Sample>& rows);

/// Throws Error(shape | invalid_value) or DegenerateFeatureError.
void require_valid_dataset(const Dataset& dataset);

enum class InitRule { fan_in_uniform };

struct TrainingConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 5000;
  double split_ratio = 0.8;
  std::uint64_t seed = 0;
  InitRule init_scale_rule = InitRule::fan_in_uniform;
  std::size_t hidden_size = 10;
  OutputActivation output_activation = OutputActivation::linear;

  /// Throws Error(invalid_request) for the first out-of-range field.
  void validate() const;
};

struct TrainingHistory {
  std::vector<double> train_mse;  // one entry per epoch, before that epoch's update
  double test_mse = 0.0;          // after the final update
  std::size_t epochs_run = 0;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;

  static AdamState zeros(std::size_t parameter_count) {
    return {std::vector<double>(parameter_count, 0.0),
            std::vector<double>(parameter_count, 0.0), 0};
  }
};

/// d MSE / d theta, shaped like the trainable parts of a NetworkSpec.
struct ParameterGradients {
  std::vector<std::vector<double>> w_in;
  std::vector<double> b_hidden;
  std::vector<double> w_out;
  double b_out = 0.0;

  /// Same layout as NetworkSpec::flatten().
  std::vector<double> flatten() const;
};

double mse(std::span<const double> predictions, std::span<const double> targets);

/// Maps every input to (x - min) / (max - min) using dataset.feature_ranges.
Dataset normalize(const Dataset& dataset);
Dataset denormalize(const Dataset& normalized);

/// Seeded Fisher-Yates shuffle, then the first floor(ratio * N) rows train.
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, double ratio,
                                          std::uint64_t seed);

ParameterGradients backward(const NetworkSpec& spec,
                            std::span<const std::vector<double>> inputs,
                            std::span<const double> targets);

struct AdamUpdate {
  std::vector<double> params;
  AdamState state;
};

/// One bias-corrected Adam step. Throws DivergenceError on non-finite gradients.
AdamUpdate adam_step(std::span<const double> params, std::span<const double> grads,
                     const AdamState& state, const TrainingConfig& config);

/// Fan-in scaled uniform initialization: every parameter of a layer is drawn
/// from U[-s, s] with s = sqrt(1 / fan_in).
NetworkSpec initialize_network(std::size_t hidden_size, OutputActivation activation,
                               std::uint64_t seed);

struct TrainingResult {
  NetworkSpec spec;
  TrainingHistory history;
};

/// Normalizes, splits, initializes, and runs config.epochs full-batch Adam
/// steps. The returned spec consumes normalized inputs. Deterministic in
/// (dataset, config). Throws DivergenceError carrying the 1-based epoch.
TrainingResult train(const Dataset& dataset, const TrainingConfig& config);

/// n inputs uniform on [0,1]^6, targets forward(spec, x) + N(0, noise_std^2).
Dataset generate_synthetic(const NetworkSpec& spec, std::size_t n, double noise_std,
                           std::uint64_t seed);

}  // namespace acceptance

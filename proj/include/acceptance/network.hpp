#pragma once

// Dense 6 -> H -> 1 network with ReLU hidden units:
//
//   hidden_pre[j]  = sum_i w_in[i][j] * x[i] + b_hidden[j]
//   hidden_post[j] = max(0, hidden_pre[j])
//   y              = sum_j w_out[j] * hidden_post[j] + b_out    (linear)
//   y              = 1 / (1 + exp(-(...)))                      (sigmoid)
//
// Everything is double precision and summed in ascending index order, so a
// given (spec, input) pair always produces the same bits.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acceptance {

inline constexpr std::size_t kInputCount = 6;

/// Canonical variable order of the acceptance model.
inline constexpr std::array<std::string_view, kInputCount> kCanonicalInputs = {
    "transparency", "legitimacy", "independence",
    "quality",      "costs",      "impartiality"};

enum class OutputActivation { linear, sigmoid };

const char* to_string(OutputActivation activation) noexcept;
std::optional<OutputActivation> parse_output_activation(std::string_view text);

struct NetworkSpec {
  std::vector<std::string> input_names;
  std::size_t hidden_size = 0;
  std::vector<std::vector<double>> w_in;  // input_count x hidden_size
  std::vector<double> b_hidden;
  std::vector<double> w_out;
  double b_out = 0.0;
  OutputActivation output_activation = OutputActivation::linear;

  std::size_t input_count() const noexcept { return input_names.size(); }
  std::optional<std::size_t> input_index(std::string_view name) const;

  /// Number of trainable scalars: inputs*hidden + 2*hidden + 1.
  std::size_t parameter_count() const noexcept;

  /// Trainable parameters in the order w_in (row-major), b_hidden, w_out, b_out.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  /// A well-shaped spec over the canonical inputs with every parameter zero.
  static NetworkSpec zeros(std::size_t hidden_size,
                           OutputActivation activation = OutputActivation::linear);

  bool operator==(const NetworkSpec&) const = default;
};

/// One assignment of the input variables, in the network's input order.
/// Values are expected in [0, 1]; anything else needs allow_out_of_domain.
struct ScenarioInput {
  std::vector<double> values;
  bool allow_out_of_domain = false;

  static ScenarioInput filled(double value, std::size_t count = kInputCount) {
    return {std::vector<double>(count, value), false};
  }

  bool operator==(const ScenarioInput&) const = default;
};

struct PredictionResult {
  double acceptance = 0.0;
  std::vector<double> hidden_pre;
  std::vector<double> hidden_post;
  std::vector<double> input_gradient;  // d acceptance / d x_i
};

struct Violation {
  std::string field;
  std::string rule;
};

/// max(0, x). Throws Error(invalid_value) for NaN/Inf.
double relu(double x);

/// Subgradient of relu used everywhere: 1 for x > 0, 0 otherwise (including 0).
inline double relu_derivative(double x) noexcept { return x > 0.0 ? 1.0 : 0.0; }

double sigmoid(double x) noexcept;

/// Empty iff every NetworkSpec invariant holds.
std::vector<Violation> validate_spec(const NetworkSpec& spec);

/// Throws Error(shape | invalid_value) naming the first violation.
void require_valid_spec(const NetworkSpec& spec);

/// Throws Error(shape | invalid_value | out_of_domain) when input does not fit spec.
void require_valid_input(const NetworkSpec& spec, const ScenarioInput& input);

PredictionResult forward(const NetworkSpec& spec, const ScenarioInput& input);

std::vector<double> input_gradient(const NetworkSpec& spec,
                                   const ScenarioInput& input);

namespace detail {

/// Forward pass without validation, for callers that validated once up front.
PredictionResult forward_unchecked(const NetworkSpec& spec,
                                   std::span<const double> x);

/// Acceptance only; same arithmetic as forward_unchecked.
double acceptance_unchecked(const NetworkSpec& spec, std::span<const double> x);

}  // namespace detail

}  // namespace acceptance

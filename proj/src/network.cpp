#include "acceptance/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "acceptance/errors.hpp"

namespace acceptance {

const char* to_string(OutputActivation activation) noexcept {
  return activation == OutputActivation::sigmoid ? "sigmoid" : "linear";
}

std::optional<OutputActivation> parse_output_activation(std::string_view text) {
  if (text == "linear") return OutputActivation::linear;
  if (text == "sigmoid") return OutputActivation::sigmoid;
  return std::nullopt;
}

std::optional<std::size_t> NetworkSpec::input_index(std::string_view name) const {
  auto it = std::find(input_names.begin(), input_names.end(), name);
  if (it == input_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - input_names.begin());
}

std::size_t NetworkSpec::parameter_count() const noexcept {
  return input_count() * hidden_size + 2 * hidden_size + 1;
}

std::vector<double> NetworkSpec::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& row : w_in) flat.insert(flat.end(), row.begin(), row.end());
  flat.insert(flat.end(), b_hidden.begin(), b_hidden.end());
  flat.insert(flat.end(), w_out.begin(), w_out.end());
  flat.push_back(b_out);
  return flat;
}

void NetworkSpec::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw Error(ErrorKind::shape, "flat parameter vector has " +
                                      std::to_string(flat.size()) + " values, expected " +
                                      std::to_string(parameter_count()));
  }
  auto it = flat.begin();
  w_in.assign(input_count(), std::vector<double>(hidden_size));
  for (auto& row : w_in) {
    std::copy_n(it, hidden_size, row.begin());
    it += static_cast<std::ptrdiff_t>(hidden_size);
  }
  b_hidden.assign(it, it + static_cast<std::ptrdiff_t>(hidden_size));
  it += static_cast<std::ptrdiff_t>(hidden_size);
  w_out.assign(it, it + static_cast<std::ptrdiff_t>(hidden_size));
  it += static_cast<std::ptrdiff_t>(hidden_size);
  b_out = *it;
}

NetworkSpec NetworkSpec::zeros(std::size_t hidden_size, OutputActivation activation) {
  NetworkSpec spec;
  spec.input_names.assign(kCanonicalInputs.begin(), kCanonicalInputs.end());
  spec.hidden_size = hidden_size;
  spec.w_in.assign(kInputCount, std::vector<double>(hidden_size, 0.0));
  spec.b_hidden.assign(hidden_size, 0.0);
  spec.w_out.assign(hidden_size, 0.0);
  spec.output_activation = activation;
  return spec;
}

double relu(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::invalid_value, "relu: non-finite input");
  return std::max(0.0, x);
}

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<Violation> validate_spec(const NetworkSpec& spec) {
  std::vector<Violation> out;
  const auto n = spec.hidden_size;
  const auto size_rule = [](const char* what, std::size_t got, std::size_t want) {
    return std::string(what) + " " + std::to_string(got) + " != " + std::to_string(want);
  };

  if (spec.input_names.empty()) out.push_back({"input_names", "must not be empty"});
  std::set<std::string> seen;
  for (const auto& name : spec.input_names) {
    if (name.empty()) out.push_back({"input_names", "names must be non-empty"});
    if (!seen.insert(name).second) out.push_back({"input_names", "duplicate name '" + name + "'"});
  }
  if (n == 0) out.push_back({"hidden_size", "must be positive"});

  if (spec.w_in.size() != spec.input_names.size()) {
    out.push_back({"w_in", size_rule("row count", spec.w_in.size(), spec.input_names.size())});
  }
  for (std::size_t i = 0; i < spec.w_in.size(); ++i) {
    if (spec.w_in[i].size() != n) {
      out.push_back({"w_in[" + std::to_string(i) + "]",
                     size_rule("column count", spec.w_in[i].size(), n)});
    }
  }
  if (spec.b_hidden.size() != n) {
    out.push_back({"b_hidden", size_rule("length", spec.b_hidden.size(), n)});
  }
  if (spec.w_out.size() != n) {
    out.push_back({"w_out", size_rule("length", spec.w_out.size(), n)});
  }

  const auto finite_all = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  for (std::size_t i = 0; i < spec.w_in.size(); ++i) {
    if (!finite_all(spec.w_in[i])) {
      out.push_back({"w_in[" + std::to_string(i) + "]", "values must be finite"});
    }
  }
  if (!finite_all(spec.b_hidden)) out.push_back({"b_hidden", "values must be finite"});
  if (!finite_all(spec.w_out)) out.push_back({"w_out", "values must be finite"});
  if (!std::isfinite(spec.b_out)) out.push_back({"b_out", "value must be finite"});
  return out;
}

void require_valid_spec(const NetworkSpec& spec) {
  auto violations = validate_spec(spec);
  if (violations.empty()) return;
  const auto& v = violations.front();
  const bool finiteness = v.rule.find("finite") != std::string::npos;
  throw Error(finiteness ? ErrorKind::invalid_value : ErrorKind::shape,
              "invalid network spec: " + v.field + ": " + v.rule);
}

void require_valid_input(const NetworkSpec& spec, const ScenarioInput& input) {
  if (input.values.size() != spec.input_count()) {
    throw Error(ErrorKind::shape, "input has " + std::to_string(input.values.size()) +
                                      " values, network expects " +
                                      std::to_string(spec.input_count()));
  }
  for (std::size_t i = 0; i < input.values.size(); ++i) {
    const double x = input.values[i];
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::invalid_value, "input '" + spec.input_names[i] + "' is not finite");
    }
    if (!input.allow_out_of_domain && (x < 0.0 || x > 1.0)) {
      throw Error(ErrorKind::out_of_domain,
                  "input '" + spec.input_names[i] + "' = " + std::to_string(x) +
                      " lies outside [0, 1]; set the out-of-domain flag to evaluate it");
    }
  }
}

namespace detail {

namespace {

void hidden_layer(const NetworkSpec& spec, std::span<const double> x,
                  std::vector<double>& pre, std::vector<double>& post) {
  const auto n = spec.hidden_size;
  pre.resize(n);
  post.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += spec.w_in[i][j] * x[i];
    pre[j] = sum + spec.b_hidden[j];
    post[j] = pre[j] > 0.0 ? pre[j] : 0.0;
  }
}

double output_sum(const NetworkSpec& spec, const std::vector<double>& post) {
  double sum = 0.0;
  for (std::size_t j = 0; j < post.size(); ++j) sum += spec.w_out[j] * post[j];
  return sum + spec.b_out;
}

}  // namespace

PredictionResult forward_unchecked(const NetworkSpec& spec, std::span<const double> x) {
  PredictionResult r;
  hidden_layer(spec, x, r.hidden_pre, r.hidden_post);
  const double linear = output_sum(spec, r.hidden_post);

  double scale = 1.0;
  if (spec.output_activation == OutputActivation::sigmoid) {
    r.acceptance = sigmoid(linear);
    scale = r.acceptance * (1.0 - r.acceptance);
  } else {
    r.acceptance = linear;
  }

  r.input_gradient.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double g = 0.0;
    for (std::size_t j = 0; j < spec.hidden_size; ++j) {
      g += spec.w_out[j] * relu_derivative(r.hidden_pre[j]) * spec.w_in[i][j];
    }
    r.input_gradient[i] = scale * g;
  }
  return r;
}

double acceptance_unchecked(const NetworkSpec& spec, std::span<const double> x) {
  thread_local std::vector<double> pre, post;
  hidden_layer(spec, x, pre, post);
  const double linear = output_sum(spec, post);
  return spec.output_activation == OutputActivation::sigmoid ? sigmoid(linear) : linear;
}

}  // namespace detail

PredictionResult forward(const NetworkSpec& spec, const ScenarioInput& input) {
  require_valid_spec(spec);
  require_valid_input(spec, input);
  return detail::forward_unchecked(spec, input.values);
}

std::vector<double> input_gradient(const NetworkSpec& spec, const ScenarioInput& input) {
  return forward(spec, input).input_gradient;
}

}  // namespace acceptance

#include "acceptance/paper_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "acceptance/errors.hpp"

namespace acceptance {

namespace {

// Rows are input variables in canonical order, columns hidden neurons 1..10.
constexpr std::array<std::array<double, 10>, kInputCount> kInputWeights = {{
    // transparency
    {-5.928, 2.114, -0.0986, 5.871, 1.457, 3.884, 4.447, -0.908, 1.093, -4.706},
    // legitimacy
    {-0.9665, 1.174, -2.9226, -1.561, -3.168, 10.890, 2.457, -4.431, 1.716, 5.662},
    // independence
    {-3.915, 7.162, -2.952, 1.204, -0.883, -8.568, -0.533, -3.383, -5.872, 4.178},
    // quality
    {10.889, 3.203, -0.432, -2.308, 1.673, -1.127, 8.571, -0.753, 2.871, 3.594},
    // costs
    {6.658, -5.917, -2.782, 9.889, 3.032, -10.431, 5.992, 2.764, -7.843, -6.102},
    // impartiality
    {-8.568, 4.127, 6.765, -1.903, 3.871, 4.065, 7.431, 1.112, -5.662, 1.671},
}};

constexpr std::array<double, 10> kHiddenBiases = {
    1.463, 3.565, 5.878, 2.115, 0.674, 4.774, -1.621, 3.122, 5.983, 0.913};

constexpr std::array<double, 10> kOutputWeights = {
    -17.232, -2.925, -8.706, -3.915, -3.116, 10.890, 3.203, -10.431, 4.786, 4.706};

constexpr double kOutputBias = 1.985;

const std::array<VariableMeta, kInputCount>& variable_table() {
  static const std::array<VariableMeta, kInputCount> table = {{
      {"transparency", "Transparency", Polarity::convergence,
       "Share of judicial processes that follow clear, accessible criteria"},
      {"legitimacy", "Public legitimacy", Polarity::convergence,
       "Public-opinion survey trust in the judicial system"},
      {"independence", "Judicial independence", Polarity::convergence,
       "International judicial-autonomy indices"},
      {"quality", "Quality of judicial decisions", Polarity::divergence,
       "Appeals and overturned rulings"},
      {"costs", "Implementation costs", Polarity::divergence,
       "Allocated budget and actual spending on the popular election process"},
      {"impartiality", "Impartiality of the Discipline Tribunal", Polarity::divergence,
       "Decisions challenged for lack of impartiality"},
  }};
  return table;
}

}  // namespace

const char* to_string(Polarity polarity) noexcept {
  return polarity == Polarity::convergence ? "convergence" : "divergence";
}

NetworkSpec load_paper_weights() {
  auto spec = NetworkSpec::zeros(kHiddenBiases.size());
  for (std::size_t i = 0; i < kInputCount; ++i) {
    spec.w_in[i].assign(kInputWeights[i].begin(), kInputWeights[i].end());
  }
  spec.b_hidden.assign(kHiddenBiases.begin(), kHiddenBiases.end());
  spec.w_out.assign(kOutputWeights.begin(), kOutputWeights.end());
  spec.b_out = kOutputBias;
  return spec;
}

const NetworkSpec& paper_spec() {
  static const NetworkSpec spec = load_paper_weights();
  return spec;
}

VerificationReport verify_claimed_output(const ScenarioInput& input, double tolerance) {
  if (!(tolerance > 0.0) || std::isnan(tolerance)) {
    throw Error(ErrorKind::invalid_request, "tolerance must be a positive number");
  }
  VerificationReport report;
  report.input_used = input;
  report.computed_output = forward(paper_spec(), input).acceptance;
  report.claimed_output = kClaimedOutput;
  report.absolute_deviation = std::abs(report.computed_output - report.claimed_output);
  report.matches = report.absolute_deviation <= tolerance;
  report.note =
      "The input that produced the reported output is not published; this report "
      "states the deviation at the supplied input and asserts nothing about a match.";
  return report;
}

std::optional<VariableMeta> find_variable_meta(std::string_view name) {
  for (const auto& meta : variable_table()) {
    if (meta.name == name) return meta;
  }
  return std::nullopt;
}

VariableMeta variable_meta(std::string_view name) {
  if (auto meta = find_variable_meta(name)) return *meta;
  throw Error(ErrorKind::unknown_variable, "unknown variable '" + std::string(name) + "'");
}

std::span<const VariableMeta> all_variable_meta() { return variable_table(); }

std::vector<SensitivityEntry> rank_gradient(const NetworkSpec& spec,
                                            std::span<const double> gradient) {
  std::vector<std::size_t> order(gradient.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(gradient[a]) > std::abs(gradient[b]);
  });

  std::vector<SensitivityEntry> out;
  out.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto i = order[r];
    SensitivityEntry e;
    e.variable = spec.input_names.at(i);
    e.gradient = gradient[i];
    e.rank = r + 1;
    if (auto meta = find_variable_meta(e.variable)) e.polarity = meta->polarity;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<SensitivityEntry> sensitivity_report(const NetworkSpec& spec,
                                                 const ScenarioInput& input) {
  const auto result = forward(spec, input);
  return rank_gradient(spec, result.input_gradient);
}

std::vector<SensitivityEntry> sensitivity_report(const ScenarioInput& input) {
  return sensitivity_report(paper_spec(), input);
}

}  // namespace acceptance

#pragma once

// The published 6-10-1 acceptance model for the 2024 Mexican judicial reform,
// its reported output, and the convergence/divergence grouping of its inputs.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acceptance/network.hpp"

namespace acceptance {

enum class Polarity { convergence, divergence };

const char* to_string(Polarity polarity) noexcept;

struct VariableMeta {
  std::string name;
  std::string label;
  Polarity polarity;
  std::string measurement;
};

/// Output value the published model is reported to display.
inline constexpr double kClaimedOutput = 1.98524;

/// The published parameters, linear output. Built once; immutable.
const NetworkSpec& paper_spec();
NetworkSpec load_paper_weights();

struct VerificationReport {
  ScenarioInput input_used;
  double computed_output = 0.0;
  double claimed_output = kClaimedOutput;
  double absolute_deviation = 0.0;
  bool matches = false;
  std::string note;
};

/// Evaluates the published model at `input` and reports the distance to the
/// claimed output. Throws Error(invalid_request) unless tolerance > 0.
VerificationReport verify_claimed_output(const ScenarioInput& input, double tolerance);

/// Throws Error(unknown_variable) for names outside kCanonicalInputs.
VariableMeta variable_meta(std::string_view name);
std::optional<VariableMeta> find_variable_meta(std::string_view name);
std::span<const VariableMeta> all_variable_meta();

struct SensitivityEntry {
  std::string variable;
  double gradient = 0.0;
  std::size_t rank = 0;  // 1 = largest |gradient|
  std::optional<Polarity> polarity;
};

/// Variables ranked by descending |d acceptance / d x_i|; ties keep input order.
std::vector<SensitivityEntry> sensitivity_report(const NetworkSpec& spec,
                                                 const ScenarioInput& input);

/// Same ranking on the published model.
std::vector<SensitivityEntry> sensitivity_report(const ScenarioInput& input);

/// Ranking from an already computed gradient (no forward pass).
std::vector<SensitivityEntry> rank_gradient(const NetworkSpec& spec,
                                            std::span<const double> gradient);

}  // namespace acceptance

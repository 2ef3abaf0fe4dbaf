#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acceptance {

enum class ErrorKind {
  shape,
  invalid_value,
  out_of_domain,
  unknown_variable,
  invalid_request,
  parse,
  empty_input,
  degenerate_feature,
  divergence,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a training loss or optimizer update stops being finite.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& message)
      : Error(ErrorKind::divergence, message), epoch_(epoch) {}

  /// 1-based epoch at which the non-finite value appeared (0 outside training).
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class DegenerateFeatureError : public Error {
 public:
  explicit DegenerateFeatureError(std::string feature)
      : Error(ErrorKind::degenerate_feature,
              "degenerate feature '" + feature + "': min equals max"),
        feature_(std::move(feature)) {}

  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

}  // namespace acceptance

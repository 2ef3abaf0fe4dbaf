#pragma once

// JSON request/response layer shared by the CLI and the HTTP service. Both
// front ends build the same request document and call the same method here,
// so identical requests produce identical numbers.

#include <string>
#include <string_view>

#include <json.hpp>

#include "acceptance/errors.hpp"
#include "acceptance/network.hpp"

namespace acceptance {

inline constexpr std::string_view kEngineVersion = "acceptance-engine 1.0.0";

/// Malformed request body; carries the offending field name.
class RequestError : public Error {
 public:
  RequestError(std::string field, const std::string& message)
      : Error(ErrorKind::invalid_request, "field '" + field + "': " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// HTTP status for an engine error: 422 for out-of-domain inputs, 400 for
/// other request problems, 500 otherwise.
int http_status_for(const Error& error) noexcept;

/// {"error": kind, "message": ..., "field"?: ...}
nlohmann::json error_body(const Error& error);

class Engine {
 public:
  Engine(NetworkSpec spec, std::string source);

  const NetworkSpec& spec() const noexcept { return spec_; }
  const std::string& source() const noexcept { return source_; }

  nlohmann::json model_info() const;

  // Request bodies:
  //   predict      {"values": [..], "allow_out_of_domain"?: bool}
  //   sweep        {"variable", "start"?, "end"?, "steps", "base": [..]}
  //   grid         {"var_a", "var_b", "steps_a", "steps_b", "base": [..]}
  //   montecarlo   {"samples", "seed", "distributions"?: {name: {"type", ...}}}
  //   compare      {"baseline": [..], "variants": [{"label", "deltas": {name: d}}]}
  //   verify_paper {"values": [..], "tolerance"}
  nlohmann::json predict(const nlohmann::json& body) const;
  nlohmann::json sweep(const nlohmann::json& body) const;
  nlohmann::json grid(const nlohmann::json& body) const;
  nlohmann::json montecarlo(const nlohmann::json& body) const;
  nlohmann::json compare(const nlohmann::json& body) const;
  nlohmann::json verify_paper(const nlohmann::json& body) const;

 private:
  NetworkSpec spec_;
  std::string source_;
};

}  // namespace acceptance

#include "acceptance/engine.hpp"

#include <cmath>

#include "acceptance/paper_model.hpp"
#include "acceptance/scenario.hpp"

namespace acceptance {

namespace {

using nlohmann::json;

const json& field(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end()) throw RequestError(name, "is required");
  return *it;
}

void require_object(const json& body, std::initializer_list<const char*> allowed) {
  if (!body.is_object()) throw RequestError("body", "must be a JSON object");
  for (const auto& [key, _] : body.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw RequestError(key, "is not a recognized field");
  }
}

double number(const json& value, const std::string& name) {
  if (!value.is_number()) throw RequestError(name, "must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw RequestError(name, "must be finite");
  return x;
}

double number_or(const json& body, const char* name, double fallback) {
  auto it = body.find(name);
  return it == body.end() ? fallback : number(*it, name);
}

std::uint64_t unsigned_integer(const json& value, const std::string& name) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  throw RequestError(name, "must be a nonnegative integer");
}

std::string string_field(const json& body, const char* name) {
  const auto& v = field(body, name);
  if (!v.is_string()) throw RequestError(name, "must be a string");
  return v.get<std::string>();
}

bool flag(const json& body) {
  auto it = body.find("allow_out_of_domain");
  if (it == body.end()) return false;
  if (!it->is_boolean()) throw RequestError("allow_out_of_domain", "must be a boolean");
  return it->get<bool>();
}

ScenarioInput scenario(const NetworkSpec& spec, const json& body, const char* name) {
  const auto& v = field(body, name);
  if (!v.is_array()) throw RequestError(name, "must be an array of numbers");
  if (v.size() != spec.input_count()) {
    throw RequestError(name, "must hold exactly " + std::to_string(spec.input_count()) +
                                 " values, got " + std::to_string(v.size()));
  }
  ScenarioInput input;
  input.allow_out_of_domain = flag(body);
  for (std::size_t i = 0; i < v.size(); ++i) {
    input.values.push_back(number(v[i], std::string(name) + "[" + std::to_string(i) + "]"));
  }
  return input;
}

json sensitivity_json(const std::vector<SensitivityEntry>& ranking) {
  json out = json::array();
  for (const auto& e : ranking) {
    out.push_back({{"variable", e.variable},
                   {"gradient", e.gradient},
                   {"rank", e.rank},
                   {"polarity", e.polarity ? json(to_string(*e.polarity)) : json(nullptr)}});
  }
  return out;
}

Distribution distribution(const json& d, const std::string& name) {
  if (!d.is_object()) throw RequestError(name, "must be an object with a 'type'");
  const auto type_it = d.find("type");
  if (type_it == d.end() || !type_it->is_string()) throw RequestError(name + ".type", "is required");
  const auto type = type_it->get<std::string>();
  const auto get = [&](const char* key) {
    auto it = d.find(key);
    if (it == d.end()) throw RequestError(name + "." + key, "is required");
    return number(*it, name + "." + key);
  };
  if (type == "uniform") return Distribution::uniform(get("lo"), get("hi"));
  if (type == "triangular") return Distribution::triangular(get("lo"), get("mode"), get("hi"));
  if (type == "point") return Distribution::point(get("value"));
  throw RequestError(name + ".type", "must be uniform, triangular, or point");
}

}  // namespace

int http_status_for(const Error& error) noexcept {
  switch (error.kind()) {
    case ErrorKind::out_of_domain:
      return 422;
    case ErrorKind::shape:
    case ErrorKind::invalid_value:
    case ErrorKind::unknown_variable:
    case ErrorKind::invalid_request:
    case ErrorKind::parse:
    case ErrorKind::empty_input:
      return 400;
    default:
      return 500;
  }
}

json error_body(const Error& error) {
  json body = {{"error", to_string(error.kind())}, {"message", error.what()}};
  if (const auto* req = dynamic_cast<const RequestError*>(&error)) body["field"] = req->field();
  return body;
}

Engine::Engine(NetworkSpec spec, std::string source)
    : spec_(std::move(spec)), source_(std::move(source)) {
  require_valid_spec(spec_);
}

json Engine::model_info() const {
  json variables = json::array();
  json convergence = json::array();
  json divergence = json::array();
  for (const auto& name : spec_.input_names) {
    json v = {{"name", name}};
    if (auto meta = find_variable_meta(name)) {
      v["label"] = meta->label;
      v["polarity"] = to_string(meta->polarity);
      v["measurement"] = meta->measurement;
      (meta->polarity == Polarity::convergence ? convergence : divergence).push_back(name);
    } else {
      v["polarity"] = nullptr;
    }
    variables.push_back(std::move(v));
  }
  return {{"engine_version", kEngineVersion},
          {"source", source_},
          {"input_names", spec_.input_names},
          {"hidden_size", spec_.hidden_size},
          {"output_activation", to_string(spec_.output_activation)},
          {"parameter_count", spec_.parameter_count()},
          {"variables", variables},
          {"convergence", convergence},
          {"divergence", divergence},
          {"claimed_output", kClaimedOutput}};
}

json Engine::predict(const json& body) const {
  require_object(body, {"values", "allow_out_of_domain"});
  const auto input = scenario(spec_, body, "values");
  const auto r = forward(spec_, input);
  return {{"engine_version", kEngineVersion},
          {"values", input.values},
          {"acceptance", r.acceptance},
          {"hidden_pre", r.hidden_pre},
          {"hidden_post", r.hidden_post},
          {"gradient", r.input_gradient},
          {"sensitivity", sensitivity_json(rank_gradient(spec_, r.input_gradient))}};
}

json Engine::sweep(const json& body) const {
  require_object(body, {"variable", "start", "end", "steps", "base", "allow_out_of_domain"});
  SweepRequest req;
  req.variable = string_field(body, "variable");
  req.start = number_or(body, "start", 0.0);
  req.end = number_or(body, "end", 1.0);
  req.steps = unsigned_integer(field(body, "steps"), "steps");
  req.base = scenario(spec_, body, "base");
  json points = json::array();
  for (const auto& p : acceptance::sweep(spec_, req)) {
    points.push_back({{"x", p.x}, {"acceptance", p.acceptance}});
  }
  return {{"engine_version", kEngineVersion}, {"variable", req.variable}, {"points", points}};
}

json Engine::grid(const json& body) const {
  require_object(body, {"var_a", "var_b", "steps_a", "steps_b", "base", "allow_out_of_domain"});
  GridRequest req;
  req.var_a = string_field(body, "var_a");
  req.var_b = string_field(body, "var_b");
  req.steps_a = unsigned_integer(field(body, "steps_a"), "steps_a");
  req.steps_b = unsigned_integer(field(body, "steps_b"), "steps_b");
  req.base = scenario(spec_, body, "base");
  const auto g = grid_sweep(spec_, req);
  return {{"engine_version", kEngineVersion},
          {"var_a", req.var_a},
          {"var_b", req.var_b},
          {"a_values", g.a_values},
          {"b_values", g.b_values},
          {"acceptance", g.acceptance}};
}

json Engine::montecarlo(const json& body) const {
  require_object(body, {"samples", "seed", "distributions"});
  MonteCarloRequest req;
  req.samples = unsigned_integer(field(body, "samples"), "samples");
  req.seed = unsigned_integer(field(body, "seed"), "seed");
  req.distributions.assign(spec_.input_count(), Distribution::uniform(0.0, 1.0));
  if (auto it = body.find("distributions"); it != body.end()) {
    if (!it->is_object()) throw RequestError("distributions", "must be an object keyed by variable");
    for (const auto& [name, d] : it->items()) {
      const auto idx = spec_.input_index(name);
      if (!idx) throw Error(ErrorKind::unknown_variable, "unknown variable '" + name + "'");
      req.distributions[*idx] = distribution(d, "distributions." + name);
    }
  }
  const auto s = monte_carlo(spec_, req);
  json quantiles = json::object();
  for (std::size_t q = 0; q < kQuantilePercents.size(); ++q) {
    quantiles["p" + std::to_string(kQuantilePercents[q])] = s.quantiles[q];
  }
  json dists = json::object();
  for (std::size_t i = 0; i < req.distributions.size(); ++i) {
    const auto& d = req.distributions[i];
    dists[spec_.input_names[i]] = {
        {"type", to_string(d.kind)}, {"lo", d.lo}, {"mode", d.mode}, {"hi", d.hi}};
  }
  return {{"engine_version", kEngineVersion},
          {"samples", s.samples},
          {"seed", req.seed},
          {"distributions", dists},
          {"mean", s.mean},
          {"std", s.std},
          {"min", s.min},
          {"max", s.max},
          {"quantiles", quantiles}};
}

json Engine::compare(const json& body) const {
  require_object(body, {"baseline", "variants", "allow_out_of_domain"});
  const auto baseline = scenario(spec_, body, "baseline");
  std::vector<Variant> variants;
  if (auto it = body.find("variants"); it != body.end()) {
    if (!it->is_array()) throw RequestError("variants", "must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto& v = (*it)[k];
      const auto where = "variants[" + std::to_string(k) + "]";
      if (!v.is_object()) throw RequestError(where, "must be an object");
      Variant variant;
      auto label = v.find("label");
      if (label == v.end() || !label->is_string()) throw RequestError(where + ".label", "must be a string");
      variant.label = label->get<std::string>();
      if (auto d = v.find("deltas"); d != v.end()) {
        if (!d->is_object()) throw RequestError(where + ".deltas", "must be an object");
        for (const auto& [name, delta] : d->items()) {
          variant.deltas[name] = number(delta, where + ".deltas." + name);
        }
      }
      variants.push_back(std::move(variant));
    }
  }
  const auto c = acceptance::compare(spec_, baseline, variants);
  json out_variants = json::array();
  for (const auto& v : c.variants) {
    out_variants.push_back({{"label", v.label},
                            {"values", v.input.values},
                            {"acceptance", v.acceptance},
                            {"delta", v.delta},
                            {"clamped", v.clamped}});
  }
  return {{"engine_version", kEngineVersion},
          {"baseline", {{"values", c.baseline.values}, {"acceptance", c.baseline_acceptance}}},
          {"variants", out_variants}};
}

json Engine::verify_paper(const json& body) const {
  require_object(body, {"values", "tolerance", "allow_out_of_domain"});
  const double tolerance = number(field(body, "tolerance"), "tolerance");
  if (!(tolerance > 0.0)) throw RequestError("tolerance", "must be positive");
  const auto input = scenario(paper_spec(), body, "values");
  const auto r = verify_claimed_output(input, tolerance);
  return {{"engine_version", kEngineVersion},
          {"values", r.input_used.values},
          {"tolerance", tolerance},
          {"computed_output", r.computed_output},
          {"claimed_output", r.claimed_output},
          {"absolute_deviation", r.absolute_deviation},
          {"matches", r.matches},
          {"note", r.note}};
}

}  // namespace acceptance

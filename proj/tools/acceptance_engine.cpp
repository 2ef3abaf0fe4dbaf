// acceptance-engine: command-line front end.
//
// Exit codes: 0 success, 2 usage/parse error, 3 data error, 4 numerical
// divergence during training.

#include <charconv>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance/engine.hpp"
#include "acceptance/model_io.hpp"
#include "acceptance/paper_model.hpp"
#include "acceptance/scenario.hpp"
#include "acceptance/server.hpp"
#include "acceptance/training.hpp"

namespace {

using acceptance::Engine;
using acceptance::Error;
using acceptance::ErrorKind;
using acceptance::format_double;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::divergence: return kExitDivergence;
    case ErrorKind::degenerate_feature:
    case ErrorKind::empty_input: return kExitData;
    default: return kExitUsage;
  }
}

double parse_number(const std::string& text, const std::string& what) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  return value;
}

std::string join(const std::vector<double>& values, const char* sep = " ") {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += sep;
    out += format_double(values[k]);
  }
  return out;
}

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

// --- shared option groups -------------------------------------------------

struct ModelOptions {
  std::string path;
  bool paper = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("model", path, "Model spec file (JSON)");
    cmd->add_flag("--paper", paper, "Use the published model");
  }

  Engine load() const {
    if (paper && !path.empty()) throw UsageError("give either a model file or --paper, not both");
    if (paper) return Engine(acceptance::load_paper_weights(), "paper");
    if (path.empty()) throw UsageError("a model file or --paper is required");
    return Engine(acceptance::load_model(path), path);
  }
};

struct InputOptions {
  std::map<std::string, std::optional<double>> vars;
  std::optional<double> all;
  std::string input_file;
  bool allow_out_of_domain = false;

  void attach(CLI::App* cmd) {
    for (auto name : acceptance::kCanonicalInputs) {
      auto& slot = vars[std::string(name)];
      cmd->add_option("--" + std::string(name), slot,
                      "Value of " + std::string(name) + " in [0, 1]");
    }
    cmd->add_option("--all", all, "Value for every variable not set individually");
    cmd->add_option("--input-file", input_file, "JSON file holding {\"values\": [6 numbers]}");
    cmd->add_flag("--allow-out-of-domain", allow_out_of_domain,
                  "Accept values outside [0, 1]");
  }

  // Values in canonical order; variables map onto model inputs by position.
  std::vector<double> resolve() const {
    std::vector<std::optional<double>> values(acceptance::kInputCount, all);
    if (!input_file.empty()) {
      json doc;
      try {
        doc = json::parse(acceptance::read_file(input_file));
      } catch (const json::parse_error& e) {
        throw UsageError("input file '" + input_file + "': " + e.what());
      }
      if (!doc.is_object() || !doc.contains("values") || !doc["values"].is_array() ||
          doc["values"].size() != acceptance::kInputCount) {
        throw UsageError("input file '" + input_file + "' must hold {\"values\": [6 numbers]}");
      }
      for (std::size_t i = 0; i < acceptance::kInputCount; ++i) {
        if (!doc["values"][i].is_number()) throw UsageError("input file values must be numbers");
        values[i] = doc["values"][i].get<double>();
      }
    }
    std::vector<std::string> missing;
    std::vector<double> out;
    for (std::size_t i = 0; i < acceptance::kInputCount; ++i) {
      const std::string name(acceptance::kCanonicalInputs[i]);
      if (auto v = vars.at(name)) values[i] = v;
      if (!values[i]) {
        missing.push_back("--" + name);
        continue;
      }
      out.push_back(*values[i]);
    }
    if (!missing.empty()) {
      std::string msg = "missing variable value(s):";
      for (const auto& m : missing) msg += " " + m;
      throw UsageError(msg);
    }
    return out;
  }
};

void print_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

void write_csv(const std::string& path, const std::string& contents) {
  acceptance::write_file(path, contents);
}

// --- commands ----------------------------------------------------------------

int run_predict(const ModelOptions& model, const InputOptions& input, bool as_json) {
  const auto engine = model.load();
  json body = {{"values", input.resolve()}};
  if (input.allow_out_of_domain) body["allow_out_of_domain"] = true;
  const auto r = engine.predict(body);
  if (as_json) {
    print_json(r);
    return kExitOk;
  }
  std::cout << "acceptance " << format_double(r["acceptance"].get<double>()) << "\n"
            << "hidden_pre " << join(doubles(r["hidden_pre"])) << "\n"
            << "hidden_post " << join(doubles(r["hidden_post"])) << "\n"
            << "gradient " << join(doubles(r["gradient"])) << "\n"
            << "sensitivity rank variable gradient polarity\n";
  for (const auto& e : r["sensitivity"]) {
    std::cout << "  " << e["rank"].get<std::size_t>() << " " << e["variable"].get<std::string>()
              << " " << format_double(e["gradient"].get<double>()) << " "
              << (e["polarity"].is_null() ? "-" : e["polarity"].get<std::string>()) << "\n";
  }
  return kExitOk;
}

int run_verify(const InputOptions& input, const std::string& tolerance_text, bool as_json) {
  const double tolerance = parse_number(tolerance_text, "--tolerance");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw UsageError("--tolerance must be a positive finite number");
  }
  const Engine engine(acceptance::load_paper_weights(), "paper");
  json body = {{"values", input.resolve()}, {"tolerance", tolerance}};
  if (input.allow_out_of_domain) body["allow_out_of_domain"] = true;
  const auto r = engine.verify_paper(body);
  if (as_json) {
    print_json(r);
    return kExitOk;
  }
  std::cout << "input " << join(doubles(r["values"])) << "\n"
            << "computed " << format_double(r["computed_output"].get<double>()) << "\n"
            << "claimed " << format_double(r["claimed_output"].get<double>()) << "\n"
            << "deviation " << format_double(r["absolute_deviation"].get<double>()) << "\n"
            << "tolerance " << format_double(tolerance) << "\n"
            << "verdict " << (r["matches"].get<bool>() ? "MATCH" : "NO MATCH") << "\n"
            << "note " << r["note"].get<std::string>() << "\n";
  return kExitOk;
}

struct TrainOptions {
  std::string dataset;
  std::string out;
  acceptance::TrainingConfig config;
  std::string activation = "linear";
  bool as_json = false;
};

int run_train(const TrainOptions& opt) {
  auto config = opt.config;
  auto activation = acceptance::parse_output_activation(opt.activation);
  if (!activation) throw UsageError("--activation must be linear or sigmoid");
  config.output_activation = *activation;
  config.validate();

  const auto dataset = acceptance::load_dataset(opt.dataset);
  try {
    acceptance::require_valid_dataset(dataset);
    if (dataset.rows.empty()) throw Error(ErrorKind::empty_input, "dataset has no rows");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }

  const auto result = acceptance::train(dataset, config);
  acceptance::save_model(result.spec, opt.out);

  const auto& h = result.history;
  if (opt.as_json) {
    print_json({{"engine_version", acceptance::kEngineVersion},
                {"model", opt.out},
                {"epochs_run", h.epochs_run},
                {"history_length", h.train_mse.size()},
                {"train_mse", h.train_mse},
                {"final_train_mse", h.train_mse.back()},
                {"test_mse", h.test_mse},
                {"seed", config.seed}});
    return kExitOk;
  }
  std::cout << "model " << opt.out << "\n"
            << "rows " << dataset.size() << "\n"
            << "epochs_run " << h.epochs_run << "\n"
            << "history_length " << h.train_mse.size() << "\n"
            << "initial_train_mse " << format_double(h.train_mse.front()) << "\n"
            << "final_train_mse " << format_double(h.train_mse.back()) << "\n"
            << "test_mse " << format_double(h.test_mse) << "\n";
  return kExitOk;
}

int run_generate(const ModelOptions& model, std::size_t rows, double noise,
                 std::uint64_t seed, const std::string& out) {
  const auto engine = model.load();
  const auto data = acceptance::generate_synthetic(engine.spec(), rows, noise, seed);
  acceptance::save_dataset(data, out);
  std::cout << "wrote " << rows << " rows to " << out << "\n";
  return kExitOk;
}

int run_sweep(const ModelOptions& model, const InputOptions& base, const std::string& variable,
              double start, double end, std::size_t steps, const std::string& csv, bool as_json) {
  const auto engine = model.load();
  json body = {{"variable", variable}, {"start", start}, {"end", end}, {"steps", steps},
               {"base", base.resolve()}};
  if (base.allow_out_of_domain) body["allow_out_of_domain"] = true;
  const auto r = engine.sweep(body);
  std::string table = variable + ",acceptance\n";
  for (const auto& p : r["points"]) {
    table += format_double(p["x"].get<double>()) + "," +
             format_double(p["acceptance"].get<double>()) + "\n";
  }
  if (!csv.empty()) write_csv(csv, table);
  if (as_json) {
    print_json(r);
  } else {
    std::cout << variable << " acceptance\n";
    for (const auto& p : r["points"]) {
      std::cout << format_double(p["x"].get<double>()) << " "
                << format_double(p["acceptance"].get<double>()) << "\n";
    }
  }
  return kExitOk;
}

int run_grid(const ModelOptions& model, const InputOptions& base, const std::string& var_a,
             const std::string& var_b, std::size_t steps_a, std::size_t steps_b,
             const std::string& csv, bool as_json) {
  const auto engine = model.load();
  json body = {{"var_a", var_a}, {"var_b", var_b}, {"steps_a", steps_a},
               {"steps_b", steps_b}, {"base", base.resolve()}};
  if (base.allow_out_of_domain) body["allow_out_of_domain"] = true;
  const auto r = engine.grid(body);
  const auto a = doubles(r["a_values"]);
  const auto b = doubles(r["b_values"]);
  const auto cells = r["acceptance"].get<std::vector<std::vector<double>>>();
  if (!csv.empty()) {
    std::string table = var_a + "," + var_b + ",acceptance\n";
    for (std::size_t p = 0; p < a.size(); ++p) {
      for (std::size_t q = 0; q < b.size(); ++q) {
        table += format_double(a[p]) + "," + format_double(b[q]) + "," +
                 format_double(cells[p][q]) + "\n";
      }
    }
    write_csv(csv, table);
  }
  if (as_json) {
    print_json(r);
    return kExitOk;
  }
  std::cout << var_a << "\\" << var_b << " " << join(b) << "\n";
  for (std::size_t p = 0; p < a.size(); ++p) {
    std::cout << format_double(a[p]) << " " << join(cells[p]) << "\n";
  }
  return kExitOk;
}

json parse_distribution(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw UsageError("--dist expects NAME=TYPE:PARAMS, got '" + spec + "'");
  std::vector<std::string> parts;
  std::size_t start = eq + 1;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const auto& type = parts[0];
  const auto num = [&](std::size_t k) { return parse_number(parts[k], "--dist " + spec); };
  if (type == "uniform" && parts.size() == 3) return {{"type", type}, {"lo", num(1)}, {"hi", num(2)}};
  if (type == "triangular" && parts.size() == 4) {
    return {{"type", type}, {"lo", num(1)}, {"mode", num(2)}, {"hi", num(3)}};
  }
  if (type == "point" && parts.size() == 2) return {{"type", type}, {"value", num(1)}};
  throw UsageError("--dist '" + spec +
                   "': use uniform:LO:HI, triangular:LO:MODE:HI, or point:V");
}

int run_montecarlo(const ModelOptions& model, const std::vector<std::string>& dists,
                   std::size_t samples, std::uint64_t seed, bool as_json) {
  const auto engine = model.load();
  json distributions = json::object();
  for (const auto& d : dists) distributions[d.substr(0, d.find('='))] = parse_distribution(d);
  const auto r = engine.montecarlo(
      {{"samples", samples}, {"seed", seed}, {"distributions", distributions}});
  if (as_json) {
    print_json(r);
    return kExitOk;
  }
  std::cout << "samples " << r["samples"].get<std::size_t>() << "\n"
            << "seed " << r["seed"].get<std::uint64_t>() << "\n";
  for (const char* key : {"mean", "std", "min", "max"}) {
    std::cout << key << " " << format_double(r[key].get<double>()) << "\n";
  }
  for (int percent : acceptance::kQuantilePercents) {
    const auto key = "p" + std::to_string(percent);
    std::cout << key << " " << format_double(r["quantiles"][key].get<double>()) << "\n";
  }
  return kExitOk;
}

json parse_variant(const std::string& spec) {
  const auto colon = spec.find(':');
  json variant = {{"label", spec.substr(0, colon)}, {"deltas", json::object()}};
  if (variant["label"].get<std::string>().empty()) {
    throw UsageError("--variant '" + spec + "' needs a label");
  }
  if (colon == std::string::npos) return variant;
  std::size_t start = colon + 1;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto item = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    start = comma == std::string::npos ? spec.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--variant item '" + item + "' must be NAME=DELTA");
    variant["deltas"][item.substr(0, eq)] = parse_number(item.substr(eq + 1), "--variant " + spec);
  }
  return variant;
}

int run_compare(const ModelOptions& model, const InputOptions& base,
                const std::vector<std::string>& variant_specs, bool as_json) {
  const auto engine = model.load();
  json variants = json::array();
  for (const auto& v : variant_specs) variants.push_back(parse_variant(v));
  json body = {{"baseline", base.resolve()}, {"variants", variants}};
  if (base.allow_out_of_domain) body["allow_out_of_domain"] = true;
  const auto r = engine.compare(body);
  if (as_json) {
    print_json(r);
    return kExitOk;
  }
  std::cout << "label acceptance delta clamped\n"
            << "baseline " << format_double(r["baseline"]["acceptance"].get<double>()) << " 0 -\n";
  for (const auto& v : r["variants"]) {
    std::string clamped;
    for (const auto& c : v["clamped"]) clamped += (clamped.empty() ? "" : ",") + c.get<std::string>();
    std::cout << v["label"].get<std::string>() << " "
              << format_double(v["acceptance"].get<double>()) << " "
              << format_double(v["delta"].get<double>()) << " "
              << (clamped.empty() ? "-" : clamped) << "\n";
  }
  return kExitOk;
}

acceptance::Server* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ModelOptions& model, const std::string& host, int port_flag) {
  acceptance::Server server(model.load());
  const int port = acceptance::resolve_port(port_flag);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return kExitUsage;
  }
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cout << "listening on http://" << host << ":" << bound << std::endl;
  server.run();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance model engine: inference, training, and what-if scenarios"};
  app.require_subcommand(1);
  bool as_json = false;

  auto* predict = app.add_subcommand("predict", "Evaluate the model at one scenario");
  ModelOptions predict_model;
  InputOptions predict_input;
  predict_model.attach(predict);
  predict_input.attach(predict);
  predict->add_flag("--json", as_json, "Machine-readable output");

  auto* verify = app.add_subcommand("verify-paper", "Compare the published model's output with its reported value");
  InputOptions verify_input;
  std::string tolerance = "1e-3";
  verify_input.attach(verify);
  verify->add_option("--tolerance", tolerance, "Match tolerance (positive)");
  verify->add_flag("--json", as_json, "Machine-readable output");

  auto* train = app.add_subcommand("train", "Train a network on a CSV dataset");
  TrainOptions train_opt;
  train->add_option("dataset", train_opt.dataset, "Dataset CSV")->required();
  train->add_option("--out", train_opt.out, "Where to write the trained model")->required();
  train->add_option("--learning-rate,--lr", train_opt.config.learning_rate);
  train->add_option("--beta1", train_opt.config.beta1);
  train->add_option("--beta2", train_opt.config.beta2);
  train->add_option("--epsilon", train_opt.config.epsilon);
  train->add_option("--epochs", train_opt.config.epochs);
  train->add_option("--split", train_opt.config.split_ratio, "Training fraction");
  train->add_option("--seed", train_opt.config.seed);
  train->add_option("--hidden", train_opt.config.hidden_size, "Hidden layer width");
  train->add_option("--activation", train_opt.activation, "linear or sigmoid output");
  train->add_flag("--json", train_opt.as_json, "Machine-readable output");

  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset drawn from a model");
  ModelOptions generate_model;
  std::size_t gen_rows = 1000;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate_model.attach(generate);
  generate->add_option("--rows", gen_rows);
  generate->add_option("--noise", gen_noise, "Gaussian noise standard deviation");
  generate->add_option("--seed", gen_seed);
  generate->add_option("--out", gen_out)->required();

  auto* sweep = app.add_subcommand("sweep", "Vary one variable, hold the rest");
  ModelOptions sweep_model;
  InputOptions sweep_base;
  std::string sweep_var, sweep_csv;
  double sweep_start = 0.0, sweep_end = 1.0;
  std::size_t sweep_steps = 11;
  sweep_model.attach(sweep);
  sweep_base.attach(sweep);
  sweep->add_option("--var", sweep_var, "Variable to sweep")->required();
  sweep->add_option("--start", sweep_start);
  sweep->add_option("--end", sweep_end);
  sweep->add_option("--steps", sweep_steps);
  sweep->add_option("--csv", sweep_csv, "Also write the points to this CSV file");
  sweep->add_flag("--json", as_json, "Machine-readable output");

  auto* grid = app.add_subcommand("grid", "Vary two variables over [0, 1]");
  ModelOptions grid_model;
  InputOptions grid_base;
  std::string grid_a, grid_b, grid_csv;
  std::size_t grid_steps_a = 11, grid_steps_b = 11;
  grid_model.attach(grid);
  grid_base.attach(grid);
  grid->add_option("--var-a", grid_a)->required();
  grid->add_option("--var-b", grid_b)->required();
  grid->add_option("--steps-a", grid_steps_a);
  grid->add_option("--steps-b", grid_steps_b);
  grid->add_option("--csv", grid_csv, "Also write the cells to this CSV file");
  grid->add_flag("--json", as_json, "Machine-readable output");

  auto* mc = app.add_subcommand("montecarlo", "Summarize acceptance under input uncertainty");
  ModelOptions mc_model;
  std::vector<std::string> mc_dists;
  std::size_t mc_samples = 10000;
  std::uint64_t mc_seed = 0;
  mc_model.attach(mc);
  mc->add_option("--dist", mc_dists,
                 "NAME=uniform:LO:HI | NAME=triangular:LO:MODE:HI | NAME=point:V "
                 "(unset variables are uniform on [0, 1])");
  mc->add_option("--samples", mc_samples);
  mc->add_option("--seed", mc_seed);
  mc->add_flag("--json", as_json, "Machine-readable output");

  auto* cmp = app.add_subcommand("compare", "Compare named variants against a baseline");
  ModelOptions cmp_model;
  InputOptions cmp_base;
  std::vector<std::string> cmp_variants;
  cmp_model.attach(cmp);
  cmp_base.attach(cmp);
  cmp->add_option("--variant", cmp_variants, "LABEL:NAME=DELTA,NAME=DELTA");
  cmp->add_flag("--json", as_json, "Machine-readable output");

  auto* serve = app.add_subcommand("serve", "Run the JSON HTTP service");
  ModelOptions serve_model;
  std::string host = "127.0.0.1";
  int port = 0;
  serve_model.attach(serve);
  serve->add_option("--host", host);
  serve->add_option("--port", port, "Port (falls back to ACCEPTANCE_ENGINE_PORT, then 8080)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*predict) return run_predict(predict_model, predict_input, as_json);
    if (*verify) return run_verify(verify_input, tolerance, as_json);
    if (*train) return run_train(train_opt);
    if (*generate) return run_generate(generate_model, gen_rows, gen_noise, gen_seed, gen_out);
    if (*sweep) {
      return run_sweep(sweep_model, sweep_base, sweep_var, sweep_start, sweep_end, sweep_steps,
                       sweep_csv, as_json);
    }
    if (*grid) {
      return run_grid(grid_model, grid_base, grid_a, grid_b, grid_steps_a, grid_steps_b, grid_csv,
                      as_json);
    }
    if (*mc) return run_montecarlo(mc_model, mc_dists, mc_samples, mc_seed, as_json);
    if (*cmp) return run_compare(cmp_model, cmp_base, cmp_variants, as_json);
    if (*serve) return run_serve(serve_model, host, port);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const acceptance::DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (epoch " << e.epoch() << ")\n";
    return kExitDivergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

#include "acceptance/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "acceptance/errors.hpp"

namespace acceptance {

namespace {

using nlohmann::json;

constexpr std::string_view kAcceptanceColumn = "acceptance";

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorKind::parse, "model file: " + what);
}

const json& require_key(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

double number_at(const json& value, const std::string& where) {
  if (!value.is_number()) parse_fail("'" + where + "' must be a number");
  return value.get<double>();
}

std::vector<double> number_array(const json& value, const std::string& where) {
  if (!value.is_array()) parse_fail("'" + where + "' must be an array");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t k = 0; k < value.size(); ++k) {
    out.push_back(number_at(value[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void append_array(std::string& out, const std::vector<double>& values) {
  out += '[';
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ", ";
    out += format_double(values[k]);
  }
  out += ']';
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

NetworkSpec parse_model_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("top level must be an object");

  static const std::set<std::string> known = {"format_version", "input_names", "hidden_size",
                                              "w_in",           "b_hidden",    "w_out",
                                              "b_out",          "output_activation"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) parse_fail("unknown field '" + key + "'");
  }

  const auto& version = require_key(doc, "format_version");
  if (!version.is_number_integer() || version.get<long long>() != kModelFormatVersion) {
    parse_fail("format_version must be " + std::to_string(kModelFormatVersion));
  }

  NetworkSpec spec;
  const auto& names = require_key(doc, "input_names");
  if (!names.is_array()) parse_fail("'input_names' must be an array");
  for (const auto& n : names) {
    if (!n.is_string()) parse_fail("'input_names' entries must be strings");
    spec.input_names.push_back(n.get<std::string>());
  }

  const auto& hidden = require_key(doc, "hidden_size");
  if (!hidden.is_number_unsigned()) parse_fail("'hidden_size' must be a nonnegative integer");
  spec.hidden_size = hidden.get<std::size_t>();

  const auto& w_in = require_key(doc, "w_in");
  if (!w_in.is_array()) parse_fail("'w_in' must be an array of rows");
  for (std::size_t i = 0; i < w_in.size(); ++i) {
    spec.w_in.push_back(number_array(w_in[i], "w_in[" + std::to_string(i) + "]"));
  }
  spec.b_hidden = number_array(require_key(doc, "b_hidden"), "b_hidden");
  spec.w_out = number_array(require_key(doc, "w_out"), "w_out");
  spec.b_out = number_at(require_key(doc, "b_out"), "b_out");

  const auto& activation = require_key(doc, "output_activation");
  if (!activation.is_string()) parse_fail("'output_activation' must be a string");
  auto parsed = parse_output_activation(activation.get<std::string>());
  if (!parsed) parse_fail("'output_activation' must be \"linear\" or \"sigmoid\"");
  spec.output_activation = *parsed;

  require_valid_spec(spec);
  return spec;
}

std::string to_model_json(const NetworkSpec& spec) {
  require_valid_spec(spec);
  std::string out = "{\n";
  out += "  \"format_version\": " + std::to_string(kModelFormatVersion) + ",\n";
  out += "  \"input_names\": [";
  for (std::size_t i = 0; i < spec.input_names.size(); ++i) {
    if (i) out += ", ";
    out += json(spec.input_names[i]).dump();
  }
  out += "],\n";
  out += "  \"hidden_size\": " + std::to_string(spec.hidden_size) + ",\n";
  out += "  \"w_in\": [\n";
  for (std::size_t i = 0; i < spec.w_in.size(); ++i) {
    out += "    ";
    append_array(out, spec.w_in[i]);
    out += i + 1 < spec.w_in.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"b_hidden\": ";
  append_array(out, spec.b_hidden);
  out += ",\n  \"w_out\": ";
  append_array(out, spec.w_out);
  out += ",\n  \"b_out\": " + format_double(spec.b_out) + ",\n";
  out += "  \"output_activation\": \"" + std::string(to_string(spec.output_activation)) +
         "\"\n}\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::parse, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::parse, "failed writing '" + path.string() + "'");
}

NetworkSpec load_model(const std::filesystem::path& path) {
  return parse_model_json(read_file(path));
}

void save_model(const NetworkSpec& spec, const std::filesystem::path& path) {
  write_file(path, to_model_json(spec));
}

Dataset parse_dataset_csv(std::string_view text) {
  std::vector<std::string> expected(kCanonicalInputs.begin(), kCanonicalInputs.end());
  expected.emplace_back(kAcceptanceColumn);

  Dataset out;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    const auto cells = split_csv_line(line);
    const auto where = "dataset line " + std::to_string(line_no) + ": ";
    if (!header_seen) {
      if (cells != expected) {
        throw Error(ErrorKind::parse,
                    where + "header must be "
                            "transparency,legitimacy,independence,quality,costs,impartiality,"
                            "acceptance");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != expected.size()) {
      throw Error(ErrorKind::parse, where + "expected " + std::to_string(expected.size()) +
                                        " columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, values[c]);
      if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(values[c])) {
        throw Error(ErrorKind::parse,
                    where + "column '" + expected[c] + "' is not a finite number: '" + cell + "'");
      }
    }
    Sample s;
    s.inputs.assign(values.begin(), values.begin() + kInputCount);
    s.target = values.back();
    out.rows.push_back(std::move(s));
  }
  if (!header_seen) throw Error(ErrorKind::parse, "dataset is empty (no header)");
  out.feature_ranges = observed_ranges(out.rows);
  return out;
}

std::string to_dataset_csv(const Dataset& dataset) {
  std::string out;
  for (auto name : kCanonicalInputs) {
    out += name;
    out += ',';
  }
  out += kAcceptanceColumn;
  out += '\n';
  for (const auto& row : dataset.rows) {
    for (double x : row.inputs) {
      out += format_double(x);
      out += ',';
    }
    out += format_double(row.target);
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset_csv(read_file(path));
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, to_dataset_csv(dataset));
}

}  // namespace acceptance

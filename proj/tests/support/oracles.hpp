#pragma once

// Test-only reference computations. Nothing here calls into the library's
// arithmetic; these are the independent sides of the dual-route checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance/network.hpp"

namespace oracle {

// Published parameters, transcribed a second time neuron by neuron (column
// order) rather than variable by variable, so a slip in either copy shows up
// as a mismatch.
struct Neuron {
  std::array<double, 6> w;  // transparency..impartiality into this neuron
  double bias;
  double w_out;
};

inline const std::array<Neuron, 10>& paper_neurons() {
  static const std::array<Neuron, 10> n = {{
      {{-5.928, -0.9665, -3.915, 10.889, 6.658, -8.568}, 1.463, -17.232},
      {{2.114, 1.174, 7.162, 3.203, -5.917, 4.127}, 3.565, -2.925},
      {{-0.0986, -2.9226, -2.952, -0.432, -2.782, 6.765}, 5.878, -8.706},
      {{5.871, -1.561, 1.204, -2.308, 9.889, -1.903}, 2.115, -3.915},
      {{1.457, -3.168, -0.883, 1.673, 3.032, 3.871}, 0.674, -3.116},
      {{3.884, 10.890, -8.568, -1.127, -10.431, 4.065}, 4.774, 10.890},
      {{4.447, 2.457, -0.533, 8.571, 5.992, 7.431}, -1.621, 3.203},
      {{-0.908, -4.431, -3.383, -0.753, 2.764, 1.112}, 3.122, -10.431},
      {{1.093, 1.716, -5.872, 2.871, -7.843, -5.662}, 5.983, 4.786},
      {{-4.706, 5.662, 4.178, 3.594, -6.102, 1.671}, 0.913, 4.706},
  }};
  return n;
}

inline constexpr double kPaperOutputBias = 1.985;

// Exact values of the published model, computed beforehand in decimal
// arithmetic (50 significant digits) term by term:
//   y(0)   = sum_{j: b_j > 0} w_oj * b_j + b_o
//   g_i(0) = sum_{j: b_j > 0} w_oj * w_ij
//   y(0.5) = sum_j w_oj * max(0, b_j + 0.5 * sum_i w_ij) + b_o
inline constexpr double kPaperAtZeros = -42.852824;
inline constexpr std::array<double, 6> kPaperGradientAtZeros = {
    104.1540506, 254.3177456, 3.793139, -163.188796, -330.043970, 85.498392};
inline constexpr double kPaperAtHalf = -21.2107759;
inline constexpr double kClaimed = 1.98524;

/// Straight-line per-term evaluation of the all-zero input: only neurons with
/// positive bias contribute.
inline double paper_zero_input_oracle() {
  double y = kPaperOutputBias;
  for (const auto& n : paper_neurons()) {
    if (n.bias > 0) y += n.w_out * n.bias;
  }
  return y;
}

/// Naive double loop, neuron by neuron, for any spec.
inline double naive_forward(const acceptance::NetworkSpec& s, const std::vector<double>& x) {
  double linear = s.b_out;
  for (std::size_t j = 0; j < s.hidden_size; ++j) {
    double z = s.b_hidden[j];
    for (std::size_t i = 0; i < x.size(); ++i) z += s.w_in[i][j] * x[i];
    if (z < 0) z = 0;
    linear += s.w_out[j] * z;
  }
  if (s.output_activation == acceptance::OutputActivation::sigmoid) {
    return 1.0 / (1.0 + std::exp(-linear));
  }
  return linear;
}

inline std::vector<double> naive_pre(const acceptance::NetworkSpec& s,
                                     const std::vector<double>& x) {
  std::vector<double> pre(s.hidden_size);
  for (std::size_t j = 0; j < s.hidden_size; ++j) {
    pre[j] = s.b_hidden[j];
    for (std::size_t i = 0; i < x.size(); ++i) pre[j] += s.w_in[i][j] * x[i];
  }
  return pre;
}

inline double min_abs_pre(const acceptance::NetworkSpec& s, const std::vector<double>& x) {
  double m = INFINITY;
  for (double p : naive_pre(s, x)) m = std::min(m, std::abs(p));
  return m;
}

/// Central difference of f at x along coordinate k.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t k, double h = 1e-6) {
  const double x0 = x[k];
  x[k] = x0 + h;
  const double up = f(x);
  x[k] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

/// Central difference of the batch MSE with respect to flattened parameter k,
/// evaluated in long double so rounding in the loss stays far below the
/// truncation error even where the gradient is tiny. Flat layout: w_in
/// row-major (input, hidden), then b_hidden, w_out, b_out.
inline double mse_parameter_difference(const acceptance::NetworkSpec& s,
                                       const std::vector<std::vector<double>>& xs,
                                       const std::vector<double>& ts, std::size_t k,
                                       double h = 1e-6) {
  const std::size_t n_in = s.input_count(), n_h = s.hidden_size;
  std::vector<long double> flat;
  for (const auto& row : s.w_in) flat.insert(flat.end(), row.begin(), row.end());
  flat.insert(flat.end(), s.b_hidden.begin(), s.b_hidden.end());
  flat.insert(flat.end(), s.w_out.begin(), s.w_out.end());
  flat.push_back(s.b_out);
  const bool sig = s.output_activation == acceptance::OutputActivation::sigmoid;
  const auto loss = [&](const std::vector<long double>& p) {
    long double sum = 0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
      long double y = p[n_in * n_h + 2 * n_h];
      for (std::size_t j = 0; j < n_h; ++j) {
        long double z = p[n_in * n_h + j];
        for (std::size_t i = 0; i < n_in; ++i) z += p[i * n_h + j] * xs[n][i];
        if (z > 0) y += p[n_in * n_h + n_h + j] * z;
      }
      if (sig) y = 1.0L / (1.0L + std::exp(-y));
      const long double e = y - ts[n];
      sum += e * e;
    }
    return sum / static_cast<long double>(xs.size());
  };
  auto up = flat, down = flat;
  up[k] += h;
  down[k] -= h;
  return static_cast<double>((loss(up) - loss(down)) / (2.0L * h));
}

/// |a - b| / max(|a|, |b|); two values below 1e-10 in magnitude count as equal.
inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-10) return 0.0;
  return std::abs(a - b) / scale;
}

inline bool close_relative(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Random well-formed spec over the canonical inputs.
inline acceptance::NetworkSpec random_spec(std::mt19937_64& rng, std::size_t hidden,
                                           bool allow_sigmoid = true) {
  std::uniform_real_distribution<double> w(-2.0, 2.0), b(-1.0, 1.0);
  auto s = acceptance::NetworkSpec::zeros(hidden);
  for (auto& row : s.w_in) {
    for (auto& v : row) v = w(rng);
  }
  for (auto& v : s.b_hidden) v = b(rng);
  for (auto& v : s.w_out) v = w(rng);
  s.b_out = b(rng);
  if (allow_sigmoid && rng() % 4 == 0) s.output_activation = acceptance::OutputActivation::sigmoid;
  return s;
}

inline std::vector<double> random_input(std::mt19937_64& rng, std::size_t n = 6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  auto dir = std::filesystem::temp_directory_path() /
             ("acceptance-" + tag + "-" + std::to_string(rng() % 1000000000));
  std::filesystem::create_directories(dir);
  return dir;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `program args` through the shell, capturing stdout and stderr.
inline CommandResult run_command(const std::string& program, const std::string& args) {
  const auto err_path = scratch_dir("stderr") / "err.txt";
  const std::string cmd = "'" + program + "' " + args + " 2>'" + err_path.string() + "'";
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  std::filesystem::remove_all(err_path.parent_path());
  return r;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "acceptance/errors.hpp"
#include "acceptance/network.hpp"
#include "acceptance/paper_model.hpp"
#include "support/oracles.hpp"

using namespace acceptance;

namespace {

ScenarioInput in(std::vector<double> v) { return {std::move(v), false}; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an acceptance::Error";
  return ErrorKind::parse;
}

}  // namespace

TEST(Relu, Examples) {
  EXPECT_EQ(relu(-3.0), 0.0);
  EXPECT_EQ(relu(2.5), 2.5);
  EXPECT_EQ(relu(0.0), 0.0);
}

TEST(Relu, RejectsNonFinite) {
  EXPECT_EQ(kind_of([] { relu(std::nan("")); }), ErrorKind::invalid_value);
  EXPECT_EQ(kind_of([] { relu(INFINITY); }), ErrorKind::invalid_value);
}

TEST(Relu, PositiveHomogeneity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(0.0, 50.0), x(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double s = a(rng), v = x(rng);
    EXPECT_EQ(relu(s * v), s * relu(v));
  }
  EXPECT_EQ(relu(0.0 * -4.0), 0.0 * relu(-4.0));
}

TEST(Forward, ZeroSpecGivesZero) {
  const auto spec = NetworkSpec::zeros(10);
  EXPECT_EQ(forward(spec, in({0.1, 0.9, 0.3, 0.4, 0.5, 1.0})).acceptance, 0.0);
}

TEST(Forward, OutputReducesToOutputBias) {
  auto spec = NetworkSpec::zeros(10);
  spec.b_out = 1.985;
  EXPECT_EQ(forward(spec, in({0.2, 0.2, 0.7, 0.1, 0.0, 1.0})).acceptance, 1.985);
}

TEST(Forward, PaperFixtureAtZeros) {
  const auto r = forward(paper_spec(), ScenarioInput::filled(0.0));
  EXPECT_NEAR(r.acceptance, oracle::kPaperAtZeros, 1e-9);
  EXPECT_NEAR(r.acceptance, oracle::paper_zero_input_oracle(), 1e-9);
  // Neuron 7 has a negative bias and stays off.
  EXPECT_EQ(r.hidden_post[6], 0.0);
  EXPECT_EQ(r.hidden_pre[6], -1.621);
}

TEST(Forward, PaperFixtureAtHalf) {
  const auto r = forward(paper_spec(), ScenarioInput::filled(0.5));
  EXPECT_NEAR(r.acceptance, oracle::kPaperAtHalf, 1e-9);
}

TEST(Forward, ResultInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto spec = oracle::random_spec(rng, 1 + rng() % 10, false);
    const auto r = forward(spec, in(oracle::random_input(rng)));
    double linear = 0.0;
    for (std::size_t j = 0; j < spec.hidden_size; ++j) {
      EXPECT_EQ(r.hidden_post[j], std::max(0.0, r.hidden_pre[j]));
      EXPECT_GE(r.hidden_post[j], 0.0);
      linear += spec.w_out[j] * r.hidden_post[j];
    }
    EXPECT_TRUE(oracle::close_relative(r.acceptance, linear + spec.b_out, 1e-12));
  }
}

TEST(Forward, SigmoidOutput) {
  std::mt19937_64 rng(3);
  auto spec = oracle::random_spec(rng, 5, false);
  spec.output_activation = OutputActivation::sigmoid;
  const auto x = oracle::random_input(rng);
  const auto r = forward(spec, in(x));
  double linear = spec.b_out;
  for (std::size_t j = 0; j < spec.hidden_size; ++j) linear += spec.w_out[j] * r.hidden_post[j];
  EXPECT_NEAR(r.acceptance, 1.0 / (1.0 + std::exp(-linear)), 1e-15);
}

TEST(Forward, OracleEquivalenceOnRandomSpecs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = oracle::random_spec(rng, 1 + rng() % 10);
    const auto x = oracle::random_input(rng);
    const double got = forward(spec, in(x)).acceptance;
    EXPECT_TRUE(oracle::close_relative(got, oracle::naive_forward(spec, x), 1e-12))
        << "trial " << trial;
  }
}

TEST(Forward, BitReproducible) {
  const auto x = in({0.13, 0.77, 0.41, 0.05, 0.92, 0.6});
  const auto a = forward(paper_spec(), x);
  const auto b = forward(paper_spec(), x);
  EXPECT_EQ(a.acceptance, b.acceptance);
  EXPECT_EQ(a.hidden_pre, b.hidden_pre);
  EXPECT_EQ(a.input_gradient, b.input_gradient);
}

TEST(Forward, ConcurrentCallsAgree) {
  const auto x = in({0.3, 0.1, 0.4, 0.1, 0.5, 0.9});
  const double expected = forward(paper_spec(), x).acceptance;
  std::vector<double> got(8);
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < got.size(); ++t) {
      threads.emplace_back([&, t] {
        for (int k = 0; k < 1000; ++k) got[t] = forward(paper_spec(), x).acceptance;
      });
    }
  }
  for (double g : got) EXPECT_EQ(g, expected);
}

TEST(Forward, PiecewiseLinearity) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 200; ++trial) {
    const auto spec = oracle::random_spec(rng, 1 + rng() % 10, false);
    const auto a = oracle::random_input(rng);
    const auto b = oracle::random_input(rng);
    std::vector<double> m(6);
    for (int i = 0; i < 6; ++i) m[i] = (a[i] + b[i]) / 2;
    const auto pa = oracle::naive_pre(spec, a), pb = oracle::naive_pre(spec, b);
    bool same = true;
    for (std::size_t j = 0; j < pa.size(); ++j) {
      same = same && (pa[j] > 0) == (pb[j] > 0) && std::abs(pa[j]) >= 1e-9 && std::abs(pb[j]) >= 1e-9;
    }
    if (!same) continue;
    ++checked;
    const double ya = forward(spec, in(a)).acceptance;
    const double yb = forward(spec, in(b)).acceptance;
    EXPECT_NEAR(forward(spec, in(m)).acceptance, (ya + yb) / 2, 1e-9);
  }
  EXPECT_GE(checked, 50);
}

TEST(Forward, ZeroingOutputWeightRemovesItsContribution) {
  const auto x = in({0.2, 0.4, 0.6, 0.8, 0.3, 0.5});
  const auto base = forward(paper_spec(), x);
  for (std::size_t j = 0; j < 10; ++j) {
    auto spec = paper_spec();
    spec.w_out[j] = 0.0;
    const double changed = forward(spec, x).acceptance;
    EXPECT_NEAR(changed - base.acceptance, -paper_spec().w_out[j] * base.hidden_post[j], 1e-12)
        << "neuron " << j + 1;
  }
}

TEST(Forward, Errors) {
  const auto& spec = paper_spec();
  EXPECT_EQ(kind_of([&] { forward(spec, in({0.1, 0.2})); }), ErrorKind::shape);
  EXPECT_EQ(kind_of([&] { forward(spec, in({0.1, 0.2, NAN, 0, 0, 0})); }), ErrorKind::invalid_value);
  EXPECT_EQ(kind_of([&] { forward(spec, in({0.1, 0.2, 1.5, 0, 0, 0})); }), ErrorKind::out_of_domain);
  EXPECT_EQ(kind_of([&] { forward(spec, in({-0.1, 0, 0, 0, 0, 0})); }), ErrorKind::out_of_domain);

  auto bad = spec;
  bad.w_in[2][3] = INFINITY;
  EXPECT_EQ(kind_of([&] { forward(bad, ScenarioInput::filled(0.5)); }), ErrorKind::invalid_value);
  bad = spec;
  bad.w_out.pop_back();
  EXPECT_EQ(kind_of([&] { forward(bad, ScenarioInput::filled(0.5)); }), ErrorKind::shape);
}

TEST(Forward, OutOfDomainAllowedWithFlag) {
  ScenarioInput x{{1.5, -0.2, 0.3, 0.3, 0.3, 0.3}, true};
  EXPECT_NEAR(forward(paper_spec(), x).acceptance,
              oracle::naive_forward(paper_spec(), x.values), 1e-9);
}

TEST(InputGradient, ZeroSpecGivesZeroVector) {
  const auto g = input_gradient(NetworkSpec::zeros(4), ScenarioInput::filled(0.3));
  EXPECT_EQ(g, std::vector<double>(6, 0.0));
}

TEST(InputGradient, AllUnitsInactiveGivesZeroVector) {
  std::mt19937_64 rng(9);
  auto spec = oracle::random_spec(rng, 6, false);
  for (auto& row : spec.w_in) {
    for (auto& w : row) w = -std::abs(w);
  }
  for (auto& b : spec.b_hidden) b = -0.5;
  const auto g = input_gradient(spec, in(oracle::random_input(rng)));
  EXPECT_EQ(g, std::vector<double>(6, 0.0));
}

TEST(InputGradient, PaperFixtureAtZeros) {
  const auto g = input_gradient(paper_spec(), ScenarioInput::filled(0.0));
  // Per-term oracle: sum over neurons with positive bias of w_oj * w_ij.
  std::array<double, 6> direct{};
  for (const auto& n : oracle::paper_neurons()) {
    if (n.bias <= 0) continue;
    for (int i = 0; i < 6; ++i) direct[i] += n.w_out * n.w[i];
  }
  // Finite differences need an interior point; x = 0 sits on the domain edge,
  // so evaluate the unconstrained formula with the out-of-domain flag.
  const auto f = [](const std::vector<double>& x) {
    return forward(paper_spec(), ScenarioInput{x, true}).acceptance;
  };
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(g[i], oracle::kPaperGradientAtZeros[i], 1e-9) << i;
    EXPECT_NEAR(g[i], direct[i], 1e-9) << i;
    const double fd = oracle::central_difference(f, std::vector<double>(6, 0.0), i);
    EXPECT_LT(oracle::relative_error(g[i], fd), 1e-6) << i;
  }
}

TEST(InputGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 100) {
    const auto spec = oracle::random_spec(rng, 1 + rng() % 10);
    const auto x = oracle::random_input(rng);
    if (oracle::min_abs_pre(spec, x) <= 1e-3) continue;
    ++checked;
    const auto g = input_gradient(spec, in(x));
    const auto f = [&](const std::vector<double>& v) { return oracle::naive_forward(spec, v); };
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_LT(oracle::relative_error(g[i], oracle::central_difference(f, x, i)), 1e-6);
    }
  }
}

TEST(ValidateSpec, PaperFixtureIsValid) { EXPECT_TRUE(validate_spec(paper_spec()).empty()); }

TEST(ValidateSpec, ShortBiasVector) {
  auto spec = paper_spec();
  spec.b_hidden.pop_back();
  const auto v = validate_spec(spec);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "b_hidden");
}

TEST(ValidateSpec, NaNWeight) {
  auto spec = paper_spec();
  spec.w_out[3] = std::numeric_limits<double>::quiet_NaN();
  const auto v = validate_spec(spec);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "w_out");
  EXPECT_NE(v[0].rule.find("finite"), std::string::npos);
}

TEST(ValidateSpec, DuplicateAndRaggedInputs) {
  auto spec = paper_spec();
  spec.input_names[5] = "costs";
  spec.w_in[1].push_back(0.0);
  const auto v = validate_spec(spec);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].field, "input_names");
  EXPECT_EQ(v[1].field, "w_in[1]");
}

TEST(NetworkSpec, FlattenAssignRoundTrip) {
  const auto flat = paper_spec().flatten();
  ASSERT_EQ(flat.size(), 81u);
  auto copy = NetworkSpec::zeros(10);
  copy.assign(flat);
  EXPECT_EQ(copy, paper_spec());
  EXPECT_EQ(kind_of([&] { copy.assign(std::vector<double>(80)); }), ErrorKind::shape);
}

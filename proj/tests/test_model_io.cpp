#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "acceptance/errors.hpp"
#include "acceptance/model_io.hpp"
#include "acceptance/paper_model.hpp"
#include "support/oracles.hpp"

using namespace acceptance;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an acceptance::Error";
  return ErrorKind::shape;
}

const char* kHeader = "transparency,legitimacy,independence,quality,costs,impartiality,acceptance\n";

}  // namespace

TEST(FormatDouble, RoundTripsAwkwardValues) {
  for (double v : {0.1, -5.928, 1.0 / 3.0, 1e-300, -0.0, 123456789.123456789, 5e-324}) {
    const auto text = format_double(v);
    EXPECT_EQ(std::strtod(text.c_str(), nullptr), v) << text;
  }
}

TEST(ModelJson, PaperSpecRoundTrips) {
  const auto text = to_model_json(paper_spec());
  EXPECT_EQ(parse_model_json(text), paper_spec());
  EXPECT_EQ(to_model_json(parse_model_json(text)), text);
}

TEST(ModelJson, RandomSpecsRoundTripExactly) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto spec = oracle::random_spec(rng, 1 + rng() % 16);
    const auto text = to_model_json(spec);
    const auto back = parse_model_json(text);
    EXPECT_EQ(back, spec);
    EXPECT_EQ(to_model_json(back), text);
  }
}

TEST(ModelJson, FilesAreByteIdenticalAfterResave) {
  const auto dir = oracle::scratch_dir("io");
  std::mt19937_64 rng(9);
  const auto spec = oracle::random_spec(rng, 7);
  save_model(spec, dir / "a.json");
  save_model(load_model(dir / "a.json"), dir / "b.json");
  EXPECT_EQ(oracle::read_text(dir / "a.json"), oracle::read_text(dir / "b.json"));
  std::filesystem::remove_all(dir);
}

TEST(ModelJson, Rejections) {
  auto doc = nlohmann::json::parse(to_model_json(paper_spec()));
  auto with = [&](auto edit) {
    auto d = doc;
    edit(d);
    return d.dump();
  };
  EXPECT_EQ(kind_of([&] { parse_model_json("{not json"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_model_json(with([](auto& d) { d["extra"] = 1; })); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_model_json(with([](auto& d) { d["format_version"] = 2; })); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_model_json(with([](auto& d) { d.erase("b_out"); })); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_model_json(with([](auto& d) { d["output_activation"] = "tanh"; })); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_model_json(with([](auto& d) { d["b_hidden"].erase(0); })); }),
            ErrorKind::shape);
  EXPECT_EQ(kind_of([&] { parse_model_json(with([](auto& d) { d["w_out"][0] = "x"; })); }),
            ErrorKind::parse);
}

TEST(ModelJson, MissingFileIsParseError) {
  EXPECT_EQ(kind_of([] { load_model("/nonexistent/model.json"); }), ErrorKind::parse);
}

TEST(DatasetCsv, ParsesAndRanges) {
  const std::string text = std::string(kHeader) +
                           "0.1,0.2,0.3,0.4,0.5,0.6,1.5\n"
                           "0.9,0.8,0.7,0.6,0.5,0.4,-2\n";
  const auto d = parse_dataset_csv(text);
  ASSERT_EQ(d.rows.size(), 2u);
  EXPECT_EQ(d.rows[1].target, -2.0);
  EXPECT_EQ(d.rows[0].inputs[5], 0.6);
  EXPECT_EQ(d.feature_ranges[0].min, 0.1);
  EXPECT_EQ(d.feature_ranges[0].max, 0.9);
}

TEST(DatasetCsv, RoundTrip) {
  auto data = generate_synthetic(paper_spec(), 40, 0.05, 3);
  const auto back = parse_dataset_csv(to_dataset_csv(data));
  ASSERT_EQ(back.rows.size(), data.rows.size());
  for (std::size_t k = 0; k < data.rows.size(); ++k) {
    EXPECT_EQ(back.rows[k].inputs, data.rows[k].inputs);
    EXPECT_EQ(back.rows[k].target, data.rows[k].target);
  }
}

TEST(DatasetCsv, Rejections) {
  EXPECT_EQ(kind_of([] { parse_dataset_csv(""); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_dataset_csv("a,b,c\n1,2,3\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_dataset_csv(std::string(kHeader) + "0.1,0.2,0.3\n"); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_dataset_csv(std::string(kHeader) + "0.1,0.2,0.3,x,0.5,0.6,1\n"); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_dataset_csv(std::string(kHeader) + "0.1,0.2,0.3,nan,0.5,0.6,1\n"); }),
            ErrorKind::parse);
}

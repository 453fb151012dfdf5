#include "shapesel/dataset_io.hpp"
#include "shapesel/json_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace shapesel;

namespace {

LabeledDataset parse(const std::string& text, bool whitespace = false) {
  std::istringstream in(text);
  LoadOptions o;
  o.whitespace = whitespace;
  return parse_ucr_tsv(in, "toy", o);
}

} // namespace

TEST_CASE("load remaps labels to contiguous ids") {
  const auto ds = parse("1\t0.0\t1.0\t2.0\n2\t3.0\t4.0\t5.0\n");
  CHECK(ds.length() == 3);
  CHECK(ds.classes() == std::vector<int>{0, 1});
  CHECK(ds.raw_labels() == std::vector<std::string>{"1", "2"});
  CHECK(ds.series()[0].label == 0);
  CHECK(ds.series()[1].label == 1);
  CHECK(ds.series()[1].values[2] == 5.0);
}

TEST_CASE("labels sort numerically and negative labels are accepted") {
  const auto ds = parse("10\t1\t2\n-1\t3\t4\n2\t5\t6\n-1\t7\t8\n");
  CHECK(ds.raw_labels() == std::vector<std::string>{"-1", "2", "10"});
  CHECK(ds.series()[0].label == 2);
  CHECK(ds.series()[1].label == 0);
  CHECK(ds.class_histogram() == std::vector<std::size_t>{2, 1, 1});
}

TEST_CASE("missing values are interpolated") {
  CHECK(parse("1\t0.0\tNaN\t2.0\n").series()[0].values == Seriesd(Eigen::Vector3d(0.0, 1.0, 2.0)));
  const auto edges = parse("1\tNaN\t4\t\t\t10\tnan\n").series()[0].values;
  CHECK(edges.size() == 6);
  CHECK(edges[0] == 4.0);
  CHECK(edges[2] == doctest::Approx(6.0));
  CHECK(edges[3] == doctest::Approx(8.0));
  CHECK(edges[5] == 10.0);
}

TEST_CASE("variable-length rows are stretched to the longest row") {
  const auto ds = parse("1\t0\t2\n1\t0\t1\t2\t3\t4\n");
  CHECK(ds.length() == 5);
  const Seriesd expected = (Seriesd(5) << 0.0, 0.5, 1.0, 1.5, 2.0).finished();
  CHECK(ds.series()[0].values.isApprox(expected));
}

TEST_CASE("whitespace-separated variant") {
  const auto ds = parse("1  0.0 1.0   2.0\n2 3.0 4.0 5.0\n", true);
  CHECK(ds.length() == 3);
  CHECK(ds.classes().size() == 2);
  CHECK_THROWS_AS(parse("1 0.0 1.0 2.0\n"), DataError);
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(parse("\n\n"), DataError);
  CHECK_THROWS_AS(parse("1\t0.5\n"), DataError);
  CHECK_THROWS_AS(parse("x\t0.5\t1\n"), DataError);
  CHECK_THROWS_AS(parse("1\t0.5\tabc\n"), DataError);
  CHECK_THROWS_AS(parse("1\tNaN\tNaN\n"), DataError);
  CHECK_THROWS_AS(load_ucr_tsv("/nonexistent/file.tsv"), DataError);
}

TEST_CASE("round trip through the TSV writer is exact") {
  std::mt19937_64 rng(7);
  std::vector<LabeledSeries> series;
  for (int i = 0; i < 12; ++i) series.push_back({testing::random_series(rng, 9, 3.0), i % 3});
  const LabeledDataset ds("toy", series, {"-1", "0.5", "7"});
  std::stringstream buf;
  write_ucr_tsv(ds, buf);
  const auto back = parse_ucr_tsv(buf, "toy");
  CHECK(back == ds);
  std::stringstream again;
  write_ucr_tsv(back, again);
  CHECK(again.str() == buf.str());
}

TEST_CASE("label remapping is a bijection") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::ostringstream text;
    std::vector<int> raw;
    for (int i = 0; i < 15; ++i) {
      raw.push_back(testing::uniform_int(rng, -5, 5) * 3);
      text << raw.back() << "\t1\t2\n";
    }
    const auto ds = parse(text.str());
    std::map<int, int> forward;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto [it, inserted] = forward.emplace(raw[i], ds.series()[i].label);
      CHECK(it->second == ds.series()[i].label);
      CHECK(std::stoi(ds.raw_labels()[static_cast<std::size_t>(ds.series()[i].label)]) == raw[i]);
    }
    std::set<int> images;
    for (const auto& [r, l] : forward) images.insert(l);
    CHECK(images.size() == forward.size());
    CHECK(*images.rbegin() == static_cast<int>(forward.size()) - 1);
  }
}

TEST_CASE("real UCR training files match the archive's metadata") {
  // rows, classes and length: archive table, cross-checked with
  // tests/scripts/ucr_counts.py over the raw files.
  struct Expected {
    const char* file;
    std::size_t rows;
    std::size_t classes;
    Index length;
  };
  const Expected table[] = {
      {"ACSF1_TRAIN.tsv", 100, 10, 1460},     {"ArrowHead_TRAIN.tsv", 36, 3, 251},
      {"GunPoint_TRAIN.tsv", 50, 2, 150},     {"ItalyPowerDemand_TRAIN.tsv", 67, 2, 24},
      {"OSULeaf_TRAIN.tsv", 200, 6, 427},     {"PLAID_TRAIN.tsv", 537, 11, 1344},
      {"UnitTest_TRAIN.tsv", 20, 2, 24},
  };
  for (const auto& e : table) {
    CAPTURE(e.file);
    const auto ds = load_ucr_tsv(std::string(SHAPESEL_TEST_DATA) + "/ucr/" + e.file);
    CHECK(ds.size() == e.rows);
    CHECK(ds.classes().size() == e.classes);
    CHECK(ds.length() == e.length);
  }
}

TEST_CASE("resample identity and constants") {
  const Seriesd x = Eigen::Vector4d(1, 2, 3, 4);
  CHECK(resample(x, {4, 0.0}) == x);
  CHECK(resample(x, {4, kSmoothingEpsilon}) == x);
  for (const Index t : {2, 3, 7, 50}) {
    const Seriesd y = resample(Seriesd::Constant(3, 5.0), {t, 1.7});
    CHECK(y.size() == t);
    CHECK((y.array() - 5.0).abs().maxCoeff() <= 1e-9);
  }
  CHECK_THROWS_AS(resample(x, {1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(resample(Seriesd(), {4, 0.0}), std::invalid_argument);
}

TEST_CASE("resample matches the scripted convolution oracle") {
  // Values from tests/scripts/resample_oracle.py.
  Seriesd alt(64);
  for (Index i = 0; i < 64; ++i) alt[i] = static_cast<double>(i % 2);
  const Seriesd out = resample(alt, {8, 2.0});
  const double expected[] = {0.24999634887281041, 0.50000730225437917, 0.49999269774562083,
                             0.50000730225437917, 0.49999269774562083, 0.50000730225437917,
                             0.49999269774562083, 0.75000365112718959};
  for (Index i = 0; i < 8; ++i) CHECK(out[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(std::abs(out.mean() - 0.5) <= 1e-6);

  Seriesd squares(10);
  for (Index i = 0; i < 10; ++i) squares[i] = static_cast<double>(i * i);
  const Seriesd sq = resample(squares, {4, 1.25});
  const double sq_expected[] = {0.78113849362784371, 10.559941444936271, 37.521756018502323,
                                73.300602533550148};
  for (Index i = 0; i < 4; ++i) CHECK(sq[i] == doctest::Approx(sq_expected[i]).epsilon(1e-12));

  const Seriesd up = resample(Eigen::Vector4d(1, 3, 2, 5), {7, kSmoothingEpsilon});
  const double up_expected[] = {1, 2, 3, 2.5, 2, 3.5, 5};
  for (Index i = 0; i < 7; ++i) CHECK(up[i] == doctest::Approx(up_expected[i]).epsilon(1e-15));
}

TEST_CASE("resample is length exact for random inputs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = testing::uniform_int(rng, 1, 300);
    const Index t = testing::uniform_int(rng, 2, 300);
    const double sigma = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    CHECK(resample(testing::random_series(rng, n), {t, sigma}).size() == t);
  }
}

TEST_CASE("resample_dataset") {
  std::mt19937_64 rng(5);
  std::vector<LabeledSeries> series;
  for (int i = 0; i < 9; ++i) series.push_back({testing::random_series(rng, 128), i % 2});
  const LabeledDataset ds("toy", series);

  const auto same = resample_dataset(ds, 128);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK((same.series()[i].values - ds.series()[i].values).cwiseAbs().maxCoeff() <= 1e-9);

  const auto shrunk = resample_dataset(ds, 60);
  CHECK(shrunk.length() == 60);
  for (const auto& s : shrunk.series()) CHECK(s.values.size() == 60);
  CHECK(shrunk.class_histogram() == ds.class_histogram());
  REQUIRE(shrunk.resampled());
  CHECK(shrunk.resampled()->smoothing_sigma == doctest::Approx(128.0 / 60.0 / 2.0));
  CHECK(resample_dataset(ds, 300).resampled()->smoothing_sigma == kSmoothingEpsilon);
}

TEST_CASE("metadata sidecar") {
  const auto ds = resample_dataset(parse("1\t0\t1\t2\t3\n2\t3\t4\t5\t6\n"), 2);
  const auto j = dataset_metadata_to_json(ds);
  CHECK(j["name"] == "toy");
  CHECK(j["length"] == 2);
  CHECK(j["raw_label_map"]["2"] == 1);
  CHECK(j["resample"]["target_length"] == 2);
  CHECK(j["resample"]["sigma"].get<double>() == doctest::Approx(1.0));
  CHECK(dataset_metadata_to_json(parse("1\t0\t1\n")).at("resample").is_null());
}

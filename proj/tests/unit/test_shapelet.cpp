#include "shapesel/json_io.hpp"
#include "shapesel/shapelet.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace shapesel;

namespace {

std::map<int, std::vector<Seriesd>> random_classes(std::mt19937_64& rng, int classes, int per_class, Index length) {
  std::map<int, std::vector<Seriesd>> out;
  for (int c = 0; c < classes; ++c)
    for (int i = 0; i < per_class; ++i) out[c].push_back(testing::random_series(rng, length));
  return out;
}

std::vector<Index> positions(const std::vector<Shapelet>& list) {
  std::vector<Index> out;
  for (const auto& s : list) out.push_back(s.position);
  return out;
}

} // namespace

TEST_CASE("difference profile") {
  std::mt19937_64 rng(1);
  const auto q = ConcatenatedClassSeries::from_segments(
      std::vector<Seriesd>{testing::random_series(rng, 20), testing::random_series(rng, 20)}, 5);
  const auto r = ConcatenatedClassSeries::from_segments(std::vector<Seriesd>{testing::random_series(rng, 30)}, 5);
  const auto own = self_join(q);
  const auto diff_same = difference_profile(own, own);
  for (Index i = 0; i < diff_same.size(); ++i) {
    if (own.mask[i])
      CHECK(diff_same[i] == -testing::kInf);
    else
      CHECK(diff_same[i] == 0.0);
  }
  const auto other = ab_join(q, r);
  const auto diff = difference_profile(other, own);
  for (Index i = 0; i < diff.size(); ++i)
    if (!own.mask[i]) CHECK(diff[i] == other.distances[i] - own.distances[i]);

  const auto r3 = ConcatenatedClassSeries::from_segments(std::vector<Seriesd>{testing::random_series(rng, 30)}, 3);
  const auto q3 = ConcatenatedClassSeries::from_segments(std::vector<Seriesd>{testing::random_series(rng, 40)}, 3);
  CHECK_THROWS_AS(difference_profile(ab_join(q3, r3), own), std::invalid_argument);
}

TEST_CASE("a planted motif maximises the difference profile") {
  std::mt19937_64 rng(5);
  const Index w = 8;
  Seriesd motif(w);
  for (Index i = 0; i < w; ++i) motif[i] = 6.0 * std::sin(0.8 * static_cast<double>(i));
  for (int trial = 0; trial < 10; ++trial) {
    auto classes = random_classes(rng, 2, 3, 40);
    std::vector<Index> planted;
    for (int i = 0; i < 3; ++i) {
      const Index at = testing::uniform_int(rng, 0, 40 - w);
      classes[1][i].segment(at, w) = motif + testing::random_series(rng, w, 0.05);
      planted.push_back(40 * i + at);
    }
    const auto pc = concatenate_classes(testing::make_dataset("planted", classes), w);
    const auto p = cross_class_profiles(pc, 1);
    Index best = 0;
    difference_profile(p.other, p.own).maxCoeff(&best);
    bool inside = false;
    for (const Index at : planted) inside = inside || (best > at - w && best < at + w);
    CHECK(inside);
  }
}

TEST_CASE("two constant classes yield their own levels") {
  std::map<int, std::vector<Seriesd>> classes{
      {0, {Seriesd::Zero(6), Seriesd::Zero(6)}},
      {1, {Seriesd::Ones(6), Seriesd::Ones(6)}},
  };
  const auto set = discover(testing::make_dataset("levels", classes), {4, 1, {}});
  REQUIRE(set.per_class.at(0).size() == 1);
  REQUIRE(set.per_class.at(1).size() == 1);
  CHECK(set.per_class.at(0)[0].values == Seriesd::Zero(4));
  CHECK(set.per_class.at(1)[0].values == Seriesd::Ones(4));
  CHECK(set.per_class.at(0)[0].score == doctest::Approx(2.0));
}

TEST_CASE("k larger than the available candidates returns what exists") {
  std::mt19937_64 rng(9);
  const auto ds = testing::make_dataset("small", random_classes(rng, 2, 2, 12));
  const auto set = discover(ds, {5, 50, {}});
  for (const auto& [c, list] : set.per_class) {
    CHECK(list.size() >= 1);
    CHECK(list.size() < 50);
    CHECK(list.size() <= 4); // two segments of 12, non-overlapping windows of 5
  }
}

TEST_CASE("discovery matches the exhaustive scoring oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const int k_classes = testing::uniform_int(rng, 2, 3);
    const Index w = testing::uniform_int(rng, 3, 6);
    const auto classes = random_classes(rng, k_classes, testing::uniform_int(rng, 2, 3), testing::uniform_int(rng, 10, 16));
    const Index k = testing::uniform_int(rng, 1, 4);
    const auto set = discover(testing::make_dataset("toy", classes), {w, k, {}});
    const auto expected = testing::exhaustive_discovery(classes, w, k);
    for (const auto& [c, pos] : expected) CHECK(positions(set.per_class.at(c)) == pos);
  }
}

TEST_CASE("selection properties") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto classes = random_classes(rng, 3, 4, 60);
    const auto ds = testing::make_dataset("toy", classes);
    const DiscoveryOptions opt{7, 6, {}};
    const auto a = discover(ds, opt);
    const auto b = discover(ds, opt);
    CHECK(shapelet_set_to_json(a).dump() == shapelet_set_to_json(b).dump());
    for (const auto& [c, list] : a.per_class) {
      CHECK(list.size() <= 6);
      for (std::size_t i = 0; i < list.size(); ++i) {
        CHECK(std::isfinite(list[i].score));
        CHECK(list[i].values.size() == 7);
        CHECK(list[i].class_label == c);
        if (i > 0) CHECK(list[i].score <= list[i - 1].score);
        for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(list[i].position - list[j].position) >= 7);
      }
    }

    // translation: positions stay put
    std::vector<LabeledSeries> shifted;
    for (const auto& s : ds.series()) shifted.push_back({(s.values.array() + 3.0).matrix(), s.label});
    const auto moved = discover(LabeledDataset("toy", shifted), opt);
    for (const auto& [c, list] : a.per_class) CHECK(positions(moved.per_class.at(c)) == positions(list));
  }
}

TEST_CASE("select_top_k edge cases") {
  Seriesd scores(6);
  scores << 1.0, 5.0, 5.0, -testing::kInf, 4.0, 0.5;
  CHECK(select_top_k(scores, 1, 3) == std::vector<Index>{1, 2, 4});
  CHECK(select_top_k(scores, 2, 10) == std::vector<Index>{1, 4});
  CHECK(select_top_k(Seriesd::Constant(3, -testing::kInf), 1, 2).empty());
}

TEST_CASE("discovery errors") {
  std::mt19937_64 rng(3);
  const auto single = testing::make_dataset("one", random_classes(rng, 1, 3, 20));
  CHECK_THROWS_AS(discover(single, {5, 2, {}}), DataError);
  const auto ds = testing::make_dataset("two", random_classes(rng, 2, 3, 20));
  CHECK_THROWS_AS(discover(ds, {21, 2, {}}), DataError);
  CHECK_THROWS_AS(discover(ds, {5, 0, {}}), std::invalid_argument);
  // One length-20 series per class: every self-join neighbour falls in the
  // exclusion zone for window 15, so the class has no candidate.
  const auto lonely = testing::make_dataset("lonely", random_classes(rng, 2, 1, 20));
  CHECK_THROWS_AS(discover(lonely, {15, 2, {}}), DataError);
}

TEST_CASE("shapelet set JSON") {
  std::mt19937_64 rng(21);
  const auto set = discover(testing::make_dataset("toy", random_classes(rng, 2, 3, 25)), {5, 3, {}});
  const auto j = shapelet_set_to_json(set);
  const auto keys = [](const Json& o) {
    std::vector<std::string> k;
    for (auto it = o.begin(); it != o.end(); ++it) k.push_back(it.key());
    return k;
  };
  CHECK(keys(j) == std::vector<std::string>{"dataset", "window", "classes"});
  CHECK(keys(j["classes"][0]["shapelets"][0]) == std::vector<std::string>{"position", "score", "values"});
  const auto back = shapelet_set_from_json(Json::parse(j.dump()));
  CHECK(shapelet_set_to_json(back).dump() == j.dump());
  for (const auto& [c, list] : set.per_class)
    for (std::size_t i = 0; i < list.size(); ++i) CHECK(back.per_class.at(c)[i].values == list[i].values);
  CHECK_THROWS_AS(shapelet_set_from_json(Json::parse(R"({"dataset":"x"})")), DataError);
}

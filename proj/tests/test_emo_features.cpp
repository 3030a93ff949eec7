#include <cmath>
#include <fstream>
#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "voxanon/emo_features.hpp"

using namespace voxanon;

TEST_CASE("feature set names and dimensions") {
  for (FeatureSet s : {FeatureSet::kEgemapsSubset, FeatureSet::kMfccFunctionals}) {
    const auto names = FeatureNames(s);
    CHECK(names.size() == FeatureDimension(s));
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
    CHECK(ParseFeatureSet(ToString(s)) == s);
  }
  CHECK(FeatureDimension(FeatureSet::kEgemapsSubset) == 42);
  CHECK(FeatureDimension(FeatureSet::kMfccFunctionals) == 24);
  CHECK(ParseFeatureSet("mfcc") == FeatureSet::kMfccFunctionals);
  CHECK_THROWS_AS(ParseFeatureSet("compare2016"), ValidationError);
}

TEST_CASE("percentiles interpolate linearly between order statistics") {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  CHECK(Percentile(v, 0.0) == 1.0);
  CHECK(Percentile(v, 1.0) == 4.0);
  CHECK(Percentile(v, 0.5) == doctest::Approx(2.5));
  CHECK(Percentile(v, 0.2) == doctest::Approx(1.6));
  CHECK(Percentile({7.0}, 0.8) == 7.0);
  CHECK_THROWS(Percentile({}, 0.5));
}

TEST_CASE("tone features reflect its pitch and level") {
  const AudioBuffer b = testutil::Sine(200.0, 1.0, 16000, 0.5);
  const F0Track f0 = ExtractF0(b);
  const FeatureVector fv = ExtractFeatures(b, f0, FeatureSet::kEgemapsSubset);
  REQUIRE(fv.values.size() == kEgemapsDim);
  CHECK(fv.values[0] == doctest::Approx(std::log(200.0)).epsilon(0.005));
  CHECK(fv.values[1] < 0.01);
  CHECK(fv.values[6] > 0.9);
  CHECK(fv.values[7] == doctest::Approx(20.0 * std::log10(0.5 / std::sqrt(2.0))).epsilon(0.01));
  for (double x : fv.values) CHECK(std::isfinite(x));
}

TEST_CASE("unvoiced input yields zero pitch features") {
  const AudioBuffer b = testutil::Noise(1.0, 8);
  const FeatureVector fv = ExtractFeatures(b, ExtractF0(b), FeatureSet::kEgemapsSubset);
  for (int i = 0; i < 6; ++i) CHECK(fv.values[i] == 0.0);
  const FeatureVector m = ExtractFeatures(b, ExtractF0(b), FeatureSet::kMfccFunctionals);
  CHECK(m.values.size() == kMfccFunctionalsDim);
}

TEST_CASE("utterances shorter than 0.3 s are rejected") {
  const AudioBuffer b = testutil::Sine(200.0, 0.25);
  CHECK_THROWS_AS(ExtractFeatures(b, ExtractF0(b), FeatureSet::kEgemapsSubset),
                  ValidationError);
}

TEST_CASE("feature tables round trip") {
  const auto dir = testutil::ScratchDir("feature_table");
  FeatureTable t;
  t.feature_set = FeatureSet::kMfccFunctionals;
  t.pipeline_hash = 0x1234abcdULL;
  RandomStream rng(1);
  for (int i = 0; i < 5; ++i) {
    t.ids.push_back("utt" + std::to_string(i));
    std::vector<double> row(kMfccFunctionalsDim);
    for (double& x : row) x = rng.Normal();
    t.rows.push_back(row);
  }
  SaveFeatureTable(t, dir / "t.vxft");
  const FeatureTable back = LoadFeatureTable(dir / "t.vxft");
  CHECK(back.feature_set == t.feature_set);
  CHECK(back.pipeline_hash == t.pipeline_hash);
  CHECK(back.ids == t.ids);
  CHECK(back.rows == t.rows);

  t.rows[2].pop_back();
  CHECK_THROWS_AS(SaveFeatureTable(t, dir / "bad.vxft"), ValidationError);
  std::ofstream(dir / "junk.vxft") << "JUNKJUNKJUNK";
  CHECK_THROWS_AS(LoadFeatureTable(dir / "junk.vxft"), IoError);
}

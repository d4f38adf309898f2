#include <gtest/gtest.h>

#include <cmath>

#include "hatenet/classify.hpp"

using namespace hatenet;
using namespace hatenet::classify;

namespace {

// Three well separated Gaussian clusters in `dim` dimensions.
std::vector<LabeledExample> clusters(std::size_t per_class, std::size_t dim, std::uint64_t seed,
                                     double spread = 0.3) {
  Rng rng(seed);
  std::vector<LabeledExample> out;
  for (auto l : kAllLabels) {
    for (std::size_t i = 0; i < per_class; ++i) {
      FeatureVector fv{std::vector<double>(dim), "toy"};
      for (std::size_t d = 0; d < dim; ++d)
        fv.values[d] = (d % kNumLabels == static_cast<std::size_t>(l) ? 4.0 : 0.0) +
                       spread * rng.normal();
      out.push_back({fv, l});
    }
  }
  return out;
}

double accuracy(const ClassifierModel& m, const std::vector<LabeledExample>& ex) {
  std::size_t ok = 0;
  for (const auto& e : ex) ok += predict(m, e.features).label == e.label;
  return static_cast<double>(ok) / static_cast<double>(ex.size());
}

}  // namespace

TEST(HashtagFeatures, CountsRepeatedHashtag) {
  const auto kw = ingest::builtin_keywords();
  const auto fv = extract_hashtag_features("#KungFlu #KungFlu bad", kw);
  ASSERT_EQ(fv.size(), 42u);
  EXPECT_EQ(fv.schema_id, "hashtag-42");
  const auto idx = *kw.index_of("#kungflu");
  for (std::size_t i = 0; i < fv.size(); ++i) EXPECT_EQ(fv.values[i], i == idx ? 2.0 : 0.0);
}

TEST(HashtagFeatures, EmptyIsZero) {
  const auto fv = extract_hashtag_features("", ingest::builtin_keywords());
  for (double v : fv.values) EXPECT_EQ(v, 0.0);
}

// Hand tally: covid19 x2, corona virus x1, #chinavirus x1, #washthehate x1, wuhan virus x1.
TEST(HashtagFeatures, FiveKeywordSentence) {
  const auto kw = ingest::builtin_keywords();
  const auto fv = extract_hashtag_features(
      "COVID19 is not the #ChinaVirus, covid19 or corona virus or wuhan virus. #WashTheHate", kw);
  std::map<std::string, double> expect = {{"covid19", 2}, {"corona virus", 1}, {"#chinavirus", 1},
                                          {"#washthehate", 1}, {"wuhan virus", 1}};
  for (std::size_t i = 0; i < kw.size(); ++i) {
    const auto it = expect.find(kw[i].text);
    EXPECT_EQ(fv.values[i], it == expect.end() ? 0.0 : it->second) << kw[i].text;
  }
}

TEST(HashtagFeatures, RequiresFullKeywordSet) {
  ingest::KeywordSet small;
  small.add("covid19");
  EXPECT_THROW(extract_hashtag_features("covid19", small), ValidationError);
}

TEST(LinguisticFeatures, EmptyTextCountsZero) {
  const auto fv = extract_linguistic_features("");
  ASSERT_EQ(fv.size(), 90u);
  EXPECT_EQ(fv.schema_id, "linguistic-90");
  for (std::size_t i = 0; i < fv.size(); ++i)
    if (i != ling::kSentiment) {
      EXPECT_EQ(fv.values[i], 0.0) << i;
    }
  EXPECT_EQ(fv.values[ling::kSentiment], 0.5);
}

TEST(LinguisticFeatures, DirectCounts) {
  const auto fv = extract_linguistic_features("Hi! http://a.b @x");
  EXPECT_EQ(fv.values[ling::kUrls], 1.0);
  EXPECT_EQ(fv.values[ling::kMentions], 1.0);
  EXPECT_EQ(fv.values[ling::kExclamation], 1.0);
  EXPECT_EQ(fv.values[ling::kPeriod], 0.0);  // the dot inside the URL is skipped
}

// Full 90-slot reference for a three-sentence text, computed by hand from the
// documented slot layout.
TEST(LinguisticFeatures, ThreeSentenceReference) {
  const auto fv = extract_linguistic_features("I love this city. We are NOT afraid! Are you?");
  std::vector<double> e(90, 0.0);
  using namespace ling;
  e[kChars] = 45;
  e[kWords] = 10;
  e[kSentences] = 3;
  e[kUpper] = 6;
  e[kLower] = 27;
  e[kWhitespace] = 9;
  e[kExclamation] = 1;
  e[kQuestion] = 1;
  e[kPeriod] = 1;
  e[kAllCaps] = 1;      // NOT
  e[kCapitalized] = 3;  // I, We, Are
  e[kUnique] = 9;
  e[kShortWords] = 6;   // I, We, are, NOT, Are, you
  e[kUpperRatio] = 6.0 / 33.0;
  e[kPunctRatio] = 3.0 / 45.0;
  e[kWhitespaceRatio] = 9.0 / 45.0;
  e[kTypeToken] = 9.0 / 10.0;
  e[kAllCapsRatio] = 1.0 / 10.0;
  e[kExclamationRatio] = 1.0 / 45.0;
  e[kQuestionRatio] = 1.0 / 45.0;
  e[kFirstSingular] = 1;
  e[kFirstPlural] = 1;
  e[kSecond] = 1;
  e[kPositive] = 1;  // love (+3)
  e[kNegation] = 1;  // not
  e[kSentiment] = 1.0;
  e[kValenceSum] = 3;
  e[kFirstRatio] = 2.0 / 10.0;
  e[kSecondRatio] = 1.0 / 10.0;
  e[kPositiveRatio] = 1.0 / 10.0;
  e[kNegationRatio] = 1.0 / 10.0;
  e[kHasQuestion] = 1;
  e[kHasExclamation] = 1;
  // word lengths 1,4,4,4,2,3,3,6,3,3
  e[kWordLenMean] = 3.3;
  e[kWordLenStd] = std::sqrt(1.61);
  e[kWordLenMin] = 1;
  e[kWordLenMax] = 6;
  e[kWordLenMedian] = 3;
  e[kWordLenHist + 0] = 1;
  e[kWordLenHist + 1] = 1;
  e[kWordLenHist + 2] = 4;
  e[kWordLenHist + 3] = 3;
  e[kWordLenHist + 5] = 1;
  // sentence lengths 4,4,2
  e[kSentLenMean] = 10.0 / 3.0;
  e[kSentLenStd] = std::sqrt(8.0 / 9.0);
  e[kSentLenMin] = 2;
  e[kSentLenMax] = 4;
  e[kSentLenMedian] = 4;
  for (std::size_t i = 0; i < 90; ++i) EXPECT_NEAR(fv.values[i], e[i], 1e-12) << "slot " << i;
}

TEST(LinguisticFeatures, SentenceBoundaries) {
  EXPECT_EQ(extract_linguistic_features("Hi!x").values[ling::kSentences], 1.0);
  EXPECT_EQ(extract_linguistic_features("One. Two... three").values[ling::kSentences], 3.0);
  EXPECT_EQ(extract_linguistic_features("Wait... what").values[ling::kEllipsis], 1.0);
  EXPECT_EQ(extract_linguistic_features("e.g. this").values[ling::kSentences], 2.0);
}

TEST(LinguisticFeatures, Deterministic) {
  const std::string t = "Sooo #angry @you!!! \xf0\x9f\x98\xa1 https://x.y";
  EXPECT_EQ(extract_linguistic_features(t).values, extract_linguistic_features(t).values);
  const auto fv = extract_linguistic_features(t);
  EXPECT_EQ(fv.values[ling::kElongated], 1.0);
  EXPECT_EQ(fv.values[ling::kEmoji], 1.0);
  EXPECT_EQ(fv.values[ling::kEndsUrl], 1.0);
  for (double v : fv.values) EXPECT_TRUE(std::isfinite(v));
}

TEST(CombinedFeatures, ConcatenatesBoth) {
  const auto kw = ingest::builtin_keywords();
  const auto fv = extract_features(FeatureSet::Combined, "#KungFlu now", kw);
  EXPECT_EQ(fv.size(), 132u);
  EXPECT_EQ(fv.schema_id, "combined-132");
}

TEST(Train, SeparableReachesHighAccuracy) {
  const auto ex = clusters(40, 6, 11);
  const auto m = train(ex, {8, 50, 0.1}, 5);
  EXPECT_GE(accuracy(m, ex), 0.99);
  EXPECT_EQ(m.training_meta.hyper.epochs, 50u);
  EXPECT_EQ(m.training_meta.seed, 5u);
}

TEST(Train, MissingClass) {
  auto ex = clusters(5, 3, 1);
  std::erase_if(ex, [](const auto& e) { return e.label == Label::Neutral; });
  try {
    train(ex, {}, 1);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("missing class"), std::string::npos);
  }
}

TEST(Train, BitwiseDeterministic) {
  const auto ex = clusters(20, 4, 2);
  const auto a = train(ex, {8, 5, 0.05}, 9);
  const auto b = train(ex, {8, 5, 0.05}, 9);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
  const auto c = train(ex, {8, 5, 0.05}, 10);
  EXPECT_NE(a.weights, c.weights);
}

TEST(Train, NonFiniteLossReportsIteration) {
  auto ex = clusters(10, 2, 3);
  for (auto& e : ex)
    for (auto& v : e.features.values) v *= 1e300;
  try {
    train(ex, {4, 5, 1e10}, 1, {false});
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 0"), std::string::npos);
  }
}

TEST(Predict, ZeroModelTiesToHate) {
  const auto m = ClassifierModel::zeros("toy", 3);
  const auto p = predict(m, FeatureVector{{1.0, -2.0, 5.0}, "toy"});
  EXPECT_EQ(p.label, Label::Hate);
  for (double v : p.probabilities) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Predict, TrainedModelRecoversTrainingPoint) {
  const auto ex = clusters(30, 3, 4);
  const auto m = train(ex, {8, 50, 0.1}, 1);
  EXPECT_EQ(predict(m, ex.front().features).label, ex.front().label);
  EXPECT_EQ(predict(m, ex.back().features).label, ex.back().label);
}

TEST(Predict, SchemaMismatch) {
  const auto m = ClassifierModel::zeros("toy", 3);
  EXPECT_THROW(predict(m, FeatureVector{{1.0, 2.0}, "toy"}), ValidationError);
  EXPECT_THROW(predict(m, FeatureVector{{1.0, 2.0, 3.0}, "other"}), ValidationError);
}

TEST(PredictProperty, ProbabilitiesNormalize) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = ClassifierModel::zeros("toy", 4);
    const double scale = std::pow(10.0, static_cast<double>(rng.below(8)));
    for (auto& w : m.weights) w = scale * rng.normal();
    for (auto& b : m.bias) b = scale * rng.normal();
    FeatureVector x{{rng.normal(), rng.normal(), scale * rng.normal(), 0.0}, "toy"};
    const auto p = predict(m, x);
    double sum = 0;
    for (double v : p.probabilities) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(PredictProperty, InverseScalingKeepsArgmax) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = ClassifierModel::zeros("toy", 5);
    for (auto& w : m.weights) w = rng.normal();
    FeatureVector x{std::vector<double>(5), "toy"};
    for (auto& v : x.values) v = rng.normal();
    const double c = std::pow(2.0, static_cast<double>(rng.below(20)) - 10.0);
    auto ms = m;
    for (auto& w : ms.weights) w /= c;
    auto xs = x;
    for (auto& v : xs.values) v *= c;
    EXPECT_EQ(predict(m, x).label, predict(ms, xs).label);
  }
}

TEST(CrossValidate, SeparableHighMacroF1) {
  const auto r = cross_validate(clusters(40, 6, 12), 5, {8, 30, 0.1}, 3);
  EXPECT_GE(r.macro_f1, 0.95);
  EXPECT_EQ(r.fold_count, 5u);
}

TEST(CrossValidate, RandomLabelsNearChance) {
  auto ex = clusters(60, 6, 13);
  Rng rng(99);
  std::vector<Label> labels;
  for (const auto& e : ex) labels.push_back(e.label);
  rng.shuffle(labels);
  for (std::size_t i = 0; i < ex.size(); ++i) ex[i].label = labels[i];
  const auto r = cross_validate(ex, 5, {8, 20, 0.05}, 3);
  EXPECT_NEAR(r.macro_f1, 1.0 / 3.0, 0.1);
}

TEST(CrossValidate, TwoFoldsOnFourPerClass) {
  const auto r = cross_validate(clusters(4, 2, 1), 2, {2, 3, 0.1}, 1);
  EXPECT_EQ(r.fold_count, 2u);
  std::size_t total = 0;
  for (const auto& row : r.confusion)
    for (auto v : row) total += v;
  EXPECT_EQ(total, 12u);
}

TEST(CrossValidate, ClassTooSmall) {
  auto ex = clusters(4, 2, 1);
  EXPECT_THROW(cross_validate(ex, 5, {}, 1), ValidationError);
}

TEST(CrossValidate, ConfusionRowsEqualGoldCounts) {
  const auto ex = clusters(25, 3, 8, 3.0);
  const auto r = cross_validate(ex, 5, {8, 5, 0.1}, 2);
  for (const auto& row : r.confusion) EXPECT_EQ(row[0] + row[1] + row[2], 25u);
  for (const auto& m : r.per_class) {
    EXPECT_GE(m.precision, 0.0);
    EXPECT_LE(m.precision, 1.0);
    EXPECT_GE(m.f1, 0.0);
    EXPECT_LE(m.f1, 1.0);
  }
  EXPECT_NEAR(r.macro_f1, (r.per_class[0].f1 + r.per_class[1].f1 + r.per_class[2].f1) / 3, 1e-12);
}

TEST(FoldsProperty, TruePartitionAndStratified) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Label> labels;
    const auto n = 15 + rng.below(100);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(static_cast<Label>(rng.below(3)));
    const std::size_t k = 2 + rng.below(6);
    const auto fold = stratified_folds(labels, k, rng.next());
    ASSERT_EQ(fold.size(), labels.size());
    for (auto l : kAllLabels) {
      std::vector<std::size_t> per_fold(k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_LT(fold[i], k);
        if (labels[i] == l) ++per_fold[fold[i]];
      }
      const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
      EXPECT_LE(*hi - *lo, 1u);
    }
  }
}

TEST(EvalMetrics, PerfectPredictions) {
  const std::vector<Label> g = {Label::Hate, Label::Counterspeech, Label::Neutral, Label::Hate};
  const auto r = eval_metrics(g, g);
  for (const auto& m : r.per_class) {
    EXPECT_EQ(m.precision, 1.0);
    EXPECT_EQ(m.recall, 1.0);
    EXPECT_EQ(m.f1, 1.0);
  }
  EXPECT_EQ(r.macro_f1, 1.0);
}

// gold H,H,C predicted H,N,C. Hate P=1 R=1/2 F1=2/3; Counterspeech all 1;
// Neutral P=0 (one false positive) R=0 F1=0; macro = 5/9.
TEST(EvalMetrics, HandConfusion) {
  const auto r = eval_metrics({Label::Hate, Label::Neutral, Label::Counterspeech},
                              {Label::Hate, Label::Hate, Label::Counterspeech});
  EXPECT_DOUBLE_EQ(r[Label::Hate].precision, 1.0);
  EXPECT_DOUBLE_EQ(r[Label::Hate].recall, 0.5);
  EXPECT_NEAR(r[Label::Hate].f1, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r[Label::Counterspeech].f1, 1.0);
  EXPECT_EQ(r[Label::Neutral].precision, 0.0);
  EXPECT_EQ(r[Label::Neutral].f1, 0.0);
  EXPECT_NEAR(r.macro_f1, 5.0 / 9.0, 1e-12);
  EXPECT_EQ(r.confusion[0][2], 1u);
}

TEST(EvalMetrics, AllOneClass) {
  const std::vector<Label> g = {Label::Hate, Label::Counterspeech, Label::Neutral, Label::Neutral};
  const std::vector<Label> p(4, Label::Neutral);
  const auto r = eval_metrics(p, g);
  EXPECT_EQ(r[Label::Neutral].recall, 1.0);
  EXPECT_EQ(r[Label::Hate].recall, 0.0);
  EXPECT_EQ(r[Label::Counterspeech].recall, 0.0);
  EXPECT_DOUBLE_EQ(r[Label::Neutral].precision, 0.5);
}

TEST(EvalMetrics, LengthMismatch) {
  EXPECT_THROW(eval_metrics({Label::Hate}, {Label::Hate, Label::Neutral}), ValidationError);
}

TEST(EvalMetricsProperty, F1Identity) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Label> p, g;
    for (int i = 0; i < 30; ++i) {
      p.push_back(static_cast<Label>(rng.below(3)));
      g.push_back(static_cast<Label>(rng.below(3)));
    }
    const auto r = eval_metrics(p, g);
    double sum = 0;
    for (const auto& m : r.per_class) {
      if (m.precision + m.recall > 0) {
        EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
      }
      sum += m.f1;
    }
    EXPECT_NEAR(r.macro_f1, sum / 3, 1e-12);
  }
}

TEST(ModelIO, RoundTrip) {
  const auto ex = clusters(10, 4, 21);
  const auto m = train(ex, {4, 3, 0.05}, 17);
  const auto back = load_model(save_model(m));
  EXPECT_EQ(back.schema_id, m.schema_id);
  EXPECT_EQ(back.dim, m.dim);
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.bias, m.bias);
  EXPECT_EQ(back.center, m.center);
  EXPECT_EQ(back.scale, m.scale);
  EXPECT_EQ(back.training_meta.seed, 17u);
  EXPECT_EQ(back.training_meta.hyper.batch_size, 4u);
  EXPECT_THROW(load_model("not a model\n"), DataError);
}

TEST(EvalReportCsv, MirrorsTableRows) {
  const auto r = eval_metrics({Label::Hate, Label::Neutral, Label::Counterspeech},
                              {Label::Hate, Label::Hate, Label::Counterspeech});
  const auto rows = eval_report_csv_rows("hashtag", r);
  EXPECT_NE(rows.find("hashtag,hate,1,0.5,"), std::string::npos);
  EXPECT_NE(rows.find("hashtag,macro,"), std::string::npos);
}

#pragma once
// Feature-based tweet classification: hashtag/keyword count features,
// a fixed 90-slot linguistic feature schema, a softmax linear classifier
// trained by minibatch gradient descent, stratified k-fold evaluation and
// per-class precision/recall/F1.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hatenet/core.hpp"
#include "hatenet/ingest.hpp"
#include "hatenet/lexicon.hpp"
#include "hatenet/text.hpp"

namespace hatenet::classify {

enum class FeatureSet : std::uint8_t { Hashtag, Linguistic, Combined };

inline constexpr std::size_t kHashtagDim = 42;
inline constexpr std::size_t kLinguisticDim = 90;

inline std::string_view to_string(FeatureSet f) {
  switch (f) {
    case FeatureSet::Hashtag: return "hashtag";
    case FeatureSet::Linguistic: return "linguistic";
    case FeatureSet::Combined: return "combined";
  }
  return "?";
}

inline std::optional<FeatureSet> parse_feature_set(std::string_view s) {
  const auto v = ascii_lower(trim(s));
  if (v == "hashtag") return FeatureSet::Hashtag;
  if (v == "linguistic") return FeatureSet::Linguistic;
  if (v == "combined") return FeatureSet::Combined;
  return std::nullopt;
}

inline std::size_t dimension(FeatureSet f) {
  switch (f) {
    case FeatureSet::Hashtag: return kHashtagDim;
    case FeatureSet::Linguistic: return kLinguisticDim;
    case FeatureSet::Combined: return kHashtagDim + kLinguisticDim;
  }
  return 0;
}

inline std::string schema_id(FeatureSet f) {
  return std::string(to_string(f)) + "-" + std::to_string(dimension(f));
}

struct FeatureVector {
  std::vector<double> values;
  std::string schema_id;

  std::size_t size() const { return values.size(); }
};

// ---------------------------------------------------------------------------
// Hashtag features: occurrence count of each of the 42 collection keywords.

inline FeatureVector extract_hashtag_features(std::string_view tweet,
                                              const ingest::KeywordSet& kw) {
  if (kw.size() != kHashtagDim)
    throw ValidationError("hashtag features need a " + std::to_string(kHashtagDim) +
                          "-entry keyword set, got " + std::to_string(kw.size()));
  const auto counts = kw.count(text::tokenize(tweet));
  FeatureVector fv{std::vector<double>(counts.begin(), counts.end()),
                   schema_id(FeatureSet::Hashtag)};
  return fv;
}

// ---------------------------------------------------------------------------
// Linguistic features.
//
// Slot layout (90). "words" are Word tokens; character-class counts skip URL
// spans and the '#'/'@' that open hashtags and mentions. Ratios are 0 when
// their denominator is 0. Lengths are in code points.
//
//   0 chars            1 words            2 sentences        3 uppercase
//   4 lowercase        5 digits           6 whitespace       7 exclamation
//   8 question         9 period          10 comma           11 colon
//  12 semicolon       13 quote           14 bracket         15 dash
//  16 asterisk        17 ellipsis        18 other_punct     19 urls
//  20 mentions        21 hashtags        22 emoji           23 elongated_words
//  24 all_caps_words  25 capitalized     26 unique_words    27 long_words (>6)
//  28 short_words(<=3) 29 numeric_words
//  30 uppercase/(upper+lower)            31 digits/chars    32 punctuation/chars
//  33 whitespace/chars 34 unique/words   35 all_caps/words  36 urls/words
//  37 mentions/words  38 hashtags/words  39 exclamation/chars 40 question/chars
//  41 1st sing. pron. 42 1st plural      43 2nd person      44 3rd singular
//  45 3rd plural      46 profanity       47 positive words  48 negative words
//  49 negations       50 sentiment [0,1] 51 valence sum     52 1st person/words
//  53 2nd person/words 54 3rd person/words 55 profanity/words 56 positive/words
//  57 negative/words  58 negation/words
//  59 starts with mention  60 starts with hashtag  61 ends with url
//  62 has '?'         63 has '!'         64 has emoji
//  65-69 word length mean, std (population), min, max, median
//  70-84 word length histogram: lengths 1..14, then >= 15
//  85-89 sentence length in words: mean, std (population), min, max, median

namespace ling {
inline constexpr std::size_t kChars = 0, kWords = 1, kSentences = 2, kUpper = 3, kLower = 4,
                             kDigits = 5, kWhitespace = 6, kExclamation = 7, kQuestion = 8,
                             kPeriod = 9, kComma = 10, kColon = 11, kSemicolon = 12, kQuote = 13,
                             kBracket = 14, kDash = 15, kAsterisk = 16, kEllipsis = 17,
                             kOtherPunct = 18, kUrls = 19, kMentions = 20, kHashtags = 21,
                             kEmoji = 22, kElongated = 23, kAllCaps = 24, kCapitalized = 25,
                             kUnique = 26, kLongWords = 27, kShortWords = 28, kNumeric = 29,
                             kUpperRatio = 30, kDigitRatio = 31, kPunctRatio = 32,
                             kWhitespaceRatio = 33, kTypeToken = 34, kAllCapsRatio = 35,
                             kUrlPerWord = 36, kMentionPerWord = 37, kHashtagPerWord = 38,
                             kExclamationRatio = 39, kQuestionRatio = 40, kFirstSingular = 41,
                             kFirstPlural = 42, kSecond = 43, kThirdSingular = 44,
                             kThirdPlural = 45, kProfanity = 46, kPositive = 47, kNegative = 48,
                             kNegation = 49, kSentiment = 50, kValenceSum = 51,
                             kFirstRatio = 52, kSecondRatio = 53, kThirdRatio = 54,
                             kProfanityRatio = 55, kPositiveRatio = 56, kNegativeRatio = 57,
                             kNegationRatio = 58, kStartsMention = 59, kStartsHashtag = 60,
                             kEndsUrl = 61, kHasQuestion = 62, kHasExclamation = 63,
                             kHasEmoji = 64, kWordLenMean = 65, kWordLenStd = 66,
                             kWordLenMin = 67, kWordLenMax = 68, kWordLenMedian = 69,
                             kWordLenHist = 70, kSentLenMean = 85, kSentLenStd = 86,
                             kSentLenMin = 87, kSentLenMax = 88, kSentLenMedian = 89;
inline constexpr std::size_t kWordLenBins = 15;
static_assert(kWordLenHist + kWordLenBins == kSentLenMean);
static_assert(kSentLenMedian + 1 == kLinguisticDim);

struct Summary {
  double mean = 0, stddev = 0, min = 0, max = 0, median = 0;
};

inline Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / n);
  s.min = v.front();
  s.max = v.back();
  const std::size_t m = v.size() / 2;
  s.median = v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
  return s;
}

inline bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

}  // namespace ling

inline FeatureVector extract_linguistic_features(std::string_view tweet) {
  using namespace ling;
  std::vector<double> f(kLinguisticDim, 0.0);
  const auto tokens = text::tokenize(tweet);

  // Byte mask: 0 = counted, 1 = inside URL, 2 = hashtag/mention sigil.
  std::vector<std::uint8_t> mask(tweet.size(), 0);
  for (const auto& t : tokens) {
    if (t.kind == text::TokenKind::Url)
      std::fill(mask.begin() + static_cast<std::ptrdiff_t>(t.offset),
                mask.begin() + static_cast<std::ptrdiff_t>(t.offset + t.length), 1);
    else if (t.kind == text::TokenKind::Hashtag || t.kind == text::TokenKind::Mention)
      mask[t.offset] = 2;
  }

  double punct_total = 0;
  std::size_t dot_run = 0;
  std::vector<std::size_t> boundaries;  // byte offsets where a sentence ends
  for (std::size_t i = 0; i < tweet.size();) {
    const std::size_t at = i;
    const char32_t c = text::decode_utf8(tweet, i);
    f[kChars] += 1;
    if (text::is_space(c)) {
      f[kWhitespace] += 1;
    }
    if (c == '.' && mask[at] == 0) {
      ++dot_run;
    } else {
      if (dot_run >= 3) f[kEllipsis] += 1;
      dot_run = 0;
    }
    if (mask[at] == 0 && ling::is_terminator(c)) {
      std::size_t k = i;
      if (i >= tweet.size() || text::is_space(text::decode_utf8(tweet, k))) boundaries.push_back(i);
    }
    if (mask[at] != 0 || text::is_space(c)) continue;
    if (c >= 'A' && c <= 'Z') {
      f[kUpper] += 1;
    } else if (c >= 'a' && c <= 'z') {
      f[kLower] += 1;
    } else if (c >= '0' && c <= '9') {
      f[kDigits] += 1;
    } else if (text::is_emoji(c)) {
      f[kEmoji] += 1;
    } else if (!text::is_word_char(c) || c < 0x80) {
      if (c == 0xFE0F || c == 0xFE0E || c == 0x200D) continue;
      punct_total += 1;
      switch (c) {
        case '!': f[kExclamation] += 1; break;
        case '?': f[kQuestion] += 1; break;
        case '.': f[kPeriod] += 1; break;
        case ',': f[kComma] += 1; break;
        case ':': f[kColon] += 1; break;
        case ';': f[kSemicolon] += 1; break;
        case '"': case '\'': case 0x2018: case 0x2019: case 0x201C: case 0x201D:
          f[kQuote] += 1; break;
        case '(': case ')': case '[': case ']': case '{': case '}': f[kBracket] += 1; break;
        case '-': case 0x2013: case 0x2014: f[kDash] += 1; break;
        case '*': f[kAsterisk] += 1; break;
        case 0x2026: f[kEllipsis] += 1; break;
        default: f[kOtherPunct] += 1; break;
      }
    }
  }
  if (dot_run >= 3) f[kEllipsis] += 1;

  std::vector<double> word_lengths;
  std::unordered_set<std::string> unique;
  std::vector<std::string> folded_words;
  std::vector<std::size_t> word_offsets;
  for (const auto& t : tokens) {
    switch (t.kind) {
      case text::TokenKind::Url: f[kUrls] += 1; continue;
      case text::TokenKind::Mention: f[kMentions] += 1; continue;
      case text::TokenKind::Hashtag: f[kHashtags] += 1; continue;
      case text::TokenKind::Word: break;
    }
    const auto raw = tweet.substr(t.offset, t.length);
    const auto len = text::count_code_points(raw);
    word_lengths.push_back(static_cast<double>(len));
    folded_words.push_back(t.folded);
    word_offsets.push_back(t.offset);
    unique.insert(t.folded);
    f[kWords] += 1;
    if (len > 6) f[kLongWords] += 1;
    if (len <= 3) f[kShortWords] += 1;
    std::size_t letters = 0, uppers = 0, lowers = 0, run = 1, max_run = 1;
    bool digits_only = true;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      const char c = raw[k];
      if (c >= 'A' && c <= 'Z') ++letters, ++uppers;
      if (c >= 'a' && c <= 'z') ++letters, ++lowers;
      if (c < '0' || c > '9') digits_only = false;
      if (k > 0) {
        run = raw[k] == raw[k - 1] && ((c | 0x20) >= 'a' && (c | 0x20) <= 'z') ? run + 1 : 1;
        max_run = std::max(max_run, run);
      }
    }
    if (max_run >= 3) f[kElongated] += 1;
    if (letters >= 2 && lowers == 0) f[kAllCaps] += 1;
    else if (!raw.empty() && raw[0] >= 'A' && raw[0] <= 'Z') f[kCapitalized] += 1;
    if (digits_only) f[kNumeric] += 1;
    const auto bin = std::min<std::size_t>(len, kWordLenBins) - 1;
    f[kWordLenHist + bin] += 1;

    switch (lexicon::pronoun_class(t.folded)) {
      case lexicon::Pronoun::FirstSingular: f[kFirstSingular] += 1; break;
      case lexicon::Pronoun::FirstPlural: f[kFirstPlural] += 1; break;
      case lexicon::Pronoun::Second: f[kSecond] += 1; break;
      case lexicon::Pronoun::ThirdSingular: f[kThirdSingular] += 1; break;
      case lexicon::Pronoun::ThirdPlural: f[kThirdPlural] += 1; break;
      case lexicon::Pronoun::None: break;
    }
    if (lexicon::is_profanity(t.folded)) f[kProfanity] += 1;
    if (lexicon::is_negation(t.folded)) f[kNegation] += 1;
    const int v = lexicon::valence(t.folded);
    if (v > 0) f[kPositive] += 1;
    if (v < 0) f[kNegative] += 1;
    f[kValenceSum] += v;
  }
  f[kUnique] = static_cast<double>(unique.size());
  f[kSentiment] = lexicon::sentiment_of_words(folded_words);

  // Sentences: segments between terminator runs followed by whitespace or end
  // of text; only segments holding at least one word count.
  std::vector<double> sentence_lengths;
  {
    std::size_t b = 0;
    double current = 0;
    for (const auto off : word_offsets) {
      while (b < boundaries.size() && boundaries[b] <= off) {
        if (current > 0) sentence_lengths.push_back(current);
        current = 0;
        ++b;
      }
      current += 1;
    }
    if (current > 0) sentence_lengths.push_back(current);
  }
  f[kSentences] = static_cast<double>(sentence_lengths.size());

  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
  const double words = f[kWords], chars = f[kChars];
  f[kUpperRatio] = ratio(f[kUpper], f[kUpper] + f[kLower]);
  f[kDigitRatio] = ratio(f[kDigits], chars);
  f[kPunctRatio] = ratio(punct_total, chars);
  f[kWhitespaceRatio] = ratio(f[kWhitespace], chars);
  f[kTypeToken] = ratio(f[kUnique], words);
  f[kAllCapsRatio] = ratio(f[kAllCaps], words);
  f[kUrlPerWord] = ratio(f[kUrls], words);
  f[kMentionPerWord] = ratio(f[kMentions], words);
  f[kHashtagPerWord] = ratio(f[kHashtags], words);
  f[kExclamationRatio] = ratio(f[kExclamation], chars);
  f[kQuestionRatio] = ratio(f[kQuestion], chars);
  f[kFirstRatio] = ratio(f[kFirstSingular] + f[kFirstPlural], words);
  f[kSecondRatio] = ratio(f[kSecond], words);
  f[kThirdRatio] = ratio(f[kThirdSingular] + f[kThirdPlural], words);
  f[kProfanityRatio] = ratio(f[kProfanity], words);
  f[kPositiveRatio] = ratio(f[kPositive], words);
  f[kNegativeRatio] = ratio(f[kNegative], words);
  f[kNegationRatio] = ratio(f[kNegation], words);

  if (!tokens.empty()) {
    f[kStartsMention] = tokens.front().kind == text::TokenKind::Mention;
    f[kStartsHashtag] = tokens.front().kind == text::TokenKind::Hashtag;
    f[kEndsUrl] = tokens.back().kind == text::TokenKind::Url;
  }
  f[kHasQuestion] = f[kQuestion] > 0;
  f[kHasExclamation] = f[kExclamation] > 0;
  f[kHasEmoji] = f[kEmoji] > 0;

  const auto wl = summarize(word_lengths);
  f[kWordLenMean] = wl.mean;
  f[kWordLenStd] = wl.stddev;
  f[kWordLenMin] = wl.min;
  f[kWordLenMax] = wl.max;
  f[kWordLenMedian] = wl.median;
  const auto sl = summarize(sentence_lengths);
  f[kSentLenMean] = sl.mean;
  f[kSentLenStd] = sl.stddev;
  f[kSentLenMin] = sl.min;
  f[kSentLenMax] = sl.max;
  f[kSentLenMedian] = sl.median;

  return {std::move(f), schema_id(FeatureSet::Linguistic)};
}

inline FeatureVector extract_features(FeatureSet set, std::string_view tweet,
                                      const ingest::KeywordSet& kw) {
  switch (set) {
    case FeatureSet::Hashtag: return extract_hashtag_features(tweet, kw);
    case FeatureSet::Linguistic: return extract_linguistic_features(tweet);
    case FeatureSet::Combined: {
      auto a = extract_hashtag_features(tweet, kw);
      const auto b = extract_linguistic_features(tweet);
      a.values.insert(a.values.end(), b.values.begin(), b.values.end());
      a.schema_id = schema_id(FeatureSet::Combined);
      return a;
    }
  }
  throw Error(ErrorKind::Internal, "unknown feature set");
}

// ---------------------------------------------------------------------------
// Model.

struct Hyperparameters {
  std::size_t batch_size = 8;
  std::size_t epochs = 3;
  double learning_rate = 1e-5;
};

struct TrainingMeta {
  Hyperparameters hyper;
  std::uint64_t seed = 0;
};

// Softmax linear classifier over standardized inputs:
//   p = softmax(W^T ((x - center) * scale) + bias)
// weights are stored feature-major: weights[f * 3 + class].
struct ClassifierModel {
  std::string schema_id;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::array<double, kNumLabels> bias{};
  std::vector<double> center;
  std::vector<double> scale;
  TrainingMeta training_meta;

  static ClassifierModel zeros(std::string schema, std::size_t dim) {
    ClassifierModel m;
    m.schema_id = std::move(schema);
    m.dim = dim;
    m.weights.assign(dim * kNumLabels, 0.0);
    m.center.assign(dim, 0.0);
    m.scale.assign(dim, 1.0);
    return m;
  }

  double weight(std::size_t feature, Label c) const {
    return weights[feature * kNumLabels + static_cast<std::size_t>(c)];
  }
};

struct LabeledExample {
  FeatureVector features;
  Label label;
};

struct Prediction {
  Label label;
  std::array<double, kNumLabels> probabilities;
};

namespace detail {

inline void check_schema(const ClassifierModel& m, const FeatureVector& x) {
  if (x.values.size() != m.dim || (!x.schema_id.empty() && x.schema_id != m.schema_id))
    throw ValidationError("feature schema mismatch: model " + m.schema_id + " (" +
                          std::to_string(m.dim) + ") vs input " + x.schema_id + " (" +
                          std::to_string(x.values.size()) + ")");
}

inline std::array<double, kNumLabels> logits(const ClassifierModel& m,
                                             const std::vector<double>& x) {
  std::array<double, kNumLabels> z = m.bias;
  for (std::size_t f = 0; f < m.dim; ++f) {
    const double v = (x[f] - m.center[f]) * m.scale[f];
    if (v == 0.0) continue;
    const double* w = &m.weights[f * kNumLabels];
    for (std::size_t c = 0; c < kNumLabels; ++c) z[c] += w[c] * v;
  }
  return z;
}

inline std::array<double, kNumLabels> softmax(const std::array<double, kNumLabels>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  std::array<double, kNumLabels> p{};
  double sum = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) sum += (p[c] = std::exp(z[c] - mx));
  for (auto& v : p) v /= sum;
  return p;
}

}  // namespace detail

// Argmax ties resolve in class order Hate < Counterspeech < Neutral.
inline Prediction predict(const ClassifierModel& model, const FeatureVector& x) {
  detail::check_schema(model, x);
  const auto p = detail::softmax(detail::logits(model, x.values));
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c)
    if (p[c] > p[best]) best = c;
  return {static_cast<Label>(best), p};
}

struct TrainOptions {
  bool standardize = true;
};

inline ClassifierModel train(const std::vector<LabeledExample>& examples,
                             const Hyperparameters& hyper, std::uint64_t seed,
                             const TrainOptions& options = {}) {
  if (examples.empty()) throw ValidationError("missing class: no training examples");
  if (hyper.batch_size == 0) throw ValidationError("batch_size must be positive");
  if (!(hyper.learning_rate > 0) || !std::isfinite(hyper.learning_rate))
    throw ValidationError("learning_rate must be positive and finite");
  std::array<std::size_t, kNumLabels> per_class{};
  for (const auto& e : examples) ++per_class[static_cast<std::size_t>(e.label)];
  for (auto l : kAllLabels)
    if (per_class[static_cast<std::size_t>(l)] == 0)
      throw ValidationError("missing class: no training examples labeled " +
                            std::string(to_string(l)));
  const auto& schema = examples.front().features.schema_id;
  const std::size_t dim = examples.front().features.size();
  for (const auto& e : examples) {
    if (e.features.size() != dim || e.features.schema_id != schema)
      throw ValidationError("inconsistent feature schema in training data");
    for (double v : e.features.values)
      if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
  }

  auto model = ClassifierModel::zeros(schema, dim);
  model.training_meta = {hyper, seed};
  if (options.standardize) {
    const double n = static_cast<double>(examples.size());
    for (std::size_t f = 0; f < dim; ++f) {
      double mean = 0;
      for (const auto& e : examples) mean += e.features.values[f];
      mean /= n;
      double var = 0;
      for (const auto& e : examples) {
        const double d = e.features.values[f] - mean;
        var += d * d;
      }
      var /= n;
      model.center[f] = mean;
      model.scale[f] = var > 0 ? 1.0 / std::sqrt(var) : 1.0;
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad_w(dim * kNumLabels);
  std::vector<double> x(dim);
  std::size_t iteration = 0;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t end = std::min(order.size(), start + hyper.batch_size);
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::array<double, kNumLabels> grad_b{};
      double loss = 0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& e = examples[order[k]];
        const auto p = detail::softmax(detail::logits(model, e.features.values));
        const auto y = static_cast<std::size_t>(e.label);
        loss -= std::log(std::max(p[y], 1e-300));
        for (std::size_t f = 0; f < dim; ++f) x[f] = (e.features.values[f] - model.center[f]) * model.scale[f];
        for (std::size_t c = 0; c < kNumLabels; ++c) {
          const double d = p[c] - (c == y ? 1.0 : 0.0);
          grad_b[c] += d;
          for (std::size_t f = 0; f < dim; ++f) grad_w[f * kNumLabels + c] += d * x[f];
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      loss *= inv;
      if (!std::isfinite(loss))
        throw DataError("non-finite training loss at iteration " + std::to_string(iteration));
      for (std::size_t i = 0; i < grad_w.size(); ++i)
        model.weights[i] -= hyper.learning_rate * grad_w[i] * inv;
      for (std::size_t c = 0; c < kNumLabels; ++c)
        model.bias[c] -= hyper.learning_rate * grad_b[c] * inv;
      if (!std::all_of(model.weights.begin(), model.weights.end(), [](double w) { return std::isfinite(w); }) ||
          !std::all_of(model.bias.begin(), model.bias.end(), [](double b) { return std::isfinite(b); }))
        throw DataError("non-finite model parameters at iteration " + std::to_string(iteration));
      ++iteration;
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Evaluation.

struct ClassMetrics {
  double precision = 0, recall = 0, f1 = 0;
};

struct EvalReport {
  std::array<ClassMetrics, kNumLabels> per_class{};
  double macro_f1 = 0;
  std::size_t fold_count = 1;
  // confusion[gold][predicted]
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};

  const ClassMetrics& operator[](Label l) const { return per_class[static_cast<std::size_t>(l)]; }
  double macro_precision() const {
    double s = 0;
    for (const auto& m : per_class) s += m.precision;
    return s / kNumLabels;
  }
  double macro_recall() const {
    double s = 0;
    for (const auto& m : per_class) s += m.recall;
    return s / kNumLabels;
  }
};

inline double f1_score(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

inline EvalReport eval_metrics(const std::vector<Label>& predictions,
                               const std::vector<Label>& golds) {
  if (predictions.size() != golds.size())
    throw ValidationError("eval_metrics: length mismatch (" + std::to_string(predictions.size()) +
                          " predictions vs " + std::to_string(golds.size()) + " golds)");
  if (golds.empty()) throw ValidationError("eval_metrics: empty input");
  EvalReport r;
  for (std::size_t i = 0; i < golds.size(); ++i)
    ++r.confusion[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(predictions[i])];
  double macro = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    std::size_t row = 0, col = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    const double tp = static_cast<double>(r.confusion[c][c]);
    auto& m = r.per_class[c];
    m.precision = col ? tp / static_cast<double>(col) : 0.0;
    m.recall = row ? tp / static_cast<double>(row) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    macro += m.f1;
  }
  r.macro_f1 = macro / kNumLabels;
  return r;
}

// Stratified fold index per example: each class is shuffled with the seed and
// dealt round-robin across the k folds.
inline std::vector<std::size_t> stratified_folds(const std::vector<Label>& labels, std::size_t k,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> fold(labels.size());
  Rng rng(derive_seed(seed, 0xF01D));
  for (auto l : kAllLabels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = j % k;
  }
  return fold;
}

// Per-class precision/recall/F1 are averaged over folds; confusion is summed;
// macro-F1 is the mean of the averaged class F1s.
inline EvalReport cross_validate(const std::vector<LabeledExample>& examples, std::size_t k,
                                 const Hyperparameters& hyper, std::uint64_t seed,
                                 std::size_t workers = 1, const TrainOptions& options = {}) {
  if (k < 2) throw ValidationError("cross_validate: k must be at least 2");
  std::vector<Label> labels;
  labels.reserve(examples.size());
  for (const auto& e : examples) labels.push_back(e.label);
  for (auto l : kAllLabels) {
    const auto n = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
    if (n < k)
      throw ValidationError("class too small to stratify: " + std::string(to_string(l)) +
                            " has " + std::to_string(n) + " examples for " + std::to_string(k) +
                            " folds");
  }
  const auto fold = stratified_folds(labels, k, seed);
  const auto fold_reports = parallel_map(k, workers, [&](std::size_t f) {
    std::vector<LabeledExample> training;
    std::vector<std::size_t> testing;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (fold[i] == f)
        testing.push_back(i);
      else
        training.push_back(examples[i]);
    }
    const auto model = train(training, hyper, derive_seed(seed, f + 1), options);
    std::vector<Label> preds, golds;
    for (const auto i : testing) {
      preds.push_back(predict(model, examples[i].features).label);
      golds.push_back(examples[i].label);
    }
    return eval_metrics(preds, golds);
  });
  EvalReport out;
  out.fold_count = k;
  for (const auto& r : fold_reports) {
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      out.per_class[c].precision += r.per_class[c].precision / static_cast<double>(k);
      out.per_class[c].recall += r.per_class[c].recall / static_cast<double>(k);
      out.per_class[c].f1 += r.per_class[c].f1 / static_cast<double>(k);
      for (std::size_t p = 0; p < kNumLabels; ++p) out.confusion[c][p] += r.confusion[c][p];
    }
  }
  double macro = 0;
  for (const auto& m : out.per_class) macro += m.f1;
  out.macro_f1 = macro / kNumLabels;
  return out;
}

// ---------------------------------------------------------------------------
// Persistence and reports.

inline std::string save_model(const ClassifierModel& m) {
  std::string out = "hatenet-model 1\n";
  out += "schema_id " + m.schema_id + "\n";
  out += "dim " + std::to_string(m.dim) + "\n";
  out += "classes hate counterspeech neutral\n";
  out += "batch_size " + std::to_string(m.training_meta.hyper.batch_size) + "\n";
  out += "epochs " + std::to_string(m.training_meta.hyper.epochs) + "\n";
  out += "learning_rate " + format_real(m.training_meta.hyper.learning_rate) + "\n";
  out += "seed " + std::to_string(m.training_meta.seed) + "\n";
  auto row = [&](std::string_view name, const double* v, std::size_t n) {
    out += name;
    for (std::size_t i = 0; i < n; ++i) out += ' ' + format_real(v[i]);
    out += '\n';
  };
  row("center", m.center.data(), m.dim);
  row("scale", m.scale.data(), m.dim);
  row("bias", m.bias.data(), kNumLabels);
  for (std::size_t f = 0; f < m.dim; ++f) row("w", &m.weights[f * kNumLabels], kNumLabels);
  return out;
}

inline ClassifierModel load_model(std::string_view content) {
  ClassifierModel m;
  std::size_t w_rows = 0;
  bool header = false;
  auto fail = [](std::size_t line, const std::string& why) {
    return DataError("model line " + std::to_string(line) + ": " + why);
  };
  for_each_line(content, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    std::istringstream in{std::string(line)};
    std::string key;
    in >> key;
    auto reals = [&](std::size_t n) {
      std::vector<double> v;
      std::string tok;
      while (in >> tok) {
        char* end = nullptr;
        const double x = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') throw fail(line_no, "bad number '" + tok + "'");
        v.push_back(x);
      }
      if (v.size() != n) throw fail(line_no, "expected " + std::to_string(n) + " values");
      return v;
    };
    if (key == "hatenet-model") {
      header = true;
    } else if (key == "schema_id") {
      in >> m.schema_id;
    } else if (key == "dim") {
      in >> m.dim;
      m.weights.assign(m.dim * kNumLabels, 0.0);
    } else if (key == "classes") {
    } else if (key == "batch_size") {
      in >> m.training_meta.hyper.batch_size;
    } else if (key == "epochs") {
      in >> m.training_meta.hyper.epochs;
    } else if (key == "learning_rate") {
      m.training_meta.hyper.learning_rate = reals(1)[0];
    } else if (key == "seed") {
      in >> m.training_meta.seed;
    } else if (key == "center") {
      m.center = reals(m.dim);
    } else if (key == "scale") {
      m.scale = reals(m.dim);
    } else if (key == "bias") {
      const auto b = reals(kNumLabels);
      std::copy(b.begin(), b.end(), m.bias.begin());
    } else if (key == "w") {
      if (w_rows >= m.dim) throw fail(line_no, "too many weight rows");
      const auto w = reals(kNumLabels);
      std::copy(w.begin(), w.end(), m.weights.begin() + static_cast<std::ptrdiff_t>(w_rows * kNumLabels));
      ++w_rows;
    } else {
      throw fail(line_no, "unknown key '" + key + "'");
    }
  });
  if (!header || m.schema_id.empty() || m.dim == 0 || w_rows != m.dim ||
      m.center.size() != m.dim || m.scale.size() != m.dim)
    throw DataError("incomplete model document");
  return m;
}

// Table-style rows: feature_set,class,precision,recall,f1 plus a macro row.
inline std::string eval_report_csv_header() { return "feature_set,class,precision,recall,f1\n"; }

inline std::string eval_report_csv_rows(std::string_view feature_set, const EvalReport& r) {
  std::string out;
  for (auto l : kAllLabels) {
    const auto& m = r[l];
    out += std::string(feature_set) + "," + std::string(to_string(l)) + "," +
           format_real(m.precision) + "," + format_real(m.recall) + "," + format_real(m.f1) + "\n";
  }
  out += std::string(feature_set) + ",macro," + format_real(r.macro_precision()) + "," +
         format_real(r.macro_recall()) + "," + format_real(r.macro_f1) + "\n";
  return out;
}

}  // namespace hatenet::classify

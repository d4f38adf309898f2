#pragma once
// Longitudinal counts, spike quantification, Mann-Whitney U tests,
// per-user behavior profiles around activation, sentiment scoring and
// activity tail histograms.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hatenet/core.hpp"
#include "hatenet/ingest.hpp"
#include "hatenet/lexicon.hpp"
#include "hatenet/text.hpp"

namespace hatenet::stats {

// ---------------------------------------------------------------------------
// Daily series.

struct DailySeries {
  Days first_day = 0;
  std::vector<std::array<std::size_t, kNumLabels>> counts;  // zero-filled, one per day

  std::size_t days() const { return counts.size(); }
  Days last_day() const { return first_day + static_cast<Days>(counts.size()) - 1; }
  bool covers(Days d) const { return d >= first_day && d <= last_day(); }
  std::size_t at(Days d, Label l) const {
    return counts[static_cast<std::size_t>(d - first_day)][static_cast<std::size_t>(l)];
  }
  std::size_t total(Label l) const {
    std::size_t t = 0;
    for (const auto& c : counts) t += c[static_cast<std::size_t>(l)];
    return t;
  }
};

// Per-day label counts over every day of the window; records outside the
// window are ignored. Records must be labeled.
inline DailySeries daily_counts(const std::vector<ingest::TweetRecord>& records,
                                const TimeWindow& window) {
  if (window.end < window.start) throw ValidationError("daily_counts: window end before start");
  DailySeries s;
  s.first_day = window.first_day();
  s.counts.assign(static_cast<std::size_t>(window.last_day() - window.first_day() + 1), {});
  for (const auto& r : records) {
    if (!r.label) throw DataError("daily_counts: record " + r.tweet_id + " has no label");
    if (!window.contains(r.timestamp)) continue;
    ++s.counts[static_cast<std::size_t>(day_of(r.timestamp) - s.first_day)]
              [static_cast<std::size_t>(*r.label)];
  }
  return s;
}

struct WindowChange {
  std::size_t before = 0;  // [event - w, event)
  std::size_t after = 0;   // [event, event + w)
  std::optional<double> percent;  // undefined when before == 0
};

inline WindowChange window_change(const DailySeries& s, Label label, Days event_day,
                                  std::size_t window_days = 7) {
  if (window_days == 0) throw ValidationError("window_change: window_days must be positive");
  const auto w = static_cast<Days>(window_days);
  if (!s.covers(event_day - w) || !s.covers(event_day + w - 1))
    throw ValidationError("window_change: windows around " + format_day(event_day) +
                          " fall outside the series");
  WindowChange c;
  for (Days d = event_day - w; d < event_day; ++d) c.before += s.at(d, label);
  for (Days d = event_day; d < event_day + w; ++d) c.after += s.at(d, label);
  if (c.before > 0)
    c.percent = 100.0 * (static_cast<double>(c.after) - static_cast<double>(c.before)) /
                static_cast<double>(c.before);
  return c;
}

inline std::string daily_series_csv(const DailySeries& s) {
  std::string out = "day,hate,counterspeech,neutral\n";
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    out += format_day(s.first_day + static_cast<Days>(i));
    for (auto c : s.counts[i]) out += "," + std::to_string(c);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mann-Whitney U.

struct GroupComparison {
  std::string metric;
  double mean_a = 0, mean_b = 0;
  double u = 0;  // U for sample a
  double z = 0;  // normal approximation with tie and continuity corrections
  double p = 1;  // two-sided
  std::size_t n_a = 0, n_b = 0;
  bool exact = false;
};

inline constexpr std::size_t kExactMaxSmall = 8;
inline constexpr std::size_t kExactMaxPooled = 1000;

namespace detail {

// Midranks of the pooled sample (a then b), doubled so ties stay integral.
inline std::vector<long long> doubled_midranks(const std::vector<double>& pooled,
                                               std::vector<std::size_t>* tie_sizes) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  std::vector<long long> r2(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // ranks i+1..j+1, midrank (i+j+2)/2, doubled: i+j+2
    for (std::size_t k = i; k <= j; ++k) r2[order[k]] = static_cast<long long>(i + j + 2);
    if (tie_sizes) tie_sizes->push_back(j - i + 1);
    i = j + 1;
  }
  return r2;
}

// Exact two-sided p for U of the first `m` entries of `r2` against the rest,
// from the null distribution of rank sums over all C(N, m) assignments.
inline double exact_p(const std::vector<long long>& r2, std::size_t n1, std::size_t n2,
                      long long twice_u_a) {
  const bool a_small = n1 <= n2;
  const std::size_t m = a_small ? n1 : n2;
  const std::size_t N = n1 + n2;
  long long max_sum = 0;
  {
    std::vector<long long> sorted(r2);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t k = 0; k < m; ++k) max_sum += sorted[k];
  }
  const auto width = static_cast<std::size_t>(max_sum) + 1;
  // ways[k][s]: subsets of size k with doubled-rank sum s.
  std::vector<std::vector<double>> ways(m + 1, std::vector<double>(width, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto w = static_cast<std::size_t>(r2[i]);
    for (std::size_t k = std::min(i + 1, m); k >= 1; --k) {
      auto& dst = ways[k];
      const auto& src = ways[k - 1];
      for (std::size_t s = width - 1; s >= w; --s) {
        if (src[s - w] != 0.0) dst[s] += src[s - w];
        if (s == w) break;
      }
    }
  }
  // 2U_small = S2 - m(m+1); 2U_a = 2U_small if a is small else 2 n1 n2 - 2U_small.
  const auto offset = static_cast<long long>(m * (m + 1));
  const auto twice_nn = static_cast<long long>(2 * n1 * n2);
  double total = 0, le = 0, ge = 0;
  for (std::size_t s = 0; s < width; ++s) {
    const double c = ways[m][s];
    if (c == 0.0) continue;
    const long long twice_small = static_cast<long long>(s) - offset;
    const long long twice_ua = a_small ? twice_small : twice_nn - twice_small;
    total += c;
    if (twice_ua <= twice_u_a) le += c;
    if (twice_ua >= twice_u_a) ge += c;
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

inline double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace detail

// Two-sided Mann-Whitney U test. Midranks for ties. Exact null distribution
// when the smaller sample has at most 8 values (and the pooled sample at
// most 1000); otherwise the tie-corrected normal approximation with
// continuity correction.
inline GroupComparison mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                                      std::string metric = {}) {
  if (a.empty() || b.empty()) throw ValidationError("mann_whitney_u: empty sample");
  GroupComparison g;
  g.metric = std::move(metric);
  g.n_a = a.size();
  g.n_b = b.size();
  g.mean_a = detail::mean_of(a);
  g.mean_b = detail::mean_of(b);
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double v : pooled)
    if (std::isnan(v)) throw ValidationError("mann_whitney_u: NaN in sample");
  std::vector<std::size_t> ties;
  const auto r2 = detail::doubled_midranks(pooled, &ties);
  long long s2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s2 += r2[i];
  const auto n1 = static_cast<long long>(a.size());
  const long long twice_u = s2 - n1 * (n1 + 1);
  g.u = static_cast<double>(twice_u) / 2.0;

  const double dn1 = static_cast<double>(a.size()), dn2 = static_cast<double>(b.size());
  const double N = dn1 + dn2;
  double tie_term = 0;
  for (auto t : ties) {
    const double dt = static_cast<double>(t);
    tie_term += dt * dt * dt - dt;
  }
  const double var = dn1 * dn2 / 12.0 * ((N + 1) - (N > 1 ? tie_term / (N * (N - 1)) : 0.0));
  const double diff = g.u - dn1 * dn2 / 2.0;
  if (var > 0) {
    const double mag = std::max(0.0, std::abs(diff) - 0.5);
    g.z = (diff < 0 ? -mag : mag) / std::sqrt(var);
  }
  if (std::min(a.size(), b.size()) <= kExactMaxSmall && pooled.size() <= kExactMaxPooled) {
    g.exact = true;
    g.p = detail::exact_p(r2, a.size(), b.size(), twice_u);
  } else {
    g.p = var > 0 ? std::erfc(std::abs(g.z) / std::sqrt(2.0)) : 1.0;
  }
  return g;
}

inline std::string comparisons_csv_header() {
  return "metric,mean_a,mean_b,U,z,p,n_a,n_b\n";
}

inline std::string comparison_csv_row(const GroupComparison& g) {
  return g.metric + "," + format_real(g.mean_a) + "," + format_real(g.mean_b) + "," +
         format_real(g.u) + "," + format_real(g.z) + "," + format_real(g.p) + "," +
         std::to_string(g.n_a) + "," + std::to_string(g.n_b) + "\n";
}

// ---------------------------------------------------------------------------
// Sentiment and behavior profiles.

// Mean bundled-lexicon valence of the text's words mapped to [0, 1]; 0.5 when
// no word hits the lexicon.
inline double sentiment_score(std::string_view tweet) {
  std::vector<std::string> words;
  for (const auto& t : text::tokenize(tweet))
    if (t.kind == text::TokenKind::Word) words.push_back(t.folded);
  return lexicon::sentiment_of_words(words);
}

struct BehaviorProfile {
  std::size_t covid_tweet_count = 0;
  double mean_chars = 0;
  double mean_words = 0;
  double mean_urls = 0;
  double mean_mentions = 0;
  double mean_sentiment = 0;
};

enum class Phase : std::uint8_t { Pre, Post };

struct ProfileSet {
  std::map<std::string, BehaviorProfile> profiles;
  std::size_t omitted = 0;  // requested users with no records in the phase
};

// Pre: records strictly before activation (all records for users that never
// activate). Post: records at or after activation.
inline ProfileSet behavior_profiles(const std::vector<ingest::TweetRecord>& records,
                                    const std::set<std::string>& users,
                                    const std::map<std::string, Timestamp>& activations,
                                    Phase phase) {
  struct Acc {
    std::size_t n = 0;
    double chars = 0, words = 0, urls = 0, mentions = 0, sentiment = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& r : records) {
    if (!users.count(r.user_id)) continue;
    const auto it = activations.find(r.user_id);
    const bool pre = it == activations.end() || r.timestamp < it->second;
    if (pre != (phase == Phase::Pre)) continue;
    auto& a = acc[r.user_id];
    const auto tokens = text::tokenize(r.text);
    std::vector<std::string> words;
    for (const auto& t : tokens)
      if (t.kind == text::TokenKind::Word) words.push_back(t.folded);
    ++a.n;
    a.chars += static_cast<double>(text::count_code_points(r.text));
    a.words += static_cast<double>(words.size());
    a.urls += static_cast<double>(text::count_kind(tokens, text::TokenKind::Url));
    a.mentions += static_cast<double>(text::count_kind(tokens, text::TokenKind::Mention));
    a.sentiment += lexicon::sentiment_of_words(words);
  }
  ProfileSet out;
  for (const auto& u : users) {
    const auto it = acc.find(u);
    if (it == acc.end()) {
      ++out.omitted;
      continue;
    }
    const auto& a = it->second;
    const double n = static_cast<double>(a.n);
    out.profiles[u] = {a.n, a.chars / n, a.words / n, a.urls / n, a.mentions / n, a.sentiment / n};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tail distribution: tweets-per-user -> number of users.

inline std::map<std::size_t, std::size_t> tail_distribution(
    const std::vector<ingest::TweetRecord>& records, Label label) {
  std::map<std::string, std::size_t> per_user;
  for (const auto& r : records) {
    if (!r.label) throw DataError("tail_distribution: record " + r.tweet_id + " has no label");
    if (*r.label == label) ++per_user[r.user_id];
  }
  std::map<std::size_t, std::size_t> hist;
  for (const auto& [u, n] : per_user) ++hist[n];
  return hist;
}

inline std::string histogram_csv(const std::map<std::size_t, std::size_t>& h) {
  std::string out = "tweets,users\n";
  for (const auto& [k, v] : h) out += std::to_string(k) + "," + std::to_string(v) + "\n";
  return out;
}

}  // namespace hatenet::stats

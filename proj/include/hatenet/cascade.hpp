#pragma once
// Activation cascades, pre-activation exposure counts, the infection-risk
// curve
//
//   Risk_{s->s'}(n) = |Infected_{s'} ∩ Exposed_s(n)| / |Exposed_s(n)|
//
// and its cascade-shuffle null model.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hatenet/core.hpp"
#include "hatenet/graph.hpp"
#include "hatenet/ingest.hpp"

namespace hatenet::cascade {

using graph::Direction;
using graph::NodeId;
using graph::SocialGraph;

enum class Stance : std::uint8_t { Hate = 0, Counterspeech = 1 };
inline constexpr std::array<Stance, 2> kStances = {Stance::Hate, Stance::Counterspeech};

inline std::string_view to_string(Stance s) {
  return s == Stance::Hate ? "hate" : "counterspeech";
}

inline std::optional<Stance> parse_stance(std::string_view v) {
  const auto l = parse_label(v);
  if (l == Label::Hate) return Stance::Hate;
  if (l == Label::Counterspeech) return Stance::Counterspeech;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// User categorization.

struct FirstTweet {
  Timestamp time;
  std::string tweet_id;
};

struct UserActivity {
  std::array<std::size_t, kNumLabels> tweets{};  // per label
  std::array<std::optional<FirstTweet>, 2> first; // per stance
  UserCategory category = UserCategory::Neutral;

  std::size_t total() const { return tweets[0] + tweets[1] + tweets[2]; }
  std::optional<Timestamp> activation() const {
    std::optional<Timestamp> t;
    for (const auto& f : first)
      if (f && (!t || f->time < *t)) t = f->time;
    return t;
  }
};

inline UserCategory category_from_counts(std::size_t hate, std::size_t counter) {
  if (hate > 0 && counter > 0) return UserCategory::Dual;
  if (hate > 0) return UserCategory::Hate;
  if (counter > 0) return UserCategory::Counterspeech;
  return UserCategory::Neutral;
}

// Hate users: >= 1 hate tweet and no counterspeech; Counterspeech users the
// reverse; Dual users both; Neutral users neither. Records must be labeled.
inline std::map<std::string, UserActivity> categorize_users(
    const std::vector<ingest::TweetRecord>& records) {
  std::map<std::string, UserActivity> users;
  for (const auto& r : records) {
    if (!r.label) throw DataError("record " + r.tweet_id + " has no label");
    auto& u = users[r.user_id];
    ++u.tweets[static_cast<std::size_t>(*r.label)];
    if (*r.label == Label::Neutral) continue;
    auto& f = u.first[*r.label == Label::Hate ? 0 : 1];
    if (!f || r.timestamp < f->time || (r.timestamp == f->time && r.tweet_id < f->tweet_id))
      f = FirstTweet{r.timestamp, r.tweet_id};
  }
  for (auto& [id, u] : users)
    u.category = category_from_counts(u.tweets[0], u.tweets[1]);
  return users;
}

// ---------------------------------------------------------------------------
// Cascades.

struct ActivationEvent {
  NodeId user;
  Timestamp time;
  Stance category;
  std::string tweet_id;
};

struct Cascade {
  std::vector<ActivationEvent> events;  // ascending (time, tweet_id)
  Timestamp window_end = TimeWindow::collection_default().end;
};

inline void sort_events(std::vector<ActivationEvent>& events) {
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.tweet_id != b.tweet_id) return a.tweet_id < b.tweet_id;
    if (a.user != b.user) return a.user < b.user;
    return a.category < b.category;
  });
}

struct CascadeBuild {
  Cascade cascade;
  std::vector<UserCategory> node_categories;  // per graph node
  std::size_t users = 0;
  std::size_t unresolved_users = 0;
  std::size_t events_after_window = 0;
  std::array<std::size_t, kNumCategorized> category_counts{};  // over resolved users
};

struct BuildOptions {
  Timestamp window_end = TimeWindow::collection_default().end;
};

// One event per user per stance at the user's first tweet of that stance.
// Users missing from the graph are counted and skipped.
inline CascadeBuild build_cascade(const std::vector<ingest::TweetRecord>& records,
                                  const SocialGraph& g, const BuildOptions& opt = {}) {
  if (records.empty()) throw ValidationError("build_cascade: empty record stream");
  const auto users = categorize_users(records);
  CascadeBuild out;
  out.cascade.window_end = opt.window_end;
  out.node_categories.assign(g.node_count(), UserCategory::Uncategorized);
  out.users = users.size();
  for (const auto& [id, u] : users) {
    const auto node = g.ids().find(id);
    if (!node || *node >= g.node_count()) {
      ++out.unresolved_users;
      continue;
    }
    out.node_categories[*node] = u.category;
    ++out.category_counts[static_cast<std::size_t>(u.category)];
    for (auto s : kStances) {
      const auto& f = u.first[static_cast<std::size_t>(s)];
      if (!f) continue;
      if (f->time > opt.window_end) {
        ++out.events_after_window;
        continue;
      }
      out.cascade.events.push_back({*node, f->time, s, f->tweet_id});
    }
  }
  sort_events(out.cascade.events);
  return out;
}

inline void apply_categories(SocialGraph& g, const std::vector<UserCategory>& cats) {
  for (NodeId u = 0; u < g.node_count() && u < cats.size(); ++u) {
    if (!is_categorized(cats[u])) continue;
    g.set_category(u, cats[u]);
    g.set_covid_flag(u, true);
  }
}

// ---------------------------------------------------------------------------
// Exposure and infection risk.

struct ExposureOptions {
  Direction direction = Direction::Out;
  bool include_dual = false;  // count Dual users as infected for both stances
};

namespace detail {

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

// Per-node times derived from a cascade (epoch seconds, kNever when absent).
struct NodeTimes {
  std::vector<std::int64_t> activation;            // first event of any stance
  std::array<std::vector<std::int64_t>, 2> stance;  // event of each stance
};

inline NodeTimes node_times(std::size_t n, const std::vector<ActivationEvent>& events) {
  NodeTimes t;
  t.activation.assign(n, kNever);
  for (auto& v : t.stance) v.assign(n, kNever);
  for (const auto& e : events) {
    const auto s = epoch_seconds(e.time);
    auto& st = t.stance[static_cast<std::size_t>(e.category)][e.user];
    st = std::min(st, s);
    t.activation[e.user] = std::min(t.activation[e.user], s);
  }
  return t;
}

// Exposure cutoff: strictly before activation, or through window_end.
inline std::int64_t cutoff(const NodeTimes& t, NodeId u, std::int64_t window_end) {
  return t.activation[u] != kNever ? t.activation[u] : window_end + 1;
}

inline std::uint32_t exposure_of(const SocialGraph& g, const NodeTimes& t, NodeId u,
                                 Stance s, Direction dir, std::int64_t window_end) {
  const auto limit = cutoff(t, u, window_end);
  const auto& src = t.stance[static_cast<std::size_t>(s)];
  std::uint32_t n = 0;
  g.for_each_neighbor(u, dir, [&](NodeId v) { n += src[v] < limit; });
  return n;
}

// Users the risk sets range over: categorized graph nodes plus any node
// carrying an event.
inline std::vector<NodeId> population(const SocialGraph& g, const Cascade& c) {
  std::vector<std::uint8_t> in(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u) in[u] = is_categorized(g.category(u));
  for (const auto& e : c.events) in[e.user] = 1;
  std::vector<NodeId> out;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (in[u]) out.push_back(u);
  return out;
}

// infected[s'][u]: u activated into s' (Dual users only with include_dual).
inline std::array<std::vector<std::uint8_t>, 2> infected_sets(std::size_t n, const Cascade& c,
                                                              bool include_dual) {
  std::array<std::vector<std::uint8_t>, 2> has;
  for (auto& v : has) v.assign(n, 0);
  for (const auto& e : c.events) has[static_cast<std::size_t>(e.category)][e.user] = 1;
  if (include_dual) return has;
  std::array<std::vector<std::uint8_t>, 2> out = has;
  for (std::size_t u = 0; u < n; ++u)
    if (has[0][u] && has[1][u]) out[0][u] = out[1][u] = 0;
  return out;
}

}  // namespace detail

// Pre-activation exposure of every node to stance-s neighbors: the number of
// distinct neighbors whose s-activation precedes the node's own first
// activation (or falls at or before window_end when it never activates).
inline std::vector<std::uint32_t> compute_exposures(const SocialGraph& g, const Cascade& c,
                                                    Stance s, const ExposureOptions& opt = {}) {
  const auto t = detail::node_times(g.node_count(), c.events);
  const auto end = epoch_seconds(c.window_end);
  std::vector<std::uint32_t> out(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u)
    out[u] = detail::exposure_of(g, t, u, s, opt.direction, end);
  return out;
}

struct RiskLevel {
  std::size_t n = 0;
  std::size_t exposed = 0;
  std::size_t infected = 0;
  std::optional<double> risk;  // undefined when exposed == 0
  std::optional<double> baseline_mean;
  std::optional<double> baseline_std;
  std::size_t baseline_samples = 0;
};

struct RiskCurve {
  Stance source = Stance::Hate;
  Stance target = Stance::Hate;
  std::vector<RiskLevel> levels;  // n = 1..n_max
  std::size_t replicates = 0;
  bool empty = false;             // nobody exposed at n = 1
  bool vacuous_shuffle = false;   // fewer than two events; baseline equals empirical

  std::string pair_name() const {
    return std::string(to_string(source)) + "->" + std::string(to_string(target));
  }
};

using StancePair = std::pair<Stance, Stance>;

inline constexpr std::size_t kDefaultMinExposed = 50;

namespace detail {

struct Counts {
  std::vector<std::size_t> exposed;   // index n-1
  std::vector<std::size_t> infected;
};

// Exposure histogram for one (s, s') pair, clamped at n_max.
inline Counts risk_counts(const SocialGraph& g, const NodeTimes& t,
                          const std::vector<NodeId>& pop,
                          const std::vector<std::uint8_t>& infected, Stance s,
                          std::size_t n_max, Direction dir, std::int64_t window_end) {
  std::vector<std::size_t> hist(n_max + 1, 0), hist_inf(n_max + 1, 0);
  for (const auto u : pop) {
    const auto e = std::min<std::size_t>(exposure_of(g, t, u, s, dir, window_end), n_max);
    ++hist[e];
    if (infected[u]) ++hist_inf[e];
  }
  Counts c;
  c.exposed.assign(n_max, 0);
  c.infected.assign(n_max, 0);
  std::size_t run = 0, run_inf = 0;
  for (std::size_t n = n_max; n >= 1; --n) {
    run += hist[n];
    run_inf += hist_inf[n];
    c.exposed[n - 1] = run;
    c.infected[n - 1] = run_inf;
  }
  return c;
}

// Largest n with at least `min_exposed` exposed users (at least 1).
inline std::size_t default_n_max(const SocialGraph& g, const NodeTimes& t,
                                 const std::vector<NodeId>& pop, Stance s, Direction dir,
                                 std::int64_t window_end, std::size_t min_exposed) {
  std::vector<std::uint32_t> e;
  e.reserve(pop.size());
  for (const auto u : pop) e.push_back(exposure_of(g, t, u, s, dir, window_end));
  std::sort(e.begin(), e.end(), std::greater<>());
  if (e.size() < min_exposed || min_exposed == 0) return 1;
  return std::max<std::size_t>(1, e[min_exposed - 1]);
}

inline RiskCurve curve_from_counts(Stance s, Stance sp, const Counts& c) {
  RiskCurve curve;
  curve.source = s;
  curve.target = sp;
  for (std::size_t i = 0; i < c.exposed.size(); ++i) {
    RiskLevel lv;
    lv.n = i + 1;
    lv.exposed = c.exposed[i];
    lv.infected = c.infected[i];
    if (lv.exposed > 0)
      lv.risk = static_cast<double>(lv.infected) / static_cast<double>(lv.exposed);
    curve.levels.push_back(lv);
  }
  curve.empty = c.exposed.empty() || c.exposed[0] == 0;
  return curve;
}

}  // namespace detail

struct RiskOptions {
  ExposureOptions exposure;
  std::optional<std::size_t> n_max;  // default: largest n with >= min_exposed exposed users
  std::size_t min_exposed = kDefaultMinExposed;
};

inline RiskCurve infection_risk(const SocialGraph& g, const Cascade& c, Stance s, Stance s_prime,
                                const RiskOptions& opt = {}) {
  if (opt.n_max && *opt.n_max < 1) throw ValidationError("infection_risk: n_max must be >= 1");
  const auto t = detail::node_times(g.node_count(), c.events);
  const auto pop = detail::population(g, c);
  const auto inf = detail::infected_sets(g.node_count(), c, opt.exposure.include_dual);
  const auto end = epoch_seconds(c.window_end);
  const auto n_max = opt.n_max ? *opt.n_max
                               : detail::default_n_max(g, t, pop, s, opt.exposure.direction, end,
                                                       opt.min_exposed);
  const auto counts = detail::risk_counts(g, t, pop, inf[static_cast<std::size_t>(s_prime)], s,
                                          n_max, opt.exposure.direction, end);
  return detail::curve_from_counts(s, s_prime, counts);
}

// Assigns the cascade's event times to its (user, stance) pairs by a uniform
// random permutation. The multiset of times and of (user, stance) pairs is
// preserved; the graph is untouched.
inline Cascade shuffle_cascade(const Cascade& c, std::uint64_t seed) {
  Cascade out = c;
  std::vector<Timestamp> times;
  times.reserve(c.events.size());
  for (const auto& e : c.events) times.push_back(e.time);
  Rng rng(seed);
  rng.shuffle(times);
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    out.events[i].time = times[i];
    out.events[i].tweet_id.clear();
  }
  sort_events(out.events);
  return out;
}

struct NullOptions {
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// Empirical curve plus cascade-shuffle baseline for every requested pair.
// Replicate r shuffles once with derive_seed(seed, r) and scores every pair.
inline std::vector<RiskCurve> contagion_report(const SocialGraph& g, const Cascade& c,
                                               const std::vector<StancePair>& pairs,
                                               const RiskOptions& risk, const NullOptions& null) {
  if (null.replicates < 2) throw ValidationError("replicates must be >= 2");
  if (risk.n_max && *risk.n_max < 1) throw ValidationError("n_max must be >= 1");
  if (pairs.empty()) return {};
  const auto n = g.node_count();
  const auto end = epoch_seconds(c.window_end);
  const auto dir = risk.exposure.direction;
  const auto pop = detail::population(g, c);
  const auto inf = detail::infected_sets(n, c, risk.exposure.include_dual);
  const auto t0 = detail::node_times(n, c.events);

  std::vector<std::size_t> n_max(pairs.size());
  std::vector<RiskCurve> curves;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [s, sp] = pairs[p];
    n_max[p] = risk.n_max ? *risk.n_max
                          : detail::default_n_max(g, t0, pop, s, dir, end, risk.min_exposed);
    curves.push_back(detail::curve_from_counts(
        s, sp,
        detail::risk_counts(g, t0, pop, inf[static_cast<std::size_t>(sp)], s, n_max[p], dir, end)));
  }

  const bool vacuous = c.events.size() < 2;
  using ReplicateRisks = std::vector<std::vector<std::optional<double>>>;  // [pair][n-1]
  const auto reps = parallel_map(null.replicates, null.workers, [&](std::size_t r) {
    ReplicateRisks out(pairs.size());
    if (vacuous) {
      for (std::size_t p = 0; p < pairs.size(); ++p)
        for (const auto& lv : curves[p].levels) out[p].push_back(lv.risk);
      return out;
    }
    const auto shuffled = shuffle_cascade(c, derive_seed(null.seed, r));
    const auto t = detail::node_times(n, shuffled.events);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [s, sp] = pairs[p];
      const auto k =
          detail::risk_counts(g, t, pop, inf[static_cast<std::size_t>(sp)], s, n_max[p], dir, end);
      for (std::size_t i = 0; i < n_max[p]; ++i)
        out[p].push_back(k.exposed[i] ? std::optional<double>(static_cast<double>(k.infected[i]) /
                                                              static_cast<double>(k.exposed[i]))
                                      : std::nullopt);
    }
    return out;
  });

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto& curve = curves[p];
    curve.replicates = null.replicates;
    curve.vacuous_shuffle = vacuous;
    for (std::size_t i = 0; i < curve.levels.size(); ++i) {
      RunningStats st;
      for (const auto& rep : reps)
        if (rep[p][i]) st.add(*rep[p][i]);
      auto& lv = curve.levels[i];
      lv.baseline_samples = st.count();
      if (st.count() > 0) {
        lv.baseline_mean = st.mean();
        lv.baseline_std = st.stddev();
      }
    }
  }
  return curves;
}

inline RiskCurve shuffled_risk(const SocialGraph& g, const Cascade& c, Stance s, Stance s_prime,
                               const RiskOptions& risk, const NullOptions& null) {
  return contagion_report(g, c, {{s, s_prime}}, risk, null).front();
}

// ---------------------------------------------------------------------------
// CSV.

inline std::string cascade_csv(const Cascade& c, const graph::IdMap& ids) {
  std::string out = "user_id,timestamp,category\n";
  for (const auto& e : c.events)
    out += ids.id(e.user) + "," + format_timestamp(e.time) + "," + std::string(to_string(e.category)) + "\n";
  return out;
}

// Reads "user_id,timestamp,category"; users must resolve in `ids`.
inline Cascade parse_cascade_csv(std::string_view content, const graph::IdMap& ids,
                                 Timestamp window_end) {
  Cascade c;
  c.window_end = window_end;
  for_each_line(content, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    const auto cols = split(line, ',');
    auto where = [&] { return "cascade:" + std::to_string(line_no) + ": "; };
    if (cols.size() != 3) throw DataError(where() + "expected user_id,timestamp,category");
    if (line_no == 1 && trim(cols[0]) == "user_id") return;
    const auto node = ids.find(trim(cols[0]));
    if (!node) throw DataError(where() + "unknown user '" + std::string(trim(cols[0])) + "'");
    const auto ts = parse_timestamp(cols[1]);
    if (!ts) throw DataError(where() + "bad timestamp");
    const auto st = parse_stance(cols[2]);
    if (!st) throw DataError(where() + "bad category");
    c.events.push_back({*node, *ts, *st, {}});
  });
  sort_events(c.events);
  return c;
}

inline std::string risk_curves_csv(const std::vector<RiskCurve>& curves) {
  std::string out = "pair,n,exposed,infected,risk,baseline_mean,baseline_std\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); };
  for (const auto& c : curves)
    for (const auto& lv : c.levels)
      out += c.pair_name() + "," + std::to_string(lv.n) + "," + std::to_string(lv.exposed) + "," +
             std::to_string(lv.infected) + "," + opt(lv.risk) + "," + opt(lv.baseline_mean) + "," +
             opt(lv.baseline_std) + "\n";
  return out;
}

}  // namespace hatenet::cascade

#pragma once
// Deterministic synthetic dataset: tweet records, a label file, a follower
// edge list and a run config. Hate and counterspeech activations spread over
// the follower graph (each activated followee adds hazard), daily volume
// spikes around fixed event days, and the record stream carries noise lines
// (duplicates, keyword-free text, malformed JSON, out-of-window timestamps)
// for the ingest filter to drop.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "hatenet/core.hpp"

namespace hatenet::synth {

struct SynthOptions {
  std::size_t users = 240;          // users who tweet
  std::size_t silent_users = 60;    // graph-only users
  std::size_t records = 1000;       // valid in-window records
  double mean_out_degree = 8.0;
  double homophily = 4.0;           // weight of same-leaning followees
  double base_hazard = 0.002;       // per day
  double exposure_hazard = 0.01;    // per day per activated followee
  std::uint64_t seed = 20200115;
};

struct SynthDataset {
  std::string records_jsonl;
  std::string labels_csv;
  std::string edges_tsv;
  std::string config_ini;
  std::size_t noise_lines = 0;
};

namespace detail {

enum class Leaning : std::uint8_t { Hate, Counter, Dual, Neutral };

inline constexpr std::string_view kCovidTerms[] = {"coronavirus", "covid-19", "covid19",
                                                   "corona virus", "COVID 19"};
inline constexpr std::string_view kHateTags[] = {"#ChinaVirus", "#KungFlu", "#wuhanvirus",
                                                 "#ChineseVirus", "#MakeChinaPay", "#CCPVirus"};
inline constexpr std::string_view kCounterTags[] = {"#IAmNotAVirus", "#WashTheHate",
                                                    "#RacismIsAVirus", "#StopAAPIHate",
                                                    "#HateIsAVirus"};
inline constexpr std::string_view kPlaces[] = {"the city", "our county", "the state", "the region",
                                               "my town", "the country"};
inline constexpr std::string_view kNeutral[] = {
    "{c} cases are rising in {p} again, please wear a mask and stay safe",
    "New {c} testing site opens in {p} this week {u}",
    "Hospitals in {p} report more {c} admissions today",
    "Working from home because of {c}. Day 40.",
    "Vaccine appointments for {c} open tomorrow in {p} {u}",
    "{m} any update on {c} rules for {p}?",
};
inline constexpr std::string_view kHate[] = {
    "{h} they brought {c} here!!! close the borders NOW",
    "It is the {h}, stop calling it {c}. They did this!!",
    "{h} {h2} blame them for {c}, disgusting",
    "They lied and people died. {h} {c}",
};
inline constexpr std::string_view kCounter[] = {
    "{k} Asian Americans are not responsible for {c}. Please stand together against racism and hate in {p}.",
    "Racism is not the answer to {c}. Support your Asian neighbors and friends {k} {u}",
    "{k} {k2} Hate crimes against Asian communities must stop. We are all fighting {c} together, with kindness.",
    "{m} words matter. Calling {c} by an ethnic name fuels violence. {k}",
};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::string_view (&arr)[N]) {
  return arr[rng.below(N)];
}

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

inline std::string render(std::string_view tmpl, Rng& rng) {
  std::string s(tmpl);
  const auto h = pick(rng, kHateTags);
  auto h2 = pick(rng, kHateTags);
  if (h2 == h) h2 = kHateTags[0] == h ? kHateTags[1] : kHateTags[0];
  const auto k = pick(rng, kCounterTags);
  auto k2 = pick(rng, kCounterTags);
  if (k2 == k) k2 = kCounterTags[0] == k ? kCounterTags[1] : kCounterTags[0];
  replace_all(s, "{h2}", h2);
  replace_all(s, "{h}", h);
  replace_all(s, "{k2}", k2);
  replace_all(s, "{k}", k);
  replace_all(s, "{c}", pick(rng, kCovidTerms));
  replace_all(s, "{p}", pick(rng, kPlaces));
  replace_all(s, "{u}", "https://example.org/n/" + std::to_string(rng.below(10000)));
  replace_all(s, "{m}", "@user" + std::to_string(rng.below(500)));
  return s;
}

inline std::string user_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%04zu", i);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string record_line(const std::string& id, const std::string& user, Timestamp t,
                               std::string_view text) {
  return "{\"id\":\"" + id + "\",\"user_id\":\"" + user + "\",\"created_at\":\"" +
         format_timestamp(t) + "\",\"text\":\"" + json_escape(text) + "\"}\n";
}

}  // namespace detail

inline constexpr std::string_view kBundledConfig =
    "# Synthetic dataset produced by `hatenet generate`.\n"
    "[input]\n"
    "records = records.jsonl\n"
    "labels = labels.csv\n"
    "edges = edges.tsv\n"
    "keywords = builtin\n"
    "\n"
    "[window]\n"
    "start = 2020-01-15\n"
    "end = 2021-03-26\n"
    "\n"
    "[run]\n"
    "seed = 42\n"
    "workers = 1\n"
    "output = out\n"
    "\n"
    "[classify]\n"
    "folds = 5\n"
    "batch_size = 8\n"
    "epochs = 3\n"
    "learning_rate = 0.01\n"
    "\n"
    "[timeline]\n"
    "events = 2020-03-16,2021-03-16\n"
    "window_days = 7\n"
    "\n"
    "[homophily]\n"
    "replicates = 100\n"
    "swap_factor = 10\n"
    "direction = out\n"
    "mode = edge\n"
    "\n"
    "[contagion]\n"
    "replicates = 100\n"
    "direction = out\n"
    "min_exposed = 10\n";

inline SynthDataset generate(const SynthOptions& opt = {}) {
  using detail::Leaning;
  if (opt.users < 10) throw ValidationError("synthetic dataset needs at least 10 users");
  if (opt.records < opt.users) throw ValidationError("records must be >= users");
  Rng rng(opt.seed);
  const std::size_t n_all = opt.users + opt.silent_users;
  const auto window = TimeWindow::collection_default();
  const Days d0 = window.first_day();
  const auto days = static_cast<std::size_t>(window.last_day() - d0 + 1);
  const std::array<Days, 2> events = {hatenet::detail::days_from_civil(2020, 3, 16),
                                      hatenet::detail::days_from_civil(2021, 3, 16)};

  // Leanings of tweeting users.
  std::vector<Leaning> lean(n_all, Leaning::Neutral);
  for (std::size_t u = 0; u < opt.users; ++u) {
    const double x = rng.uniform();
    lean[u] = x < 0.2 ? Leaning::Hate : x < 0.4 ? Leaning::Counter : x < 0.46 ? Leaning::Dual
                                                                                : Leaning::Neutral;
  }

  // Follower graph: u -> v means u follows v. Same-leaning targets weighted.
  std::vector<std::vector<std::uint32_t>> follows(n_all);
  std::string edges;
  for (std::size_t u = 0; u < n_all; ++u) {
    const auto k = static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(
                                                    2 * opt.mean_out_degree - 1)));
    std::vector<std::uint8_t> used(n_all, 0);
    used[u] = 1;
    for (std::size_t e = 0, tries = 0; e < k && tries < 50 * k; ++tries) {
      const auto v = static_cast<std::uint32_t>(rng.below(n_all));
      if (used[v]) continue;
      const bool same = lean[u] == lean[v] && lean[u] != Leaning::Neutral;
      if (!same && rng.uniform() * opt.homophily >= 1.0) continue;
      used[v] = 1;
      follows[u].push_back(v);
      edges += detail::user_id(u) + "\t" + detail::user_id(v) + "\n";
      ++e;
    }
  }

  // Activation days: discrete-time spread over followees, per stance.
  constexpr std::int64_t kNone = -1;
  std::array<std::vector<std::int64_t>, 2> act;
  for (auto& a : act) a.assign(n_all, kNone);
  auto wants = [&](std::size_t u, int s) {
    return lean[u] == Leaning::Dual || (s == 0 && lean[u] == Leaning::Hate) ||
           (s == 1 && lean[u] == Leaning::Counter);
  };
  for (std::size_t d = 0; d < days; ++d) {
    for (int s = 0; s < 2; ++s) {
      std::vector<std::size_t> fresh;
      for (std::size_t u = 0; u < opt.users; ++u) {
        if (!wants(u, s) || act[s][u] != kNone) continue;
        std::size_t exposed = 0;
        for (auto v : follows[u])
          if (act[s][v] != kNone) ++exposed;
        const double hazard = opt.base_hazard + opt.exposure_hazard * static_cast<double>(exposed);
        if (rng.bernoulli(hazard)) fresh.push_back(u);
      }
      for (auto u : fresh) act[s][u] = static_cast<std::int64_t>(d);
    }
  }
  for (int s = 0; s < 2; ++s)
    for (std::size_t u = 0; u < opt.users; ++u)
      if (wants(u, s) && act[s][u] == kNone) act[s][u] = static_cast<std::int64_t>(rng.below(days));

  // Tweet counts: one activation tweet per stance, the rest heavy-tailed.
  std::vector<std::size_t> count(opt.users, 0);
  std::size_t assigned = 0;
  for (std::size_t u = 0; u < opt.users; ++u) {
    count[u] = (wants(u, 0) ? 1 : 0) + (wants(u, 1) ? 1 : 0);
    if (count[u] == 0) count[u] = 1;
    assigned += count[u];
  }
  std::vector<double> weight(opt.users);
  for (auto& w : weight) w = 1.0 / std::pow(1.0 - rng.uniform(), 1.0 / 1.5);
  std::vector<double> cumulative(opt.users);
  std::partial_sum(weight.begin(), weight.end(), cumulative.begin());
  while (assigned < opt.records) {
    const double x = rng.uniform() * cumulative.back();
    const auto u = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin());
    ++count[std::min(u, opt.users - 1)];
    ++assigned;
  }

  auto random_time = [&](std::int64_t lo_day, std::int64_t hi_day) {
    Days d;
    if (rng.bernoulli(0.15)) {
      const auto ev = events[rng.below(2)];
      d = ev + static_cast<Days>(rng.below(7));
      d = std::clamp<Days>(d, d0 + lo_day, d0 + hi_day);
    } else {
      d = d0 + lo_day + static_cast<Days>(rng.below(static_cast<std::uint64_t>(hi_day - lo_day + 1)));
    }
    return start_of_day(d) + std::chrono::seconds{static_cast<std::int64_t>(rng.below(86400))};
  };

  struct Tweet {
    Timestamp t;
    std::string user;
    std::string text;
    Label label;
  };
  std::vector<Tweet> tweets;
  tweets.reserve(opt.records);
  const auto last = static_cast<std::int64_t>(days - 1);
  for (std::size_t u = 0; u < opt.users; ++u) {
    const auto uid = detail::user_id(u);
    std::size_t left = count[u];
    std::int64_t first_act = last + 1;
    for (int s = 0; s < 2 && left > 0; ++s) {
      if (!wants(u, s)) continue;
      first_act = std::min(first_act, act[s][u]);
      const auto t = start_of_day(d0 + act[s][u]) +
                     std::chrono::seconds{static_cast<std::int64_t>(rng.below(86400))};
      const auto label = s == 0 ? Label::Hate : Label::Counterspeech;
      tweets.push_back({t, uid,
                        detail::render(s == 0 ? detail::pick(rng, detail::kHate)
                                              : detail::pick(rng, detail::kCounter),
                                       rng),
                        label});
      --left;
    }
    for (; left > 0; --left) {
      // Before activation only neutral tweets; afterwards mostly the user's stance.
      std::int64_t lo = 0, hi = last;
      Label label = Label::Neutral;
      if (first_act <= last && rng.bernoulli(0.6)) {
        lo = first_act;
        if (lean[u] == Leaning::Dual) {
          lo = std::max(act[0][u], act[1][u]);
          label = rng.bernoulli(0.5) ? Label::Hate : Label::Counterspeech;
        } else {
          label = lean[u] == Leaning::Hate ? Label::Hate : Label::Counterspeech;
        }
      } else if (first_act <= last) {
        hi = std::max<std::int64_t>(0, first_act - 1);
        if (first_act == 0) lo = hi = 0;
      }
      const auto& pool_text = label == Label::Hate
                                  ? detail::pick(rng, detail::kHate)
                                  : label == Label::Counterspeech ? detail::pick(rng, detail::kCounter)
                                                                  : detail::pick(rng, detail::kNeutral);
      auto t = random_time(lo, hi);
      // Keep pre-activation neutral tweets strictly before the first activation tweet.
      if (label == Label::Neutral && first_act <= last && day_of(t) >= d0 + first_act)
        t = start_of_day(d0 + first_act) - std::chrono::seconds{1 + static_cast<std::int64_t>(rng.below(3600))};
      if (!window.contains(t)) t = window.start + std::chrono::seconds{rng.below(3600)};
      tweets.push_back({t, uid, detail::render(pool_text, rng), label});
    }
  }
  std::stable_sort(tweets.begin(), tweets.end(),
                   [](const Tweet& a, const Tweet& b) { return a.t < b.t; });

  SynthDataset out;
  out.labels_csv = "tweet_id,label\n";
  std::vector<std::string> lines;
  lines.reserve(tweets.size() + 16);
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "t%06zu", i + 1);
    lines.push_back(detail::record_line(id, tweets[i].user, tweets[i].t, tweets[i].text));
    out.labels_csv += std::string(id) + "," + std::string(to_string(tweets[i].label)) + "\n";
  }
  // Noise for the ingest filter.
  std::vector<std::string> noise;
  for (std::size_t i = 0; i < 4; ++i) noise.push_back(lines[rng.below(lines.size())]);  // duplicates
  for (std::size_t i = 0; i < 5; ++i)
    noise.push_back(detail::record_line("x" + std::to_string(i), detail::user_id(rng.below(opt.users)),
                                        random_time(0, last), "Lovely weather for a walk today"));
  noise.push_back("{\"id\":\"bad1\",\"user_id\":\"u0001\",\"created_at\":\"2020-05-01T00:00:00Z\"\n");
  noise.push_back("this is not json\n");
  noise.push_back("{\"id\":\"bad3\",\"user_id\":\"u0002\",\"created_at\":\"not a date\",\"text\":\"covid19\"}\n");
  for (std::size_t i = 0; i < 3; ++i)
    noise.push_back(detail::record_line("old" + std::to_string(i), detail::user_id(rng.below(opt.users)),
                                        window.start - std::chrono::hours{24 * (1 + i)},
                                        "early coronavirus reports"));
  out.noise_lines = noise.size();
  for (auto& n : noise) {
    const auto pos = rng.below(lines.size() + 1);
    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(pos), std::move(n));
  }
  for (const auto& l : lines) out.records_jsonl += l;
  out.edges_tsv = std::move(edges);
  out.config_ini = std::string(kBundledConfig);
  return out;
}

}  // namespace hatenet::synth

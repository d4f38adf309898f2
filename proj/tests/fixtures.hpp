#pragma once
// Generated graphs and cascades shared by the unit and acceptance tests,
// together with the oracles they are checked against.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hatenet/cascade.hpp"
#include "hatenet/graph.hpp"

namespace fixtures {

using namespace hatenet;
using graph::Edge;
using graph::NodeId;
using graph::SocialGraph;

inline SocialGraph make_graph(std::size_t n, const std::vector<Edge>& raw) {
  auto ids = std::make_shared<graph::IdMap>();
  for (std::size_t i = 0; i < n; ++i) ids->intern("n" + std::to_string(i));
  graph::EdgeLoadReport rep;
  return SocialGraph(ids, n, graph::build_edges(raw, rep));
}

// Directed graph with `m` edge draws (self-loops and repeats dropped) and a
// random covid flag per node.
inline SocialGraph random_digraph(std::size_t n, std::size_t m, std::uint64_t seed,
                                  double covid_share = 0.5) {
  Rng rng(seed);
  std::vector<Edge> raw;
  raw.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    raw.push_back({static_cast<NodeId>(rng.below(n)), static_cast<NodeId>(rng.below(n))});
  auto g = make_graph(n, raw);
  for (NodeId u = 0; u < n; ++u) g.set_covid_flag(u, rng.bernoulli(covid_share));
  return g;
}

// Erdos-Renyi style directed graph with categories drawn uniformly from
// `cats`; every node is covid-flagged.
inline SocialGraph labeled_er(std::size_t n, double mean_out_degree, std::uint64_t seed,
                              const std::vector<UserCategory>& cats) {
  Rng rng(seed);
  const double p = mean_out_degree / static_cast<double>(n - 1);
  std::vector<Edge> raw;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(p)) raw.push_back({u, v});
  auto g = make_graph(n, raw);
  for (NodeId u = 0; u < n; ++u) {
    g.set_covid_flag(u, true);
    g.set_category(u, cats[rng.below(cats.size())]);
  }
  return g;
}

// Blocks are categories; within-block edge probability is `within_factor`
// times the cross-block probability, scaled to the requested mean out-degree.
inline SocialGraph planted_blocks(std::size_t n, const std::vector<UserCategory>& cats,
                                  double within_factor, double mean_out_degree,
                                  std::uint64_t seed) {
  Rng rng(seed);
  const auto k = cats.size();
  std::vector<std::size_t> block(n);
  for (std::size_t i = 0; i < n; ++i) block[i] = i % k;
  const double per_block = static_cast<double>(n) / static_cast<double>(k);
  const double cross = mean_out_degree / (within_factor * per_block + per_block * static_cast<double>(k - 1));
  std::vector<Edge> raw;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(block[u] == block[v] ? within_factor * cross : cross))
        raw.push_back({u, v});
  auto g = make_graph(n, raw);
  for (NodeId u = 0; u < n; ++u) {
    g.set_covid_flag(u, true);
    g.set_category(u, cats[block[u]]);
  }
  return g;
}

// Configuration-model expectation of the observed/baseline ratio on a graph
// whose nodes all share one covid class: a random stub matching sends a
// share in_stubs(B) / |E| of every out-edge to category B.
inline double configuration_model_ratio(const SocialGraph& g, UserCategory a, UserCategory b) {
  double to_b = 0, from_a = 0, from_a_to_b = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.category(u) == b) to_b += static_cast<double>(g.in_degree(u));
    if (g.category(u) != a) continue;
    for (auto v : g.out_neighbors(u)) {
      from_a += 1;
      from_a_to_b += g.category(v) == b;
    }
  }
  const double observed = from_a_to_b / from_a;
  const double expected = to_b / static_cast<double>(g.edge_count());
  return observed / expected;
}

// ---------------------------------------------------------------------------
// Cascades.

inline Timestamp day_time(std::int64_t day, std::int64_t second = 0) {
  return from_epoch(epoch_seconds(TimeWindow::collection_default().start) + day * 86400 + second);
}

inline cascade::Cascade make_cascade(std::vector<cascade::ActivationEvent> events, Timestamp end) {
  cascade::Cascade c;
  c.window_end = end;
  c.events = std::move(events);
  cascade::sort_events(c.events);
  return c;
}

struct SimCascade {
  SocialGraph graph;
  cascade::Cascade cascade;
};

struct HazardSim {
  std::size_t nodes = 500;
  double mean_out_degree = 8;
  std::size_t days = 30;
  std::size_t seeds = 10;          // hate users active on day 0
  double base_hazard = 0.002;      // per day
  double exposure_hazard = 0.01;   // per day per active hate followee
  std::size_t counter_users = 0;   // counterspeech users at uniform times
  double counter_inhibition = 1;   // hazard multiplier once a counter followee is active
};

// Discrete-day SI process over a random follow graph. Every node is
// categorized: hate if activated, counterspeech if drawn as one, else neutral.
inline SimCascade hazard_cascade(const HazardSim& o, std::uint64_t seed) {
  Rng rng(seed);
  auto g = random_digraph(o.nodes, static_cast<std::size_t>(o.mean_out_degree * static_cast<double>(o.nodes)),
                          rng.next(), 1.0);
  const auto n = g.node_count();
  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> hate_day(n, kNone), counter_day(n, kNone);
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;
  rng.shuffle(order);
  for (std::size_t i = 0; i < o.seeds && i < n; ++i) hate_day[order[i]] = 0;
  for (std::size_t i = 0; i < o.counter_users && o.seeds + i < n; ++i)
    counter_day[order[o.seeds + i]] = static_cast<std::int64_t>(rng.below(o.days));
  for (std::size_t d = 1; d < o.days; ++d) {
    const auto day = static_cast<std::int64_t>(d);
    std::vector<NodeId> newly;
    for (NodeId u = 0; u < n; ++u) {
      if (hate_day[u] != kNone || counter_day[u] != kNone) continue;
      std::size_t active = 0;
      bool inhibited = false;
      for (auto v : g.out_neighbors(u)) {
        active += hate_day[v] != kNone && hate_day[v] < day;
        inhibited = inhibited || (counter_day[v] != kNone && counter_day[v] < day);
      }
      double h = o.base_hazard + o.exposure_hazard * static_cast<double>(active);
      if (inhibited) h *= o.counter_inhibition;
      if (rng.bernoulli(std::min(1.0, h))) newly.push_back(u);
    }
    for (auto u : newly) hate_day[u] = day;
  }
  std::vector<cascade::ActivationEvent> ev;
  for (NodeId u = 0; u < n; ++u) {
    UserCategory cat = UserCategory::Neutral;
    const auto jitter = static_cast<std::int64_t>(rng.below(86400));
    if (hate_day[u] != kNone) {
      ev.push_back({u, day_time(hate_day[u], jitter), cascade::Stance::Hate, {}});
      cat = UserCategory::Hate;
    } else if (counter_day[u] != kNone) {
      ev.push_back({u, day_time(counter_day[u], jitter), cascade::Stance::Counterspeech, {}});
      cat = UserCategory::Counterspeech;
    }
    g.set_category(u, cat);
  }
  return {std::move(g), make_cascade(std::move(ev), day_time(static_cast<std::int64_t>(o.days)))};
}

// Same graph model and activation count, but activated users and their times
// are drawn independently of the graph.
inline SimCascade independent_cascade(const HazardSim& o, std::size_t activated, std::uint64_t seed) {
  Rng rng(seed);
  auto g = random_digraph(o.nodes, static_cast<std::size_t>(o.mean_out_degree * static_cast<double>(o.nodes)),
                          rng.next(), 1.0);
  std::vector<NodeId> order(g.node_count());
  for (NodeId u = 0; u < order.size(); ++u) {
    order[u] = u;
    g.set_category(u, UserCategory::Neutral);
  }
  rng.shuffle(order);
  std::vector<cascade::ActivationEvent> ev;
  for (std::size_t i = 0; i < activated && i < order.size(); ++i) {
    const auto day = static_cast<std::int64_t>(rng.below(o.days));
    ev.push_back({order[i], day_time(day, static_cast<std::int64_t>(rng.below(86400))),
                  cascade::Stance::Hate, {}});
    g.set_category(order[i], UserCategory::Hate);
  }
  return {std::move(g), make_cascade(std::move(ev), day_time(static_cast<std::int64_t>(o.days)))};
}

// ---------------------------------------------------------------------------
// Infection-risk oracle: replays the cascade one event at a time, tracking
// which neighbors each user has seen, then materializes Infected and
// Exposed(n) as explicit sets.

struct OracleLevel {
  std::size_t exposed = 0;
  std::size_t infected = 0;
};

inline std::vector<OracleLevel> brute_force_risk(const SocialGraph& g, const cascade::Cascade& c,
                                                 cascade::Stance s, cascade::Stance sp,
                                                 std::size_t n_max, bool include_dual = false) {
  const auto n = g.node_count();
  // first activation instant of each user, any stance
  std::map<NodeId, Timestamp> first;
  std::set<std::pair<NodeId, cascade::Stance>> has;
  for (const auto& e : c.events) {
    has.insert({e.user, e.category});
    auto it = first.find(e.user);
    if (it == first.end() || e.time < it->second) first[e.user] = e.time;
  }
  std::set<NodeId> population;
  for (NodeId u = 0; u < n; ++u)
    if (is_categorized(g.category(u))) population.insert(u);
  for (const auto& e : c.events) population.insert(e.user);

  std::set<NodeId> infected;
  for (auto u : population) {
    const bool a = has.count({u, sp}) > 0;
    const bool dual = has.count({u, cascade::Stance::Hate}) && has.count({u, cascade::Stance::Counterspeech});
    if (a && (include_dual || !dual)) infected.insert(u);
  }

  // Replay: seen[u] = distinct followees observed activating into s while u
  // was still open (not yet activated, or never activating and within window).
  std::vector<std::set<NodeId>> seen(n);
  std::vector<cascade::ActivationEvent> events = c.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& x, const auto& y) { return x.time < y.time; });
  for (const auto& e : events) {
    if (e.category != s || e.time > c.window_end) continue;
    for (NodeId u = 0; u < n; ++u) {
      if (!g.has_edge(u, e.user)) continue;
      const auto it = first.find(u);
      const bool open = it == first.end() || e.time < it->second;
      if (open) seen[u].insert(e.user);
    }
  }
  std::vector<OracleLevel> out(n_max);
  for (std::size_t level = 1; level <= n_max; ++level) {
    std::set<NodeId> exposed;
    for (auto u : population)
      if (seen[u].size() >= level) exposed.insert(u);
    std::vector<NodeId> both;
    std::set_intersection(exposed.begin(), exposed.end(), infected.begin(), infected.end(),
                          std::back_inserter(both));
    out[level - 1] = {exposed.size(), both.size()};
  }
  return out;
}

// Random small graph with a random cascade over a random population.
inline SimCascade random_small_case(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.below(19);
  const std::size_t m = rng.below(n * (n - 1) / 2 + 1);
  auto g = random_digraph(n, m, rng.next(), 1.0);
  std::vector<cascade::ActivationEvent> ev;
  for (NodeId u = 0; u < n; ++u) {
    g.set_category(u, rng.bernoulli(0.8) ? UserCategory::Neutral : UserCategory::Uncategorized);
    for (auto st : cascade::kStances) {
      if (!rng.bernoulli(0.35)) continue;
      // coarse times so ties between users occur
      ev.push_back({u, day_time(static_cast<std::int64_t>(rng.below(6))), st, {}});
    }
  }
  // Window end sits on the last event half the time so the boundary is exercised.
  Timestamp end = day_time(6);
  if (!ev.empty() && rng.bernoulli(0.5)) {
    end = ev.front().time;
    for (const auto& e : ev) end = std::max(end, e.time);
  }
  return {std::move(g), make_cascade(std::move(ev), end)};
}

}  // namespace fixtures

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hatenet/cascade.hpp"

using namespace hatenet;
using namespace hatenet::cascade;
using fixtures::day_time;
using fixtures::make_cascade;
using graph::NodeId;
using graph::SocialGraph;

namespace {

ingest::TweetRecord rec(std::string id, std::string user, int day, Label l) {
  ingest::TweetRecord r;
  r.tweet_id = std::move(id);
  r.user_id = std::move(user);
  r.timestamp = day_time(day);
  r.text = "covid19";
  r.label = l;
  return r;
}

SocialGraph graph_of(std::string_view edges) {
  return graph::load_edges_from_string(edges, std::make_shared<graph::IdMap>()).graph;
}

// Distinct followees whose s-event precedes u's first activation, or falls
// within the window when u never activates. Replays events in time order.
std::vector<std::size_t> replay_exposures(const SocialGraph& g, const Cascade& c, Stance s) {
  std::vector<std::optional<Timestamp>> first(g.node_count());
  for (const auto& e : c.events)
    if (!first[e.user] || e.time < *first[e.user]) first[e.user] = e.time;
  std::vector<std::set<NodeId>> seen(g.node_count());
  for (const auto& e : c.events) {
    if (e.category != s) continue;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (!g.has_edge(u, e.user)) continue;
      if (first[u] ? e.time < *first[u] : e.time <= c.window_end) seen[u].insert(e.user);
    }
  }
  std::vector<std::size_t> out;
  for (const auto& s2 : seen) out.push_back(s2.size());
  return out;
}

RiskOptions fixed_n(std::size_t n) {
  RiskOptions o;
  o.n_max = n;
  return o;
}

}  // namespace

TEST(Categorize, HateUserActivatesAtFirstHate) {
  const auto users = categorize_users({rec("1", "u", 1, Label::Neutral), rec("2", "u", 2, Label::Hate),
                                       rec("3", "u", 5, Label::Hate)});
  const auto& u = users.at("u");
  EXPECT_EQ(u.category, UserCategory::Hate);
  EXPECT_EQ(u.activation(), day_time(2));
}

TEST(Categorize, BothStancesIsDual) {
  const auto users =
      categorize_users({rec("1", "u", 1, Label::Counterspeech), rec("2", "u", 3, Label::Hate)});
  EXPECT_EQ(users.at("u").category, UserCategory::Dual);
}

TEST(Categorize, UnlabeledRecordRejected) {
  auto r = rec("1", "u", 1, Label::Hate);
  r.label.reset();
  EXPECT_THROW(categorize_users({r}), DataError);
}

// u1 hate; u2 dual; u3 counter; u4 neutral; u5 hate; u6 counter; u7 not in graph.
TEST(BuildCascade, SixUserFixture) {
  const auto g = graph_of("u1\tu2\nu2\tu3\nu3\tu4\nu4\tu5\nu5\tu6\n");
  const std::vector<ingest::TweetRecord> records = {
      rec("a", "u1", 1, Label::Neutral), rec("b", "u1", 2, Label::Hate), rec("c", "u1", 5, Label::Hate),
      rec("d", "u2", 1, Label::Counterspeech), rec("e", "u2", 3, Label::Hate),
      rec("f", "u3", 4, Label::Counterspeech),
      rec("g", "u4", 1, Label::Neutral), rec("h", "u4", 2, Label::Neutral),
      rec("i", "u5", 6, Label::Hate), rec("j", "u5", 1, Label::Neutral),
      rec("k", "u6", 2, Label::Counterspeech), rec("l", "u6", 1, Label::Counterspeech),
      rec("m", "u7", 1, Label::Hate)};
  const auto b = build_cascade(records, g, {day_time(30)});
  using C = UserCategory;
  EXPECT_EQ(b.category_counts[static_cast<std::size_t>(C::Hate)], 2u);
  EXPECT_EQ(b.category_counts[static_cast<std::size_t>(C::Counterspeech)], 2u);
  EXPECT_EQ(b.category_counts[static_cast<std::size_t>(C::Dual)], 1u);
  EXPECT_EQ(b.category_counts[static_cast<std::size_t>(C::Neutral)], 1u);
  EXPECT_EQ(b.users, 7u);
  EXPECT_EQ(b.unresolved_users, 1u);
  // u1 hate, u2 counter+hate, u3 counter, u5 hate, u6 counter
  ASSERT_EQ(b.cascade.events.size(), 6u);
  EXPECT_TRUE(std::is_sorted(b.cascade.events.begin(), b.cascade.events.end(),
                             [](const auto& x, const auto& y) { return x.time < y.time; }));
  const auto u6 = *g.ids().find("u6");
  const auto it = std::find_if(b.cascade.events.begin(), b.cascade.events.end(),
                               [&](const auto& e) { return e.user == u6; });
  EXPECT_EQ(it->time, day_time(1));
  EXPECT_EQ(it->tweet_id, "l");
}

TEST(BuildCascade, EventsAfterWindowDropped) {
  const auto g = graph_of("u1\tu2\n");
  const auto b = build_cascade({rec("1", "u1", 1, Label::Hate), rec("2", "u2", 9, Label::Hate)}, g,
                               {day_time(5)});
  EXPECT_EQ(b.cascade.events.size(), 1u);
  EXPECT_EQ(b.events_after_window, 1u);
}

TEST(BuildCascade, EmptyStream) {
  EXPECT_THROW(build_cascade({}, graph_of("a\tb\n")), ValidationError);
}

TEST(Exposure, OneBeforeOneAfter) {
  const auto g = graph_of("u\ta\nu\tb\n");  // u=0 a=1 b=2
  const auto c = make_cascade({{1, day_time(1), Stance::Hate, {}}, {0, day_time(2), Stance::Hate, {}},
                               {2, day_time(3), Stance::Hate, {}}},
                              day_time(10));
  EXPECT_EQ(compute_exposures(g, c, Stance::Hate)[0], 1u);
}

TEST(Exposure, IsolatedNode) {
  auto ids = std::make_shared<graph::IdMap>();
  ids->intern("alone");
  const auto g = graph::load_edges_from_string("a\tb\n", ids).graph;
  const auto c = make_cascade({{2, day_time(1), Stance::Hate, {}}}, day_time(10));
  EXPECT_EQ(compute_exposures(g, c, Stance::Hate)[0], 0u);
  EXPECT_EQ(compute_exposures(g, c, Stance::Hate)[1], 1u);
}

TEST(Exposure, SimultaneousActivationNotCounted) {
  const auto g = graph_of("u\ta\n");
  const auto c = make_cascade({{0, day_time(2), Stance::Hate, {}}, {1, day_time(2), Stance::Hate, {}}},
                              day_time(10));
  EXPECT_EQ(compute_exposures(g, c, Stance::Hate)[0], 0u);
}

TEST(Exposure, FifteenNodeReplay) {
  Rng rng(15);
  auto g = fixtures::random_digraph(15, 45, 99, 1.0);
  std::vector<ActivationEvent> ev;
  for (NodeId u = 0; u < 15; ++u)
    for (auto s : kStances)
      if (rng.bernoulli(0.4)) ev.push_back({u, day_time(static_cast<int>(rng.below(8))), s, {}});
  const auto c = make_cascade(ev, day_time(6));
  for (auto s : kStances) {
    const auto got = compute_exposures(g, c, s);
    const auto want = replay_exposures(g, c, s);
    for (NodeId u = 0; u < 15; ++u) EXPECT_EQ(got[u], want[u]) << "node " << u;
  }
}

TEST(ExposureProperty, MonotoneInWindowEnd) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto sc = fixtures::random_small_case(rng.next());
    for (auto s : kStances) {
      auto early = sc.cascade;
      const auto a = compute_exposures(sc.graph, early, s);
      auto late = sc.cascade;
      late.window_end = late.window_end + std::chrono::hours(24 * (1 + rng.below(5)));
      const auto b = compute_exposures(sc.graph, late, s);
      for (std::size_t u = 0; u < a.size(); ++u) EXPECT_LE(a[u], b[u]);
    }
  }
}

TEST(Risk, NobodyInfected) {
  // Only hate events exist, so nobody is infected into counterspeech.
  auto g = graph_of("a\th1\na\th2\nb\th1\nh1\th2\n");
  for (NodeId u = 0; u < g.node_count(); ++u) g.set_category(u, UserCategory::Neutral);
  const auto h1 = *g.ids().find("h1"), h2 = *g.ids().find("h2");
  const auto c = make_cascade({{h1, day_time(1), Stance::Hate, {}}, {h2, day_time(2), Stance::Hate, {}}},
                              day_time(5));
  const auto curve = infection_risk(g, c, Stance::Counterspeech, Stance::Counterspeech, fixed_n(2));
  EXPECT_TRUE(curve.empty);
  const auto hc = infection_risk(g, c, Stance::Hate, Stance::Counterspeech, fixed_n(2));
  for (const auto& lv : hc.levels) EXPECT_EQ(lv.risk.value_or(0.0), 0.0);
  EXPECT_EQ(hc.levels[0].exposed, 2u);  // a and b; h1 follows h2, which activates later
  EXPECT_EQ(hc.levels[1].exposed, 1u);
}

TEST(Risk, EveryExposedInfected) {
  const auto g = graph_of("x\ts\ny\ts\n");
  const auto s = *g.ids().find("s"), x = *g.ids().find("x"), y = *g.ids().find("y");
  const auto c = make_cascade({{s, day_time(1), Stance::Hate, {}}, {x, day_time(2), Stance::Hate, {}},
                               {y, day_time(3), Stance::Hate, {}}},
                              day_time(5));
  const auto curve = infection_risk(g, c, Stance::Hate, Stance::Hate, fixed_n(2));
  EXPECT_EQ(*curve.levels[0].risk, 1.0);
  EXPECT_EQ(curve.levels[0].exposed, 2u);
  EXPECT_FALSE(curve.levels[1].risk.has_value());
}

TEST(Risk, DualUsersExcludedUnlessRequested) {
  const auto g = graph_of("d\ts\n");
  const auto s = *g.ids().find("s"), d = *g.ids().find("d");
  const auto c = make_cascade({{s, day_time(1), Stance::Hate, {}}, {d, day_time(2), Stance::Hate, {}},
                               {d, day_time(3), Stance::Counterspeech, {}}},
                              day_time(5));
  EXPECT_EQ(infection_risk(g, c, Stance::Hate, Stance::Hate, fixed_n(1)).levels[0].infected, 0u);
  RiskOptions o = fixed_n(1);
  o.exposure.include_dual = true;
  EXPECT_EQ(infection_risk(g, c, Stance::Hate, Stance::Hate, o).levels[0].infected, 1u);
}

TEST(Risk, DefaultNMaxUsesMinExposed) {
  auto sc = fixtures::hazard_cascade({}, 5);
  RiskOptions o;
  o.min_exposed = 50;
  const auto curve = infection_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, o);
  ASSERT_FALSE(curve.levels.empty());
  EXPECT_GE(curve.levels.back().exposed, 50u);
  const auto longer = infection_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate,
                                     fixed_n(curve.levels.size() + 1));
  EXPECT_LT(longer.levels.back().exposed, 50u);
}

TEST(Risk, FifteenNodeOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto sc = fixtures::random_small_case(1000 + seed);
    for (auto s : kStances)
      for (auto sp : kStances) {
        const auto curve = infection_risk(sc.graph, sc.cascade, s, sp, fixed_n(4));
        const auto want = fixtures::brute_force_risk(sc.graph, sc.cascade, s, sp, 4);
        for (std::size_t i = 0; i < 4; ++i) {
          EXPECT_EQ(curve.levels[i].exposed, want[i].exposed);
          EXPECT_EQ(curve.levels[i].infected, want[i].infected);
        }
      }
  }
}

TEST(RiskProperty, ExposedNonIncreasingAndRiskBounded) {
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto sc = fixtures::random_small_case(rng.next());
    const auto curve = infection_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, fixed_n(6));
    for (std::size_t i = 0; i < curve.levels.size(); ++i) {
      const auto& lv = curve.levels[i];
      if (i > 0) {
        EXPECT_LE(lv.exposed, curve.levels[i - 1].exposed);
      }
      EXPECT_LE(lv.infected, lv.exposed);
      EXPECT_EQ(lv.risk.has_value(), lv.exposed > 0);
      if (lv.risk) {
        EXPECT_GE(*lv.risk, 0.0);
        EXPECT_LE(*lv.risk, 1.0);
      }
    }
  }
}

TEST(ShuffleCascade, PreservesMultisets) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sc = fixtures::random_small_case(rng.next());
    const auto sh = shuffle_cascade(sc.cascade, rng.next());
    std::multiset<std::int64_t> t0, t1;
    std::multiset<std::pair<NodeId, Stance>> p0, p1;
    for (const auto& e : sc.cascade.events) {
      t0.insert(epoch_seconds(e.time));
      p0.insert({e.user, e.category});
    }
    for (const auto& e : sh.events) {
      t1.insert(epoch_seconds(e.time));
      p1.insert({e.user, e.category});
    }
    EXPECT_EQ(t0, t1);
    EXPECT_EQ(p0, p1);
  }
}

TEST(ShuffledRisk, SingleEventIsVacuous) {
  const auto g = graph_of("a\tb\n");
  const auto c = make_cascade({{1, day_time(1), Stance::Hate, {}}}, day_time(4));
  const auto curve = shuffled_risk(g, c, Stance::Hate, Stance::Hate, fixed_n(1), {10, 1, 1});
  EXPECT_TRUE(curve.vacuous_shuffle);
  EXPECT_EQ(curve.levels[0].baseline_mean, curve.levels[0].risk);
  EXPECT_EQ(*curve.levels[0].baseline_std, 0.0);
}

TEST(ShuffledRisk, IndependentCascadeWithinTwoStd) {
  fixtures::HazardSim o;
  const auto sc = fixtures::independent_cascade(o, 150, 8);
  const auto curve = shuffled_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, fixed_n(3), {100, 2, 1});
  for (const auto& lv : curve.levels) {
    ASSERT_TRUE(lv.risk && lv.baseline_mean);
    EXPECT_LE(std::abs(*lv.risk - *lv.baseline_mean), 2 * *lv.baseline_std) << "n=" << lv.n;
  }
}

TEST(ShuffledRisk, PlantedContagionAboveBaseline) {
  const auto sc = fixtures::hazard_cascade({}, 9);
  const auto curve = shuffled_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, fixed_n(1), {100, 2, 1});
  const auto& lv = curve.levels[0];
  EXPECT_GT(*lv.risk, *lv.baseline_mean + 2 * *lv.baseline_std);
}

TEST(ShuffledRisk, SeedsAgreeOnNullFixture) {
  const auto sc = fixtures::independent_cascade({}, 150, 10);
  const auto a = shuffled_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, fixed_n(2), {100, 1, 1});
  const auto b = shuffled_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, fixed_n(2), {100, 2, 1});
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& x = a.levels[i];
    const auto& y = b.levels[i];
    const double se = std::sqrt(std::pow(*x.baseline_std, 2) / x.baseline_samples +
                                std::pow(*y.baseline_std, 2) / y.baseline_samples);
    EXPECT_LE(std::abs(*x.baseline_mean - *y.baseline_mean), 3 * se);
  }
}

TEST(ContagionReport, EmptyPairs) {
  const auto sc = fixtures::random_small_case(1);
  EXPECT_TRUE(contagion_report(sc.graph, sc.cascade, {}, fixed_n(1), {2, 1, 1}).empty());
}

TEST(ContagionReport, PlantedContagionAndInhibition) {
  fixtures::HazardSim o;
  o.counter_users = 60;
  o.counter_inhibition = 0.0;
  const auto sc = fixtures::hazard_cascade(o, 14);
  const auto curves = contagion_report(sc.graph, sc.cascade,
                                       {{Stance::Hate, Stance::Hate}, {Stance::Counterspeech, Stance::Hate}},
                                       fixed_n(1), {100, 3, 1});
  ASSERT_EQ(curves.size(), 2u);
  const auto& hh = curves[0].levels[0];
  const auto& ch = curves[1].levels[0];
  EXPECT_GT(*hh.risk, *hh.baseline_mean);
  EXPECT_LT(*ch.risk, *ch.baseline_mean);
}

TEST(ContagionReport, DeterministicAcrossWorkers) {
  const auto sc = fixtures::hazard_cascade({}, 2);
  const std::vector<StancePair> pairs = {{Stance::Hate, Stance::Hate}, {Stance::Counterspeech, Stance::Hate}};
  const auto a = contagion_report(sc.graph, sc.cascade, pairs, fixed_n(3), {20, 7, 1});
  const auto b = contagion_report(sc.graph, sc.cascade, pairs, fixed_n(3), {20, 7, 3});
  EXPECT_EQ(risk_curves_csv(a), risk_curves_csv(b));
}

TEST(ContagionReport, RejectsBadOptions) {
  const auto sc = fixtures::random_small_case(1);
  EXPECT_THROW(contagion_report(sc.graph, sc.cascade, {{Stance::Hate, Stance::Hate}}, fixed_n(1), {1, 1, 1}),
               ValidationError);
  EXPECT_THROW(infection_risk(sc.graph, sc.cascade, Stance::Hate, Stance::Hate, fixed_n(0)),
               ValidationError);
}

TEST(CascadeCsv, RoundTrip) {
  const auto g = graph_of("a\tb\nb\tc\n");
  const auto c = make_cascade({{0, day_time(1), Stance::Hate, {}}, {2, day_time(3), Stance::Counterspeech, {}}},
                              day_time(5));
  const auto back = parse_cascade_csv(cascade_csv(c, g.ids()), g.ids(), c.window_end);
  ASSERT_EQ(back.events.size(), 2u);
  EXPECT_EQ(back.events[1].user, 2u);
  EXPECT_EQ(back.events[1].category, Stance::Counterspeech);
  EXPECT_EQ(back.events[1].time, day_time(3));
}

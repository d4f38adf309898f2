#pragma once
// Command implementations behind the CLI. Each command reads its inputs (from
// the config or from upstream artifacts in the output directory), writes CSV
// artifacts, and records them in manifest_<command>.json together with input
// digests, seeds and the resolved configuration.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hatenet/cascade.hpp"
#include "hatenet/classify.hpp"
#include "hatenet/config.hpp"
#include "hatenet/core.hpp"
#include "hatenet/graph.hpp"
#include "hatenet/ingest.hpp"
#include "hatenet/stats.hpp"
#include "hatenet/svg.hpp"
#include "hatenet/synth.hpp"
#include "json.hpp"

namespace hatenet::pipeline {

inline constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;
using config::RunConfig;

// Tracks inputs and artifacts for one command and writes its manifest.
class Manifest {
 public:
  Manifest(std::string command, const RunConfig& cfg) : command_(std::move(command)), cfg_(cfg) {
    fs::create_directories(cfg.output);
  }

  std::string input(const std::string& path) {
    auto content = read_file(path);
    inputs_.push_back({path, content_digest(content)});
    return content;
  }

  void emit(const std::string& name, const std::string& content) {
    write_file((fs::path(cfg_.output) / name).string(), content);
    artifacts_.push_back({name, content_digest(content)});
  }

  void seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }

  const std::vector<std::pair<std::string, std::string>>& artifacts() const { return artifacts_; }

  void write() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["version"] = kVersion;
    j["seeds"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : seeds_) j["seeds"][k] = v;
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg_.resolved) j["config"][k] = v;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& [p, d] : inputs_) j["inputs"].push_back({{"path", p}, {"digest", d}});
    j["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& [p, d] : artifacts_) j["artifacts"].push_back({{"path", p}, {"digest", d}});
    write_file((fs::path(cfg_.output) / ("manifest_" + command_ + ".json")).string(),
               j.dump(2) + "\n");
  }

 private:
  std::string command_;
  const RunConfig& cfg_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> artifacts_;
  std::map<std::string, std::uint64_t> seeds_;
};

namespace detail {

inline std::size_t workers(const RunConfig& c) { return c.workers == 0 ? default_workers() : c.workers; }

inline std::string upstream(const RunConfig& c, const std::string& name, const std::string& producer) {
  const auto p = (fs::path(c.output) / name).string();
  if (!fs::is_regular_file(p))
    throw ValidationError("missing upstream artifact " + p + " (run `" + producer + "` first)");
  return p;
}

inline void require(const std::string& value, const std::string& key, const std::string& command) {
  if (value.empty()) throw ValidationError(command + " requires " + key);
}

inline std::string csv_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

inline std::vector<ingest::TweetRecord> load_filtered(Manifest& m, const RunConfig& c,
                                                      const ingest::KeywordSet& kw) {
  const auto path = upstream(c, "records.jsonl", "ingest");
  return ingest::read_records(m.input(path), kw, path);
}

inline std::vector<ingest::TweetRecord> labeled_only(std::vector<ingest::TweetRecord> records) {
  std::erase_if(records, [](const auto& r) { return !r.label; });
  return records;
}

// Table of a small CSV file (no quoting).
inline std::vector<std::vector<std::string>> read_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  for_each_line(content, [&](std::size_t, std::string_view line) {
    if (trim(line).empty()) return;
    std::vector<std::string> row;
    for (auto f : split(line, ',')) row.emplace_back(trim(f));
    rows.push_back(std::move(row));
  });
  return rows;
}

inline double to_real(const std::string& s) {
  if (s == "NA" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

struct Graphs {
  graph::SocialGraph graph;
  graph::EdgeLoadReport report;
};

// Node attribute file: configured path, else the users command's nodes.csv.
inline Graphs load_graph(Manifest& m, const RunConfig& c, bool with_nodes,
                         const std::vector<ingest::TweetRecord>* register_users = nullptr) {
  auto ids = std::make_shared<graph::IdMap>();
  std::vector<graph::NodeAttribute> attrs;
  if (with_nodes) {
    const auto path = c.nodes.empty() ? upstream(c, "nodes.csv", "users") : c.nodes;
    attrs = graph::parse_node_attributes(m.input(path), path);
    graph::register_ids(attrs, *ids);
  }
  if (register_users)
    for (const auto& r : *register_users) ids->intern(r.user_id);
  auto loaded = graph::load_edges_from_string(m.input(c.edges), ids);
  if (with_nodes) graph::apply_node_attributes(loaded.graph, attrs);
  return {std::move(loaded.graph), std::move(loaded.report)};
}

inline std::string edge_report_csv(const graph::EdgeLoadReport& r, std::size_t nodes) {
  return "metric,value\nlines," + std::to_string(r.lines) + "\nretained," +
         std::to_string(r.retained) + "\nduplicates," + std::to_string(r.duplicates) +
         "\nself_loops," + std::to_string(r.self_loops) + "\nmalformed," +
         std::to_string(r.malformed) + "\nnodes," + std::to_string(nodes) + "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline void cmd_ingest(const RunConfig& c) {
  detail::require(c.records, "input.records", "ingest");
  Manifest m("ingest", c);
  const auto kw = ingest::load_keywords(c.keywords);
  ingest::LabelMap labels;
  if (!c.labels.empty()) {
    m.input(c.labels);
    labels = ingest::load_labels(c.labels);
  }
  ingest::FilterOptions opt;
  opt.window = c.window;
  const auto res = ingest::filter_corpus(m.input(c.records), kw, c.labels.empty() ? nullptr : &labels, opt);
  m.emit("records.jsonl", ingest::write_records(res.records));
  m.emit("corpus_stats.csv", ingest::corpus_stats_csv(res.report));
  m.emit("corpus_daily.csv", ingest::corpus_daily_csv(res.report.stats));
  std::string bad = "line,reason\n";
  for (const auto& [line, why] : res.report.malformed_lines)
    bad += std::to_string(line) + "," + detail::csv_quote(why) + "\n";
  m.emit("malformed.csv", bad);
  m.write();
}

inline void cmd_classify(const RunConfig& c) {
  Manifest m("classify", c);
  m.seed("classify", c.seeds.classify);
  const auto kw = ingest::load_keywords(c.keywords);
  const auto records = detail::labeled_only(detail::load_filtered(m, c, kw));
  std::string report = classify::eval_report_csv_header();
  std::string confusion = "feature_set,gold,hate,counterspeech,neutral\n";
  for (auto set : c.feature_sets) {
    std::vector<classify::LabeledExample> examples;
    examples.reserve(records.size());
    for (const auto& r : records)
      examples.push_back({classify::extract_features(set, r.text, kw), *r.label});
    const auto eval = classify::cross_validate(examples, c.folds, c.hyper, c.seeds.classify,
                                               detail::workers(c));
    report += classify::eval_report_csv_rows(to_string(set), eval);
    for (auto g : kAllLabels) {
      confusion += std::string(to_string(set)) + "," + std::string(to_string(g));
      for (auto p : kAllLabels)
        confusion += "," + std::to_string(eval.confusion[static_cast<std::size_t>(g)]
                                                        [static_cast<std::size_t>(p)]);
      confusion += "\n";
    }
    const auto model = classify::train(examples, c.hyper, c.seeds.classify);
    m.emit("model_" + std::string(to_string(set)) + ".txt", classify::save_model(model));
  }
  m.emit("eval_report.csv", report);
  m.emit("confusion.csv", confusion);
  m.write();
}

inline void cmd_users(const RunConfig& c) {
  Manifest m("users", c);
  const auto kw = ingest::load_keywords(c.keywords);
  const auto records = detail::labeled_only(detail::load_filtered(m, c, kw));
  const auto users = cascade::categorize_users(records);

  std::string users_csv = "user_id,category,hate,counterspeech,neutral,activation\n";
  std::vector<graph::NodeAttribute> nodes;
  std::map<std::string, Timestamp> activations;
  std::set<std::string> hate_users, counter_users;
  for (const auto& [id, u] : users) {
    const auto act = u.activation();
    users_csv += id + "," + std::string(to_string(u.category)) + "," + std::to_string(u.tweets[0]) +
                 "," + std::to_string(u.tweets[1]) + "," + std::to_string(u.tweets[2]) + "," +
                 (act ? format_timestamp(*act) : std::string("NA")) + "\n";
    nodes.push_back({id, true, u.category});
    if (act) activations[id] = *act;
    if (u.category == UserCategory::Hate) hate_users.insert(id);
    if (u.category == UserCategory::Counterspeech) counter_users.insert(id);
  }
  m.emit("users.csv", users_csv);
  m.emit("nodes.csv", graph::node_attributes_csv(nodes));
  m.emit("tail_hate.csv", stats::histogram_csv(stats::tail_distribution(records, Label::Hate)));
  m.emit("tail_counterspeech.csv",
         stats::histogram_csv(stats::tail_distribution(records, Label::Counterspeech)));

  // Hate users (a) against counterspeech users (b), before and after activation.
  std::string cmp = stats::comparisons_csv_header();
  std::string omitted = "phase,group,omitted\n";
  for (auto phase : {stats::Phase::Pre, stats::Phase::Post}) {
    const std::string ph = phase == stats::Phase::Pre ? "pre" : "post";
    const auto a = stats::behavior_profiles(records, hate_users, activations, phase);
    const auto b = stats::behavior_profiles(records, counter_users, activations, phase);
    omitted += ph + ",hate," + std::to_string(a.omitted) + "\n";
    omitted += ph + ",counterspeech," + std::to_string(b.omitted) + "\n";
    using Getter = double (*)(const stats::BehaviorProfile&);
    const std::pair<const char*, Getter> metrics[] = {
        {"covid_tweets", [](const stats::BehaviorProfile& p) { return static_cast<double>(p.covid_tweet_count); }},
        {"chars", [](const stats::BehaviorProfile& p) { return p.mean_chars; }},
        {"words", [](const stats::BehaviorProfile& p) { return p.mean_words; }},
        {"urls", [](const stats::BehaviorProfile& p) { return p.mean_urls; }},
        {"mentions", [](const stats::BehaviorProfile& p) { return p.mean_mentions; }},
        {"sentiment", [](const stats::BehaviorProfile& p) { return p.mean_sentiment; }},
    };
    for (const auto& [name, get] : metrics) {
      std::vector<double> va, vb;
      for (const auto& [id, p] : a.profiles) va.push_back(get(p));
      for (const auto& [id, p] : b.profiles) vb.push_back(get(p));
      if (va.empty() || vb.empty()) continue;
      cmp += stats::comparison_csv_row(stats::mann_whitney_u(va, vb, ph + "." + name));
    }
  }
  m.emit("comparisons.csv", cmp);
  m.emit("profiles_omitted.csv", omitted);
  m.write();
}

inline void cmd_timeline(const RunConfig& c) {
  Manifest m("timeline", c);
  const auto kw = ingest::load_keywords(c.keywords);
  const auto records = detail::labeled_only(detail::load_filtered(m, c, kw));
  const auto series = stats::daily_counts(records, c.window);
  m.emit("daily_series.csv", stats::daily_series_csv(series));
  std::string spikes = "event_day,label,before,after,percent,status\n";
  for (auto day : c.events) {
    for (auto l : kAllLabels) {
      spikes += format_day(day) + "," + std::string(to_string(l)) + ",";
      const auto w = static_cast<Days>(c.window_days);
      if (!series.covers(day - w) || !series.covers(day + w - 1)) {
        spikes += "NA,NA,NA,out_of_range\n";
        continue;
      }
      const auto ch = stats::window_change(series, l, day, c.window_days);
      spikes += std::to_string(ch.before) + "," + std::to_string(ch.after) + "," +
                (ch.percent ? format_real(*ch.percent) + ",ok" : std::string("NA,undefined")) + "\n";
    }
  }
  m.emit("spikes.csv", spikes);
  m.write();
}

inline void cmd_homophily(const RunConfig& c) {
  detail::require(c.edges, "input.edges", "homophily");
  Manifest m("homophily", c);
  m.seed("homophily", c.seeds.homophily);
  const auto g = detail::load_graph(m, c, true);
  m.emit("edges_report.csv", detail::edge_report_csv(g.report, g.graph.node_count()));
  const auto ego = graph::ego_stats(g.graph);
  m.emit("ego_stats.csv", graph::ego_stats_csv(ego));

  graph::HomophilyOptions opt;
  opt.replicates = c.shuffle_replicates;
  opt.seed = c.seeds.homophily;
  opt.swap_attempts_factor = c.swap_factor;
  opt.preserve_covid_partition = c.preserve_covid;
  opt.connectivity = c.connectivity;
  opt.workers = detail::workers(c);
  const auto rep = graph::homophily_report(g.graph, opt);
  m.emit("connectivity_observed.csv", graph::category_matrix_csv(rep.observed));
  m.emit("connectivity_baseline_mean.csv", graph::category_matrix_csv(rep.baseline_mean));
  m.emit("connectivity_baseline_std.csv", graph::category_matrix_csv(rep.baseline_std));
  m.emit("connectivity_ratio.csv", graph::category_matrix_csv(rep.ratio));

  std::string cmp = stats::comparisons_csv_header();
  const auto h = static_cast<std::size_t>(UserCategory::Hate);
  const auto cs = static_cast<std::size_t>(UserCategory::Counterspeech);
  if (!ego.followers[h].empty() && !ego.followers[cs].empty()) {
    cmp += stats::comparison_csv_row(stats::mann_whitney_u(ego.followers[h], ego.followers[cs], "followers"));
    cmp += stats::comparison_csv_row(stats::mann_whitney_u(ego.followees[h], ego.followees[cs], "followees"));
  }
  m.emit("degree_comparisons.csv", cmp);
  m.write();
}

inline void cmd_contagion(const RunConfig& c) {
  detail::require(c.edges, "input.edges", "contagion");
  Manifest m("contagion", c);
  m.seed("contagion", c.seeds.contagion);
  const auto kw = ingest::load_keywords(c.keywords);
  const auto records = detail::labeled_only(detail::load_filtered(m, c, kw));
  auto g = detail::load_graph(m, c, false);
  cascade::BuildOptions bo;
  bo.window_end = c.window.end;
  const auto built = cascade::build_cascade(records, g.graph, bo);
  cascade::apply_categories(g.graph, built.node_categories);
  m.emit("cascade.csv", cascade::cascade_csv(built.cascade, g.graph.ids()));

  cascade::RiskOptions risk;
  risk.exposure = c.exposure;
  risk.n_max = c.n_max;
  risk.min_exposed = c.min_exposed;
  cascade::NullOptions null;
  null.replicates = c.cascade_replicates;
  null.seed = c.seeds.contagion;
  null.workers = detail::workers(c);
  using cascade::Stance;
  const std::vector<cascade::StancePair> pairs = {{Stance::Hate, Stance::Hate},
                                                  {Stance::Hate, Stance::Counterspeech},
                                                  {Stance::Counterspeech, Stance::Hate},
                                                  {Stance::Counterspeech, Stance::Counterspeech}};
  const auto curves = cascade::contagion_report(g.graph, built.cascade, pairs, risk, null);
  m.emit("risk_curves.csv", cascade::risk_curves_csv(curves));
  std::string summary = "metric,value\n";
  summary += "users," + std::to_string(built.users) + "\n";
  summary += "unresolved_users," + std::to_string(built.unresolved_users) + "\n";
  summary += "events," + std::to_string(built.cascade.events.size()) + "\n";
  summary += "events_after_window," + std::to_string(built.events_after_window) + "\n";
  for (const auto& cv : curves)
    summary += "empty:" + cv.pair_name() + "," + (cv.empty ? "1" : "0") + "\n";
  m.emit("contagion_summary.csv", summary);
  m.write();
}

// Renders SVG charts from whichever upstream CSVs are present.
inline void cmd_report(const RunConfig& c) {
  Manifest m("report", c);
  const auto out = fs::path(c.output);
  auto have = [&](const char* name) { return fs::is_regular_file(out / name); };
  auto table = [&](const char* name) { return detail::read_csv(m.input((out / name).string())); };
  std::size_t charts = 0;

  if (have("daily_series.csv")) {
    const auto rows = table("daily_series.csv");
    svg::ChartSpec spec;
    spec.title = "Daily hate and counterspeech tweets";
    spec.x_label = "day";
    spec.y_label = "tweets";
    svg::Series hate{"hate", {}, svg::kPalette[0]}, counter{"counterspeech", {}, svg::kPalette[1]};
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto x = static_cast<double>(i - 1);
      hate.points.emplace_back(x, detail::to_real(rows[i][1]));
      counter.points.emplace_back(x, detail::to_real(rows[i][2]));
      if ((i - 1) % 90 == 0) spec.x_ticks.emplace_back(x, rows[i][0]);
    }
    spec.series = {hate, counter};
    m.emit("daily_series.svg", svg::render_chart(spec));
    ++charts;
  }
  if (have("tail_hate.csv") && have("tail_counterspeech.csv")) {
    svg::ChartSpec spec;
    spec.title = "Tweets per user (log-log)";
    spec.x_label = "tweets per user";
    spec.y_label = "users";
    spec.log_x = spec.log_y = true;
    const std::pair<const char*, const char*> files[] = {{"tail_hate.csv", "hate"},
                                                         {"tail_counterspeech.csv", "counterspeech"}};
    std::size_t k = 0;
    for (const auto& [file, name] : files) {
      svg::Series s{name, {}, svg::kPalette[k++], false, true};
      const auto rows = table(file);
      for (std::size_t i = 1; i < rows.size(); ++i)
        s.points.emplace_back(detail::to_real(rows[i][0]), detail::to_real(rows[i][1]));
      spec.series.push_back(std::move(s));
    }
    m.emit("tail_distribution.svg", svg::render_chart(spec));
    ++charts;
  }
  if (have("connectivity_ratio.csv")) {
    const auto rows = table("connectivity_ratio.csv");
    std::vector<svg::Bar> bars;
    for (std::size_t i = 1; i < rows.size(); ++i)
      for (std::size_t j = 1; j < rows[i].size(); ++j)
        bars.push_back({rows[i][0] + "->" + rows[0][j], detail::to_real(rows[i][j]),
                        svg::kPalette[(i - 1) % 4]});
    m.emit("homophily_ratios.svg",
           svg::render_bars("Connectivity relative to shuffled baseline", "observed / baseline", bars, 1.0));
    ++charts;
  }
  if (have("risk_curves.csv")) {
    const auto rows = table("risk_curves.csv");
    std::map<std::string, std::vector<const std::vector<std::string>*>> by_pair;
    std::vector<std::string> order;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (!by_pair.count(rows[i][0])) order.push_back(rows[i][0]);
      by_pair[rows[i][0]].push_back(&rows[i]);
    }
    for (const auto& pair : order) {
      svg::ChartSpec spec;
      spec.title = "Infection risk " + pair;
      spec.x_label = "exposures n";
      spec.y_label = "risk";
      svg::Series emp{"empirical", {}, svg::kPalette[0], true, true};
      svg::Series base{"shuffled mean", {}, svg::kPalette[3], true, false, true};
      svg::Band band;
      for (const auto* r : by_pair[pair]) {
        const double n = detail::to_real((*r)[1]);
        emp.points.emplace_back(n, detail::to_real((*r)[4]));
        const double mu = detail::to_real((*r)[5]), sd = detail::to_real((*r)[6]);
        base.points.emplace_back(n, mu);
        if (std::isfinite(mu) && std::isfinite(sd)) {
          band.x.push_back(n);
          band.lo.push_back(std::max(0.0, mu - 2 * sd));
          band.hi.push_back(mu + 2 * sd);
        }
      }
      spec.series = {emp, base};
      spec.bands = {band};
      std::string file = pair;
      std::replace(file.begin(), file.end(), '-', '_');
      file.erase(std::remove(file.begin(), file.end(), '>'), file.end());
      m.emit("risk_" + file + ".svg", svg::render_chart(spec));
      ++charts;
    }
  }
  if (charts == 0)
    throw ValidationError("report: no upstream CSV artifacts found in " + c.output);
  m.write();
}

// Every analysis command in pipeline order; graph commands need input.edges.
inline void cmd_run_all(const RunConfig& c) {
  cmd_ingest(c);
  cmd_classify(c);
  cmd_users(c);
  cmd_timeline(c);
  if (!c.edges.empty()) {
    cmd_homophily(c);
    cmd_contagion(c);
  }
  cmd_report(c);
}

// Writes the synthetic dataset (records.jsonl, labels.csv, edges.tsv, run.ini).
inline void cmd_generate(const std::string& dir, const synth::SynthOptions& opt) {
  fs::create_directories(dir);
  const auto d = synth::generate(opt);
  write_file((fs::path(dir) / "records.jsonl").string(), d.records_jsonl);
  write_file((fs::path(dir) / "labels.csv").string(), d.labels_csv);
  write_file((fs::path(dir) / "edges.tsv").string(), d.edges_tsv);
  write_file((fs::path(dir) / "run.ini").string(), d.config_ini);
}

}  // namespace hatenet::pipeline

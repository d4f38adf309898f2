#pragma once
// Run configuration: a sectioned key=value file plus overrides.
//
//   [input]      records, labels, edges, nodes, keywords
//   [window]     start, end
//   [run]        seed, workers, output
//   [classify]   folds, batch_size, epochs, learning_rate, feature_sets, seed
//   [timeline]   events, window_days
//   [homophily]  replicates, swap_factor, direction, mode, preserve_covid, seed
//   [contagion]  replicates, direction, include_dual, min_exposed, n_max, seed
//
// Relative paths in a config file resolve against the file's directory.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hatenet/cascade.hpp"
#include "hatenet/classify.hpp"
#include "hatenet/core.hpp"
#include "hatenet/graph.hpp"

namespace hatenet::config {

inline constexpr const char* kConfigEnv = "HATENET_CONFIG";

struct Seeds {
  std::uint64_t master = 42;
  std::uint64_t classify = 0;
  std::uint64_t homophily = 0;
  std::uint64_t contagion = 0;
};

struct RunConfig {
  // inputs
  std::string records;
  std::string labels;
  std::string edges;
  std::string nodes;
  std::string keywords = "builtin";
  TimeWindow window = TimeWindow::collection_default();
  std::string output = "out";
  std::size_t workers = 1;
  Seeds seeds;

  // classify
  std::size_t folds = 5;
  classify::Hyperparameters hyper;
  std::vector<classify::FeatureSet> feature_sets = {classify::FeatureSet::Hashtag,
                                                    classify::FeatureSet::Linguistic,
                                                    classify::FeatureSet::Combined};
  // timeline
  std::vector<Days> events = {hatenet::detail::days_from_civil(2020, 3, 16),
                              hatenet::detail::days_from_civil(2021, 3, 16)};
  std::size_t window_days = 7;

  // homophily
  std::size_t shuffle_replicates = 100;
  double swap_factor = 10.0;
  graph::ConnectivityOptions connectivity;
  bool preserve_covid = true;

  // contagion
  std::size_t cascade_replicates = 100;
  cascade::ExposureOptions exposure;
  std::size_t min_exposed = cascade::kDefaultMinExposed;
  std::optional<std::size_t> n_max;

  // Flattened "section.key" -> value, as resolved; echoed into manifests.
  std::map<std::string, std::string> resolved;
};

namespace detail {

inline const std::set<std::string>& path_keys() {
  static const std::set<std::string> k = {"input.records", "input.labels", "input.edges",
                                          "input.nodes", "input.keywords", "run.output"};
  return k;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    const auto r = std::stoull(v, &pos, 10);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw ValidationError("config " + key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(r)) throw std::invalid_argument("bad");
    return r;
  } catch (const std::exception&) {
    throw ValidationError("config " + key + ": expected a number, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  const auto s = ascii_lower(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ValidationError("config " + key + ": expected a boolean, got '" + v + "'");
}

inline Timestamp parse_time(const std::string& key, const std::string& v) {
  const auto t = parse_timestamp(v);
  if (!t) throw ValidationError("config " + key + ": bad timestamp '" + v + "'");
  return *t;
}

inline graph::Direction parse_dir(const std::string& key, const std::string& v) {
  const auto d = graph::parse_direction(v);
  if (!d) throw ValidationError("config " + key + ": direction must be out, in or union");
  return *d;
}

}  // namespace detail

// Reads a config file into flattened "section.key" entries. Relative path
// values are resolved against the file's directory.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config " + path + ": " + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
  }
  const auto base = std::filesystem::path(path).parent_path();
  std::map<std::string, std::string> out;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ValidationError("config " + path + ": key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const auto flat = section + "." + key;
      std::string value = std::string(trim(node.data()));
      if (detail::path_keys().count(flat) && !value.empty() && value != "builtin" &&
          std::filesystem::path(value).is_relative() && !base.empty())
        value = (base / value).lexically_normal().string();
      out[flat] = value;
    }
  }
  return out;
}

// Parses "section.key=value".
inline std::pair<std::string, std::string> parse_override(std::string_view s) {
  const auto eq = s.find('=');
  const auto key = trim(s.substr(0, eq));
  if (eq == std::string_view::npos || key.find('.') == std::string_view::npos)
    throw ValidationError("override must look like section.key=value: '" + std::string(s) + "'");
  return {std::string(key), std::string(trim(s.substr(eq + 1)))};
}

// Builds a RunConfig from flattened entries. Unknown keys are rejected.
inline RunConfig from_entries(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  std::optional<std::uint64_t> classify_seed, homophily_seed, contagion_seed;
  for (const auto& [k, v] : kv) {
    using namespace detail;
    if (k == "input.records") c.records = v;
    else if (k == "input.labels") c.labels = v;
    else if (k == "input.edges") c.edges = v;
    else if (k == "input.nodes") c.nodes = v;
    else if (k == "input.keywords") c.keywords = v.empty() ? "builtin" : v;
    else if (k == "window.start") c.window.start = parse_time(k, v);
    else if (k == "window.end") {
      c.window.end = parse_time(k, v);
      // A bare date means the whole day.
      if (v.size() == 10) c.window.end += std::chrono::seconds{86399};
    }
    else if (k == "run.seed") c.seeds.master = parse_u64(k, v);
    else if (k == "run.workers") c.workers = parse_u64(k, v);
    else if (k == "run.output") c.output = v;
    else if (k == "classify.folds") c.folds = parse_u64(k, v);
    else if (k == "classify.batch_size") c.hyper.batch_size = parse_u64(k, v);
    else if (k == "classify.epochs") c.hyper.epochs = parse_u64(k, v);
    else if (k == "classify.learning_rate") c.hyper.learning_rate = parse_double(k, v);
    else if (k == "classify.seed") classify_seed = parse_u64(k, v);
    else if (k == "classify.feature_sets") {
      c.feature_sets.clear();
      for (auto part : split(v, ',')) {
        if (trim(part).empty()) continue;
        const auto f = classify::parse_feature_set(part);
        if (!f) throw ValidationError("config " + k + ": unknown feature set '" + std::string(part) + "'");
        c.feature_sets.push_back(*f);
      }
    }
    else if (k == "timeline.events") {
      c.events.clear();
      for (auto part : split(v, ',')) {
        if (trim(part).empty()) continue;
        c.events.push_back(day_of(parse_time(k, std::string(trim(part)))));
      }
    }
    else if (k == "timeline.window_days") c.window_days = parse_u64(k, v);
    else if (k == "homophily.replicates") c.shuffle_replicates = parse_u64(k, v);
    else if (k == "homophily.swap_factor") c.swap_factor = parse_double(k, v);
    else if (k == "homophily.direction") c.connectivity.direction = parse_dir(k, v);
    else if (k == "homophily.mode") {
      const auto m = graph::parse_connectivity_mode(v);
      if (!m) throw ValidationError("config " + k + ": mode must be edge or ego");
      c.connectivity.mode = *m;
    }
    else if (k == "homophily.preserve_covid") c.preserve_covid = parse_bool(k, v);
    else if (k == "homophily.seed") homophily_seed = parse_u64(k, v);
    else if (k == "contagion.replicates") c.cascade_replicates = parse_u64(k, v);
    else if (k == "contagion.direction") c.exposure.direction = parse_dir(k, v);
    else if (k == "contagion.include_dual") c.exposure.include_dual = parse_bool(k, v);
    else if (k == "contagion.min_exposed") c.min_exposed = parse_u64(k, v);
    else if (k == "contagion.n_max") {
      if (v.empty() || ascii_lower(v) == "auto") c.n_max.reset();
      else c.n_max = parse_u64(k, v);
    }
    else if (k == "contagion.seed") contagion_seed = parse_u64(k, v);
    else throw ValidationError("config: unknown key '" + k + "'");
  }
  c.seeds.classify = classify_seed.value_or(derive_seed(c.seeds.master, 1));
  c.seeds.homophily = homophily_seed.value_or(derive_seed(c.seeds.master, 2));
  c.seeds.contagion = contagion_seed.value_or(derive_seed(c.seeds.master, 3));
  c.resolved = kv;
  return c;
}

// Config file (explicit path, else $HATENET_CONFIG, else none) overlaid with
// overrides in order.
inline RunConfig load_config(const std::optional<std::string>& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> kv;
  std::optional<std::string> file = path;
  if (!file) {
    if (const char* env = std::getenv(kConfigEnv); env && *env) file = env;
  }
  if (file) {
    if (!std::filesystem::is_regular_file(*file))
      throw ValidationError("config file not found: " + *file);
    kv = read_config_file(*file);
  }
  for (const auto& [k, v] : overrides) kv[k] = v;
  return from_entries(kv);
}

// Checks the invariants every command relies on; paths that are set must exist.
inline void validate(const RunConfig& c) {
  if (!(c.window.start < c.window.end)) throw ValidationError("window start must precede window end");
  if (c.shuffle_replicates < 2) throw ValidationError("homophily.replicates must be >= 2");
  if (c.cascade_replicates < 2) throw ValidationError("contagion.replicates must be >= 2");
  if (c.folds < 2) throw ValidationError("classify.folds must be >= 2");
  if (c.hyper.batch_size == 0) throw ValidationError("classify.batch_size must be positive");
  if (!(c.hyper.learning_rate > 0)) throw ValidationError("classify.learning_rate must be positive");
  if (!(c.swap_factor > 0)) throw ValidationError("homophily.swap_factor must be positive");
  if (c.window_days == 0) throw ValidationError("timeline.window_days must be positive");
  if (c.n_max && *c.n_max == 0) throw ValidationError("contagion.n_max must be >= 1");
  if (c.output.empty()) throw ValidationError("run.output must be set");
  const std::pair<const char*, const std::string*> paths[] = {
      {"input.records", &c.records}, {"input.labels", &c.labels}, {"input.edges", &c.edges},
      {"input.nodes", &c.nodes}};
  for (const auto& [name, p] : paths)
    if (!p->empty() && !std::filesystem::is_regular_file(*p))
      throw ValidationError(std::string(name) + ": file not found: " + *p);
  if (c.keywords != "builtin" && !std::filesystem::is_regular_file(c.keywords))
    throw ValidationError("input.keywords: file not found: " + c.keywords);
}

}  // namespace hatenet::config

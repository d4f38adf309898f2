#pragma once
// Directed follower graph, ego-network statistics, the degree- and
// covid-neighbor-preserving edge shuffle, and group connectivity against
// shuffled baselines.
//
// An edge u -> v means "u follows v". Out-neighbors are followees,
// in-neighbors are followers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hatenet/core.hpp"

namespace hatenet::graph {

using NodeId = std::uint32_t;

// Dense index <-> external user id.
class IdMap {
 public:
  NodeId intern(std::string_view id) {
    const auto it = index_.find(std::string(id));
    if (it != index_.end()) return it->second;
    const auto n = static_cast<NodeId>(ids_.size());
    ids_.emplace_back(id);
    index_.emplace(ids_.back(), n);
    return n;
  }
  std::optional<NodeId> find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& id(NodeId n) const { return ids_[n]; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> index_;
};

struct Edge {
  NodeId src;
  NodeId dst;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Direction : std::uint8_t { Out, In, Union };

inline std::optional<Direction> parse_direction(std::string_view s) {
  const auto v = ascii_lower(trim(s));
  if (v == "out" || v == "followees") return Direction::Out;
  if (v == "in" || v == "followers") return Direction::In;
  if (v == "union" || v == "both") return Direction::Union;
  return std::nullopt;
}

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Out: return "out";
    case Direction::In: return "in";
    case Direction::Union: return "union";
  }
  return "?";
}

// Immutable-topology graph in compressed sparse row form, both directions.
// Invariants: no self-loops, no duplicate edges, adjacency lists sorted.
class SocialGraph {
 public:
  SocialGraph() : ids_(std::make_shared<IdMap>()) {}

  // `edges` must be free of self-loops and duplicates (see build_edges()).
  SocialGraph(std::shared_ptr<const IdMap> ids, std::size_t node_count,
              const std::vector<Edge>& edges)
      : ids_(std::move(ids)),
        covid_(node_count, 0),
        category_(node_count, UserCategory::Uncategorized) {
    build_csr(node_count, edges, /*by_src=*/true, out_offsets_, out_targets_);
    build_csr(node_count, edges, /*by_src=*/false, in_offsets_, in_sources_);
  }

  std::size_t node_count() const { return covid_.size(); }
  std::size_t edge_count() const { return out_targets_.size(); }
  const IdMap& ids() const { return *ids_; }
  std::shared_ptr<const IdMap> shared_ids() const { return ids_; }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
  }
  std::span<const NodeId> in_neighbors(NodeId u) const {
    return {in_sources_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
  }
  std::size_t out_degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
  std::size_t in_degree(NodeId u) const { return in_offsets_[u + 1] - in_offsets_[u]; }

  bool has_edge(NodeId u, NodeId v) const {
    const auto n = out_neighbors(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  // Calls fn(v) once per distinct neighbor of u in the given direction.
  template <typename Fn>
  void for_each_neighbor(NodeId u, Direction dir, Fn&& fn) const {
    if (dir == Direction::Out) {
      for (auto v : out_neighbors(u)) fn(v);
    } else if (dir == Direction::In) {
      for (auto v : in_neighbors(u)) fn(v);
    } else {
      const auto a = out_neighbors(u);
      const auto b = in_neighbors(u);
      std::size_t i = 0, j = 0;
      while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
          fn(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
          fn(b[j++]);
        } else {
          fn(a[i]);
          ++i, ++j;
        }
      }
    }
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (auto v : out_neighbors(u)) out.push_back({u, v});
    return out;
  }

  bool covid_flag(NodeId u) const { return covid_[u] != 0; }
  UserCategory category(NodeId u) const { return category_[u]; }
  const std::vector<UserCategory>& categories() const { return category_; }

  void set_covid_flag(NodeId u, bool v) { covid_[u] = v ? 1 : 0; }
  void set_category(NodeId u, UserCategory c) { category_[u] = c; }

  // Copies node attributes from another graph over the same node set.
  void copy_attributes_from(const SocialGraph& other) {
    covid_ = other.covid_;
    category_ = other.category_;
  }

  // Number of covid-flagged out-neighbors of u.
  std::size_t covid_out_neighbors(NodeId u) const {
    std::size_t n = 0;
    for (auto v : out_neighbors(u)) n += covid_[v];
    return n;
  }

  bool same_topology(const SocialGraph& o) const {
    return out_offsets_ == o.out_offsets_ && out_targets_ == o.out_targets_;
  }

 private:
  static void build_csr(std::size_t n, const std::vector<Edge>& edges, bool by_src,
                        std::vector<std::size_t>& offsets, std::vector<NodeId>& targets) {
    offsets.assign(n + 1, 0);
    for (const auto& e : edges) ++offsets[(by_src ? e.src : e.dst) + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    targets.assign(edges.size(), 0);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& e : edges) targets[cursor[by_src ? e.src : e.dst]++] = by_src ? e.dst : e.src;
    for (std::size_t u = 0; u < n; ++u)
      std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[u]),
                targets.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]));
  }

  std::shared_ptr<const IdMap> ids_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::vector<std::uint8_t> covid_;
  std::vector<UserCategory> category_;
};

// ---------------------------------------------------------------------------
// Loading.

struct EdgeLoadReport {
  std::size_t lines = 0;  // non-blank lines
  std::size_t retained = 0;
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;
  std::size_t malformed = 0;
  std::vector<std::pair<std::size_t, std::string>> malformed_lines;
};

struct LoadedGraph {
  SocialGraph graph;
  EdgeLoadReport report;
};

// Drops self-loops and duplicates (counted in `report`); result is sorted.
inline std::vector<Edge> build_edges(const std::vector<Edge>& raw, EdgeLoadReport& report) {
  std::vector<Edge> sorted;
  sorted.reserve(raw.size());
  for (const auto& e : raw) {
    if (e.src == e.dst) {
      ++report.self_loops;
      continue;
    }
    sorted.push_back(e);
  }
  std::sort(sorted.begin(), sorted.end());
  const auto before = sorted.size();
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  report.duplicates += before - sorted.size();
  report.retained = sorted.size();
  return sorted;
}

// Edge list: one "src<TAB>dst" pair per line (any run of spaces/tabs also
// separates), src follows dst. Ids are interned into `ids`; the graph spans
// every id in `ids` after loading, so ids registered beforehand (e.g. from a
// node attribute file) become isolated nodes when they have no edges.
inline LoadedGraph load_edges_from_string(std::string_view content,
                                          const std::shared_ptr<IdMap>& ids) {
  LoadedGraph out;
  std::vector<Edge> raw;
  for_each_line(content, [&](std::size_t line_no, std::string_view line) {
    const auto t = trim(line);
    if (t.empty()) return;
    ++out.report.lines;
    std::size_t sep = t.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      ++out.report.malformed;
      out.report.malformed_lines.emplace_back(line_no, "expected two fields");
      return;
    }
    const auto a = t.substr(0, sep);
    const auto b = trim(t.substr(sep));
    if (b.empty() || b.find_first_of(" \t") != std::string_view::npos) {
      ++out.report.malformed;
      out.report.malformed_lines.emplace_back(line_no, "expected two fields");
      return;
    }
    raw.push_back({ids->intern(a), ids->intern(b)});
  });
  const auto edges = build_edges(raw, out.report);
  out.graph = SocialGraph(ids, ids->size(), edges);
  return out;
}

inline LoadedGraph load_edges(const std::string& path, const std::shared_ptr<IdMap>& ids) {
  return load_edges_from_string(read_file(path), ids);
}

struct NodeAttribute {
  std::string user_id;
  bool covid_flag = false;
  UserCategory category = UserCategory::Uncategorized;
};

// CSV "user_id,covid_flag,category" with optional header. covid_flag is
// 0/1/true/false.
inline std::vector<NodeAttribute> parse_node_attributes(std::string_view content,
                                                        std::string_view origin = "nodes") {
  std::vector<NodeAttribute> out;
  for_each_line(content, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    const auto cols = split(line, ',');
    auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
    if (cols.size() != 3) throw DataError(where() + "expected user_id,covid_flag,category");
    const auto flag = ascii_lower(trim(cols[1]));
    const auto cat = parse_category(cols[2]);
    if (line_no == 1 && flag == "covid_flag") return;  // header
    bool covid;
    if (flag == "1" || flag == "true")
      covid = true;
    else if (flag == "0" || flag == "false")
      covid = false;
    else
      throw DataError(where() + "bad covid_flag '" + flag + "'");
    if (!cat) throw DataError(where() + "bad category '" + std::string(trim(cols[2])) + "'");
    if (is_categorized(*cat) && !covid)
      throw DataError(where() + "categorized node must have covid_flag=1");
    out.push_back({std::string(trim(cols[0])), covid, *cat});
  });
  return out;
}

inline void register_ids(const std::vector<NodeAttribute>& attrs, IdMap& ids) {
  for (const auto& a : attrs) ids.intern(a.user_id);
}

inline void apply_node_attributes(SocialGraph& g, const std::vector<NodeAttribute>& attrs) {
  for (const auto& a : attrs) {
    const auto n = g.ids().find(a.user_id);
    if (!n || *n >= g.node_count()) continue;
    g.set_covid_flag(*n, a.covid_flag);
    g.set_category(*n, a.category);
  }
}

inline std::string node_attributes_csv(const std::vector<NodeAttribute>& attrs) {
  std::string out = "user_id,covid_flag,category\n";
  for (const auto& a : attrs)
    out += a.user_id + "," + (a.covid_flag ? "1" : "0") + "," + std::string(to_string(a.category)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Ego statistics.

struct DegreeSummary {
  std::size_t nodes = 0;
  double mean_followers = 0, median_followers = 0;
  double mean_followees = 0, median_followees = 0;
};

struct EgoStats {
  std::array<DegreeSummary, kNumCategorized> per_category{};
  // Raw degree samples per category, for group comparisons.
  std::array<std::vector<double>, kNumCategorized> followers, followees;

  const DegreeSummary& operator[](UserCategory c) const {
    return per_category[static_cast<std::size_t>(c)];
  }
  std::size_t categorized_nodes() const {
    std::size_t n = 0;
    for (const auto& s : per_category) n += s.nodes;
    return n;
  }
};

namespace detail {
inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}
inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}
}  // namespace detail

inline EgoStats ego_stats(const SocialGraph& g) {
  EgoStats s;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto c = g.category(u);
    if (!is_categorized(c)) continue;
    const auto k = static_cast<std::size_t>(c);
    s.followers[k].push_back(static_cast<double>(g.in_degree(u)));
    s.followees[k].push_back(static_cast<double>(g.out_degree(u)));
  }
  for (std::size_t k = 0; k < kNumCategorized; ++k) {
    auto& d = s.per_category[k];
    d.nodes = s.followers[k].size();
    d.mean_followers = detail::mean_of(s.followers[k]);
    d.median_followers = detail::median_of(s.followers[k]);
    d.mean_followees = detail::mean_of(s.followees[k]);
    d.median_followees = detail::median_of(s.followees[k]);
  }
  if (s.categorized_nodes() == 0) throw ValidationError("ego_stats: no categorized nodes");
  return s;
}

inline std::string ego_stats_csv(const EgoStats& s) {
  std::string out = "category,nodes,mean_followers,median_followers,mean_followees,median_followees\n";
  for (auto c : kCategorized) {
    const auto& d = s[c];
    out += std::string(to_string(c)) + "," + std::to_string(d.nodes) + "," +
           format_real(d.mean_followers) + "," + format_real(d.median_followers) + "," +
           format_real(d.mean_followees) + "," + format_real(d.median_followees) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degree-preserving shuffle.

struct ShuffleConfig {
  double swap_attempts_factor = 10.0;  // attempts = factor * |E|
  std::uint64_t seed = 0;
  bool preserve_covid_partition = true;
};

struct ShuffleResult {
  SocialGraph graph;
  bool degenerate = false;  // no class had two edges to swap; graph returned unchanged
  std::size_t attempts = 0;
  std::size_t accepted = 0;
};

namespace detail {

// Open-addressing set of packed edges with backward-shift deletion.
class EdgeSet {
 public:
  explicit EdgeSet(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
  }

  static std::uint64_t key(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  bool contains(std::uint64_t k) const {
    for (std::size_t i = home(k);; i = (i + 1) & mask_) {
      if (slots_[i] == k) return true;
      if (slots_[i] == kEmpty) return false;
    }
  }

  void insert(std::uint64_t k) {
    std::size_t i = home(k);
    while (slots_[i] != kEmpty) {
      if (slots_[i] == k) return;
      i = (i + 1) & mask_;
    }
    slots_[i] = k;
  }

  void erase(std::uint64_t k) {
    std::size_t i = home(k);
    while (slots_[i] != k) {
      if (slots_[i] == kEmpty) return;
      i = (i + 1) & mask_;
    }
    // Shift later members of the probe run back into the hole.
    std::size_t hole = i;
    for (std::size_t j = (hole + 1) & mask_; slots_[j] != kEmpty; j = (j + 1) & mask_) {
      const std::size_t h = home(slots_[j]);
      const bool movable = hole <= j ? (h <= hole || h > j) : (h <= hole && h > j);
      if (movable) {
        slots_[hole] = slots_[j];
        hole = j;
      }
    }
    slots_[hole] = kEmpty;
  }

 private:
  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();
  std::size_t home(std::uint64_t k) const { return splitmix64(k) & mask_; }

  std::vector<std::uint64_t> slots_;
  std::size_t mask_ = 0;
};

}  // namespace detail

// Directed double-edge swaps (a->b, c->d) => (a->d, c->b), restricted to pairs
// whose targets share a covid class when preserve_covid_partition is set.
// Swaps that would create a self-loop or a duplicate edge are rejected.
// Preserves every node's in-degree, out-degree and count of covid-flagged
// out-neighbors. Deterministic given the seed.
inline ShuffleResult degree_preserving_shuffle(const SocialGraph& g, const ShuffleConfig& cfg) {
  if (!(cfg.swap_attempts_factor >= 0) || !std::isfinite(cfg.swap_attempts_factor))
    throw ValidationError("swap_attempts_factor must be finite and >= 0");
  ShuffleResult out;
  const std::size_t m = g.edge_count();

  // Edges grouped by target class: [0, split) non-covid targets, [split, m) covid.
  std::vector<NodeId> src(m), dst(m);
  std::size_t split = 0;
  {
    std::size_t lo = 0;
    std::vector<Edge> covid_edges;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (auto v : g.out_neighbors(u)) {
        if (cfg.preserve_covid_partition && g.covid_flag(v)) {
          covid_edges.push_back({u, v});
        } else {
          src[lo] = u;
          dst[lo] = v;
          ++lo;
        }
      }
    }
    split = lo;
    for (const auto& e : covid_edges) {
      src[lo] = e.src;
      dst[lo] = e.dst;
      ++lo;
    }
  }
  const bool swappable = split >= 2 || m - split >= 2;
  const auto attempts = static_cast<std::size_t>(std::llround(cfg.swap_attempts_factor * static_cast<double>(m)));
  if (!swappable || attempts == 0) {
    out.graph = g;
    out.degenerate = !swappable && attempts > 0;
    return out;
  }

  detail::EdgeSet present(m);
  for (std::size_t i = 0; i < m; ++i) present.insert(detail::EdgeSet::key(src[i], dst[i]));

  Rng rng(cfg.seed);
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t i = rng.below(m);
    const std::size_t lo = i < split ? 0 : split;
    const std::size_t size = i < split ? split : m - split;
    if (size < 2) continue;
    const std::size_t j = lo + rng.below(size);
    const NodeId a = src[i], b = dst[i], c = src[j], d = dst[j];
    if (a == c || b == d || a == d || c == b) continue;
    const auto ad = detail::EdgeSet::key(a, d);
    const auto cb = detail::EdgeSet::key(c, b);
    if (present.contains(ad) || present.contains(cb)) continue;
    present.erase(detail::EdgeSet::key(a, b));
    present.erase(detail::EdgeSet::key(c, d));
    present.insert(ad);
    present.insert(cb);
    dst[i] = d;
    dst[j] = b;
    ++accepted;
  }

  std::vector<Edge> edges(m);
  for (std::size_t i = 0; i < m; ++i) edges[i] = {src[i], dst[i]};
  out.graph = SocialGraph(g.shared_ids(), g.node_count(), edges);
  out.graph.copy_attributes_from(g);
  out.attempts = attempts;
  out.accepted = accepted;
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity between categories.

enum class ConnectivityMode : std::uint8_t { EdgeWise, PerEgo };

inline std::optional<ConnectivityMode> parse_connectivity_mode(std::string_view s) {
  const auto v = ascii_lower(trim(s));
  if (v == "edge" || v == "edgewise" || v == "edge-wise") return ConnectivityMode::EdgeWise;
  if (v == "ego" || v == "per-ego" || v == "perego") return ConnectivityMode::PerEgo;
  return std::nullopt;
}

// P[A][B] over the categorized categories (hate, counterspeech, dual,
// neutral). Undefined cells (row with no categorized neighbors) are NaN.
struct CategoryMatrix {
  std::array<std::array<double, kNumCategorized>, kNumCategorized> value{};

  double& operator()(UserCategory a, UserCategory b) {
    return value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  double operator()(UserCategory a, UserCategory b) const {
    return value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  bool row_defined(UserCategory a) const {
    return !std::isnan(value[static_cast<std::size_t>(a)][0]);
  }
  static CategoryMatrix filled(double v) {
    CategoryMatrix m;
    for (auto& row : m.value) row.fill(v);
    return m;
  }
};

struct ConnectivityOptions {
  Direction direction = Direction::Out;
  ConnectivityMode mode = ConnectivityMode::EdgeWise;
};

// Edge-wise: P[A][B] = (A->B neighbor links) / (A->categorized links).
// Per-ego: mean over A-nodes with a categorized neighbor of their B share.
inline CategoryMatrix connectivity_probabilities(const SocialGraph& g,
                                                 const ConnectivityOptions& opt = {}) {
  constexpr auto K = kNumCategorized;
  std::array<std::array<double, K>, K> acc{};
  std::array<double, K> denom{};
  std::array<double, K> local{};
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto cu = g.category(u);
    if (!is_categorized(cu)) continue;
    const auto a = static_cast<std::size_t>(cu);
    local.fill(0.0);
    double total = 0;
    g.for_each_neighbor(u, opt.direction, [&](NodeId v) {
      const auto cv = g.category(v);
      if (!is_categorized(cv)) return;
      local[static_cast<std::size_t>(cv)] += 1;
      total += 1;
    });
    if (total == 0) continue;
    if (opt.mode == ConnectivityMode::EdgeWise) {
      for (std::size_t b = 0; b < K; ++b) acc[a][b] += local[b];
      denom[a] += total;
    } else {
      for (std::size_t b = 0; b < K; ++b) acc[a][b] += local[b] / total;
      denom[a] += 1;
    }
  }
  auto P = CategoryMatrix::filled(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t a = 0; a < K; ++a) {
    if (denom[a] == 0) continue;
    for (std::size_t b = 0; b < K; ++b) P.value[a][b] = acc[a][b] / denom[a];
  }
  return P;
}

struct HomophilyOptions {
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  double swap_attempts_factor = 10.0;
  bool preserve_covid_partition = true;
  ConnectivityOptions connectivity;
  std::size_t workers = 1;
};

struct ConnectivityReport {
  CategoryMatrix observed;
  CategoryMatrix baseline_mean;
  CategoryMatrix baseline_std;
  CategoryMatrix ratio;  // observed / baseline_mean where both defined and mean > 0
  std::size_t replicates = 0;
  bool degenerate = false;  // at least one replicate could not swap
};

inline ConnectivityReport homophily_report(const SocialGraph& g, const HomophilyOptions& opt) {
  if (opt.replicates < 2) throw ValidationError("homophily_report: replicates must be >= 2");
  constexpr auto K = kNumCategorized;
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  ConnectivityReport rep;
  rep.replicates = opt.replicates;
  rep.observed = connectivity_probabilities(g, opt.connectivity);

  struct Replicate {
    CategoryMatrix p;
    bool degenerate;
  };
  const auto reps = parallel_map(opt.replicates, opt.workers, [&](std::size_t r) {
    ShuffleConfig cfg{opt.swap_attempts_factor, derive_seed(opt.seed, r),
                      opt.preserve_covid_partition};
    auto shuffled = degree_preserving_shuffle(g, cfg);
    return Replicate{connectivity_probabilities(shuffled.graph, opt.connectivity),
                     shuffled.degenerate};
  });

  std::array<std::array<RunningStats, K>, K> acc{};
  for (const auto& r : reps) {
    rep.degenerate = rep.degenerate || r.degenerate;
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = 0; b < K; ++b)
        if (!std::isnan(r.p.value[a][b])) acc[a][b].add(r.p.value[a][b]);
  }
  rep.baseline_mean = CategoryMatrix::filled(nan);
  rep.baseline_std = CategoryMatrix::filled(nan);
  rep.ratio = CategoryMatrix::filled(nan);
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = 0; b < K; ++b) {
      const auto& s = acc[a][b];
      if (s.count() == 0) continue;
      rep.baseline_mean.value[a][b] = s.mean();
      rep.baseline_std.value[a][b] = s.stddev();
      const double obs = rep.observed.value[a][b];
      if (!std::isnan(obs) && s.mean() > 0) rep.ratio.value[a][b] = obs / s.mean();
    }
  }
  return rep;
}

inline std::string category_matrix_csv(const CategoryMatrix& m) {
  std::string out = "from\\to";
  for (auto c : kCategorized) out += "," + std::string(to_string(c));
  out += "\n";
  for (auto a : kCategorized) {
    out += to_string(a);
    for (auto b : kCategorized) out += "," + format_real(m(a, b));
    out += "\n";
  }
  return out;
}

}  // namespace hatenet::graph

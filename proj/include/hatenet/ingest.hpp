#pragma once
// Corpus ingestion: keyword sets, token-bounded keyword matching, record
// parsing, label attachment, deduplication and corpus statistics.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "hatenet/core.hpp"
#include "hatenet/text.hpp"
#include "json.hpp"

namespace hatenet::ingest {

enum class KeywordGroup : std::uint8_t { Covid, Hate, Counter, Custom };

struct Keyword {
  std::string text;                // canonical: case-folded, single spaces
  KeywordGroup group;
  bool hashtag;                    // "#..." entries match whole hashtag tokens only
  std::vector<std::string> words;  // word-token sequence for non-hashtag entries
};

// Ordered, case-folded, deduplicated keyword collection. Keyword order is the
// feature order of the hashtag feature vector.
class KeywordSet {
 public:
  KeywordSet() = default;

  // Adds an entry; returns false when its canonical form is already present
  // or it tokenizes to nothing.
  bool add(std::string_view raw, KeywordGroup group = KeywordGroup::Custom) {
    auto canonical = canonicalize(raw);
    if (canonical.empty() || index_.count(canonical)) return false;
    Keyword kw{canonical, group, canonical.front() == '#', {}};
    if (kw.hashtag) {
      if (canonical.size() < 2) return false;
      hashtag_index_.emplace(canonical, entries_.size());
    } else {
      for (const auto& t : text::tokenize(canonical))
        if (t.kind == text::TokenKind::Word) kw.words.push_back(t.folded);
      if (kw.words.empty()) return false;
      phrase_index_[kw.words.front()].push_back(entries_.size());
    }
    index_.emplace(canonical, entries_.size());
    entries_.push_back(std::move(kw));
    return true;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Keyword& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Keyword>& entries() const { return entries_; }
  bool contains(std::string_view raw) const { return index_.count(canonicalize(raw)) > 0; }
  std::optional<std::size_t> index_of(std::string_view raw) const {
    const auto it = index_.find(canonicalize(raw));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Occurrence count of every entry in the token stream, in entry order.
  std::vector<std::size_t> count(const std::vector<text::Token>& tokens) const {
    std::vector<std::size_t> counts(entries_.size(), 0);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const auto& tok = tokens[t];
      if (tok.kind == text::TokenKind::Hashtag) {
        const auto it = hashtag_index_.find(tok.folded);
        if (it != hashtag_index_.end()) ++counts[it->second];
      } else if (tok.kind == text::TokenKind::Word) {
        const auto it = phrase_index_.find(tok.folded);
        if (it == phrase_index_.end()) continue;
        for (const auto k : it->second) {
          const auto& words = entries_[k].words;
          if (t + words.size() > tokens.size()) continue;
          bool hit = true;
          for (std::size_t w = 1; w < words.size() && hit; ++w) {
            const auto& next = tokens[t + w];
            hit = next.kind == text::TokenKind::Word && next.folded == words[w];
          }
          if (hit) ++counts[k];
        }
      }
    }
    return counts;
  }

  static std::string canonicalize(std::string_view raw) {
    const auto folded = text::fold_case(trim(raw));
    std::string out;
    bool pending_space = false;
    for (char c : folded) {
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
    return out;
  }

 private:
  std::vector<Keyword> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> hashtag_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> phrase_index_;
};

// The 42-entry collection list: 5 COVID-19 terms, 29 hate terms, 8
// counterspeech hashtags.
inline KeywordSet builtin_keywords() {
  static constexpr std::string_view kCovid[] = {"coronavirus", "covid 19", "covid-19", "covid19",
                                                "corona virus"};
  static constexpr std::string_view kHate[] = {
      "#CCPVirus", "#ChinaDidThis", "#ChinaLiedPeopleDied", "#ChinaVirus", "#ChineseVirus",
      "chinese virus", "#ChineseBioterrorism", "#FuckChina", "#KungFlu", "#MakeChinaPay",
      "#wuhanflu", "#wuhanvirus", "wuhan virus", "chink", "chinky", "chonky", "churka", "cina",
      "cokin", "communistvirus", "coolie", "dink", "niakou\xc3\xa9", "pastel de flango", "slant",
      "slant eye", "slopehead", "ting tong", "yokel"};
  static constexpr std::string_view kCounter[] = {
      "#IAmNotAVirus",  "#WashTheHate",   "#RacismIsAVirus", "#IAmNotCovid19",
      "#BeCool2Asians", "#StopAAPIHate", "#ActToChange",    "#HateIsAVirus"};
  KeywordSet set;
  for (auto k : kCovid) set.add(k, KeywordGroup::Covid);
  for (auto k : kHate) set.add(k, KeywordGroup::Hate);
  for (auto k : kCounter) set.add(k, KeywordGroup::Counter);
  return set;
}

inline constexpr std::string_view kBuiltinKeywordsToken = "builtin";

// Loads a keyword set from `source`: the token "builtin", a JSON array of
// strings, a JSON object {"covid": [...], "hate": [...], "counter": [...]},
// or a plain file with one entry per line.
inline KeywordSet load_keywords(const std::string& source) {
  if (source == kBuiltinKeywordsToken) return builtin_keywords();
  const std::string content = read_file(source);
  KeywordSet set;
  const auto parsed = nlohmann::json::parse(content, nullptr, false);
  auto add_array = [&](const nlohmann::json& arr, KeywordGroup g) {
    for (const auto& v : arr) {
      if (!v.is_string()) throw ValidationError("keyword entries must be strings: " + source);
      set.add(v.get<std::string>(), g);
    }
  };
  if (!parsed.is_discarded() && parsed.is_array()) {
    add_array(parsed, KeywordGroup::Custom);
  } else if (!parsed.is_discarded() && parsed.is_object()) {
    const std::pair<const char*, KeywordGroup> groups[] = {{"covid", KeywordGroup::Covid},
                                                           {"hate", KeywordGroup::Hate},
                                                           {"counter", KeywordGroup::Counter},
                                                           {"counterspeech", KeywordGroup::Counter}};
    for (const auto& [name, group] : groups)
      if (parsed.contains(name)) add_array(parsed.at(name), group);
  } else {
    for_each_line(content, [&](std::size_t, std::string_view line) {
      if (!trim(line).empty()) set.add(line);
    });
  }
  if (set.empty()) throw ValidationError("empty keyword set: " + source);
  return set;
}

// Every entry occurring in `text`, in keyword-set order.
inline std::vector<std::string> match_keywords(std::string_view text, const KeywordSet& kw) {
  const auto counts = kw.count(text::tokenize(text));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) out.push_back(kw[i].text);
  return out;
}

// ---------------------------------------------------------------------------
// Records.

struct RawTweet {
  std::string tweet_id;
  std::string user_id;
  Timestamp timestamp;
  std::string text;
};

struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  Timestamp timestamp;
  std::string text;
  std::optional<Label> label;
  std::vector<std::string> matched_keywords;
  std::vector<std::string> hashtags;
  std::size_t urls = 0;
  std::size_t mentions = 0;
};

using LabelMap = std::unordered_map<std::string, Label>;

namespace detail {

inline std::optional<std::string> json_scalar_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  return std::nullopt;
}

}  // namespace detail

struct ParsedLine {
  RawTweet tweet;
  std::optional<Label> label;  // present when the line carries a "label" field
};

// Parses one newline-delimited record. Returns an error message on failure.
inline std::variant<ParsedLine, std::string> parse_record_line(std::string_view line) {
  const auto doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::string("not a JSON object");
  ParsedLine out;
  auto field = [&](const char* name) -> std::optional<std::string> {
    const auto it = doc.find(name);
    if (it == doc.end()) return std::nullopt;
    return detail::json_scalar_string(*it);
  };
  auto id = field("id");
  if (!id || id->empty()) return std::string("missing or empty id");
  auto user = field("user_id");
  if (!user || user->empty()) return std::string("missing or empty user_id");
  auto created = field("created_at");
  if (!created) return std::string("missing created_at");
  const auto ts = parse_timestamp(*created);
  if (!ts) return std::string("unparseable created_at: " + *created);
  const auto text_it = doc.find("text");
  if (text_it == doc.end() || !text_it->is_string()) return std::string("missing text");
  out.tweet = {std::move(*id), std::move(*user), *ts, text_it->get<std::string>()};
  if (const auto it = doc.find("label"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) return std::string("label must be a string");
    const auto label = parse_label(it->get<std::string>());
    if (!label) return std::string("unknown label: " + it->get<std::string>());
    out.label = label;
  }
  return out;
}

// Fills the derived fields (keywords, hashtags, url/mention counts).
inline TweetRecord annotate(RawTweet raw, const KeywordSet& kw, std::optional<Label> label) {
  TweetRecord r;
  const auto tokens = text::tokenize(raw.text);
  const auto counts = kw.count(tokens);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) r.matched_keywords.push_back(kw[i].text);
  r.hashtags = text::hashtags(tokens);
  r.urls = text::count_kind(tokens, text::TokenKind::Url);
  r.mentions = text::count_kind(tokens, text::TokenKind::Mention);
  r.tweet_id = std::move(raw.tweet_id);
  r.user_id = std::move(raw.user_id);
  r.timestamp = raw.timestamp;
  r.text = std::move(raw.text);
  r.label = label;
  return r;
}

// Label file: CSV "tweet_id,label" with an optional header row.
inline LabelMap load_labels(const std::string& path) {
  LabelMap labels;
  const auto content = read_file(path);
  for_each_line(content, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    const auto cols = split(line, ',');
    if (cols.size() != 2) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected tweet_id,label");
    }
    const auto id = std::string(trim(cols[0]));
    const auto label = parse_label(cols[1]);
    if (!label) {
      if (line_no == 1 && ascii_lower(trim(cols[1])) == "label") return;  // header
      throw DataError(path + ":" + std::to_string(line_no) + ": unknown label '" +
                      std::string(trim(cols[1])) + "'");
    }
    labels.insert_or_assign(id, *label);
  });
  return labels;
}

// ---------------------------------------------------------------------------
// Corpus statistics.

struct LabelCounts {
  std::array<std::size_t, kNumLabels> by_label{};
  std::size_t unlabeled = 0;

  std::size_t total() const {
    std::size_t t = unlabeled;
    for (auto c : by_label) t += c;
    return t;
  }
  void add(std::optional<Label> l) {
    if (l)
      ++by_label[static_cast<std::size_t>(*l)];
    else
      ++unlabeled;
  }
  std::size_t operator[](Label l) const { return by_label[static_cast<std::size_t>(l)]; }
};

struct CorpusStats {
  std::size_t total = 0;  // retained records
  LabelCounts per_label;
  std::map<std::string, std::size_t> per_user;
  std::map<Days, LabelCounts> per_day_per_label;

  void add(const TweetRecord& r) {
    ++total;
    per_label.add(r.label);
    ++per_user[r.user_id];
    per_day_per_label[day_of(r.timestamp)].add(r.label);
  }
};

struct FilterReport {
  std::size_t input_lines = 0;  // non-blank lines seen
  std::size_t retained = 0;
  std::size_t dropped_dup = 0;
  std::size_t dropped_nomatch = 0;
  std::size_t dropped_window = 0;
  std::size_t malformed = 0;
  std::vector<std::pair<std::size_t, std::string>> malformed_lines;  // (line number, reason)
  CorpusStats stats;
};

struct FilterOptions {
  std::optional<TimeWindow> window = TimeWindow::collection_default();
  // Labels from a record's own "label" field are kept unless the label map
  // has an entry for the tweet.
  bool keep_inline_labels = true;
};

struct FilterResult {
  std::vector<TweetRecord> records;
  FilterReport report;
};

// Single pass over newline-delimited records. Retains the first well-formed
// occurrence of each tweet id, drops records outside the window and records
// without a keyword match.
inline FilterResult filter_corpus(std::string_view input, const KeywordSet& kw,
                                  const LabelMap* labels = nullptr,
                                  const FilterOptions& options = {}) {
  FilterResult out;
  auto& rep = out.report;
  std::unordered_set<std::string> seen;
  for_each_line(input, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    ++rep.input_lines;
    auto parsed = parse_record_line(line);
    if (auto* err = std::get_if<std::string>(&parsed)) {
      ++rep.malformed;
      rep.malformed_lines.emplace_back(line_no, std::move(*err));
      return;
    }
    auto& p = std::get<ParsedLine>(parsed);
    if (!seen.insert(p.tweet.tweet_id).second) {
      ++rep.dropped_dup;
      return;
    }
    if (options.window && !options.window->contains(p.tweet.timestamp)) {
      ++rep.dropped_window;
      return;
    }
    std::optional<Label> label;
    if (options.keep_inline_labels) label = p.label;
    if (labels) {
      const auto it = labels->find(p.tweet.tweet_id);
      if (it != labels->end()) label = it->second;
    }
    auto rec = annotate(std::move(p.tweet), kw, label);
    if (rec.matched_keywords.empty()) {
      ++rep.dropped_nomatch;
      return;
    }
    rep.stats.add(rec);
    out.records.push_back(std::move(rec));
  });
  rep.retained = out.records.size();
  return out;
}

inline FilterResult filter_corpus_file(const std::string& path, const KeywordSet& kw,
                                       const LabelMap* labels = nullptr,
                                       const FilterOptions& options = {}) {
  return filter_corpus(read_file(path), kw, labels, options);
}

// ---------------------------------------------------------------------------
// Serialization.

inline std::string to_record_line(const TweetRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.tweet_id;
  j["user_id"] = r.user_id;
  j["created_at"] = format_timestamp(r.timestamp);
  j["text"] = r.text;
  if (r.label)
    j["label"] = std::string(to_string(*r.label));
  else
    j["label"] = nullptr;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline std::string write_records(const std::vector<TweetRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_record_line(r);
    out += '\n';
  }
  return out;
}

// Reads records written by write_records (or any record file). No keyword
// filtering; malformed lines are a data error.
inline std::vector<TweetRecord> read_records(std::string_view content, const KeywordSet& kw,
                                             const std::string& origin = "records") {
  std::vector<TweetRecord> out;
  for_each_line(content, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    auto parsed = parse_record_line(line);
    if (auto* err = std::get_if<std::string>(&parsed))
      throw DataError(origin + ":" + std::to_string(line_no) + ": " + *err);
    auto& p = std::get<ParsedLine>(parsed);
    out.push_back(annotate(std::move(p.tweet), kw, p.label));
  });
  return out;
}

inline std::string corpus_stats_csv(const FilterReport& rep) {
  std::string out = "metric,value\n";
  auto row = [&](std::string_view k, std::size_t v) {
    out += k;
    out += ',';
    out += std::to_string(v);
    out += '\n';
  };
  row("input_lines", rep.input_lines);
  row("retained", rep.retained);
  row("dropped_dup", rep.dropped_dup);
  row("dropped_nomatch", rep.dropped_nomatch);
  row("dropped_window", rep.dropped_window);
  row("malformed", rep.malformed);
  row("users", rep.stats.per_user.size());
  for (auto l : kAllLabels) row(std::string("label_") + std::string(to_string(l)), rep.stats.per_label[l]);
  row("label_unlabeled", rep.stats.per_label.unlabeled);
  return out;
}

inline std::string corpus_daily_csv(const CorpusStats& stats) {
  std::string out = "day,hate,counterspeech,neutral,unlabeled,total\n";
  for (const auto& [day, c] : stats.per_day_per_label) {
    out += format_day(day);
    for (auto l : kAllLabels) out += ',' + std::to_string(c[l]);
    out += ',' + std::to_string(c.unlabeled) + ',' + std::to_string(c.total()) + '\n';
  }
  return out;
}

}  // namespace hatenet::ingest

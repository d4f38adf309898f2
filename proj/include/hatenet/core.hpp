#pragma once
// Shared vocabulary: labels, categories, time handling, errors, seeded RNG,
// content digests and a small ordered worker pool.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hatenet {

// ---------------------------------------------------------------------------
// Errors. The kind maps onto CLI exit codes (1 validation, 2 data, 3 internal).

enum class ErrorKind { Validation = 1, Data = 2, Internal = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

// ---------------------------------------------------------------------------
// Tweet labels and user categories.

enum class Label : std::uint8_t { Hate = 0, Counterspeech = 1, Neutral = 2 };
inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {Label::Hate, Label::Counterspeech,
                                                             Label::Neutral};

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::Hate: return "hate";
    case Label::Counterspeech: return "counterspeech";
    case Label::Neutral: return "neutral";
  }
  return "?";
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                        s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

inline std::optional<Label> parse_label(std::string_view s) {
  const auto v = ascii_lower(trim(s));
  if (v == "hate") return Label::Hate;
  if (v == "counterspeech" || v == "counter") return Label::Counterspeech;
  if (v == "neutral") return Label::Neutral;
  return std::nullopt;
}

enum class UserCategory : std::uint8_t {
  Hate = 0,
  Counterspeech = 1,
  Dual = 2,
  Neutral = 3,
  Uncategorized = 4
};
inline constexpr std::size_t kNumCategorized = 4;  // every category except Uncategorized
inline constexpr std::array<UserCategory, kNumCategorized> kCategorized = {
    UserCategory::Hate, UserCategory::Counterspeech, UserCategory::Dual, UserCategory::Neutral};

inline std::string_view to_string(UserCategory c) {
  switch (c) {
    case UserCategory::Hate: return "hate";
    case UserCategory::Counterspeech: return "counterspeech";
    case UserCategory::Dual: return "dual";
    case UserCategory::Neutral: return "neutral";
    case UserCategory::Uncategorized: return "uncategorized";
  }
  return "?";
}

inline std::optional<UserCategory> parse_category(std::string_view s) {
  const auto v = ascii_lower(trim(s));
  if (v == "hate") return UserCategory::Hate;
  if (v == "counterspeech" || v == "counter") return UserCategory::Counterspeech;
  if (v == "dual") return UserCategory::Dual;
  if (v == "neutral") return UserCategory::Neutral;
  if (v == "uncategorized" || v.empty()) return UserCategory::Uncategorized;
  return std::nullopt;
}

inline bool is_categorized(UserCategory c) { return c != UserCategory::Uncategorized; }

// ---------------------------------------------------------------------------
// Time. Instants are UTC with second resolution.

using Timestamp = std::chrono::sys_seconds;
using Days = std::int64_t;  // days since 1970-01-01

namespace detail {

// Civil calendar conversions (proleptic Gregorian), after H. Hinnant's algorithms.
constexpr Days days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr Civil civil_from_days(Days z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

inline bool parse_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
  }
  out = v;
  return true;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

}  // namespace detail

inline Days day_of(Timestamp t) {
  const auto s = t.time_since_epoch().count();
  return s >= 0 ? s / 86400 : -((-s + 86399) / 86400);
}

inline Timestamp start_of_day(Days d) { return Timestamp{std::chrono::seconds{d * 86400}}; }

inline Timestamp from_epoch(std::int64_t seconds) {
  return Timestamp{std::chrono::seconds{seconds}};
}

inline std::int64_t epoch_seconds(Timestamp t) { return t.time_since_epoch().count(); }

// Accepts epoch seconds ("1584000000") or ISO-8601: "YYYY-MM-DD",
// "YYYY-MM-DD[T ]HH:MM[:SS[.frac]][Z|+HH:MM|-HH:MM|+HHMM]". Result is UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view raw) {
  const auto s = trim(raw);
  if (s.empty()) return std::nullopt;
  const bool all_digits =
      std::all_of(s.begin() + (s.front() == '-' ? 1 : 0), s.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      s.size() > (s.front() == '-' ? 1u : 0u);
  if (all_digits) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return from_epoch(v);
  }
  unsigned y = 0, mo = 0, d = 0;
  if (s.size() < 10 || !detail::parse_uint(s, 0, 4, y) || s[4] != '-' ||
      !detail::parse_uint(s, 5, 2, mo) || s[7] != '-' || !detail::parse_uint(s, 8, 2, d))
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > detail::days_in_month(y, mo)) return std::nullopt;
  std::int64_t secs = detail::days_from_civil(y, mo, d) * 86400;
  std::size_t pos = 10;
  if (pos == s.size()) return from_epoch(secs);
  if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
  ++pos;
  unsigned hh = 0, mm = 0, ss = 0;
  if (!detail::parse_uint(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
      !detail::parse_uint(s, pos + 3, 2, mm))
    return std::nullopt;
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!detail::parse_uint(s, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      const std::size_t frac_start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == frac_start) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  secs += hh * 3600 + mm * 60 + ss;
  if (pos == s.size()) return from_epoch(secs);
  if (s[pos] == 'Z' || s[pos] == 'z') return pos + 1 == s.size() ? std::optional{from_epoch(secs)}
                                                                  : std::nullopt;
  if (s[pos] != '+' && s[pos] != '-') return std::nullopt;
  const int sign = s[pos] == '+' ? 1 : -1;
  unsigned oh = 0, om = 0;
  if (!detail::parse_uint(s, pos + 1, 2, oh)) return std::nullopt;
  std::size_t p = pos + 3;
  if (p < s.size() && s[p] == ':') ++p;
  if (p < s.size()) {
    if (!detail::parse_uint(s, p, 2, om)) return std::nullopt;
    p += 2;
  }
  if (p != s.size() || oh > 23 || om > 59) return std::nullopt;
  secs -= sign * static_cast<std::int64_t>(oh * 3600 + om * 60);
  return from_epoch(secs);
}

inline std::string format_day(Days d) {
  const auto c = detail::civil_from_days(d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(c.year), c.month,
                c.day);
  return buf;
}

inline std::string format_timestamp(Timestamp t) {
  const auto secs = epoch_seconds(t);
  const Days d = day_of(t);
  const auto rem = secs - d * 86400;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lldZ", format_day(d).c_str(),
                static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

struct TimeWindow {
  Timestamp start;  // inclusive
  Timestamp end;    // inclusive

  bool contains(Timestamp t) const { return t >= start && t <= end; }
  Days first_day() const { return day_of(start); }
  Days last_day() const { return day_of(end); }

  // Jan 15, 2020 through Mar 26, 2021 (inclusive of the whole last day).
  static TimeWindow collection_default() {
    return {start_of_day(detail::days_from_civil(2020, 1, 15)),
            start_of_day(detail::days_from_civil(2021, 3, 26)) + std::chrono::seconds{86399}};
  }
};

// ---------------------------------------------------------------------------
// Deterministic randomness. mt19937_64 has a standardized output sequence;
// bounded draws use rejection so results do not depend on the standard
// library's distribution implementations.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` under `master`; distinct indices give unrelated streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform real in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Running mean / sample standard deviation (Welford). Adding k copies of x
// leaves mean() == x exactly.

class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double stddev() const { return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// ---------------------------------------------------------------------------
// Ordered parallel map: fn(i) for i in [0, n) on up to `workers` threads.
// Results land at their index so output never depends on scheduling.

inline std::size_t default_workers() {
  const auto hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

template <typename Fn>
auto parallel_map(std::size_t n, std::size_t workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < n; i = next++) slots[i].emplace(fn(i));
        } catch (...) {
          errors[w] = std::current_exception();
          next = n;
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Files, digests, numeric formatting.

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path);
}

// FNV-1a 64-bit, rendered as 16 hex digits.
inline std::string content_digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Shortest text that round-trips the double.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// Iterates the lines of `content`, passing (1-based line number, line without '\r').
template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    start = end + 1;
  }
}

}  // namespace hatenet

#pragma once
// Bundled word lists: a small valence lexicon (integer scores in [-3, 3]),
// pronoun classes, profanity and negation terms. All entries are lowercase
// and matched against case-folded word tokens.

#include <array>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace hatenet::lexicon {

struct ValenceEntry {
  std::string_view word;
  int valence;
};

inline constexpr ValenceEntry kValence[] = {
    // positive
    {"good", 2}, {"great", 3}, {"love", 3}, {"loved", 3}, {"kind", 2}, {"kindness", 2},
    {"support", 2}, {"supporting", 2}, {"solidarity", 2}, {"together", 1}, {"hope", 2},
    {"hopeful", 2}, {"thank", 2}, {"thanks", 2}, {"grateful", 3}, {"respect", 2},
    {"safe", 1}, {"strong", 2}, {"stronger", 2}, {"peace", 2}, {"happy", 3},
    {"helpful", 2}, {"help", 1}, {"care", 2}, {"caring", 2}, {"welcome", 2}, {"friend", 2},
    {"friends", 2}, {"beautiful", 3}, {"brave", 2}, {"heal", 2}, {"healthy", 2},
    {"protect", 1}, {"unity", 2}, {"united", 2}, {"stand", 1}, {"best", 3}, {"nice", 2},
    {"wonderful", 3}, {"amazing", 3}, {"proud", 2}, {"fair", 1}, {"equal", 1},
    {"compassion", 2}, {"empathy", 2}, {"inclusive", 2}, {"recover", 1}, {"recovered", 2},
    {"better", 2}, {"positive", 2}, {"calm", 1}, {"smile", 2}, {"joy", 3}, {"trust", 1},
    // negative
    {"bad", -2}, {"hate", -3}, {"hateful", -3}, {"hatred", -3}, {"racist", -3},
    {"racism", -3}, {"blame", -2}, {"blamed", -2}, {"fault", -2}, {"disgusting", -3},
    {"dirty", -2}, {"evil", -3}, {"liar", -3}, {"lied", -2}, {"lies", -2}, {"lie", -2},
    {"kill", -3}, {"killed", -3}, {"death", -2}, {"died", -2}, {"dead", -3}, {"die", -3},
    {"fear", -2}, {"scared", -2}, {"angry", -3}, {"anger", -3}, {"attack", -2},
    {"attacked", -2}, {"violence", -3}, {"threat", -2}, {"sick", -2}, {"disease", -1},
    {"infected", -2}, {"crisis", -2}, {"panic", -2}, {"stupid", -3}, {"idiot", -3},
    {"ugly", -3}, {"terrible", -3}, {"horrible", -3}, {"awful", -3}, {"worst", -3},
    {"worse", -2}, {"shame", -2}, {"ban", -1}, {"pay", -1}, {"punish", -2}, {"enemy", -2},
    {"poison", -3}, {"toxic", -2}, {"weapon", -2}, {"bioweapon", -3}, {"cover", -1},
    {"danger", -2}, {"dangerous", -2}, {"sad", -2}, {"wrong", -2}, {"unacceptable", -2},
};

inline int valence(std::string_view folded_word) {
  static const std::unordered_map<std::string_view, int> table = [] {
    std::unordered_map<std::string_view, int> m;
    for (const auto& e : kValence) m.emplace(e.word, e.valence);
    return m;
  }();
  const auto it = table.find(folded_word);
  return it == table.end() ? 0 : it->second;
}

inline bool in_valence_lexicon(std::string_view folded_word) {
  return valence(folded_word) != 0;
}

// Mean lexicon valence over the words that hit the lexicon, rescaled from
// [-3, 3] to [0, 1]. No hits gives 0.5.
template <typename WordRange>
double sentiment_of_words(const WordRange& words) {
  long sum = 0;
  long hits = 0;
  for (const auto& w : words) {
    const int v = valence(w);
    if (v != 0) {
      sum += v;
      ++hits;
    }
  }
  if (hits == 0) return 0.5;
  return (static_cast<double>(sum) / static_cast<double>(hits) / 3.0 + 1.0) / 2.0;
}

enum class Pronoun { None, FirstSingular, FirstPlural, Second, ThirdSingular, ThirdPlural };

inline Pronoun pronoun_class(std::string_view w) {
  static const std::unordered_map<std::string_view, Pronoun> table = {
      {"i", Pronoun::FirstSingular},      {"me", Pronoun::FirstSingular},
      {"my", Pronoun::FirstSingular},     {"mine", Pronoun::FirstSingular},
      {"myself", Pronoun::FirstSingular}, {"i'm", Pronoun::FirstSingular},
      {"i've", Pronoun::FirstSingular},   {"i'll", Pronoun::FirstSingular},
      {"i'd", Pronoun::FirstSingular},    {"we", Pronoun::FirstPlural},
      {"us", Pronoun::FirstPlural},       {"our", Pronoun::FirstPlural},
      {"ours", Pronoun::FirstPlural},     {"ourselves", Pronoun::FirstPlural},
      {"we're", Pronoun::FirstPlural},    {"we've", Pronoun::FirstPlural},
      {"you", Pronoun::Second},           {"your", Pronoun::Second},
      {"yours", Pronoun::Second},         {"yourself", Pronoun::Second},
      {"yourselves", Pronoun::Second},    {"u", Pronoun::Second},
      {"ur", Pronoun::Second},            {"you're", Pronoun::Second},
      {"he", Pronoun::ThirdSingular},     {"him", Pronoun::ThirdSingular},
      {"his", Pronoun::ThirdSingular},    {"himself", Pronoun::ThirdSingular},
      {"she", Pronoun::ThirdSingular},    {"her", Pronoun::ThirdSingular},
      {"hers", Pronoun::ThirdSingular},   {"herself", Pronoun::ThirdSingular},
      {"it", Pronoun::ThirdSingular},     {"its", Pronoun::ThirdSingular},
      {"they", Pronoun::ThirdPlural},     {"them", Pronoun::ThirdPlural},
      {"their", Pronoun::ThirdPlural},    {"theirs", Pronoun::ThirdPlural},
      {"themselves", Pronoun::ThirdPlural}, {"they're", Pronoun::ThirdPlural},
  };
  const auto it = table.find(w);
  return it == table.end() ? Pronoun::None : it->second;
}

inline bool is_profanity(std::string_view w) {
  static const std::unordered_set<std::string_view> table = {
      "fuck", "fucking", "fucked", "fucker", "shit", "shitty", "damn", "damned", "hell",
      "ass", "asshole", "bitch", "bastard", "crap", "piss", "pissed", "dick", "wtf", "stfu",
      "bullshit"};
  return table.count(w) > 0;
}

inline bool is_negation(std::string_view w) {
  static const std::unordered_set<std::string_view> table = {
      "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "cannot",
      "can't", "don't", "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't", "won't",
      "wouldn't", "shouldn't", "couldn't"};
  return table.count(w) > 0;
}

}  // namespace hatenet::lexicon

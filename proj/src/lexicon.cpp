#include "sublabel/lexicon.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sublabel/error.hpp"
#include "text_util.hpp"

namespace sublabel {

namespace {

constexpr std::size_t kMaxVariantWords = 4;

std::string join_span(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::vector<Match> greedy_matches(std::span<const std::string> words,
                                  const PatternSet& set) {
  std::vector<Match> out;
  if (set.empty()) return out;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t longest = std::min(set.max_words(), words.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      long entry = set.find(words.subspan(i, len));
      if (entry >= 0) {
        out.push_back(Match{i, i + len - 1, static_cast<std::size_t>(entry)});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

}  // namespace

PatternEntry expand_template(std::string_view surface) {
  // Each alternative list is the set of strings a segment can become.
  std::vector<std::vector<std::string>> segments;
  std::string literal;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    char c = surface[i];
    if (c == ')') throw ConfigError("unbalanced ')' in template '" + std::string(surface) + "'");
    if (c != '(') {
      literal.push_back(c);
      continue;
    }
    std::size_t close = surface.find(')', i);
    if (close == std::string_view::npos)
      throw ConfigError("unbalanced '(' in template '" + std::string(surface) + "'");
    std::string_view inner = surface.substr(i + 1, close - i - 1);
    if (inner.find('(') != std::string_view::npos)
      throw ConfigError("nested '(' in template '" + std::string(surface) + "'");
    segments.push_back({literal});
    literal.clear();
    if (inner == "-")
      segments.push_back({"-", " "});
    else
      segments.push_back({"", std::string(inner)});
    i = close;
  }
  segments.push_back({literal});

  std::vector<std::string> strings{""};
  for (const auto& alternatives : segments) {
    std::vector<std::string> next;
    for (const auto& prefix : strings)
      for (const auto& alt : alternatives) next.push_back(prefix + alt);
    strings = std::move(next);
  }

  PatternEntry entry{std::string(surface), {}};
  for (const std::string& s : strings) {
    auto words = detail::split_whitespace(detail::to_lower(s));
    if (words.empty() || words.size() > kMaxVariantWords)
      throw ConfigError("template '" + std::string(surface) + "' expands to '" + s +
                        "', which is not 1-4 words");
    if (std::find(entry.variants.begin(), entry.variants.end(), words) == entry.variants.end())
      entry.variants.push_back(std::move(words));
  }
  return entry;
}

PatternSet::PatternSet(std::string name, std::vector<PatternEntry> entries)
    : name_(std::move(name)), entries_(std::move(entries)) {
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    for (const auto& v : entries_[e].variants) {
      lookup_.emplace(join_span(v), e);
      max_words_ = std::max(max_words_, v.size());
    }
  }
}

long PatternSet::find(std::span<const std::string> words) const {
  auto it = lookup_.find(join_span(words));
  return it == lookup_.end() ? -1 : static_cast<long>(it->second);
}

bool PatternSet::contains_word(std::string_view word) const {
  return lookup_.count(std::string(word)) > 0;
}

Lexicon compile(const LexiconConfig& config) {
  if (config.k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(config.k));

  auto build = [](const char* name, const std::vector<std::string>& templates) {
    if (templates.empty()) throw ConfigError(std::string("pattern set '") + name + "' is empty");
    std::vector<PatternEntry> entries;
    for (const auto& t : templates) entries.push_back(expand_template(t));
    return PatternSet(name, std::move(entries));
  };

  Lexicon lex;
  lex.coarse_kw = build("coarse_kw", config.coarse_kw);
  lex.coarse_akw = build("coarse_akw", config.coarse_akw);
  lex.fine_kw = build("fine_kw", config.fine_kw);
  lex.fine_akw = build("fine_akw", config.fine_akw);
  lex.k = config.k;

  // variant -> (set, entry surface)
  std::map<std::string, std::pair<std::string, std::string>> owner;
  for (const PatternSet* set : {&lex.coarse_kw, &lex.coarse_akw, &lex.fine_kw, &lex.fine_akw}) {
    std::map<std::string, std::string> seen_here;
    for (const auto& entry : set->entries()) {
      for (const auto& v : entry.variants) {
        std::string key = join_span(v);
        auto it = owner.find(key);
        if (it != owner.end() && it->second.first != set->name())
          throw ConfigError("variant '" + key + "' appears in " + it->second.first + " entry '" +
                            it->second.second + "' and " + set->name() + " entry '" +
                            entry.surface + "'");
        owner.emplace(key, std::make_pair(set->name(), entry.surface));
      }
    }
  }

  std::vector<PatternEntry> body;
  for (const auto& t : config.body_parts) {
    PatternEntry entry = expand_template(t);
    for (const auto& v : entry.variants)
      if (lex.fine_kw.find(v) < 0)
        throw ConfigError("body part '" + join_span(v) + "' is not a fine_kw variant");
    body.push_back(std::move(entry));
  }
  lex.body_parts = PatternSet("body_parts", std::move(body));

  for (const auto& v : config.verbs) {
    std::string w = detail::to_lower(detail::trim(v));
    if (!w.empty()) lex.verbs.push_back(std::move(w));
  }
  return lex;
}

LexiconConfig parse_lexicon_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("lexicon is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("lexicon must be a JSON object");

  auto strings = [&](const char* key, bool required) {
    std::vector<std::string> out;
    if (!j.contains(key)) {
      if (required) throw ConfigError(std::string("lexicon is missing '") + key + "'");
      return out;
    }
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
    for (const auto& item : arr) {
      if (!item.is_string())
        throw ConfigError(std::string("'") + key + "' must contain only strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  };

  LexiconConfig config;
  config.coarse_kw = strings("coarse_kw", true);
  config.coarse_akw = strings("coarse_akw", true);
  config.fine_kw = strings("fine_kw", true);
  config.fine_akw = strings("fine_akw", true);
  config.body_parts = strings("body_parts", false);
  config.verbs = strings("verbs", false);
  if (j.contains("k")) {
    if (!j.at("k").is_number_integer()) throw ConfigError("'k' must be an integer");
    config.k = j.at("k").get<int>();
  }
  return config;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return compile(parse_lexicon_config(buf.str()));
}

std::vector<Match> match_spans(std::span<const std::string> words, const PatternSet& set) {
  return greedy_matches(words, set);
}

std::vector<Match> match_spans(std::span<const std::string> words, const PatternSet& set,
                               const PatternSet& competing) {
  auto matches = greedy_matches(words, set);
  auto rivals = greedy_matches(words, competing);
  std::erase_if(matches, [&](const Match& m) {
    return std::any_of(rivals.begin(), rivals.end(), [&](const Match& r) {
      return r.length() > m.length() && r.first <= m.first && m.last <= r.last;
    });
  });
  return matches;
}

std::vector<std::string> token_words(const TokenStream& tokens) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(t.text);
  return words;
}

}  // namespace sublabel

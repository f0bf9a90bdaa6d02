#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublabel/lexicon.hpp"
#include "sublabel/sentence.hpp"

namespace sublabel {

/// A verb (or verb-like word) governing a body-part keyword.
struct Dependency {
  std::size_t verb = 0;
  Match body_part;
};

/// Finds a verb / body-part pair in a sentence. The default implementation
/// is a proximity heuristic; a syntactic parser can be plugged in instead.
class DependencyProvider {
public:
  virtual ~DependencyProvider() = default;
  virtual std::optional<Dependency> find(std::span<const std::string> words,
                                         const Lexicon& lexicon) const = 0;
};

/// Nearest verb-like word (in the lexicon's verb list, or an "-ing" form)
/// at most `window` words before a body-part keyword.
class ProximityDependencies : public DependencyProvider {
public:
  explicit ProximityDependencies(std::size_t window = 5) : window_(window) {}
  std::optional<Dependency> find(std::span<const std::string> words,
                                 const Lexicon& lexicon) const override;

private:
  std::size_t window_;
};

bool is_verb_like(const std::string& word, const std::vector<std::string>& verbs);
bool is_stop_word(const std::string& word);

/// Extracts a 2-8 word verbatim phrase naming the error.
///
/// With a dependency: verb through the body part plus up to two following
/// words. Otherwise: the first body-part keyword (or any fine keyword) with
/// k words on each side. Stop words are trimmed from both edges, never
/// cutting into the verb or keyword. Returns nullopt without a fine keyword.
std::optional<SummaryPhrase> summarize(std::span<const std::string> words, const Lexicon& lexicon,
                                       const DependencyProvider& dependencies);
std::optional<SummaryPhrase> summarize(std::span<const std::string> words, const Lexicon& lexicon);

/// Summarizes every relevant-incorrect sentence and clears the rest.
void summarize_incorrect(std::vector<Sentence>& sentences, const Lexicon& lexicon);

}  // namespace sublabel

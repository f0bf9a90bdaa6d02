#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sublabel/sentence.hpp"

namespace sublabel {

struct CorpusEntry {
  std::string text;
  Correctness label = Correctness::Correct;
};

using TrainingCorpus = std::vector<CorpusEntry>;

/// `label<TAB>sentence` per line; '#' comments and blank lines ignored.
TrainingCorpus read_corpus_tsv(std::istream& in);
TrainingCorpus load_corpus(const std::string& path);

struct Classification {
  Correctness label = Correctness::Correct;
  double log_odds = 0.0;  // score(incorrect) - score(correct)
  double score_correct = 0.0;
  double score_incorrect = 0.0;
};

/// Per-class word trigram model with add-alpha smoothing and backoff.
///
/// Each sentence is padded with two "<s>" and two "</s>" symbols; every
/// position after the leading pads is predicted. P(w | u v) uses the
/// trigram counts when the history (u v) occurs anywhere in training, else
/// the bigram history v, else unigrams, each smoothed over the shared
/// vocabulary, so every conditional distribution sums to one. Both classes
/// back off at the same positions. Words unseen in training map to "<unk>".
class TrigramModel {
public:
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";
  static constexpr const char* kUnk = "<unk>";
  static constexpr int kFormatVersion = 1;

  TrigramModel() = default;

  /// Throws TrainingError when a class is missing or alpha <= 0.
  static TrigramModel train(const TrainingCorpus& corpus, double alpha = 1.0);

  Classification classify(std::span<const std::string> words) const;
  Classification classify_text(const std::string& text) const;

  double prior(Correctness label) const;
  /// Smoothed P(word | u v) for one class; unknown symbols map to "<unk>".
  double probability(Correctness label, const std::string& u, const std::string& v,
                     const std::string& word) const;

  double alpha() const { return alpha_; }
  /// Sorted prediction vocabulary (training words, "</s>", "<unk>").
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  /// Versioned CBOR encoding of counts and metadata.
  void save(std::ostream& out) const;
  static TrigramModel load(std::istream& in);

  bool operator==(const TrigramModel&) const = default;

private:
  struct ClassCounts {
    std::uint64_t sentences = 0;
    std::uint64_t tokens = 0;
    std::map<std::string, std::uint64_t> trigrams;
    std::map<std::string, std::uint64_t> bigrams;
    std::map<std::string, std::uint64_t> unigrams;
    std::map<std::string, std::uint64_t> trigram_history;
    std::map<std::string, std::uint64_t> bigram_history;

    bool operator==(const ClassCounts&) const = default;
  };

  const ClassCounts& counts(Correctness label) const;
  const std::string& symbol(const std::string& word) const;
  double log_probability(const ClassCounts& c, const std::string& u, const std::string& v,
                         const std::string& w) const;
  void rebuild_histories();

  double alpha_ = 1.0;
  // Histories seen in either class; these pick the backoff order.
  std::set<std::string> trigram_contexts_;
  std::set<std::string> bigram_contexts_;
  std::vector<std::string> vocabulary_;
  ClassCounts correct_;
  ClassCounts incorrect_;
};

/// Labels every relevant sentence; other sentences are left Unset.
void classify_correctness(std::vector<Sentence>& sentences, const TrigramModel& model);

}  // namespace sublabel

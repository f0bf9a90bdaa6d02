#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sublabel/lexicon.hpp"
#include "sublabel/pose.hpp"
#include "sublabel/sentence.hpp"

namespace sublabel {

enum class Mark : std::uint8_t { None, Relevant, Irrelevant };

/// Stamps a window of the match plus `lexicon.k` words on each side (clamped
/// to the sentence): first relevant around every fine keyword, then
/// irrelevant around every fine anti-keyword, overwriting. Element i is the
/// mark of word i.
std::vector<Mark> mark_words(std::span<const std::string> words, const Lexicon& lexicon);

/// Relevant iff strictly more relevant than irrelevant marks.
Relevance vote(std::span<const Mark> marks);

struct VisibilityGate {
  double min_visibility = 0.5;  // per-frame mean over all landmarks
  double min_fraction = 0.5;    // share of the sentence's frames that must qualify
};

/// Frames of [start_ms, end_ms) absent from the stream count as failing; no
/// frames at all gives NoPoseData.
GateStatus gate_by_visibility(std::int64_t start_ms, std::int64_t end_ms,
                              const PoseStream& poses, const VisibilityGate& gate);

/// Votes every sentence, then demotes relevant sentences whose gate fails.
/// With `poses == nullptr` the gate is skipped and left NotRun.
void classify_relevance(std::vector<Sentence>& sentences, const Lexicon& lexicon,
                        const PoseStream* poses, const VisibilityGate& gate = {});

}  // namespace sublabel

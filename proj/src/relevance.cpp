#include "sublabel/relevance.hpp"

#include <algorithm>

namespace sublabel {

namespace {

void stamp(std::vector<Mark>& marks, const Match& m, int k, Mark value) {
  const std::size_t begin = m.first >= static_cast<std::size_t>(k) ? m.first - k : 0;
  const std::size_t end = std::min(marks.size(), m.last + static_cast<std::size_t>(k) + 1);
  std::fill(marks.begin() + static_cast<std::ptrdiff_t>(begin),
            marks.begin() + static_cast<std::ptrdiff_t>(end), value);
}

}  // namespace

std::vector<Mark> mark_words(std::span<const std::string> words, const Lexicon& lexicon) {
  std::vector<Mark> marks(words.size(), Mark::None);
  for (const Match& m : match_spans(words, lexicon.fine_kw, lexicon.fine_akw))
    stamp(marks, m, lexicon.k, Mark::Relevant);
  for (const Match& m : match_spans(words, lexicon.fine_akw, lexicon.fine_kw))
    stamp(marks, m, lexicon.k, Mark::Irrelevant);
  return marks;
}

Relevance vote(std::span<const Mark> marks) {
  const auto relevant = std::count(marks.begin(), marks.end(), Mark::Relevant);
  const auto irrelevant = std::count(marks.begin(), marks.end(), Mark::Irrelevant);
  return relevant > irrelevant ? Relevance::Relevant : Relevance::Irrelevant;
}

GateStatus gate_by_visibility(std::int64_t start_ms, std::int64_t end_ms,
                              const PoseStream& poses, const VisibilityGate& gate) {
  const FrameRange range = time_to_frames(start_ms, end_ms, poses.fps());
  const auto present = poses.frames_in(range);
  if (range.empty() || present.empty()) return GateStatus::NoPoseData;
  const auto qualifying = std::count_if(present.begin(), present.end(), [&](const PoseFrame* f) {
    return mean_visibility(*f) >= gate.min_visibility;
  });
  const double fraction = static_cast<double>(qualifying) / static_cast<double>(range.size());
  return fraction >= gate.min_fraction ? GateStatus::Pass : GateStatus::Fail;
}

void classify_relevance(std::vector<Sentence>& sentences, const Lexicon& lexicon,
                        const PoseStream* poses, const VisibilityGate& gate) {
  for (Sentence& s : sentences) {
    s.relevance = vote(mark_words(s.words, lexicon));
    s.gate = GateStatus::NotRun;
    if (s.relevance == Relevance::Relevant && poses) {
      s.gate = gate_by_visibility(s.start_ms, s.end_ms, *poses, gate);
      if (s.gate != GateStatus::Pass) s.relevance = Relevance::Irrelevant;
    }
  }
}

}  // namespace sublabel

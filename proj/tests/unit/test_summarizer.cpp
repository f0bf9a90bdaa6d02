#include <doctest.h>

#include "sublabel/lexicon.hpp"
#include "sublabel/subtitle.hpp"
#include "sublabel/summarizer.hpp"

using namespace sublabel;

namespace {

const Lexicon& lex() {
  static const Lexicon l = load_lexicon(SUBLABEL_DATA_DIR "/lexicon.json");
  return l;
}

std::optional<SummaryPhrase> run(const char* text) { return summarize(normalize_words(text), lex()); }

bool is_subspan(const std::vector<std::string>& words, const SummaryPhrase& p) {
  std::string s;
  for (std::size_t i = p.begin; i < p.end; ++i) s += (i > p.begin ? " " : "") + words[i];
  return s == p.text;
}

}  // namespace

TEST_CASE("verb plus body part") {
  auto p = run("a common mistake is having your butt up in the air");
  REQUIRE(p);
  CHECK(p->text == "having your butt up");
  CHECK(p->method == SummaryMethod::Dependency);
  CHECK(p->begin == 4);
  CHECK(p->end == 8);
}

TEST_CASE("keyword context fallback") {
  auto p = run("your elbows flare");
  REQUIRE(p);
  CHECK(p->method == SummaryMethod::KeywordContext);
  CHECK(p->text.find("elbows") != std::string::npos);
  CHECK(p->text == "elbows flare");
}

TEST_CASE("nothing to summarize") {
  CHECK_FALSE(run("this is not great at all"));
}

TEST_CASE("verb-like words") {
  const auto& verbs = lex().verbs;
  CHECK(is_verb_like("having", verbs));
  CHECK(is_verb_like("bending", verbs));
  CHECK_FALSE(is_verb_like("ring", verbs));
  CHECK_FALSE(is_verb_like("table", verbs));
}

TEST_CASE("phrases are verbatim sub-spans of 2 to 8 words") {
  for (const char* s : {"do not let your hips sag toward the floor",
                        "the biggest mistake is flaring your elbows out wide",
                        "people often let their lower back arch and sag",
                        "your chest never reaches the floor which is a shame really",
                        "stop shrugging your shoulders up to your ears",
                        "a typical error is having your hands way too wide apart from each other"}) {
    auto words = normalize_words(s);
    auto p = summarize(words, lex());
    REQUIRE(p);
    CHECK(is_subspan(words, *p));
    const auto n = p->end - p->begin;
    CHECK(n >= 2);
    CHECK(n <= 8);
  }
}

TEST_CASE("verb too far from the body part falls back") {
  auto p = run("having a really really long pause then elbows");
  REQUIRE(p);
  CHECK(p->method == SummaryMethod::KeywordContext);
}

TEST_CASE("only incorrect relevant sentences get summaries") {
  std::vector<Sentence> s(2);
  s[0].words = normalize_words("a common mistake is having your butt up in the air");
  s[0].relevance = Relevance::Relevant;
  s[0].correctness = Correctness::Incorrect;
  s[1] = s[0];
  s[1].correctness = Correctness::Correct;
  summarize_incorrect(s, lex());
  REQUIRE(s[0].summary);
  CHECK(s[0].summary->text == "having your butt up");
  CHECK_FALSE(s[1].summary);
}

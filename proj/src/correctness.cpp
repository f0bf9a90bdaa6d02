#include "sublabel/correctness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include <json.hpp>

#include "sublabel/error.hpp"
#include "sublabel/subtitle.hpp"
#include "text_util.hpp"

namespace sublabel {

namespace {

constexpr const char* kFormatName = "sublabel-trigram";

std::string key(const std::string& a, const std::string& b) { return a + ' ' + b; }
std::string key(const std::string& a, const std::string& b, const std::string& c) {
  return a + ' ' + b + ' ' + c;
}

std::uint64_t lookup(const std::map<std::string, std::uint64_t>& m, const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

std::vector<std::string> padded(std::vector<std::string> words) {
  std::vector<std::string> seq{TrigramModel::kBos, TrigramModel::kBos};
  seq.insert(seq.end(), std::make_move_iterator(words.begin()),
             std::make_move_iterator(words.end()));
  seq.emplace_back(TrigramModel::kEos);
  seq.emplace_back(TrigramModel::kEos);
  return seq;
}

}  // namespace

TrainingCorpus read_corpus_tsv(std::istream& in) {
  TrainingCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected label<TAB>sentence", line_no);
    std::string label(detail::trim(std::string_view(line).substr(0, tab)));
    std::string text(detail::trim(std::string_view(line).substr(tab + 1)));
    CorpusEntry entry;
    if (label == "correct")
      entry.label = Correctness::Correct;
    else if (label == "incorrect")
      entry.label = Correctness::Incorrect;
    else
      throw ParseError("label must be 'correct' or 'incorrect', got '" + label + "'", line_no);
    if (normalize_words(text).empty()) throw ParseError("empty sentence", line_no);
    entry.text = std::move(text);
    corpus.push_back(std::move(entry));
  }
  return corpus;
}

TrainingCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TrainingError("cannot open corpus '" + path + "'");
  return read_corpus_tsv(in);
}

TrigramModel TrigramModel::train(const TrainingCorpus& corpus, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw TrainingError("smoothing constant must be positive");
  TrigramModel model;
  model.alpha_ = alpha;

  std::vector<std::string> vocab{kEos, kUnk};
  for (const CorpusEntry& entry : corpus) {
    ClassCounts& c = entry.label == Correctness::Incorrect ? model.incorrect_ : model.correct_;
    auto words = normalize_words(entry.text);
    if (words.empty()) throw TrainingError("corpus contains an empty sentence");
    vocab.insert(vocab.end(), words.begin(), words.end());
    auto seq = padded(std::move(words));
    ++c.sentences;
    for (std::size_t i = 2; i < seq.size(); ++i) {
      ++c.trigrams[key(seq[i - 2], seq[i - 1], seq[i])];
      ++c.bigrams[key(seq[i - 1], seq[i])];
      ++c.unigrams[seq[i]];
      ++c.tokens;
    }
  }
  if (model.correct_.sentences == 0 || model.incorrect_.sentences == 0)
    throw TrainingError("training corpus must contain both correct and incorrect sentences");

  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  model.vocabulary_ = std::move(vocab);
  model.rebuild_histories();
  return model;
}

void TrigramModel::rebuild_histories() {
  trigram_contexts_.clear();
  bigram_contexts_.clear();
  for (ClassCounts* c : {&correct_, &incorrect_}) {
    c->trigram_history.clear();
    c->bigram_history.clear();
    for (const auto& [k, n] : c->trigrams) c->trigram_history[k.substr(0, k.rfind(' '))] += n;
    for (const auto& [k, n] : c->bigrams) c->bigram_history[k.substr(0, k.find(' '))] += n;
    for (const auto& [k, n] : c->trigram_history) trigram_contexts_.insert(k);
    for (const auto& [k, n] : c->bigram_history) bigram_contexts_.insert(k);
  }
}

const TrigramModel::ClassCounts& TrigramModel::counts(Correctness label) const {
  return label == Correctness::Incorrect ? incorrect_ : correct_;
}

const std::string& TrigramModel::symbol(const std::string& word) const {
  static const std::string bos = kBos;
  static const std::string unk = kUnk;
  if (word == bos) return bos;
  return std::binary_search(vocabulary_.begin(), vocabulary_.end(), word) ? word : unk;
}

double TrigramModel::prior(Correctness label) const {
  const double total = static_cast<double>(correct_.sentences + incorrect_.sentences);
  return static_cast<double>(counts(label).sentences) / total;
}

double TrigramModel::log_probability(const ClassCounts& c, const std::string& u,
                                     const std::string& v, const std::string& w) const {
  const double smooth = alpha_ * static_cast<double>(vocabulary_.size());
  if (const auto ctx = key(u, v); trigram_contexts_.count(ctx))
    return std::log((static_cast<double>(lookup(c.trigrams, key(u, v, w))) + alpha_) /
                    (static_cast<double>(lookup(c.trigram_history, ctx)) + smooth));
  if (bigram_contexts_.count(v))
    return std::log((static_cast<double>(lookup(c.bigrams, key(v, w))) + alpha_) /
                    (static_cast<double>(lookup(c.bigram_history, v)) + smooth));
  return std::log((static_cast<double>(lookup(c.unigrams, w)) + alpha_) /
                  (static_cast<double>(c.tokens) + smooth));
}

double TrigramModel::probability(Correctness label, const std::string& u, const std::string& v,
                                 const std::string& word) const {
  return std::exp(log_probability(counts(label), symbol(u), symbol(v), symbol(word)));
}

Classification TrigramModel::classify(std::span<const std::string> words) const {
  std::vector<std::string> mapped;
  mapped.reserve(words.size());
  for (const auto& w : words) mapped.push_back(symbol(w));
  const auto seq = padded(std::move(mapped));

  auto score = [&](Correctness label) {
    const ClassCounts& c = counts(label);
    double s = std::log(prior(label));
    for (std::size_t i = 2; i < seq.size(); ++i)
      s += log_probability(c, seq[i - 2], seq[i - 1], seq[i]);
    return s;
  };

  Classification out;
  out.score_correct = score(Correctness::Correct);
  out.score_incorrect = score(Correctness::Incorrect);
  out.log_odds = out.score_incorrect - out.score_correct;
  out.label = out.log_odds > 0.0 ? Correctness::Incorrect : Correctness::Correct;
  return out;
}

Classification TrigramModel::classify_text(const std::string& text) const {
  return classify(normalize_words(text));
}

void TrigramModel::save(std::ostream& out) const {
  auto encode = [](const ClassCounts& c) {
    nlohmann::json j;
    j["sentences"] = c.sentences;
    j["tokens"] = c.tokens;
    j["trigrams"] = c.trigrams;
    j["bigrams"] = c.bigrams;
    j["unigrams"] = c.unigrams;
    return j;
  };
  nlohmann::json doc;
  doc["format"] = kFormatName;
  doc["version"] = kFormatVersion;
  doc["alpha"] = alpha_;
  doc["vocabulary"] = vocabulary_;
  doc["classes"]["correct"] = encode(correct_);
  doc["classes"]["incorrect"] = encode(incorrect_);
  const auto bytes = nlohmann::json::to_cbor(doc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

TrigramModel TrigramModel::load(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  nlohmann::json doc;
  try {
    if (!bytes.empty() && bytes.front() == '{')
      doc = nlohmann::json::parse(bytes.begin(), bytes.end());
    else
      doc = nlohmann::json::from_cbor(bytes);
    if (doc.value("format", "") != kFormatName) throw ParseError("not a trigram model file");
    if (doc.at("version").get<int>() != kFormatVersion)
      throw ParseError("unsupported model version " + doc.at("version").dump());

    auto decode = [](const nlohmann::json& j) {
      ClassCounts c;
      c.sentences = j.at("sentences").get<std::uint64_t>();
      c.tokens = j.at("tokens").get<std::uint64_t>();
      c.trigrams = j.at("trigrams").get<std::map<std::string, std::uint64_t>>();
      c.bigrams = j.at("bigrams").get<std::map<std::string, std::uint64_t>>();
      c.unigrams = j.at("unigrams").get<std::map<std::string, std::uint64_t>>();
      return c;
    };
    TrigramModel model;
    model.alpha_ = doc.at("alpha").get<double>();
    model.vocabulary_ = doc.at("vocabulary").get<std::vector<std::string>>();
    model.correct_ = decode(doc.at("classes").at("correct"));
    model.incorrect_ = decode(doc.at("classes").at("incorrect"));
    model.rebuild_histories();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model file: ") + e.what());
  }
}

void classify_correctness(std::vector<Sentence>& sentences, const TrigramModel& model) {
  for (Sentence& s : sentences) {
    if (s.relevance != Relevance::Relevant) {
      s.correctness = Correctness::Unset;
      s.log_odds.reset();
      continue;
    }
    const Classification c = model.classify(s.words);
    s.correctness = c.label;
    s.log_odds = c.log_odds;
  }
}

}  // namespace sublabel

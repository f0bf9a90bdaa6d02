// Python bindings. Enumerations cross the boundary as their file-format
// names ("relevant", "relevant_incorrect", ...).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "sublabel/analysis/clustering.hpp"
#include "sublabel/analysis/rank_sum.hpp"
#include "sublabel/clips.hpp"
#include "sublabel/coarse.hpp"
#include "sublabel/correctness.hpp"
#include "sublabel/error.hpp"
#include "sublabel/lexicon.hpp"
#include "sublabel/pipeline.hpp"
#include "sublabel/relevance.hpp"
#include "sublabel/sentence.hpp"
#include "sublabel/subtitle.hpp"
#include "sublabel/summarizer.hpp"

namespace py = pybind11;
using namespace sublabel;

namespace {

Correctness correctness_from(const std::string& name) {
  if (name == "correct") return Correctness::Correct;
  if (name == "incorrect") return Correctness::Incorrect;
  throw UsageError("label must be \"correct\" or \"incorrect\", got \"" + name + "\"");
}

const char* mark_name(Mark m) {
  switch (m) {
    case Mark::Relevant: return "relevant";
    case Mark::Irrelevant: return "irrelevant";
    default: return "none";
  }
}

Mark mark_from(const std::string& name) {
  if (name == "relevant") return Mark::Relevant;
  if (name == "irrelevant") return Mark::Irrelevant;
  if (name == "none") return Mark::None;
  throw UsageError("unknown mark \"" + name + "\"");
}

py::dict sentence_dict(const Sentence& s) {
  py::dict d;
  d["id"] = s.id;
  d["text"] = s.text();
  d["words"] = s.words;
  d["start_ms"] = s.start_ms;
  d["end_ms"] = s.end_ms;
  d["relevance"] = relevance_name(s.relevance);
  d["gate"] = gate_name(s.gate);
  d["correctness"] = correctness_name(s.correctness);
  d["log_odds"] = s.log_odds;
  d["summary"] = s.summary ? py::object(py::str(s.summary->text)) : py::object(py::none());
  return d;
}

py::dict clip_dict(const ClipRecord& c) {
  py::dict d;
  d["clip_id"] = c.clip_id;
  d["video_id"] = c.video_id;
  d["label"] = clip_label_name(c.label);
  d["frame_start"] = c.frame_start;
  d["frame_end"] = c.frame_end;
  d["summary"] = c.summary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Subtitle-driven labeling of exercise video clips";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<UsageError>(m, "UsageError", error);
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<ValidationError>(m, "ValidationError", error);
  py::register_exception<TrainingError>(m, "TrainingError", error);

  py::class_<Lexicon>(m, "Lexicon")
      .def_readonly("k", &Lexicon::k)
      .def_readonly("verbs", &Lexicon::verbs);
  m.def("load_lexicon", &load_lexicon, py::arg("path"));

  py::class_<Token>(m, "Token")
      .def_readonly("text", &Token::text)
      .def_readonly("start_ms", &Token::start_ms)
      .def_readonly("end_ms", &Token::end_ms)
      .def_readonly("index", &Token::index)
      .def_readonly("sentence_final", &Token::sentence_final)
      .def("__repr__", [](const Token& t) {
        return "Token(" + t.text + ", " + std::to_string(t.start_ms) + "-" +
               std::to_string(t.end_ms) + ")";
      });

  m.def("normalize_words", &normalize_words, py::arg("text"));
  m.def(
      "ingest",
      [](const std::string& document, const std::string& format) {
        return tokenize(parse_subtitles(document, parse_format(format, document)));
      },
      py::arg("document"), py::arg("format") = "auto",
      "Parses an SRT or WebVTT document into timed word tokens.");

  m.def(
      "mark_coarse",
      [](const TokenStream& tokens, const Lexicon& lexicon) {
        std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
        for (const auto& s : mark_coarse(tokens, lexicon))
          out.emplace_back(s.begin, s.end, coarse_label_name(s.label));
        return out;
      },
      py::arg("tokens"), py::arg("lexicon"),
      "Coarse spans as (begin, end, label) with half-open token ranges.");

  m.def(
      "split_sentences",
      [](const TokenStream& tokens, const Lexicon& lexicon) {
        py::list out;
        for (const auto& s : split_sentences(tokens, mark_coarse(tokens, lexicon), RuleSegmenter()))
          out.append(sentence_dict(s));
        return out;
      },
      py::arg("tokens"), py::arg("lexicon"));

  m.def(
      "mark_words",
      [](const std::vector<std::string>& words, const Lexicon& lexicon) {
        std::vector<std::string> out;
        for (Mark mk : mark_words(words, lexicon)) out.push_back(mark_name(mk));
        return out;
      },
      py::arg("words"), py::arg("lexicon"));
  m.def(
      "vote",
      [](const std::vector<std::string>& marks) {
        std::vector<Mark> parsed;
        for (const auto& s : marks) parsed.push_back(mark_from(s));
        return std::string(relevance_name(vote(parsed)));
      },
      py::arg("marks"));

  py::class_<TrigramModel>(m, "TrigramModel")
      .def_static(
          "train",
          [](const std::vector<std::pair<std::string, std::string>>& corpus, double alpha) {
            TrainingCorpus c;
            for (const auto& [text, label] : corpus) c.push_back({text, correctness_from(label)});
            return TrigramModel::train(c, alpha);
          },
          py::arg("corpus"), py::arg("alpha") = 1.0,
          "Trains from (text, \"correct\" | \"incorrect\") pairs.")
      .def_static(
          "from_corpus_file",
          [](const std::string& path, double alpha) {
            return TrigramModel::train(load_corpus(path), alpha);
          },
          py::arg("path"), py::arg("alpha") = 1.0)
      .def(
          "classify",
          [](const TrigramModel& model, const std::string& text) {
            const auto c = model.classify_text(text);
            return std::make_pair(std::string(correctness_name(c.label)), c.log_odds);
          },
          py::arg("text"), "Returns (label, log_odds); log_odds > 0 favours incorrect.")
      .def("prior", [](const TrigramModel& model,
                       const std::string& label) { return model.prior(correctness_from(label)); })
      .def_property_readonly("alpha", &TrigramModel::alpha)
      .def_property_readonly("vocabulary", &TrigramModel::vocabulary)
      .def("dumps",
           [](const TrigramModel& model) {
             std::ostringstream out;
             model.save(out);
             return py::bytes(out.str());
           })
      .def_static("loads", [](const py::bytes& data) {
        std::istringstream in{std::string(data)};
        return TrigramModel::load(in);
      });

  m.def(
      "summarize",
      [](const std::vector<std::string>& words, const Lexicon& lexicon) -> std::optional<std::string> {
        auto phrase = summarize(words, lexicon);
        if (!phrase) return std::nullopt;
        return phrase->text;
      },
      py::arg("words"), py::arg("lexicon"));

  m.def(
      "rank_sum_test",
      [](const std::vector<double>& a, const std::vector<double>& b, const std::string& method) {
        analysis::RankSumMethod mt = analysis::RankSumMethod::Auto;
        if (method == "exact") mt = analysis::RankSumMethod::Exact;
        else if (method == "normal") mt = analysis::RankSumMethod::Normal;
        else if (method != "auto") throw UsageError("method must be auto, exact or normal");
        const auto t = analysis::rank_sum_test(a, b, mt);
        py::dict d;
        d["delta_median"] = t.delta_median;
        d["p_value"] = t.p_value;
        d["u"] = t.u;
        d["exact"] = t.exact;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("method") = "auto");

  m.def(
      "kmeans",
      [](const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
         std::size_t max_iter, double tol) {
        std::vector<analysis::FeatureVector> features;
        for (const auto& p : points) {
          if (p.size() != analysis::kPoseFeatureDims)
            throw ValidationError("each point needs " + std::to_string(analysis::kPoseFeatureDims) +
                                  " values");
          features.push_back(p);
        }
        const auto model = analysis::kmeans(features, {k, seed, max_iter, tol});
        py::dict d;
        d["assignments"] = model.assignments;
        d["inertia"] = model.inertia;
        d["inertia_history"] = model.inertia_history;
        d["iterations"] = model.iterations;
        d["sizes"] = model.cluster_sizes();
        return d;
      },
      py::arg("points"), py::arg("k") = 6, py::arg("seed") = 42, py::arg("max_iter") = 300,
      py::arg("tol") = 1e-6);

  m.def(
      "run_pipeline",
      [](const std::string& config_path) {
        RunReport report;
        {
          py::gil_scoped_release release;
          report = run_pipeline(load_pipeline_config(config_path));
        }
        py::list videos;
        for (const auto& v : report.videos) {
          py::dict d;
          d["id"] = v.id;
          d["ok"] = v.ok;
          d["error"] = v.error;
          d["sentences"] = v.sentences;
          d["relevant"] = v.relevant;
          d["incorrect"] = v.incorrect;
          d["clips"] = v.clips;
          videos.append(d);
        }
        py::dict out;
        out["success"] = report.success();
        out["videos"] = videos;
        out["outputs"] = report.outputs;
        return out;
      },
      py::arg("config"), "Runs every stage for a project file; returns a short report.");

  m.def(
      "read_manifest",
      [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open " + path);
        py::list out;
        for (const auto& c : read_manifest_jsonl(in)) out.append(clip_dict(c));
        return out;
      },
      py::arg("path"));
}

// Python bindings. Documents cross the boundary as token lists; matrices as
// float64 numpy arrays; reports as plain dicts.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "fbtopics/assets.hpp"
#include "fbtopics/gsdmm.hpp"
#include "fbtopics/kbert.hpp"
#include "fbtopics/keywords.hpp"
#include "fbtopics/kmeans.hpp"
#include "fbtopics/lda.hpp"
#include "fbtopics/metrics.hpp"
#include "fbtopics/pipeline.hpp"

namespace py = pybind11;
using namespace fbtopics;
using Docs = std::vector<std::vector<std::string>>;
using nlohmann::json;

namespace {

py::object to_python(const json& doc) { return py::module_::import("json").attr("loads")(doc.dump()); }

json from_python(const py::object& obj) {
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::array_t<double> to_array(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  }
  return out;
}

DenseMatrix from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw Error("expected a 2-D array");
  DenseMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  auto view = a.unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = view(r, c);
  }
  return m;
}

// Reloaded whenever the data directory changes, so FBTOPICS_DATA_DIR set after import still applies.
const Assets& assets() {
  static std::filesystem::path loaded_from;
  static std::optional<Assets> cached;
  const auto dir = default_data_dir();
  if (!cached || dir != loaded_from) {
    cached = Assets::load(AssetPaths::defaults(dir));
    loaded_from = dir;
  }
  return *cached;
}

Corpus text_corpus(const std::vector<std::string>& texts, const std::optional<std::vector<std::string>>& ids) {
  if (ids && ids->size() != texts.size()) throw Error("ids and texts differ in length");
  std::vector<Document> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back({ids ? (*ids)[i] : std::to_string(i), texts[i], {}});
  return preprocess(Corpus(std::move(docs)), assets().stopwords);
}

struct PyTopicModel {
  TopicModelResult result;
  std::optional<std::size_t> populated_clusters;
};

PyTopicModel fit_on(const Docs& docs, auto&& fit) {
  const auto corpus = Corpus::from_tokens(docs);
  return fit(corpus, build_vocabulary(corpus));
}

EmbeddingMatrix embeddings_for(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  EmbeddingMatrix e{from_array(a), {}};
  for (std::size_t i = 0; i < e.size(); ++i) e.doc_ids.push_back(std::to_string(i));
  return e;
}

}  // namespace

PYBIND11_MODULE(_fbtopics, m) {
  m.doc() = "Keyword filtering, topic models and topic-quality metrics for short feedback comments";
  m.attr("__version__") = std::string(tool_version());

  // ConfigError registers last so its translator runs first.
  auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error);

  m.def("data_dir", [] { return default_data_dir().string(); }, "Directory the shipped word lists load from.");

  m.def(
      "preprocess",
      [](const std::vector<std::string>& texts, bool lemmatize) {
        std::vector<Document> docs;
        for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back({std::to_string(i), texts[i], {}});
        const auto& a = assets();
        const auto corpus = preprocess(Corpus(std::move(docs)), a.stopwords, &a.lemmatizer,
                                       PreprocessOptions{.lemmatize_tokens = lemmatize});
        Docs out;
        for (const auto& d : corpus.documents()) out.push_back(d.tokens);
        return out;
      },
      py::arg("texts"), py::arg("lemmatize") = false,
      "Tokenize, normalize and drop stopwords with the shipped list.");

  m.def(
      "filter_feedback",
      [](const std::vector<std::string>& texts, const std::optional<std::vector<std::string>>& ids,
         const std::string& mode) {
        const auto& a = assets();
        const auto expansion = parse_expansion_mode(mode);
        const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer, expansion);
        return to_python(to_json(filter_feedback(text_corpus(texts, ids), lex, a.lemmatizer, expansion)));
      },
      py::arg("texts"), py::arg("ids") = py::none(), py::arg("mode") = "lemma_pos",
      "Split comments into negatives (any complaint keyword) and positives.");

  m.def(
      "match_counts",
      [](const std::vector<std::string>& texts) {
        const auto& a = assets();
        const auto corpus = text_corpus(texts, std::nullopt);
        py::dict out;
        for (auto mode : {ExpansionMode::kExact, ExpansionMode::kLemma, ExpansionMode::kLemmaPos}) {
          out[py::str(std::string(to_string(mode)))] = match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, mode);
        }
        return out;
      },
      py::arg("texts"), "Flagged comment counts under each lexicon expansion.");

  py::class_<PyTopicModel>(m, "TopicModel")
      .def_property_readonly("model", [](const PyTopicModel& t) { return std::string(to_string(t.result.model_tag)); })
      .def_property_readonly("num_topics", [](const PyTopicModel& t) { return t.result.num_topics(); })
      .def_property_readonly("topic_word", [](const PyTopicModel& t) { return to_array(t.result.topic_word); })
      .def_property_readonly("doc_topic", [](const PyTopicModel& t) { return to_array(t.result.doc_topic); })
      .def_property_readonly("words", [](const PyTopicModel& t) { return t.result.words; })
      .def_property_readonly("doc_ids", [](const PyTopicModel& t) { return t.result.doc_ids; })
      .def_property_readonly("populated_clusters", [](const PyTopicModel& t) { return t.populated_clusters; })
      .def("top_words", [](const PyTopicModel& t, std::size_t k, std::size_t n) { return t.result.top_words(k, n); },
           py::arg("k"), py::arg("n") = 10)
      .def("topic_word_lists", [](const PyTopicModel& t, std::size_t n) { return t.result.topic_word_lists(n); },
           py::arg("n") = 10)
      .def("hard_assignment", [](const PyTopicModel& t) { return t.result.hard_assignment(); })
      .def("to_dict", [](const PyTopicModel& t, std::size_t n) { return to_python(to_json(t.result, n)); },
           py::arg("top_n") = 20)
      .def("__repr__", [](const PyTopicModel& t) {
        return "<TopicModel " + std::string(to_string(t.result.model_tag)) + " with " +
               std::to_string(t.result.num_topics()) + " topics>";
      });

  m.def(
      "fit_lda",
      [](const Docs& docs, std::size_t num_topics, std::optional<double> alpha, double eta, std::size_t iterations,
         std::uint64_t seed, const std::string& alpha_mode) {
        if (alpha_mode != "fixed" && alpha_mode != "auto") throw Error("alpha_mode must be fixed or auto");
        const LdaConfig cfg{.num_topics = num_topics, .alpha = alpha, .eta = eta, .iterations = iterations,
                            .seed = seed, .alpha_mode = alpha_mode == "auto" ? AlphaMode::kAuto : AlphaMode::kFixed};
        py::gil_scoped_release release;
        return fit_on(docs, [&](const Corpus& c, const Vocabulary& v) {
          return PyTopicModel{lda_fit(c, v, cfg), std::nullopt};
        });
      },
      py::arg("docs"), py::arg("num_topics"), py::arg("alpha") = py::none(), py::arg("eta") = 0.01,
      py::arg("iterations") = 500, py::arg("seed") = 0, py::arg("alpha_mode") = "fixed",
      "Collapsed Gibbs LDA over token lists; alpha defaults to 50 / num_topics.");

  m.def(
      "fit_gsdmm",
      [](const Docs& docs, std::size_t k_max, double alpha, double beta, std::size_t iterations, std::uint64_t seed) {
        const GsdmmConfig cfg{.k_max = k_max, .alpha = alpha, .beta = beta, .iterations = iterations, .seed = seed};
        py::gil_scoped_release release;
        return fit_on(docs, [&](const Corpus& c, const Vocabulary& v) {
          auto fit = gsdmm_fit(c, v, cfg);
          return PyTopicModel{std::move(fit.result), fit.populated_clusters};
        });
      },
      py::arg("docs"), py::arg("k_max") = 10, py::arg("alpha") = 0.1, py::arg("beta") = 0.1,
      py::arg("iterations") = 30, py::arg("seed") = 0,
      "Dirichlet multinomial mixture; the result holds only populated clusters.");

  m.def(
      "fit_kbert",
      [](const Docs& docs, const py::array_t<double, py::array::c_style | py::array::forcecast>& embeddings,
         std::size_t k, std::uint64_t seed, std::size_t representatives, std::size_t top_k, bool normalize) {
        const auto e = embeddings_for(embeddings);
        KbertConfig cfg;
        cfg.k = k;
        cfg.seed = seed;
        cfg.representatives = representatives;
        cfg.top_k = top_k;
        cfg.normalize = normalize;
        py::gil_scoped_release release;
        return fit_on(docs, [&](const Corpus& c, const Vocabulary& v) {
          return PyTopicModel{kbert_fit(c, v, e, cfg).result, std::nullopt};
        });
      },
      py::arg("docs"), py::arg("embeddings"), py::arg("k") = 3, py::arg("seed") = 0, py::arg("representatives") = 10,
      py::arg("top_k") = 10, py::arg("normalize") = false,
      "k-means over document embeddings (one row per doc), topics from centroid-nearest documents.");

  m.def(
      "kmeans",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& points, std::size_t k,
         std::uint64_t seed, std::size_t max_iter) {
        const auto pts = from_array(points);
        ClusterResult r;
        {
          py::gil_scoped_release release;
          r = kmeans_fit(pts, {.k = k, .seed = seed, .max_iter = max_iter});
        }
        py::dict out;
        out["assignment"] = r.assignment;
        out["centroids"] = to_array(r.centroids);
        out["inertia"] = r.inertia;
        out["inertia_history"] = r.inertia_history;
        out["iterations"] = r.iterations_run;
        out["converged"] = r.converged;
        return out;
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 300);

  m.def(
      "npmi",
      [](const std::string& a, const std::string& b, const Docs& docs, double epsilon, std::size_t window) {
        return npmi(a, b, build_counts(Corpus::from_tokens(docs), WindowMode{window}), epsilon);
      },
      py::arg("a"), py::arg("b"), py::arg("docs"), py::arg("epsilon") = 1e-12, py::arg("window") = 0,
      "NPMI of two words over documents (window 0) or sliding windows.");

  m.def(
      "cv_coherence",
      [](const Docs& topics, const Docs& docs, std::size_t top_n, double gamma, double epsilon, std::size_t window) {
        const auto counts = build_counts(Corpus::from_tokens(docs), WindowMode{window});
        return to_python(to_json(cv_coherence(topics, counts, {top_n, gamma, epsilon})));
      },
      py::arg("topics"), py::arg("docs"), py::arg("top_n") = 5, py::arg("gamma") = 1.0, py::arg("epsilon") = 1e-12,
      py::arg("window") = 0);

  m.def(
      "rbo", [](const std::vector<std::string>& s, const std::vector<std::string>& t, double p) { return rbo(s, t, p); },
      py::arg("s"), py::arg("t"), py::arg("p") = 0.9, "Rank-biased overlap truncated at the shorter list.");

  m.def(
      "irbo_avg", [](const Docs& topics, double p) { return to_python(to_json(irbo_avg(topics, p))); },
      py::arg("topics"), py::arg("p") = 0.9, "Mean of 1 - RBO over topic pairs.");

  m.def(
      "load_config",
      [](const py::object& source) {
        if (py::isinstance<py::dict>(source)) return to_python(PipelineConfig::from_json(from_python(source)).to_json());
        return to_python(PipelineConfig::load(source.cast<std::string>()).to_json());
      },
      py::arg("config"), "Parse a configuration (path or dict) and return it with defaults filled in.");

  m.def(
      "run",
      [](const py::object& source, const std::optional<std::string>& output_dir) {
        PipelineConfig cfg = py::isinstance<py::dict>(source) ? PipelineConfig::from_json(from_python(source))
                                                              : PipelineConfig::load(source.cast<std::string>());
        if (output_dir) cfg.output_dir = *output_dir;
        RunReport report;
        {
          py::gil_scoped_release release;
          report = run(cfg);
        }
        return to_python(to_json(report));
      },
      py::arg("config"), py::arg("output_dir") = py::none(),
      "Run every (model, topic count) cell; writes the report files and returns report.json as a dict.");

  m.def(
      "emit_table",
      [](const py::dict& report, const std::string& table) {
        return emit_table(run_report_from_json(from_python(report)), parse_table_kind(table));
      },
      py::arg("report"), py::arg("table") = "coherence", "CSV for the coherence, diversity or filter table.");
}

// Copyright 2026 The nameorigin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "nameorigin/analysis.h"
#include "nameorigin/classifier.h"
#include "nameorigin/cli.h"
#include "nameorigin/embedding.h"
#include "nameorigin/estimation.h"
#include "nameorigin/ingest.h"
#include "nameorigin/model_io.h"
#include "nameorigin/result_json.h"
#include "nameorigin/synthgen.h"
#include "nameorigin/taxonomy.h"

namespace py = pybind11;
using namespace nameorigin;

namespace {

using LabelTuple = std::tuple<std::string, std::string, std::string, std::uint64_t>;

ClassifierOptions OptionsFor(const std::vector<std::string>& tiers, double sigma) {
  ClassifierOptions o;
  o.use_us = o.use_tr = o.use_em = o.use_ps = o.use_ch = false;
  for (const std::string& t : tiers) {
    if (t == "us") o.use_us = true;
    else if (t == "tr") o.use_tr = true;
    else if (t == "em") o.use_em = true;
    else if (t == "ps") o.use_ps = true;
    else if (t == "ch") o.use_ch = true;
    else throw py::value_error("unknown tier '" + t + "'");
  }
  o.sigma = sigma;
  return o;
}

PriorMode ModeOf(const std::string& mode) {
  auto m = ParsePriorMode(mode);
  if (!m) throw py::value_error("mode must be internet or world");
  return *m;
}

struct PyTaxonomy {
  std::shared_ptr<const Taxonomy> t;
};

struct PyEmbeddings {
  std::shared_ptr<const EmbeddingTable> table;
};

struct PyModel {
  std::shared_ptr<const ModelTables> tables;
};

void BindTaxonomy(py::module_& m) {
  py::class_<PyTaxonomy>(m, "Taxonomy")
      .def_static("load", [](const std::string& name_or_path) {
        return PyTaxonomy{std::make_shared<const Taxonomy>(
            Taxonomy::Load(ResolveConfigPath(name_or_path, ".taxonomy")))};
      }, py::arg("name_or_path"))
      .def_static("parse", [](const std::string& text) {
        return PyTaxonomy{std::make_shared<const Taxonomy>(Taxonomy::Parse(text))};
      }, py::arg("text"))
      .def_property_readonly("name", [](const PyTaxonomy& t) { return t.t->name(); })
      .def("leaf_ids", [](const PyTaxonomy& t) { return t.t->LeafIds(); })
      .def("leaf_for_country", [](const PyTaxonomy& t, const std::string& c) {
        return t.t->LeafForCountry(c);
      }, py::arg("country"))
      .def("serialize", [](const PyTaxonomy& t) { return t.t->Serialize(); })
      .def("__len__", [](const PyTaxonomy& t) { return t.t->size(); });
}

void BindEmbeddings(py::module_& m) {
  py::class_<PyEmbeddings>(m, "Embeddings")
      .def_static("load", [](const std::filesystem::path& p) {
        return PyEmbeddings{std::make_shared<const EmbeddingTable>(EmbeddingTable::Load(p))};
      }, py::arg("path"))
      .def_static("train", [](const std::vector<std::vector<std::string>>& sentences,
                              const std::string& algorithm, int dim, int window,
                              int epochs, std::uint64_t min_count, std::uint64_t seed,
                              int threads) {
        TrainConfig c;
        auto a = ParseAlgorithm(algorithm);
        if (!a) throw py::value_error("algorithm must be cbow or sg");
        c.algorithm = *a;
        c.dim = dim;
        c.window = window;
        c.epochs = epochs;
        c.min_count = min_count;
        c.seed = seed;
        c.threads = threads;
        py::gil_scoped_release release;
        return PyEmbeddings{std::make_shared<const EmbeddingTable>(Train(sentences, c))};
      }, py::arg("sentences"), py::arg("algorithm") = "cbow", py::arg("dim") = 100,
         py::arg("window") = 5, py::arg("epochs") = 5, py::arg("min_count") = 5,
         py::arg("seed") = 1, py::arg("threads") = 1)
      .def("save", [](const PyEmbeddings& e, const std::filesystem::path& p) {
        e.table->Save(p);
      }, py::arg("path"))
      .def_property_readonly("dim", [](const PyEmbeddings& e) { return e.table->dim(); })
      .def("tokens", [](const PyEmbeddings& e) { return e.table->tokens(); })
      .def("knn", [](const PyEmbeddings& e, const std::string& token, std::size_t k) {
        std::vector<std::pair<std::string, double>> out;
        auto nn = Knn(*e.table, token, k);
        if (!nn) throw py::key_error(token);
        for (const Neighbor& n : nn->neighbors) out.emplace_back(n.token, n.similarity);
        return out;
      }, py::arg("token"), py::arg("k") = 10)
      .def("__len__", [](const PyEmbeddings& e) { return e.table->size(); });
}

void BindModel(py::module_& m) {
  py::class_<PyModel>(m, "Model")
      .def_static("load", [](const std::filesystem::path& dir) {
        return PyModel{LoadModel(dir)};
      }, py::arg("dir"))
      .def_static("build", [](const std::vector<LabelTuple>& labels,
                              const PyTaxonomy& taxonomy, const PyEmbeddings* embeddings,
                              std::uint64_t min_count, std::size_t k) {
        std::vector<LabeledName> named;
        for (const auto& [first, last, country, count] : labels) {
          LabeledName l;
          l.name.first = first;
          l.name.last = last;
          l.name.raw = first + " " + last;
          l.country = country;
          l.count = count;
          named.push_back(std::move(l));
        }
        ModelConfig c;
        c.min_count = min_count;
        c.k = k;
        py::gil_scoped_release release;
        return PyModel{std::make_shared<const ModelTables>(BuildModel(
            named, taxonomy.t, embeddings ? embeddings->table.get() : nullptr, {}, c))};
      }, py::arg("labels"), py::arg("taxonomy"), py::arg("embeddings") = nullptr,
         py::arg("min_count") = 5, py::arg("k") = 10)
      .def("save", [](const PyModel& model, const std::filesystem::path& dir) {
        SaveModel(*model.tables, dir, {});
      }, py::arg("dir"))
      .def_property_readonly("taxonomy", [](const PyModel& model) {
        return PyTaxonomy{model.tables->taxonomy};
      })
      .def("vocabulary_size", [](const PyModel& model, const std::string& role,
                                 const std::string& source) {
        auto r = ParseRole(role);
        auto s = ParseSource(source);
        if (!r || !s) throw py::value_error("bad role or source");
        const RoleTables& t = model.tables->role(*r);
        const LikelihoodTable* tables[] = {&t.us, &t.tr, &t.em, &t.ps, &t.ch};
        return tables[static_cast<int>(*s)]->size();
      }, py::arg("role"), py::arg("source"));

  py::class_<NameClassifier>(m, "Classifier")
      .def(py::init([](const PyModel& model, const std::vector<std::string>& tiers,
                       double sigma) {
        return NameClassifier(model.tables, OptionsFor(tiers, sigma));
      }), py::arg("model"),
         py::arg("tiers") = std::vector<std::string>{"tr", "em", "ps", "ch"},
         py::arg("sigma") = 1e-7)
      .def("classify_json", [](const NameClassifier& c, const std::string& first,
                               const std::string& last, const std::string& mode) {
        FullName n;
        n.first = first;
        n.last = last;
        n.raw = first + " " + last;
        return ResultToJson(c.Classify(n, ModeOf(mode)));
      }, py::arg("first"), py::arg("last"), py::arg("mode") = "internet");
}

void BindFunctions(py::module_& m) {
  m.def("normalize_name", [](const std::string& raw, bool join_middle) {
    auto r = NormalizeName(raw, join_middle ? MultiPartPolicy::kJoinMiddle
                                            : MultiPartPolicy::kStrict);
    if (auto* reason = std::get_if<RejectReason>(&r))
      throw py::value_error(std::string(RejectReasonCode(*reason)));
    const FullName& n = std::get<FullName>(r);
    return std::make_pair(n.first, n.last);
  }, py::arg("raw"), py::arg("join_middle") = false);

  m.def("generate_synthetic", [](const std::filesystem::path& out, std::uint64_t seed,
                                 std::uint64_t owners, std::uint64_t labels,
                                 double homophily) {
    SynthConfig c = SynthConfig::Default();
    c.seed = seed;
    c.owners = owners;
    c.labels = labels;
    c.homophily = homophily;
    c.Validate();
    py::gil_scoped_release release;
    WriteCorpus(Generate(c), out);
  }, py::arg("out"), py::arg("seed") = 7, py::arg("owners") = 20000,
     py::arg("labels") = 20000, py::arg("homophily") = 0.9);

  m.def("score_predictions",
        [](const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& rows) {
    std::vector<Prediction> preds;
    for (const auto& [truth, predicted, weight] : rows)
      preds.push_back({truth, predicted, weight});
    const ScoreSet s = ScorePredictions(preds);
    py::dict classes;
    for (const ClassScore& c : s.classes) {
      py::dict d;
      d["precision"] = c.precision;
      d["recall"] = c.recall;
      d["f1"] = c.f1;
      d["support"] = c.support();
      classes[py::str(c.id)] = d;
    }
    py::dict out;
    out["weighted_f1"] = s.weighted_f1;
    out["total"] = s.total;
    out["classes"] = classes;
    return out;
  }, py::arg("predictions"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status;
    {
      py::gil_scoped_release release;
      status = RunCli(args, out, err);
    }
    return std::make_tuple(status, out.str(), err.str());
  }, py::arg("args"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Name-based nationality classification";
  py::register_exception<TaxonomyParseError>(m, "TaxonomyParseError", PyExc_ValueError);
  py::register_exception<TaxonomyValidationError>(m, "TaxonomyValidationError",
                                                  PyExc_ValueError);
  BindTaxonomy(m);
  BindEmbeddings(m);
  BindModel(m);
  BindFunctions(m);
}

#include "cfrsense/ml/model.hpp"

#include <fstream>
#include <sstream>

#include "cfrsense/ml/ensemble.hpp"
#include "cfrsense/ml/knn.hpp"
#include "cfrsense/ml/nn.hpp"
#include "cfrsense/ml/svm.hpp"
#include "cfrsense/ml/tree.hpp"

namespace cfrsense::ml {

Dataset dataset_from(const std::vector<LabeledExample>& examples) {
  Dataset out;
  out.n = examples.size();
  out.d = examples.empty() ? 0 : examples.front().features.size();
  out.x.reserve(out.n * out.d);
  out.y.reserve(out.n);
  for (const auto& ex : examples) {
    if (ex.features.size() != out.d) throw data_error("dataset: mixed feature lengths");
    out.x.insert(out.x.end(), ex.features.begin(), ex.features.end());
    out.y.push_back(ex.label == Label::dehydrated ? 1 : 0);
  }
  return out;
}

Dataset dataset_rows(const Dataset& src, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.n = rows.size();
  out.d = src.d;
  out.x.reserve(out.n * out.d);
  out.y.reserve(out.n);
  for (std::size_t r : rows) {
    out.x.insert(out.x.end(), src.row(r), src.row(r) + src.d);
    out.y.push_back(src.y[r]);
  }
  return out;
}

Dataset dataset_cols(const Dataset& src, const std::vector<std::size_t>& cols) {
  Dataset out;
  out.n = src.n;
  out.d = cols.size();
  out.x.reserve(out.n * out.d);
  out.y = src.y;
  for (std::size_t i = 0; i < src.n; ++i) {
    const double* r = src.row(i);
    for (std::size_t c : cols) out.x.push_back(r[c]);
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

const std::vector<std::string>& catalog() {
  static const std::vector<std::string> names = {
      "knn-fine",
      "knn-medium",
      "knn-coarse",
      "svm-linear",
      "svm-quadratic",
      "svm-cubic",
      "tree-fine",
      "tree-coarse",
      "ensemble-boosted-tree",
      "ensemble-bagged-tree",
      "ensemble-subspace-knn",
      "ensemble-subspace-discriminant",
      "nn-narrow",
      "nn-medium",
      "nn-wide",
      "nn-bilayered",
      "nn-trilayered",
  };
  return names;
}

bool in_catalog(const std::string& variant) {
  for (const auto& name : catalog())
    if (name == variant) return true;
  return false;
}

std::unique_ptr<Model> fit(const std::string& variant,
                           const std::vector<LabeledExample>& train, std::uint64_t seed) {
  if (variant == "knn-fine") return knn_fit(train, 1, variant);
  if (variant == "knn-medium") return knn_fit(train, 10, variant);
  if (variant == "knn-coarse") return knn_fit(train, 100, variant);
  if (variant == "svm-linear") return svm_fit(train, SvmKernel::linear, 1.0, variant);
  if (variant == "svm-quadratic") return svm_fit(train, SvmKernel::poly2, 1.0, variant);
  if (variant == "svm-cubic") return svm_fit(train, SvmKernel::poly3, 1.0, variant);
  if (variant == "tree-fine") return tree_fit(train, 100, variant);
  if (variant == "tree-coarse") return tree_fit(train, 4, variant);
  if (variant == "ensemble-boosted-tree")
    return ensemble_fit(train, EnsembleKind::boosted_tree, seed, variant);
  if (variant == "ensemble-bagged-tree")
    return ensemble_fit(train, EnsembleKind::bagged_tree, seed, variant);
  if (variant == "ensemble-subspace-knn")
    return ensemble_fit(train, EnsembleKind::subspace_knn, seed, variant);
  if (variant == "ensemble-subspace-discriminant")
    return ensemble_fit(train, EnsembleKind::subspace_discriminant, seed, variant);
  if (variant.rfind("nn-", 0) == 0) return nn_fit(train, nn_hidden_layers(variant), seed, variant);

  std::ostringstream msg;
  msg << "unknown model variant '" << variant << "'; expected one of:";
  for (const auto& name : catalog()) msg << ' ' << name;
  throw config_error(msg.str());
}

std::vector<Label> predict_batch(const Model& model, const std::vector<LabeledExample>& examples) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(model.predict(ex.features));
  return out;
}

json model_to_json(const Model& model) {
  json j;
  j["schema_version"] = 1;
  j["model"] = model.to_json();
  return j;
}

std::unique_ptr<Model> model_from_json(const json& j) {
  if (!j.contains("schema_version")) throw data_error("model file: missing key 'schema_version'");
  if (j.at("schema_version").get<int>() != 1)
    throw config_error("model file: unsupported schema_version " +
                       j.at("schema_version").dump());
  const json& m = j.at("model");
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "knn") return KnnModel::from_json(m);
  if (kind == "tree") return TreeModel::from_json(m);
  if (kind == "svm") return SvmModel::from_json(m);
  if (kind == "nn") return NnModel::from_json(m);
  if (kind == "ensemble") return EnsembleModel::from_json(m);
  throw data_error("model file: unknown kind '" + kind + "'");
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw data_error("failed writing '" + path + "'");
}

std::unique_ptr<Model> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("model file: ") + e.what(), 0);
  }
  return model_from_json(j);
}

}  // namespace cfrsense::ml

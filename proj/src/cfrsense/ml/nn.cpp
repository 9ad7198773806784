#include "cfrsense/ml/nn.hpp"

#include <cmath>
#include <utility>

#include "cfrsense/kernels/kernels.hpp"
#include "cfrsense/prng.hpp"

namespace cfrsense::ml {

namespace {

void add_bias_rows(Matrix& z, const std::vector<double>& b) {
  for (std::size_t i = 0; i < z.rows; ++i) {
    double* r = z.row(i);
    for (std::size_t j = 0; j < z.cols; ++j) r[j] += b[j];
  }
}

void relu_inplace(Matrix& z) {
  for (double& v : z.a)
    if (v < 0.0) v = 0.0;
}

// logits (n x 2) -> softmax probabilities in place; returns mean
// cross-entropy against labels when given.
double softmax_rows(Matrix& z, const std::vector<int>* labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < z.rows; ++i) {
    double* r = z.row(i);
    double m = r[0];
    for (std::size_t j = 1; j < z.cols; ++j) m = std::max(m, r[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < z.cols; ++j) sum += std::exp(r[j] - m);
    const double lse = m + std::log(sum);
    if (labels) loss += lse - r[(*labels)[i]];
    for (std::size_t j = 0; j < z.cols; ++j) r[j] = std::exp(r[j] - lse);
  }
  return labels ? loss / static_cast<double>(z.rows) : 0.0;
}

}  // namespace

NnCore::NnCore(std::size_t input_dim, const std::vector<int>& hidden) {
  if (input_dim == 0) throw model_error("nn: zero input dimension");
  dims_.push_back(input_dim);
  for (int h : hidden) {
    if (h < 1) throw model_error("nn: hidden layer width must be >= 1");
    dims_.push_back(static_cast<std::size_t>(h));
  }
  dims_.push_back(2);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    params.w.emplace_back(dims_[l + 1], dims_[l]);
    params.b.emplace_back(dims_[l + 1], 0.0);
  }
}

void NnCore::init_glorot(std::uint64_t seed) {
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    Matrix& w = params.w[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    rng::Stream s(rng::derive(seed, rng::kTagModel, l), 0);
    for (double& v : w.a) v = bound * (2.0 * s.next_unit() - 1.0);
    for (double& v : params.b[l]) v = 0.0;
  }
}

Matrix NnCore::forward(const Dataset& data, std::vector<Matrix>* acts) const {
  const auto& krn = kernels::ops();
  Matrix a(data.n, data.d);
  a.a = data.x;
  if (acts) acts->push_back(a);
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    const Matrix& w = params.w[l];
    Matrix z(a.rows, w.rows);
    krn.matmul_nt(a.a.data(), w.a.data(), z.a.data(), a.rows, w.rows, w.cols);
    add_bias_rows(z, params.b[l]);
    if (l + 1 < params.w.size()) relu_inplace(z);
    a = std::move(z);
    if (acts && l + 1 < params.w.size()) acts->push_back(a);
  }
  return a;  // logits
}

double NnCore::loss(const Dataset& data) const {
  Matrix logits = forward(data, nullptr);
  return softmax_rows(logits, &data.y);
}

double NnCore::loss_and_grad(const Dataset& data, NnParams& grad) const {
  const auto& krn = kernels::ops();
  const std::size_t layers = params.w.size();
  grad.w.assign(layers, Matrix());
  grad.b.assign(layers, {});

  std::vector<Matrix> acts;  // inputs of each layer
  acts.reserve(layers);
  Matrix probs = forward(data, &acts);
  const double loss = softmax_rows(probs, &data.y);

  Matrix dz = std::move(probs);  // (p - onehot)/n
  const double invn = 1.0 / static_cast<double>(data.n);
  for (std::size_t i = 0; i < dz.rows; ++i) {
    dz.at(i, data.y[i]) -= 1.0;
    dz.row(i)[0] *= invn;
    dz.row(i)[1] *= invn;
  }

  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& a_in = acts[l];
    const Matrix dz_t = transpose(dz);
    const Matrix a_t = transpose(a_in);
    Matrix dw(params.w[l].rows, params.w[l].cols);
    krn.matmul_nt(dz_t.a.data(), a_t.a.data(), dw.a.data(), dz_t.rows, a_t.rows, dz_t.cols);
    std::vector<double> db(dz.cols, 0.0);
    for (std::size_t i = 0; i < dz.rows; ++i)
      for (std::size_t j = 0; j < dz.cols; ++j) db[j] += dz.at(i, j);
    grad.w[l] = std::move(dw);
    grad.b[l] = std::move(db);

    if (l > 0) {
      const Matrix w_t = transpose(params.w[l]);
      Matrix da(dz.rows, w_t.rows);
      krn.matmul_nt(dz.a.data(), w_t.a.data(), da.a.data(), dz.rows, w_t.rows, w_t.cols);
      for (std::size_t i = 0; i < da.a.size(); ++i)
        if (a_in.a[i] <= 0.0) da.a[i] = 0.0;
      dz = std::move(da);
    }
  }
  return loss;
}

void NnCore::step(const NnParams& grad, double lr) {
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    for (std::size_t i = 0; i < params.w[l].a.size(); ++i)
      params.w[l].a[i] -= lr * grad.w[l].a[i];
    for (std::size_t i = 0; i < params.b[l].size(); ++i)
      params.b[l][i] -= lr * grad.b[l][i];
  }
}

Matrix NnCore::probabilities(const Dataset& data) const {
  Matrix logits = forward(data, nullptr);
  softmax_rows(logits, nullptr);
  return logits;
}

int NnCore::predict(const double* features) const {
  Dataset one;
  one.n = 1;
  one.d = dims_.front();
  one.x.assign(features, features + one.d);
  one.y = {0};
  Matrix logits = forward(one, nullptr);
  return logits.at(0, 1) > logits.at(0, 0) ? 1 : 0;
}

NnTrainReport nn_train(NnCore& core, const Dataset& data, double lr, int max_iters, double tol) {
  if (data.n == 0) throw model_error("nn: empty training set");
  NnTrainReport report;
  NnParams grad;
  double prev = core.loss_and_grad(data, grad);
  if (!std::isfinite(prev)) throw model_error("nn: loss diverged at iteration 0");
  report.losses.push_back(prev);

  for (int it = 1; it <= max_iters; ++it) {
    const NnParams before = core.params;
    core.step(grad, lr);
    ++report.steps;
    const double cur = core.loss_and_grad(data, grad);
    if (!std::isfinite(cur))
      throw model_error("nn: loss diverged at iteration " + std::to_string(it));
    if (prev - cur < tol) {
      if (cur > prev) core.params = before;  // keep the better weights
      else report.losses.push_back(cur);
      break;
    }
    report.losses.push_back(cur);
    prev = cur;
  }
  return report;
}

const std::vector<int>& nn_hidden_layers(const std::string& variant) {
  static const std::vector<int> narrow{10}, medium{25}, wide{100}, bi{10, 10}, tri{10, 10, 10};
  if (variant == "nn-narrow") return narrow;
  if (variant == "nn-medium") return medium;
  if (variant == "nn-wide") return wide;
  if (variant == "nn-bilayered") return bi;
  if (variant == "nn-trilayered") return tri;
  throw config_error("nn: unknown variant '" + variant + "'");
}

NnModel::NnModel(std::string variant, NnCore core)
    : Model(std::move(variant), core.dims().front()), core_(std::move(core)) {}

int NnModel::predict_row(const double* features) const { return core_.predict(features); }

json NnModel::to_json() const {
  json j;
  j["kind"] = "nn";
  j["variant"] = variant();
  j["dims"] = core_.dims();
  json layers = json::array();
  for (std::size_t l = 0; l < core_.params.w.size(); ++l) {
    json layer;
    layer["w"] = core_.params.w[l].a;
    layer["b"] = core_.params.b[l];
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  return j;
}

std::unique_ptr<NnModel> NnModel::from_json(const json& j) {
  const auto dims = j.at("dims").get<std::vector<std::size_t>>();
  if (dims.size() < 2 || dims.back() != 2) throw data_error("nn model: bad layer dims");
  std::vector<int> hidden;
  for (std::size_t l = 1; l + 1 < dims.size(); ++l) hidden.push_back(static_cast<int>(dims[l]));
  NnCore core(dims.front(), hidden);
  const json& layers = j.at("layers");
  if (layers.size() != core.params.w.size()) throw data_error("nn model: bad layer count");
  for (std::size_t l = 0; l < core.params.w.size(); ++l) {
    auto w = layers[l].at("w").get<std::vector<double>>();
    auto b = layers[l].at("b").get<std::vector<double>>();
    if (w.size() != core.params.w[l].a.size() || b.size() != core.params.b[l].size())
      throw data_error("nn model: bad layer shape");
    core.params.w[l].a = std::move(w);
    core.params.b[l] = std::move(b);
  }
  return std::make_unique<NnModel>(j.at("variant").get<std::string>(), std::move(core));
}

std::unique_ptr<Model> nn_fit(const std::vector<LabeledExample>& train,
                              const std::vector<int>& hidden, std::uint64_t seed,
                              std::string variant, NnTrainReport* report) {
  const Dataset data = dataset_from(train);
  if (data.n == 0) throw model_error("nn: empty training set");
  bool saw[2] = {false, false};
  for (int y : data.y) saw[y] = true;
  if (!saw[0] || !saw[1]) throw data_error("nn: training data holds a single class");
  NnCore core(data.d, hidden);
  core.init_glorot(seed);
  NnTrainReport r = nn_train(core, data);
  if (report) *report = std::move(r);
  return std::make_unique<NnModel>(std::move(variant), std::move(core));
}

}  // namespace cfrsense::ml

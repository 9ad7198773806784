#pragma once

#include <cstdint>

#include "cfrsense/ml/model.hpp"

namespace cfrsense::ml {

struct NnParams {
  std::vector<Matrix> w;               // per layer, fan_out x fan_in
  std::vector<std::vector<double>> b;  // per layer, fan_out
};

// Fully connected feedforward net, ReLU hidden layers, two softmax outputs.
class NnCore {
 public:
  NnCore(std::size_t input_dim, const std::vector<int>& hidden);

  // Uniform +-sqrt(6/(fan_in+fan_out)) per layer, biases zero. Each layer
  // draws from its own derived stream so the values do not shift when other
  // layers change shape.
  void init_glorot(std::uint64_t seed);

  double loss(const Dataset& data) const;
  double loss_and_grad(const Dataset& data, NnParams& grad) const;
  void step(const NnParams& grad, double lr);

  Matrix probabilities(const Dataset& data) const;  // n x 2 softmax rows
  int predict(const double* features) const;

  const std::vector<std::size_t>& dims() const { return dims_; }
  NnParams params;

 private:
  Matrix forward(const Dataset& data, std::vector<Matrix>* acts) const;

  std::vector<std::size_t> dims_;  // input, hidden..., 2
};

struct NnTrainReport {
  int steps = 0;
  std::vector<double> losses;  // accepted losses, non-increasing
};

// Full-batch gradient descent; stops after max_iters steps or when a step
// improves the loss by less than tol (a worsening step is rolled back).
NnTrainReport nn_train(NnCore& core, const Dataset& data, double lr = 0.01,
                       int max_iters = 2000, double tol = 1e-7);

class NnModel : public Model {
 public:
  NnModel(std::string variant, NnCore core);

  const NnCore& core() const { return core_; }

  json to_json() const override;
  static std::unique_ptr<NnModel> from_json(const json& j);

 protected:
  int predict_row(const double* features) const override;

 private:
  NnCore core_;
};

const std::vector<int>& nn_hidden_layers(const std::string& variant);

std::unique_ptr<Model> nn_fit(const std::vector<LabeledExample>& train,
                              const std::vector<int>& hidden, std::uint64_t seed,
                              std::string variant, NnTrainReport* report = nullptr);

}  // namespace cfrsense::ml

#pragma once

#include "cfrsense/ml/model.hpp"

namespace cfrsense::ml {

enum class SvmKernel { linear, poly2, poly3 };

const char* svm_kernel_name(SvmKernel k);
SvmKernel svm_kernel_from_name(const std::string& name);

double svm_kernel_eval(SvmKernel k, const double* u, const double* v, std::size_t d);

class SvmModel : public Model {
 public:
  SvmModel(std::string variant, SvmKernel kernel, Dataset support,
           std::vector<double> dual_coef, double bias);

  // Sum of alpha_i * y_i * K(sv_i, x) + bias.
  double decision(const double* features) const;

  const std::vector<double>& dual_coef() const { return dual_coef_; }
  double bias() const { return bias_; }

  json to_json() const override;
  static std::unique_ptr<SvmModel> from_json(const json& j);

 protected:
  int predict_row(const double* features) const override;

 private:
  SvmKernel kernel_;
  Dataset support_;
  std::vector<double> dual_coef_;
  double bias_ = 0.0;
};

struct SvmFitInfo {
  std::vector<double> alpha;  // one per training row, in row order
  double bias = 0.0;
  long iterations = 0;
};

std::unique_ptr<SvmModel> svm_fit(const std::vector<LabeledExample>& train, SvmKernel kernel,
                                  double c, std::string variant, SvmFitInfo* info = nullptr);

}  // namespace cfrsense::ml

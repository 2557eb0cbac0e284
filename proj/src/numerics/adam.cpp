#include "saturn/numerics/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace saturn::numerics {

void Adam::step(std::span<Parameter*> params, double learning_rate) {
  if (m_.empty()) {
    for (Parameter* p : params) {
      m_.emplace_back(p->value.rows(), p->value.cols());
      v_.emplace_back(p->value.rows(), p->value.cols());
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("parameter list changed between Adam steps");
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    if (!p.grad.same_shape(p.value)) continue;
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      double g = p.grad[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      double mhat = m[i] / c1;
      double vhat = v[i] / c2;
      p.value[i] -= learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

}  // namespace saturn::numerics

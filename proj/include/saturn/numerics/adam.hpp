#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "saturn/numerics/tensor.hpp"

namespace saturn::numerics {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are created on the first step
/// and bound to the parameter order of that call.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void step(std::span<Parameter*> params, double learning_rate);
  std::uint64_t steps() const { return t_; }

 private:
  AdamConfig config_;
  std::uint64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace saturn::numerics

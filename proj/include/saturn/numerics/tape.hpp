#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "saturn/numerics/tensor.hpp"

namespace saturn::numerics {

/// Handle to a tape node.
struct Var {
  std::uint32_t index = 0;
};

/// Reverse-mode automatic differentiation over Tensor values. Every op
/// appends a node; backward() walks the nodes in reverse. A tape built with
/// record_gradients = false only computes values.
class Tape {
 public:
  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf bound to `p`; backward() accumulates into p.grad. The parameter
  /// must outlive the tape and keep its shape.
  Var parameter(Parameter& p);
  /// Read-only binding of a parameter's value; never receives gradients.
  Var parameter(const Parameter& p);

  const Tensor& value(Var v) const;
  /// Gradient of the last backward() loss with respect to `v`. Empty when
  /// `v` does not influence the loss.
  const Tensor& grad(Var v) const { return nodes_[v.index].grad; }
  std::size_t size() const { return nodes_.size(); }
  bool recording() const { return record_; }

  /// a[o x i] * b[i x k].
  Var matmul(Var a, Var b);
  /// transpose(a)[i x o] * b[o x k], for a stored as [o x i].
  Var matmul_tn(Var a, Var b);
  Var add(Var a, Var b);
  /// Adds column vector `bias` [o x 1] to every column of x [o x k].
  Var add_column(Var x, Var bias);
  /// w * x + b with b broadcast over the columns of x.
  Var affine(Var w, Var x, Var b) { return add_column(matmul(w, x), b); }
  Var scale(Var x, double factor);
  Var relu(Var x);
  /// Column-wise normalization over the rows, then gain and bias [n x 1].
  /// Requires at least two rows.
  Var layer_norm(Var x, Var gain, Var bias, double epsilon = 1e-5);
  /// Stacks inputs vertically; all must have the same column count.
  Var concat_rows(std::span<const Var> parts);
  /// Joins inputs horizontally; all must have the same row count.
  Var concat_cols(std::span<const Var> parts);
  /// Columns of x listed by index (repeats allowed).
  Var gather_columns(Var x, std::vector<std::uint32_t> columns);
  /// Output column g is the mean (or sum) of the listed columns of x; an
  /// empty group gives a zero column.
  Var group_mean(Var x, std::vector<std::vector<std::uint32_t>> groups);
  Var group_sum(Var x, std::vector<std::vector<std::uint32_t>> groups);
  /// Log-softmax over all entries, computed with max subtraction.
  Var log_softmax(Var x);
  /// Scalar sum of all entries.
  Var sum(Var x);
  /// Scalar mean of the listed flat entries of x.
  Var mean_of(Var x, std::vector<std::uint32_t> entries);
  /// Scalar sum of weights[i] * scalars[i].
  Var weighted_sum(std::span<const Var> scalars, std::span<const double> weights);

  /// Back-propagates from a 1x1 node. Gradients in parameters accumulate
  /// across calls; tape-local gradients are reset first.
  void backward(Var loss);

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;
    Tensor grad;
    Parameter* parameter = nullptr;
    bool requires_grad = false;
    std::function<void(Tape&, std::uint32_t)> backward;
  };

  Var push(Tensor value, std::initializer_list<Var> inputs, std::function<void(Tape&, std::uint32_t)> backward);
  Var push(Tensor value, std::span<const Var> inputs, std::function<void(Tape&, std::uint32_t)> backward);
  bool needs(Var v) const { return nodes_[v.index].requires_grad; }
  /// Gradient buffer of an input, allocated on first use.
  Tensor& accumulator(Var v);

  bool record_;
  // A deque keeps value references valid while nodes are appended.
  std::deque<Node> nodes_;
};

}  // namespace saturn::numerics

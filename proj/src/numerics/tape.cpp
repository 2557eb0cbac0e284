#include "saturn/numerics/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saturn::numerics {

namespace {

void require(bool condition, const char* op, const std::string& detail) {
  if (!condition) throw std::invalid_argument(std::string(op) + ": shape mismatch " + detail);
}

}  // namespace

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::parameter(Parameter& p) {
  Node node;
  node.external = &p.value;
  node.parameter = &p;
  node.requires_grad = record_;
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::parameter(const Parameter& p) {
  Node node;
  node.external = &p.value;
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Tensor& Tape::value(Var v) const {
  const Node& n = nodes_[v.index];
  return n.external ? *n.external : n.value;
}

Var Tape::push(Tensor value, std::initializer_list<Var> inputs, std::function<void(Tape&, std::uint32_t)> backward) {
  return push(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backward));
}

Var Tape::push(Tensor value, std::span<const Var> inputs, std::function<void(Tape&, std::uint32_t)> backward) {
  Node node;
  node.value = std::move(value);
  if (record_) {
    node.requires_grad = std::any_of(inputs.begin(), inputs.end(), [this](Var v) { return needs(v); });
    if (node.requires_grad) node.backward = std::move(backward);
  }
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Tensor& Tape::accumulator(Var v) {
  Node& n = nodes_[v.index];
  if (n.grad.empty()) {
    const Tensor& val = value(v);
    n.grad = Tensor(val.rows(), val.cols());
  }
  return n.grad;
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require(A.cols() == B.rows(), "matmul", A.shape_string() + " * " + B.shape_string());
  const std::size_t o = A.rows(), inner = A.cols(), k = B.cols();
  Tensor out(o, k);
  for (std::size_t r = 0; r < o; ++r) {
    double* orow = &out(r, 0);
    for (std::size_t t = 0; t < inner; ++t) {
      const double av = A(r, t);
      const double* brow = &B(t, 0);
      for (std::size_t c = 0; c < k; ++c) orow[c] += av * brow[c];
    }
  }
  return push(std::move(out), {a, b}, [a, b](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    const Tensor& A = tape.value(a);
    const Tensor& B = tape.value(b);
    const std::size_t o = A.rows(), inner = A.cols(), k = B.cols();
    if (tape.needs(a)) {
      Tensor& dA = tape.accumulator(a);
      for (std::size_t r = 0; r < o; ++r) {
        for (std::size_t t = 0; t < inner; ++t) {
          double s = 0.0;
          for (std::size_t c = 0; c < k; ++c) s += G(r, c) * B(t, c);
          dA(r, t) += s;
        }
      }
    }
    if (tape.needs(b)) {
      Tensor& dB = tape.accumulator(b);
      for (std::size_t r = 0; r < o; ++r) {
        for (std::size_t t = 0; t < inner; ++t) {
          const double av = A(r, t);
          for (std::size_t c = 0; c < k; ++c) dB(t, c) += av * G(r, c);
        }
      }
    }
  });
}

Var Tape::matmul_tn(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require(A.rows() == B.rows(), "matmul_tn", A.shape_string() + "^T * " + B.shape_string());
  const std::size_t o = A.rows(), inner = A.cols(), k = B.cols();
  Tensor out(inner, k);
  for (std::size_t r = 0; r < o; ++r) {
    for (std::size_t t = 0; t < inner; ++t) {
      const double av = A(r, t);
      for (std::size_t c = 0; c < k; ++c) out(t, c) += av * B(r, c);
    }
  }
  return push(std::move(out), {a, b}, [a, b](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    const Tensor& A = tape.value(a);
    const Tensor& B = tape.value(b);
    const std::size_t o = A.rows(), inner = A.cols(), k = B.cols();
    if (tape.needs(a)) {
      Tensor& dA = tape.accumulator(a);
      for (std::size_t r = 0; r < o; ++r) {
        for (std::size_t t = 0; t < inner; ++t) {
          double s = 0.0;
          for (std::size_t c = 0; c < k; ++c) s += B(r, c) * G(t, c);
          dA(r, t) += s;
        }
      }
    }
    if (tape.needs(b)) {
      Tensor& dB = tape.accumulator(b);
      for (std::size_t r = 0; r < o; ++r) {
        for (std::size_t t = 0; t < inner; ++t) {
          const double av = A(r, t);
          for (std::size_t c = 0; c < k; ++c) dB(r, c) += av * G(t, c);
        }
      }
    }
  });
}

Var Tape::add(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require(A.same_shape(B), "add", A.shape_string() + " + " + B.shape_string());
  Tensor out = A;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += B[i];
  return push(std::move(out), {a, b}, [a, b](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    for (Var v : {a, b}) {
      if (!tape.needs(v)) continue;
      Tensor& d = tape.accumulator(v);
      for (std::size_t i = 0; i < G.size(); ++i) d[i] += G[i];
    }
  });
}

Var Tape::add_column(Var x, Var bias) {
  const Tensor& X = value(x);
  const Tensor& b = value(bias);
  require(b.cols() == 1 && b.rows() == X.rows(), "add_column", X.shape_string() + " + " + b.shape_string());
  Tensor out = X;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < X.cols(); ++c) out(r, c) += b[r];
  }
  return push(std::move(out), {x, bias}, [x, bias](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    if (tape.needs(x)) {
      Tensor& d = tape.accumulator(x);
      for (std::size_t i = 0; i < G.size(); ++i) d[i] += G[i];
    }
    if (tape.needs(bias)) {
      Tensor& d = tape.accumulator(bias);
      for (std::size_t r = 0; r < G.rows(); ++r) {
        for (std::size_t c = 0; c < G.cols(); ++c) d[r] += G(r, c);
      }
    }
  });
}

Var Tape::scale(Var x, double factor) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
  return push(std::move(out), {x}, [x, factor](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    Tensor& d = tape.accumulator(x);
    for (std::size_t i = 0; i < G.size(); ++i) d[i] += factor * G[i];
  });
}

Var Tape::relu(Var x) {
  Tensor out = value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] > 0.0 ? out[i] : 0.0;
  return push(std::move(out), {x}, [x](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    const Tensor& X = tape.value(x);
    Tensor& d = tape.accumulator(x);
    for (std::size_t i = 0; i < G.size(); ++i) {
      if (X[i] > 0.0) d[i] += G[i];
    }
  });
}

Var Tape::layer_norm(Var x, Var gain, Var bias, double epsilon) {
  const Tensor& X = value(x);
  const Tensor& g = value(gain);
  const Tensor& b = value(bias);
  const std::size_t n = X.rows(), k = X.cols();
  if (n < 2) throw std::invalid_argument("layer_norm: needs at least 2 rows, got " + X.shape_string());
  require(g.rows() == n && g.cols() == 1 && b.same_shape(g), "layer_norm",
          X.shape_string() + " with gain " + g.shape_string() + " bias " + b.shape_string());
  Tensor normalized(n, k);
  std::vector<double> inv_std(k);
  Tensor out(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += X(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (X(r, c) - mean) * (X(r, c) - mean);
    var /= static_cast<double>(n);
    inv_std[c] = 1.0 / std::sqrt(var + epsilon);
    for (std::size_t r = 0; r < n; ++r) {
      normalized(r, c) = (X(r, c) - mean) * inv_std[c];
      out(r, c) = g[r] * normalized(r, c) + b[r];
    }
  }
  return push(std::move(out), {x, gain, bias},
              [x, gain, bias, normalized = std::move(normalized), inv_std = std::move(inv_std)](Tape& tape,
                                                                                                 std::uint32_t self) {
                const Tensor& G = tape.nodes_[self].grad;
                const Tensor& gv = tape.value(gain);
                const std::size_t n = G.rows(), k = G.cols();
                if (tape.needs(gain)) {
                  Tensor& d = tape.accumulator(gain);
                  for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t c = 0; c < k; ++c) d[r] += G(r, c) * normalized(r, c);
                  }
                }
                if (tape.needs(bias)) {
                  Tensor& d = tape.accumulator(bias);
                  for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t c = 0; c < k; ++c) d[r] += G(r, c);
                  }
                }
                if (tape.needs(x)) {
                  Tensor& d = tape.accumulator(x);
                  for (std::size_t c = 0; c < k; ++c) {
                    double mean_dy = 0.0, mean_dy_xhat = 0.0;
                    for (std::size_t r = 0; r < n; ++r) {
                      double dy = G(r, c) * gv[r];
                      mean_dy += dy;
                      mean_dy_xhat += dy * normalized(r, c);
                    }
                    mean_dy /= static_cast<double>(n);
                    mean_dy_xhat /= static_cast<double>(n);
                    for (std::size_t r = 0; r < n; ++r) {
                      double dy = G(r, c) * gv[r];
                      d(r, c) += inv_std[c] * (dy - mean_dy - normalized(r, c) * mean_dy_xhat);
                    }
                  }
                }
              });
}

Var Tape::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  const std::size_t k = value(parts[0]).cols();
  std::size_t rows = 0;
  for (Var v : parts) {
    require(value(v).cols() == k, "concat_rows", value(v).shape_string());
    rows += value(v).rows();
  }
  Tensor out(rows, k);
  std::size_t offset = 0;
  for (Var v : parts) {
    const Tensor& P = value(v);
    std::copy(P.data().begin(), P.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(offset * k));
    offset += P.rows();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return push(std::move(out), parts, [inputs](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    std::size_t offset = 0;
    for (Var v : inputs) {
      const std::size_t n = tape.value(v).size();
      if (tape.needs(v)) {
        Tensor& d = tape.accumulator(v);
        for (std::size_t i = 0; i < n; ++i) d[i] += G[offset + i];
      }
      offset += n;
    }
  });
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const std::size_t n = value(parts[0]).rows();
  std::size_t cols = 0;
  for (Var v : parts) {
    require(value(v).rows() == n, "concat_cols", value(v).shape_string());
    cols += value(v).cols();
  }
  Tensor out(n, cols);
  std::size_t offset = 0;
  for (Var v : parts) {
    const Tensor& P = value(v);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < P.cols(); ++c) out(r, offset + c) = P(r, c);
    }
    offset += P.cols();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return push(std::move(out), parts, [inputs](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    std::size_t offset = 0;
    for (Var v : inputs) {
      const std::size_t w = tape.value(v).cols();
      if (tape.needs(v)) {
        Tensor& d = tape.accumulator(v);
        for (std::size_t r = 0; r < G.rows(); ++r) {
          for (std::size_t c = 0; c < w; ++c) d(r, c) += G(r, offset + c);
        }
      }
      offset += w;
    }
  });
}

Var Tape::gather_columns(Var x, std::vector<std::uint32_t> columns) {
  const Tensor& X = value(x);
  Tensor out(X.rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= X.cols()) throw std::out_of_range("gather_columns: column index out of range");
    for (std::size_t r = 0; r < X.rows(); ++r) out(r, j) = X(r, columns[j]);
  }
  return push(std::move(out), {x}, [x, columns = std::move(columns)](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    Tensor& d = tape.accumulator(x);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      for (std::size_t r = 0; r < G.rows(); ++r) d(r, columns[j]) += G(r, j);
    }
  });
}

namespace {

Tensor group_reduce(const Tensor& X, const std::vector<std::vector<std::uint32_t>>& groups, bool mean) {
  Tensor out(X.rows(), groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::uint32_t c : groups[g]) {
      if (c >= X.cols()) throw std::out_of_range("group reduction: column index out of range");
      for (std::size_t r = 0; r < X.rows(); ++r) out(r, g) += X(r, c);
    }
    if (mean && !groups[g].empty()) {
      const double inv = 1.0 / static_cast<double>(groups[g].size());
      for (std::size_t r = 0; r < X.rows(); ++r) out(r, g) *= inv;
    }
  }
  return out;
}

}  // namespace

Var Tape::group_mean(Var x, std::vector<std::vector<std::uint32_t>> groups) {
  Tensor out = group_reduce(value(x), groups, true);
  return push(std::move(out), {x}, [x, groups = std::move(groups)](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    Tensor& d = tape.accumulator(x);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty()) continue;
      const double inv = 1.0 / static_cast<double>(groups[g].size());
      for (std::uint32_t c : groups[g]) {
        for (std::size_t r = 0; r < G.rows(); ++r) d(r, c) += inv * G(r, g);
      }
    }
  });
}

Var Tape::group_sum(Var x, std::vector<std::vector<std::uint32_t>> groups) {
  Tensor out = group_reduce(value(x), groups, false);
  return push(std::move(out), {x}, [x, groups = std::move(groups)](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    Tensor& d = tape.accumulator(x);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::uint32_t c : groups[g]) {
        for (std::size_t r = 0; r < G.rows(); ++r) d(r, c) += G(r, g);
      }
    }
  });
}

Var Tape::log_softmax(Var x) {
  const Tensor& X = value(x);
  if (X.empty()) throw std::invalid_argument("log_softmax: empty input");
  double top = -std::numeric_limits<double>::infinity();
  for (double v : X.data()) top = std::max(top, v);
  double total = 0.0;
  for (double v : X.data()) total += std::exp(v - top);
  const double log_total = top + std::log(total);
  Tensor out = X;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= log_total;
  return push(std::move(out), {x}, [x](Tape& tape, std::uint32_t self) {
    const Tensor& G = tape.nodes_[self].grad;
    const Tensor& Y = tape.nodes_[self].value;
    double gsum = 0.0;
    for (double g : G.data()) gsum += g;
    Tensor& d = tape.accumulator(x);
    for (std::size_t i = 0; i < G.size(); ++i) d[i] += G[i] - std::exp(Y[i]) * gsum;
  });
}

Var Tape::sum(Var x) {
  double total = 0.0;
  for (double v : value(x).data()) total += v;
  Tensor out(1, 1, total);
  return push(std::move(out), {x}, [x](Tape& tape, std::uint32_t self) {
    const double g = tape.nodes_[self].grad[0];
    Tensor& d = tape.accumulator(x);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += g;
  });
}

Var Tape::mean_of(Var x, std::vector<std::uint32_t> entries) {
  if (entries.empty()) throw std::invalid_argument("mean_of: no entries");
  const Tensor& X = value(x);
  double total = 0.0;
  for (std::uint32_t i : entries) {
    if (i >= X.size()) throw std::out_of_range("mean_of: entry out of range");
    total += X[i];
  }
  Tensor out(1, 1, total / static_cast<double>(entries.size()));
  return push(std::move(out), {x}, [x, entries = std::move(entries)](Tape& tape, std::uint32_t self) {
    const double g = tape.nodes_[self].grad[0] / static_cast<double>(entries.size());
    Tensor& d = tape.accumulator(x);
    for (std::uint32_t i : entries) d[i] += g;
  });
}

Var Tape::weighted_sum(std::span<const Var> scalars, std::span<const double> weights) {
  if (scalars.size() != weights.size()) throw std::invalid_argument("weighted_sum: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    require(value(scalars[i]).size() == 1, "weighted_sum", value(scalars[i]).shape_string());
    total += weights[i] * value(scalars[i])[0];
  }
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  std::vector<double> w(weights.begin(), weights.end());
  return push(Tensor(1, 1, total), scalars, [inputs, w](Tape& tape, std::uint32_t self) {
    const double g = tape.nodes_[self].grad[0];
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (tape.needs(inputs[i])) tape.accumulator(inputs[i])[0] += w[i] * g;
    }
  });
}

void Tape::backward(Var loss) {
  if (value(loss).size() != 1) throw std::invalid_argument("backward: loss must be a scalar, got " + value(loss).shape_string());
  for (Node& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.index].requires_grad) return;
  accumulator(loss)[0] = 1.0;
  for (std::uint32_t i = loss.index + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
    if (n.parameter) {
      Parameter& p = *n.parameter;
      if (!p.grad.same_shape(p.value)) p.grad = Tensor(p.value.rows(), p.value.cols());
      for (std::size_t k = 0; k < n.grad.size(); ++k) p.grad[k] += n.grad[k];
    }
  }
}

}  // namespace saturn::numerics

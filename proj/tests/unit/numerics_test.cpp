#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "saturn/numerics/adam.hpp"
#include "saturn/numerics/tape.hpp"

using namespace saturn::numerics;

namespace {

Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double away_from_zero = 0.0) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Tensor t(rows, cols);
  for (double& v : t.data()) {
    do v = dist(rng);
    while (std::abs(v) < away_from_zero);
  }
  return t;
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

/// Compares analytic gradients of `loss` for every entry of every parameter
/// with central differences.
double max_gradient_error(std::vector<Parameter*> params, const std::function<Var(Tape&)>& loss, double h = 1e-6) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    tape.backward(loss(tape));
  }
  double worst = 0.0;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      double saved = p->value[i];
      p->value[i] = saved + h;
      Tape plus(false);
      double up = plus.value(loss(plus))[0];
      p->value[i] = saved - h;
      Tape minus(false);
      double down = minus.value(loss(minus))[0];
      p->value[i] = saved;
      worst = std::max(worst, relative_error(p->grad[i], (up - down) / (2 * h)));
    }
  }
  return worst;
}

}  // namespace

TEST(Tensor, Basics) {
  Tensor t = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t(1, 0), 4.0);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_THROW(Tensor::from_rows({{1, 2}, {3}}), std::invalid_argument);
  Parameter p("w", t);
  EXPECT_TRUE(p.grad.same_shape(p.value));
  EXPECT_EQ(p.grad[3], 0.0);
}

TEST(Affine, IdentityAndScalar) {
  Tape tape;
  Var w = tape.constant(Tensor::from_rows({{1, 0}, {0, 1}}));
  Var x = tape.constant(Tensor::from_rows({{3, -1}, {2, 5}}));
  Var b = tape.constant(Tensor(2, 1));
  EXPECT_EQ(tape.value(tape.affine(w, x, b)), tape.value(x));
  Var y = tape.affine(tape.constant(Tensor::from_rows({{2}})), tape.constant(Tensor::from_rows({{3}})),
                      tape.constant(Tensor::from_rows({{1}})));
  EXPECT_EQ(tape.value(y)(0, 0), 7.0);
  EXPECT_THROW(tape.matmul(w, tape.constant(Tensor(3, 1))), std::invalid_argument);
  EXPECT_THROW(tape.add_column(x, tape.constant(Tensor(3, 1))), std::invalid_argument);
}

TEST(Affine, GradientCheck) {
  std::mt19937_64 rng(1);
  Parameter W("W", random_tensor(4, 3, rng)), X("X", random_tensor(3, 5, rng)), B("B", random_tensor(4, 1, rng));
  double err = max_gradient_error({&W, &X, &B}, [&](Tape& t) {
    return t.sum(t.affine(t.parameter(W), t.parameter(X), t.parameter(B)));
  });
  EXPECT_LE(err, 1e-7);
}

TEST(MatmulTn, MatchesExplicitTranspose) {
  std::mt19937_64 rng(2);
  Parameter A("A", random_tensor(4, 3, rng)), B("B", random_tensor(4, 2, rng));
  Tape tape;
  Tensor at(3, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 3; ++c) at(c, r) = A.value(r, c);
  Var direct = tape.matmul(tape.constant(at), tape.parameter(B));
  Var fused = tape.matmul_tn(tape.parameter(A), tape.parameter(B));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(tape.value(direct)[i], tape.value(fused)[i], 1e-14);
  Tensor weights = random_tensor(3, 2, rng);
  double err = max_gradient_error({&A, &B}, [&](Tape& t) {
    Var prod = t.matmul_tn(t.parameter(A), t.parameter(B));
    return t.sum(t.relu(t.add(prod, t.constant(weights))));
  });
  EXPECT_LE(err, 1e-6);
}

TEST(Relu, Values) {
  Tape tape;
  Var x = tape.constant(Tensor::from_rows({{-1, 0, 2}}));
  EXPECT_EQ(tape.value(tape.relu(x)), Tensor::from_rows({{0, 0, 2}}));
}

TEST(Relu, NegativeInputHasZeroGradient) {
  Parameter p("p", Tensor::from_rows({{-1, -2}, {-0.5, -3}}));
  Tape tape;
  Var y = tape.sum(tape.relu(tape.parameter(p)));
  EXPECT_EQ(tape.value(y)[0], 0.0);
  p.zero_grad();
  tape.backward(y);
  for (double g : p.grad.data()) EXPECT_EQ(g, 0.0);
}

TEST(Relu, GradientCheck) {
  std::mt19937_64 rng(3);
  Parameter X("X", random_tensor(5, 4, rng, 1e-4));
  Tensor mix = random_tensor(5, 4, rng);
  double err = max_gradient_error({&X}, [&](Tape& t) {
    Var r = t.relu(t.parameter(X));
    return t.sum(t.concat_rows(std::vector<Var>{r, t.add(r, t.constant(mix))}));
  });
  EXPECT_LE(err, 1e-7);
}

TEST(LayerNorm, Examples) {
  Tape tape;
  Var one = tape.constant(Tensor(2, 1, 1.0));
  Var zero = tape.constant(Tensor(2, 1, 0.0));
  Var y = tape.layer_norm(tape.constant(Tensor::from_rows({{1}, {-1}})), one, zero);
  EXPECT_NEAR(tape.value(y)[0], 1.0, 1e-5);
  EXPECT_NEAR(tape.value(y)[1], -1.0, 1e-5);
  Var bias = tape.constant(Tensor::from_rows({{0.3}, {-0.7}, {2}}));
  Var c = tape.layer_norm(tape.constant(Tensor(3, 1, 4.0)), tape.constant(Tensor(3, 1, 1.0)), bias);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(tape.value(c)[i], tape.value(bias)[i], 1e-12);
  EXPECT_THROW(tape.layer_norm(tape.constant(Tensor(1, 1)), tape.constant(Tensor(1, 1)), tape.constant(Tensor(1, 1))),
               std::invalid_argument);
}

TEST(LayerNorm, GradientCheck) {
  std::mt19937_64 rng(4);
  Parameter X("X", random_tensor(32, 1, rng)), G("G", random_tensor(32, 1, rng)), B("B", random_tensor(32, 1, rng));
  Tensor mix = random_tensor(32, 1, rng);
  double err = max_gradient_error({&X, &G, &B}, [&](Tape& t) {
    Var y = t.layer_norm(t.parameter(X), t.parameter(G), t.parameter(B));
    return t.matmul_tn(t.constant(mix), y);
  });
  EXPECT_LE(err, 1e-6);
}

TEST(LogSoftmax, Examples) {
  Tape tape;
  Var u = tape.log_softmax(tape.constant(Tensor(1, 4, 0.7)));
  for (double v : tape.value(u).data()) EXPECT_NEAR(v, -std::log(4.0), 1e-15);
  Var two = tape.log_softmax(tape.constant(Tensor::from_rows({{0.0, std::log(2.0)}})));
  EXPECT_NEAR(std::exp(tape.value(two)[0]), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::exp(tape.value(two)[1]), 2.0 / 3.0, 1e-12);
  Var d = tape.log_softmax(tape.constant(Tensor::from_rows({{1.25, -0.5, 3.0}})));
  EXPECT_NEAR(std::exp(tape.value(d)[0] - tape.value(d)[1]), std::exp(1.75), 1e-12);
  EXPECT_THROW(tape.log_softmax(tape.constant(Tensor())), std::invalid_argument);
}

TEST(LogSoftmax, NormalizedStableAndShiftInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor x(1, 1 + trial % 9);
    for (double& v : x.data()) v = dist(rng);
    if (trial % 2) x[0] = x[x.size() - 1] + 1000.0;
    Tape tape;
    Var y = tape.log_softmax(tape.constant(x));
    double total = 0.0;
    for (double v : tape.value(y).data()) total += std::exp(v);
    EXPECT_NEAR(total, 1.0, 1e-9);
    Tensor shifted = x;
    for (double& v : shifted.data()) v += 123.456;
    Var z = tape.log_softmax(tape.constant(shifted));
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(tape.value(y)[i], tape.value(z)[i], 1e-9);
  }
}

TEST(Backward, SumGivesOnes) {
  Parameter theta("theta", Tensor(4, 1, 0.3));
  Tape tape;
  tape.backward(tape.sum(tape.parameter(theta)));
  for (double g : theta.grad.data()) EXPECT_EQ(g, 1.0);
}

TEST(Backward, LogSoftmaxEntry) {
  Parameter theta("theta", Tensor(1, 2, 0.0));
  Tape tape;
  tape.backward(tape.mean_of(tape.log_softmax(tape.parameter(theta)), {0}));
  EXPECT_NEAR(theta.grad[0], 0.5, 1e-15);
  EXPECT_NEAR(theta.grad[1], -0.5, 1e-15);
}

TEST(Backward, AccumulatesAndRejectsNonScalar) {
  Parameter theta("theta", Tensor(3, 1, 1.0));
  Tape tape;
  Var s = tape.sum(tape.scale(tape.parameter(theta), 2.0));
  tape.backward(s);
  tape.backward(s);
  for (double g : theta.grad.data()) EXPECT_EQ(g, 4.0);
  theta.zero_grad();
  EXPECT_EQ(theta.grad[0], 0.0);
  EXPECT_THROW(tape.backward(tape.parameter(theta)), std::invalid_argument);
}

TEST(Combine, GroupsGatherAndConcat) {
  std::mt19937_64 rng(6);
  Parameter X("X", random_tensor(3, 5, rng)), Y("Y", random_tensor(2, 5, rng));
  Tensor mix = random_tensor(5, 4, rng);
  double err = max_gradient_error({&X, &Y}, [&](Tape& t) {
    Var x = t.parameter(X);
    Var stacked = t.concat_rows(std::vector<Var>{x, t.parameter(Y)});
    Var means = t.group_mean(stacked, {{0, 1}, {}, {4, 4, 2}, {3}});
    Var sums = t.group_sum(x, {{1, 2, 3}, {0}});
    Var gathered = t.gather_columns(x, {4, 0, 0});
    Var joined = t.concat_cols(std::vector<Var>{sums, gathered});
    Var a = t.sum(t.relu(t.add(means, t.constant(mix))));
    Var b = t.mean_of(t.log_softmax(joined), {0, 7, 9});
    return t.weighted_sum(std::vector<Var>{a, b}, std::vector<double>{0.7, -1.3});
  });
  EXPECT_LE(err, 1e-7);
  Tape tape;
  Var m = tape.group_mean(tape.constant(Tensor::from_rows({{1, 3}})), {{}, {0, 1}});
  EXPECT_EQ(tape.value(m), Tensor::from_rows({{0, 2}}));
}

TEST(Tape, NoGradModeRecordsNothing) {
  Parameter p("p", Tensor(2, 1, 1.0));
  Tape tape(false);
  Var s = tape.sum(tape.parameter(p));
  EXPECT_EQ(tape.value(s)[0], 2.0);
  p.zero_grad();
  tape.backward(s);
  EXPECT_EQ(p.grad[0], 0.0);
}

TEST(Tape, Deterministic) {
  std::mt19937_64 rng(7);
  Tensor w = random_tensor(16, 16, rng), x = random_tensor(16, 8, rng);
  auto run = [&] {
    Tape tape;
    Var y = tape.log_softmax(tape.relu(tape.matmul(tape.constant(w), tape.constant(x))));
    return tape.value(y);
  };
  EXPECT_EQ(run(), run());
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Parameter p("p", Tensor::from_rows({{1.5, -2}}));
  p.zero_grad();
  Adam adam;
  std::vector<Parameter*> ps{&p};
  adam.step(ps, 0.1);
  EXPECT_EQ(p.value, Tensor::from_rows({{1.5, -2}}));
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Parameter p("p", Tensor::from_rows({{1.0, 1.0, 1.0}}));
  p.grad = Tensor::from_rows({{3.0, -0.01, 250.0}});
  Adam adam;
  std::vector<Parameter*> ps{&p};
  adam.step(ps, 0.01);
  EXPECT_NEAR(p.value[0], 0.99, 1e-8);
  EXPECT_NEAR(p.value[1], 1.01, 1e-6);
  EXPECT_NEAR(p.value[2], 0.99, 1e-8);
}

TEST(Adam, MinimizesQuadratic) {
  Parameter theta("theta", Tensor(1, 1, 1.0));
  Adam adam;
  std::vector<Parameter*> ps{&theta};
  for (int i = 0; i < 100; ++i) {
    theta.grad[0] = 2.0 * theta.value[0];
    adam.step(ps, 0.1);
  }
  EXPECT_LT(std::abs(theta.value[0]), 0.1);
}

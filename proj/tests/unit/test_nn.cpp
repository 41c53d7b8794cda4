// SPDX-License-Identifier: MIT

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "nn_oracles.hpp"
#include "rpnet/error.hpp"
#include "rpnet/nn/arch.hpp"
#include "rpnet/nn/checkpoint.hpp"
#include "rpnet/nn/trainer.hpp"
#include "rpnet/rp/schemes.hpp"
#include "test_util.hpp"

using namespace rpnet;
using namespace rpnet::nn;

namespace {

const ForwardContext kTrain{true, 0, 0, 0, 0};
const ForwardContext kEval{false, 0, 0, 0, 0};

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

/// Two Gaussian blobs in 2-D centred at (-2, -2) and (2, 2).
Dataset blobs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  DenseMatrix x(n, 2);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t y = i % 2;
    const double c = y == 1 ? 2.0 : -2.0;
    x(i, 0) = c + n01(rng);
    x(i, 1) = c + n01(rng);
    d.labels.push_back(y);
  }
  d.x = std::move(x);
  return d;
}

Dataset xor_data() {
  Dataset d;
  d.x = DenseMatrix::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  d.labels = {0, 1, 1, 0};
  return d;
}

/// Sparse two-class data: class 1 shifts the first `signal` features.
Dataset sparse_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CsrMatrix base = testing::random_csr(n, d, 0.1, rng);
  CsrBuilder b(d);
  Dataset out;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint32_t y = r % 2;
    const auto idx = base.row_indices(r);
    const auto val = base.row_values(r);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      b.push(idx[t], val[t] + (y == 1 && idx[t] < d / 4 ? 1.5 : 0.0));
    }
    b.finish_row();
    out.labels.push_back(y);
  }
  out.x = std::move(b).build();
  return out;
}

}  // namespace

TEST_CASE("activation examples") {
  const Activation relu{ActivationKind::ReLU};
  CHECK(relu(-2.0) == 0.0);
  CHECK(relu(3.0) == 3.0);
  CHECK(Activation{ActivationKind::Sigmoid}(0.0) == 0.5);
  CHECK(Activation{ActivationKind::Tanh}(0.0) == 0.0);
  const Activation lrelu{ActivationKind::LReLU, 0.1};
  CHECK(lrelu(-2.0) == doctest::Approx(-0.2));
  CHECK(lrelu.derivative_from_output(-0.2) == 0.1);
  CHECK_THROWS_AS((Activation{ActivationKind::LReLU, 1.0}.validate()),
                  InvalidArgument);
  CHECK_THROWS_AS((Activation{ActivationKind::LReLU, 0.0}.validate()),
                  InvalidArgument);
  CHECK(parse_activation("lrelu:0.25").alpha == 0.25);
  CHECK(parse_activation(to_string(lrelu)) == lrelu);
  CHECK_THROWS_AS(parse_activation("softplus"), InvalidArgument);

  ActivationLayer layer(2, relu);
  const DenseMatrix y = layer.forward(DenseMatrix::from_rows({{-2, 3}}), kEval);
  CHECK(y == DenseMatrix::from_rows({{0, 3}}));
}

TEST_CASE("dense layer with identity weights is the identity") {
  DenseLayer layer(DenseMatrix::identity(3), {0, 0, 0});
  const DenseMatrix x = DenseMatrix::from_rows({{1, -2, 3}, {0.5, 0, 4}});
  CHECK(layer.forward(x, kEval) == x);
  CHECK(layer.forward_sparse(CsrMatrix::from_dense(x), kEval) == x);
  CHECK_THROWS_AS(layer.forward(DenseMatrix(1, 2), kEval), DimensionMismatch);
}

TEST_CASE("loss examples") {
  const DenseMatrix p = DenseMatrix::from_rows({{0.3}, {0.9}});
  CHECK(compute_loss(p, p, LossKind::MSE).value == 0.0);

  const auto bce = compute_loss(DenseMatrix::from_rows({{0.5}}),
                                DenseMatrix::from_rows({{1}}),
                                LossKind::BinaryCE);
  CHECK(bce.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  const auto sce = compute_loss(DenseMatrix::from_rows({{0.7, 0.7, 0.7, 0.7}}),
                                DenseMatrix::from_rows({{0, 0, 1, 0}}),
                                LossKind::SoftmaxCE);
  CHECK(sce.value == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(sce.grad(0, 2) == doctest::Approx(-0.75));

  // MSE gradient is (p - t) / m.
  const auto mse = compute_loss(DenseMatrix::from_rows({{1}, {3}}),
                                DenseMatrix::from_rows({{0}, {0}}),
                                LossKind::MSE);
  CHECK(mse.value == doctest::Approx(2.5));
  CHECK(mse.grad(1, 0) == doctest::Approx(1.5));

  CHECK_THROWS_AS(compute_loss(DenseMatrix::from_rows({{0.5}}),
                               DenseMatrix::from_rows({{0.5}}),
                               LossKind::BinaryCE),
                  InvalidArgument);
  CHECK_THROWS_AS(compute_loss(DenseMatrix(2, 1), DenseMatrix(3, 1),
                               LossKind::MSE),
                  DimensionMismatch);
  // Clamping keeps the loss finite at saturated predictions.
  const auto sat = compute_loss(DenseMatrix::from_rows({{0.0}}),
                                DenseMatrix::from_rows({{1}}),
                                LossKind::BinaryCE);
  CHECK(sat.value == doctest::Approx(-std::log(kProbClamp)));
}

TEST_CASE("sgd momentum algebra") {
  std::vector<double> theta{0.0}, v{0.0};
  const std::vector<double> g{1.0};
  sgd_momentum_update(theta, g, v, 0.1, 0.9, 0.0);
  CHECK(v[0] == doctest::Approx(-0.1));
  CHECK(theta[0] == doctest::Approx(-0.1));
  sgd_momentum_update(theta, g, v, 0.1, 0.9, 0.0);
  CHECK(v[0] == doctest::Approx(-0.19));
  CHECK(theta[0] == doctest::Approx(-0.29));

  // mu = 0 is plain SGD.
  std::vector<double> t2{1.0}, v2{5.0};
  sgd_momentum_update(t2, std::vector<double>{2.0}, v2, 0.25, 0.0, 0.0);
  CHECK(t2[0] == doctest::Approx(0.5));
}

TEST_CASE("learning-rate and momentum schedules") {
  TrainConfig c;
  c.lr0 = 0.1;
  c.epochs = 100;
  CHECK(c.ramp_epochs() == 10);
  CHECK(c.lr_at(0) == 0.1);
  CHECK(c.lr_at(10) == doctest::Approx(0.1 * std::pow(0.998, 10)));
  CHECK(c.momentum_at(0) == 0.5);
  CHECK(c.momentum_at(5) == doctest::Approx(0.7));
  CHECK(c.momentum_at(10) == doctest::Approx(0.9));
  CHECK(c.momentum_at(50) == 0.9);
  TrainConfig bad;
  bad.lr_decay = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = TrainConfig{};
  bad.momentum_max = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = TrainConfig{};
  bad.l2 = -1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK(TrainConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("batch norm examples") {
  BatchNormLayer bn(1, 1e-12);
  const DenseMatrix y = bn.forward(DenseMatrix::from_rows({{1}, {3}}), kTrain);
  CHECK(y(0, 0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(y(1, 0) == doctest::Approx(1.0).epsilon(1e-9));

  bn.gamma()[0] = 2.0;
  bn.beta()[0] = 5.0;
  const DenseMatrix z = bn.forward(DenseMatrix::from_rows({{1}, {3}}), kTrain);
  CHECK(z(0, 0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(z(1, 0) == doctest::Approx(7.0).epsilon(1e-9));

  BatchNormLayer c(2);
  c.beta() = {0.25, -4.0};
  const DenseMatrix k =
      c.forward(DenseMatrix::from_rows({{7, 7}, {7, 7}, {7, 7}}), kTrain);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(k(r, 0) == 0.25);
    CHECK(k(r, 1) == -4.0);
  }
  CHECK_THROWS_AS(c.forward(DenseMatrix(1, 2), kTrain), InvalidArgument);
  CHECK_NOTHROW(c.forward(DenseMatrix(1, 2), kEval));
  CHECK_THROWS_AS(BatchNormLayer(2, 0.0), InvalidArgument);
}

TEST_CASE("batch norm train-mode moments and running statistics") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(3.0, 4.0);
  BatchNormLayer bn(10);
  DenseMatrix x(64, 10);
  for (double& v : x.data()) v = n(rng);
  bn.forward(x, kTrain);
  const DenseMatrix& h = bn.normalized();
  for (std::size_t j = 0; j < 10; ++j) {
    double m = 0, v = 0;
    for (std::size_t r = 0; r < 64; ++r) m += h(r, j);
    m /= 64;
    for (std::size_t r = 0; r < 64; ++r) v += (h(r, j) - m) * (h(r, j) - m);
    v /= 64;
    CHECK(std::abs(m) <= 1e-7);
    CHECK(std::abs(v - 1.0) <= 1e-5);
  }
  // Running statistics converge to the batch moments; eval then
  // reproduces the train-mode output.
  for (int i = 0; i < 400; ++i) bn.forward(x, kTrain);
  const DenseMatrix train_out = bn.forward(x, kTrain);
  const DenseMatrix eval_out = bn.forward(x, kEval);
  CHECK(max_abs_diff(train_out, eval_out) < 1e-9);
}

TEST_CASE("dropout") {
  DropoutLayer keep_all(3, 1.0);
  const DenseMatrix x = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(keep_all.forward(x, kTrain) == x);
  CHECK(keep_all.forward(x, kEval) == x);

  DropoutLayer half(3, 0.5);
  CHECK(half.forward(x, kEval) == x);
  CHECK(half.forward(x, kEval) == half.forward(x, kEval));
  CHECK_THROWS_AS(DropoutLayer(3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(DropoutLayer(3, 1.5), InvalidArgument);

  // Expectation is preserved over 10^4 masks.
  DropoutLayer d(50, 0.8);
  DenseMatrix ones(1, 50);
  ones.fill(1.0);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const DenseMatrix y = d.forward(ones, {true, 11, 2, 0, s});
    total += mean_of(y.data());
  }
  CHECK(std::abs(total / 10000.0 - 1.0) < 0.02);

  // Backward reuses the mask: dropped units get exactly zero gradient.
  const DenseMatrix y = d.forward(ones, {true, 11, 2, 0, 77});
  DenseMatrix g(1, 50);
  g.fill(3.0);
  const DenseMatrix dx = d.backward(g, true);
  for (std::size_t j = 0; j < 50; ++j) {
    if (y(0, j) == 0.0) {
      CHECK(dx(0, j) == 0.0);
    } else {
      CHECK(dx(0, j) == doctest::Approx(3.0 / 0.8));
    }
  }
}

TEST_CASE("initializer statistics") {
  const DenseMatrix he = init_weights(200, 500, {InitKind::He}, 1);
  CHECK(std::abs(sample_std(he) / 0.1 - 1.0) < 0.03);

  const DenseMatrix lecun = init_weights(100, 30, {InitKind::LeCun}, 2);
  for (double v : lecun.data()) CHECK(std::abs(v) <= 0.1);
  const double xs = std::sqrt(6.0 / 130.0);
  const DenseMatrix xav = init_weights(100, 30, {InitKind::XavierSigmoid}, 3);
  const DenseMatrix xat = init_weights(100, 30, {InitKind::XavierTanh}, 3);
  double mx = 0;
  for (std::size_t i = 0; i < xav.size(); ++i) {
    CHECK(std::abs(xav.data()[i]) <= xs);
    CHECK(xat.data()[i] == doctest::Approx(4.0 * xav.data()[i]));
    mx = std::max(mx, std::abs(xav.data()[i]));
  }
  CHECK(mx > 0.9 * xs);

  for (rp::Scheme s : {rp::Scheme::Srht, rp::Scheme::Gaussian,
                       rp::Scheme::Achlioptas, rp::Scheme::Li}) {
    const DenseMatrix w = init_weights(200, 500, {InitKind::RpInit, s, 0.3}, 4);
    CHECK(std::abs(sample_std(w) / 0.1 - 1.0) < 0.03);
  }

  const CsrMatrix cs =
      rp_init_pattern(300, 40, {InitKind::RpInit, rp::Scheme::CountSketch, 0.3}, 5);
  for (std::size_t r = 0; r < cs.rows(); ++r) CHECK(cs.row_nnz(r) == 1);
  for (double v : cs.values()) CHECK((v == 0.3 || v == -0.3));
  const DenseMatrix csd =
      init_weights(300, 40, {InitKind::RpInit, rp::Scheme::CountSketch, 0.3}, 5);
  for (double v : csd.data()) CHECK((v == 0.0 || v == 0.3 || v == -0.3));

  CHECK_THROWS_AS(
      (InitScheme{InitKind::RpInit, rp::Scheme::CountSketch, 0.0}.validate()),
      InvalidArgument);
  CHECK(parse_init("rp:countsketch:0.1").cs_gamma == 0.1);
  CHECK(parse_init(to_string(InitScheme{InitKind::XavierTanh})).kind ==
        InitKind::XavierTanh);
  CHECK_THROWS_AS(parse_init("orthogonal"), InvalidArgument);
}

TEST_CASE("backprop matches central differences") {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Model m = testing::gradcheck_model(seed);
    const auto [x, t] = testing::gradcheck_batch(seed);
    const auto r = testing::gradient_check(m, x, t);
    CHECK(r.tensors == 10);
    worst = std::max(worst, r.max_rel_error);
  }
  MESSAGE("worst relative error " << worst);
  CHECK(worst <= 1e-4);
}

TEST_CASE("relu family gradients away from the kink") {
  for (Activation a : {Activation{ActivationKind::ReLU},
                       Activation{ActivationKind::LReLU, 0.2},
                       Activation{ActivationKind::Linear}}) {
    Model m(LossKind::MSE);
    m.add(std::make_unique<DenseLayer>(init_weights(3, 4, {InitKind::He}, 9),
                                       std::vector<double>(4, 0.0)));
    m.add(std::make_unique<ActivationLayer>(4, a));
    m.add(std::make_unique<DenseLayer>(init_weights(4, 2, {InitKind::He}, 10),
                                       std::vector<double>(2, 0.1)));
    const DenseMatrix x =
        DenseMatrix::from_rows({{1, -2, 0.5}, {-1, 0.3, 2}, {0.7, 0.7, -0.4}});
    const DenseMatrix t = DenseMatrix::from_rows({{1, 0}, {0, 1}, {0.5, 0.5}});
    CHECK(testing::gradient_check(m, x, t).max_rel_error < 1e-6);
  }
}

TEST_CASE("backward needs a train-mode forward") {
  DenseLayer d(2, 2);
  CHECK_THROWS_AS(d.backward(DenseMatrix(1, 2), true), InvalidArgument);
  d.forward(DenseMatrix(1, 2), kEval);
  CHECK_THROWS_AS(d.backward(DenseMatrix(1, 2), true), InvalidArgument);
  BatchNormLayer bn(2);
  CHECK_THROWS_AS(bn.backward(DenseMatrix(2, 2), true), InvalidArgument);
}

TEST_CASE("fixed RP layer never changes and exposes no parameters") {
  const Dataset data = sparse_data(200, 40, 1);
  ModelOptions opt;
  opt.rp = RpUse::Fixed;
  opt.rp_scheme = rp::Scheme::Achlioptas;
  Model m = build_model(40, parse_arch("d-16-8-1"), opt, 5);
  RpLayer* rp = m.rp_layer();
  REQUIRE(rp != nullptr);
  CHECK(rp->params().empty());
  const std::uint64_t hash0 = content_hash(rp->weights());
  const DenseMatrix out = m.forward(std::get<CsrMatrix>(data.x), true);
  m.backward(out, make_targets(data.labels, 1));
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 20;
  Trainer(m, cfg).run(data, data, nullptr);
  CHECK(content_hash(rp->weights()) == hash0);
  for (double b : rp->bias()) CHECK(b == 0.0);
}

TEST_CASE("finetuned RP layer keeps its sparsity pattern") {
  const Dataset data = sparse_data(200, 60, 2);
  ModelOptions opt;
  opt.rp = RpUse::Finetuned;
  opt.rp_scheme = rp::Scheme::CountSketch;
  Model m = build_model(60, parse_arch("d-12-8-1"), opt, 6);
  RpLayer* rp = m.rp_layer();
  const CsrMatrix w0 = rp->weights();

  // One update with eta = 1 and a non-zero gradient moves some value.
  const DenseMatrix out = m.forward(std::get<CsrMatrix>(data.x), true);
  m.backward(out, make_targets(data.labels, 1));
  auto params = m.params();
  SgdMomentum opt1;
  opt1.step(params, m.update_mask(0), 0.1, 0.0, 0.0);
  const CsrMatrix w1 = rp->weights();
  CHECK(pattern_hash(w1) == pattern_hash(w0));
  CHECK(content_hash(w1) != content_hash(w0));

  TrainConfig cfg;
  cfg.epochs = 100;
  cfg.batch_size = 50;
  Trainer(m, cfg).run(data, data, nullptr);
  const CsrMatrix w2 = rp->weights();
  CHECK(pattern_hash(w2) == pattern_hash(w0));
  CHECK(content_hash(w2) != content_hash(w1));
}

TEST_CASE("eta gate frequency and frozen velocity") {
  RpLayer layer(rp_init_pattern(20, 5, {InitKind::RpInit, rp::Scheme::Gaussian, 0.3}, 1),
                RpMode::Finetuned, 0.5, 99);
  for (std::uint64_t s = 0; s < 10000; ++s) layer.accepts_update(s);
  CHECK(layer.gate_draws() == 10000);
  const double sigma = std::sqrt(10000 * 0.25);
  CHECK(std::abs(static_cast<double>(layer.gate_accepts()) - 5000.0) <=
        3 * sigma);

  RpLayer always(rp_init_pattern(20, 5, {InitKind::RpInit, rp::Scheme::Gaussian, 0.3}, 1),
                 RpMode::Finetuned, 1.0, 99);
  for (std::uint64_t s = 0; s < 100; ++s) CHECK(always.accepts_update(s));
  CHECK_THROWS_AS(always.set_eta(0.0), InvalidArgument);

  // A skipped tensor keeps value and velocity.
  std::vector<double> a{1.0}, ga{1.0}, b{1.0}, gb{1.0};
  std::vector<ParamView> ps{{"a", a, ga, true}, {"b", b, gb, true}};
  SgdMomentum opt;
  opt.step(ps, {true, true}, 0.1, 0.9, 0.0);
  const double vb = opt.velocity()[1][0];
  const double b_before = b[0];
  opt.step(ps, {true, false}, 0.1, 0.9, 0.0);
  CHECK(b[0] == b_before);
  CHECK(opt.velocity()[1][0] == vb);
  CHECK(a[0] != b[0]);
}

TEST_CASE("pre-projected input matches on-the-fly projection") {
  for (rp::Scheme s : {rp::Scheme::Gaussian, rp::Scheme::CountSketch,
                       rp::Scheme::Srht, rp::Scheme::Li}) {
    Dataset train = sparse_data(120, 70, 3);
    Dataset test = sparse_data(50, 70, 4);
    const Dataset raw_train = train, raw_test = test;
    ModelOptions opt;
    opt.rp = RpUse::Fixed;
    opt.rp_scheme = s;
    Model m = build_model(70, parse_arch("d-24-6-1"), opt, 8);
    Dataset* others[] = {&test};
    preproject_fixed(m, train, others, std::size_t{1} << 16);
    CHECK(train.pre_projected);
    const DenseMatrix a = predict(m, raw_test);
    const DenseMatrix b = predict(m, test);
    CHECK(max_abs_diff(a, b) <= 1e-10);
    const DenseMatrix ra = m.layer(0).forward_sparse(std::get<CsrMatrix>(raw_train.x), kEval);
    CHECK(relative_frobenius_distance(ra, std::get<DenseMatrix>(train.x)) <= 1e-10);
  }
}

TEST_CASE("l2 decay touches weights only") {
  Model m(LossKind::MSE);
  m.add(std::make_unique<DenseLayer>(init_weights(4, 3, {InitKind::He}, 1),
                                     std::vector<double>{0.5, -0.5, 0.25}));
  m.add(std::make_unique<BatchNormLayer>(3));
  m.add(std::make_unique<DenseLayer>(init_weights(3, 2, {InitKind::He}, 2),
                                     std::vector<double>{1.0, 2.0}));
  const TensorSnapshot before = m.snapshot();
  // Zero data gradient: only the decay term can move anything.
  m.zero_grad();
  auto params = m.params();
  SgdMomentum opt;
  for (int i = 0; i < 10; ++i) {
    opt.step(params, std::vector<bool>(params.size(), true), 0.1, 0.5, 0.01);
  }
  const TensorSnapshot after = m.snapshot();
  const auto ts = m.tensors();
  std::size_t weights = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].name.ends_with("weight")) {
      ++weights;
      double nb = 0, na = 0;
      for (double v : before[i]) nb += v * v;
      for (double v : after[i]) na += v * v;
      CHECK(na < nb);
    } else {
      CHECK(after[i] == before[i]);
    }
  }
  CHECK(weights == 2);
}

TEST_CASE("XOR is learnable") {
  const Dataset d = xor_data();
  ModelOptions opt;
  opt.hidden = {ActivationKind::Sigmoid};
  opt.batch_norm = false;
  Model m = build_model(2, arch_preset("xor"), opt, 3);
  TrainConfig cfg;
  cfg.lr0 = 0.5;
  cfg.lr_decay = 1.0;
  cfg.batch_size = 4;
  cfg.epochs = 5000;
  const TrainHistory h = Trainer(m, cfg).run(d, d, nullptr);
  double best = 1e9;
  for (const auto& e : h.epochs) best = std::min(best, e.train_loss);
  CHECK(best < 0.01);
  CHECK(error_rate(m, d) == 0.0);
}

TEST_CASE("logistic regression separates blobs") {
  const Dataset train = blobs(2000, 1), val = blobs(500, 2), test = blobs(2000, 3);
  ModelOptions opt;
  opt.batch_norm = false;
  Model m = build_model(2, parse_arch("d-1"), opt, 4);
  CHECK(m.size() == 2);
  TrainConfig cfg;
  cfg.lr0 = 0.1;
  cfg.epochs = 20;
  cfg.batch_size = 50;
  const TrainHistory h = Trainer(m, cfg).run(train, val, &test);
  CHECK(*h.early_stop_test_error < 0.02);
  CHECK(error_rate(m, test) < 0.02);
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  const Dataset d = blobs(300, 5);
  ModelOptions opt;
  opt.batch_norm = false;
  Model m = build_model(2, parse_arch("d-6-1"), opt, 6);
  const TensorSnapshot before = m.snapshot();
  TrainConfig cfg;
  cfg.lr0 = 0.0;
  cfg.epochs = 4;
  cfg.batch_size = 32;
  const TrainHistory h = Trainer(m, cfg).run(d, d, nullptr);
  CHECK(m.snapshot() == before);
  for (const auto& e : h.epochs) {
    CHECK(e.train_loss == doctest::Approx(h.epochs[0].train_loss).epsilon(1e-12));
  }
}

TEST_CASE("early stopping bookkeeping") {
  const Dataset train = sparse_data(300, 30, 7), val = sparse_data(100, 30, 8),
                test = sparse_data(100, 30, 9);
  ModelOptions opt;
  opt.dropout_keep = 0.8;
  Model m = build_model(30, parse_arch("d-16-1"), opt, 9);
  TrainConfig cfg;
  cfg.epochs = 12;
  cfg.batch_size = 25;
  cfg.lr0 = 0.05;
  const TrainHistory h = Trainer(m, cfg).run(train, val, &test);
  REQUIRE(h.epochs.size() == 12);
  double best = 1.0;
  std::size_t arg = 0;
  for (const auto& e : h.epochs) {
    if (e.val_error < best) {
      best = e.val_error;
      arg = e.epoch;
    }
  }
  CHECK(h.best_epoch == arg);
  CHECK(h.best_val_error == best);
  CHECK(h.early_stop_test_error == h.epochs[arg].test_error);
  // The best epoch's parameters are restored.
  CHECK(error_rate(m, val) == best);
  CHECK(error_rate(m, test) == *h.early_stop_test_error);
  const std::string csv = h.to_csv();
  CHECK(csv.starts_with("epoch,train_loss,val_error,test_error,lr,momentum\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("non-finite values abort with the layer index") {
  Model m(LossKind::BinaryCE);
  m.add(std::make_unique<DenseLayer>(DenseMatrix::identity(2),
                                     std::vector<double>{0, 0}));
  m.add(std::make_unique<ActivationLayer>(2, Activation{ActivationKind::Tanh}));
  m.add(std::make_unique<DenseLayer>(DenseMatrix::from_rows({{1}, {1}}),
                                     std::vector<double>{0}));
  static_cast<DenseLayer&>(m.layer(2)).weights()(0, 0) = std::nan("");
  try {
    m.forward(DenseMatrix::from_rows({{1, 2}}), false);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("layer 2") != std::string::npos);
  }
}

TEST_CASE("model construction checks") {
  Model m;
  m.add(std::make_unique<DenseLayer>(3, 4));
  CHECK_THROWS_AS(m.add(std::make_unique<DenseLayer>(5, 1)), DimensionMismatch);
  CHECK_THROWS_AS(m.add(std::make_unique<RpLayer>(
                      rp_init_pattern(4, 2, {InitKind::RpInit, rp::Scheme::Gaussian, 0.3}, 1),
                      RpMode::Fixed)),
                  InvalidArgument);
  CHECK_THROWS_AS(m.forward_projected(DenseMatrix(1, 4), false), InvalidArgument);
}

TEST_CASE("architecture strings") {
  const ArchSpec a = parse_arch("d-1000-3000-3000-1");
  CHECK(!a.input);
  CHECK(a.widths == std::vector<std::size_t>{1000, 3000, 3000, 1});
  CHECK(a.to_string() == "d-1000-3000-3000-1");
  CHECK(*parse_arch("784-10").input == 784);
  CHECK_THROWS_AS(parse_arch("d"), InvalidArgument);
  CHECK_THROWS_AS(parse_arch("d-0-1"), InvalidArgument);
  CHECK_THROWS_AS(parse_arch("d-x-1"), InvalidArgument);
  CHECK_THROWS_AS(parse_arch("d--1"), InvalidArgument);
  CHECK(arch_preset("wide").to_string() == "d-1000-3000-3000-1");
  CHECK_THROWS_AS(arch_preset("huge"), InvalidArgument);

  ModelOptions opt;
  opt.rp = RpUse::Finetuned;
  opt.dropout_keep = 0.5;
  Model m = build_model(50, parse_arch("d-20-10-3"), opt, 1);
  // RP, BN, Dense, BN, act, dropout, Dense.
  CHECK(m.size() == 7);
  CHECK(m.loss() == LossKind::SoftmaxCE);
  CHECK(m.out_dim() == 3);
  CHECK_THROWS_AS(build_model(51, parse_arch("50-20-1"), opt, 1),
                  DimensionMismatch);
  CHECK_THROWS_AS(build_model(50, parse_arch("d-1"), opt, 1), InvalidArgument);
  CHECK(parse_rp_use("fixed") == RpUse::Fixed);
  CHECK_THROWS_AS(parse_rp_use("frozen"), InvalidArgument);
}

TEST_CASE("softmax networks train on three classes") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01(0.0, 0.5);
  DenseMatrix x(600, 2);
  Dataset d;
  const double cx[3] = {0, 3, -3}, cy[3] = {3, -2, -2};
  for (std::size_t i = 0; i < 600; ++i) {
    const std::uint32_t y = i % 3;
    x(i, 0) = cx[y] + n01(rng);
    x(i, 1) = cy[y] + n01(rng);
    d.labels.push_back(y);
  }
  d.x = std::move(x);
  ModelOptions opt;
  Model m = build_model(2, parse_arch("d-8-3"), opt, 2);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 30;
  cfg.lr0 = 0.1;
  Trainer(m, cfg).run(d, d, nullptr);
  CHECK(error_rate(m, d) < 0.02);
}

TEST_CASE("checkpoint round trip") {
  Dataset train = sparse_data(150, 40, 10), test = sparse_data(60, 40, 11);
  for (RpUse use : {RpUse::Fixed, RpUse::Finetuned, RpUse::None}) {
    Dataset tr = train, te = test;
    ModelOptions opt;
    opt.rp = use;
    opt.rp_scheme = rp::Scheme::Li;
    opt.dropout_keep = 0.9;
    Model m = build_model(40, parse_arch("d-12-6-1"), opt, 12);
    if (use == RpUse::Fixed) {
      Dataset* others[] = {&te};
      preproject_fixed(m, tr, others);
    }
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch_size = 30;
    cfg.eta = 0.5;
    Trainer t(m, cfg);
    t.run(tr, tr, &te);

    std::stringstream buf;
    write_checkpoint(buf, m, &t.state());
    Checkpoint cp = read_checkpoint(buf);
    CHECK(cp.model.size() == m.size());
    CHECK(cp.model.snapshot() == m.snapshot());
    REQUIRE(cp.state);
    CHECK(cp.state->next_epoch == 3);
    CHECK(cp.state->velocity == t.state().velocity);
    CHECK(cp.state->history.to_csv() == t.state().history.to_csv());
    // Identical predictions on raw inputs.
    CHECK(predict(cp.model, test) == predict(m, test));
    // Re-serializing is byte-identical.
    std::stringstream again;
    write_checkpoint(again, cp.model, &*cp.state);
    std::stringstream first;
    write_checkpoint(first, m, &t.state());
    CHECK(again.str() == first.str());
  }

  std::stringstream bad("RPNX");
  CHECK_THROWS_AS(read_checkpoint(bad), FormatError);
  Model m = build_model(5, parse_arch("d-3-1"), ModelOptions{}, 1);
  std::stringstream ok;
  write_checkpoint(ok, m);
  std::string s = ok.str();
  std::stringstream truncated(s.substr(0, s.size() - 5));
  CHECK_THROWS_AS(read_checkpoint(truncated), FormatError);
  std::stringstream trailing(s + "x");
  CHECK_THROWS_AS(read_checkpoint(trailing), FormatError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/model.rpnn"), IoError);
}

TEST_CASE("resuming from a mid-run checkpoint is exact") {
  const Dataset train = sparse_data(160, 30, 12), val = sparse_data(60, 30, 13);
  ModelOptions opt;
  opt.rp = RpUse::Finetuned;
  opt.rp_scheme = rp::Scheme::CountSketch;
  opt.dropout_keep = 0.8;
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 20;
  cfg.eta = 0.6;

  Model straight = build_model(30, parse_arch("d-10-8-1"), opt, 14);
  std::string saved;
  Trainer t1(straight, cfg);
  const TrainHistory h1 = t1.run(train, val, nullptr, [&](const Trainer& t) {
    if (t.state().next_epoch == 2) {
      std::stringstream s;
      write_checkpoint(s, t.model(), &t.state());
      saved = s.str();
    }
  });

  std::stringstream in(saved);
  Checkpoint cp = read_checkpoint(in);
  Trainer t2(cp.model, cfg);
  t2.set_state(*cp.state);
  const TrainHistory h2 = t2.run(train, val, nullptr);
  CHECK(h2.to_csv() == h1.to_csv());
  CHECK(cp.model.snapshot() == straight.snapshot());
}

TEST_CASE("split indices") {
  const auto [a, b] = split_indices(100, 0.2, 3);
  CHECK(a.size() == 80);
  CHECK(b.size() == 20);
  std::set<std::size_t> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  CHECK(all.size() == 100);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(split_indices(100, 0.2, 3) == split_indices(100, 0.2, 3));
  CHECK(split_indices(100, 0.2, 3) != split_indices(100, 0.2, 4));
  CHECK_THROWS_AS(split_indices(10, 1.5, 1), InvalidArgument);
}

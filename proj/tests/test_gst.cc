// tests/test_gst.cc

// Copyright 2026  xclone authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ad/optim.h"
#include "ad/params.h"
#include "ad/tape.h"
#include "base/error.h"
#include "base/rng.h"
#include "gst/gst.h"
#include "oracles.h"

using namespace xclone;
using gst::GstConfig;

namespace {

// Small config so finite differences stay cheap.
GstConfig small_cfg() {
  GstConfig cfg;
  cfg.n_tokens = 6;
  cfg.n_heads = 2;
  cfg.token_dim = 8;
  cfg.style_dim = 6;
  cfg.n_mels = 10;
  cfg.ref_conv_channels = 5;
  cfg.ref_gru_dim = 7;
  return cfg;
}

Tensor random_mel(int64_t frames, int64_t n_mels, uint64_t seed) {
  Rng rng(seed);
  return Tensor::randn({frames, n_mels}, &rng, 1.0);
}

dsp::MelSpectrogram as_mel(const Tensor& frames) {
  dsp::MelSpectrogram mel;
  mel.frames = frames;
  mel.cfg.n_mels = frames.cols();
  return mel;
}

// Raw-loop attention oracle: query [1,q] against the stored projections.
Tensor attention_oracle(const ad::ParamStore& params, const GstConfig& cfg,
                        const Tensor& query) {
  const Tensor& tokens = params.get("gst.tokens");
  const Tensor& wq = params.get("gst.wq");
  const Tensor& wk = params.get("gst.wk");
  const int64_t K = cfg.n_tokens, dk = cfg.key_dim();
  std::vector<double> qp(cfg.token_dim, 0.0);
  for (int64_t j = 0; j < cfg.token_dim; ++j)
    for (int64_t i = 0; i < cfg.ref_gru_dim; ++i)
      qp[j] += query.at(0, i) * wq.at(i, j);
  Tensor kp({K, cfg.token_dim});
  for (int64_t k = 0; k < K; ++k)
    for (int64_t j = 0; j < cfg.token_dim; ++j)
      for (int64_t i = 0; i < cfg.token_dim; ++i)
        kp.at(k, j) += tokens.at(k, i) * wk.at(i, j);
  Tensor out({cfg.n_heads, K});
  for (int64_t h = 0; h < cfg.n_heads; ++h) {
    std::vector<double> logits(K, 0.0);
    double mx = -1e300;
    for (int64_t k = 0; k < K; ++k) {
      for (int64_t c = 0; c < dk; ++c)
        logits[k] += qp[h * dk + c] * kp.at(k, h * dk + c);
      logits[k] /= std::sqrt(static_cast<double>(dk));
      mx = std::max(mx, logits[k]);
    }
    double denom = 0.0;
    for (int64_t k = 0; k < K; ++k) denom += std::exp(logits[k] - mx);
    for (int64_t k = 0; k < K; ++k) out.at(h, k) = std::exp(logits[k] - mx) / denom;
  }
  return out;
}

}  // namespace

TEST_CASE("style embedding is deterministic and input-sensitive") {
  const GstConfig cfg = small_cfg();
  const ad::ParamStore params = gst::init_gst(cfg, 3);
  const Tensor frames = random_mel(24, cfg.n_mels, 100);
  const Tensor z1 = gst::style_embedding(as_mel(frames), params, cfg);
  const Tensor z2 = gst::style_embedding(as_mel(frames), params, cfg);
  REQUIRE(z1.numel() == cfg.style_dim);
  for (int64_t i = 0; i < z1.numel(); ++i) CHECK(z1.raw()[i] == z2.raw()[i]);
  for (double v : z1.raw()) CHECK(std::isfinite(v));

  const Tensor other = random_mel(24, cfg.n_mels, 101);
  const Tensor z3 = gst::style_embedding(as_mel(other), params, cfg);
  double diff = 0.0;
  for (int64_t i = 0; i < z1.numel(); ++i)
    diff = std::max(diff, std::fabs(z1.raw()[i] - z3.raw()[i]));
  CHECK(diff > 1e-12);
}

TEST_CASE("attention rows are simplex weights") {
  const GstConfig cfg = small_cfg();
  const ad::ParamStore params = gst::init_gst(cfg, 4);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(200 + seed);
    const Tensor query = Tensor::randn({1, cfg.ref_gru_dim}, &rng, 2.0);
    ad::Tape tape;
    const ad::VarMap vars = params.leaves(&tape, false);
    const Tensor att =
        tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(query)));
    REQUIRE(att.rows() == cfg.n_heads);
    REQUIRE(att.cols() == cfg.n_tokens);
    for (int64_t h = 0; h < att.rows(); ++h) {
      double sum = 0.0;
      for (int64_t k = 0; k < att.cols(); ++k) {
        CHECK(att.at(h, k) >= 0.0);
        sum += att.at(h, k);
      }
      CHECK(std::fabs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("attention matches the raw-loop oracle") {
  const GstConfig cfg = small_cfg();
  const ad::ParamStore params = gst::init_gst(cfg, 5);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(300 + seed);
    const Tensor query = Tensor::randn({1, cfg.ref_gru_dim}, &rng, 1.5);
    ad::Tape tape;
    const ad::VarMap vars = params.leaves(&tape, false);
    const Tensor att =
        tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(query)));
    const Tensor want = attention_oracle(params, cfg, query);
    for (int64_t h = 0; h < cfg.n_heads; ++h)
      for (int64_t k = 0; k < cfg.n_tokens; ++k)
        CHECK(std::fabs(att.at(h, k) - want.at(h, k)) <= 1e-12);
  }
}

TEST_CASE("a single token takes all the attention and defines z") {
  GstConfig cfg = small_cfg();
  cfg.n_tokens = 1;
  const ad::ParamStore params = gst::init_gst(cfg, 6);
  Rng rng(77);
  const Tensor query = Tensor::randn({1, cfg.ref_gru_dim}, &rng, 3.0);
  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape, false);
  const Tensor att =
      tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(query)));
  for (int64_t h = 0; h < cfg.n_heads; ++h) CHECK(att.at(h, 0) == 1.0);

  // z equals the token's projected value regardless of the query.
  const Tensor frames = random_mel(17, cfg.n_mels, 102);
  const Tensor z = gst::style_embedding(as_mel(frames), params, cfg);
  const Tensor& tokens = params.get("gst.tokens");
  const Tensor& wv = params.get("gst.wv");
  for (int64_t j = 0; j < cfg.style_dim; ++j) {
    double want = 0.0;
    for (int64_t i = 0; i < cfg.token_dim; ++i) want += tokens.at(0, i) * wv.at(i, j);
    CHECK(std::fabs(z.raw()[j] - want) <= 1e-15);
  }
}

TEST_CASE("identical token keys give uniform weights") {
  const GstConfig cfg = small_cfg();
  ad::ParamStore params = gst::init_gst(cfg, 7);
  Tensor& tokens = params.get("gst.tokens");
  for (int64_t k = 1; k < cfg.n_tokens; ++k)
    for (int64_t j = 0; j < cfg.token_dim; ++j) tokens.at(k, j) = tokens.at(0, j);
  Rng rng(78);
  const Tensor query = Tensor::randn({1, cfg.ref_gru_dim}, &rng, 2.0);
  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape, false);
  const Tensor att =
      tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(query)));
  const double uniform = 1.0 / static_cast<double>(cfg.n_tokens);
  for (int64_t h = 0; h < cfg.n_heads; ++h)
    for (int64_t k = 0; k < cfg.n_tokens; ++k)
      CHECK(std::fabs(att.at(h, k) - uniform) <= 1e-12);
}

TEST_CASE("scaling the query preserves each head's argmax") {
  const GstConfig cfg = small_cfg();
  const ad::ParamStore params = gst::init_gst(cfg, 8);
  for (uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(400 + seed);
    Tensor query = Tensor::randn({1, cfg.ref_gru_dim}, &rng, 1.0);
    Tensor scaled = query;
    for (double& v : scaled.raw()) v *= 7.3;
    ad::Tape tape;
    const ad::VarMap vars = params.leaves(&tape, false);
    const Tensor a =
        tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(query)));
    const Tensor b =
        tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(scaled)));
    for (int64_t h = 0; h < cfg.n_heads; ++h) {
      int64_t arg_a = 0, arg_b = 0;
      for (int64_t k = 1; k < cfg.n_tokens; ++k) {
        if (a.at(h, k) > a.at(h, arg_a)) arg_a = k;
        if (b.at(h, k) > b.at(h, arg_b)) arg_b = k;
      }
      CHECK(arg_a == arg_b);
    }
  }
}

TEST_CASE("query aligned with one orthogonal key saturates its weight") {
  GstConfig cfg;
  cfg.n_tokens = 4;
  cfg.n_heads = 1;
  cfg.token_dim = 4;
  cfg.style_dim = 4;
  cfg.n_mels = 6;
  cfg.ref_conv_channels = 3;
  cfg.ref_gru_dim = 4;
  ad::ParamStore params = gst::init_gst(cfg, 9);
  // Identity projections, orthonormal token keys.
  Tensor eye({4, 4});
  for (int64_t i = 0; i < 4; ++i) eye.at(i, i) = 1.0;
  params.get("gst.wq") = eye;
  params.get("gst.wk") = eye;
  params.get("gst.tokens") = eye;

  const double scale = 20.0;
  Tensor query({1, 4});
  query.at(0, 2) = scale;
  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape, false);
  const Tensor att =
      tape.value(gst::attention_weights(&tape, vars, cfg, tape.constant(query)));
  // logit = scale/sqrt(dk) on the aligned token, 0 elsewhere.
  const double hot = std::exp(scale / 2.0);
  const double want = hot / (hot + 3.0);
  CHECK(att.at(0, 2) > 0.99);
  CHECK(std::fabs(att.at(0, 2) - want) <= 1e-12);
}

TEST_CASE("z is the convex mix of projected token values per head") {
  const GstConfig cfg = small_cfg();
  const ad::ParamStore params = gst::init_gst(cfg, 10);
  const Tensor frames = random_mel(21, cfg.n_mels, 103);

  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape, false);
  ad::Var mel = tape.constant(frames);
  ad::Var query = gst::ref_query(&tape, vars, cfg, mel);
  const Tensor att =
      tape.value(gst::attention_weights(&tape, vars, cfg, query));
  const Tensor z = tape.value(gst::style_embedding_var(&tape, vars, cfg, mel));

  // Projected values by raw loops.
  const Tensor& tokens = params.get("gst.tokens");
  const Tensor& wv = params.get("gst.wv");
  Tensor vp({cfg.n_tokens, cfg.style_dim});
  for (int64_t k = 0; k < cfg.n_tokens; ++k)
    for (int64_t j = 0; j < cfg.style_dim; ++j)
      for (int64_t i = 0; i < cfg.token_dim; ++i)
        vp.at(k, j) += tokens.at(k, i) * wv.at(i, j);

  const int64_t dv = cfg.value_dim();
  for (int64_t h = 0; h < cfg.n_heads; ++h) {
    for (int64_t c = 0; c < dv; ++c) {
      const int64_t col = h * dv + c;
      double mix = 0.0, lo = 1e300, hi = -1e300;
      for (int64_t k = 0; k < cfg.n_tokens; ++k) {
        mix += att.at(h, k) * vp.at(k, col);
        lo = std::min(lo, vp.at(k, col));
        hi = std::max(hi, vp.at(k, col));
      }
      CHECK(std::fabs(z.at(0, col) - mix) <= 1e-12);
      // Convex-hull bound coordinate-wise.
      CHECK(z.at(0, col) >= lo - 1e-12);
      CHECK(z.at(0, col) <= hi + 1e-12);
    }
  }
}

TEST_CASE("style path gradients check against finite differences") {
  GstConfig cfg = small_cfg();
  cfg.n_tokens = 3;
  cfg.token_dim = 4;
  cfg.style_dim = 4;
  cfg.n_mels = 4;
  cfg.ref_conv_channels = 3;
  cfg.ref_gru_dim = 4;
  const ad::ParamStore params = gst::init_gst(cfg, 11);
  const Tensor frames = random_mel(9, cfg.n_mels, 104);

  // Leaves under test: tokens and the three projections; the rest constant.
  const std::vector<std::string> names = {"gst.tokens", "gst.wq", "gst.wk",
                                          "gst.wv"};
  std::vector<Tensor> inputs;
  for (const std::string& n : names) inputs.push_back(params.get(n));

  oracle::GraphFn fn = [&](ad::Tape* tape, const std::vector<ad::Var>& leaves) {
    ad::VarMap vars = params.leaves(tape, false);
    for (size_t i = 0; i < names.size(); ++i) vars[names[i]] = leaves[i];
    return ad::sum(gst::style_embedding_var(tape, vars, cfg,
                                            tape->constant(frames)));
  };
  const oracle::FdReport rep = oracle::fd_check(fn, inputs);
  CHECK(rep.max_rel_err < 1e-3);
}

TEST_CASE("one training step moves the token bank") {
  const GstConfig cfg = small_cfg();
  ad::ParamStore params = gst::init_gst(cfg, 12);
  const Tensor before = params.get("gst.tokens");
  const Tensor frames = random_mel(19, cfg.n_mels, 105);

  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape);
  ad::Var z = gst::style_embedding_var(&tape, vars, cfg, tape.constant(frames));
  ad::Var loss = ad::sum_sq(z);
  tape.backward(loss);
  const ad::GradMap grads = ad::ParamStore::collect_grads(tape, vars);

  double gnorm = 0.0;
  for (double g : grads.at("gst.tokens").raw()) gnorm += g * g;
  CHECK(gnorm > 0.0);

  ad::AdamState adam;
  ad::sgd_adaptive_step(&params, grads, 1e-2, &adam);
  double moved = 0.0;
  const Tensor& after = params.get("gst.tokens");
  for (int64_t i = 0; i < before.numel(); ++i)
    moved = std::max(moved, std::fabs(after.raw()[i] - before.raw()[i]));
  CHECK(moved > 0.0);
}

TEST_CASE("bad configs and inputs are rejected") {
  GstConfig bad = small_cfg();
  bad.token_dim = 9;  // not divisible by 2 heads
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = small_cfg();
  bad.style_dim = 7;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = small_cfg();
  bad.n_tokens = 0;
  CHECK_THROWS_AS(bad.validate(), DataError);

  const GstConfig cfg = small_cfg();
  const ad::ParamStore params = gst::init_gst(cfg, 13);
  CHECK_THROWS_AS(
      gst::style_embedding(as_mel(Tensor({0, cfg.n_mels})), params, cfg),
      DataError);
  CHECK_THROWS_AS(
      gst::style_embedding(as_mel(random_mel(9, cfg.n_mels + 1, 1)), params, cfg),
      ShapeError);
  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape, false);
  Rng rng(79);
  const Tensor bad_query = Tensor::randn({1, cfg.ref_gru_dim + 2}, &rng, 1.0);
  CHECK_THROWS_AS(
      gst::attention_weights(&tape, vars, cfg, tape.constant(bad_query)),
      ShapeError);
}

// src/gst/gst.cc

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

#include "gst/gst.h"

#include <cmath>

#include "base/error.h"
#include "base/rng.h"
#include "nn/nn.h"

namespace xclone {
namespace gst {

namespace {

constexpr int64_t kConvKernel = 3;
constexpr int64_t kConvStride = 2;
constexpr int64_t kConvPad = 1;

}  // namespace

void GstConfig::validate() const {
  XC_CHECK(n_tokens >= 1, "need at least one style token");
  XC_CHECK(n_heads >= 1, "need at least one attention head");
  XC_CHECK(token_dim >= 1 && style_dim >= 1 && n_mels >= 1 &&
               ref_conv_channels >= 1 && ref_gru_dim >= 1,
           "gst dims must be positive");
  XC_CHECK(token_dim % n_heads == 0,
           "token_dim " << token_dim << " not divisible by " << n_heads << " heads");
  XC_CHECK(style_dim % n_heads == 0,
           "style_dim " << style_dim << " not divisible by " << n_heads << " heads");
}

ad::ParamStore init_gst(const GstConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(Rng::derive(seed, "gst-init"));
  ad::ParamStore store;
  store.create("gst.tokens", Tensor::randn({cfg.n_tokens, cfg.token_dim}, &rng, 0.5));
  // Bias-free projections keep attention logits linear in the query.
  store.create("gst.wq",
               Tensor::randn({cfg.ref_gru_dim, cfg.token_dim}, &rng,
                             1.0 / std::sqrt(static_cast<double>(cfg.ref_gru_dim))));
  store.create("gst.wk",
               Tensor::randn({cfg.token_dim, cfg.token_dim}, &rng,
                             1.0 / std::sqrt(static_cast<double>(cfg.token_dim))));
  store.create("gst.wv",
               Tensor::randn({cfg.token_dim, cfg.style_dim}, &rng,
                             1.0 / std::sqrt(static_cast<double>(cfg.token_dim))));
  nn::add_conv1d(&store, "gst.conv0", kConvKernel, cfg.n_mels,
                 cfg.ref_conv_channels, &rng);
  nn::add_conv1d(&store, "gst.conv1", kConvKernel, cfg.ref_conv_channels,
                 cfg.ref_conv_channels, &rng);
  nn::add_gru(&store, "gst.gru", cfg.ref_conv_channels, cfg.ref_gru_dim, &rng);
  return store;
}

ad::Var ref_query(ad::Tape* tape, const ad::VarMap& vars, const GstConfig& cfg,
                  ad::Var mel) {
  const Tensor& mv = tape->value(mel);
  XC_CHECK(mv.ndim() == 2 && mv.rows() >= 1, "reference mel is empty");
  XC_SHAPE_CHECK(mv.cols() == cfg.n_mels,
                 "reference mel has " << mv.cols() << " channels, expected "
                                      << cfg.n_mels);
  ad::Var h = mel;
  for (const char* prefix : {"gst.conv0", "gst.conv1"})
    h = ad::relu(ad::conv1d(h, vars.at(std::string(prefix) + ".w"),
                            vars.at(std::string(prefix) + ".b"), kConvKernel,
                            kConvStride, kConvPad));
  ad::Var states = nn::gru_sequence(tape, vars, "gst.gru", h, cfg.ref_gru_dim);
  const int64_t last = tape->value(states).rows() - 1;
  return ad::slice_rows(states, last, last + 1);
}

ad::Var attention_weights(ad::Tape* tape, const ad::VarMap& vars,
                          const GstConfig& cfg, ad::Var query) {
  const Tensor& qv = tape->value(query);
  XC_SHAPE_CHECK(qv.ndim() == 2 && qv.rows() == 1 && qv.cols() == cfg.ref_gru_dim,
                 "query must be [1, " << cfg.ref_gru_dim << "]");
  const int64_t dk = cfg.key_dim();
  ad::Var qp = ad::matmul(query, vars.at("gst.wq"));            // [1, token_dim]
  ad::Var kp = ad::matmul(vars.at("gst.tokens"), vars.at("gst.wk"));  // [K, token_dim]
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<ad::Var> rows;
  rows.reserve(cfg.n_heads);
  for (int64_t head = 0; head < cfg.n_heads; ++head) {
    ad::Var qh = ad::slice_cols(qp, head * dk, (head + 1) * dk);
    ad::Var kh = ad::slice_cols(kp, head * dk, (head + 1) * dk);
    ad::Var logits = ad::scale(ad::matmul(qh, ad::transpose(kh)), scale);
    rows.push_back(ad::softmax_rows(logits));
  }
  return ad::concat_rows(rows);
}

ad::Var style_embedding_var(ad::Tape* tape, const ad::VarMap& vars,
                            const GstConfig& cfg, ad::Var mel) {
  ad::Var att = attention_weights(tape, vars, cfg, ref_query(tape, vars, cfg, mel));
  ad::Var vp = ad::matmul(vars.at("gst.tokens"), vars.at("gst.wv"));  // [K, style_dim]
  const int64_t dv = cfg.value_dim();
  std::vector<ad::Var> parts;
  parts.reserve(cfg.n_heads);
  for (int64_t head = 0; head < cfg.n_heads; ++head) {
    ad::Var weights = ad::slice_rows(att, head, head + 1);    // [1, K]
    ad::Var values = ad::slice_cols(vp, head * dv, (head + 1) * dv);
    parts.push_back(ad::matmul(weights, values));             // convex mix
  }
  return ad::concat_cols(parts);
}

Tensor style_embedding(const dsp::MelSpectrogram& mel,
                       const ad::ParamStore& params, const GstConfig& cfg) {
  cfg.validate();
  XC_CHECK(mel.num_frames() >= 1, "reference mel is empty");
  ad::Tape tape;
  const ad::VarMap vars = params.leaves(&tape, false);
  ad::Var z = style_embedding_var(&tape, vars, cfg, tape.constant(mel.frames));
  Tensor out({cfg.style_dim});
  out.raw() = tape.value(z).raw();
  return out;
}

}  // namespace gst
}  // namespace xclone

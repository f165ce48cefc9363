// src/gst/gst.h

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

// Global style tokens: a learnable token dictionary queried through
// multi-head attention by a reference encoder summarizing a mel
// spectrogram; the attention-mixed token values are the style embedding.

#ifndef XCLONE_GST_GST_H_
#define XCLONE_GST_GST_H_

#include <cstdint>

#include "ad/params.h"
#include "ad/tape.h"
#include "base/tensor.h"
#include "dsp/mel.h"

namespace xclone {
namespace gst {

struct GstConfig {
  int64_t n_tokens = 10;
  int64_t n_heads = 4;
  int64_t token_dim = 32;  // raw token width; split across heads for keys
  int64_t style_dim = 32;  // embedding width; split across heads for values
  int64_t n_mels = 80;     // reference encoder input width
  int64_t ref_conv_channels = 16;
  int64_t ref_gru_dim = 32;  // query width
  void validate() const;
  int64_t key_dim() const { return token_dim / n_heads; }
  int64_t value_dim() const { return style_dim / n_heads; }
};

// Parameters under "gst.": tokens [K, token_dim] ~ N(0, 0.5^2); bias-free
// attention projections wq [ref_gru_dim, token_dim], wk [token_dim,
// token_dim], wv [token_dim, style_dim]; two stride-2 convolutions
// "gst.conv0"/"gst.conv1" and one recurrence "gst.gru" for the reference
// encoder.
ad::ParamStore init_gst(const GstConfig& cfg, uint64_t seed);

// Reference encoder: conv(k=3, stride 2, pad 1) -> relu, twice, then the
// last state of a recurrence over the downsampled frames.  [1, ref_gru_dim].
ad::Var ref_query(ad::Tape* tape, const ad::VarMap& vars, const GstConfig& cfg,
                  ad::Var mel);

// Per-head softmax over scaled key dot products, [n_heads, K]; each row
// is nonnegative and sums to 1.  query is [1, ref_gru_dim].
ad::Var attention_weights(ad::Tape* tape, const ad::VarMap& vars,
                          const GstConfig& cfg, ad::Var query);

// Differentiable style embedding [1, style_dim]: per head the attention-
// weighted sum of projected token values, heads concatenated.
ad::Var style_embedding_var(ad::Tape* tape, const ad::VarMap& vars,
                            const GstConfig& cfg, ad::Var mel);

// Convenience wrapper over a frozen parameter store.
Tensor style_embedding(const dsp::MelSpectrogram& mel,
                       const ad::ParamStore& params, const GstConfig& cfg);

}  // namespace gst
}  // namespace xclone

#endif  // XCLONE_GST_GST_H_

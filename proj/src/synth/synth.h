// src/synth/synth.h

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

// Sequence-to-sequence mel synthesizer g(t, s, f0, z; W): symbol encoder
// whose outputs are concatenated with the speaker and style embeddings at
// every step, and an autoregressive decoder with content+location attention
// consuming the previous mel frame (plus the pitch contour when enabled).
// The attention map doubles as the rhythm latent; supplying it at inference
// hard-conditions the alignment.

#ifndef XCLONE_SYNTH_SYNTH_H_
#define XCLONE_SYNTH_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ad/params.h"
#include "ad/tape.h"
#include "base/tensor.h"
#include "corpus/corpus.h"
#include "dsp/mel.h"
#include "dsp/wav.h"
#include "gst/gst.h"
#include "speaker/speaker.h"
#include "yin/yin.h"

namespace xclone {
namespace synth {

struct SynthConfig {
  int64_t n_symbols = corpus::kNumSymbols;
  int64_t embed_dim = 16;
  int64_t enc_dim = 32;      // encoder recurrence width
  int64_t att_dim = 32;      // attention tanh space
  int64_t loc_channels = 8;  // location-feature channels
  int64_t loc_kernel = 9;    // odd, so alignment length is preserved
  int64_t prenet_dim = 32;
  int64_t dec_dim = 64;  // decoder recurrence width
  int64_t n_mels = 80;
  int64_t speaker_dim = 32;
  bool pitch_conditioning = true;  // off = style-tokens-only baseline
  int64_t max_decoder_steps = 2000;
  gst::GstConfig gst;  // style branch; gst.n_mels must equal n_mels
  void validate() const;
  int64_t memory_dim() const { return enc_dim + speaker_dim + gst.style_dim; }
  int64_t pitch_channels() const { return pitch_conditioning ? 2 : 0; }
};

// Trained synthesizer: parameters plus the scalar log-mel normalization the
// model was trained in.  Outputs are denormalized back to log-mel space.
struct SynthModel {
  SynthConfig cfg;
  ad::ParamStore params;  // "synth.*" and "gst.*"
  double mel_mean = 0.0;
  double mel_std = 1.0;
};

struct SynthTrainConfig {
  int64_t iterations = 2000;
  double learning_rate = 1e-3;
  uint64_t seed = 1;
  std::string checkpoint_path;  // written after training when non-empty
};

struct SynthTrainReport {
  std::vector<double> loss_trace;
};

enum class AdaptMode { kWhole, kDecoder };

struct AdaptConfig {
  int64_t iterations = 150;     // supported fine-tuning range is 100-200
  double learning_rate = 1e-4;  // fine-tuning rate from the source recipe
  uint64_t seed = 1;
};

// One (text, audio) pair for adaptation.
struct AdaptSample {
  std::vector<int> symbols;
  dsp::Waveform wave;
};

// Teacher-forcing example: normalized target mel, per-frame pitch features
// (log-f0 + voicing flag), and the frozen speaker embedding.
struct SynthExample {
  std::vector<int> symbols;
  Tensor mel;      // [T, n_mels], normalized
  Tensor pitch;    // [T, 2]
  Tensor speaker;  // [1, speaker_dim]
};

// 80-channel analysis settings shared by training targets and GST queries.
dsp::MelConfig synth_mel_config(const SynthConfig& cfg);

// Parameters: "synth.embed" [n_symbols, embed_dim]; "synth.enc" recurrence;
// attention "synth.att.{wq,wmem,wloc,b,v}" + location convolution
// "synth.att.conv"; "synth.prenet"; "synth.dec"; "synth.out"; plus the
// style-token branch under "gst.".
ad::ParamStore init_synth(const SynthConfig& cfg, uint64_t seed);

// Encoder-side parameters (symbol embedding, encoder recurrence, style
// tokens) stay frozen in decoder-only adaptation; the rest is decoder-side.
bool is_encoder_param(const std::string& name);

// [T, 2] log-f0/voicing features on the decoder clock, nearest-frame lookup.
Tensor pitch_features(const yin::PitchContour& contour, int64_t n_steps);

// Mean squared error (normalized mel space) of teacher-forced decoding,
// averaged over the batch; the style embedding is recomputed from each
// target mel so gradients reach the token bank.
ad::Var training_loss(ad::Tape* tape, const ad::VarMap& vars,
                      const SynthConfig& cfg,
                      const std::vector<SynthExample>& batch);

// Style embedding of an (unnormalized) log-mel under the model's stats.
Tensor style_from_mel(const SynthModel& model, const dsp::MelSpectrogram& mel);

// Free-running synthesis; the contour length sets the step count.  When
// rhythm (rows [steps x encoded symbols]) is given, attention is replaced
// by its rows.  With pitch conditioning off the contour values are ignored
// (only its length is used).
dsp::MelSpectrogram synthesize(const SynthModel& model,
                               const std::vector<int>& symbols,
                               const Tensor& speaker_emb,
                               const yin::PitchContour& f0, const Tensor& style,
                               const Tensor* rhythm = nullptr);

// Teacher-forced pass returning the attention map [mel frames x symbols].
Tensor forced_align(const SynthModel& model, const std::vector<int>& symbols,
                    const dsp::MelSpectrogram& mel, const Tensor& speaker_emb,
                    const yin::PitchContour& f0, const Tensor& style);

// Trains from the corpus train split with a frozen speaker encoder.
SynthModel train_synth(const corpus::Corpus& corpus,
                       const ad::ParamStore& speaker_params,
                       const speaker::SpeakerEncoderConfig& speaker_cfg,
                       const SynthConfig& cfg, const SynthTrainConfig& tcfg,
                       SynthTrainReport* report);

// Fine-tunes on 1-20 samples; mode kDecoder leaves encoder-side parameter
// tensors byte-identical.
SynthModel adapt(const SynthModel& model, const std::vector<AdaptSample>& samples,
                 AdaptMode mode, const AdaptConfig& acfg,
                 const ad::ParamStore& speaker_params,
                 const speaker::SpeakerEncoderConfig& speaker_cfg);

// Checkpoint IO carrying the config and mel statistics in the metadata.
void save_synth(const std::string& path, const SynthModel& model);
SynthModel load_synth(const std::string& path);

}  // namespace synth
}  // namespace xclone

#endif  // XCLONE_SYNTH_SYNTH_H_

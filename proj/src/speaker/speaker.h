// src/speaker/speaker.h

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

#ifndef XCLONE_SPEAKER_SPEAKER_H_
#define XCLONE_SPEAKER_SPEAKER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ad/params.h"
#include "ad/tape.h"
#include "base/tensor.h"
#include "corpus/corpus.h"
#include "dsp/mel.h"
#include "metrics/metrics.h"

namespace xclone {
namespace speaker {

struct SpeakerEncoderConfig {
  int64_t n_recurrent_layers = 3;
  int64_t cells_per_layer = 32;  // paper-scale preset: 256
  int64_t embedding_dim = 32;    // paper-scale preset: 256
  int64_t input_mels = 40;
  double segment_ms = 1600.0;
  double overlap_ms = 1000.0;
  void validate() const;  // overlap < segment; dims >= 1

  // Segment geometry at a given mel frame rate.
  int64_t segment_frames(double frames_per_second) const;
  int64_t step_frames(double frames_per_second) const;
};

// Parameters: "spk.gru<L>.{wi,wh,bi,bh}" per layer plus "spk.proj.{w,b}".
ad::ParamStore init_speaker_encoder(const SpeakerEncoderConfig& cfg, uint64_t seed);

// Mel statistics normalization shared by training and inference: subtracts
// the scalar mean of all log-mel entries, which makes embeddings exactly
// invariant to a constant log-offset (global waveform gain).
Tensor normalize_mel(const Tensor& mel_frames);

// Encodes one already-normalized segment [T,input_mels]: stacked recurrent
// layers, last frame's top-layer state, linear projection, L2 norm.
// Returns a unit-norm [embedding_dim] vector.
ad::Var encode_segment(ad::Tape* tape, const ad::VarMap& vars,
                       const SpeakerEncoderConfig& cfg, ad::Var mel_segment);

// Inference: splits the utterance into segment_ms windows with overlap_ms
// overlap (one unpadded variable-length window when shorter), encodes each,
// averages the unit embeddings and re-normalizes.  Rejects empty mels.
Tensor embed_utterance(const dsp::MelSpectrogram& mel, const ad::ParamStore& params,
                       const SpeakerEncoderConfig& cfg);

// Component-wise mean followed by L2 normalization; rejects an empty list
// and a (near-)zero mean.
Tensor aggregate_embeddings(const std::vector<Tensor>& embeddings);

// Checkpoint with enough metadata to rebuild the config on load; extra
// entries (training provenance) ride along untouched.
struct SpeakerEncoderCheckpoint {
  SpeakerEncoderConfig cfg;
  ad::ParamStore params;
};
void save_speaker_encoder(const std::string& path, const ad::ParamStore& params,
                          const SpeakerEncoderConfig& cfg,
                          const std::map<std::string, std::string>& extra = {});
SpeakerEncoderCheckpoint load_speaker_encoder(const std::string& path);

// Generalized end-to-end verification similarities: embeddings are N*M
// unit rows in speaker-major order; entry [(j,i), k] = w*cos(e_ji, c_k)+b
// where the own-speaker centroid excludes e_ji.  w is checked positive.
ad::Var ge2e_similarities(ad::Tape* tape, ad::Var embeddings, int64_t n_speakers,
                          int64_t m_utterances, ad::Var w, ad::Var b);

// Softmax cross-entropy of each row against its own speaker, summed.
ad::Var ge2e_loss(ad::Tape* tape, ad::Var embeddings, int64_t n_speakers,
                  int64_t m_utterances, ad::Var w, ad::Var b);

struct SpeakerTrainConfig {
  int64_t iterations = 300;
  int64_t speakers_per_batch = 4;
  int64_t utterances_per_speaker = 4;
  double learning_rate = 5e-3;
  uint64_t seed = 1;
  std::string checkpoint_path;  // trained params written here when non-empty
};

struct SpeakerTrainReport {
  std::vector<double> loss_trace;
  double val_eer_before = -1.0;
  double val_eer_after = -1.0;
};

// Trains on the corpus train split with GE2E batches; evaluates pairwise
// verification EER on the val split before and after.  Requires >= 2
// speakers with >= 2 train utterances each.
ad::ParamStore train_speaker_encoder(const corpus::Corpus& corpus,
                                     const SpeakerEncoderConfig& cfg,
                                     const SpeakerTrainConfig& tcfg,
                                     SpeakerTrainReport* report);

// Mel configuration the encoder consumes (40 channels over the shared
// frame geometry).
dsp::MelConfig encoder_mel_config(const SpeakerEncoderConfig& cfg);

// All same-speaker pairs as genuine scores, all cross-speaker pairs as
// impostor scores (cosine similarity).
metrics::ScoreSet pairwise_scores(
    const std::vector<std::vector<Tensor>>& per_speaker_embeddings);

// Enrollment protocol: the first n_enroll embeddings per speaker form an
// aggregated voiceprint; remaining embeddings score against every
// voiceprint (own -> genuine, others -> impostor).
metrics::ScoreSet enrollment_scores(
    const std::vector<std::vector<Tensor>>& per_speaker_embeddings,
    int64_t n_enroll);

}  // namespace speaker
}  // namespace xclone

#endif  // XCLONE_SPEAKER_SPEAKER_H_

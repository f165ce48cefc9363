// src/corpus/corpus.h

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

#ifndef XCLONE_CORPUS_CORPUS_H_
#define XCLONE_CORPUS_CORPUS_H_

#include <string>
#include <vector>

#include "base/tensor.h"
#include "dsp/stft.h"
#include "dsp/wav.h"
#include "yin/yin.h"

namespace xclone {
namespace corpus {

// Closed pseudo-phone alphabet: 0 silence, 1..10 voiced, 11..12 unvoiced.
constexpr int kNumSymbols = 13;
constexpr int kSilenceSymbol = 0;
constexpr int kFirstNoiseSymbol = 11;
inline bool symbol_is_silence(int s) { return s == kSilenceSymbol; }
inline bool symbol_is_noise(int s) { return s >= kFirstNoiseSymbol && s < kNumSymbols; }
inline bool symbol_is_voiced(int s) { return s > kSilenceSymbol && s < kFirstNoiseSymbol; }

struct SpeakerParams {
  int speaker_id = -1;
  std::vector<double> formant_centers_hz;  // strictly increasing, 2-4 entries
  double spectral_tilt_db_per_octave = -8.0;
  double base_pitch_hz = 180.0;  // within [80, 320]
  bool held_out = false;
  void check() const;
};

// One symbol's slice of an utterance: duration plus a linear f0 segment
// (zero and unvoiced for silence/noise symbols).
struct SymbolSpan {
  int symbol = 0;
  double duration_ms = 150.0;
  double f0_start_hz = 0.0;
  double f0_end_hz = 0.0;
  bool voiced = false;
  int64_t num_samples(int sample_rate_hz) const;
};

struct UtterancePlan {
  std::vector<SymbolSpan> spans;
  int style = 0;  // 0 neutral, 1 expressive
  double vibrato_hz = 0.0;
  double vibrato_depth = 0.0;  // fractional f0 excursion
  double am_hz = 0.0;
  double am_depth = 0.0;  // fractional amplitude excursion
  std::vector<int> symbols() const;
  double total_duration_ms() const;
  int64_t total_samples(int sample_rate_hz) const;
  void check() const;
};

struct Utterance {
  std::string id;
  int speaker_id = -1;
  std::string split;  // "train" or "val"
  UtterancePlan plan;
  dsp::Waveform wave;
};

struct CorpusSpec {
  int n_speakers = 6;          // training speakers
  int n_heldout_speakers = 2;  // never seen by any trained model
  int utterances_per_speaker = 10;
  double expressive_fraction = 0.5;
  int min_symbols = 6;
  int max_symbols = 10;
  int val_utterances_per_speaker = 2;
  int sample_rate_hz = 22050;
  uint64_t seed = 1;
  void validate() const;
};

struct Corpus {
  CorpusSpec spec;
  std::vector<SpeakerParams> speakers;  // training speakers first, then held out
  Tensor symbol_formant_scale;          // [kNumSymbols x 3], shared across speakers
  std::vector<Utterance> utterances;
  const SpeakerParams& speaker(int id) const;
  // split: "" for both, otherwise "train"/"val".
  std::vector<const Utterance*> utterances_of(int speaker_id,
                                              const std::string& split = "") const;
};

// Deterministic in spec.seed; every utterance carries full ground truth.
Corpus generate_corpus(const CorpusSpec& spec);

// Harmonic-plus-noise render: voiced spans are harmonic stacks of the f0
// plan shaped by the speaker's formant envelope and spectral tilt; noise
// symbols are colored noise 30 dB below the voiced level; silence is zero.
dsp::Waveform render_utterance(const SpeakerParams& speaker, const UtterancePlan& plan,
                               const Tensor& symbol_scale, int sample_rate_hz,
                               uint64_t render_seed);

// Ground-truth contour at analysis frame rate (frame centers, piecewise
// linear f0, no vibrato term).
yin::PitchContour plan_to_contour(const UtterancePlan& plan,
                                  const dsp::FrameConfig& frame, int sample_rate_hz);

// Directory layout: manifest.json, wav/<id>.wav, plan/<id>.csv.
void save_corpus(const Corpus& corpus, const std::string& dir);
Corpus load_corpus(const std::string& dir);

void write_plan_csv(const std::string& path, const UtterancePlan& plan);
// Style/vibrato fields live in the manifest, not the CSV; the caller
// restores them.
UtterancePlan read_plan_csv(const std::string& path);

}  // namespace corpus
}  // namespace xclone

#endif  // XCLONE_CORPUS_CORPUS_H_

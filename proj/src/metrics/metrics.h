// src/metrics/metrics.h

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

#ifndef XCLONE_METRICS_METRICS_H_
#define XCLONE_METRICS_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ad/params.h"
#include "base/tensor.h"
#include "yin/yin.h"

namespace xclone {
namespace metrics {

// ---------------------------------------------------------------------------
// pitch metrics

// Frame-level error counts between a reference and an estimated contour.
// The gross-error and voicing-error frame sets are disjoint by definition
// (gross errors only count where both contours are voiced), so
// ffe == vde + gross/num_frames exactly.
struct PitchErrorCounts {
  int64_t num_frames = 0;
  int64_t mutually_voiced = 0;  // GPE support
  int64_t gross_errors = 0;     // mutually voiced, relative error above threshold
  int64_t voicing_errors = 0;   // voicing flags disagree
  double gpe() const;           // 0 when there is no mutually voiced support
  double vde() const;
  double ffe() const;
  bool gpe_has_support() const { return mutually_voiced > 0; }
};

// rel_threshold: |f0_est - f0_ref| > rel_threshold * f0_ref counts as gross.
// Contours must have equal frame counts.
PitchErrorCounts pitch_error_counts(const yin::PitchContour& ref,
                                    const yin::PitchContour& est,
                                    double rel_threshold = 0.2);

double gpe(const yin::PitchContour& ref, const yin::PitchContour& est,
           double rel_threshold = 0.2);
double vde(const yin::PitchContour& ref, const yin::PitchContour& est);
double ffe(const yin::PitchContour& ref, const yin::PitchContour& est,
           double rel_threshold = 0.2);

// Sums counts so pooled fractions weight every frame equally.
PitchErrorCounts pool_counts(const std::vector<PitchErrorCounts>& parts);

// Pearson correlation of f0 over mutually voiced frames.  Degenerate
// supports (< 2 frames, or zero variance on either side) report r = 0 with
// the support count telling the story, keeping batch evaluation total.
struct CorrelationResult {
  double r = 0.0;
  int64_t support = 0;  // mutually voiced frames
};
CorrelationResult pearson_voiced(const yin::PitchContour& ref,
                                 const yin::PitchContour& est);

// ---------------------------------------------------------------------------
// verification EER

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct EerResult {
  double eer = 0.0;        // in [0, 1]
  double threshold = 0.0;  // score at the interpolated FAR/FRR crossing
};

// Sweeps thresholds over the pooled distinct scores (with sentinel
// endpoints), FAR(t) = P(impostor >= t), FRR(t) = P(genuine < t), and
// linearly interpolates between the two thresholds bracketing the
// crossing.  Rejects empty score lists.
EerResult eer(const ScoreSet& scores);

// CSV with header label,score; label is "genuine" or "impostor".
void write_scores_csv(const std::string& path, const ScoreSet& scores);
ScoreSet read_scores_csv(const std::string& path);

// ---------------------------------------------------------------------------
// speaker classification on embeddings

struct ClassifierConfig {
  int64_t hidden_dim = 32;  // paper-scale preset uses 256
  int64_t iterations = 300;
  double learning_rate = 1e-2;
  uint64_t seed = 1;
};

// Two-layer tanh network with a softmax readout, trained with the
// adaptive-moment optimizer on full batches.
struct Classifier {
  ClassifierConfig config;
  int64_t input_dim = 0;
  int64_t n_classes = 0;
  ad::ParamStore params;  // w1 [D,H], b1 [1,H], w2 [H,K], b2 [1,K]

  // embedding: 1-D [D]; returns the argmax class.
  int classify(const Tensor& embedding) const;
  // embeddings: [N,D] rows; labels: N class indices.
  double accuracy(const Tensor& embeddings, const std::vector<int>& labels) const;
};

// embeddings [N,D], labels in [0,K).  Requires >= 2 classes with >= 2
// examples each.
Classifier train_classifier(const Tensor& embeddings, const std::vector<int>& labels,
                            const ClassifierConfig& config);

// ---------------------------------------------------------------------------
// combined report

struct MetricsReport {
  PitchErrorCounts pitch;
  double eer = -1.0;       // negative: not evaluated
  double eer_threshold = 0.0;
  double accuracy = -1.0;  // negative: not evaluated
};

}  // namespace metrics
}  // namespace xclone

#endif  // XCLONE_METRICS_METRICS_H_

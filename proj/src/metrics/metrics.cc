// src/metrics/metrics.cc

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

#include "metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ad/optim.h"
#include "ad/tape.h"
#include "base/error.h"
#include "base/io.h"
#include "base/rng.h"

namespace xclone {
namespace metrics {

double PitchErrorCounts::gpe() const {
  if (mutually_voiced == 0) return 0.0;
  return static_cast<double>(gross_errors) / static_cast<double>(mutually_voiced);
}

double PitchErrorCounts::vde() const {
  XC_CHECK(num_frames > 0, "no frames counted");
  return static_cast<double>(voicing_errors) / static_cast<double>(num_frames);
}

double PitchErrorCounts::ffe() const {
  XC_CHECK(num_frames > 0, "no frames counted");
  return static_cast<double>(voicing_errors + gross_errors) /
         static_cast<double>(num_frames);
}

PitchErrorCounts pitch_error_counts(const yin::PitchContour& ref,
                                    const yin::PitchContour& est,
                                    double rel_threshold) {
  ref.check();
  est.check();
  XC_SHAPE_CHECK(ref.num_frames() == est.num_frames(),
                 "contour length mismatch: " << ref.num_frames() << " vs "
                                             << est.num_frames());
  XC_CHECK(rel_threshold > 0.0, "relative threshold must be positive");
  PitchErrorCounts c;
  c.num_frames = ref.num_frames();
  for (int64_t t = 0; t < c.num_frames; ++t) {
    const bool rv = ref.voiced[t] != 0, ev = est.voiced[t] != 0;
    if (rv != ev) {
      c.voicing_errors++;
    } else if (rv && ev) {
      c.mutually_voiced++;
      if (std::fabs(est.f0_hz[t] - ref.f0_hz[t]) > rel_threshold * ref.f0_hz[t])
        c.gross_errors++;
    }
  }
  return c;
}

double gpe(const yin::PitchContour& ref, const yin::PitchContour& est,
           double rel_threshold) {
  return pitch_error_counts(ref, est, rel_threshold).gpe();
}

double vde(const yin::PitchContour& ref, const yin::PitchContour& est) {
  return pitch_error_counts(ref, est).vde();
}

CorrelationResult pearson_voiced(const yin::PitchContour& ref,
                                 const yin::PitchContour& est) {
  ref.check();
  est.check();
  XC_SHAPE_CHECK(ref.num_frames() == est.num_frames(),
                 "contour length mismatch: " << ref.num_frames() << " vs "
                                             << est.num_frames());
  std::vector<double> x, y;
  for (int64_t t = 0; t < ref.num_frames(); ++t)
    if (ref.voiced[t] != 0 && est.voiced[t] != 0) {
      x.push_back(ref.f0_hz[t]);
      y.push_back(est.f0_hz[t]);
    }
  CorrelationResult out;
  out.support = static_cast<int64_t>(x.size());
  if (out.support < 2) return out;
  const double n = static_cast<double>(out.support);
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return out;  // constant contour
  out.r = sxy / std::sqrt(sxx * syy);
  return out;
}

double ffe(const yin::PitchContour& ref, const yin::PitchContour& est,
           double rel_threshold) {
  return pitch_error_counts(ref, est, rel_threshold).ffe();
}

PitchErrorCounts pool_counts(const std::vector<PitchErrorCounts>& parts) {
  PitchErrorCounts out;
  for (const PitchErrorCounts& p : parts) {
    out.num_frames += p.num_frames;
    out.mutually_voiced += p.mutually_voiced;
    out.gross_errors += p.gross_errors;
    out.voicing_errors += p.voicing_errors;
  }
  return out;
}

// ---------------------------------------------------------------------------
// EER

EerResult eer(const ScoreSet& scores) {
  XC_CHECK(!scores.genuine.empty() && !scores.impostor.empty(),
           "EER needs nonempty genuine and impostor score lists");
  for (double s : scores.genuine) XC_NUM_CHECK(std::isfinite(s), "non-finite score");
  for (double s : scores.impostor) XC_NUM_CHECK(std::isfinite(s), "non-finite score");

  std::vector<double> gen = scores.genuine, imp = scores.impostor;
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());
  std::vector<double> thresholds;
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  {
    std::set<double> pooled(gen.begin(), gen.end());
    pooled.insert(imp.begin(), imp.end());
    thresholds.insert(thresholds.end(), pooled.begin(), pooled.end());
  }
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double ng = static_cast<double>(gen.size());
  const double ni = static_cast<double>(imp.size());
  auto far_at = [&](double t) {
    // impostors accepted: score >= t
    return static_cast<double>(imp.end() -
                               std::lower_bound(imp.begin(), imp.end(), t)) /
           ni;
  };
  auto frr_at = [&](double t) {
    // genuines rejected: score < t
    return static_cast<double>(std::lower_bound(gen.begin(), gen.end(), t) -
                               gen.begin()) /
           ng;
  };

  // FAR - FRR is nonincreasing in t, starts at +1 and ends at -1, so a
  // first nonpositive value always exists.
  double prev_t = thresholds.front();
  double prev_far = 1.0, prev_frr = 0.0;
  for (size_t i = 1; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    const double far = far_at(t), frr = frr_at(t);
    if (far - frr <= 0.0) {
      const double d1 = prev_far - prev_frr;  // >= 0
      const double d2 = frr - far;            // >= 0
      const double w = d1 + d2 > 0.0 ? d1 / (d1 + d2) : 0.0;
      EerResult r;
      r.eer = prev_far + w * (far - prev_far);
      if (std::isfinite(prev_t) && std::isfinite(t))
        r.threshold = prev_t + w * (t - prev_t);
      else
        r.threshold = std::isfinite(prev_t) ? prev_t : t;
      return r;
    }
    prev_t = t;
    prev_far = far;
    prev_frr = frr;
  }
  XC_CHECK(false, "threshold sweep found no FAR/FRR crossing");
  return {};
}

void write_scores_csv(const std::string& path, const ScoreSet& scores) {
  std::ostringstream ss;
  ss << "label,score\n";
  for (double s : scores.genuine) ss << "genuine," << format_double(s) << '\n';
  for (double s : scores.impostor) ss << "impostor," << format_double(s) << '\n';
  write_file_text(path, ss.str());
}

ScoreSet read_scores_csv(const std::string& path) {
  const std::string text = read_file_text(path);
  std::istringstream ss(text);
  std::string line;
  XC_CHECK(std::getline(ss, line) && line.rfind("label,score", 0) == 0,
           "'" << path << "': missing label,score header");
  ScoreSet out;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    XC_CHECK(cells.size() == 2, "'" << path << "': expected 2 columns");
    const double s = parse_double(cells[1], path);
    if (cells[0] == "genuine") {
      out.genuine.push_back(s);
    } else if (cells[0] == "impostor") {
      out.impostor.push_back(s);
    } else {
      XC_CHECK(false, "'" << path << "': unknown label '" << cells[0] << "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// classifier

namespace {

constexpr double kLogEps = 1e-12;  // keeps log(softmax) finite under underflow

// Plain forward pass (no tape): logits = tanh(x w1 + b1) w2 + b2.
std::vector<double> logits_for(const Classifier& cls, const double* x) {
  const Tensor& w1 = cls.params.get("cls.w1");
  const Tensor& b1 = cls.params.get("cls.b1");
  const Tensor& w2 = cls.params.get("cls.w2");
  const Tensor& b2 = cls.params.get("cls.b2");
  const int64_t d = cls.input_dim, h = cls.config.hidden_dim, k = cls.n_classes;
  std::vector<double> hid(h), out(k);
  for (int64_t j = 0; j < h; ++j) {
    double acc = b1.at(0, j);
    for (int64_t i = 0; i < d; ++i) acc += x[i] * w1.at(i, j);
    hid[j] = std::tanh(acc);
  }
  for (int64_t c = 0; c < k; ++c) {
    double acc = b2.at(0, c);
    for (int64_t j = 0; j < h; ++j) acc += hid[j] * w2.at(j, c);
    out[c] = acc;
  }
  return out;
}

void check_dataset(const Tensor& embeddings, const std::vector<int>& labels,
                   int64_t* n_classes) {
  XC_SHAPE_CHECK(embeddings.ndim() == 2, "embeddings must be [N,D]");
  XC_CHECK(!labels.empty(), "empty dataset");
  XC_CHECK(embeddings.rows() == static_cast<int64_t>(labels.size()),
           "rows " << embeddings.rows() << " vs labels " << labels.size());
  int max_label = -1;
  for (int l : labels) {
    XC_CHECK(l >= 0, "negative class label " << l);
    max_label = std::max(max_label, l);
  }
  *n_classes = max_label + 1;
}

}  // namespace

int Classifier::classify(const Tensor& embedding) const {
  XC_SHAPE_CHECK(embedding.numel() == input_dim,
                 "embedding size " << embedding.numel() << " vs input dim "
                                   << input_dim);
  const std::vector<double> out = logits_for(*this, embedding.data());
  return static_cast<int>(std::max_element(out.begin(), out.end()) - out.begin());
}

double Classifier::accuracy(const Tensor& embeddings,
                            const std::vector<int>& labels) const {
  int64_t k = 0;
  check_dataset(embeddings, labels, &k);
  XC_CHECK(k <= n_classes, "label " << k - 1 << " outside trained classes");
  int64_t correct = 0;
  for (int64_t r = 0; r < embeddings.rows(); ++r) {
    const std::vector<double> out =
        logits_for(*this, embeddings.data() + r * embeddings.cols());
    const int pick =
        static_cast<int>(std::max_element(out.begin(), out.end()) - out.begin());
    correct += pick == labels[r] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(embeddings.rows());
}

Classifier train_classifier(const Tensor& embeddings, const std::vector<int>& labels,
                            const ClassifierConfig& config) {
  int64_t k = 0;
  check_dataset(embeddings, labels, &k);
  XC_CHECK(k >= 2, "need at least 2 classes, got " << k);
  std::vector<int64_t> per_class(k, 0);
  for (int l : labels) per_class[l]++;
  for (int64_t c = 0; c < k; ++c)
    XC_CHECK(per_class[c] >= 2, "class " << c << " has " << per_class[c]
                                         << " examples; need at least 2");
  XC_CHECK(config.hidden_dim >= 1 && config.iterations >= 0 &&
               config.learning_rate > 0.0,
           "bad classifier config");

  const int64_t n = embeddings.rows(), d = embeddings.cols(), h = config.hidden_dim;
  Classifier cls;
  cls.config = config;
  cls.input_dim = d;
  cls.n_classes = k;
  Rng rng(Rng::derive(config.seed, "classifier-init"));
  cls.params.create("cls.w1", Tensor::randn({d, h}, &rng, 1.0 / std::sqrt(double(d))));
  cls.params.create("cls.b1", Tensor({1, h}));
  cls.params.create("cls.w2", Tensor::randn({h, k}, &rng, 1.0 / std::sqrt(double(h))));
  cls.params.create("cls.b2", Tensor({1, k}));

  Tensor onehot({n, k});
  for (int64_t r = 0; r < n; ++r) onehot.at(r, labels[r]) = 1.0;

  ad::AdamState adam;
  for (int64_t iter = 0; iter < config.iterations; ++iter) {
    ad::Tape tape;
    ad::VarMap vars = cls.params.leaves(&tape);
    ad::Var x = tape.constant(embeddings);
    ad::Var hidden = ad::tanh(ad::add_rowvec(ad::matmul(x, vars.at("cls.w1")),
                                             vars.at("cls.b1")));
    ad::Var logits = ad::add_rowvec(ad::matmul(hidden, vars.at("cls.w2")),
                                    vars.at("cls.b2"));
    ad::Var probs = ad::add_const(ad::softmax_rows(logits), kLogEps);
    ad::Var picked = ad::mul(tape.constant(onehot), ad::log(probs));
    ad::Var loss = ad::scale(ad::sum(picked), -1.0 / static_cast<double>(n));
    tape.backward(loss);
    ad::sgd_adaptive_step(&cls.params, ad::ParamStore::collect_grads(tape, vars),
                          config.learning_rate, &adam);
  }
  return cls;
}

}  // namespace metrics
}  // namespace xclone

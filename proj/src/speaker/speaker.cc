// src/speaker/speaker.cc

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

#include "speaker/speaker.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ad/checkpoint.h"
#include "base/io.h"
#include "ad/optim.h"
#include "base/error.h"
#include "base/rng.h"
#include "nn/nn.h"

namespace xclone {
namespace speaker {

namespace {

constexpr double kMinW = 1e-2;

std::string gru_prefix(int64_t layer) {
  std::ostringstream ss;
  ss << "spk.gru" << layer;
  return ss.str();
}

double cosine(const Tensor& a, const Tensor& b) {
  XC_SHAPE_CHECK(a.numel() == b.numel(), "embedding size mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i) {
    dot += a.raw()[i] * b.raw()[i];
    na += a.raw()[i] * a.raw()[i];
    nb += b.raw()[i] * b.raw()[i];
  }
  XC_NUM_CHECK(na > 0.0 && nb > 0.0, "zero-norm embedding in cosine");
  return dot / std::sqrt(na * nb);
}

}  // namespace

void SpeakerEncoderConfig::validate() const {
  XC_CHECK(n_recurrent_layers >= 1, "need at least one recurrent layer");
  XC_CHECK(cells_per_layer >= 1 && embedding_dim >= 1 && input_mels >= 1,
           "encoder dims must be positive");
  XC_CHECK(segment_ms > 0.0 && overlap_ms >= 0.0 && overlap_ms < segment_ms,
           "overlap " << overlap_ms << " ms must be shorter than segment "
                      << segment_ms << " ms");
}

int64_t SpeakerEncoderConfig::segment_frames(double frames_per_second) const {
  return std::max<int64_t>(1, std::llround(segment_ms / 1000.0 * frames_per_second));
}

int64_t SpeakerEncoderConfig::step_frames(double frames_per_second) const {
  const int64_t seg = segment_frames(frames_per_second);
  const int64_t overlap = std::llround(overlap_ms / 1000.0 * frames_per_second);
  return std::max<int64_t>(1, seg - overlap);
}

ad::ParamStore init_speaker_encoder(const SpeakerEncoderConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(Rng::derive(seed, "speaker-encoder"));
  ad::ParamStore store;
  for (int64_t l = 0; l < cfg.n_recurrent_layers; ++l)
    nn::add_gru(&store, gru_prefix(l), l == 0 ? cfg.input_mels : cfg.cells_per_layer,
                cfg.cells_per_layer, &rng);
  nn::add_linear(&store, "spk.proj", cfg.cells_per_layer, cfg.embedding_dim, &rng);
  // Scaled-cosine readout for the verification loss.
  store.create("ge2e.w", Tensor::full({1}, 10.0));
  store.create("ge2e.b", Tensor::full({1}, -5.0));
  return store;
}

Tensor normalize_mel(const Tensor& mel_frames) {
  XC_SHAPE_CHECK(mel_frames.ndim() == 2 && mel_frames.numel() > 0,
                 "mel frames must be a nonempty [T,C] matrix");
  double mean = 0.0;
  for (double v : mel_frames.raw()) mean += v;
  mean /= static_cast<double>(mel_frames.numel());
  Tensor out = mel_frames;
  for (double& v : out.raw()) v -= mean;
  return out;
}

ad::Var encode_segment(ad::Tape* tape, const ad::VarMap& vars,
                       const SpeakerEncoderConfig& cfg, ad::Var mel_segment) {
  XC_SHAPE_CHECK(tape->value(mel_segment).cols() == cfg.input_mels,
                 "segment has " << tape->value(mel_segment).cols()
                                << " channels, encoder expects " << cfg.input_mels);
  ad::Var x = mel_segment;
  for (int64_t l = 0; l < cfg.n_recurrent_layers; ++l)
    x = nn::gru_sequence(tape, vars, gru_prefix(l), x, cfg.cells_per_layer);
  const int64_t T = tape->value(x).rows();
  ad::Var last = ad::slice_rows(x, T - 1, T);
  ad::Var proj = nn::linear(vars, "spk.proj", last);
  return ad::l2_normalize(ad::reshape(proj, {cfg.embedding_dim}));
}

Tensor embed_utterance(const dsp::MelSpectrogram& mel, const ad::ParamStore& params,
                       const SpeakerEncoderConfig& cfg) {
  cfg.validate();
  XC_CHECK(mel.frames.numel() > 0, "empty mel spectrogram");
  const Tensor norm = normalize_mel(mel.frames);
  const double fps = static_cast<double>(mel.sample_rate_hz) /
                     static_cast<double>(mel.cfg.frame.hop_length);
  const int64_t seg = cfg.segment_frames(fps);
  const int64_t step = cfg.step_frames(fps);
  const int64_t T = norm.rows();

  std::vector<Tensor> windows;
  if (T < seg) {
    // Single variable-length window.  Padding with zeros would starve the
    // recurrence: tens of zero-input steps contract the final state toward
    // the origin and the projection can fall below the normalizer's floor.
    windows.push_back(norm);
  } else {
    for (int64_t start = 0; start + seg <= T; start += step) {
      Tensor w({seg, cfg.input_mels});
      for (int64_t t = 0; t < seg; ++t)
        for (int64_t c = 0; c < norm.cols(); ++c) w.at(t, c) = norm.at(start + t, c);
      windows.push_back(std::move(w));
    }
  }

  std::vector<Tensor> embeddings;
  for (const Tensor& w : windows) {
    ad::Tape tape;
    ad::VarMap vars = params.leaves(&tape, false);
    ad::Var e = encode_segment(&tape, vars, cfg, tape.constant(w));
    embeddings.push_back(tape.value(e));
  }
  return aggregate_embeddings(embeddings);
}

Tensor aggregate_embeddings(const std::vector<Tensor>& embeddings) {
  XC_CHECK(!embeddings.empty(), "cannot aggregate zero embeddings");
  const int64_t d = embeddings.front().numel();
  Tensor mean({d});
  for (const Tensor& e : embeddings) {
    XC_SHAPE_CHECK(e.numel() == d, "embedding dims disagree");
    for (int64_t i = 0; i < d; ++i) mean.at(i) += e.raw()[i];
  }
  for (int64_t i = 0; i < d; ++i) mean.at(i) /= static_cast<double>(embeddings.size());
  const double norm = mean.l2_norm();
  XC_CHECK(norm > 1e-9, "aggregated embeddings cancel to (near) zero");
  for (int64_t i = 0; i < d; ++i) mean.at(i) /= norm;
  return mean;
}

ad::Var ge2e_similarities(ad::Tape* tape, ad::Var embeddings, int64_t n_speakers,
                          int64_t m_utterances, ad::Var w, ad::Var b) {
  const Tensor& e = tape->value(embeddings);
  XC_CHECK(n_speakers >= 2 && m_utterances >= 2,
           "verification batch needs N >= 2 speakers and M >= 2 utterances");
  XC_SHAPE_CHECK(e.ndim() == 2 && e.rows() == n_speakers * m_utterances,
                 "embedding batch must have N*M rows");
  XC_CHECK(tape->value(w).numel() == 1 && tape->value(b).numel() == 1,
           "w and b must be scalars");
  XC_CHECK(tape->value(w).raw()[0] > 0.0,
           "similarity scale w must stay positive, got "
               << tape->value(w).raw()[0]);
  const int64_t N = n_speakers, M = m_utterances, d = e.cols();

  ad::Var e_n = ad::l2_normalize_rows(embeddings);
  std::vector<ad::Var> centroids, own_cos;
  for (int64_t j = 0; j < N; ++j) {
    ad::Var rows_j = ad::slice_rows(e_n, j * M, (j + 1) * M);
    ad::Var sum_j = ad::sum_rows(rows_j);  // [1,d]
    centroids.push_back(ad::scale(sum_j, 1.0 / static_cast<double>(M)));
    // Exclusion centroid per utterance: (sum_j - e_ji) / (M-1).
    ad::Var excl = ad::scale(ad::add_rowvec(ad::scale(rows_j, -1.0), sum_j),
                             1.0 / static_cast<double>(M - 1));
    ad::Var excl_n = ad::l2_normalize_rows(excl);
    // Unit rows on both sides: cosine is a per-row dot product.
    own_cos.push_back(ad::sum_cols(ad::mul(rows_j, excl_n)));  // [M,1]
  }
  ad::Var c_n = ad::l2_normalize_rows(ad::concat_rows(centroids));  // [N,d]
  ad::Var cos_full = ad::matmul(e_n, ad::transpose(c_n));           // [NM,N]

  Tensor mask({N * M, N}), inv({N * M, N}), ones_row({1, N});
  for (int64_t j = 0; j < N; ++j)
    for (int64_t i = 0; i < M; ++i)
      for (int64_t k = 0; k < N; ++k) {
        mask.at(j * M + i, k) = k == j ? 1.0 : 0.0;
        inv.at(j * M + i, k) = k == j ? 0.0 : 1.0;
      }
  for (int64_t k = 0; k < N; ++k) ones_row.at(0, k) = 1.0;
  (void)d;

  ad::Var own_bcast = ad::matmul(ad::concat_rows(own_cos), tape->constant(ones_row));
  ad::Var cos_mixed = ad::add(ad::mul(cos_full, tape->constant(inv)),
                              ad::mul(own_bcast, tape->constant(mask)));
  return ad::add_scalar(ad::mul_scalar(cos_mixed, w), b);
}

ad::Var ge2e_loss(ad::Tape* tape, ad::Var embeddings, int64_t n_speakers,
                  int64_t m_utterances, ad::Var w, ad::Var b) {
  ad::Var sims = ge2e_similarities(tape, embeddings, n_speakers, m_utterances, w, b);
  const int64_t N = n_speakers, M = m_utterances;
  Tensor mask({N * M, N});
  for (int64_t j = 0; j < N; ++j)
    for (int64_t i = 0; i < M; ++i) mask.at(j * M + i, j) = 1.0;
  // Exact cross-entropy: sum of (logsumexp(row) - own similarity).  The
  // shift is a constant copy of the row maxima, so exp never overflows and
  // the summed exponentials stay >= 1, keeping log exact; gradients are
  // unaffected by a constant shift.
  const Tensor& sv = tape->value(sims);
  Tensor shift({N * M, N});
  for (int64_t r = 0; r < N * M; ++r) {
    double mx = sv.at(r, 0);
    for (int64_t k = 1; k < N; ++k) mx = std::max(mx, sv.at(r, k));
    for (int64_t k = 0; k < N; ++k) shift.at(r, k) = mx;
  }
  ad::Var shifted = ad::sub(sims, tape->constant(shift));
  ad::Var lse = ad::add(ad::log(ad::sum_cols(ad::exp(shifted))),
                        ad::slice_cols(tape->constant(shift), 0, 1));
  ad::Var own = ad::sum_cols(ad::mul(tape->constant(mask), sims));
  return ad::sum(ad::sub(lse, own));
}

dsp::MelConfig encoder_mel_config(const SpeakerEncoderConfig& cfg) {
  dsp::MelConfig mc;
  mc.n_mels = cfg.input_mels;
  return mc;
}

metrics::ScoreSet pairwise_scores(
    const std::vector<std::vector<Tensor>>& per_speaker_embeddings) {
  metrics::ScoreSet out;
  const size_t S = per_speaker_embeddings.size();
  for (size_t a = 0; a < S; ++a) {
    const auto& ea = per_speaker_embeddings[a];
    for (size_t i = 0; i < ea.size(); ++i) {
      for (size_t j = i + 1; j < ea.size(); ++j)
        out.genuine.push_back(cosine(ea[i], ea[j]));
      for (size_t bspk = a + 1; bspk < S; ++bspk)
        for (const Tensor& eb : per_speaker_embeddings[bspk])
          out.impostor.push_back(cosine(ea[i], eb));
    }
  }
  return out;
}

metrics::ScoreSet enrollment_scores(
    const std::vector<std::vector<Tensor>>& per_speaker_embeddings,
    int64_t n_enroll) {
  XC_CHECK(n_enroll >= 1, "need at least one enrollment embedding");
  XC_CHECK(per_speaker_embeddings.size() >= 2, "need at least two speakers");
  std::vector<Tensor> voiceprints;
  for (const auto& embs : per_speaker_embeddings) {
    XC_CHECK(static_cast<int64_t>(embs.size()) > n_enroll,
             "speaker has " << embs.size() << " embeddings; need more than "
                            << n_enroll << " to enroll and test");
    voiceprints.push_back(aggregate_embeddings(std::vector<Tensor>(
        embs.begin(), embs.begin() + n_enroll)));
  }
  metrics::ScoreSet out;
  for (size_t s = 0; s < per_speaker_embeddings.size(); ++s) {
    const auto& embs = per_speaker_embeddings[s];
    for (size_t i = n_enroll; i < embs.size(); ++i)
      for (size_t v = 0; v < voiceprints.size(); ++v)
        (v == s ? out.genuine : out.impostor)
            .push_back(cosine(embs[i], voiceprints[v]));
  }
  return out;
}

namespace {

struct TrainExample {
  Tensor mel;  // normalized [T,C]
};

// Pairwise-EER over the val split with the current parameters; -1 when the
// split cannot form both genuine and impostor pairs.
double val_eer(const corpus::Corpus& corpus, const ad::ParamStore& params,
               const SpeakerEncoderConfig& cfg, const dsp::MelConfig& mel_cfg) {
  std::vector<std::vector<Tensor>> per_speaker;
  for (const corpus::SpeakerParams& spk : corpus.speakers) {
    std::vector<Tensor> embs;
    for (const corpus::Utterance* u : corpus.utterances_of(spk.speaker_id, "val"))
      embs.push_back(
          embed_utterance(dsp::mel_spectrogram(u->wave, mel_cfg), params, cfg));
    if (!embs.empty()) per_speaker.push_back(std::move(embs));
  }
  if (per_speaker.size() < 2) return -1.0;
  const metrics::ScoreSet scores = pairwise_scores(per_speaker);
  if (scores.genuine.empty() || scores.impostor.empty()) return -1.0;
  return metrics::eer(scores).eer;
}

}  // namespace

ad::ParamStore train_speaker_encoder(const corpus::Corpus& corpus,
                                     const SpeakerEncoderConfig& cfg,
                                     const SpeakerTrainConfig& tcfg,
                                     SpeakerTrainReport* report) {
  cfg.validate();
  XC_CHECK(tcfg.iterations >= 0 && tcfg.learning_rate > 0.0, "bad training config");
  const dsp::MelConfig mel_cfg = encoder_mel_config(cfg);

  // Normalized mels for every train utterance, grouped by speaker.
  std::vector<std::vector<TrainExample>> by_speaker;
  for (const corpus::SpeakerParams& spk : corpus.speakers) {
    std::vector<TrainExample> ex;
    for (const corpus::Utterance* u : corpus.utterances_of(spk.speaker_id, "train"))
      ex.push_back({normalize_mel(dsp::mel_spectrogram(u->wave, mel_cfg).frames)});
    if (!ex.empty()) by_speaker.push_back(std::move(ex));
  }
  XC_CHECK(by_speaker.size() >= 2, "need at least 2 speakers with train data");
  for (const auto& ex : by_speaker)
    XC_CHECK(ex.size() >= 2, "every training speaker needs at least 2 utterances");

  const int64_t N =
      std::min<int64_t>(tcfg.speakers_per_batch, static_cast<int64_t>(by_speaker.size()));
  const int64_t M = tcfg.utterances_per_speaker;
  XC_CHECK(N >= 2 && M >= 2, "batch too small for the verification loss");

  ad::ParamStore params = init_speaker_encoder(cfg, tcfg.seed);
  const double fps = static_cast<double>(corpus.spec.sample_rate_hz) /
                     static_cast<double>(mel_cfg.frame.hop_length);
  const int64_t seg = cfg.segment_frames(fps);

  if (report != nullptr)
    report->val_eer_before = val_eer(corpus, params, cfg, mel_cfg);

  Rng rng(Rng::derive(tcfg.seed, "speaker-train"));
  ad::AdamState adam;
  for (int64_t iter = 0; iter < tcfg.iterations; ++iter) {
    // Sample N speakers, M utterance crops each.
    const std::vector<int64_t> order = rng.permutation(by_speaker.size());
    std::vector<const TrainExample*> picked;
    for (int64_t s = 0; s < N; ++s) {
      const auto& pool = by_speaker[order[s]];
      for (int64_t m = 0; m < M; ++m)
        picked.push_back(&pool[rng.randint(pool.size())]);
    }
    // Fixed-length crops stacked as batch rows, one constant per step.
    std::vector<int64_t> starts(picked.size(), 0);
    for (size_t r = 0; r < picked.size(); ++r) {
      const int64_t T = picked[r]->mel.rows();
      if (T > seg) starts[r] = rng.randint(T - seg + 1);
    }
    ad::Tape tape;
    std::vector<ad::Var> xs;
    xs.reserve(seg);
    for (int64_t t = 0; t < seg; ++t) {
      Tensor step({static_cast<int64_t>(picked.size()), cfg.input_mels});
      for (size_t r = 0; r < picked.size(); ++r) {
        const Tensor& mel = picked[r]->mel;
        const int64_t src = starts[r] + t;
        if (src < mel.rows())
          for (int64_t c = 0; c < cfg.input_mels; ++c)
            step.at(static_cast<int64_t>(r), c) = mel.at(src, c);
      }
      xs.push_back(tape.constant(std::move(step)));
    }

    ad::VarMap vars = params.leaves(&tape);
    std::vector<ad::Var> states = xs;
    for (int64_t l = 0; l < cfg.n_recurrent_layers; ++l)
      states = nn::gru_sequence_batch(&tape, vars, gru_prefix(l), states,
                                      static_cast<int64_t>(picked.size()),
                                      cfg.cells_per_layer);
    ad::Var emb = ad::l2_normalize_rows(nn::linear(vars, "spk.proj", states.back()));
    ad::Var loss =
        ge2e_loss(&tape, emb, N, M, vars.at("ge2e.w"), vars.at("ge2e.b"));
    tape.backward(loss);
    if (report != nullptr) report->loss_trace.push_back(tape.value(loss).raw()[0]);

    ad::sgd_adaptive_step(&params, ad::ParamStore::collect_grads(tape, vars),
                          tcfg.learning_rate, &adam);
    Tensor& w = params.get("ge2e.w");
    if (w.raw()[0] < kMinW) w.raw()[0] = kMinW;
  }

  if (report != nullptr)
    report->val_eer_after = val_eer(corpus, params, cfg, mel_cfg);

  if (!tcfg.checkpoint_path.empty())
    save_speaker_encoder(tcfg.checkpoint_path, params, cfg,
                         {{"iterations", std::to_string(tcfg.iterations)},
                          {"seed", std::to_string(tcfg.seed)}});
  return params;
}

void save_speaker_encoder(const std::string& path, const ad::ParamStore& params,
                          const SpeakerEncoderConfig& cfg,
                          const std::map<std::string, std::string>& extra) {
  cfg.validate();
  std::map<std::string, std::string> meta = extra;
  meta["module"] = "speaker";
  meta["recurrent_cell"] = "gru";  // fused reset|update|candidate gates
  meta["n_recurrent_layers"] = std::to_string(cfg.n_recurrent_layers);
  meta["cells_per_layer"] = std::to_string(cfg.cells_per_layer);
  meta["embedding_dim"] = std::to_string(cfg.embedding_dim);
  meta["input_mels"] = std::to_string(cfg.input_mels);
  meta["segment_ms"] = format_double(cfg.segment_ms);
  meta["overlap_ms"] = format_double(cfg.overlap_ms);
  ad::save_checkpoint(path, params, meta);
}

SpeakerEncoderCheckpoint load_speaker_encoder(const std::string& path) {
  const ad::Checkpoint ck = ad::load_checkpoint(path);
  const auto need = [&](const std::string& key) -> const std::string& {
    const auto it = ck.metadata.find(key);
    XC_CHECK(it != ck.metadata.end(),
             "checkpoint " << path << " lacks metadata key '" << key << "'");
    return it->second;
  };
  XC_CHECK(need("module") == "speaker",
           "checkpoint " << path << " holds module '" << need("module") << "'");
  SpeakerEncoderCheckpoint out;
  out.cfg.n_recurrent_layers =
      parse_int(need("n_recurrent_layers"), "n_recurrent_layers");
  out.cfg.cells_per_layer = parse_int(need("cells_per_layer"), "cells_per_layer");
  out.cfg.embedding_dim = parse_int(need("embedding_dim"), "embedding_dim");
  out.cfg.input_mels = parse_int(need("input_mels"), "input_mels");
  out.cfg.segment_ms = parse_double(need("segment_ms"), "segment_ms");
  out.cfg.overlap_ms = parse_double(need("overlap_ms"), "overlap_ms");
  out.cfg.validate();
  out.params = ck.params;
  return out;
}

}  // namespace speaker
}  // namespace xclone

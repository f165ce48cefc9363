// src/synth/synth.cc

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

#include "synth/synth.h"

#include <cmath>
#include <utility>

#include "ad/checkpoint.h"
#include "ad/optim.h"
#include "base/error.h"
#include "base/io.h"
#include "base/rng.h"
#include "nn/nn.h"

namespace xclone {
namespace synth {

namespace {

void check_symbols(const std::vector<int>& symbols, int64_t n_symbols) {
  XC_CHECK(!symbols.empty(), "empty symbol sequence");
  for (int s : symbols)
    XC_CHECK(s >= 0 && s < n_symbols,
             "symbol " << s << " outside alphabet of " << n_symbols);
}

// Embedding lookup then encoder recurrence; [T_enc, enc_dim].
ad::Var encode_symbols(ad::Tape* tape, const ad::VarMap& vars,
                       const SynthConfig& cfg, const std::vector<int>& symbols) {
  check_symbols(symbols, cfg.n_symbols);
  ad::Var table = vars.at("synth.embed");
  std::vector<ad::Var> rows;
  rows.reserve(symbols.size());
  for (int s : symbols) rows.push_back(ad::slice_rows(table, s, s + 1));
  ad::Var embedded = ad::concat_rows(rows);
  return nn::gru_sequence(tape, vars, "synth.enc", embedded, cfg.enc_dim);
}

// Stacks a [1,d] row n times via a constant ones column.
ad::Var tile_rows(ad::Tape* tape, ad::Var row, int64_t n) {
  Tensor ones({n, 1});
  for (double& v : ones.raw()) v = 1.0;
  return ad::matmul(tape->constant(std::move(ones)), row);
}

struct DecodeInputs {
  const std::vector<int>* symbols = nullptr;
  ad::Var speaker;                // [1, speaker_dim]
  ad::Var style;                  // [1, style_dim]
  const Tensor* pitch = nullptr;  // [steps, 2]; required when conditioning
  ad::Var teacher;                // normalized target mel; valid iff teach
  bool teach = false;
  const Tensor* rhythm = nullptr;  // [steps, T_enc] hard alignment
  int64_t steps = 0;
};

struct DecodeResult {
  ad::Var mel;        // [steps, n_mels], normalized space
  ad::Var alignment;  // [steps, T_enc]
};

DecodeResult decode(ad::Tape* tape, const ad::VarMap& vars,
                    const SynthConfig& cfg, const DecodeInputs& in) {
  XC_CHECK(in.steps >= 1, "decoder needs at least one step");
  XC_CHECK(in.steps <= cfg.max_decoder_steps,
           in.steps << " decoder steps exceed the limit " << cfg.max_decoder_steps);
  ad::Var memory_rows = encode_symbols(tape, vars, cfg, *in.symbols);
  const int64_t t_enc = static_cast<int64_t>(in.symbols->size());
  ad::Var memory = ad::concat_cols({memory_rows,
                                    tile_rows(tape, in.speaker, t_enc),
                                    tile_rows(tape, in.style, t_enc)});
  ad::Var keys = ad::matmul(memory, vars.at("synth.att.wmem"));

  ad::Var rhythm_rows;
  if (in.rhythm != nullptr) {
    XC_SHAPE_CHECK(in.rhythm->ndim() == 2 && in.rhythm->rows() == in.steps &&
                       in.rhythm->cols() == t_enc,
                   "rhythm is " << in.rhythm->rows() << "x" << in.rhythm->cols()
                                << ", expected " << in.steps << "x" << t_enc);
    for (int64_t r = 0; r < in.rhythm->rows(); ++r) {
      double sum = 0.0;
      for (int64_t c = 0; c < t_enc; ++c) {
        XC_CHECK(in.rhythm->at(r, c) >= 0.0, "rhythm row " << r << " negative");
        sum += in.rhythm->at(r, c);
      }
      XC_CHECK(std::fabs(sum - 1.0) <= 1e-6,
               "rhythm row " << r << " sums to " << sum);
    }
    rhythm_rows = tape->constant(*in.rhythm);
  }
  if (cfg.pitch_conditioning) {
    XC_CHECK(in.pitch != nullptr && in.pitch->ndim() == 2 &&
                 in.pitch->rows() == in.steps && in.pitch->cols() == 2,
             "pitch features must be [steps, 2]");
  }
  ad::Var pitch_rows;
  if (cfg.pitch_conditioning) pitch_rows = tape->constant(*in.pitch);

  Tensor first_alpha({1, t_enc});
  first_alpha.at(0, 0) = 1.0;
  ad::Var alpha = tape->constant(std::move(first_alpha));
  ad::Var h = tape->constant(Tensor({1, cfg.dec_dim}));
  ad::Var prev = tape->constant(Tensor({1, cfg.n_mels}));
  const int64_t pad = (cfg.loc_kernel - 1) / 2;

  std::vector<ad::Var> frames, alphas;
  frames.reserve(in.steps);
  alphas.reserve(in.steps);
  for (int64_t t = 0; t < in.steps; ++t) {
    if (in.rhythm != nullptr) {
      alpha = ad::slice_rows(rhythm_rows, t, t + 1);
    } else {
      ad::Var loc = ad::conv1d(ad::transpose(alpha), vars.at("synth.att.conv.w"),
                               vars.at("synth.att.conv.b"), cfg.loc_kernel, 1, pad);
      ad::Var pre = ad::add(keys, ad::matmul(loc, vars.at("synth.att.wloc")));
      ad::Var qrow =
          ad::add(ad::matmul(h, vars.at("synth.att.wq")), vars.at("synth.att.b"));
      ad::Var scores =
          ad::matmul(ad::tanh(ad::add_rowvec(pre, qrow)), vars.at("synth.att.v"));
      alpha = ad::softmax_rows(ad::transpose(scores));
    }
    ad::Var context = ad::matmul(alpha, memory);
    std::vector<ad::Var> parts = {
        ad::relu(nn::linear(vars, "synth.prenet", prev)), context};
    if (cfg.pitch_conditioning)
      parts.push_back(ad::slice_rows(pitch_rows, t, t + 1));
    h = nn::gru_cell(vars, "synth.dec", ad::concat_cols(parts), h);
    ad::Var frame = nn::linear(vars, "synth.out", ad::concat_cols({h, context}));
    frames.push_back(frame);
    alphas.push_back(alpha);
    prev = in.teach ? ad::slice_rows(in.teacher, t, t + 1) : frame;
  }
  return {ad::concat_rows(frames), ad::concat_rows(alphas)};
}

Tensor normalize_frames(const Tensor& mel, double mean, double stddev) {
  Tensor out = mel;
  for (double& v : out.raw()) v = (v - mean) / stddev;
  return out;
}

ad::Var row_constant(ad::Tape* tape, const Tensor& v, int64_t want,
                     const char* what) {
  XC_SHAPE_CHECK(v.numel() == want, what << " has " << v.numel()
                                         << " values, expected " << want);
  Tensor row({1, want});
  row.raw() = v.raw();
  return tape->constant(std::move(row));
}

// Shared by train and adapt: frozen speaker embedding, normalized target
// mel, pitch features on the mel clock.
SynthExample build_example(const std::vector<int>& symbols,
                           const dsp::Waveform& wave, const SynthConfig& cfg,
                           double mel_mean, double mel_std,
                           const ad::ParamStore& speaker_params,
                           const speaker::SpeakerEncoderConfig& speaker_cfg) {
  SynthExample ex;
  ex.symbols = symbols;
  const dsp::MelSpectrogram target = dsp::mel_spectrogram(wave, synth_mel_config(cfg));
  ex.mel = normalize_frames(target.frames, mel_mean, mel_std);
  yin::YinConfig ycfg;
  ex.pitch = pitch_features(yin::extract_pitch(wave, ycfg), target.num_frames());
  const Tensor emb = speaker::embed_utterance(
      dsp::mel_spectrogram(wave, speaker::encoder_mel_config(speaker_cfg)),
      speaker_params, speaker_cfg);
  Tensor row({1, speaker_cfg.embedding_dim});
  row.raw() = emb.raw();
  ex.speaker = std::move(row);
  return ex;
}

}  // namespace

void SynthConfig::validate() const {
  XC_CHECK(n_symbols >= 1 && embed_dim >= 1 && enc_dim >= 1 && att_dim >= 1 &&
               loc_channels >= 1 && prenet_dim >= 1 && dec_dim >= 1 &&
               n_mels >= 1 && speaker_dim >= 1,
           "synthesizer dims must be positive");
  XC_CHECK(loc_kernel >= 1 && loc_kernel % 2 == 1,
           "location kernel must be odd, got " << loc_kernel);
  XC_CHECK(max_decoder_steps >= 1, "max_decoder_steps must be positive");
  gst.validate();
  XC_CHECK(gst.n_mels == n_mels, "style branch expects " << gst.n_mels
                                 << "-channel mels, synthesizer uses " << n_mels);
}

dsp::MelConfig synth_mel_config(const SynthConfig& cfg) {
  dsp::MelConfig mc;
  mc.n_mels = cfg.n_mels;
  return mc;
}

ad::ParamStore init_synth(const SynthConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(Rng::derive(seed, "synth-init"));
  ad::ParamStore store;
  store.create("synth.embed", Tensor::randn({cfg.n_symbols, cfg.embed_dim}, &rng, 0.5));
  nn::add_gru(&store, "synth.enc", cfg.embed_dim, cfg.enc_dim, &rng);
  const int64_t mem = cfg.memory_dim();
  store.create("synth.att.wq",
               Tensor::randn({cfg.dec_dim, cfg.att_dim}, &rng,
                             1.0 / std::sqrt(static_cast<double>(cfg.dec_dim))));
  store.create("synth.att.wmem",
               Tensor::randn({mem, cfg.att_dim}, &rng,
                             1.0 / std::sqrt(static_cast<double>(mem))));
  store.create("synth.att.wloc",
               Tensor::randn({cfg.loc_channels, cfg.att_dim}, &rng,
                             1.0 / std::sqrt(static_cast<double>(cfg.loc_channels))));
  store.create("synth.att.b", Tensor({1, cfg.att_dim}));
  store.create("synth.att.v",
               Tensor::randn({cfg.att_dim, 1}, &rng,
                             1.0 / std::sqrt(static_cast<double>(cfg.att_dim))));
  nn::add_conv1d(&store, "synth.att.conv", cfg.loc_kernel, 1, cfg.loc_channels, &rng);
  nn::add_linear(&store, "synth.prenet", cfg.n_mels, cfg.prenet_dim, &rng);
  nn::add_gru(&store, "synth.dec",
              cfg.prenet_dim + mem + cfg.pitch_channels(), cfg.dec_dim, &rng);
  nn::add_linear(&store, "synth.out", cfg.dec_dim + mem, cfg.n_mels, &rng);
  const ad::ParamStore gst_store = gst::init_gst(cfg.gst, Rng::derive(seed, "synth-gst"));
  for (const auto& [name, value] : gst_store.items()) store.create(name, value);
  return store;
}

bool is_encoder_param(const std::string& name) {
  return name.rfind("synth.embed", 0) == 0 || name.rfind("synth.enc", 0) == 0 ||
         name.rfind("gst.", 0) == 0;
}

Tensor pitch_features(const yin::PitchContour& contour, int64_t n_steps) {
  contour.check();
  XC_CHECK(contour.num_frames() >= 1, "empty pitch contour");
  XC_CHECK(n_steps >= 1, "need at least one decoder step");
  const int64_t n = contour.num_frames();
  Tensor out({n_steps, 2});
  for (int64_t t = 0; t < n_steps; ++t) {
    const int64_t src = t < n ? t : n - 1;  // shared analysis clock
    if (contour.voiced[src]) {
      out.at(t, 0) = std::log(contour.f0_hz[src]);
      out.at(t, 1) = 1.0;
    }
  }
  return out;
}

ad::Var training_loss(ad::Tape* tape, const ad::VarMap& vars,
                      const SynthConfig& cfg,
                      const std::vector<SynthExample>& batch) {
  XC_CHECK(!batch.empty(), "empty training batch");
  ad::Var total;
  for (size_t i = 0; i < batch.size(); ++i) {
    const SynthExample& ex = batch[i];
    XC_SHAPE_CHECK(ex.mel.ndim() == 2 && ex.mel.cols() == cfg.n_mels &&
                       ex.mel.rows() >= 1,
                   "target mel must be [T, " << cfg.n_mels << "]");
    ad::Var target = tape->constant(ex.mel);
    DecodeInputs in;
    in.symbols = &ex.symbols;
    in.speaker = row_constant(tape, ex.speaker, cfg.speaker_dim, "speaker embedding");
    in.style = gst::style_embedding_var(tape, vars, cfg.gst, target);
    in.pitch = &ex.pitch;
    in.teacher = target;
    in.teach = true;
    in.steps = ex.mel.rows();
    const DecodeResult out = decode(tape, vars, cfg, in);
    ad::Var mse = ad::scale(ad::sum_sq(ad::sub(out.mel, target)),
                            1.0 / static_cast<double>(ex.mel.numel()));
    total = i == 0 ? mse : ad::add(total, mse);
  }
  return ad::scale(total, 1.0 / static_cast<double>(batch.size()));
}

Tensor style_from_mel(const SynthModel& model, const dsp::MelSpectrogram& mel) {
  XC_CHECK(mel.num_frames() >= 1, "reference mel is empty");
  dsp::MelSpectrogram norm = mel;
  norm.frames = normalize_frames(mel.frames, model.mel_mean, model.mel_std);
  return gst::style_embedding(norm, model.params, model.cfg.gst);
}

dsp::MelSpectrogram synthesize(const SynthModel& model,
                               const std::vector<int>& symbols,
                               const Tensor& speaker_emb,
                               const yin::PitchContour& f0, const Tensor& style,
                               const Tensor* rhythm) {
  const SynthConfig& cfg = model.cfg;
  cfg.validate();
  XC_CHECK(f0.num_frames() >= 1, "pitch contour sets the step count; it is empty");
  const int64_t steps = f0.num_frames();

  ad::Tape tape;
  const ad::VarMap vars = model.params.leaves(&tape, false);
  DecodeInputs in;
  in.symbols = &symbols;
  in.speaker = row_constant(&tape, speaker_emb, cfg.speaker_dim, "speaker embedding");
  in.style = row_constant(&tape, style, cfg.gst.style_dim, "style embedding");
  Tensor pitch;
  if (cfg.pitch_conditioning) {
    pitch = pitch_features(f0, steps);
    in.pitch = &pitch;
  }
  in.rhythm = rhythm;
  in.steps = steps;
  const DecodeResult out = decode(&tape, vars, cfg, in);

  dsp::MelSpectrogram mel;
  mel.frames = tape.value(out.mel);
  for (double& v : mel.frames.raw()) v = v * model.mel_std + model.mel_mean;
  mel.cfg = synth_mel_config(cfg);
  mel.sample_rate_hz = f0.sample_rate_hz;
  return mel;
}

Tensor forced_align(const SynthModel& model, const std::vector<int>& symbols,
                    const dsp::MelSpectrogram& mel, const Tensor& speaker_emb,
                    const yin::PitchContour& f0, const Tensor& style) {
  const SynthConfig& cfg = model.cfg;
  cfg.validate();
  XC_CHECK(mel.num_frames() >= 1, "cannot align a length-zero mel");
  XC_SHAPE_CHECK(mel.frames.cols() == cfg.n_mels,
                 "mel has " << mel.frames.cols() << " channels, expected "
                            << cfg.n_mels);

  ad::Tape tape;
  const ad::VarMap vars = model.params.leaves(&tape, false);
  DecodeInputs in;
  in.symbols = &symbols;
  in.speaker = row_constant(&tape, speaker_emb, cfg.speaker_dim, "speaker embedding");
  in.style = row_constant(&tape, style, cfg.gst.style_dim, "style embedding");
  Tensor pitch;
  if (cfg.pitch_conditioning) {
    pitch = pitch_features(f0, mel.num_frames());
    in.pitch = &pitch;
  }
  in.teacher = tape.constant(normalize_frames(mel.frames, model.mel_mean, model.mel_std));
  in.teach = true;
  in.steps = mel.num_frames();
  const DecodeResult out = decode(&tape, vars, cfg, in);
  return tape.value(out.alignment);
}

SynthModel train_synth(const corpus::Corpus& corpus,
                       const ad::ParamStore& speaker_params,
                       const speaker::SpeakerEncoderConfig& speaker_cfg,
                       const SynthConfig& cfg, const SynthTrainConfig& tcfg,
                       SynthTrainReport* report) {
  cfg.validate();
  speaker_cfg.validate();
  XC_CHECK(cfg.speaker_dim == speaker_cfg.embedding_dim,
           "speaker embedding width mismatch");
  XC_CHECK(tcfg.iterations >= 0 && tcfg.learning_rate > 0.0, "bad training config");

  std::vector<const corpus::Utterance*> train;
  for (const corpus::Utterance& u : corpus.utterances)
    if (u.split == "train") train.push_back(&u);
  XC_CHECK(!train.empty(), "corpus has no training utterances");

  // Scalar normalization of the log-mel targets.
  const dsp::MelConfig mel_cfg = synth_mel_config(cfg);
  std::vector<Tensor> mels;
  mels.reserve(train.size());
  double mean = 0.0;
  int64_t count = 0;
  for (const corpus::Utterance* u : train) {
    mels.push_back(dsp::mel_spectrogram(u->wave, mel_cfg).frames);
    for (double v : mels.back().raw()) mean += v;
    count += mels.back().numel();
  }
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (const Tensor& m : mels)
    for (double v : m.raw()) var += (v - mean) * (v - mean);
  const double stddev = std::max(std::sqrt(var / static_cast<double>(count)), 1e-12);

  SynthModel model;
  model.cfg = cfg;
  model.mel_mean = mean;
  model.mel_std = stddev;
  model.params = init_synth(cfg, tcfg.seed);

  std::vector<SynthExample> examples;
  examples.reserve(train.size());
  yin::YinConfig ycfg;
  for (size_t i = 0; i < train.size(); ++i) {
    const corpus::Utterance* u = train[i];
    SynthExample ex;
    ex.symbols = u->plan.symbols();
    check_symbols(ex.symbols, cfg.n_symbols);
    ex.mel = normalize_frames(mels[i], mean, stddev);
    ex.pitch = pitch_features(yin::extract_pitch(u->wave, ycfg), ex.mel.rows());
    const Tensor emb = speaker::embed_utterance(
        dsp::mel_spectrogram(u->wave, speaker::encoder_mel_config(speaker_cfg)),
        speaker_params, speaker_cfg);
    Tensor row({1, speaker_cfg.embedding_dim});
    row.raw() = emb.raw();
    ex.speaker = std::move(row);
    examples.push_back(std::move(ex));
  }

  Rng rng(Rng::derive(tcfg.seed, "synth-train"));
  ad::AdamState adam;
  std::vector<int64_t> order;
  for (int64_t iter = 0; iter < tcfg.iterations; ++iter) {
    if (order.empty()) order = rng.permutation(examples.size());
    const int64_t pick = order.back();
    order.pop_back();

    ad::Tape tape;
    ad::VarMap vars = model.params.leaves(&tape);
    ad::Var loss = training_loss(&tape, vars, cfg, {examples[pick]});
    tape.backward(loss);
    if (report != nullptr) report->loss_trace.push_back(tape.value(loss).raw()[0]);
    ad::sgd_adaptive_step(&model.params, ad::ParamStore::collect_grads(tape, vars),
                          tcfg.learning_rate, &adam);
  }

  if (!tcfg.checkpoint_path.empty()) save_synth(tcfg.checkpoint_path, model);
  return model;
}

SynthModel adapt(const SynthModel& model, const std::vector<AdaptSample>& samples,
                 AdaptMode mode, const AdaptConfig& acfg,
                 const ad::ParamStore& speaker_params,
                 const speaker::SpeakerEncoderConfig& speaker_cfg) {
  model.cfg.validate();
  XC_CHECK(!samples.empty(), "adaptation needs at least one sample");
  XC_CHECK(samples.size() <= 20, "adaptation supports at most 20 samples, got "
                                     << samples.size());
  XC_CHECK(acfg.iterations >= 0 && acfg.learning_rate > 0.0, "bad adaptation config");

  std::vector<SynthExample> examples;
  examples.reserve(samples.size());
  for (const AdaptSample& s : samples)
    examples.push_back(build_example(s.symbols, s.wave, model.cfg, model.mel_mean,
                                     model.mel_std, speaker_params, speaker_cfg));

  SynthModel tuned = model;
  const bool decoder_only = mode == AdaptMode::kDecoder;
  Rng rng(Rng::derive(acfg.seed, "synth-adapt"));
  ad::AdamState adam;
  std::vector<int64_t> order;
  for (int64_t iter = 0; iter < acfg.iterations; ++iter) {
    if (order.empty()) order = rng.permutation(examples.size());
    const int64_t pick = order.back();
    order.pop_back();

    ad::Tape tape;
    ad::VarMap vars = tuned.params.leaves(
        &tape, [decoder_only](const std::string& name) {
          return !decoder_only || !is_encoder_param(name);
        });
    ad::Var loss = training_loss(&tape, vars, tuned.cfg, {examples[pick]});
    tape.backward(loss);
    ad::sgd_adaptive_step(&tuned.params, ad::ParamStore::collect_grads(tape, vars),
                          acfg.learning_rate, &adam);
  }
  return tuned;
}

void save_synth(const std::string& path, const SynthModel& model) {
  std::map<std::string, std::string> meta;
  meta["module"] = "synth";
  meta["recurrent_cell"] = "gru";
  meta["n_symbols"] = std::to_string(model.cfg.n_symbols);
  meta["embed_dim"] = std::to_string(model.cfg.embed_dim);
  meta["enc_dim"] = std::to_string(model.cfg.enc_dim);
  meta["att_dim"] = std::to_string(model.cfg.att_dim);
  meta["loc_channels"] = std::to_string(model.cfg.loc_channels);
  meta["loc_kernel"] = std::to_string(model.cfg.loc_kernel);
  meta["prenet_dim"] = std::to_string(model.cfg.prenet_dim);
  meta["dec_dim"] = std::to_string(model.cfg.dec_dim);
  meta["n_mels"] = std::to_string(model.cfg.n_mels);
  meta["speaker_dim"] = std::to_string(model.cfg.speaker_dim);
  meta["pitch_conditioning"] = model.cfg.pitch_conditioning ? "1" : "0";
  meta["max_decoder_steps"] = std::to_string(model.cfg.max_decoder_steps);
  meta["gst_n_tokens"] = std::to_string(model.cfg.gst.n_tokens);
  meta["gst_n_heads"] = std::to_string(model.cfg.gst.n_heads);
  meta["gst_token_dim"] = std::to_string(model.cfg.gst.token_dim);
  meta["gst_style_dim"] = std::to_string(model.cfg.gst.style_dim);
  meta["gst_n_mels"] = std::to_string(model.cfg.gst.n_mels);
  meta["gst_ref_conv_channels"] = std::to_string(model.cfg.gst.ref_conv_channels);
  meta["gst_ref_gru_dim"] = std::to_string(model.cfg.gst.ref_gru_dim);
  meta["mel_mean"] = format_double(model.mel_mean);
  meta["mel_std"] = format_double(model.mel_std);
  ad::save_checkpoint(path, model.params, meta);
}

SynthModel load_synth(const std::string& path) {
  const ad::Checkpoint ck = ad::load_checkpoint(path);
  const auto need = [&](const std::string& key) -> const std::string& {
    const auto it = ck.metadata.find(key);
    XC_CHECK(it != ck.metadata.end(),
             "checkpoint " << path << " lacks metadata key '" << key << "'");
    return it->second;
  };
  XC_CHECK(need("module") == "synth",
           "checkpoint " << path << " holds module '" << need("module") << "'");
  SynthModel model;
  model.cfg.n_symbols = parse_int(need("n_symbols"), "n_symbols");
  model.cfg.embed_dim = parse_int(need("embed_dim"), "embed_dim");
  model.cfg.enc_dim = parse_int(need("enc_dim"), "enc_dim");
  model.cfg.att_dim = parse_int(need("att_dim"), "att_dim");
  model.cfg.loc_channels = parse_int(need("loc_channels"), "loc_channels");
  model.cfg.loc_kernel = parse_int(need("loc_kernel"), "loc_kernel");
  model.cfg.prenet_dim = parse_int(need("prenet_dim"), "prenet_dim");
  model.cfg.dec_dim = parse_int(need("dec_dim"), "dec_dim");
  model.cfg.n_mels = parse_int(need("n_mels"), "n_mels");
  model.cfg.speaker_dim = parse_int(need("speaker_dim"), "speaker_dim");
  model.cfg.pitch_conditioning = need("pitch_conditioning") == "1";
  model.cfg.max_decoder_steps = parse_int(need("max_decoder_steps"), "max_decoder_steps");
  model.cfg.gst.n_tokens = parse_int(need("gst_n_tokens"), "gst_n_tokens");
  model.cfg.gst.n_heads = parse_int(need("gst_n_heads"), "gst_n_heads");
  model.cfg.gst.token_dim = parse_int(need("gst_token_dim"), "gst_token_dim");
  model.cfg.gst.style_dim = parse_int(need("gst_style_dim"), "gst_style_dim");
  model.cfg.gst.n_mels = parse_int(need("gst_n_mels"), "gst_n_mels");
  model.cfg.gst.ref_conv_channels =
      parse_int(need("gst_ref_conv_channels"), "gst_ref_conv_channels");
  model.cfg.gst.ref_gru_dim = parse_int(need("gst_ref_gru_dim"), "gst_ref_gru_dim");
  model.mel_mean = parse_double(need("mel_mean"), "mel_mean");
  model.mel_std = parse_double(need("mel_std"), "mel_std");
  model.cfg.validate();
  model.params = ck.params;
  return model;
}

}  // namespace synth
}  // namespace xclone

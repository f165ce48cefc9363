// src/corpus/corpus.cc

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

#include "corpus/corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "base/error.h"
#include "base/io.h"
#include "base/rng.h"

namespace xclone {
namespace corpus {

using nlohmann::json;

void SpeakerParams::check() const {
  XC_CHECK(speaker_id >= 0, "speaker id unset");
  XC_CHECK(formant_centers_hz.size() >= 2 && formant_centers_hz.size() <= 4,
           "speaker " << speaker_id << ": need 2-4 formants, got "
                      << formant_centers_hz.size());
  for (size_t i = 1; i < formant_centers_hz.size(); ++i)
    XC_CHECK(formant_centers_hz[i] > formant_centers_hz[i - 1],
             "speaker " << speaker_id << ": formant centers must increase");
  XC_CHECK(base_pitch_hz >= 80.0 && base_pitch_hz <= 320.0,
           "speaker " << speaker_id << ": base pitch " << base_pitch_hz
                      << " outside [80, 320]");
}

int64_t SymbolSpan::num_samples(int sample_rate_hz) const {
  return std::llround(duration_ms * sample_rate_hz / 1000.0);
}

std::vector<int> UtterancePlan::symbols() const {
  std::vector<int> out;
  out.reserve(spans.size());
  for (const SymbolSpan& s : spans) out.push_back(s.symbol);
  return out;
}

double UtterancePlan::total_duration_ms() const {
  double d = 0.0;
  for (const SymbolSpan& s : spans) d += s.duration_ms;
  return d;
}

int64_t UtterancePlan::total_samples(int sample_rate_hz) const {
  int64_t n = 0;
  for (const SymbolSpan& s : spans) n += s.num_samples(sample_rate_hz);
  return n;
}

void UtterancePlan::check() const {
  XC_CHECK(!spans.empty(), "plan has no spans");
  for (size_t i = 0; i < spans.size(); ++i) {
    const SymbolSpan& s = spans[i];
    XC_CHECK(s.symbol >= 0 && s.symbol < kNumSymbols,
             "span " << i << ": symbol " << s.symbol << " outside alphabet");
    XC_CHECK(s.duration_ms > 0.0, "span " << i << ": non-positive duration");
    XC_CHECK(s.voiced == symbol_is_voiced(s.symbol),
             "span " << i << ": voicing flag contradicts symbol class");
    if (s.voiced) {
      XC_CHECK(s.f0_start_hz > 0.0 && s.f0_end_hz > 0.0,
               "span " << i << ": voiced span needs positive f0");
    } else {
      XC_CHECK(s.f0_start_hz == 0.0 && s.f0_end_hz == 0.0,
               "span " << i << ": unvoiced span carries f0");
    }
  }
  XC_CHECK(style == 0 || style == 1, "unknown style class " << style);
}

void CorpusSpec::validate() const {
  XC_CHECK(n_speakers >= 2, "need at least 2 training speakers, got " << n_speakers);
  XC_CHECK(n_heldout_speakers >= 0, "negative held-out speaker count");
  XC_CHECK(utterances_per_speaker >= 2,
           "need at least 2 utterances per speaker, got " << utterances_per_speaker);
  XC_CHECK(expressive_fraction >= 0.0 && expressive_fraction <= 1.0,
           "expressive fraction must lie in [0, 1]");
  XC_CHECK(min_symbols >= 3 && max_symbols >= min_symbols,
           "bad symbol count range [" << min_symbols << ", " << max_symbols << "]");
  XC_CHECK(val_utterances_per_speaker >= 1 &&
               val_utterances_per_speaker < utterances_per_speaker,
           "validation utterances must leave at least one training utterance");
  XC_CHECK(sample_rate_hz >= 8000, "sample rate too low for the formant range");
}

const SpeakerParams& Corpus::speaker(int id) const {
  for (const SpeakerParams& s : speakers)
    if (s.speaker_id == id) return s;
  XC_CHECK(false, "unknown speaker id " << id);
  return speakers.front();  // unreachable
}

std::vector<const Utterance*> Corpus::utterances_of(int speaker_id,
                                                    const std::string& split) const {
  std::vector<const Utterance*> out;
  for (const Utterance& u : utterances)
    if (u.speaker_id == speaker_id && (split.empty() || u.split == split))
      out.push_back(&u);
  return out;
}

namespace {

constexpr double kMaxHarmonicHz = 4500.0;  // spectral content cap for renders
constexpr double kNoiseDb = -30.0;         // unvoiced level vs voiced RMS
constexpr int kAmpBlock = 32;              // samples between harmonic-amp refreshes
constexpr double kFadeMs = 3.0;            // per-span edge fade

// Formant envelope: Gaussian bumps over a small floor, times spectral tilt.
double envelope_at(const SpeakerParams& spk, const double* scale, double f) {
  double e = 0.05;
  for (size_t k = 0; k < spk.formant_centers_hz.size(); ++k) {
    const double fc = spk.formant_centers_hz[k] * scale[k];
    const double sigma = 60.0 + 0.07 * fc;
    const double z = (f - fc) / sigma;
    e += std::exp(-0.5 * z * z);
  }
  const double tilt = std::pow(10.0, spk.spectral_tilt_db_per_octave *
                                         std::log2(std::max(f, 100.0) / 200.0) / 20.0);
  return e * tilt;
}

}  // namespace

dsp::Waveform render_utterance(const SpeakerParams& speaker, const UtterancePlan& plan,
                               const Tensor& symbol_scale, int sample_rate_hz,
                               uint64_t render_seed) {
  speaker.check();
  plan.check();
  XC_SHAPE_CHECK(symbol_scale.ndim() == 2 && symbol_scale.rows() == kNumSymbols,
                 "symbol scale table must have " << kNumSymbols << " rows");
  const double nyquist = sample_rate_hz / 2.0;
  double peak_formant = 0.0;
  for (double f : speaker.formant_centers_hz) peak_formant = std::max(peak_formant, f);
  double peak_scale = 1.0;
  for (double s : symbol_scale.raw()) peak_scale = std::max(peak_scale, s);
  XC_CHECK(peak_formant * peak_scale < nyquist,
           "formant " << peak_formant * peak_scale << " Hz at or above Nyquist "
                      << nyquist);

  Rng rng(render_seed);
  const double vib_phase0 = rng.uniform(0.0, 2.0 * M_PI);
  const double am_phase0 = rng.uniform(0.0, 2.0 * M_PI);

  const int64_t total = plan.total_samples(sample_rate_hz);
  std::vector<double> x(total, 0.0);
  const int64_t fade = std::llround(kFadeMs * sample_rate_hz / 1000.0);

  // Pass 1: harmonic source for voiced spans (phase continuous across
  // the whole utterance so voiced-voiced boundaries stay click-free).
  double phase = 0.0;
  int64_t offset = 0;
  double voiced_sumsq = 0.0;
  int64_t voiced_n = 0;
  for (const SymbolSpan& span : plan.spans) {
    const int64_t n = span.num_samples(sample_rate_hz);
    if (span.voiced) {
      const double* scale = symbol_scale.data() + span.symbol * symbol_scale.cols();
      XC_SHAPE_CHECK(symbol_scale.cols() >=
                         static_cast<int64_t>(speaker.formant_centers_hz.size()),
                     "symbol scale table narrower than the formant list");
      std::vector<double> amps;
      for (int64_t i = 0; i < n; ++i) {
        const double u = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        double f0 = span.f0_start_hz + (span.f0_end_hz - span.f0_start_hz) * u;
        if (plan.vibrato_depth > 0.0) {
          const double t = static_cast<double>(offset + i) / sample_rate_hz;
          f0 *= 1.0 + plan.vibrato_depth *
                          std::sin(2.0 * M_PI * plan.vibrato_hz * t + vib_phase0);
        }
        if (i % kAmpBlock == 0) {
          const int h_max = std::max(1, static_cast<int>(kMaxHarmonicHz / f0));
          amps.assign(h_max, 0.0);
          for (int h = 1; h <= h_max; ++h)
            amps[h - 1] = envelope_at(speaker, scale, h * f0);
        }
        phase += 2.0 * M_PI * f0 / sample_rate_hz;
        if (phase > 2.0 * M_PI) phase -= 2.0 * M_PI;
        double v = 0.0;
        for (size_t h = 1; h <= amps.size(); ++h)
          v += amps[h - 1] * std::sin(static_cast<double>(h) * phase);
        // Edge fades smooth the formant jumps between adjacent symbols.
        double g = 1.0;
        if (i < fade) g = static_cast<double>(i) / fade;
        if (n - 1 - i < fade) g = std::min(g, static_cast<double>(n - 1 - i) / fade);
        x[offset + i] = g * v;
        voiced_sumsq += v * v;
      }
      voiced_n += n;
    }
    offset += n;
  }
  const double voiced_rms =
      voiced_n > 0 ? std::sqrt(voiced_sumsq / static_cast<double>(voiced_n)) : 0.3;
  const double noise_rms = voiced_rms * std::pow(10.0, kNoiseDb / 20.0);

  // Pass 2: colored noise for the unvoiced symbols.  The two noise symbols
  // get different spectra so the alphabet stays learnable.
  offset = 0;
  for (const SymbolSpan& span : plan.spans) {
    const int64_t n = span.num_samples(sample_rate_hz);
    if (symbol_is_noise(span.symbol)) {
      double u1 = rng.uniform(-1.0, 1.0), u2 = rng.uniform(-1.0, 1.0);
      const bool highpass = span.symbol == kFirstNoiseSymbol;
      // RMS of the shaping filter applied to uniform [-1,1] noise; divide
      // it out so both noise colors land exactly at noise_rms.
      const double shape_rms = highpass ? std::sqrt(2.0 / 3.0) : 1.0 / 3.0;
      for (int64_t i = 0; i < n; ++i) {
        const double u0 = rng.uniform(-1.0, 1.0);
        const double v = highpass ? (u0 - u1) : (u0 + u1 + u2) / 3.0;
        u2 = u1;
        u1 = u0;
        double g = 1.0;
        if (i < fade) g = static_cast<double>(i) / fade;
        if (n - 1 - i < fade) g = std::min(g, static_cast<double>(n - 1 - i) / fade);
        x[offset + i] = g * (v / shape_rms) * noise_rms;
      }
    }
    offset += n;
  }

  // Amplitude modulation (expressive class) then peak normalization.
  if (plan.am_depth > 0.0) {
    for (int64_t i = 0; i < total; ++i) {
      const double t = static_cast<double>(i) / sample_rate_hz;
      x[i] *= 1.0 + plan.am_depth * std::sin(2.0 * M_PI * plan.am_hz * t + am_phase0);
    }
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  const double gain = peak > 0.0 ? 0.5 / peak : 1.0;
  for (double& v : x) v *= gain;

  dsp::Waveform wave;
  wave.samples = std::move(x);
  wave.sample_rate_hz = sample_rate_hz;
  return wave;
}

yin::PitchContour plan_to_contour(const UtterancePlan& plan,
                                  const dsp::FrameConfig& frame, int sample_rate_hz) {
  plan.check();
  frame.validate();
  const int64_t total = plan.total_samples(sample_rate_hz);
  const int64_t T = frame.num_frames(total);
  yin::PitchContour out;
  out.hop_length_samples = frame.hop_length;
  out.sample_rate_hz = sample_rate_hz;
  out.f0_hz.assign(T, 0.0);
  out.voiced.assign(T, 0);
  // Span boundaries in samples, same rounding as the renderer.
  std::vector<int64_t> starts(plan.spans.size() + 1, 0);
  for (size_t i = 0; i < plan.spans.size(); ++i)
    starts[i + 1] = starts[i] + plan.spans[i].num_samples(sample_rate_hz);
  size_t span = 0;
  for (int64_t t = 0; t < T; ++t) {
    const int64_t center = t * frame.hop_length + frame.window_length / 2;
    while (span + 1 < plan.spans.size() && center >= starts[span + 1]) ++span;
    const SymbolSpan& s = plan.spans[span];
    if (!s.voiced) continue;
    const int64_t n = starts[span + 1] - starts[span];
    const double u = n > 1 ? static_cast<double>(center - starts[span]) /
                                 static_cast<double>(n - 1)
                           : 0.0;
    out.f0_hz[t] = s.f0_start_hz + (s.f0_end_hz - s.f0_start_hz) * std::min(u, 1.0);
    out.voiced[t] = 1;
  }
  out.check();
  return out;
}

namespace {

SpeakerParams sample_speaker(int id, bool held_out, Rng* rng) {
  SpeakerParams s;
  s.speaker_id = id;
  s.held_out = held_out;
  s.formant_centers_hz = {rng->uniform(350.0, 800.0), rng->uniform(1000.0, 1800.0),
                          rng->uniform(2200.0, 3200.0)};
  s.spectral_tilt_db_per_octave = rng->uniform(-12.0, -4.0);
  s.base_pitch_hz = rng->uniform(110.0, 280.0);
  s.check();
  return s;
}

UtterancePlan sample_plan(const SpeakerParams& spk, bool expressive,
                          const CorpusSpec& spec, Rng* rng) {
  UtterancePlan plan;
  plan.style = expressive ? 1 : 0;
  if (expressive) {
    plan.vibrato_hz = rng->uniform(5.0, 6.5);
    plan.vibrato_depth = rng->uniform(0.025, 0.04);
    plan.am_hz = rng->uniform(2.0, 3.5);
    plan.am_depth = rng->uniform(0.25, 0.4);
  }
  const int body = spec.min_symbols +
                   static_cast<int>(rng->randint(spec.max_symbols - spec.min_symbols + 1));
  const double swing = expressive ? 0.18 : 0.08;
  // Declining baseline with per-symbol excursions, continuous across
  // voiced-voiced boundaries.
  double level = spk.base_pitch_hz * rng->uniform(1.0, 1.12);
  double pending_f0 = -1.0;  // carries continuity across adjacent voiced spans
  auto add_silence = [&](double lo, double hi) {
    SymbolSpan s;
    s.symbol = kSilenceSymbol;
    s.duration_ms = rng->uniform(lo, hi);
    plan.spans.push_back(s);
    pending_f0 = -1.0;
  };
  add_silence(80.0, 150.0);
  int voiced_count = 0;
  for (int i = 0; i < body; ++i) {
    const double roll = rng->uniform();
    SymbolSpan s;
    if (roll < 0.12) {
      s.symbol = kFirstNoiseSymbol + static_cast<int>(rng->randint(2));
      s.duration_ms = rng->uniform(90.0, 170.0);
      pending_f0 = -1.0;
    } else if (roll < 0.17) {
      s.symbol = kSilenceSymbol;
      s.duration_ms = rng->uniform(60.0, 120.0);
      pending_f0 = -1.0;
    } else {
      s.symbol = 1 + static_cast<int>(rng->randint(kFirstNoiseSymbol - 1));
      s.voiced = true;
      s.duration_ms = expressive ? rng->uniform(100.0, 300.0) : rng->uniform(120.0, 260.0);
      // Clamp range keeps every planned f0 comfortably inside the pitch
      // tracker's default analysis band.
      const double lo = std::max(80.0, 0.8 * spk.base_pitch_hz * (1.0 - swing));
      const double hi = std::min(450.0, 1.15 * spk.base_pitch_hz * (1.0 + swing));
      s.f0_start_hz = pending_f0 > 0.0
                          ? pending_f0
                          : std::clamp(level * (1.0 + rng->uniform(-swing, swing)), lo, hi);
      s.f0_end_hz = std::clamp(level * (1.0 + rng->uniform(-swing, swing)), lo, hi);
      pending_f0 = s.f0_end_hz;
      level *= 0.99;  // gentle declination
      ++voiced_count;
    }
    plan.spans.push_back(s);
  }
  // Guarantee enough voiced material for pitch statistics and training.
  while (voiced_count < 3) {
    SymbolSpan s;
    s.symbol = 1 + static_cast<int>(rng->randint(kFirstNoiseSymbol - 1));
    s.voiced = true;
    s.duration_ms = rng->uniform(140.0, 240.0);
    s.f0_start_hz = pending_f0 > 0.0 ? pending_f0 : level;
    s.f0_end_hz = level * (1.0 + rng->uniform(-swing, swing));
    pending_f0 = s.f0_end_hz;
    plan.spans.push_back(s);
    ++voiced_count;
  }
  add_silence(80.0, 150.0);
  plan.check();
  return plan;
}

}  // namespace

Corpus generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  Corpus corpus;
  corpus.spec = spec;

  {
    Rng rng(Rng::derive(spec.seed, "speakers"));
    const int total = spec.n_speakers + spec.n_heldout_speakers;
    for (int id = 0; id < total; ++id)
      corpus.speakers.push_back(sample_speaker(id, id >= spec.n_speakers, &rng));
  }
  {
    // Shared symbol -> formant-multiplier table; silence/noise rows unused
    // by the harmonic renderer but kept so the table is total.
    Rng rng(Rng::derive(spec.seed, "symbol-table"));
    corpus.symbol_formant_scale = Tensor({kNumSymbols, 3});
    for (int s = 0; s < kNumSymbols; ++s)
      for (int k = 0; k < 3; ++k)
        corpus.symbol_formant_scale.at(s, k) = rng.uniform(0.82, 1.22);
  }

  for (const SpeakerParams& spk : corpus.speakers) {
    int expressive_so_far = 0;
    for (int u = 0; u < spec.utterances_per_speaker; ++u) {
      // Bresenham spread keeps the class balance exact for any fraction.
      const int want = static_cast<int>(
          std::floor(static_cast<double>(u + 1) * spec.expressive_fraction + 1e-9));
      const bool expressive = want > expressive_so_far;
      expressive_so_far += expressive ? 1 : 0;

      std::ostringstream tag;
      tag << "utt-" << spk.speaker_id << "-" << u;
      Rng plan_rng(Rng::derive(spec.seed, "plan-" + tag.str()));
      Utterance utt;
      utt.plan = sample_plan(spk, expressive, spec, &plan_rng);
      utt.speaker_id = spk.speaker_id;
      std::ostringstream id;
      id << "s" << (spk.speaker_id < 10 ? "0" : "") << spk.speaker_id << "_u"
         << (u < 10 ? "0" : "") << u;
      utt.id = id.str();
      const bool val = spk.held_out ||
                       u >= spec.utterances_per_speaker - spec.val_utterances_per_speaker;
      utt.split = val ? "val" : "train";
      utt.wave = render_utterance(spk, utt.plan, corpus.symbol_formant_scale,
                                  spec.sample_rate_hz,
                                  Rng::derive(spec.seed, "render-" + tag.str()));
      corpus.utterances.push_back(std::move(utt));
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// persistence

void write_plan_csv(const std::string& path, const UtterancePlan& plan) {
  plan.check();
  std::ostringstream ss;
  ss << "symbol,duration_ms,f0_start_hz,f0_end_hz,voiced\n";
  for (const SymbolSpan& s : plan.spans)
    ss << s.symbol << ',' << format_double(s.duration_ms) << ','
       << format_double(s.f0_start_hz) << ',' << format_double(s.f0_end_hz) << ','
       << (s.voiced ? 1 : 0) << '\n';
  write_file_text(path, ss.str());
}

UtterancePlan read_plan_csv(const std::string& path) {
  const std::string text = read_file_text(path);
  std::istringstream ss(text);
  std::string line;
  XC_CHECK(std::getline(ss, line) &&
               line.rfind("symbol,duration_ms,f0_start_hz,f0_end_hz,voiced", 0) == 0,
           "'" << path << "': missing plan CSV header");
  UtterancePlan plan;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    XC_CHECK(cells.size() == 5, "'" << path << "': expected 5 columns");
    SymbolSpan s;
    s.symbol = static_cast<int>(parse_int(cells[0], path));
    s.duration_ms = parse_double(cells[1], path);
    s.f0_start_hz = parse_double(cells[2], path);
    s.f0_end_hz = parse_double(cells[3], path);
    s.voiced = parse_int(cells[4], path) != 0;
    plan.spans.push_back(s);
  }
  plan.check();
  return plan;
}

void save_corpus(const Corpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "wav");
  fs::create_directories(fs::path(dir) / "plan");
  json manifest;
  manifest["seed"] = corpus.spec.seed;
  manifest["sample_rate_hz"] = corpus.spec.sample_rate_hz;
  manifest["n_speakers"] = corpus.spec.n_speakers;
  manifest["n_heldout_speakers"] = corpus.spec.n_heldout_speakers;
  manifest["utterances_per_speaker"] = corpus.spec.utterances_per_speaker;
  manifest["expressive_fraction"] = corpus.spec.expressive_fraction;
  manifest["min_symbols"] = corpus.spec.min_symbols;
  manifest["max_symbols"] = corpus.spec.max_symbols;
  manifest["val_utterances_per_speaker"] = corpus.spec.val_utterances_per_speaker;
  manifest["symbol_formant_scale"] = corpus.symbol_formant_scale.raw();
  json speakers = json::array();
  for (const SpeakerParams& s : corpus.speakers) {
    json j;
    j["speaker_id"] = s.speaker_id;
    j["formant_centers_hz"] = s.formant_centers_hz;
    j["spectral_tilt_db_per_octave"] = s.spectral_tilt_db_per_octave;
    j["base_pitch_hz"] = s.base_pitch_hz;
    j["held_out"] = s.held_out;
    speakers.push_back(j);
  }
  manifest["speakers"] = speakers;
  json utts = json::array();
  for (const Utterance& u : corpus.utterances) {
    json j;
    j["id"] = u.id;
    j["speaker_id"] = u.speaker_id;
    j["split"] = u.split;
    j["style"] = u.plan.style;
    j["vibrato_hz"] = u.plan.vibrato_hz;
    j["vibrato_depth"] = u.plan.vibrato_depth;
    j["am_hz"] = u.plan.am_hz;
    j["am_depth"] = u.plan.am_depth;
    j["wav"] = "wav/" + u.id + ".wav";
    j["plan"] = "plan/" + u.id + ".csv";
    utts.push_back(j);
    dsp::write_wav((fs::path(dir) / "wav" / (u.id + ".wav")).string(), u.wave);
    write_plan_csv((fs::path(dir) / "plan" / (u.id + ".csv")).string(), u.plan);
  }
  manifest["utterances"] = utts;
  write_file_text((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

Corpus load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  json manifest;
  try {
    manifest = json::parse(read_file_text(manifest_path));
  } catch (const json::exception& e) {
    throw DataError(std::string("bad corpus manifest: ") + e.what());
  }
  try {
    Corpus corpus;
    corpus.spec.seed = manifest.at("seed").get<uint64_t>();
    corpus.spec.sample_rate_hz = manifest.at("sample_rate_hz").get<int>();
    corpus.spec.n_speakers = manifest.at("n_speakers").get<int>();
    corpus.spec.n_heldout_speakers = manifest.at("n_heldout_speakers").get<int>();
    corpus.spec.utterances_per_speaker = manifest.at("utterances_per_speaker").get<int>();
    corpus.spec.expressive_fraction = manifest.at("expressive_fraction").get<double>();
    corpus.spec.min_symbols = manifest.at("min_symbols").get<int>();
    corpus.spec.max_symbols = manifest.at("max_symbols").get<int>();
    corpus.spec.val_utterances_per_speaker =
        manifest.at("val_utterances_per_speaker").get<int>();
    const auto scale = manifest.at("symbol_formant_scale").get<std::vector<double>>();
    XC_CHECK(scale.size() == static_cast<size_t>(kNumSymbols * 3),
             "symbol scale table has wrong size");
    corpus.symbol_formant_scale = Tensor::from({kNumSymbols, 3}, scale);
    for (const json& j : manifest.at("speakers")) {
      SpeakerParams s;
      s.speaker_id = j.at("speaker_id").get<int>();
      s.formant_centers_hz = j.at("formant_centers_hz").get<std::vector<double>>();
      s.spectral_tilt_db_per_octave = j.at("spectral_tilt_db_per_octave").get<double>();
      s.base_pitch_hz = j.at("base_pitch_hz").get<double>();
      s.held_out = j.at("held_out").get<bool>();
      s.check();
      corpus.speakers.push_back(std::move(s));
    }
    for (const json& j : manifest.at("utterances")) {
      Utterance u;
      u.id = j.at("id").get<std::string>();
      u.speaker_id = j.at("speaker_id").get<int>();
      u.split = j.at("split").get<std::string>();
      XC_CHECK(u.split == "train" || u.split == "val", "unknown split '" << u.split << "'");
      u.plan = read_plan_csv((fs::path(dir) / j.at("plan").get<std::string>()).string());
      u.plan.style = j.at("style").get<int>();
      u.plan.vibrato_hz = j.at("vibrato_hz").get<double>();
      u.plan.vibrato_depth = j.at("vibrato_depth").get<double>();
      u.plan.am_hz = j.at("am_hz").get<double>();
      u.plan.am_depth = j.at("am_depth").get<double>();
      u.wave = dsp::read_wav((fs::path(dir) / j.at("wav").get<std::string>()).string());
      corpus.speaker(u.speaker_id);  // existence check
      corpus.utterances.push_back(std::move(u));
    }
    return corpus;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad corpus manifest field: ") + e.what());
  }
}

}  // namespace corpus
}  // namespace xclone

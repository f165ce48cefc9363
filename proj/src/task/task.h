// src/task/task.h

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

// Cloning-task runner: text, imitation, and style transfer, each with
// zero-shot or fine-tuned (whole / decoder-only) application of a trained
// synthesizer to a held-out speaker, evaluated objectively and reported as
// deterministic JSON.

#ifndef XCLONE_TASK_TASK_H_
#define XCLONE_TASK_TASK_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus/corpus.h"
#include "speaker/speaker.h"
#include "synth/synth.h"

namespace xclone {
namespace task {

inline constexpr char kToolVersion[] = "0.1.0";

// One evaluation cell.  Conditioning sources follow the factorization: the
// style source provides pitch and rhythm, the target speaker provides the
// voice (speaker embedding) and latent style.
struct TaskManifest {
  std::string task = "imitation";       // text | imitation | style_transfer
  std::string technique = "zero_shot";  // zero_shot | adapt_whole | adapt_decoder
  int n_target_samples = 5;             // 1..20, the studied range
  std::string corpus_dir;
  std::string speaker_checkpoint;
  std::string synth_checkpoint;
  int target_speaker = -1;   // -1: first held-out speaker in the corpus
  std::string style_source;  // utterance id; empty: first suitable utterance
  int64_t adapt_iterations = 150;
  double adapt_learning_rate = 1e-4;
  int griffin_lim_iterations = 40;
  uint64_t seed = 1;

  void validate() const;  // schema-level checks; file existence is separate
};

nlohmann::json manifest_to_json(const TaskManifest& m);
// Rejects missing required fields and unknown keys, both schema errors.
TaskManifest manifest_from_json(const nlohmann::json& j);
TaskManifest load_manifest(const std::string& path);

// FNV-1a over the canonical (sorted-key) manifest dump, as zero-padded hex.
std::string config_hash(const TaskManifest& m);

// Everything a task needs, loaded once; shareable across suite cells.
struct TaskContext {
  corpus::Corpus corpus;
  speaker::SpeakerEncoderCheckpoint spk;
  synth::SynthModel model;  // pre-adaptation weights
};
TaskContext load_context(const TaskManifest& m);

// Runs one cell.  The report embeds the manifest and its hash; the same
// manifest produces a byte-identical report.
nlohmann::json run_task(const TaskManifest& m, const TaskContext& ctx);
nlohmann::json run_task(const TaskManifest& m);  // loads its own context

// Grid sweep; cells share the base manifest's corpus and checkpoints.
struct SuiteConfig {
  TaskManifest base;
  std::vector<std::string> tasks = {"text", "imitation", "style_transfer"};
  std::vector<std::string> techniques = {"zero_shot", "adapt_whole",
                                         "adapt_decoder"};
  std::vector<int> sample_counts = {1, 5, 10};
};
nlohmann::json suite_to_json(const SuiteConfig& c);
SuiteConfig suite_from_json(const nlohmann::json& j);

// One cell per task x technique x sample count, in that nesting order.  A
// failing cell is recorded with its error and the sweep continues.  The
// report holds the cells, a plot-ready CSV summary, and the config hash.
nlohmann::json run_suite(const SuiteConfig& c);

// Canonical serialization: 2-space indent, sorted keys, trailing newline.
void write_report(const std::string& path, const nlohmann::json& report);
nlohmann::json read_report(const std::string& path);

}  // namespace task
}  // namespace xclone

#endif  // XCLONE_TASK_TASK_H_

// src/ad/params.h

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

#ifndef XCLONE_AD_PARAMS_H_
#define XCLONE_AD_PARAMS_H_

#include <functional>
#include <map>
#include <string>

#include "ad/tape.h"
#include "base/tensor.h"

namespace xclone {
namespace ad {

using GradMap = std::map<std::string, Tensor>;
using VarMap = std::map<std::string, Var>;

// Named parameter set for one trainable module.  std::map keeps iteration
// order stable across runs, which the deterministic training loops rely on.
class ParamStore {
 public:
  Tensor& create(const std::string& name, Tensor init);
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool has(const std::string& name) const { return items_.count(name) != 0; }
  size_t size() const { return items_.size(); }
  const std::map<std::string, Tensor>& items() const { return items_; }
  std::map<std::string, Tensor>& items() { return items_; }

  // Registers every parameter as a tape leaf.  `trainable` decides per name
  // whether the leaf requires grad (partial fine-tuning passes a prefix
  // predicate; plain training passes all-true).
  VarMap leaves(Tape* tape,
                const std::function<bool(const std::string&)>& trainable) const;
  VarMap leaves(Tape* tape, bool trainable = true) const;

  // Gradients for every grad-requiring leaf in `vars`, keyed by name.
  static GradMap collect_grads(const Tape& tape, const VarMap& vars);

 private:
  std::map<std::string, Tensor> items_;
};

}  // namespace ad
}  // namespace xclone

#endif  // XCLONE_AD_PARAMS_H_

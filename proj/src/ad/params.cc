// src/ad/params.cc

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

#include "ad/params.h"

#include <utility>

#include "base/error.h"

namespace xclone {
namespace ad {

Tensor& ParamStore::create(const std::string& name, Tensor init) {
  XC_CHECK(items_.find(name) == items_.end(), "duplicate parameter '" << name << "'");
  XC_NUM_CHECK(init.all_finite(), "non-finite init for parameter '" << name << "'");
  auto it = items_.emplace(name, std::move(init)).first;
  return it->second;
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = items_.find(name);
  XC_CHECK(it != items_.end(), "unknown parameter '" << name << "'");
  return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = items_.find(name);
  XC_CHECK(it != items_.end(), "unknown parameter '" << name << "'");
  return it->second;
}

VarMap ParamStore::leaves(
    Tape* tape, const std::function<bool(const std::string&)>& trainable) const {
  VarMap vars;
  for (const auto& [name, tensor] : items_) {
    vars.emplace(name, tape->leaf(tensor, trainable(name)));
  }
  return vars;
}

VarMap ParamStore::leaves(Tape* tape, bool trainable) const {
  return leaves(tape, [trainable](const std::string&) { return trainable; });
}

GradMap ParamStore::collect_grads(const Tape& tape, const VarMap& vars) {
  GradMap grads;
  for (const auto& [name, var] : vars) {
    if (!tape.wants_grad(var.id)) continue;
    grads.emplace(name, tape.grad(var));
  }
  return grads;
}

}  // namespace ad
}  // namespace xclone

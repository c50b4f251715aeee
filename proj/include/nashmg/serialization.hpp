// Copyright 2026 The nashmg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NASHMG_SERIALIZATION_HPP_
#define NASHMG_SERIALIZATION_HPP_

#include <string>
#include <variant>

#include "nashmg/game_model.hpp"

namespace nashmg {

using Instance = std::variant<LinearMixtureGame, TurnBasedGame>;

// Instance JSON documents carry a "kind" tag ("simultaneous" or
// "turn_based"), the dimensions, the feature tensor as nested arrays in
// [s'][s][a][b][i] order (single action axis for turn-based games),
// theta_star, rewards and the parameter bound. Doubles are emitted in
// shortest round-trip form, so save/load is value exact.
std::string instance_to_json(const LinearMixtureGame& game);
std::string instance_to_json(const TurnBasedGame& game);
std::string instance_to_json(const Instance& instance);

Instance instance_from_json(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace nashmg

#endif  // NASHMG_SERIALIZATION_HPP_

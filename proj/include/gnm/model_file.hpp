// Copyright 2026 The GNM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gnm/model.hpp"

namespace gnm {

// Layout, all little-endian:
//   "GNM1" | u16 version | u8 kind | u8 activation
//   GNM: u32 inputs, hidden, outputs, steps     MLP: u32 layers, u32 widths[layers + 1]
//   f64 payload (GNM: A1..AK row-major; MLP: W1, b1, W2, b2, ...)
//   u64 FNV-1a of every preceding byte
inline constexpr std::uint16_t kModelFileVersion = 1;

std::vector<std::uint8_t> encode_model(const Model& model);
Model decode_model(std::span<const std::uint8_t> bytes);

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes);

}  // namespace gnm

// Copyright 2026 The dgsum Authors
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

/// \file
/// Checkpoint container.
///
/// Layout: the 8-byte magic "DGSUMCKP", a little-endian u32 format version,
/// a u8 scalar width (4 or 8), a u64 header length, the JSON header
/// (config, vocabulary, speakers, tensor names and shapes), then every tensor
/// in header order as raw column-major scalars. Saving a loaded checkpoint
/// reproduces the file byte for byte.

#pragma once

#include <filesystem>
#include <iosfwd>

#include "dgsum/model.hpp"

namespace dgsum {

inline constexpr std::uint32_t kCheckpointVersion = 1;

template <typename S>
void write_checkpoint(std::ostream& out, const Model<S>& model);
template <typename S>
void save_checkpoint(const std::filesystem::path& path, const Model<S>& model);

/// Reads either scalar width; values are converted to S when they differ.
template <typename S>
Model<S> read_checkpoint(std::istream& in);
template <typename S>
Model<S> load_checkpoint(const std::filesystem::path& path);

}  // namespace dgsum

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

// Run configuration for the command-line tool: model and training
// hyperparameters plus file locations, filled from a key=value file and then
// overridden by flags.

#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "dgsum/model.hpp"
#include "dgsum/training.hpp"

namespace dgsum::cli {

/// Bad flag combinations and unknown config keys; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  int pretrain_epochs = 30;
  int max_len = 100;
  int window = 10;

  std::filesystem::path corpus;
  std::filesystem::path splits;
  std::filesystem::path pseudo;
  std::filesystem::path out_dir;
  std::filesystem::path word_vectors;
};

/// Parses "key = value" lines. Blank lines and lines starting with '#' are
/// skipped. Throws ParseError on a line without '='.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Copies recognised keys into `config`; unknown keys raise UsageError.
void apply_config(const std::map<std::string, std::string>& values, RunConfig& config);

/// Value of "--config" in argv, if present.
std::filesystem::path find_config_flag(int argc, const char* const* argv);

}  // namespace dgsum::cli

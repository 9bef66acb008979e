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

#include "config.hpp"

#include <fstream>
#include <functional>
#include <string_view>

namespace dgsum::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_floating_point_v<T>) {
      v = static_cast<T>(std::stod(text, &used));
    } else {
      v = static_cast<T>(std::stoll(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": not a number: " + text);
  }
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected key=value");
    }
    values[trim(std::string_view(text).substr(0, eq))] =
        trim(std::string_view(text).substr(eq + 1));
  }
  return values;
}

void apply_config(const std::map<std::string, std::string>& values, RunConfig& c) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const auto i = [](int& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = parse_number<int>(k, v); };
  };
  const auto d = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = parse_number<double>(k, v); };
  };
  const auto p = [](std::filesystem::path& field) -> Setter {
    return [&field](const std::string&, const std::string& v) { field = v; };
  };
  const std::map<std::string, Setter> setters = {
      {"hidden_size", i(c.model.hidden_size)},
      {"word_emb_size", i(c.model.word_emb_size)},
      {"num_gcn_layers", i(c.model.num_gcn_layers)},
      {"vocab_size", i(c.model.vocab_size)},
      {"beam", i(c.model.beam_size)},
      {"dropout", d(c.train.dropout)},
      {"learning_rate", d(c.train.learning_rate)},
      {"max_grad_norm", d(c.train.max_grad_norm)},
      {"batch_size", i(c.train.batch_size)},
      {"max_epochs", i(c.train.max_epochs)},
      {"patience", i(c.train.patience)},
      {"pretrain_epochs", i(c.pretrain_epochs)},
      {"max_len", i(c.max_len)},
      {"window", i(c.window)},
      {"seed", [&c](const std::string& k, const std::string& v) {
         c.train.seed = parse_number<std::uint64_t>(k, v);
       }},
      {"corpus", p(c.corpus)},
      {"splits", p(c.splits)},
      {"pseudo", p(c.pseudo)},
      {"out_dir", p(c.out_dir)},
      {"word_vectors", p(c.word_vectors)},
  };
  for (const auto& [key, value] : values) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown config key: " + key);
    it->second(key, value);
  }
}

std::filesystem::path find_config_flag(int argc, const char* const* argv) {
  for (int k = 1; k < argc; ++k) {
    const std::string_view arg = argv[k];
    if (arg == "--config") {
      if (k + 1 >= argc) throw UsageError("--config needs a file");
      return argv[k + 1];
    }
    if (arg.rfind("--config=", 0) == 0) return std::string(arg.substr(9));
  }
  return {};
}

}  // namespace dgsum::cli

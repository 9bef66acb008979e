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

#include "dgsum/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace dgsum {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'D', 'G', 'S', 'U', 'M', 'C', 'K', 'P'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw ParseError("truncated checkpoint");
  }
  return v;
}

json config_to_json(const ModelConfig& c) {
  return {{"hidden_size", c.hidden_size},     {"word_emb_size", c.word_emb_size},
          {"num_gcn_layers", c.num_gcn_layers}, {"dropout", c.dropout},
          {"vocab_size", c.vocab_size},       {"num_speakers", c.num_speakers},
          {"beam_size", c.beam_size}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.hidden_size = j.at("hidden_size").get<int>();
  c.word_emb_size = j.at("word_emb_size").get<int>();
  c.num_gcn_layers = j.at("num_gcn_layers").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.vocab_size = j.at("vocab_size").get<int>();
  c.num_speakers = j.at("num_speakers").get<int>();
  c.beam_size = j.at("beam_size").get<int>();
  return c;
}

template <typename From, typename To>
void read_tensor(std::istream& in, MatrixX<To>& m) {
  if constexpr (std::is_same_v<From, To>) {
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(m.size() * sizeof(To)))) {
      throw ParseError("truncated checkpoint tensor data");
    }
  } else {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      m.data()[k] = static_cast<To>(get<From>(in));
    }
  }
}

}  // namespace

template <typename S>
void write_checkpoint(std::ostream& out, const Model<S>& model) {
  json header;
  header["config"] = config_to_json(model.config);
  // Reserved entries are implied by position.
  header["vocabulary"] = std::vector<std::string>(
      model.vocab.words().begin() + Vocabulary::kNumReserved, model.vocab.words().end());
  header["speakers"] = std::vector<std::string>(model.speakers.names().begin() + 1,
                                                model.speakers.names().end());
  header["tensors"] = json::array();
  model.params.for_each([&](const std::string& name, const Parameter<S>& p) {
    header["tensors"].push_back({{"name", name},
                                 {"rows", static_cast<std::int64_t>(p.value.rows())},
                                 {"cols", static_cast<std::int64_t>(p.value.cols())}});
  });
  const std::string text = header.dump();

  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(sizeof(S)));
  put<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  model.params.for_each([&](const std::string&, const Parameter<S>& p) {
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(S)));
  });
  if (!out) throw ParseError("failed writing checkpoint");
}

template <typename S>
void save_checkpoint(const std::filesystem::path& path, const Model<S>& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  write_checkpoint(out, model);
}

template <typename S>
Model<S> read_checkpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a checkpoint file");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto width = get<std::uint8_t>(in);
  if (width != 4 && width != 8) throw ParseError("bad checkpoint scalar width");
  const auto length = get<std::uint64_t>(in);
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) {
    throw ParseError("truncated checkpoint header");
  }

  Model<S> model;
  try {
    const auto header = json::parse(text);
    model.config = config_from_json(header.at("config"));
    model.vocab = Vocabulary(header.at("vocabulary").get<std::vector<std::string>>());
    model.speakers = SpeakerIndex(header.at("speakers").get<std::vector<std::string>>());
    model.params = init_parameters<S>(model.config, 0);

    const auto& tensors = header.at("tensors");
    std::size_t k = 0;
    model.params.for_each([&](const std::string& name, Parameter<S>& p) {
      if (k >= tensors.size()) throw ParseError("checkpoint is missing tensors");
      const auto& t = tensors[k++];
      if (t.at("name").get<std::string>() != name ||
          t.at("rows").get<std::int64_t>() != p.value.rows() ||
          t.at("cols").get<std::int64_t>() != p.value.cols()) {
        throw ParseError("checkpoint tensor " + name + " does not match its config");
      }
      if (width == 4) {
        read_tensor<float>(in, p.value);
      } else {
        read_tensor<double>(in, p.value);
      }
    });
    if (k != tensors.size()) throw ParseError("checkpoint has extra tensors");
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad checkpoint header: ") + e.what());
  }
  if (model.vocab.size() != model.config.vocab_size ||
      model.speakers.size() != model.config.num_speakers) {
    throw ParseError("checkpoint vocabulary does not match its config");
  }
  return model;
}

template <typename S>
Model<S> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_checkpoint<S>(in);
}

template void write_checkpoint<float>(std::ostream&, const Model<float>&);
template void write_checkpoint<double>(std::ostream&, const Model<double>&);
template void save_checkpoint<float>(const std::filesystem::path&, const Model<float>&);
template void save_checkpoint<double>(const std::filesystem::path&, const Model<double>&);
template Model<float> read_checkpoint<float>(std::istream&);
template Model<double> read_checkpoint<double>(std::istream&);
template Model<float> load_checkpoint<float>(const std::filesystem::path&);
template Model<double> load_checkpoint<double>(const std::filesystem::path&);

}  // namespace dgsum

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

#include "dgsum/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace dgsum {
namespace {

constexpr std::array<std::string_view, kNumEdgeRelations> kEdgeLabels = {
    "default-in-discourse", "default-out-discourse", "reverse-in-discourse",
    "reverse-out-discourse", "global", "self"};

std::vector<Vertex> base_vertices(const Meeting& meeting) {
  std::vector<Vertex> v;
  v.reserve(meeting.utterances.size() + meeting.relations.size() + 1);
  for (int i = 0; i < static_cast<int>(meeting.utterances.size()); ++i) {
    v.push_back({VertexKind::kUtterance, i, RelationType::kComment});
  }
  for (int k = 0; k < static_cast<int>(meeting.relations.size()); ++k) {
    v.push_back({VertexKind::kRelationInstance, k, meeting.relations[k].relation});
  }
  return v;
}

}  // namespace

const std::array<EdgeRelation, kNumEdgeRelations>& all_edge_relations() {
  static const std::array<EdgeRelation, kNumEdgeRelations> rels = {
      EdgeRelation::kDefaultInDiscourse, EdgeRelation::kDefaultOutDiscourse,
      EdgeRelation::kReverseInDiscourse, EdgeRelation::kReverseOutDiscourse,
      EdgeRelation::kGlobal, EdgeRelation::kSelf};
  return rels;
}

std::string_view to_string(EdgeRelation relation) {
  return kEdgeLabels.at(static_cast<std::size_t>(relation));
}

std::string_view to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::kUtterance: return "utterance";
    case VertexKind::kRelationInstance: return "relation";
    case VertexKind::kGlobal: return "global";
  }
  return "?";
}

LeviGraph levi_transform(const Meeting& meeting) {
  LeviGraph g;
  g.vertices = base_vertices(meeting);
  const int n_utt = static_cast<int>(meeting.utterances.size());
  for (int k = 0; k < static_cast<int>(meeting.relations.size()); ++k) {
    const auto& a = meeting.relations[k];
    const int r = n_utt + k;
    g.edges.push_back({a.source, LeviRelation::kDefault, r});
    g.edges.push_back({r, LeviRelation::kDefault, a.target});
    g.edges.push_back({r, LeviRelation::kReverse, a.source});
    g.edges.push_back({a.target, LeviRelation::kReverse, r});
  }
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    g.edges.push_back({v, LeviRelation::kSelf, v});
  }
  return g;
}

DiscourseGraph build_discourse_graph(const Meeting& meeting) {
  const LeviGraph levi = levi_transform(meeting);
  DiscourseGraph g;
  g.num_utterances = static_cast<int>(meeting.utterances.size());
  g.vertices = levi.vertices;
  const auto is_relation = [&](int v) {
    return g.vertices[v].kind == VertexKind::kRelationInstance;
  };
  g.edges.reserve(levi.edges.size() + 3 * g.vertices.size() + 1);
  for (const auto& e : levi.edges) {
    EdgeRelation label = EdgeRelation::kSelf;
    switch (e.label) {
      case LeviRelation::kSelf:
        label = EdgeRelation::kSelf;
        break;
      case LeviRelation::kDefault:
        label = is_relation(e.dst) ? EdgeRelation::kDefaultInDiscourse
                                   : EdgeRelation::kDefaultOutDiscourse;
        break;
      case LeviRelation::kReverse:
        label = is_relation(e.dst) ? EdgeRelation::kReverseInDiscourse
                                   : EdgeRelation::kReverseOutDiscourse;
        break;
    }
    g.edges.push_back({e.src, label, e.dst});
  }

  const int global = static_cast<int>(g.vertices.size());
  g.vertices.push_back({VertexKind::kGlobal, 0, RelationType::kComment});
  for (int v = 0; v < global; ++v) {
    g.edges.push_back({global, EdgeRelation::kGlobal, v});
    g.edges.push_back({v, EdgeRelation::kGlobal, global});
  }
  g.edges.push_back({global, EdgeRelation::kSelf, global});
  return g;
}

std::vector<int> neighbors(const DiscourseGraph& graph, int vertex,
                           EdgeRelation relation) {
  if (vertex < 0 || vertex >= graph.num_vertices()) {
    throw std::out_of_range("unknown vertex id " + std::to_string(vertex));
  }
  std::vector<int> out;
  for (const auto& e : graph.edges) {
    if (e.dst == vertex && e.label == relation) out.push_back(e.src);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Meeting drop_relations(const Meeting& meeting, double keep_fraction,
                       std::uint64_t seed) {
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
    throw std::invalid_argument("keep_fraction must lie in [0, 1]");
  }
  const auto n = meeting.relations.size();
  const auto keep = static_cast<std::size_t>(
      std::floor(keep_fraction * static_cast<double>(n) + 0.5));
  Meeting out = meeting;
  if (keep >= n) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates; std::shuffle's draw sequence is library-specific.
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(order[i], order[j]);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  out.relations.clear();
  for (auto k : order) out.relations.push_back(meeting.relations[k]);
  return out;
}

Meeting filter_relation_type(const Meeting& meeting, RelationType keep) {
  Meeting out = meeting;
  std::erase_if(out.relations, [keep](const DiscourseAnnotation& a) {
    return a.relation != keep;
  });
  return out;
}

std::string graph_to_json(const DiscourseGraph& graph) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < graph.num_vertices(); ++v) {
    const auto& vx = graph.vertices[v];
    nlohmann::json jv = {{"id", v}, {"kind", std::string(to_string(vx.kind))}};
    if (vx.kind == VertexKind::kUtterance) jv["utterance"] = vx.payload;
    if (vx.kind == VertexKind::kRelationInstance) {
      jv["annotation"] = vx.payload;
      jv["relation"] = std::string(to_string(vx.relation));
    }
    j["vertices"].push_back(std::move(jv));
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges) {
    j["edges"].push_back(
        nlohmann::json::array({e.src, std::string(to_string(e.label)), e.dst}));
  }
  return j.dump();
}

}  // namespace dgsum

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
/// Discourse graphs: every annotated relation becomes its own vertex
/// (Levi transformation), edges are typed by direction and by whether the
/// relation vertex is their head or tail, and one global vertex links to
/// everything.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dgsum/corpus.hpp"

namespace dgsum {

enum class VertexKind { kUtterance, kRelationInstance, kGlobal };

enum class EdgeRelation : int {
  kDefaultInDiscourse = 0,
  kDefaultOutDiscourse,
  kReverseInDiscourse,
  kReverseOutDiscourse,
  kGlobal,
  kSelf,
};

inline constexpr int kNumEdgeRelations = 6;

const std::array<EdgeRelation, kNumEdgeRelations>& all_edge_relations();
std::string_view to_string(EdgeRelation relation);
std::string_view to_string(VertexKind kind);

struct Vertex {
  VertexKind kind = VertexKind::kUtterance;
  /// Utterance index for kUtterance, annotation index for kRelationInstance.
  int payload = 0;
  /// Meaningful for kRelationInstance only.
  RelationType relation = RelationType::kComment;

  bool operator==(const Vertex&) const = default;
};

template <typename Label>
struct Edge {
  int src = 0;
  Label label{};
  int dst = 0;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

/// Output of the plain Levi transformation.
enum class LeviRelation { kDefault, kReverse, kSelf };

struct LeviGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge<LeviRelation>> edges;
};

/// Vertices ordered as utterances, then relation instances in annotation
/// order, then the global vertex.
struct DiscourseGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge<EdgeRelation>> edges;
  int num_utterances = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int global_vertex() const { return num_vertices() - 1; }
  int relation_vertex(int annotation) const {
    return num_utterances + annotation;
  }
};

/// Relation vertices plus default / reverse / self edges. No global vertex.
LeviGraph levi_transform(const Meeting& meeting);

DiscourseGraph build_discourse_graph(const Meeting& meeting);

/// In-neighbours of `vertex` under `relation`, ascending. Throws
/// std::out_of_range for an unknown vertex.
std::vector<int> neighbors(const DiscourseGraph& graph, int vertex,
                           EdgeRelation relation);

/// Keeps round-half-up(keep_fraction * |relations|) annotations sampled
/// uniformly without replacement; survivors keep their original order.
Meeting drop_relations(const Meeting& meeting, double keep_fraction,
                       std::uint64_t seed);

Meeting filter_relation_type(const Meeting& meeting, RelationType keep);

/// Debug dump `{"vertices":[...], "edges":[[src,label,dst],...]}`.
std::string graph_to_json(const DiscourseGraph& graph);

}  // namespace dgsum

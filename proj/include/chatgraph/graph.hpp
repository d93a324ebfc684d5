#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chatgraph {

using VertexId = std::uint32_t;

/// Weighted graph over users with no self-loops. Undirected graphs store
/// each edge once under the key (min, max).
class ConversationalGraph {
 public:
  using EdgeMap = std::map<std::pair<VertexId, VertexId>, double>;

  explicit ConversationalGraph(bool directed = true) : directed_(directed) {}

  /// Returns the id of `name`, inserting it if new. Ids follow insertion order.
  VertexId add_vertex(std::string_view name);

  /// Adds `w` to the weight of (u, v), creating the edge at 0 if absent.
  /// Throws Error when u == v or w is not positive.
  void add_weight(VertexId u, VertexId v, double w);
  void add_weight(std::string_view u, std::string_view v, double w);

  bool directed() const { return directed_; }
  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::optional<VertexId> find(std::string_view name) const;
  const std::string& name(VertexId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }

  /// 0 when absent. Order-insensitive for undirected graphs.
  double weight(VertexId u, VertexId v) const;
  const EdgeMap& edges() const { return edges_; }

 private:
  bool directed_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> ids_;
  EdgeMap edges_;
};

enum class Direction { Undirected, Directed, In, Out };

/// How weighted shortest-path measures turn a weight into a traversal cost.
enum class CostMode { Reciprocal, Raw };

struct Arc {
  VertexId to;
  double weight;
};

/// Read-only adjacency of a graph under one weight/direction variant.
///
/// Directed and Out keep the stored orientation, In reverses every edge, and
/// Undirected merges antiparallel edges by summing their weights. `out(v)`
/// always means "arcs leaving v in the view's orientation", so a measure
/// written against `out` computes its outgoing variant on an Out view and its
/// incoming variant on an In view.
class GraphView {
 public:
  GraphView(const ConversationalGraph& graph, bool use_weights, Direction mode,
            CostMode cost = CostMode::Reciprocal);

  std::size_t vertex_count() const { return vertex_count_; }
  /// Arc count; each undirected edge is counted once.
  std::size_t edge_count() const { return edge_count_; }
  bool directed() const { return mode_ != Direction::Undirected; }
  bool weighted() const { return use_weights_; }
  Direction mode() const { return mode_; }

  std::span<const Arc> out(VertexId v) const {
    return {out_arcs_.data() + out_offsets_[v],
            out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const Arc> in(VertexId v) const {
    return {in_arcs_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  /// Traversal cost of an arc for shortest-path measures.
  double cost(const Arc& arc) const {
    if (!use_weights_) return 1.0;
    return cost_mode_ == CostMode::Reciprocal ? 1.0 / arc.weight : arc.weight;
  }

  /// Weight of v -> u in this view, 0 if absent.
  double weight(VertexId v, VertexId u) const;

 private:
  std::size_t vertex_count_;
  std::size_t edge_count_ = 0;
  bool use_weights_;
  Direction mode_;
  CostMode cost_mode_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<Arc> out_arcs_, in_arcs_;
};

/// Builds a view; In/Out on an undirected graph is an error, as is Directed.
GraphView view(const ConversationalGraph& graph, bool use_weights,
               Direction mode, CostMode cost = CostMode::Reciprocal);

/// Edge-list dump: "u<TAB>v<TAB>weight" per edge, isolated vertices as "u".
void write_edge_list(std::ostream& out, const ConversationalGraph& graph);

std::string_view direction_code(Direction d);

}  // namespace chatgraph

#include "chatgraph/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "chatgraph/error.hpp"

namespace chatgraph {

VertexId ConversationalGraph::add_vertex(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<VertexId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

void ConversationalGraph::add_weight(VertexId u, VertexId v, double w) {
  if (u == v) throw Error("self-loop on '" + name(u) + "'");
  if (!(w > 0.0)) throw Error("edge weight must be positive");
  if (u >= names_.size() || v >= names_.size()) throw Error("unknown vertex id");
  if (!directed_ && v < u) std::swap(u, v);
  edges_[{u, v}] += w;
}

void ConversationalGraph::add_weight(std::string_view u, std::string_view v,
                                     double w) {
  if (u == v) throw Error("self-loop on '" + std::string(u) + "'");
  const VertexId from = add_vertex(u);
  const VertexId to = add_vertex(v);
  add_weight(from, to, w);
}

std::optional<VertexId> ConversationalGraph::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

double ConversationalGraph::weight(VertexId u, VertexId v) const {
  if (!directed_ && v < u) std::swap(u, v);
  auto it = edges_.find({u, v});
  return it == edges_.end() ? 0.0 : it->second;
}

namespace {

void build_csr(std::size_t n,
               std::vector<std::pair<VertexId, Arc>>& arcs,
               std::vector<std::size_t>& offsets, std::vector<Arc>& out) {
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second.to < b.second.to;
  });
  offsets.assign(n + 1, 0);
  for (const auto& [from, arc] : arcs) ++offsets[from + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  out.clear();
  out.reserve(arcs.size());
  for (const auto& [from, arc] : arcs) out.push_back(arc);
}

}  // namespace

GraphView::GraphView(const ConversationalGraph& graph, bool use_weights,
                     Direction mode, CostMode cost)
    : vertex_count_(graph.vertex_count()),
      use_weights_(use_weights),
      mode_(mode),
      cost_mode_(cost) {
  if (mode != Direction::Undirected && !graph.directed()) {
    throw Error("directed view of an undirected graph");
  }
  std::vector<std::pair<VertexId, Arc>> out_list, in_list;
  if (mode == Direction::Undirected) {
    std::map<std::pair<VertexId, VertexId>, double> merged;
    for (const auto& [key, w] : graph.edges()) {
      auto [u, v] = key;
      merged[{std::min(u, v), std::max(u, v)}] += w;
    }
    for (const auto& [key, w] : merged) {
      double ww = use_weights ? w : 1.0;
      out_list.push_back({key.first, Arc{key.second, ww}});
      out_list.push_back({key.second, Arc{key.first, ww}});
    }
    edge_count_ = merged.size();
    in_list = out_list;
  } else {
    bool reverse = mode == Direction::In;
    for (const auto& [key, w] : graph.edges()) {
      auto [u, v] = key;
      if (reverse) std::swap(u, v);
      double ww = use_weights ? w : 1.0;
      out_list.push_back({u, Arc{v, ww}});
      in_list.push_back({v, Arc{u, ww}});
    }
    edge_count_ = graph.edge_count();
  }
  build_csr(vertex_count_, out_list, out_offsets_, out_arcs_);
  build_csr(vertex_count_, in_list, in_offsets_, in_arcs_);
}

double GraphView::weight(VertexId v, VertexId u) const {
  auto arcs = out(v);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), u,
                             [](const Arc& a, VertexId x) { return a.to < x; });
  return (it != arcs.end() && it->to == u) ? it->weight : 0.0;
}

GraphView view(const ConversationalGraph& graph, bool use_weights,
               Direction mode, CostMode cost) {
  return GraphView(graph, use_weights, mode, cost);
}

void write_edge_list(std::ostream& out, const ConversationalGraph& graph) {
  std::vector<bool> touched(graph.vertex_count(), false);
  char buf[64];
  for (const auto& [key, w] : graph.edges()) {
    touched[key.first] = touched[key.second] = true;
    std::snprintf(buf, sizeof buf, "%.17g", w);
    out << graph.name(key.first) << '\t' << graph.name(key.second) << '\t' << buf
        << '\n';
  }
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (!touched[v]) out << graph.name(v) << '\n';
  }
}

std::string_view direction_code(Direction d) {
  switch (d) {
    case Direction::Undirected:
      return "U";
    case Direction::Directed:
      return "D";
    case Direction::In:
      return "I";
    case Direction::Out:
      return "O";
  }
  return "?";
}

}  // namespace chatgraph

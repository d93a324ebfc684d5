#include "chatgraph/features.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>

#include "chatgraph/community.hpp"
#include "chatgraph/error.hpp"
#include "chatgraph/graph_measures.hpp"
#include "chatgraph/parallel.hpp"

namespace chatgraph {

namespace {

struct MeasureRow {
  const char* id;
  const char* table_name;
  bool vertex_scale;
  const char* weights;     // allowed weight codes
  const char* directions;  // allowed direction codes
  const char* note;
};

// Rows of the measure table in presentation order.
constexpr MeasureRow kMeasures[] = {
    {"weak_components", "Weak Components (graph, macro)", false, "-", "U", ""},
    {"strong_components", "Strong Components (graph, macro)", false, "-", "D", ""},
    {"adhesion", "Adhesion (graph, macro)", false, "-", "D", "edge connectivity"},
    {"cohesion", "Cohesion (graph, macro)", false, "-", "D", "vertex connectivity"},
    {"articulation_points", "Articulation Points (graph, macro)", false, "-", "U", ""},
    {"diameter", "Diameter (graph, macro)", false, "UW", "UD",
     "weighted lengths use 1/weight costs"},
    {"radius", "Radius (graph, macro)", false, "U", "UIO",
     "minimum eccentricity over vertices that reach another vertex"},
    {"average_distance", "Average Distance (graph, macro)", false, "U", "UD",
     "reachable pairs only"},
    {"clique_count", "Clique Count (graph, meso)", false, "-", "-",
     "maximal cliques of size >= 2"},
    {"communities", "Communities (graph, meso)", false, "U", "U",
     "Louvain modularity maximization substituted for InfoMap; run on the "
     "undirected form"},
    {"modularity", "Modularity (graph, meso)", false, "UW", "U",
     "partition from the Louvain substitute"},
    {"vertex_count", "Vertices (graph, micro)", false, "-", "-", ""},
    {"edge_count", "Edges (graph, micro)", false, "-", "-", ""},
    {"density", "Density (graph, micro)", false, "-", "-", ""},
    {"global_transitivity", "Global Transitivity (graph, micro)", false, "U", "U", ""},
    {"reciprocity", "Reciprocity (graph, micro)", false, "-", "D", ""},
    {"assortativity", "Degree Assortativity (graph, micro)", false, "-", "UD", ""},

    {"eigenvector", "Eigenvector Centrality (vertex, macro)", true, "UW", "UD", ""},
    {"hub", "Hub Score (vertex, macro)", true, "UW", "D", ""},
    {"authority", "Authority Score (vertex, macro)", true, "UW", "D", ""},
    {"alpha", "Alpha Centrality (vertex, macro)", true, "UW", "D",
     "attenuation 0.5 / max strength"},
    {"power", "Power Centrality (vertex, macro)", true, "U", "D",
     "attenuation 0.25 / max strength"},
    {"pagerank", "PageRank Centrality (vertex, macro)", true, "UW", "UD", ""},
    {"subgraph", "Subgraph Centrality (vertex, macro)", true, "U", "U", ""},
    {"betweenness", "Betweenness Centrality (vertex, macro)", true, "UW", "UD",
     "unnormalized"},
    {"closeness", "Closeness Centrality (vertex, macro)", true, "UW", "UIO",
     "reachable vertices only"},
    {"eccentricity", "Eccentricity (vertex, macro)", true, "U", "UIO", ""},
    {"articulation_point", "Articulation Point (vertex, macro)", true, "-", "U", ""},
    {"coreness", "Coreness Score (vertex, meso)", true, "-", "UIO", ""},
    {"participation", "Participation Coefficient (vertex, meso)", true, "U", "UIO",
     "partition from the Louvain substitute"},
    {"within_module_degree", "Internal Intensity (vertex, meso)", true, "U", "UIO",
     "partition from the Louvain substitute"},
    {"external_intensity", "External Intensity (vertex, meso)", true, "U", "UIO",
     "reconstructed definition: within-community z-score of external degree"},
    {"diversity", "Diversity (vertex, meso)", true, "U", "UIO",
     "reconstructed definition: share of other communities reached"},
    {"heterogeneity", "Heterogeneity (vertex, meso)", true, "U", "UIO",
     "reconstructed definition: within-community z-score of the spread of "
     "external links"},
    {"degree", "Degree Centrality (vertex, micro)", true, "U", "UIO", ""},
    {"strength", "Strength Centrality (vertex, micro)", true, "W", "UIO", ""},
    {"local_transitivity", "Local Transitivity (vertex, micro)", true, "UW", "U",
     "weighted form after Barrat"},
    {"burt_constraint", "Burt's Constraint (vertex, micro)", true, "UW", "-", ""},
};

const MeasureRow& measure_row(const std::string& id) {
  for (const auto& row : kMeasures)
    if (id == row.id) return row;
  throw Error("unknown measure '" + id + "'");
}

bool is_directed_code(char d) { return d == 'D' || d == 'I' || d == 'O'; }

Direction to_direction(char d) {
  switch (d) {
    case 'D':
      return Direction::Directed;
    case 'I':
      return Direction::In;
    case 'O':
      return Direction::Out;
    default:
      return Direction::Undirected;
  }
}

// Lazily computes and memoizes measure results for one graph.
class GraphEvaluator {
 public:
  GraphEvaluator(const ConversationalGraph& graph, VertexId target,
                 const MeasureConfig& config)
      : graph_(graph), target_(target), config_(config) {}

  double value(const FeatureSpec& spec) {
    if (spec.scale == Scale::Graph) return graph_value(spec);
    const auto& values = vertex_values(spec.measure, spec.weights, spec.direction);
    if (spec.scale == Scale::Vertex) return values.at(target_);
    return average_over_vertices(values);
  }

 private:
  const GraphView& get_view(char weights, char direction) {
    const bool w = weights == 'W';
    const Direction d = to_direction(direction);
    auto key = std::make_pair(w, static_cast<int>(d));
    auto it = views_.find(key);
    if (it == views_.end()) {
      it = views_.emplace(key, std::make_unique<GraphView>(graph_, w, d,
                                                           config_.cost_mode))
               .first;
    }
    return *it->second;
  }

  const Partition& partition() {
    if (!partition_) {
      partition_ = detect_communities(get_view('U', 'U'), config_.community_seed);
    }
    return *partition_;
  }

  const std::vector<VertexRoles>& roles(char direction) {
    auto it = roles_.find(direction);
    if (it == roles_.end()) {
      it = roles_.emplace(direction, vertex_roles(get_view('U', direction), partition()))
               .first;
    }
    return it->second;
  }

  const std::vector<double>& vertex_values(const std::string& measure, char w,
                                           char d) {
    auto key = measure + '.' + w + '.' + d;
    auto it = vertex_cache_.find(key);
    if (it != vertex_cache_.end()) return it->second;
    std::vector<double> values = compute_vertex(measure, w, d);
    return vertex_cache_.emplace(std::move(key), std::move(values)).first->second;
  }

  std::vector<double> compute_vertex(const std::string& m, char w, char d) {
    const char dir = d == '-' ? 'U' : d;
    auto from_roles = [&](double VertexRoles::*field) {
      const auto& r = roles(dir);
      std::vector<double> out(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i].*field;
      return out;
    };
    if (m == "eigenvector") return eigenvector_centrality(get_view(w, dir), config_);
    if (m == "hub" || m == "authority") {
      auto key = std::string(1, w);
      auto it = hits_.find(key);
      if (it == hits_.end()) it = hits_.emplace(key, hits(get_view(w, 'D'), config_)).first;
      return m == "hub" ? it->second.hub : it->second.authority;
    }
    if (m == "alpha") return alpha_centrality(get_view(w, 'D'), config_);
    if (m == "power") return power_centrality(get_view('U', 'D'), config_);
    if (m == "pagerank") return pagerank(get_view(w, dir), config_);
    if (m == "subgraph") return subgraph_centrality(get_view('U', 'U'));
    if (m == "betweenness") return betweenness(get_view(w, dir));
    if (m == "closeness") return closeness(get_view(w, dir));
    if (m == "eccentricity") return eccentricity(get_view('U', dir));
    if (m == "articulation_point") {
      auto cut = articulation_points(graph_);
      return std::vector<double>(cut.begin(), cut.end());
    }
    if (m == "coreness") {
      auto core = coreness(get_view('U', dir));
      return std::vector<double>(core.begin(), core.end());
    }
    if (m == "participation") return from_roles(&VertexRoles::participation);
    if (m == "within_module_degree") return from_roles(&VertexRoles::within_module_degree);
    if (m == "external_intensity") return from_roles(&VertexRoles::external_intensity);
    if (m == "diversity") return from_roles(&VertexRoles::diversity);
    if (m == "heterogeneity") return from_roles(&VertexRoles::heterogeneity);
    if (m == "degree") return degree_centrality(get_view('U', dir));
    if (m == "strength") return strength_centrality(get_view('W', dir));
    if (m == "local_transitivity") return local_transitivity(get_view(w, 'U'));
    if (m == "burt_constraint") return burts_constraint(get_view(w, 'U'));
    throw Error("no vertex measure '" + m + "'");
  }

  const DistanceStats& distances(char w, char d) {
    auto key = std::make_pair(w, d);
    auto it = distance_cache_.find(key);
    if (it == distance_cache_.end()) {
      it = distance_cache_.emplace(key, distance_stats(get_view(w, d))).first;
    }
    return it->second;
  }

  const Connectivity& connect() {
    if (!connectivity_) connectivity_ = connectivity(graph_);
    return *connectivity_;
  }

  double graph_value(const FeatureSpec& spec) {
    const std::string& m = spec.measure;
    const char w = spec.weights == 'W' ? 'W' : 'U';
    if (m == "weak_components") return static_cast<double>(components(graph_).weak);
    if (m == "strong_components") return static_cast<double>(components(graph_).strong);
    if (m == "adhesion") return static_cast<double>(connect().adhesion);
    if (m == "cohesion") return static_cast<double>(connect().cohesion);
    if (m == "articulation_points")
      return static_cast<double>(articulation_point_count(graph_));
    if (m == "diameter") return distances(w, spec.direction).diameter;
    if (m == "radius") return distances('U', spec.direction).radius;
    if (m == "average_distance") return distances('U', spec.direction).average_distance;
    if (m == "clique_count")
      return static_cast<double>(clique_count(graph_, config_.clique_vertex_limit));
    if (m == "communities") return static_cast<double>(partition().community_count);
    if (m == "modularity") return modularity(get_view(w, 'U'), partition());
    if (m == "vertex_count") return static_cast<double>(graph_.vertex_count());
    if (m == "edge_count") return static_cast<double>(graph_.edge_count());
    if (m == "density") return basic_stats(graph_).density;
    if (m == "global_transitivity") return global_transitivity(graph_);
    if (m == "reciprocity") return reciprocity(graph_).value;
    if (m == "assortativity") return assortativity(graph_, spec.direction == 'D').value;
    throw Error("no graph measure '" + m + "'");
  }

  const ConversationalGraph& graph_;
  VertexId target_;
  const MeasureConfig& config_;
  std::map<std::pair<bool, int>, std::unique_ptr<GraphView>> views_;
  std::optional<Partition> partition_;
  std::map<char, std::vector<VertexRoles>> roles_;
  std::map<std::string, HitsScores> hits_;
  std::map<std::string, std::vector<double>> vertex_cache_;
  std::map<std::pair<char, char>, DistanceStats> distance_cache_;
  std::optional<Connectivity> connectivity_;
};

}  // namespace

std::string_view graph_kind_name(GraphKind g) {
  switch (g) {
    case GraphKind::Before:
      return "before";
    case GraphKind::After:
      return "after";
    case GraphKind::Full:
      return "full";
  }
  return "?";
}

std::string_view scale_name(Scale s) {
  switch (s) {
    case Scale::Vertex:
      return "vertex";
    case Scale::GraphAvg:
      return "avg";
    case Scale::Graph:
      return "graph";
  }
  return "?";
}

std::string FeatureSpec::name() const {
  std::string out(graph_kind_name(graph));
  out += '.';
  out += measure;
  out += '.';
  out += weights;
  out += '.';
  out += direction;
  out += '.';
  out += scale_name(scale);
  return out;
}

FeatureCatalog::FeatureCatalog(std::vector<FeatureSpec> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.name()).second) {
      throw Error("duplicate catalog entry '" + e.name() + "'");
    }
  }
}

std::vector<std::string> FeatureCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name());
  return out;
}

FeatureCatalog FeatureCatalog::restrict_to(std::span<const std::string> names) const {
  std::set<std::string> wanted(names.begin(), names.end());
  std::vector<FeatureSpec> kept;
  for (const auto& e : entries_) {
    if (wanted.erase(e.name()) > 0) kept.push_back(e);
  }
  if (!wanted.empty()) throw Error("unknown feature '" + *wanted.begin() + "'");
  return FeatureCatalog(std::move(kept));
}

bool FeatureCatalog::uses(GraphKind g) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [g](const FeatureSpec& e) { return e.graph == g; });
}

bool FeatureCatalog::needs_directed() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const FeatureSpec& e) {
    return is_directed_code(e.direction);
  });
}

FeatureCatalog build_catalog(const VariantMatrix& matrix) {
  std::vector<FeatureSpec> entries;
  std::vector<GraphKind> graphs;
  if (matrix.before) graphs.push_back(GraphKind::Before);
  if (matrix.after) graphs.push_back(GraphKind::After);
  if (matrix.full) graphs.push_back(GraphKind::Full);
  for (GraphKind g : graphs) {
    for (const auto& row : kMeasures) {
      for (const char* w = row.weights; *w; ++w) {
        if (*w == 'W' && !matrix.weighted) continue;
        for (const char* d = row.directions; *d; ++d) {
          if (is_directed_code(*d) && !matrix.directed) continue;
          FeatureSpec spec{g, row.id, *w, *d, Scale::Graph};
          if (row.vertex_scale) {
            spec.scale = Scale::Vertex;
            entries.push_back(spec);
            spec.scale = Scale::GraphAvg;
          }
          entries.push_back(spec);
        }
      }
    }
  }
  return FeatureCatalog(std::move(entries));
}

void write_manifest(std::ostream& out, const FeatureCatalog& catalog,
                    const MeasureConfig& config) {
  std::size_t per_graph[3] = {0, 0, 0};
  for (const auto& e : catalog.entries()) ++per_graph[static_cast<int>(e.graph)];
  out << "# feature catalog manifest\n";
  out << "# entries\t" << catalog.size() << '\n';
  out << "# per_graph\tbefore=" << per_graph[0] << "\tafter=" << per_graph[1]
      << "\tfull=" << per_graph[2] << '\n';
  out << "# reference_per_graph\t" << kReferencePerGraphCount << '\n';
  for (int g = 0; g < 3; ++g) {
    if (per_graph[g] == 0) continue;
    long delta = static_cast<long>(per_graph[g]) -
                 static_cast<long>(kReferencePerGraphCount);
    out << "# reconciliation\t" << graph_kind_name(static_cast<GraphKind>(g))
        << "\tdelta=" << delta << '\n';
  }
  out << "# pagerank_damping\t" << format_double(config.pagerank_damping) << '\n';
  out << "# alpha_attenuation\t" << format_double(config.alpha_scale)
      << " / max(in-strength, out-strength)\n";
  out << "# power_attenuation\t" << format_double(config.power_scale)
      << " / max(in-strength, out-strength)\n";
  out << "# iteration_tolerance\t" << format_double(config.tolerance) << '\n';
  out << "# max_iterations\t" << config.max_iterations << '\n';
  out << "# community_seed\t" << config.community_seed << '\n';
  out << "# weighted_distance_cost\t"
      << (config.cost_mode == CostMode::Reciprocal ? "1/weight" : "weight") << '\n';
  out << "# columns: name, measure-table row, weights, direction, scale, notes\n";
  for (const auto& e : catalog.entries()) {
    const auto& row = measure_row(e.measure);
    out << e.name() << '\t' << row.table_name << '\t' << e.weights << '\t'
        << e.direction << '\t' << scale_name(e.scale) << '\t' << row.note << '\n';
  }
}

std::vector<double> evaluate_catalog(const GraphTriple& graphs,
                                     std::string_view target_author,
                                     const MeasureConfig& config,
                                     const FeatureCatalog& catalog) {
  config.validate();
  std::unique_ptr<GraphEvaluator> evaluators[3];
  const ConversationalGraph* by_kind[3] = {&graphs.before, &graphs.after, &graphs.full};
  std::vector<double> values(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto& spec = catalog[i];
    const int k = static_cast<int>(spec.graph);
    if (!evaluators[k]) {
      const auto& g = *by_kind[k];
      if (is_directed_code(spec.direction) && !g.directed()) {
        throw Error("catalog entry '" + spec.name() + "' needs a directed graph");
      }
      auto target = g.find(target_author);
      if (!target) throw Error("target author missing from the graph");
      evaluators[k] = std::make_unique<GraphEvaluator>(g, *target, config);
    }
    values[i] = evaluators[k]->value(spec);
  }
  return values;
}

FeatureVector featurize(const Corpus& corpus, std::string_view target_id,
                        std::size_t context_size, const ExtractionParams& params,
                        const MeasureConfig& config, const FeatureCatalog& catalog) {
  if (catalog.needs_directed() && !params.directed) {
    throw Error("catalog has directed variants but extraction is undirected");
  }
  ContextPeriod ctx = context_period(corpus, target_id, context_size);
  GraphSelection which{catalog.uses(GraphKind::Before), catalog.uses(GraphKind::After),
                       catalog.uses(GraphKind::Full)};
  GraphTriple graphs = extract(ctx, params, corpus.references(), which);

  FeatureVector fv;
  fv.message_id = std::string(target_id);
  fv.label = ctx.target->label;
  fv.past_size = ctx.past.size();
  fv.future_size = ctx.future.size();
  fv.values = evaluate_catalog(graphs, ctx.target->author, config, catalog);
  return fv;
}

int label_value(Label label) {
  switch (label) {
    case Label::Abuse:
      return 1;
    case Label::NonAbuse:
      return 0;
    case Label::Unlabeled:
      return -1;
  }
  return -1;
}

FeaturizeResult featurize_corpus(const Corpus& corpus,
                                 std::span<const std::string> targets,
                                 std::size_t context_size,
                                 const ExtractionParams& params,
                                 const MeasureConfig& config,
                                 const FeatureCatalog& catalog, std::size_t workers) {
  if (workers < 1) throw Error("at least one worker is required");
  std::vector<std::optional<FeatureVector>> rows(targets.size());
  std::vector<std::string> errors(targets.size());
  parallel_for(targets.size(), workers, [&](std::size_t i) {
    try {
      rows[i] = featurize(corpus, targets[i], context_size, params, config, catalog);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  FeaturizeResult result{Dataset(catalog.names()), {}, {}, {}};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!rows[i]) {
      result.failures.push_back({targets[i], errors[i]});
      continue;
    }
    result.dataset.add_row(rows[i]->message_id, label_value(rows[i]->label),
                           rows[i]->values);
    result.past_sizes.push_back(rows[i]->past_size);
    result.future_sizes.push_back(rows[i]->future_size);
  }
  return result;
}

}  // namespace chatgraph

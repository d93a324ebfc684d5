#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chatgraph/corpus.hpp"
#include "chatgraph/dataset.hpp"
#include "chatgraph/extraction.hpp"
#include "chatgraph/vertex_measures.hpp"

namespace chatgraph {

enum class GraphKind { Before, After, Full };
enum class Scale { Vertex, GraphAvg, Graph };

std::string_view graph_kind_name(GraphKind g);
std::string_view scale_name(Scale s);

/// One catalog column. `weights` is 'U', 'W' or '-' (no weight axis);
/// `direction` is 'U', 'D', 'I', 'O' or '-'.
struct FeatureSpec {
  GraphKind graph = GraphKind::Full;
  std::string measure;
  char weights = '-';
  char direction = '-';
  Scale scale = Scale::Graph;

  /// "<graph>.<measure>.<weights>.<direction>.<scale>", e.g.
  /// "full.closeness.W.O.vertex".
  std::string name() const;
};

/// Which variants of the measure table to materialize.
struct VariantMatrix {
  bool weighted = true;  // emit W variants
  bool directed = true;  // emit D / I / O variants
  bool before = true;
  bool after = true;
  bool full = true;
};

class FeatureCatalog {
 public:
  FeatureCatalog() = default;
  explicit FeatureCatalog(std::vector<FeatureSpec> entries);

  std::size_t size() const { return entries_.size(); }
  const std::vector<FeatureSpec>& entries() const { return entries_; }
  const FeatureSpec& operator[](std::size_t i) const { return entries_[i]; }
  std::vector<std::string> names() const;

  /// Entries whose names appear in `names`, in catalog order. Throws Error
  /// on a name the catalog does not know.
  FeatureCatalog restrict_to(std::span<const std::string> names) const;

  bool uses(GraphKind g) const;
  bool needs_directed() const;

 private:
  std::vector<FeatureSpec> entries_;
};

FeatureCatalog build_catalog(const VariantMatrix& matrix = {});

/// Per-graph entry count of the materialized measure table this catalog
/// tries to match.
inline constexpr std::size_t kReferencePerGraphCount = 153;

/// Text manifest: one line per entry with its measure-table row, plus the
/// measure parameters and the per-graph count reconciliation.
void write_manifest(std::ostream& out, const FeatureCatalog& catalog,
                    const MeasureConfig& config);

struct FeatureVector {
  std::string message_id;
  std::vector<double> values;
  std::size_t past_size = 0;
  std::size_t future_size = 0;
  Label label = Label::Unlabeled;
};

/// Evaluates every catalog entry for one targeted message. Vertex-scale
/// entries describe the target's author.
FeatureVector featurize(const Corpus& corpus, std::string_view target_id,
                        std::size_t context_size, const ExtractionParams& params,
                        const MeasureConfig& config, const FeatureCatalog& catalog);

/// Evaluates a catalog on already-extracted graphs.
std::vector<double> evaluate_catalog(const GraphTriple& graphs,
                                     std::string_view target_author,
                                     const MeasureConfig& config,
                                     const FeatureCatalog& catalog);

struct FeaturizeFailure {
  std::string message_id;
  std::string error;
};

struct FeaturizeResult {
  Dataset dataset;
  std::vector<FeaturizeFailure> failures;  // rows left out of `dataset`
  std::vector<std::size_t> past_sizes, future_sizes;
};

/// Featurizes `targets` on `workers` threads. Row order follows `targets`
/// whatever the worker count.
FeaturizeResult featurize_corpus(const Corpus& corpus,
                                 std::span<const std::string> targets,
                                 std::size_t context_size,
                                 const ExtractionParams& params,
                                 const MeasureConfig& config,
                                 const FeatureCatalog& catalog,
                                 std::size_t workers);

int label_value(Label label);

}  // namespace chatgraph

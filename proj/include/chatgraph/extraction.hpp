#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chatgraph/corpus.hpp"
#include "chatgraph/graph.hpp"

namespace chatgraph {

/// Receiver scoring functions. Each assigns rank-decreasing weights that sum
/// to 1 over a list of length N, except LinearPrinted, the unnormalized
/// (N - i) / sum(1..N) form kept only for comparison runs.
enum class Strategy { Uniform, Linear, Recursive, LinearPrinted };

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

struct ExtractionParams {
  std::size_t window_size = 10;
  Strategy strategy = Strategy::Recursive;
  bool directed = true;
  std::size_t max_window = 19;

  void validate() const;
};

/// Score of the receiver at 1-based rank i in a list of length n.
double score(Strategy strategy, std::size_t i, std::size_t n);

struct ReceiverList {
  std::vector<std::string> receivers;
  std::size_t size() const { return receivers.size(); }
};

/// Receivers for the last message of `window`: `references` first (in mention
/// order), then the other window authors from most to least recent post. The
/// current author and repeated names are dropped.
ReceiverList receiver_list(std::span<const Message* const> window,
                           std::span<const std::string> references);
ReceiverList receiver_list(std::span<const Message> window,
                           std::span<const std::string> references);

struct GraphTriple {
  ConversationalGraph before;
  ConversationalGraph after;
  ConversationalGraph full;
};

/// Called once per window step with the current message, its receivers and
/// the weight given to each.
using StepObserver = std::function<void(const Message&, const ReceiverList&,
                                        std::span<const double>)>;

/// Slides the window over `sequence` (chronological) and accumulates the
/// receiver scores into a fresh graph. `references[k]` holds the users
/// mentioned by `sequence[k]`.
ConversationalGraph build_graph(std::span<const Message* const> sequence,
                                std::span<const std::vector<std::string>> references,
                                const ExtractionParams& params,
                                const StepObserver& observer = {});

/// Before (past + target), After (target + future) and Full graphs of a
/// context period.
GraphTriple extract(const ContextPeriod& context, const ExtractionParams& params,
                    const ReferenceIndex& users);

/// Builds only the graphs whose flag is set; the others stay empty.
struct GraphSelection {
  bool before = true;
  bool after = true;
  bool full = true;
};
GraphTriple extract(const ContextPeriod& context, const ExtractionParams& params,
                    const ReferenceIndex& users, GraphSelection which);

}  // namespace chatgraph

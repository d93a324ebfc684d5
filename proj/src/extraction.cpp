#include "chatgraph/extraction.hpp"

#include <algorithm>
#include <cmath>

#include "chatgraph/error.hpp"

namespace chatgraph {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Uniform:
      return "uniform";
    case Strategy::Linear:
      return "linear";
    case Strategy::Recursive:
      return "recursive";
    case Strategy::LinearPrinted:
      return "linear-printed";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "uniform") return Strategy::Uniform;
  if (name == "linear") return Strategy::Linear;
  if (name == "recursive") return Strategy::Recursive;
  if (name == "linear-printed") return Strategy::LinearPrinted;
  throw Error("unknown strategy '" + std::string(name) + "'");
}

void ExtractionParams::validate() const {
  if (window_size < 1) throw Error("window size must be at least 1");
  if (window_size > max_window) {
    throw Error("window size " + std::to_string(window_size) +
                " exceeds the bound " + std::to_string(max_window));
  }
}

double score(Strategy strategy, std::size_t i, std::size_t n) {
  if (n < 1 || i < 1 || i > n) {
    throw Error("rank " + std::to_string(i) + " out of range for list of " +
                std::to_string(n));
  }
  const double N = static_cast<double>(n);
  const double r = static_cast<double>(i);
  switch (strategy) {
    case Strategy::Uniform:
      return 1.0 / N;
    case Strategy::Linear:
      return 2.0 * (N + 1.0 - r) / (N * (N + 1.0));
    case Strategy::LinearPrinted:
      return (N - r) / (N * (N + 1.0) / 2.0);
    case Strategy::Recursive: {
      double tail = std::pow(0.4, r - 1.0);
      return i < n ? 0.6 * tail : tail;
    }
  }
  return 0.0;
}

namespace {

template <typename Window>
ReceiverList receivers_impl(const Window& window,
                            std::span<const std::string> references) {
  ReceiverList list;
  if (window.empty()) return list;
  const std::string& author = window.back()->author;
  auto push = [&](const std::string& name) {
    if (name == author) return;
    if (std::find(list.receivers.begin(), list.receivers.end(), name) !=
        list.receivers.end())
      return;
    list.receivers.push_back(name);
  };
  for (const auto& r : references) push(r);
  for (std::size_t k = window.size() - 1; k-- > 0;) push(window[k]->author);
  return list;
}

}  // namespace

ReceiverList receiver_list(std::span<const Message* const> window,
                           std::span<const std::string> references) {
  return receivers_impl(window, references);
}

ReceiverList receiver_list(std::span<const Message> window,
                           std::span<const std::string> references) {
  std::vector<const Message*> ptrs;
  ptrs.reserve(window.size());
  for (const auto& m : window) ptrs.push_back(&m);
  return receivers_impl(ptrs, references);
}

ConversationalGraph build_graph(
    std::span<const Message* const> sequence,
    std::span<const std::vector<std::string>> references,
    const ExtractionParams& params, const StepObserver& observer) {
  params.validate();
  if (references.size() != sequence.size()) {
    throw Error("reference list does not match the message sequence");
  }
  ConversationalGraph graph(params.directed);
  std::vector<double> weights;
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const Message& current = *sequence[t];
    const VertexId from = graph.add_vertex(current.author);
    const std::size_t start =
        t + 1 >= params.window_size ? t + 1 - params.window_size : 0;
    auto window = sequence.subspan(start, t + 1 - start);
    ReceiverList list = receiver_list(window, references[t]);
    const std::size_t n = list.size();
    weights.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = score(params.strategy, i + 1, n);
      const VertexId to = graph.add_vertex(list.receivers[i]);
      // LinearPrinted gives the last rank a zero score; no edge for it.
      if (weights[i] > 0.0) graph.add_weight(from, to, weights[i]);
    }
    if (observer) observer(current, list, weights);
  }
  return graph;
}

GraphTriple extract(const ContextPeriod& context, const ExtractionParams& params,
                    const ReferenceIndex& users) {
  return extract(context, params, users, GraphSelection{});
}

GraphTriple extract(const ContextPeriod& context, const ExtractionParams& params,
                    const ReferenceIndex& users, GraphSelection which) {
  if (context.target == nullptr) throw Error("empty context period");
  params.validate();

  std::vector<const Message*> all;
  all.reserve(context.size());
  for (const auto& m : context.past) all.push_back(&m);
  all.push_back(context.target);
  for (const auto& m : context.future) all.push_back(&m);

  std::vector<std::vector<std::string>> refs(all.size());
  for (std::size_t k = 0; k < all.size(); ++k) {
    refs[k] = users.find(all[k]->text, all[k]->author);
  }

  const std::size_t split = context.past.size();
  std::span<const Message* const> seq(all);
  std::span<const std::vector<std::string>> ref_span(refs);

  GraphTriple triple{ConversationalGraph(params.directed),
                     ConversationalGraph(params.directed),
                     ConversationalGraph(params.directed)};
  if (which.before) {
    triple.before =
        build_graph(seq.first(split + 1), ref_span.first(split + 1), params);
  }
  if (which.after) {
    triple.after = build_graph(seq.subspan(split), ref_span.subspan(split), params);
  }
  if (which.full) triple.full = build_graph(seq, ref_span, params);
  return triple;
}

}  // namespace chatgraph

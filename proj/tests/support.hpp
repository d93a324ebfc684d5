#pragma once

#include <string>
#include <vector>

#include "chatgraph/corpus.hpp"
#include "chatgraph/graph.hpp"
#include "chatgraph/rng.hpp"

namespace support {

/// One channel "c" whose messages are written by `authors` in order, with
/// ids "m0", "m1", ...
inline chatgraph::Corpus channel(const std::vector<std::string>& authors,
                                 const std::vector<std::string>& texts = {},
                                 const std::vector<std::string>& extra_users = {}) {
  std::vector<chatgraph::Message> ms;
  for (std::size_t i = 0; i < authors.size(); ++i) {
    chatgraph::Message m;
    m.id = "m" + std::to_string(i);
    m.channel = "c";
    m.seq = static_cast<std::int64_t>(i);
    m.author = authors[i];
    if (i < texts.size()) m.text = texts[i];
    ms.push_back(std::move(m));
  }
  return chatgraph::Corpus(std::move(ms), extra_users);
}

/// Random chat: `length` messages among `users` speakers, some of which
/// mention another speaker by name.
inline chatgraph::Corpus random_channel(chatgraph::Rng& rng, std::size_t length,
                                        std::size_t users, double mention_rate) {
  std::vector<std::string> authors, texts;
  for (std::size_t i = 0; i < length; ++i) {
    authors.push_back("user" + std::to_string(rng.below(users)));
    std::string text = "words";
    if (rng.bernoulli(mention_rate)) text += " user" + std::to_string(rng.below(users + 2));
    texts.push_back(text);
  }
  std::vector<std::string> pool;
  for (std::size_t u = 0; u < users + 2; ++u) pool.push_back("user" + std::to_string(u));
  return channel(authors, texts, pool);
}

}  // namespace support

namespace support {

struct Edge {
  const char* from;
  const char* to;
  double weight = 1.0;
};

inline chatgraph::ConversationalGraph graph(bool directed, std::initializer_list<Edge> edges,
                                            std::initializer_list<const char*> isolates = {}) {
  chatgraph::ConversationalGraph g(directed);
  for (const Edge& e : edges) g.add_weight(e.from, e.to, e.weight);
  for (const char* v : isolates) g.add_vertex(v);
  return g;
}

inline chatgraph::ConversationalGraph complete(std::size_t n, bool directed) {
  chatgraph::ConversationalGraph g(directed);
  for (chatgraph::VertexId u = 0; u < n; ++u) g.add_vertex("k" + std::to_string(u));
  for (chatgraph::VertexId u = 0; u < n; ++u)
    for (chatgraph::VertexId v = 0; v < n; ++v)
      if (u != v && (directed || u < v)) g.add_weight(u, v, 1.0);
  return g;
}

}  // namespace support

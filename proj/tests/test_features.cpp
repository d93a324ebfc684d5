#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "chatgraph/error.hpp"
#include "chatgraph/features.hpp"
#include "support.hpp"

using namespace chatgraph;

namespace {

double value(const FeatureCatalog& catalog, const std::vector<double>& values,
             const std::string& name) {
  auto names = catalog.names();
  auto it = std::find(names.begin(), names.end(), name);
  REQUIRE_MESSAGE(it != names.end(), name);
  return values[static_cast<std::size_t>(it - names.begin())];
}

std::vector<std::string> ids(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& m : c.channel(0)) out.push_back(m.id);
  return out;
}

}  // namespace

TEST_CASE("catalog shape") {
  FeatureCatalog c = build_catalog();
  CHECK(c.size() == 3 * 141);
  CHECK(c.names() == build_catalog().names());
  const auto names = c.names();
  std::set<std::string> unique(names.begin(), names.end());
  CHECK(unique.size() == c.size());
  CHECK(c.needs_directed());
  for (const auto& name : names) {
    auto dot = std::count(name.begin(), name.end(), '.');
    CHECK(dot == 4);
  }

  VariantMatrix small;
  small.weighted = false;
  small.directed = false;
  FeatureCatalog u = build_catalog(small);
  CHECK(u.size() < c.size());
  CHECK_FALSE(u.needs_directed());
  std::set<std::string> all(names.begin(), names.end());
  for (const auto& n : u.names()) CHECK(all.count(n) == 1);

  VariantMatrix after_only;
  after_only.before = false;
  after_only.full = false;
  FeatureCatalog a = build_catalog(after_only);
  CHECK(a.size() == 141);
  CHECK_FALSE(a.uses(GraphKind::Before));
  CHECK(a.uses(GraphKind::After));
}

TEST_CASE("restricting a catalog") {
  FeatureCatalog c = build_catalog();
  std::vector<std::string> pick{"after.degree.U.I.vertex", "full.vertex_count.-.-.graph"};
  FeatureCatalog r = c.restrict_to(pick);
  REQUIRE(r.size() == 2);
  // Catalog order is kept.
  CHECK(r[0].name() == "after.degree.U.I.vertex");
  CHECK(r[1].name() == "full.vertex_count.-.-.graph");
  CHECK_FALSE(r.uses(GraphKind::Before));
  std::vector<std::string> bad{"full.nonsense.U.U.graph"};
  CHECK_THROWS_AS(c.restrict_to(bad), Error);
}

TEST_CASE("manifest reports the count reconciliation") {
  std::ostringstream out;
  write_manifest(out, build_catalog(), MeasureConfig{});
  const std::string text = out.str();
  CHECK(text.find("141") != std::string::npos);
  CHECK(text.find("153") != std::string::npos);
  CHECK(text.find("full.burt_constraint.U.-.vertex") != std::string::npos);
}

TEST_CASE("one-message context") {
  Corpus c = support::channel({"a"});
  FeatureCatalog cat = build_catalog();
  auto v = featurize(c, "m0", 201, ExtractionParams{}, MeasureConfig{}, cat);
  CHECK(v.values.size() == cat.size());
  CHECK(v.past_size == 0);
  CHECK(v.future_size == 0);
  for (const char* g : {"before", "after", "full"}) {
    std::string p = g;
    CHECK(value(cat, v.values, p + ".vertex_count.-.-.graph") == 1.0);
    CHECK(value(cat, v.values, p + ".edge_count.-.-.graph") == 0.0);
    CHECK(value(cat, v.values, p + ".density.-.-.graph") == 0.0);
    CHECK(value(cat, v.values, p + ".global_transitivity.U.U.graph") == 0.0);
    CHECK(value(cat, v.values, p + ".degree.U.U.vertex") == 0.0);
  }
  for (double x : v.values) CHECK(std::isfinite(x));
}

TEST_CASE("hand-built four-message context") {
  // a, b, a, c with W = 3 (Recursive): b->a 1, a->b 1, c->a 0.6, c->b 0.4.
  Corpus c = support::channel({"a", "b", "a", "c"});
  ExtractionParams p;
  p.window_size = 3;
  FeatureCatalog cat = build_catalog();
  auto v = featurize(c, "m1", 7, p, MeasureConfig{}, cat);
  CHECK(value(cat, v.values, "full.degree.U.O.vertex") == doctest::Approx(0.5));
  CHECK(value(cat, v.values, "full.degree.U.I.vertex") == doctest::Approx(1.0));
  CHECK(value(cat, v.values, "full.degree.U.U.vertex") == doctest::Approx(1.0));
  CHECK(value(cat, v.values, "full.strength.W.O.vertex") == doctest::Approx(1.0));
  CHECK(value(cat, v.values, "full.strength.W.I.vertex") == doctest::Approx(1.4));
  CHECK(value(cat, v.values, "full.strength.W.U.vertex") == doctest::Approx(2.4));
  CHECK(value(cat, v.values, "full.vertex_count.-.-.graph") == 3.0);
  CHECK(value(cat, v.values, "full.edge_count.-.-.graph") == 4.0);
  CHECK(value(cat, v.values, "full.reciprocity.-.D.graph") == doctest::Approx(0.5));
  // Before holds a, b only.
  CHECK(value(cat, v.values, "before.vertex_count.-.-.graph") == 2.0);
  CHECK(value(cat, v.values, "before.degree.U.O.vertex") == doctest::Approx(1.0));
  CHECK(value(cat, v.values, "before.degree.U.I.vertex") == doctest::Approx(0.0));
  // Averages are means over the vertex set.
  CHECK(value(cat, v.values, "full.degree.U.O.avg") == doctest::Approx((0.5 + 0.5 + 1.0) / 3.0));
}

TEST_CASE("directed catalog needs directed extraction") {
  Corpus c = support::channel({"a", "b"});
  ExtractionParams p;
  p.directed = false;
  CHECK_THROWS_AS(featurize(c, "m0", 3, p, MeasureConfig{}, build_catalog()), Error);
  VariantMatrix m;
  m.directed = false;
  auto v = featurize(c, "m0", 3, p, MeasureConfig{}, build_catalog(m));
  CHECK(v.values.size() == build_catalog(m).size());
}

TEST_CASE("renaming users leaves the vector unchanged") {
  Rng rng(31);
  FeatureCatalog cat = build_catalog();
  for (int trial = 0; trial < 10; ++trial) {
    Corpus c = support::random_channel(rng, 40, 8, 0.4);
    std::map<std::string, std::string> rename;
    std::vector<std::size_t> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    for (std::size_t u = 0; u < 10; ++u)
      rename["user" + std::to_string(u)] = "zz" + std::to_string(perm[u]) + "name";
    std::vector<std::string> authors, texts, pool;
    for (const auto& m : c.channel(0)) {
      authors.push_back(rename[m.author]);
      std::string t = m.text;
      auto sp = t.find(' ');
      if (sp != std::string::npos) t = t.substr(0, sp + 1) + rename[t.substr(sp + 1)];
      texts.push_back(t);
    }
    for (const auto& [k, v] : rename) pool.push_back(v);
    Corpus r = support::channel(authors, texts, pool);
    const std::string target = "m" + std::to_string(rng.below(40));
    auto a = featurize(c, target, 31, ExtractionParams{}, MeasureConfig{}, cat);
    auto b = featurize(r, target, 31, ExtractionParams{}, MeasureConfig{}, cat);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      CAPTURE(cat[i].name());
      CHECK(b.values[i] == doctest::Approx(a.values[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("identical halves give identical before and after blocks") {
  // Author pattern of period 6; the target starts a period and sits 12
  // messages in, so past + target and target + future are the same sequence.
  const std::vector<std::string> pattern{"a", "b", "a", "c", "d", "b"};
  const std::vector<std::string> text{"", "hey d", "", "", "a?", ""};
  std::vector<std::string> authors, texts;
  for (int i = 0; i < 25; ++i) {
    authors.push_back(pattern[i % 6]);
    texts.push_back(text[i % 6]);
  }
  Corpus c = support::channel(authors, texts);
  FeatureCatalog cat = build_catalog();
  auto v = featurize(c, "m12", 25, ExtractionParams{}, MeasureConfig{}, cat);
  REQUIRE(v.past_size == 12);
  REQUIRE(v.future_size == 12);
  auto names = cat.names();
  std::size_t compared = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].rfind("before.", 0) != 0) continue;
    std::string twin = "after." + names[i].substr(7);
    CAPTURE(names[i]);
    CHECK(value(cat, v.values, twin) == doctest::Approx(v.values[i]).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared == 141);
}

TEST_CASE("corpus featurization") {
  Rng rng(41);
  std::vector<Message> all;
  for (int ch = 0; ch < 6; ++ch) {
    Corpus one = support::random_channel(rng, 30, 6, 0.3);
    for (auto m : one.channel(0)) {
      m.channel = "c" + std::to_string(ch);
      m.id = m.channel + "-" + m.id;
      m.label = (ch % 2 == 0 && m.seq == 15) ? Label::Abuse : Label::NonAbuse;
      all.push_back(m);
    }
  }
  std::vector<std::string> pool;
  for (int u = 0; u < 8; ++u) pool.push_back("user" + std::to_string(u));
  Corpus corpus(all, pool);
  std::vector<std::string> targets;
  for (std::size_t ch = 0; ch < corpus.channel_count(); ++ch)
    for (std::size_t k = 5; k < 30; k += 5) targets.push_back(corpus.channel(ch)[k].id);
  FeatureCatalog cat = build_catalog();

  auto serial = featurize_corpus(corpus, targets, 21, ExtractionParams{}, MeasureConfig{}, cat, 1);
  auto parallel = featurize_corpus(corpus, targets, 21, ExtractionParams{}, MeasureConfig{}, cat, 8);
  REQUIRE(serial.dataset.rows() == targets.size());
  CHECK(serial.dataset.cols() == cat.size());
  CHECK(serial.dataset.ids() == targets);
  CHECK(parallel.dataset.ids() == targets);
  for (std::size_t r = 0; r < targets.size(); ++r)
    for (std::size_t j = 0; j < cat.size(); ++j)
      CHECK(std::memcmp(&serial.dataset.row(r)[j], &parallel.dataset.row(r)[j], sizeof(double)) == 0);
  CHECK(serial.dataset.labels()[2] == 1);
  CHECK(serial.dataset.labels()[0] == 0);

  auto none = featurize_corpus(corpus, {}, 21, ExtractionParams{}, MeasureConfig{}, cat, 4);
  CHECK(none.dataset.rows() == 0);

  std::vector<std::string> with_bad{targets[0], "missing", targets[1]};
  auto partial = featurize_corpus(corpus, with_bad, 21, ExtractionParams{}, MeasureConfig{}, cat, 2);
  CHECK(partial.dataset.rows() == 2);
  REQUIRE(partial.failures.size() == 1);
  CHECK(partial.failures[0].message_id == "missing");
}

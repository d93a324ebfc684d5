#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "chatgraph/error.hpp"
#include "chatgraph/synthgen.hpp"

using namespace chatgraph;

namespace {

GeneratorConfig small_config() {
  GeneratorConfig c;
  c.abuse_contexts = 20;
  c.nonabuse_contexts = 40;
  return c;
}

std::string dump(const SyntheticCorpus& s) {
  std::ostringstream out;
  write_corpus(out, Corpus(s.messages, s.users));
  write_targets(out, s.targets);
  return out.str();
}

}  // namespace

TEST_CASE("no abuse contexts means no abuse labels") {
  GeneratorConfig c = small_config();
  c.abuse_contexts = 0;
  auto s = generate(c);
  CHECK(s.targets.size() == 40);
  for (const auto& t : s.targets) CHECK(t.label == Label::NonAbuse);
  for (const auto& m : s.messages) CHECK(m.label != Label::Abuse);
}

TEST_CASE("generation is a pure function of the config") {
  GeneratorConfig c = small_config();
  std::string a = dump(generate(c, 1));
  CHECK(a == dump(generate(c, 1)));
  CHECK(a == dump(generate(c, 4)));
  c.seed = 43;
  CHECK(a != dump(generate(c, 1)));
}

TEST_CASE("targets are the only labeled messages") {
  GeneratorConfig c = small_config();
  auto s = generate(c);
  std::set<std::string> target_ids;
  std::size_t abuse = 0;
  for (const auto& t : s.targets) {
    target_ids.insert(t.message_id);
    if (t.label == Label::Abuse) ++abuse;
  }
  CHECK(abuse == 20);
  CHECK(target_ids.size() == 60);
  for (const auto& m : s.messages) {
    if (target_ids.count(m.id) == 0) CHECK(m.label == Label::Unlabeled);
    else CHECK(m.label != Label::Unlabeled);
  }
  Corpus corpus(s.messages, s.users);
  CHECK(corpus.channel_count() == 60);
  for (const auto& t : s.targets) {
    auto loc = corpus.find(t.message_id);
    REQUIRE(loc.has_value());
    CHECK(loc->position == c.messages_before);
  }
}

TEST_CASE("config and target files round trip") {
  GeneratorConfig c = small_config();
  c.reply_recency_bias = 0.375;
  c.pile_on_session_size = 5;
  std::ostringstream out;
  write_generator_config(out, c);
  std::istringstream in("# comment\n" + out.str());
  GeneratorConfig back = read_generator_config(in);
  std::ostringstream again;
  write_generator_config(again, back);
  CHECK(again.str() == out.str());

  std::istringstream unknown("bogus = 3\n");
  CHECK_THROWS_AS(read_generator_config(unknown), Error);

  auto s = generate(small_config());
  std::ostringstream t;
  write_targets(t, s.targets);
  std::istringstream tin(t.str());
  auto targets = read_targets(tin);
  REQUIRE(targets.size() == s.targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CHECK(targets[i].message_id == s.targets[i].message_id);
    CHECK(targets[i].label == s.targets[i].label);
  }
}

TEST_CASE("infeasible configs are rejected") {
  GeneratorConfig c = small_config();
  c.user_pool = 30;
  CHECK_THROWS_AS(generate(c), Error);
  c = small_config();
  c.pile_on_join_rate = 1.5;
  CHECK_THROWS_AS(generate(c), Error);
  c = small_config();
  c.abuse_contexts = 0;
  c.nonabuse_contexts = 0;
  CHECK_THROWS_AS(generate(c), Error);
}

TEST_CASE("calibration of the default generator") {
  GeneratorConfig c;
  c.abuse_contexts = 200;
  c.nonabuse_contexts = 200;
  auto s = generate(c, 2);
  Corpus corpus(s.messages, s.users);
  auto r = validate_calibration(corpus, s.targets, 200, ExtractionParams{});
  CHECK(r.abuse.contexts == 200);
  CHECK(r.nonabuse.contexts == 200);
  CHECK(r.abuse.vertex_mean >= 35.0);
  CHECK(r.abuse.vertex_mean <= 45.0);
  CHECK(r.nonabuse.vertex_median < 10.0);
  CHECK(r.abuse.reciprocity_mean >= 0.6);
  CHECK(r.abuse.reciprocity_mean <= 0.8);
  CHECK(r.nonabuse.reciprocity_share_at_0_or_1 > 0.3);

  auto empty = validate_calibration(corpus, {}, 200, ExtractionParams{});
  CHECK(empty.abuse.contexts == 0);
  CHECK(empty.nonabuse.contexts == 0);
}

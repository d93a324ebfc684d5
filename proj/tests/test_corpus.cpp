#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "chatgraph/corpus.hpp"
#include "chatgraph/error.hpp"

using namespace chatgraph;

namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

Message msg(std::string id, std::string author, std::string text = "") {
  Message m;
  m.id = std::move(id);
  m.author = std::move(author);
  m.text = std::move(text);
  return m;
}

Corpus long_channel(std::size_t n) {
  std::vector<Message> ms;
  for (std::size_t i = 0; i < n; ++i) {
    Message m = msg("m" + std::to_string(i), "u" + std::to_string(i % 7));
    m.channel = "c";
    m.seq = static_cast<std::int64_t>(i);
    ms.push_back(m);
  }
  return Corpus(std::move(ms));
}

}  // namespace

TEST_CASE("empty input gives an empty corpus") {
  Corpus c = parse("");
  CHECK(c.message_count() == 0);
  CHECK(c.users().empty());
  CHECK(c.channel_count() == 0);
}

TEST_CASE("records are grouped by channel") {
  Corpus c = parse(
      "m1\tch1\t1\talice\tU\thello\n"
      "m2\tch2\t1\tbob\tN\thi\n"
      "\n"
      "m3\tch1\t2\tbob\tA\tyo\n");
  REQUIRE(c.channel_count() == 2);
  CHECK(c.channel(0).size() == 2);
  CHECK(c.channel(1).size() == 1);
  CHECK(c.users() == std::vector<std::string>{"alice", "bob"});
  auto loc = c.find("m3");
  REQUIRE(loc.has_value());
  CHECK(c.at(*loc).label == Label::Abuse);
}

TEST_CASE("channels are ordered by seq whatever the input order") {
  Corpus c = parse(
      "m2\tch\t5\tbob\tU\tb\n"
      "m1\tch\t2\talice\tU\ta\n");
  CHECK(c.channel(0)[0].id == "m1");
  CHECK(c.channel(0)[1].id == "m2");
}

TEST_CASE("malformed records report their line") {
  try {
    parse("m1\tch\t1\talice\tU\tok\nm2\tch\t2\t\tU\tno author\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("m1\tch\t1\talice\tX\tbad label\n"), ParseError);
  CHECK_THROWS_AS(parse("m1\tch\tone\talice\tU\tbad seq\n"), ParseError);
  CHECK_THROWS_AS(parse("m1\tch\t1\talice\tU\n"), ParseError);
  CHECK_THROWS_AS(parse("m1\tch\t1\ta\tU\tx\nm2\tch\t1\tb\tU\ty\n"), ParseError);
  CHECK_THROWS_AS(parse("m1\tch\t1\ta\tU\tx\nm1\tch\t2\tb\tU\ty\n"), Error);
}

TEST_CASE("text with tabs and newlines survives a write/parse round trip") {
  Message m = msg("m1", "alice", "tab\there\nnew line \\ backslash");
  m.channel = "ch";
  Corpus c({m});
  std::ostringstream out;
  write_corpus(out, c);
  Corpus back = parse(out.str());
  CHECK(back.channel(0)[0].text == m.text);
  CHECK(unescape_text(escape_text(m.text)) == m.text);
}

TEST_CASE("declared users extend the user set") {
  std::istringstream records("m1\tch\t1\talice\tU\thi carol\n");
  std::istringstream users("carol\n\ndave\n");
  Corpus c = parse_corpus(records, &users);
  CHECK(c.users() == std::vector<std::string>{"alice", "carol", "dave"});
  CHECK(c.has_user("dave"));
  CHECK_FALSE(c.has_user("erin"));
}

TEST_CASE("context period sizes") {
  Corpus c = long_channel(500);
  SUBCASE("size 1 keeps the target alone") {
    auto p = context_period(c, "m250", 1);
    CHECK(p.past.empty());
    CHECK(p.future.empty());
    CHECK(p.target->id == "m250");
  }
  SUBCASE("middle of a long channel") {
    auto p = context_period(c, "m250", 201);
    CHECK(p.past.size() == 100);
    CHECK(p.future.size() == 100);
    CHECK(p.past.front().id == "m150");
    CHECK(p.future.back().id == "m350");
  }
  SUBCASE("first message of the channel") {
    auto p = context_period(c, "m0", 201);
    CHECK(p.past.size() == 0);
    CHECK(p.future.size() == 100);
  }
  SUBCASE("even sizes put the extra message in the past") {
    auto p = context_period(c, "m250", 4);
    CHECK(p.past.size() == 2);
    CHECK(p.future.size() == 1);
  }
  CHECK_THROWS_AS(context_period(c, "m1", 0), Error);
  CHECK_THROWS_AS(context_period(c, "nope", 3), Error);
}

TEST_CASE("context period is a contiguous window containing the target") {
  Corpus c = long_channel(60);
  for (std::size_t t = 0; t < 60; t += 7) {
    for (std::size_t size : {1u, 2u, 9u, 30u, 200u}) {
      auto p = context_period(c, "m" + std::to_string(t), size);
      std::int64_t expect = p.target->seq - static_cast<std::int64_t>(p.past.size());
      for (const Message& m : p.past) CHECK(m.seq == expect++);
      CHECK(p.target->seq == expect++);
      for (const Message& m : p.future) CHECK(m.seq == expect++);
      CHECK(p.size() <= size);
    }
  }
}

TEST_CASE("reference detection") {
  std::vector<std::string> users{"Purple", "Cyan", "Green"};
  SUBCASE("mentions in order of appearance") {
    auto refs = detect_references(msg("m", "Blue", "hi @Purple and Cyan!"), users);
    CHECK(refs == std::vector<std::string>{"Purple", "Cyan"});
  }
  SUBCASE("no known names") {
    CHECK(detect_references(msg("m", "Blue", "nobody here"), users).empty());
  }
  SUBCASE("substrings are not tokens") {
    std::vector<std::string> cyan{"Cyan"};
    CHECK(detect_references(msg("m", "Blue", "cyanide is a word"), cyan).empty());
  }
  SUBCASE("case-insensitive, deduplicated, author excluded") {
    auto refs = detect_references(msg("m", "Green", "green? CYAN, cyan and purple"), users);
    CHECK(refs == std::vector<std::string>{"Cyan", "Purple"});
  }
  SUBCASE("names containing separators") {
    std::vector<std::string> spaced{"big bird", "bird"};
    auto refs = detect_references(msg("m", "x", "hey Big Bird!"), spaced);
    CHECK(refs == std::vector<std::string>{"big bird", "bird"});
  }
}

#include "chatgraph/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <istream>
#include <ostream>
#include <sstream>
#include <variant>

#include "chatgraph/dataset.hpp"
#include "chatgraph/error.hpp"
#include "chatgraph/graph_measures.hpp"
#include "chatgraph/parallel.hpp"
#include "chatgraph/rng.hpp"

namespace chatgraph {

namespace {

using Field = std::variant<std::size_t GeneratorConfig::*, double GeneratorConfig::*>;

struct ConfigKey {
  const char* name;
  Field field;
};

const ConfigKey kKeys[] = {
    {"seed", &GeneratorConfig::seed},
    {"abuse_contexts", &GeneratorConfig::abuse_contexts},
    {"nonabuse_contexts", &GeneratorConfig::nonabuse_contexts},
    {"messages_before", &GeneratorConfig::messages_before},
    {"messages_after", &GeneratorConfig::messages_after},
    {"user_pool", &GeneratorConfig::user_pool},
    {"abuse_crowd_mean", &GeneratorConfig::abuse_crowd_mean},
    {"abuse_crowd_sd", &GeneratorConfig::abuse_crowd_sd},
    {"abuse_regular_fraction", &GeneratorConfig::abuse_regular_fraction},
    {"abuser_before_activity", &GeneratorConfig::abuser_before_activity},
    {"abuser_reply_rate", &GeneratorConfig::abuser_reply_rate},
    {"pile_on_reference_rate", &GeneratorConfig::pile_on_reference_rate},
    {"pile_on_join_rate", &GeneratorConfig::pile_on_join_rate},
    {"pile_on_session_size", &GeneratorConfig::pile_on_session_size},
    {"abuse_reciprocity_target", &GeneratorConfig::abuse_reciprocity_target},
    {"nonabuse_small_fraction", &GeneratorConfig::nonabuse_small_fraction},
    {"nonabuse_size_exponent", &GeneratorConfig::nonabuse_size_exponent},
    {"nonabuse_small_max", &GeneratorConfig::nonabuse_small_max},
    {"nonabuse_busy_min", &GeneratorConfig::nonabuse_busy_min},
    {"nonabuse_busy_max", &GeneratorConfig::nonabuse_busy_max},
    {"nonabuse_hotspot_rate", &GeneratorConfig::nonabuse_hotspot_rate},
    {"nonabuse_late_hotspot_rate", &GeneratorConfig::nonabuse_late_hotspot_rate},
    {"nonabuse_moderator_rate", &GeneratorConfig::nonabuse_moderator_rate},
    {"nonabuse_monologue_rate", &GeneratorConfig::nonabuse_monologue_rate},
    {"activity_skew", &GeneratorConfig::activity_skew},
    {"reply_recency_bias", &GeneratorConfig::reply_recency_bias},
    {"reference_rate", &GeneratorConfig::reference_rate},
};

const char* const kWords[] = {"ok",   "lol",  "yes", "no",    "why",   "sure", "gg",
                              "wait", "what", "hey", "maybe", "right", "nice", "hmm"};

std::string user_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%05zu", i);
  return buf;
}

double normal(Rng& rng) {
  // Box-Muller; 1 - uniform() lies in (0, 1]
  const double u = 1.0 - rng.uniform();
  const double v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::size_t weighted_pick(Rng& rng, const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double x = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<std::size_t> sample_users(Rng& rng, std::size_t pool, std::size_t k) {
  std::vector<std::size_t> out;
  while (out.size() < k) {
    std::size_t u = static_cast<std::size_t>(rng.below(pool));
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
  }
  return out;
}

class ChannelWriter {
 public:
  ChannelWriter(Rng& rng, std::string channel, std::vector<Message>& out)
      : rng_(rng), channel_(std::move(channel)), out_(out) {}

  void post(const std::string& author, const std::vector<std::string>& refs,
            Label label = Label::Unlabeled) {
    Message m;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%04lld", channel_.c_str(),
                  static_cast<long long>(seq_));
    m.id = buf;
    m.channel = channel_;
    m.seq = seq_++;
    m.author = author;
    m.label = label;
    for (const auto& r : refs) m.text += r + ' ';
    m.text += kWords[rng_.below(std::size(kWords))];
    if (rng_.bernoulli(0.5)) {
      m.text += ' ';
      m.text += kWords[rng_.below(std::size(kWords))];
    }
    out_.push_back(std::move(m));
    recent_.insert(recent_.begin(), author);
    if (recent_.size() > 16) recent_.pop_back();
  }

  // Most recent authors other than `self`, newest first, without repeats.
  std::vector<std::string> recent_others(const std::string& self, std::size_t k) const {
    std::vector<std::string> out;
    for (const auto& a : recent_) {
      if (a == self || std::find(out.begin(), out.end(), a) != out.end()) continue;
      out.push_back(a);
      if (out.size() == k) break;
    }
    return out;
  }

  const std::string& last_author() const {
    static const std::string none;
    return recent_.empty() ? none : recent_.front();
  }

 private:
  Rng& rng_;
  std::string channel_;
  std::vector<Message>& out_;
  std::vector<std::string> recent_;
  std::int64_t seq_ = 0;
};

// Ordinary chatter among `people` with Zipf activity weights.
class Chatter {
 public:
  Chatter(Rng& rng, const GeneratorConfig& cfg, std::vector<std::string> people)
      : rng_(rng), cfg_(cfg), people_(std::move(people)) {
    for (std::size_t k = 0; k < people_.size(); ++k) {
      weights_.push_back(1.0 / std::pow(static_cast<double>(k + 1), cfg.activity_skew));
    }
  }

  std::string next_author(const ChannelWriter& w) {
    if (people_.size() == 1) return people_[0];
    if (rng_.bernoulli(cfg_.reply_recency_bias)) {
      auto recent = w.recent_others(w.last_author(), 3);
      if (!recent.empty()) return recent[rng_.below(recent.size())];
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
      const auto& a = people_[weighted_pick(rng_, weights_)];
      if (a != w.last_author()) return a;
    }
    return people_[weighted_pick(rng_, weights_)];
  }

  std::vector<std::string> references(const ChannelWriter& w, const std::string& author) {
    std::vector<std::string> refs;
    if (rng_.bernoulli(cfg_.reference_rate)) {
      auto recent = w.recent_others(author, 2);
      if (!recent.empty()) refs.push_back(recent[rng_.below(recent.size())]);
    }
    return refs;
  }

  void step(ChannelWriter& w, Label label = Label::Unlabeled) {
    std::string author = next_author(w);
    w.post(author, references(w, author), label);
  }

 private:
  Rng& rng_;
  const GeneratorConfig& cfg_;
  std::vector<std::string> people_;
  std::vector<double> weights_;
};

std::vector<std::string> names_of(const std::vector<std::size_t>& ids) {
  std::vector<std::string> out;
  for (auto i : ids) out.push_back(user_name(i));
  return out;
}

std::size_t draw_crowd(Rng& rng, const GeneratorConfig& cfg) {
  const double drawn = cfg.abuse_crowd_mean + cfg.abuse_crowd_sd * normal(rng);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(std::max(drawn, 4.0))),
                                 4, cfg.user_pool);
}

// A crowd converging on `focus`: newcomers keep arriving, most posts name the
// focus and the focus answers recent posters.
class PileOn {
 public:
  struct Rates {
    double reply, reference, join;
    std::size_t session;
  };

  PileOn(Rng& rng, const GeneratorConfig& cfg, std::string focus,
         std::vector<std::string> waiting)
      : PileOn(rng, cfg, std::move(focus), std::move(waiting),
               {cfg.abuser_reply_rate, cfg.pile_on_reference_rate, cfg.pile_on_join_rate,
                cfg.pile_on_session_size}) {}

  PileOn(Rng& rng, const GeneratorConfig& cfg, std::string focus,
         std::vector<std::string> waiting, Rates rates)
      : rng_(rng), cfg_(cfg), rates_(rates), focus_(std::move(focus)),
        waiting_(std::move(waiting)) {
    rng_.shuffle(std::span<std::string>(waiting_));
  }

  void step(ChannelWriter& w, Label focus_label = Label::Unlabeled) {
    if (focus_label != Label::Unlabeled ||
        (rng_.bernoulli(rates_.reply) && w.last_author() != focus_)) {
      auto recent = w.recent_others(focus_, 3);
      std::vector<std::string> refs;
      if (!recent.empty()) refs.push_back(recent[rng_.below(recent.size())]);
      w.post(focus_, refs, focus_label);
      return;
    }
    std::string author;
    if (!waiting_.empty() && (active_.empty() || rng_.bernoulli(rates_.join))) {
      author = waiting_.back();
      waiting_.pop_back();
      active_.push_back(author);
      if (active_.size() > rates_.session) active_.erase(active_.begin());
    } else {
      author = active_[rng_.below(active_.size())];
      if (author == w.last_author() && active_.size() > 1) {
        author = active_[rng_.below(active_.size())];
      }
    }
    std::vector<std::string> refs;
    if (rng_.bernoulli(rates_.reference)) {
      refs.push_back(focus_);
    } else if (rng_.bernoulli(cfg_.reference_rate)) {
      auto recent = w.recent_others(author, 2);
      if (!recent.empty()) refs.push_back(recent[rng_.below(recent.size())]);
    }
    w.post(author, refs);
  }

 private:
  Rng& rng_;
  const GeneratorConfig& cfg_;
  Rates rates_;
  std::string focus_;
  std::vector<std::string> waiting_;
  std::vector<std::string> active_;
};

std::vector<std::string> regulars_of(const std::vector<std::string>& people, double fraction) {
  const std::size_t crowd = people.size();
  const std::size_t n = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(fraction * static_cast<double>(crowd - 1))), 2,
      crowd - 1);
  return {people.begin() + 1, people.begin() + 1 + static_cast<std::ptrdiff_t>(n)};
}

void abuse_channel(Rng& rng, const GeneratorConfig& cfg, ChannelWriter& w) {
  std::vector<std::string> people =
      names_of(sample_users(rng, cfg.user_pool, draw_crowd(rng, cfg)));
  const std::string abuser = people[0];
  Chatter chatter(rng, cfg, regulars_of(people, cfg.abuse_regular_fraction));
  for (std::size_t i = 0; i < cfg.messages_before; ++i) {
    if (rng.bernoulli(cfg.abuser_before_activity) && w.last_author() != abuser) {
      w.post(abuser, chatter.references(w, abuser));
    } else {
      chatter.step(w);
    }
  }
  PileOn pile(rng, cfg, abuser, {people.begin() + 1, people.end()});
  pile.step(w, Label::Abuse);
  for (std::size_t i = 0; i < cfg.messages_after; ++i) pile.step(w);
}

std::size_t small_size(Rng& rng, const GeneratorConfig& cfg) {
  std::vector<double> weights;
  for (std::size_t s = 1; s <= cfg.nonabuse_small_max; ++s) {
    weights.push_back(1.0 / std::pow(static_cast<double>(s), cfg.nonabuse_size_exponent));
  }
  return weighted_pick(rng, weights) + 1;
}

void nonabuse_channel(Rng& rng, const GeneratorConfig& cfg, ChannelWriter& w) {
  if (rng.bernoulli(cfg.nonabuse_small_fraction)) {
    const std::size_t size = rng.bernoulli(cfg.nonabuse_monologue_rate)
                                 ? 1
                                 : std::max<std::size_t>(2, small_size(rng, cfg));
    Chatter chatter(rng, cfg, names_of(sample_users(rng, cfg.user_pool, size)));
    for (std::size_t i = 0; i < cfg.messages_before; ++i) chatter.step(w);
    chatter.step(w, Label::NonAbuse);
    for (std::size_t i = 0; i < cfg.messages_after; ++i) chatter.step(w);
    return;
  }
  const double kind = rng.uniform();
  if (kind < cfg.nonabuse_hotspot_rate) {
    // the targeted author is the centre of attention for the whole context
    const std::size_t crowd = std::min(cfg.user_pool, draw_crowd(rng, cfg) + draw_crowd(rng, cfg));
    std::vector<std::string> people = names_of(sample_users(rng, cfg.user_pool, crowd));
    PileOn pile(rng, cfg, people[0], {people.begin() + 1, people.end()});
    for (std::size_t i = 0; i < cfg.messages_before; ++i) pile.step(w);
    pile.step(w, Label::NonAbuse);
    for (std::size_t i = 0; i < cfg.messages_after; ++i) pile.step(w);
    return;
  }
  if (kind < cfg.nonabuse_hotspot_rate + cfg.nonabuse_late_hotspot_rate) {
    // someone other than the targeted author draws a crowd after the target
    std::vector<std::string> people =
        names_of(sample_users(rng, cfg.user_pool, draw_crowd(rng, cfg)));
    std::vector<std::string> regulars = regulars_of(people, cfg.abuse_regular_fraction);
    Chatter chatter(rng, cfg, regulars);
    for (std::size_t i = 0; i < cfg.messages_before; ++i) chatter.step(w);
    chatter.step(w, Label::NonAbuse);
    const std::string focus = regulars[rng.below(regulars.size())];
    std::vector<std::string> others;
    for (const auto& p : people)
      if (p != focus) others.push_back(p);
    PileOn pile(rng, cfg, focus, others);
    for (std::size_t i = 0; i < cfg.messages_after; ++i) pile.step(w);
    return;
  }
  if (kind < cfg.nonabuse_hotspot_rate + cfg.nonabuse_late_hotspot_rate +
                 cfg.nonabuse_moderator_rate) {
    // the targeted author is steadily but moderately central throughout
    std::vector<std::string> people =
        names_of(sample_users(rng, cfg.user_pool, draw_crowd(rng, cfg)));
    const double reply = 0.5 * (cfg.abuser_before_activity + cfg.abuser_reply_rate);
    const double total = static_cast<double>(cfg.messages_before + cfg.messages_after);
    const double join = std::min(1.0, static_cast<double>(people.size()) / (total * (1 - reply)));
    PileOn pile(rng, cfg, people[0], {people.begin() + 1, people.end()},
                {reply, 0.5 * cfg.pile_on_reference_rate, join, 2 * cfg.pile_on_session_size});
    for (std::size_t i = 0; i < cfg.messages_before; ++i) pile.step(w);
    pile.step(w, Label::NonAbuse);
    for (std::size_t i = 0; i < cfg.messages_after; ++i) pile.step(w);
    return;
  }
  const std::size_t size =
      cfg.nonabuse_busy_min +
      static_cast<std::size_t>(rng.below(cfg.nonabuse_busy_max - cfg.nonabuse_busy_min + 1));
  Chatter chatter(rng, cfg, names_of(sample_users(rng, cfg.user_pool, size)));
  for (std::size_t i = 0; i < cfg.messages_before; ++i) chatter.step(w);
  chatter.step(w, Label::NonAbuse);
  for (std::size_t i = 0; i < cfg.messages_after; ++i) chatter.step(w);
}

}  // namespace

void GeneratorConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0 && p <= 1)) throw Error(std::string(name) + " must be in [0, 1]");
  };
  if (abuse_contexts + nonabuse_contexts == 0) throw Error("no contexts requested");
  if (messages_before < 1 || messages_after < 1) {
    throw Error("channels need messages on both sides of the target");
  }
  if (pile_on_session_size < 1) throw Error("pile_on_session_size must be positive");
  if (user_pool < 2) throw Error("user pool too small");
  if (!(abuse_crowd_mean >= 4) || !(abuse_crowd_sd >= 0)) {
    throw Error("abuse crowd mean must be >= 4 and sd >= 0");
  }
  if (abuse_crowd_mean + 4 * abuse_crowd_sd > static_cast<double>(user_pool)) {
    throw Error("abuse crowd does not fit in the user pool");
  }
  if (nonabuse_small_max < 2 || nonabuse_busy_min < 2 || nonabuse_busy_min > nonabuse_busy_max) {
    throw Error("non-abuse channel size bounds are inconsistent");
  }
  if (nonabuse_busy_max > user_pool || nonabuse_small_max > user_pool) {
    throw Error("non-abuse channels do not fit in the user pool");
  }
  prob(abuse_regular_fraction, "abuse_regular_fraction");
  prob(abuser_before_activity, "abuser_before_activity");
  prob(abuser_reply_rate, "abuser_reply_rate");
  prob(pile_on_reference_rate, "pile_on_reference_rate");
  prob(abuse_reciprocity_target, "abuse_reciprocity_target");
  prob(nonabuse_small_fraction, "nonabuse_small_fraction");
  prob(nonabuse_hotspot_rate, "nonabuse_hotspot_rate");
  prob(pile_on_join_rate, "pile_on_join_rate");
  prob(nonabuse_late_hotspot_rate, "nonabuse_late_hotspot_rate");
  prob(nonabuse_moderator_rate, "nonabuse_moderator_rate");
  if (nonabuse_hotspot_rate + nonabuse_late_hotspot_rate + nonabuse_moderator_rate > 1) {
    throw Error("busy channel kind rates add up to more than 1");
  }
  prob(nonabuse_monologue_rate, "nonabuse_monologue_rate");
  prob(reply_recency_bias, "reply_recency_bias");
  prob(reference_rate, "reference_rate");
  if (!(nonabuse_size_exponent >= 0) || !(activity_skew >= 0)) {
    throw Error("exponents must be >= 0");
  }
}

GeneratorConfig read_generator_config(std::istream& in) {
  GeneratorConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const ConfigKey* entry = nullptr;
    for (const auto& k : kKeys)
      if (key == k.name) entry = &k;
    if (!entry) throw ParseError(lineno, "unknown key '" + key + "'");
    try {
      std::size_t used = 0;
      std::visit(
          [&](auto member) {
            using T = std::remove_reference_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, double>) {
              cfg.*member = std::stod(value, &used);
            } else {
              if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
              cfg.*member = static_cast<T>(std::stoull(value, &used));
            }
          },
          entry->field);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "bad value for '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

GeneratorConfig read_generator_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_generator_config(in);
}

void write_generator_config(std::ostream& out, const GeneratorConfig& cfg) {
  for (const auto& k : kKeys) {
    out << k.name << '=';
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, double>) {
            out << format_double(cfg.*member);
          } else {
            out << cfg.*member;
          }
        },
        k.field);
    out << '\n';
  }
}

SyntheticCorpus generate(const GeneratorConfig& cfg, std::size_t workers) {
  cfg.validate();
  const std::size_t total = cfg.abuse_contexts + cfg.nonabuse_contexts;
  std::vector<bool> abusive(total, false);
  std::fill(abusive.begin(), abusive.begin() + static_cast<std::ptrdiff_t>(cfg.abuse_contexts),
            true);
  {
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    Rng rng(derive_seed(cfg.seed, total));
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<bool> shuffled(total);
    for (std::size_t i = 0; i < total; ++i) shuffled[i] = abusive[order[i]];
    abusive = std::move(shuffled);
  }

  std::vector<std::vector<Message>> channels(total);
  parallel_for(total, workers, [&](std::size_t c) {
    Rng rng(derive_seed(cfg.seed, c));
    char name[32];
    std::snprintf(name, sizeof name, "c%05zu", c);
    ChannelWriter w(rng, name, channels[c]);
    if (abusive[c]) {
      abuse_channel(rng, cfg, w);
    } else {
      nonabuse_channel(rng, cfg, w);
    }
  });

  SyntheticCorpus out;
  std::vector<std::string> users;
  for (auto& ch : channels) {
    for (auto& m : ch) {
      if (m.label != Label::Unlabeled) out.targets.push_back({m.id, m.label});
      users.push_back(m.author);
      out.messages.push_back(std::move(m));
    }
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  out.users = std::move(users);
  return out;
}

void write_targets(std::ostream& out, const std::vector<TargetLabel>& targets) {
  for (const auto& t : targets) out << t.message_id << '\t' << label_code(t.label) << '\n';
}

std::vector<TargetLabel> read_targets(std::istream& in) {
  std::vector<TargetLabel> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    TargetLabel t;
    if (tab == std::string::npos) {
      t.message_id = line;
    } else {
      t.message_id = line.substr(0, tab);
      const std::string code = line.substr(tab + 1);
      if (code.size() != 1) throw ParseError(lineno, "label must be A, N or U");
      try {
        t.label = parse_label(code[0]);
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
    }
    if (t.message_id.empty()) throw ParseError(lineno, "empty message id");
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TargetLabel> read_targets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_targets(in);
}

CalibrationReport validate_calibration(const Corpus& corpus,
                                       const std::vector<TargetLabel>& targets,
                                       std::size_t context_size,
                                       const ExtractionParams& params) {
  CalibrationReport report;
  report.context_size = context_size;
  std::vector<double> vertices[2], recip[2];
  for (const auto& t : targets) {
    if (t.label == Label::Unlabeled) continue;
    const int k = t.label == Label::Abuse ? 1 : 0;
    ContextPeriod ctx = context_period(corpus, t.message_id, context_size);
    GraphTriple g = extract(ctx, params, corpus.references(), {false, true, false});
    vertices[k].push_back(static_cast<double>(g.after.vertex_count()));
    recip[k].push_back(g.after.directed() ? reciprocity(g.after).value : 1.0);
  }
  auto summarize = [](std::vector<double>& v, const std::vector<double>& r) {
    ClassCalibration c;
    c.contexts = v.size();
    if (v.empty()) return c;
    double s = 0, below = 0;
    for (double x : v) {
      s += x;
      below += x < 5;
    }
    c.vertex_mean = s / static_cast<double>(v.size());
    c.vertex_share_below_5 = below / static_cast<double>(v.size());
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    c.vertex_median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double rs = 0, ends = 0;
    for (double x : r) {
      rs += x;
      ends += std::abs(x) < 1e-12 || std::abs(x - 1) < 1e-12;
    }
    c.reciprocity_mean = rs / static_cast<double>(r.size());
    c.reciprocity_share_at_0_or_1 = ends / static_cast<double>(r.size());
    return c;
  };
  report.abuse = summarize(vertices[1], recip[1]);
  report.nonabuse = summarize(vertices[0], recip[0]);
  return report;
}

void write_calibration(std::ostream& out, const CalibrationReport& report) {
  out << "# after-graph statistics per class\n";
  out << "context_size\t" << report.context_size << '\n';
  out << "class\tcontexts\tvertex_mean\tvertex_median\tvertex_share_below_5"
         "\treciprocity_mean\treciprocity_share_at_0_or_1\n";
  auto row = [&](const char* name, const ClassCalibration& c) {
    out << name << '\t' << c.contexts << '\t' << format_double(c.vertex_mean) << '\t'
        << format_double(c.vertex_median) << '\t' << format_double(c.vertex_share_below_5)
        << '\t' << format_double(c.reciprocity_mean) << '\t'
        << format_double(c.reciprocity_share_at_0_or_1) << '\n';
  };
  row("abuse", report.abuse);
  row("nonabuse", report.nonabuse);
}

}  // namespace chatgraph

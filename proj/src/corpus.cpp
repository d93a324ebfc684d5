#include "chatgraph/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "chatgraph/error.hpp"

namespace chatgraph {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

char fold(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = fold(c);
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

char label_code(Label label) {
  switch (label) {
    case Label::Abuse:
      return 'A';
    case Label::NonAbuse:
      return 'N';
    case Label::Unlabeled:
      return 'U';
  }
  return 'U';
}

Label parse_label(char code) {
  switch (code) {
    case 'A':
      return Label::Abuse;
    case 'N':
      return Label::NonAbuse;
    case 'U':
      return Label::Unlabeled;
    default:
      throw Error(std::string("unknown label code '") + code + "'");
  }
}

ReferenceIndex::ReferenceIndex(std::span<const std::string> users) {
  for (const auto& name : users) {
    if (name.empty()) continue;
    std::string key = fold(name);
    bool single = std::all_of(key.begin(), key.end(), [](char c) {
      return is_word_byte(static_cast<unsigned char>(c));
    });
    if (single) {
      single_.emplace(std::move(key), name);
    } else {
      multi_.emplace_back(std::move(key), name);
    }
  }
}

std::vector<std::string> ReferenceIndex::find(std::string_view text,
                                              std::string_view author) const {
  std::vector<std::pair<std::size_t, const std::string*>> hits;
  std::string folded = fold(text);

  if (!single_.empty()) {
    std::size_t i = 0;
    while (i < folded.size()) {
      if (!is_word_byte(static_cast<unsigned char>(folded[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < folded.size() &&
             is_word_byte(static_cast<unsigned char>(folded[j])))
        ++j;
      auto it = single_.find(folded.substr(i, j - i));
      if (it != single_.end()) hits.emplace_back(i, &it->second);
      i = j;
    }
  }

  for (const auto& [key, name] : multi_) {
    std::size_t pos = folded.find(key);
    while (pos != std::string::npos) {
      bool left_ok =
          pos == 0 || !is_word_byte(static_cast<unsigned char>(folded[pos - 1]));
      std::size_t end = pos + key.size();
      bool right_ok = end == folded.size() ||
                      !is_word_byte(static_cast<unsigned char>(folded[end]));
      // A separator at the edge of the name itself already bounds the match.
      left_ok = left_ok || !is_word_byte(static_cast<unsigned char>(key.front()));
      right_ok = right_ok || !is_word_byte(static_cast<unsigned char>(key.back()));
      if (left_ok && right_ok) {
        hits.emplace_back(pos, &name);
        break;
      }
      pos = folded.find(key, pos + 1);
    }
  }

  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (const auto& [pos, name] : hits) {
    if (*name == author) continue;
    if (std::find(out.begin(), out.end(), *name) == out.end()) out.push_back(*name);
  }
  return out;
}

Corpus::Corpus(std::vector<Message> messages,
               std::span<const std::string> declared_users) {
  std::unordered_map<std::string, std::size_t> channel_index;
  std::set<std::string> users(declared_users.begin(), declared_users.end());
  for (auto& m : messages) {
    if (m.author.empty()) throw Error("message '" + m.id + "' has no author");
    if (m.id.empty()) throw Error("message with empty id");
    users.insert(m.author);
    auto [it, inserted] = channel_index.emplace(m.channel, channels_.size());
    if (inserted) channels_.emplace_back();
    channels_[it->second].push_back(std::move(m));
  }
  users.erase(std::string());
  users_.assign(users.begin(), users.end());

  for (std::size_t c = 0; c < channels_.size(); ++c) {
    auto& ch = channels_[c];
    std::stable_sort(ch.begin(), ch.end(), [](const Message& a, const Message& b) {
      return a.seq < b.seq;
    });
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (i > 0 && ch[i].seq == ch[i - 1].seq) {
        throw Error("duplicate seq " + std::to_string(ch[i].seq) +
                    " in channel '" + ch[i].channel + "'");
      }
      if (!by_id_.emplace(ch[i].id, Location{c, i}).second) {
        throw Error("duplicate message id '" + ch[i].id + "'");
      }
    }
    message_count_ += ch.size();
  }
  references_ = ReferenceIndex(users_);
}

bool Corpus::has_user(std::string_view name) const {
  return std::binary_search(users_.begin(), users_.end(), name);
}

std::optional<Corpus::Location> Corpus::find(std::string_view message_id) const {
  auto it = by_id_.find(std::string(message_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\\':
        out += "\\\\";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string unescape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      char next = text[i + 1];
      if (next == 't' || next == 'n' || next == '\\') {
        out += next == 't' ? '\t' : next == 'n' ? '\n' : '\\';
        ++i;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

Corpus parse_corpus(std::istream& records, std::istream* users) {
  std::vector<Message> messages;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::pair<std::string, std::int64_t>> seen;
  while (std::getline(records, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 6) {
      throw ParseError(line_no, "expected 6 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    Message m;
    m.id = fields[0];
    m.channel = fields[1];
    m.author = fields[3];
    if (m.id.empty()) throw ParseError(line_no, "empty message id");
    if (m.channel.empty()) throw ParseError(line_no, "empty channel");
    if (m.author.empty()) throw ParseError(line_no, "empty author");
    try {
      std::size_t used = 0;
      m.seq = std::stoll(std::string(fields[2]), &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad seq '" + std::string(fields[2]) + "'");
    }
    if (fields[4].size() != 1) {
      throw ParseError(line_no, "label must be one of A, N, U");
    }
    try {
      m.label = parse_label(fields[4][0]);
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    m.text = unescape_text(fields[5]);
    if (!seen.emplace(m.channel, m.seq).second) {
      throw ParseError(line_no, "duplicate (channel, seq) = (" + m.channel +
                                    ", " + std::to_string(m.seq) + ")");
    }
    messages.push_back(std::move(m));
  }

  std::vector<std::string> declared;
  if (users != nullptr) {
    while (std::getline(*users, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) declared.push_back(line);
    }
  }
  return Corpus(std::move(messages), declared);
}

Corpus parse_corpus_file(const std::string& path, const std::string& users_path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  if (users_path.empty()) return parse_corpus(in);
  std::ifstream users(users_path);
  if (!users) throw Error("cannot open user list '" + users_path + "'");
  return parse_corpus(in, &users);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (std::size_t c = 0; c < corpus.channel_count(); ++c) {
    for (const auto& m : corpus.channel(c)) {
      out << m.id << '\t' << m.channel << '\t' << m.seq << '\t' << m.author
          << '\t' << label_code(m.label) << '\t' << escape_text(m.text) << '\n';
    }
  }
}

ContextPeriod context_period(const Corpus& corpus, std::string_view target_id,
                             std::size_t size) {
  if (size == 0) throw Error("context size must be positive");
  auto loc = corpus.find(target_id);
  if (!loc) throw Error("unknown target message '" + std::string(target_id) + "'");
  auto channel = corpus.channel(loc->channel);
  std::size_t want_past = size / 2;        // ceil((size-1)/2)
  std::size_t want_future = (size - 1) / 2;  // floor((size-1)/2)
  std::size_t pos = loc->position;
  std::size_t past = std::min(want_past, pos);
  std::size_t future = std::min(want_future, channel.size() - pos - 1);

  ContextPeriod ctx;
  ctx.target = &channel[pos];
  ctx.past = channel.subspan(pos - past, past);
  ctx.future = channel.subspan(pos + 1, future);
  ctx.requested_size = size;
  return ctx;
}

std::vector<std::string> detect_references(const Message& message,
                                           std::span<const std::string> users) {
  return ReferenceIndex(users).find(message.text, message.author);
}

}  // namespace chatgraph

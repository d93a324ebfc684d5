#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chatgraph {

enum class Label { NonAbuse, Abuse, Unlabeled };

char label_code(Label label);
Label parse_label(char code);

struct Message {
  std::string id;
  std::string channel;
  std::int64_t seq = 0;
  std::string author;
  Label label = Label::Unlabeled;
  std::string text;
};

/// Case-insensitive whole-token lookup of user names inside message text.
///
/// A name matches when it occurs in the text with no word character
/// (ASCII alphanumeric, '_' or any non-ASCII byte) immediately before or
/// after it. Single-token names go through a hash lookup; names that
/// themselves contain separators are scanned directly.
class ReferenceIndex {
 public:
  ReferenceIndex() = default;
  explicit ReferenceIndex(std::span<const std::string> users);

  /// Referenced users ordered by first occurrence, without duplicates and
  /// without `author`.
  std::vector<std::string> find(std::string_view text,
                                std::string_view author) const;

 private:
  std::unordered_map<std::string, std::string> single_;
  std::vector<std::pair<std::string, std::string>> multi_;  // (folded, name)
};

/// Immutable, channel-grouped message store.
class Corpus {
 public:
  struct Location {
    std::size_t channel = 0;
    std::size_t position = 0;
  };

  Corpus() = default;

  /// Groups messages by channel (first-appearance order), sorts each channel
  /// by seq and validates the invariants. Throws Error on a duplicate
  /// (channel, seq) pair or message id.
  Corpus(std::vector<Message> messages,
         std::span<const std::string> declared_users = {});

  std::size_t channel_count() const { return channels_.size(); }
  std::size_t message_count() const { return message_count_; }
  std::span<const Message> channel(std::size_t index) const {
    return channels_.at(index);
  }
  const std::string& channel_name(std::size_t index) const {
    return channels_.at(index).front().channel;
  }

  /// Sorted, distinct user identifiers.
  const std::vector<std::string>& users() const { return users_; }
  bool has_user(std::string_view name) const;

  std::optional<Location> find(std::string_view message_id) const;
  const Message& at(Location loc) const {
    return channels_.at(loc.channel).at(loc.position);
  }

  const ReferenceIndex& references() const { return references_; }

 private:
  std::vector<std::vector<Message>> channels_;
  std::vector<std::string> users_;
  std::unordered_map<std::string, Location> by_id_;
  ReferenceIndex references_;
  std::size_t message_count_ = 0;
};

/// Messages around a target. Views into the owning Corpus, which must
/// outlive this object.
struct ContextPeriod {
  const Message* target = nullptr;
  std::span<const Message> past;    // chronological
  std::span<const Message> future;  // chronological
  std::size_t requested_size = 0;

  std::size_t size() const { return past.size() + 1 + future.size(); }
};

/// Parses the tab-separated line-record format
/// `id, channel, seq, author, label(A|N|U), text`. Blank lines are skipped.
/// `users`, when given, is read as one declared user name per line.
Corpus parse_corpus(std::istream& records, std::istream* users = nullptr);
Corpus parse_corpus_file(const std::string& path,
                         const std::string& users_path = {});

void write_corpus(std::ostream& out, const Corpus& corpus);

std::string escape_text(std::string_view text);
std::string unescape_text(std::string_view text);

/// Window of up to ceil((size-1)/2) preceding and floor((size-1)/2)
/// following messages from the target's channel, truncated at the channel
/// boundaries.
ContextPeriod context_period(const Corpus& corpus, std::string_view target_id,
                             std::size_t size);

std::vector<std::string> detect_references(
    const Message& message, std::span<const std::string> users);

}  // namespace chatgraph

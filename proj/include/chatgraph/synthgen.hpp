#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chatgraph/corpus.hpp"
#include "chatgraph/extraction.hpp"

namespace chatgraph {

struct GeneratorConfig {
  std::size_t seed = 42;
  std::size_t abuse_contexts = 600;
  std::size_t nonabuse_contexts = 1800;
  std::size_t messages_before = 110;  // per channel, before the target
  std::size_t messages_after = 110;
  std::size_t user_pool = 20000;

  double abuse_crowd_mean = 40;
  double abuse_crowd_sd = 4;
  double abuse_regular_fraction = 0.45;   // crowd share already present before the target
  double abuser_before_activity = 0.12;   // abuser's share of pre-target messages
  double abuser_reply_rate = 0.3;         // abuser's share of post-target messages
  double pile_on_reference_rate = 0.6;    // crowd messages naming the centre of attention
  double pile_on_join_rate = 0.5;         // crowd messages written by a newcomer
  std::size_t pile_on_session_size = 8;   // crowd members posting at the same time
  double abuse_reciprocity_target = 0.7;  // checked by the calibration report

  double nonabuse_small_fraction = 0.6;  // contexts drawn from the small regime
  double nonabuse_size_exponent = 1.6;   // power law over small channel sizes
  std::size_t nonabuse_small_max = 12;
  std::size_t nonabuse_busy_min = 12;
  std::size_t nonabuse_busy_max = 60;
  double nonabuse_hotspot_rate = 0.15;       // busy channels centred on the targeted author
  double nonabuse_late_hotspot_rate = 0.15;  // busy channels turning to another user
  double nonabuse_moderator_rate = 0.25;     // busy channels steadily led by the targeted author
  double nonabuse_monologue_rate = 0.3;  // small channels held by a single speaker

  double activity_skew = 1.0;  // Zipf exponent of per-user activity
  double reply_recency_bias = 0.5;
  double reference_rate = 0.15;

  void validate() const;
};

GeneratorConfig read_generator_config(std::istream& in);
GeneratorConfig read_generator_config_file(const std::string& path);
void write_generator_config(std::ostream& out, const GeneratorConfig& config);

struct TargetLabel {
  std::string message_id;
  Label label = Label::Unlabeled;
};

struct SyntheticCorpus {
  std::vector<Message> messages;
  std::vector<std::string> users;
  std::vector<TargetLabel> targets;
};

/// Every context is its own channel; the target sits after
/// `messages_before` messages.
SyntheticCorpus generate(const GeneratorConfig& config, std::size_t workers = 1);

void write_targets(std::ostream& out, const std::vector<TargetLabel>& targets);
std::vector<TargetLabel> read_targets(std::istream& in);
std::vector<TargetLabel> read_targets_file(const std::string& path);

struct ClassCalibration {
  std::size_t contexts = 0;
  double vertex_mean = 0;
  double vertex_median = 0;
  double vertex_share_below_5 = 0;
  double reciprocity_mean = 0;
  double reciprocity_share_at_0_or_1 = 0;
};

struct CalibrationReport {
  std::size_t context_size = 0;
  ClassCalibration abuse;
  ClassCalibration nonabuse;
};

/// Class-conditional After-graph vertex counts and reciprocity.
CalibrationReport validate_calibration(const Corpus& corpus,
                                       const std::vector<TargetLabel>& targets,
                                       std::size_t context_size,
                                       const ExtractionParams& params);

void write_calibration(std::ostream& out, const CalibrationReport& report);

}  // namespace chatgraph

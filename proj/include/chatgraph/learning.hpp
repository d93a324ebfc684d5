#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chatgraph/dataset.hpp"

namespace chatgraph {

/// Per-feature z-scoring. Zero-variance columns keep the sentinel stddev 1
/// and map to 0 whatever the input.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<bool> constant;

  std::size_t size() const { return mean.size(); }
};

inline constexpr double kConstantVariance = 1e-15;

Scaler standardize_fit(const Dataset& train);
Scaler standardize_fit(std::span<const double> rows, std::size_t cols);
std::vector<double> standardize_apply(const Scaler& scaler, std::span<const double> row);
Dataset standardize_apply(const Scaler& scaler, const Dataset& data);

struct Hyperparams {
  double lambda = 1e-3;
  double eta0 = 0.1;
  std::size_t epochs = 300;
  /// Epochs for a model resumed from earlier weights during elimination.
  std::size_t warm_epochs = 50;
  /// Weight of the Abuse class relative to NonAbuse. 0 selects inverse
  /// class frequency.
  double class_weight_ratio = 0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LinearModel {
  std::vector<std::string> feature_names;
  std::vector<double> weights;
  double bias = 0;
  Scaler scaler;
  Hyperparams hyper;
  double objective = 0;
};

struct Prediction {
  int label = 0;
  double margin = 0;
};

/// L2-regularized hinge loss minimized by full-batch subgradient descent.
LinearModel train_linear(const Dataset& data, const Hyperparams& hyper = {});

/// Label 1 only for a strictly positive margin.
Prediction predict(const LinearModel& model, std::span<const double> row);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f = 0;
};

ClassMetrics abuse_metrics(std::span<const int> truth, std::span<const int> predicted);

struct CVOptions {
  std::size_t parts = 10;
  std::size_t train_parts = 7;
  std::uint64_t seed = 1;
  Hyperparams hyper;
  std::size_t workers = 1;
};

struct CVReport {
  std::size_t parts = 10;
  std::size_t train_parts = 7;
  std::uint64_t seed = 1;
  std::vector<ClassMetrics> runs;
  ClassMetrics mean;
  ClassMetrics stddev;
  /// Mean absolute weight of each feature across the run models.
  std::vector<double> importance;
};

/// part_of[row] for a stratified split into `parts` parts.
std::vector<std::size_t> stratified_parts(std::span<const int> labels, std::size_t parts,
                                          std::uint64_t seed);

/// Parts used for training in run r: r, r+1, ..., r+train_parts-1 (mod parts).
std::vector<std::size_t> training_parts(std::size_t run, std::size_t parts,
                                        std::size_t train_parts);

CVReport cross_validate(const Dataset& data, const CVOptions& options = {});

struct RfeStep {
  std::size_t size = 0;
  double f = 0;
  /// Column removed after this step was evaluated; npos on the last step.
  std::size_t dropped = static_cast<std::size_t>(-1);
};

struct RfeResult {
  std::vector<std::size_t> selected;  // column indices, ascending
  std::vector<RfeStep> trace;
  double full_f = 0;
  double threshold = 0;
};

/// Eliminates one feature per step down to a single feature and returns the
/// smallest visited set whose CV mean F reaches retention * F(full). After
/// the first step each fold model resumes from its previous weights.
RfeResult rfe(const Dataset& data, double retention, const CVOptions& options = {});

void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);
void write_cv_report(std::ostream& out, const CVReport& report);
void write_rfe_trace(std::ostream& out, const RfeResult& result,
                     const std::vector<std::string>& names, double retention);

}  // namespace chatgraph

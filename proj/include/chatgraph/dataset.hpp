#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chatgraph {

/// Labeled feature matrix, row-major. Labels are 1 (Abuse), 0 (NonAbuse) or
/// -1 for unlabeled rows, which the learners reject.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<std::string> feature_names)
      : names_(std::move(feature_names)) {}

  void add_row(std::string id, int label, std::span<const double> values);

  std::size_t rows() const { return ids_.size(); }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<int>& labels() const { return labels_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  Dataset select_columns(std::span<const std::size_t> columns) const;
  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Columns whose name starts with any of `prefixes`.
  std::vector<std::size_t> columns_with_prefix(
      std::span<const std::string> prefixes) const;
  std::size_t column_index(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> ids_;
  std::vector<int> labels_;
  std::vector<double> values_;
};

/// CSV: header "message_id,label,<feature names...>", values as %.17g.
void write_csv(std::ostream& out, const Dataset& data);
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

/// Formats a double so that it parses back to the same value.
std::string format_double(double x);

}  // namespace chatgraph

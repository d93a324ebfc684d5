#include "chatgraph/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chatgraph/error.hpp"

namespace chatgraph {

void Dataset::add_row(std::string id, int label, std::span<const double> values) {
  if (values.size() != cols()) {
    throw Error("row '" + id + "' has " + std::to_string(values.size()) +
                " values, expected " + std::to_string(cols()));
  }
  ids_.push_back(std::move(id));
  labels_.push_back(label);
  values_.insert(values_.end(), values.begin(), values.end());
}

Dataset Dataset::select_columns(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  for (auto c : columns) names.push_back(names_.at(c));
  Dataset out(std::move(names));
  std::vector<double> buf(columns.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) buf[k] = at(r, columns[k]);
    out.add_row(ids_[r], labels_[r], buf);
  }
  return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  Dataset out(names_);
  for (auto r : rows) out.add_row(ids_.at(r), labels_.at(r), row(r));
  return out;
}

std::vector<std::size_t> Dataset::columns_with_prefix(
    std::span<const std::string> prefixes) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cols(); ++c) {
    for (const auto& p : prefixes) {
      if (names_[c].rfind(p, 0) == 0) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

std::size_t Dataset::column_index(std::string_view name) const {
  for (std::size_t c = 0; c < cols(); ++c)
    if (names_[c] == name) return c;
  throw Error("no feature named '" + std::string(name) + "'");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "message_id,label";
  for (const auto& n : data.feature_names()) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    out << data.ids()[r] << ',' << data.labels()[r];
    for (double v : data.row(r)) out << ',' << format_double(v);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty feature matrix");
  auto header = split_commas(line);
  if (header.size() < 2 || header[0] != "message_id" || header[1] != "label") {
    throw Error("feature matrix header must start with message_id,label");
  }
  Dataset data(std::vector<std::string>(header.begin() + 2, header.end()));
  std::vector<double> values(data.cols());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " columns, got " + std::to_string(fields.size()));
    }
    try {
      int label = std::stoi(fields[1]);
      for (std::size_t c = 0; c < data.cols(); ++c) values[c] = std::stod(fields[c + 2]);
      data.add_row(fields[0], label, values);
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "bad numeric value");
    }
  }
  return data;
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open feature matrix '" + path + "'");
  return read_csv(in);
}

}  // namespace chatgraph

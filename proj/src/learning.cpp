#include "chatgraph/learning.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "chatgraph/error.hpp"
#include "chatgraph/parallel.hpp"
#include "chatgraph/rng.hpp"

namespace chatgraph {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_labels(std::span<const int> labels) {
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error("learning needs binary labels, got " + std::to_string(y));
  }
}

struct TrainResult {
  std::vector<double> weights;
  double bias = 0;
  double objective = 0;
};

// z is row-major n x d and already standardized.
TrainResult train_standardized(std::span<const double> z, std::size_t n, std::size_t d,
                               std::span<const int> labels, const Hyperparams& hp,
                               const TrainResult* start = nullptr) {
  std::size_t positives = 0;
  for (int y : labels) positives += y == 1;
  if (positives == 0 || positives == n) {
    throw Error("training set holds a single class");
  }
  const double negatives = static_cast<double>(n - positives);
  double c_pos, c_neg;
  if (hp.class_weight_ratio > 0) {
    c_neg = 1.0;
    c_pos = hp.class_weight_ratio;
  } else {
    c_pos = 1.0 / static_cast<double>(positives);
    c_neg = 1.0 / negatives;
  }
  const double norm = static_cast<double>(n) /
                      (c_pos * static_cast<double>(positives) + c_neg * negatives);
  c_pos *= norm;
  c_neg *= norm;

  Eigen::Map<const RowMatrix> Z(z.data(), static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(d));
  Eigen::VectorXd sy(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    sy[static_cast<Eigen::Index>(i)] = labels[i] == 1 ? c_pos : -c_neg;
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  double b = 0;
  std::size_t epochs = hp.epochs;
  if (start) {
    for (std::size_t j = 0; j < d; ++j) w[static_cast<Eigen::Index>(j)] = start->weights[j];
    b = start->bias;
    epochs = hp.warm_epochs;
  }
  Eigen::VectorXd best_w = w;
  double best_b = 0;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd margin(static_cast<Eigen::Index>(n));
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t t = 0; t <= epochs; ++t) {
    margin.noalias() = Z * w;
    double loss = 0;
    double bias_grad = 0;
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
      const double y = sy[i] > 0 ? 1.0 : -1.0;
      const double slack = 1.0 - y * (margin[i] + b);
      if (slack > 0) {
        const double c = std::abs(sy[i]);
        loss += c * slack;
        a[i] = sy[i];
        bias_grad -= sy[i];
      } else {
        a[i] = 0;
      }
    }
    const double objective = 0.5 * hp.lambda * w.squaredNorm() + loss * inv_n;
    if (objective < best) {
      best = objective;
      best_w = w;
      best_b = b;
    }
    if (t == epochs) break;
    const double eta = hp.eta0 / (1.0 + hp.lambda * hp.eta0 * static_cast<double>(t));
    Eigen::VectorXd grad = hp.lambda * w;
    grad.noalias() -= inv_n * (Z.transpose() * a);
    w -= eta * grad;
    b -= eta * bias_grad * inv_n;
  }
  TrainResult out;
  out.weights.assign(best_w.data(), best_w.data() + best_w.size());
  out.bias = best_b;
  out.objective = best;
  return out;
}

double margin_of(std::span<const double> weights, double bias, std::span<const double> z) {
  double m = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) m += weights[j] * z[j];
  return m;
}

struct Fold {
  std::vector<double> train, test;  // standardized, row-major over all columns
  std::vector<int> train_labels, test_labels;
};

std::vector<Fold> make_folds(const Dataset& data, const CVOptions& opt) {
  std::vector<std::size_t> part = stratified_parts(data.labels(), opt.parts, opt.seed);
  std::vector<Fold> folds(opt.parts);
  const std::size_t d = data.cols();
  for (std::size_t r = 0; r < opt.parts; ++r) {
    std::vector<bool> trains(opt.parts, false);
    for (std::size_t p : training_parts(r, opt.parts, opt.train_parts)) trains[p] = true;
    std::vector<double> raw_train;
    Fold& f = folds[r];
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (!trains[part[i]]) continue;
      auto row = data.row(i);
      raw_train.insert(raw_train.end(), row.begin(), row.end());
      f.train_labels.push_back(data.labels()[i]);
    }
    Scaler sc = standardize_fit(raw_train, d);
    f.train.reserve(raw_train.size());
    for (std::size_t i = 0; i < f.train_labels.size(); ++i) {
      auto z = standardize_apply(sc, std::span<const double>(raw_train).subspan(i * d, d));
      f.train.insert(f.train.end(), z.begin(), z.end());
    }
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (trains[part[i]]) continue;
      auto z = standardize_apply(sc, data.row(i));
      f.test.insert(f.test.end(), z.begin(), z.end());
      f.test_labels.push_back(data.labels()[i]);
    }
  }
  return folds;
}

std::vector<double> gather(const std::vector<double>& m, std::size_t d,
                           std::span<const std::size_t> cols) {
  const std::size_t n = m.size() / (d == 0 ? 1 : d);
  std::vector<double> out(n * cols.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = m.data() + i * d;
    double* dst = out.data() + i * cols.size();
    for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
  }
  return out;
}

double mean_of(const std::vector<ClassMetrics>& runs, double ClassMetrics::*field) {
  double s = 0;
  for (const auto& r : runs) s += r.*field;
  return s / static_cast<double>(runs.size());
}

double sd_of(const std::vector<ClassMetrics>& runs, double ClassMetrics::*field,
             double mean) {
  if (runs.size() < 2) return 0;
  double s = 0;
  for (const auto& r : runs) s += (r.*field - mean) * (r.*field - mean);
  return std::sqrt(s / static_cast<double>(runs.size() - 1));
}

// `models`, when given, holds one model per fold over `cols`; it seeds the
// training and receives the new models.
CVReport evaluate_folds(const std::vector<Fold>& folds, std::size_t d,
                        std::span<const std::size_t> cols, const CVOptions& opt,
                        std::vector<TrainResult>* models = nullptr) {
  CVReport report;
  report.parts = opt.parts;
  report.train_parts = opt.train_parts;
  report.seed = opt.seed;
  report.runs.resize(folds.size());
  std::vector<std::vector<double>> weights(folds.size());
  parallel_for(folds.size(), opt.workers, [&](std::size_t r) {
    const Fold& f = folds[r];
    std::vector<double> train = gather(f.train, d, cols);
    std::vector<double> test = gather(f.test, d, cols);
    const TrainResult* start =
        models && !(*models)[r].weights.empty() ? &(*models)[r] : nullptr;
    TrainResult model = train_standardized(train, f.train_labels.size(), cols.size(),
                                           f.train_labels, opt.hyper, start);
    if (models) (*models)[r] = model;
    std::vector<int> predicted(f.test_labels.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      std::span<const double> z(test.data() + i * cols.size(), cols.size());
      predicted[i] = margin_of(model.weights, model.bias, z) > 0 ? 1 : 0;
    }
    report.runs[r] = abuse_metrics(f.test_labels, predicted);
    weights[r] = std::move(model.weights);
  });
  report.importance.assign(cols.size(), 0.0);
  for (const auto& w : weights) {
    for (std::size_t j = 0; j < cols.size(); ++j) report.importance[j] += std::abs(w[j]);
  }
  for (double& v : report.importance) v /= static_cast<double>(folds.size());
  report.mean = {mean_of(report.runs, &ClassMetrics::precision),
                 mean_of(report.runs, &ClassMetrics::recall),
                 mean_of(report.runs, &ClassMetrics::f)};
  report.stddev = {sd_of(report.runs, &ClassMetrics::precision, report.mean.precision),
                   sd_of(report.runs, &ClassMetrics::recall, report.mean.recall),
                   sd_of(report.runs, &ClassMetrics::f, report.mean.f)};
  return report;
}

void check_cv(const Dataset& data, const CVOptions& opt) {
  if (opt.parts < 2) throw Error("cross-validation needs at least 2 parts");
  if (opt.train_parts < 1 || opt.train_parts >= opt.parts) {
    throw Error("train parts must be between 1 and parts - 1");
  }
  if (opt.workers < 1) throw Error("at least one worker is required");
  opt.hyper.validate();
  check_labels(data.labels());
  std::size_t counts[2] = {0, 0};
  for (int y : data.labels()) ++counts[y];
  for (int c = 0; c < 2; ++c) {
    if (counts[c] < opt.parts) {
      throw Error("class " + std::to_string(c) + " has " + std::to_string(counts[c]) +
                  " rows, fewer than the " + std::to_string(opt.parts) + " parts");
    }
  }
  if (data.cols() == 0) throw Error("dataset has no features");
}

}  // namespace

void Hyperparams::validate() const {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw Error("lambda must be positive");
  if (!(eta0 > 0) || !std::isfinite(eta0)) throw Error("eta0 must be positive");
  if (epochs < 1 || warm_epochs < 1) throw Error("epochs must be at least 1");
  if (class_weight_ratio < 0 || !std::isfinite(class_weight_ratio)) {
    throw Error("class weight ratio must be >= 0");
  }
}

Scaler standardize_fit(std::span<const double> rows, std::size_t cols) {
  if (cols == 0 || rows.empty()) throw Error("cannot fit a scaler on an empty set");
  const std::size_t n = rows.size() / cols;
  Scaler s;
  s.mean.assign(cols, 0.0);
  s.stddev.assign(cols, 1.0);
  s.constant.assign(cols, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cols; ++j) s.mean[j] += rows[i * cols + j];
  for (double& m : s.mean) m /= static_cast<double>(n);
  std::vector<double> var(cols, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double dv = rows[i * cols + j] - s.mean[j];
      var[j] += dv * dv;
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    var[j] /= static_cast<double>(n);
    if (var[j] > kConstantVariance) {
      s.stddev[j] = std::sqrt(var[j]);
      s.constant[j] = false;
    }
  }
  return s;
}

Scaler standardize_fit(const Dataset& train) {
  if (train.rows() == 0) throw Error("cannot fit a scaler on an empty set");
  std::vector<double> flat;
  flat.reserve(train.rows() * train.cols());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    auto r = train.row(i);
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return standardize_fit(flat, train.cols());
}

std::vector<double> standardize_apply(const Scaler& scaler, std::span<const double> row) {
  if (row.size() != scaler.size()) throw Error("row width does not match the scaler");
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = scaler.constant[j] ? 0.0 : (row[j] - scaler.mean[j]) / scaler.stddev[j];
  }
  return out;
}

Dataset standardize_apply(const Scaler& scaler, const Dataset& data) {
  Dataset out(data.feature_names());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out.add_row(data.ids()[i], data.labels()[i], standardize_apply(scaler, data.row(i)));
  }
  return out;
}

LinearModel train_linear(const Dataset& data, const Hyperparams& hyper) {
  hyper.validate();
  check_labels(data.labels());
  if (data.rows() == 0) throw Error("cannot train on an empty set");
  LinearModel model;
  model.feature_names = data.feature_names();
  model.hyper = hyper;
  model.scaler = standardize_fit(data);
  std::vector<double> z;
  z.reserve(data.rows() * data.cols());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto r = standardize_apply(model.scaler, data.row(i));
    z.insert(z.end(), r.begin(), r.end());
  }
  TrainResult t = train_standardized(z, data.rows(), data.cols(), data.labels(), hyper);
  model.weights = std::move(t.weights);
  model.bias = t.bias;
  model.objective = t.objective;
  return model;
}

Prediction predict(const LinearModel& model, std::span<const double> row) {
  auto z = standardize_apply(model.scaler, row);
  Prediction p;
  p.margin = margin_of(model.weights, model.bias, z);
  p.label = p.margin > 0 ? 1 : 0;
  return p;
}

ClassMetrics abuse_metrics(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw Error("label vectors differ in length");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == 1 && truth[i] == 1) ++tp;
    if (predicted[i] == 1 && truth[i] != 1) ++fp;
    if (predicted[i] != 1 && truth[i] == 1) ++fn;
  }
  ClassMetrics m;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0) {
    m.f = 2 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

std::vector<std::size_t> stratified_parts(std::span<const int> labels, std::size_t parts,
                                          std::uint64_t seed) {
  if (parts == 0) throw Error("parts must be positive");
  check_labels(labels);
  std::vector<std::size_t> part(labels.size(), 0);
  std::size_t next = 0;
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(i);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t idx : members) {
      part[idx] = next;
      next = (next + 1) % parts;
    }
  }
  return part;
}

std::vector<std::size_t> training_parts(std::size_t run, std::size_t parts,
                                        std::size_t train_parts) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < train_parts; ++k) out.push_back((run + k) % parts);
  std::sort(out.begin(), out.end());
  return out;
}

CVReport cross_validate(const Dataset& data, const CVOptions& options) {
  check_cv(data, options);
  std::vector<Fold> folds = make_folds(data, options);
  std::vector<std::size_t> cols(data.cols());
  std::iota(cols.begin(), cols.end(), 0);
  return evaluate_folds(folds, data.cols(), cols, options);
}

RfeResult rfe(const Dataset& data, double retention, const CVOptions& options) {
  if (!(retention >= 0) || retention > 1) throw Error("retention must be in [0, 1]");
  check_cv(data, options);
  std::vector<Fold> folds = make_folds(data, options);
  std::vector<std::size_t> active(data.cols());
  std::iota(active.begin(), active.end(), 0);

  RfeResult result;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<TrainResult> models(folds.size());
  while (true) {
    CVReport rep = evaluate_folds(folds, data.cols(), active, options, &models);
    RfeStep step;
    step.size = active.size();
    step.f = rep.mean.f;
    sets.push_back(active);
    if (active.size() == 1) {
      result.trace.push_back(step);
      break;
    }
    std::size_t weakest = 0;
    for (std::size_t j = 1; j < active.size(); ++j) {
      if (rep.importance[j] < rep.importance[weakest]) weakest = j;
    }
    step.dropped = active[weakest];
    result.trace.push_back(step);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(weakest));
    for (auto& m : models) m.weights.erase(m.weights.begin() + static_cast<std::ptrdiff_t>(weakest));
  }
  result.full_f = result.trace.front().f;
  result.threshold = retention * result.full_f;
  std::size_t chosen = 0;
  for (std::size_t s = 0; s < result.trace.size(); ++s) {
    if (result.trace[s].f >= result.threshold) chosen = s;
  }
  result.selected = sets[chosen];
  return result;
}

void write_model(std::ostream& out, const LinearModel& model) {
  out << "chatgraph-linear-model\t1\n";
  out << "lambda\t" << format_double(model.hyper.lambda) << '\n';
  out << "eta0\t" << format_double(model.hyper.eta0) << '\n';
  out << "epochs\t" << model.hyper.epochs << '\n';
  out << "warm_epochs\t" << model.hyper.warm_epochs << '\n';
  out << "class_weight_ratio\t" << format_double(model.hyper.class_weight_ratio) << '\n';
  out << "seed\t" << model.hyper.seed << '\n';
  out << "objective\t" << format_double(model.objective) << '\n';
  out << "bias\t" << format_double(model.bias) << '\n';
  out << "features\t" << model.weights.size() << '\n';
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    out << "feature\t" << model.feature_names[j] << '\t'
        << format_double(model.scaler.mean[j]) << '\t'
        << format_double(model.scaler.stddev[j]) << '\t'
        << (model.scaler.constant[j] ? 1 : 0) << '\t' << format_double(model.weights[j])
        << '\n';
  }
}

LinearModel read_model(std::istream& in) {
  LinearModel m;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    std::getline(ls, key, '\t');
    auto field = [&]() {
      std::string v;
      if (!std::getline(ls, v, '\t')) throw ParseError(lineno, "missing value for " + key);
      return v;
    };
    try {
      if (key == "chatgraph-linear-model") {
        header = true;
      } else if (key == "lambda") {
        m.hyper.lambda = std::stod(field());
      } else if (key == "eta0") {
        m.hyper.eta0 = std::stod(field());
      } else if (key == "epochs") {
        m.hyper.epochs = std::stoul(field());
      } else if (key == "warm_epochs") {
        m.hyper.warm_epochs = std::stoul(field());
      } else if (key == "class_weight_ratio") {
        m.hyper.class_weight_ratio = std::stod(field());
      } else if (key == "seed") {
        m.hyper.seed = std::stoull(field());
      } else if (key == "objective") {
        m.objective = std::stod(field());
      } else if (key == "bias") {
        m.bias = std::stod(field());
      } else if (key == "features") {
        field();
      } else if (key == "feature") {
        m.feature_names.push_back(field());
        m.scaler.mean.push_back(std::stod(field()));
        m.scaler.stddev.push_back(std::stod(field()));
        m.scaler.constant.push_back(field() == "1");
        m.weights.push_back(std::stod(field()));
      } else {
        throw ParseError(lineno, "unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "malformed number");
    }
  }
  if (!header) throw Error("not a model file");
  return m;
}

void write_cv_report(std::ostream& out, const CVReport& r) {
  out << "# cross-validation: " << r.parts << " stratified parts, run r trains on parts r.."
      << "r+" << (r.train_parts - 1) << " mod " << r.parts << " and tests on the rest\n";
  out << "# metrics for the Abuse class; sd uses n-1\n";
  out << "seed\t" << r.seed << '\n';
  out << "run\tprecision\trecall\tf\n";
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    out << i << '\t' << format_double(r.runs[i].precision) << '\t'
        << format_double(r.runs[i].recall) << '\t' << format_double(r.runs[i].f) << '\n';
  }
  out << "mean\t" << format_double(r.mean.precision) << '\t'
      << format_double(r.mean.recall) << '\t' << format_double(r.mean.f) << '\n';
  out << "sd\t" << format_double(r.stddev.precision) << '\t'
      << format_double(r.stddev.recall) << '\t' << format_double(r.stddev.f) << '\n';
}

void write_rfe_trace(std::ostream& out, const RfeResult& result,
                     const std::vector<std::string>& names, double retention) {
  out << "retention\t" << format_double(retention) << '\n';
  out << "full_f\t" << format_double(result.full_f) << '\n';
  out << "threshold\t" << format_double(result.threshold) << '\n';
  out << "size\tf\tdropped\n";
  for (const auto& s : result.trace) {
    out << s.size << '\t' << format_double(s.f) << '\t'
        << (s.dropped < names.size() ? names[s.dropped] : std::string("-")) << '\n';
  }
  out << "selected\t" << result.selected.size() << '\n';
  for (std::size_t c : result.selected) out << names[c] << '\n';
}

}  // namespace chatgraph

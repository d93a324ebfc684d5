#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chatgraph/analysis.hpp"
#include "chatgraph/corpus.hpp"
#include "chatgraph/dataset.hpp"
#include "chatgraph/error.hpp"
#include "chatgraph/extraction.hpp"
#include "chatgraph/features.hpp"
#include "chatgraph/learning.hpp"
#include "chatgraph/synthgen.hpp"

namespace fs = std::filesystem;
using namespace chatgraph;

namespace {

std::string g_invocation;

std::ofstream open_out(const std::string& path) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw Error("failed writing " + path);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct ExtractionFlags {
  std::size_t context_size = 200;
  std::size_t window_size = 10;
  std::string strategy = "recursive";
  std::string directed = "true";

  void add(CLI::App* app) {
    app->add_option("--context-size", context_size, "messages in the context period");
    app->add_option("--window-size", window_size, "sliding window length");
    app->add_option("--strategy", strategy, "uniform, linear, recursive or linear-printed");
    app->add_option("--directed", directed, "true or false");
  }

  ExtractionParams params() const {
    ExtractionParams p;
    p.window_size = window_size;
    p.strategy = parse_strategy(strategy);
    p.directed = parse_bool(directed);
    p.validate();
    return p;
  }
};

struct LearnFlags {
  std::string set = "all";
  std::uint64_t seed = 1;
  Hyperparams hyper;
  std::size_t workers = 1;

  void add(CLI::App* app) {
    app->add_option("--set", set, "before, after, full, before+after or all");
    app->add_option("--seed", seed, "seed for the stratified split");
    app->add_option("--lambda", hyper.lambda, "L2 regularization strength");
    app->add_option("--eta0", hyper.eta0, "initial step size");
    app->add_option("--epochs", hyper.epochs, "subgradient descent epochs");
    app->add_option("--warm-epochs", hyper.warm_epochs, "epochs per elimination step after the first");
    app->add_option("--class-weight", hyper.class_weight_ratio,
                    "Abuse class weight relative to NonAbuse; 0 means inverse frequency");
    app->add_option("--workers", workers, "parallel folds");
  }

  CVOptions cv() const {
    CVOptions o;
    o.seed = seed;
    o.hyper = hyper;
    o.hyper.seed = seed;
    o.workers = workers;
    return o;
  }
};

Dataset restrict_set(const Dataset& data, const std::string& set) {
  std::vector<std::string> prefixes;
  if (set == "all") return data;
  if (set == "before") {
    prefixes = {"before."};
  } else if (set == "after") {
    prefixes = {"after."};
  } else if (set == "full") {
    prefixes = {"full."};
  } else if (set == "before+after") {
    prefixes = {"before.", "after."};
  } else {
    throw Error("unknown feature set '" + set + "'");
  }
  auto cols = data.columns_with_prefix(prefixes);
  if (cols.empty()) throw Error("matrix has no columns for set '" + set + "'");
  return data.select_columns(cols);
}

Dataset labeled_rows(const Dataset& data) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < data.rows(); ++i)
    if (data.labels()[i] >= 0) keep.push_back(i);
  return data.select_rows(keep);
}

FeatureCatalog make_catalog(const std::string& spec, const ExtractionParams& params,
                            bool weighted) {
  VariantMatrix m;
  m.directed = params.directed;
  m.weighted = weighted;
  FeatureCatalog full = build_catalog(m);
  if (spec == "default") return full;
  std::ifstream in(spec);
  if (!in) throw Error("cannot open catalog file " + spec);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    names.push_back(line);
  }
  return full.restrict_to(names);
}

std::vector<std::string> target_ids(const std::vector<TargetLabel>& targets) {
  std::vector<std::string> ids;
  for (const auto& t : targets) ids.push_back(t.message_id);
  return ids;
}

void header(std::ostream& out) { out << "# invocation: " << g_invocation << '\n'; }

// Corpus labels come from the targets file when it carries them.
Corpus load_corpus(const std::string& path, const std::string& users,
                   const std::vector<TargetLabel>* targets) {
  Corpus c = parse_corpus_file(path, users);
  if (!targets) return c;
  bool relabel = false;
  for (const auto& t : *targets) relabel |= t.label != Label::Unlabeled;
  if (!relabel) return c;
  std::unordered_map<std::string, Label> labels;
  for (const auto& t : *targets) labels[t.message_id] = t.label;
  std::vector<Message> messages;
  for (std::size_t ch = 0; ch < c.channel_count(); ++ch) {
    for (const auto& m : c.channel(ch)) {
      messages.push_back(m);
      auto it = labels.find(m.id);
      if (it != labels.end() && it->second != Label::Unlabeled) messages.back().label = it->second;
    }
  }
  return Corpus(std::move(messages), c.users());
}

void report_failures(const std::vector<FeaturizeFailure>& failures) {
  for (const auto& f : failures) {
    std::cerr << "skipped " << f.message_id << ": " << f.error << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  g_invocation = "chatgraph";
  for (int i = 1; i < argc; ++i) g_invocation += std::string(" ") + argv[i];

  CLI::App app{"Conversational graph extraction and abuse classification"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic labeled corpus");
  std::string gen_config, gen_out;
  std::size_t gen_workers = 1, gen_calib_context = 200;
  gen->add_option("--config", gen_config, "key=value generator config");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--workers", gen_workers, "parallel channels");
  gen->add_option("--calibration-context", gen_calib_context,
                  "context size for the calibration report");

  // extract
  auto* ext = app.add_subcommand("extract", "dump the graphs of one targeted message");
  std::string ext_corpus, ext_users, ext_target, ext_dump;
  ExtractionFlags ext_flags;
  ext->add_option("--corpus", ext_corpus, "corpus file")->required();
  ext->add_option("--users", ext_users, "declared user list");
  ext->add_option("--target", ext_target, "targeted message id")->required();
  ext->add_option("--dump", ext_dump, "output directory")->required();
  ext_flags.add(ext);

  // featurize
  auto* feat = app.add_subcommand("featurize", "compute the feature matrix");
  std::string feat_corpus, feat_users, feat_targets, feat_catalog = "default", feat_out,
                                                    feat_manifest, feat_weighted = "true";
  std::size_t feat_workers = 1;
  ExtractionFlags feat_flags;
  feat->add_option("--corpus", feat_corpus, "corpus file")->required();
  feat->add_option("--users", feat_users, "declared user list");
  feat->add_option("--targets", feat_targets, "targets file")->required();
  feat->add_option("--catalog", feat_catalog, "'default' or a file of feature names");
  feat->add_option("--weighted", feat_weighted, "include weighted variants");
  feat->add_option("--out", feat_out, "matrix CSV")->required();
  feat->add_option("--manifest", feat_manifest, "catalog manifest output");
  feat->add_option("--workers", feat_workers, "featurization threads");
  feat_flags.add(feat);

  // train
  auto* train = app.add_subcommand("train", "fit a linear model on every labeled row");
  std::string train_matrix, train_model, train_report;
  LearnFlags train_flags;
  train->add_option("--matrix", train_matrix, "matrix CSV")->required();
  train->add_option("--model", train_model, "model output")->required();
  train->add_option("--report", train_report, "training-set metrics");
  train_flags.add(train);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "10-run stratified cross-validation");
  std::string eval_matrix, eval_report;
  LearnFlags eval_flags;
  eval->add_option("--matrix", eval_matrix, "matrix CSV")->required();
  eval->add_option("--report", eval_report, "report output")->required();
  eval_flags.add(eval);

  // select
  auto* sel = app.add_subcommand("select", "recursive feature elimination");
  std::string sel_matrix, sel_trace, sel_selected;
  double sel_retention = 0.97;
  LearnFlags sel_flags;
  sel->add_option("--matrix", sel_matrix, "matrix CSV")->required();
  sel->add_option("--retention", sel_retention, "fraction of the full-set F to keep");
  sel->add_option("--trace", sel_trace, "elimination trace output")->required();
  sel->add_option("--selected", sel_selected, "selected feature names, usable as --catalog");
  sel_flags.add(sel);

  // correlate
  auto* cor = app.add_subcommand("correlate", "feature correlation clustering");
  std::string cor_matrix, cor_out, cor_set = "all";
  std::size_t cor_workers = 1;
  cor->add_option("--matrix", cor_matrix, "matrix CSV")->required();
  cor->add_option("--out", cor_out, "cluster report")->required();
  cor->add_option("--set", cor_set, "feature set");
  cor->add_option("--workers", cor_workers, "threads for the correlation matrix");

  // sweep
  auto* sw = app.add_subcommand("sweep", "cross-validated F over a parameter grid");
  std::string sw_corpus, sw_users, sw_targets, sw_param, sw_grid, sw_report,
      sw_weighted = "true";
  std::size_t sw_feat_workers = 1;
  ExtractionFlags sw_flags;
  LearnFlags sw_learn;
  sw->add_option("--corpus", sw_corpus, "corpus file")->required();
  sw->add_option("--users", sw_users, "declared user list");
  sw->add_option("--targets", sw_targets, "targets file")->required();
  sw->add_option("--param", sw_param, "context, window or strategy")->required();
  sw->add_option("--grid", sw_grid, "comma-separated values")->required();
  sw->add_option("--report", sw_report, "report output")->required();
  sw->add_option("--weighted", sw_weighted, "include weighted variants");
  sw->add_option("--featurize-workers", sw_feat_workers, "featurization threads");
  sw_flags.add(sw);
  sw_learn.add(sw);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GeneratorConfig cfg;
      if (!gen_config.empty()) cfg = read_generator_config_file(gen_config);
      SyntheticCorpus synth = generate(cfg, gen_workers);
      fs::create_directories(gen_out);
      Corpus corpus(synth.messages, synth.users);
      {
        std::string p = gen_out + "/corpus.tsv";
        auto out = open_out(p);
        write_corpus(out, corpus);
        close_out(out, p);
      }
      {
        std::string p = gen_out + "/users.txt";
        auto out = open_out(p);
        for (const auto& u : synth.users) out << u << '\n';
        close_out(out, p);
      }
      {
        std::string p = gen_out + "/targets.tsv";
        auto out = open_out(p);
        write_targets(out, synth.targets);
        close_out(out, p);
      }
      {
        std::string p = gen_out + "/config.txt";
        auto out = open_out(p);
        write_generator_config(out, cfg);
        close_out(out, p);
      }
      {
        std::string p = gen_out + "/calibration.txt";
        auto out = open_out(p);
        header(out);
        write_calibration(out, validate_calibration(corpus, synth.targets, gen_calib_context,
                                                    ExtractionParams{}));
        close_out(out, p);
      }
      return 0;
    }

    if (*ext) {
      ExtractionParams params = ext_flags.params();
      Corpus corpus = parse_corpus_file(ext_corpus, ext_users);
      ContextPeriod ctx = context_period(corpus, ext_target, ext_flags.context_size);
      GraphTriple g = extract(ctx, params, corpus.references());
      fs::create_directories(ext_dump);
      const std::pair<const char*, const ConversationalGraph*> graphs[] = {
          {"before", &g.before}, {"after", &g.after}, {"full", &g.full}};
      for (const auto& [name, graph] : graphs) {
        std::string p = ext_dump + "/" + name + ".edges";
        auto out = open_out(p);
        write_edge_list(out, *graph);
        close_out(out, p);
      }
      return 0;
    }

    if (*feat) {
      ExtractionParams params = feat_flags.params();
      auto targets = read_targets_file(feat_targets);
      Corpus corpus = load_corpus(feat_corpus, feat_users, &targets);
      FeatureCatalog catalog = make_catalog(feat_catalog, params, parse_bool(feat_weighted));
      MeasureConfig config;
      auto ids = target_ids(targets);
      FeaturizeResult res = featurize_corpus(corpus, ids, feat_flags.context_size, params,
                                             config, catalog, feat_workers);
      report_failures(res.failures);
      auto out = open_out(feat_out);
      write_csv(out, res.dataset);
      close_out(out, feat_out);
      if (!feat_manifest.empty()) {
        auto m = open_out(feat_manifest);
        header(m);
        write_manifest(m, catalog, config);
        close_out(m, feat_manifest);
      }
      if (res.dataset.rows() == 0) throw Error("no target could be featurized");
      return 0;
    }

    if (*train) {
      Dataset data = labeled_rows(restrict_set(read_csv_file(train_matrix), train_flags.set));
      Hyperparams hp = train_flags.hyper;
      hp.seed = train_flags.seed;
      LinearModel model = train_linear(data, hp);
      auto out = open_out(train_model);
      write_model(out, model);
      close_out(out, train_model);
      if (!train_report.empty()) {
        std::vector<int> predicted;
        for (std::size_t i = 0; i < data.rows(); ++i)
          predicted.push_back(predict(model, data.row(i)).label);
        ClassMetrics m = abuse_metrics(data.labels(), predicted);
        auto r = open_out(train_report);
        header(r);
        r << "# training-set metrics for the Abuse class\n";
        r << "rows\t" << data.rows() << "\nfeatures\t" << data.cols() << '\n';
        r << "precision\t" << format_double(m.precision) << "\nrecall\t"
          << format_double(m.recall) << "\nf\t" << format_double(m.f) << '\n';
        close_out(r, train_report);
      }
      return 0;
    }

    if (*eval) {
      Dataset data = labeled_rows(restrict_set(read_csv_file(eval_matrix), eval_flags.set));
      CVReport rep = cross_validate(data, eval_flags.cv());
      auto out = open_out(eval_report);
      header(out);
      out << "set\t" << eval_flags.set << "\nrows\t" << data.rows() << "\nfeatures\t"
          << data.cols() << '\n';
      write_cv_report(out, rep);
      close_out(out, eval_report);
      std::cout << "mean F " << format_double(rep.mean.f) << '\n';
      return 0;
    }

    if (*sel) {
      Dataset data = labeled_rows(restrict_set(read_csv_file(sel_matrix), sel_flags.set));
      RfeResult res = rfe(data, sel_retention, sel_flags.cv());
      auto out = open_out(sel_trace);
      header(out);
      write_rfe_trace(out, res, data.feature_names(), sel_retention);
      close_out(out, sel_trace);
      if (!sel_selected.empty()) {
        auto s = open_out(sel_selected);
        for (std::size_t c : res.selected) s << data.feature_names()[c] << '\n';
        close_out(s, sel_selected);
      }
      std::cout << "selected " << res.selected.size() << " of " << data.cols() << '\n';
      return 0;
    }

    if (*cor) {
      Dataset data = restrict_set(read_csv_file(cor_matrix), cor_set);
      CorrelationMatrix corr = pearson_matrix(data, cor_workers);
      ClusterResult res = cluster_features(corr);
      auto out = open_out(cor_out);
      header(out);
      write_cluster_report(out, corr, res);
      close_out(out, cor_out);
      return 0;
    }

    if (*sw) {
      auto grid = split(sw_grid, ',');
      if (grid.empty()) throw Error("empty grid");
      if (sw_param != "context" && sw_param != "window" && sw_param != "strategy") {
        throw Error("unknown sweep parameter '" + sw_param + "'");
      }
      auto targets = read_targets_file(sw_targets);
      Corpus corpus = load_corpus(sw_corpus, sw_users, &targets);
      auto ids = target_ids(targets);
      // validate the whole grid before spending time on it
      std::vector<std::pair<ExtractionFlags, std::string>> points;
      for (const auto& value : grid) {
        ExtractionFlags f = sw_flags;
        try {
          if (sw_param == "context") f.context_size = std::stoul(value);
          if (sw_param == "window") f.window_size = std::stoul(value);
        } catch (const std::logic_error&) {
          throw Error("bad grid value '" + value + "'");
        }
        if (sw_param == "strategy") f.strategy = value;
        if (f.context_size < 1) throw Error("context size must be positive");
        f.params();
        points.emplace_back(f, value);
      }
      auto out = open_out(sw_report);
      header(out);
      out << "param\t" << sw_param << "\nset\t" << sw_learn.set << '\n';
      out << "value\trows\tfeatures\tprecision\trecall\tf\tf_sd\n";
      for (const auto& [f, value] : points) {
        ExtractionParams params = f.params();
        FeatureCatalog catalog = make_catalog("default", params, parse_bool(sw_weighted));
        FeaturizeResult res = featurize_corpus(corpus, ids, f.context_size, params,
                                               MeasureConfig{}, catalog, sw_feat_workers);
        report_failures(res.failures);
        Dataset data = labeled_rows(restrict_set(res.dataset, sw_learn.set));
        CVReport rep = cross_validate(data, sw_learn.cv());
        out << value << '\t' << data.rows() << '\t' << data.cols() << '\t'
            << format_double(rep.mean.precision) << '\t' << format_double(rep.mean.recall)
            << '\t' << format_double(rep.mean.f) << '\t' << format_double(rep.stddev.f)
            << '\n';
      }
      close_out(out, sw_report);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "chatgraph: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

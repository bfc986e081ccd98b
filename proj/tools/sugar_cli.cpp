#include "sugar/csv.hpp"
#include "sugar/report.hpp"
#include "sugar/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>

namespace fs = std::filesystem;
using namespace sugar;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kInput = 3, kPipeline = 4 };

/// Bad flag values found after parsing, reported like a parse error.
class UsageError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigFlags {
  std::string config_path;
  std::string degree_bw;
  std::string diffusion_bw;
  Index k_cov = 0;
  int t = 0;
  Index max_iters = 0;
  std::uint64_t seed = 0;
  Index max_generated = 0;
  Scalar ks_target_p = 0;
  CLI::App* app = nullptr;
};

void add_config_flags(CLI::App* app, ConfigFlags& f) {
  f.app = app;
  app->add_option("--config", f.config_path, "SugarConfig JSON; flags given here override it")
      ->check(CLI::ExistingFile);
  app->add_option("--degree-bw", f.degree_bw, "degree kernel bandwidth, e.g. maxmin:2.0");
  app->add_option("--diffusion-bw", f.diffusion_bw, "MGC kernel bandwidth, e.g. adaptive:10");
  app->add_option("--k-cov", f.k_cov, "neighbours per local covariance");
  app->add_option("--t", f.t, "diffusion time");
  app->add_option("--max-iters", f.max_iters, "SUGAR rounds for equalize");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--max-generated", f.max_generated, "abort a round planning more points (0 = no limit)");
  app->add_option("--ks-target-p", f.ks_target_p, "equalize stops once the K-S p-value reaches this");
  app->add_flag("--no-rescale", "skip the final rescaling step");
}

SugarConfig resolve_config(const ConfigFlags& f, const std::optional<SugarConfig>& replayed) {
  if (replayed) return *replayed;
  CLI::App& app = *f.app;
  SugarConfig cfg = f.config_path.empty() ? SugarConfig{} : config_from_json(read_text(f.config_path));
  if (app.count("--degree-bw")) cfg.degree_bandwidth = BandwidthSpec::parse(f.degree_bw);
  if (app.count("--diffusion-bw")) cfg.diffusion_bandwidth = BandwidthSpec::parse(f.diffusion_bw);
  if (app.count("--k-cov")) cfg.k_cov = f.k_cov;
  if (app.count("--t")) cfg.t = f.t;
  if (app.count("--max-iters")) cfg.max_iters = f.max_iters;
  if (app.count("--seed")) cfg.seed = f.seed;
  if (app.count("--max-generated")) cfg.max_generated = f.max_generated;
  if (app.count("--ks-target-p")) cfg.ks_target_p = f.ks_target_p;
  if (app.count("--no-rescale")) cfg.rescale = false;
  cfg.validate();
  return cfg;
}

/// Collects what a command read and wrote; the manifest is written last.
class Run {
 public:
  Run(std::string command, std::string prefix, const std::vector<std::string>& argv)
      : prefix_(std::move(prefix)), start_(std::chrono::steady_clock::now()) {
    manifest_["command"] = std::move(command);
    manifest_["argv"] = argv;
    manifest_["cwd"] = fs::current_path().string();
    manifest_["inputs"] = Json::object();
    manifest_["outputs"] = Json::object();
    manifest_["metrics"] = Json::object();
  }

  std::string path(const std::string& suffix) const { return prefix_ + suffix; }

  void input(const std::string& key, const std::string& p) { manifest_["inputs"][key] = p; }
  void config(const SugarConfig& cfg) {
    manifest_["config"] = Json::parse(config_to_json(cfg));
    manifest_["seed"] = cfg.seed;
  }
  void seed(std::uint64_t s) { manifest_["seed"] = s; }
  Json& metrics() { return manifest_["metrics"]; }
  Json& root() { return manifest_; }

  void emit(const std::string& key, const std::string& suffix, const std::string& text) {
    const std::string p = path(suffix);
    write_text(p, text);
    manifest_["outputs"][key] = p;
  }

  void finish(const std::vector<std::string>& warnings = {}) {
    manifest_["warnings"] = warnings;
    manifest_["outputs"]["manifest"] = path("_manifest.json");
    manifest_["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text(path("_manifest.json"), manifest_.dump(2) + "\n");
  }

 private:
  std::string prefix_;
  std::chrono::steady_clock::time_point start_;
  Json manifest_;
};

DataMatrix load_points(const std::string& path, bool no_header) {
  DataMatrix x = load_csv(path, !no_header);
  if (x.has_col_names()) return x;
  std::vector<std::string> names;
  for (Index j = 0; j < x.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  return DataMatrix(x.values(), std::move(names));
}

std::string origin_csv(const std::vector<Index>& origin) {
  std::string out = "origin\n";
  for (Index o : origin) out += std::to_string(o) + "\n";
  return out;
}

std::string labels_text(const Labels& labels) {
  std::string out = "label\n";
  for (int l : labels) out += std::to_string(l) + "\n";
  return out;
}

/// "angle" or "col:J" (0-based column).
struct Coordinate {
  std::string text;
  Index column = -1;

  static Coordinate parse(const std::string& s) {
    Coordinate c{s};
    if (s == "angle") return c;
    if (s.rfind("col:", 0) == 0) {
      try {
        std::size_t used = 0;
        c.column = static_cast<Index>(std::stoll(s.substr(4), &used));
        if (used == s.size() - 4 && c.column >= 0) return c;
      } catch (const std::exception&) {
      }
    }
    throw UsageError("coordinate must be 'angle' or 'col:J', got '" + s + "'");
  }

  Vector values(const DataMatrix& x) const {
    if (column < 0) {
      if (x.cols() != 2) throw UsageError("angle coordinate needs 2-D points, got " + std::to_string(x.cols()));
      return circle_angles(x);
    }
    if (column >= x.cols()) throw UsageError("column " + std::to_string(column) + " out of range");
    return x.values().col(column);
  }
};

KsProbe make_probe(const Coordinate& c, std::optional<Scalar> lo, std::optional<Scalar> hi) {
  if (c.column < 0) {
    lo = lo.value_or(-std::numbers::pi);
    hi = hi.value_or(std::numbers::pi);
  }
  if (!lo || !hi) throw UsageError("--lo and --hi are required for column coordinates");
  return KsProbe{[c](const DataMatrix& x) { return c.values(x); }, *lo, *hi};
}

struct Options {
  std::string kind;
  std::string in;
  std::string labels;
  std::string out;
  bool no_header = false;
  std::optional<Index> n;
  std::optional<Scalar> bias;
  std::optional<Scalar> ratio;
  std::optional<Scalar> gap;
  std::optional<Scalar> floor;
  std::optional<Scalar> noise;
  std::string coord;
  std::optional<Scalar> lo;
  std::optional<Scalar> hi;
  Index folds = 10;
  Index k_nn = 5;
  Index smote_k = 5;
  Scalar smote_ratio = 1.0;
  bool per_class = false;
  Index k = 5;
  Index restarts = 10;
  std::string graph_bw = "maxmin:2";
  Scalar threshold = 0.5;
  std::string target;
  Index bins = 0;
  std::uint64_t synth_seed = 0;
};

void cmd_synth(const Options& o, Run& run) {
  run.seed(o.synth_seed);
  Json& params = run.root()["params"];
  params["kind"] = o.kind;
  auto need_no_n = [&] {
    if (o.n) throw UsageError("synth " + o.kind + " has fixed class sizes; --n is not accepted");
  };
  if (o.kind == "circle") {
    const Index n = o.n.value_or(100);
    const Scalar bias = o.bias.value_or(2.0);
    params["n"] = n;
    params["bias"] = bias;
    run.emit("data", ".csv", format_csv(gen_circle(n, bias, o.synth_seed)));
  } else if (o.kind == "swiss") {
    SwissRollSpec spec;
    spec.n = o.n.value_or(600);
    spec.theta_bias = o.bias.value_or(1.0);
    spec.seed = o.synth_seed;
    spec.validate();
    params["n"] = spec.n;
    params["bias"] = spec.theta_bias;
    const SwissRoll roll = gen_swiss_roll_with_params(spec);
    run.emit("data", ".csv", format_csv(roll.points));
    PointMatrix th(roll.theta.size(), 2);
    th << roll.theta, roll.h;
    run.emit("params", "_params.csv", format_csv(DataMatrix(std::move(th), {"theta", "h"})));
  } else if (o.kind == "sphere") {
    const Index n = o.n.value_or(900);
    const Scalar bias = o.bias.value_or(2.0);
    const Scalar fl = o.floor.value_or(0.02);
    params["n"] = n;
    params["bias"] = bias;
    params["floor"] = fl;
    run.emit("data", ".csv", format_csv(gen_sphere(n, bias, o.synth_seed, fl)));
  } else if (o.kind == "mixture" || o.kind == "rings") {
    const Index n = o.n.value_or(o.kind == "mixture" ? 550 : 440);
    const Scalar ratio = o.ratio.value_or(10.0);
    if (!(ratio >= 1)) throw UsageError("--ratio must be >= 1");
    const Index major = static_cast<Index>(std::llround(static_cast<double>(n) * ratio / (ratio + 1)));
    const Index minor = n - major;
    if (major < 1 || minor < 1) throw UsageError("--n too small for --ratio");
    params["n"] = n;
    params["ratio"] = ratio;
    LabeledDataset d;
    if (o.kind == "mixture") {
      const Scalar gap = o.gap.value_or(3.0);
      params["gap"] = gap;
      MixtureComponent a{Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 0};
      MixtureComponent b = a;
      b.mean(0) = gap;
      d = gen_gaussian_mixture({a}, major, o.synth_seed);
      const LabeledDataset m = gen_gaussian_mixture({b}, minor, o.synth_seed + 1);
      d = d.append(m.data(), Labels(static_cast<std::size_t>(minor), 1));
    } else {
      RingsSpec spec;
      spec.n_major = major;
      spec.n_minor = minor;
      spec.noise = o.noise.value_or(spec.noise);
      spec.seed = o.synth_seed;
      params["noise"] = spec.noise;
      d = gen_rings(spec);
    }
    run.emit("data", ".csv", format_csv(d.data()));
    run.emit("labels", "_labels.csv", labels_text(d.labels()));
  } else if (o.kind == "blobs") {
    need_no_n();
    BlobsSpec spec;
    spec.gap = o.gap.value_or(spec.gap);
    spec.floor = o.floor.value_or(spec.floor);
    spec.seed = o.synth_seed;
    params["gap"] = spec.gap;
    params["floor"] = spec.floor;
    const LabeledDataset d = gen_edge_biased_blobs(spec);
    run.emit("data", ".csv", format_csv(d.data()));
    run.emit("labels", "_labels.csv", labels_text(d.labels()));
  } else {
    throw UsageError("unknown synth kind '" + o.kind + "'");
  }
  run.finish();
}

void record_result(Run& run, const AugmentedDataset& r) {
  run.emit("generated", "_generated.csv", format_csv(r.generated));
  run.emit("combined", "_combined.csv", format_csv(r.combined));
  run.emit("origin", "_origin.csv", origin_csv(r.origin));
  Json& m = run.metrics();
  m["rows"] = r.original.rows();
  m["generated"] = r.generated.rows();
  m["zero_levels"] = r.generated.rows() == 0;
  if (!r.history.empty()) {
    m["degree_variance_before"] = r.history.front().degree_variance_before;
    m["degree_variance_after"] = r.history.back().degree_variance_after;
  }
  m["stop_reason"] = r.stop_reason;
}

void cmd_generate(const Options& o, const SugarConfig& cfg, Run& run) {
  const DataMatrix x = load_points(o.in, o.no_header);
  run.input("data", o.in);
  run.config(cfg);
  const AugmentedDataset r = sugar::sugar(x, cfg);
  record_result(run, r);
  run.metrics()["max_level"] = r.history.empty() ? 0 : r.history.front().max_level;
  run.finish(r.warnings);
}

void cmd_equalize(const Options& o, const SugarConfig& cfg, Run& run) {
  const DataMatrix x = load_points(o.in, o.no_header);
  run.input("data", o.in);
  run.config(cfg);
  std::optional<KsProbe> probe;
  if (!o.coord.empty()) probe = make_probe(Coordinate::parse(o.coord), o.lo, o.hi);
  const AugmentedDataset r = sugar_iterate(x, cfg, probe);
  record_result(run, r);
  run.emit("history", "_history.csv", history_csv(r.history));
  Json hist = Json::array();
  for (const IterationRecord& h : r.history) hist.push_back(to_json(h));
  run.metrics()["iterations"] = hist;
  if (r.initial_ks) run.metrics()["initial_ks"] = to_json(*r.initial_ks);
  run.finish(r.warnings);
}

void cmd_eval_ks(const Options& o, Run& run) {
  if (o.coord.empty()) throw UsageError("eval ks needs --coord");
  const DataMatrix x = load_points(o.in, o.no_header);
  run.input("data", o.in);
  const KsProbe probe = make_probe(Coordinate::parse(o.coord), o.lo, o.hi);
  const KsResult ks = ks_uniform_test(probe.coordinate(x), probe.lo, probe.hi);
  Json report = to_json(ks);
  report["coord"] = o.coord;
  report["lo"] = probe.lo;
  report["hi"] = probe.hi;
  run.emit("report", "_ks.json", report.dump(2) + "\n");
  run.emit("report_csv", "_ks.csv",
           metrics_csv({{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"n", static_cast<Scalar>(ks.n)}}));
  run.metrics() = report;
  run.finish();
}

LabeledDataset load_labeled(const Options& o, Run& run) {
  if (o.labels.empty()) throw UsageError("this task needs --labels");
  const DataMatrix x = load_points(o.in, o.no_header);
  run.input("data", o.in);
  run.input("labels", o.labels);
  return LabeledDataset(x, load_labels(o.labels));
}

void cmd_eval_classify(const Options& o, const SugarConfig& cfg, Run& run) {
  const LabeledDataset d = load_labeled(o, run);
  ClassifyOptions opt;
  opt.folds = o.folds;
  opt.k_nn = o.k_nn;
  opt.smote_k = o.smote_k;
  opt.smote_ratio = o.smote_ratio;
  opt.per_class = o.per_class;
  opt.sugar = cfg;
  opt.seed = cfg.seed;
  run.config(cfg);
  run.root()["params"] = {{"folds", o.folds}, {"k_nn", o.k_nn}, {"smote_k", o.smote_k},
                          {"smote_ratio", o.smote_ratio}, {"per_class", o.per_class}};
  const ClassifyOutcome r = classify_experiment(d, opt);
  const Json report = to_json(r);
  run.emit("report", "_report.json", report.dump(2) + "\n");
  run.emit("report_csv", "_report.csv", classification_csv(r));
  run.metrics() = {{"acp_orig", r.original.acp}, {"acr_orig", r.original.acr}, {"acp_smote", r.smote.acp},
                   {"acr_smote", r.smote.acr}, {"acp_sugar", r.sugar.acp}, {"acr_sugar", r.sugar.acr}};
  run.finish();
}

void cmd_eval_cluster(const Options& o, const SugarConfig& cfg, Run& run) {
  const LabeledDataset d = load_labeled(o, run);
  ClusterOptions opt;
  opt.k = o.k;
  opt.restarts = o.restarts;
  opt.graph_bandwidth = BandwidthSpec::parse(o.graph_bw);
  opt.threshold = o.threshold;
  opt.sugar = cfg;
  opt.seed = cfg.seed;
  run.config(cfg);
  run.root()["params"] = {{"k", o.k}, {"restarts", o.restarts}, {"graph_bw", opt.graph_bandwidth.to_string()},
                          {"threshold", o.threshold}};
  const ClusterOutcome r = cluster_experiment(d, opt);
  const Json report = to_json(r);
  run.emit("report", "_report.json", report.dump(2) + "\n");
  run.emit("report_csv", "_report.csv",
           metrics_csv({{"ri_orig", r.ri_original},
                        {"ri_sugar", r.ri_sugar},
                        {"components_orig", static_cast<Scalar>(r.components_original)},
                        {"components_sugar", static_cast<Scalar>(r.components_sugar)},
                        {"generated", static_cast<Scalar>(r.generated)}}));
  run.metrics() = report;
  run.finish();
}

Index column_index(const DataMatrix& x, const std::string& name) {
  for (std::size_t j = 0; j < x.col_names().size(); ++j) {
    if (x.col_names()[j] == name) return static_cast<Index>(j);
  }
  try {
    std::size_t used = 0;
    const long long j = std::stoll(name, &used);
    if (used == name.size() && j >= 0 && j < x.cols()) return static_cast<Index>(j);
  } catch (const std::exception&) {
  }
  throw UsageError("no column '" + name + "'");
}

/// MI of every column against the target, before and after SUGAR, each scaled by
/// its own maximum over the columns.
void cmd_eval_mi(const Options& o, const SugarConfig& cfg, Run& run) {
  if (o.target.empty()) throw UsageError("eval mi needs --target");
  if (o.bins == 1 || o.bins < 0) throw UsageError("--bins must be 0 (automatic) or >= 2");
  const DataMatrix x = load_points(o.in, o.no_header);
  run.input("data", o.in);
  run.config(cfg);
  const Index target = column_index(x, o.target);
  const AugmentedDataset aug = sugar::sugar(x, cfg);
  const DataMatrix& z = aug.combined;
  const Index bins_x = o.bins ? o.bins : default_mi_bins(x.rows());
  const Index bins_z = o.bins ? o.bins : default_mi_bins(z.rows());

  std::vector<std::string> names;
  Vector mi_x(x.cols() - 1);
  Vector mi_z(x.cols() - 1);
  Index c = 0;
  for (Index j = 0; j < x.cols(); ++j) {
    if (j == target) continue;
    names.push_back(x.col_names()[static_cast<std::size_t>(j)]);
    mi_x(c) = mutual_information(x.values().col(j), x.values().col(target), bins_x);
    mi_z(c) = mutual_information(z.values().col(j), z.values().col(target), bins_z);
    ++c;
  }
  const Scalar max_x = mi_x.size() ? mi_x.maxCoeff() : 0;
  const Scalar max_z = mi_z.size() ? mi_z.maxCoeff() : 0;
  Json rows = Json::array();
  std::string csv = "column,mi_orig,mi_sugar,scaled_orig,scaled_sugar\n";
  for (Index i = 0; i < mi_x.size(); ++i) {
    const Scalar sx = max_x > 0 ? mi_x(i) / max_x : 0;
    const Scalar sz = max_z > 0 ? mi_z(i) / max_z : 0;
    rows.push_back({{"column", names[static_cast<std::size_t>(i)]},
                    {"mi_orig", mi_x(i)},
                    {"mi_sugar", mi_z(i)},
                    {"scaled_orig", sx},
                    {"scaled_sugar", sz}});
    csv += names[static_cast<std::size_t>(i)];
    for (Scalar v : {mi_x(i), mi_z(i), sx, sz}) csv += "," + Json(v).dump();
    csv += "\n";
  }
  Json report = {{"target", x.col_names()[static_cast<std::size_t>(target)]},
                 {"bins_orig", bins_x},
                 {"bins_sugar", bins_z},
                 {"generated", aug.generated.rows()},
                 {"columns", rows}};
  run.emit("report", "_mi.json", report.dump(2) + "\n");
  run.emit("report_csv", "_mi.csv", csv);
  run.metrics() = {{"generated", aug.generated.rows()}, {"columns", rows.size()}};
  run.finish(aug.warnings);
}

void print_error(const std::string& kind, const std::string& message, const Json& extra = Json::object()) {
  Json line = {{"error", kind}};
  for (auto& [k, v] : extra.items()) line[k] = v;
  line["message"] = message;
  std::cerr << line.dump() << "\n";
}

int run_cli(const std::vector<std::string>& args, const std::optional<SugarConfig>& replayed);

int cmd_replay(const std::string& manifest_path) {
  const Json m = Json::parse(read_text(manifest_path));
  std::optional<SugarConfig> cfg;
  if (m.contains("config")) cfg = config_from_json(m["config"].dump());
  const std::vector<std::string> args = m.at("argv").get<std::vector<std::string>>();
  fs::current_path(m.at("cwd").get<std::string>());
  return run_cli(args, cfg);
}

int run_cli(const std::vector<std::string>& args, const std::optional<SugarConfig>& replayed) {
  CLI::App app{"SUGAR: geometry-based data generation for density equalization", "sugar"};
  app.require_subcommand(1);
  Options o;
  ConfigFlags gen_flags;
  ConfigFlags eq_flags;
  ConfigFlags eval_flags;
  std::string replay_path;

  auto add_io = [&](CLI::App* sub, bool labels) {
    sub->add_option("--in", o.in, "input CSV")->required()->check(CLI::ExistingFile);
    if (labels) sub->add_option("--labels", o.labels, "label CSV with a 'label' header")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output prefix")->required();
    sub->add_flag("--no-header", o.no_header, "input CSV has no header row");
  };

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic fixture");
  synth->add_option("kind", o.kind, "circle|swiss|sphere|mixture|rings|blobs")
      ->required()
      ->check(CLI::IsMember({"circle", "swiss", "sphere", "mixture", "rings", "blobs"}));
  synth->add_option("--n", o.n, "number of points");
  synth->add_option("--bias", o.bias, "sampling bias (circle, swiss, sphere)");
  synth->add_option("--ratio", o.ratio, "majority:minority ratio (mixture, rings)");
  synth->add_option("--gap", o.gap, "component spacing (mixture, blobs)");
  synth->add_option("--floor", o.floor, "density floor (sphere, blobs)");
  synth->add_option("--noise", o.noise, "radial noise (rings)");
  synth->add_option("--seed", o.synth_seed, "random seed");
  synth->add_option("--out", o.out, "output prefix")->required();

  CLI::App* generate = app.add_subcommand("generate", "one SUGAR pass");
  add_io(generate, false);
  add_config_flags(generate, gen_flags);

  CLI::App* equalize = app.add_subcommand("equalize", "repeated SUGAR passes");
  add_io(equalize, false);
  add_config_flags(equalize, eq_flags);
  equalize->add_option("--coord", o.coord, "track a K-S test on this coordinate: angle or col:J");
  equalize->add_option("--lo", o.lo, "lower end of the uniform null");
  equalize->add_option("--hi", o.hi, "upper end of the uniform null");

  CLI::App* eval = app.add_subcommand("eval", "evaluation harness");
  eval->add_option("task", o.kind, "ks|classify|cluster|mi")
      ->required()
      ->check(CLI::IsMember({"ks", "classify", "cluster", "mi"}));
  add_io(eval, true);
  add_config_flags(eval, eval_flags);
  eval->add_option("--coord", o.coord, "ks: angle or col:J");
  eval->add_option("--lo", o.lo, "ks: lower end of the uniform null");
  eval->add_option("--hi", o.hi, "ks: upper end of the uniform null");
  eval->add_option("--folds", o.folds, "classify: cross-validation folds");
  eval->add_option("--k-nn", o.k_nn, "classify: neighbours for k-NN");
  eval->add_option("--smote-k", o.smote_k, "classify: SMOTE neighbours");
  eval->add_option("--smote-ratio", o.smote_ratio, "classify: SMOTE target ratio");
  eval->add_flag("--per-class", o.per_class, "classify: run SUGAR on each class separately");
  eval->add_option("--k", o.k, "cluster: k-means clusters");
  eval->add_option("--restarts", o.restarts, "cluster: k-means restarts");
  eval->add_option("--graph-bw", o.graph_bw, "cluster: bandwidth of the component graph");
  eval->add_option("--threshold", o.threshold, "cluster: affinity threshold of the component graph");
  eval->add_option("--target", o.target, "mi: target column name or index");
  eval->add_option("--bins", o.bins, "mi: histogram bins (0 = automatic)");

  CLI::App* replay = app.add_subcommand("replay", "rerun the command recorded in a manifest");
  replay->add_option("manifest", replay_path, "manifest JSON")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) {
      print_error("usage", e.what());
      return kUsage;
    }
    return kOk;
  }

  try {
    if (*replay) return cmd_replay(replay_path);
    if (*synth) {
      Run run("synth", o.out, args);
      cmd_synth(o, run);
    } else if (*generate) {
      const SugarConfig cfg = resolve_config(gen_flags, replayed);
      Run run("generate", o.out, args);
      cmd_generate(o, cfg, run);
    } else if (*equalize) {
      const SugarConfig cfg = resolve_config(eq_flags, replayed);
      Run run("equalize", o.out, args);
      cmd_equalize(o, cfg, run);
    } else {
      const SugarConfig cfg = resolve_config(eval_flags, replayed);
      Run run("eval " + o.kind, o.out, args);
      if (o.kind == "ks") {
        cmd_eval_ks(o, run);
      } else if (o.kind == "classify") {
        cmd_eval_classify(o, cfg, run);
      } else if (o.kind == "cluster") {
        cmd_eval_cluster(o, cfg, run);
      } else {
        cmd_eval_mi(o, cfg, run);
      }
    }
  } catch (const PipelineError& e) {
    print_error("pipeline", e.what(), {{"step", e.step()}});
    return kPipeline;
  } catch (const CsvError& e) {
    print_error("input", e.what(), {{"row", e.row()}, {"col", e.col()}});
    return kInput;
  } catch (const std::invalid_argument& e) {
    print_error("usage", e.what());
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  } catch (const std::exception& e) {
    print_error("failure", e.what());
    return kFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::nullopt);
}

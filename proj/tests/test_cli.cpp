#include "sugar/csv.hpp"
#include "sugar/pipeline.hpp"
#include "sugar/report.hpp"
#include "sugar/synth.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using namespace sugar;

namespace {

struct Result {
  int code = -1;
  std::string err;
};

/// Scratch directory removed at scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sugar_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

Result run(const TempDir& dir, const std::string& args) {
  const std::string err = dir / "stderr.txt";
  const std::string cmd = std::string(SUGAR_CLI_PATH) + " " + args + " > " + (dir / "stdout.txt") + " 2> " + err;
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = read_text(err);
  return r;
}

Json manifest(const std::string& prefix) { return Json::parse(read_text(prefix + "_manifest.json")); }

/// Last line of stderr parsed as the machine-readable error record.
Json error_line(const Result& r) {
  std::istringstream in(r.err);
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '{') last = line;
  }
  REQUIRE(!last.empty());
  return Json::parse(last);
}

}  // namespace

TEST_CASE("synth writes fixtures of the requested size, deterministically") {
  TempDir dir;
  const std::string p = dir / "circle";
  REQUIRE(run(dir, "synth circle --n 100 --bias 2 --seed 7 --out " + p).code == 0);
  const DataMatrix c = load_csv(p + ".csv", true);
  CHECK(c.rows() == 100);
  CHECK(c.cols() == 2);
  CHECK(c.values() == gen_circle(100, 2, 7).values());
  const std::string first = read_text(p + ".csv");
  REQUIRE(run(dir, "synth circle --n 100 --bias 2 --seed 7 --out " + p).code == 0);
  CHECK(read_text(p + ".csv") == first);
  CHECK(manifest(p)["command"] == "synth");

  const std::string s = dir / "swiss";
  REQUIRE(run(dir, "synth swiss --n 600 --seed 1 --out " + s).code == 0);
  const DataMatrix roll = load_csv(s + ".csv", true);
  CHECK(roll.rows() == 600);
  CHECK(roll.cols() == 3);

  const std::string m = dir / "mix";
  REQUIRE(run(dir, "synth mixture --n 550 --ratio 10 --seed 2 --out " + m).code == 0);
  const Labels y = load_labels(m + "_labels.csv");
  CHECK(y.size() == 550);
  CHECK(std::count(y.begin(), y.end(), 1) == 50);
}

TEST_CASE("synth rejects invalid parameters with usage text") {
  TempDir dir;
  Result r = run(dir, "synth circle --n -3 --out " + (dir / "bad"));
  CHECK(r.code == 2);
  CHECK(error_line(r)["error"] == "usage");
  CHECK(r.err.find("--bias") != std::string::npos);
  r = run(dir, "synth teapot --out " + (dir / "bad"));
  CHECK(r.code == 2);
  CHECK(!fs::exists(dir / "bad_manifest.json"));
}

TEST_CASE("generate on uniform input writes a header-only generated file") {
  TempDir dir;
  PointMatrix m(24, 2);
  for (Index i = 0; i < 24; ++i) {
    m(i, 0) = std::cos(2 * std::numbers::pi * static_cast<double>(i) / 24);
    m(i, 1) = std::sin(2 * std::numbers::pi * static_cast<double>(i) / 24);
  }
  save_csv(DataMatrix(m, {"x", "y"}), dir / "poly.csv");
  const std::string p = dir / "poly";
  REQUIRE(run(dir, "generate --in " + (dir / "poly.csv") + " --out " + p).code == 0);
  CHECK(read_text(p + "_generated.csv") == "x,y\n");
  CHECK(load_csv(p + "_combined.csv", true).rows() == 24);
  const Json j = manifest(p);
  CHECK(j["metrics"]["zero_levels"] == true);
  CHECK(j["metrics"]["generated"] == 0);
}

TEST_CASE("generate on the biased circle lowers degree variance") {
  TempDir dir;
  save_csv(gen_circle(100, 2, 7), dir / "c.csv");
  const std::string p = dir / "out";
  REQUIRE(run(dir, "generate --in " + (dir / "c.csv") + " --out " + p).code == 0);
  const Json j = manifest(p);
  CHECK(j["metrics"]["degree_variance_after"].get<double>() < j["metrics"]["degree_variance_before"].get<double>());
  const DataMatrix g = load_csv(p + "_generated.csv", true);
  CHECK(g.rows() == j["metrics"]["generated"].get<Index>());
  CHECK(load_csv(p + "_combined.csv", true).rows() == 100 + g.rows());
  CHECK(j["config"]["degree_bandwidth"] == "maxmin:2");
}

TEST_CASE("--t 0 --no-rescale emits the raw samples") {
  TempDir dir;
  const DataMatrix x = gen_circle(60, 2, 3);
  save_csv(x, dir / "c.csv");
  const std::string p = dir / "raw";
  REQUIRE(run(dir, "generate --in " + (dir / "c.csv") + " --t 0 --no-rescale --seed 5 --out " + p).code == 0);
  SugarConfig cfg;
  cfg.t = 0;
  cfg.rescale = false;
  cfg.seed = 5;
  const AugmentedDataset a = sugar::sugar(x, cfg);
  const LocalCovarianceSet cov = local_covariances(x, cfg.k_cov);
  const ResolvedBandwidth bw = resolve_bandwidth(x, cfg.degree_bandwidth);
  const GeneratedBatch y0 = sample_batch(x, cov, generation_bounds(degree_profile(x, bw), cov, bw.scales.sigma2_vector(x.rows())), 5);
  CHECK(read_text(p + "_generated.csv") == format_csv(y0.points));
  CHECK(read_text(p + "_generated.csv") == format_csv(a.generated));
}

TEST_CASE("config file is read and flags override it") {
  TempDir dir;
  save_csv(gen_circle(60, 2, 3), dir / "c.csv");
  SugarConfig cfg;
  cfg.k_cov = 7;
  cfg.t = 2;
  write_text(dir / "cfg.json", config_to_json(cfg));
  const std::string p = dir / "o";
  REQUIRE(run(dir, "generate --in " + (dir / "c.csv") + " --config " + (dir / "cfg.json") + " --t 3 --out " + p).code ==
          0);
  const SugarConfig used = config_from_json(manifest(p)["config"].dump());
  CHECK(used.k_cov == 7);
  CHECK(used.t == 3);

  write_text(dir / "bad.json", "{\"k_cov\": 5, \"sigma\": 1}");
  const Result r = run(dir, "generate --in " + (dir / "c.csv") + " --config " + (dir / "bad.json") + " --out " + p);
  CHECK(r.code == 2);
  CHECK(error_line(r)["message"].get<std::string>().find("sigma") != std::string::npos);
}

TEST_CASE("replaying a manifest reproduces outputs byte for byte") {
  TempDir dir;
  const std::string c = dir / "c";
  REQUIRE(run(dir, "synth circle --n 80 --bias 2 --seed 4 --out " + c).code == 0);
  const std::string p = dir / "eq";
  REQUIRE(run(dir, "equalize --in " + c + ".csv --max-iters 2 --max-generated 3000 --coord angle --seed 9 --out " + p)
              .code == 0);
  const Json before = manifest(p);
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& [key, path] : before["outputs"].items()) {
    if (key != "manifest") files.emplace_back(path.get<std::string>(), read_text(path.get<std::string>()));
  }
  REQUIRE(files.size() >= 4);
  for (const auto& [path, text] : files) fs::remove(path);
  fs::copy_file(p + "_manifest.json", dir / "saved.json");
  REQUIRE(run(dir, "replay " + (dir / "saved.json")).code == 0);
  for (const auto& [path, text] : files) CHECK(read_text(path) == text);
  Json after = manifest(p);
  after.erase("wall_time_s");
  Json expect = before;
  expect.erase("wall_time_s");
  CHECK(after == expect);

  REQUIRE(run(dir, "replay " + c + "_manifest.json").code == 0);
  CHECK(load_csv(c + ".csv", true).values() == gen_circle(80, 2, 4).values());
}

TEST_CASE("equalize records per-iteration history") {
  TempDir dir;
  save_csv(gen_circle(100, 2, 1), dir / "c.csv");
  const std::string p = dir / "eq";
  REQUIRE(run(dir, "equalize --in " + (dir / "c.csv") + " --max-iters 3 --max-generated 5000 --coord angle --out " + p)
              .code == 0);
  const Json j = manifest(p);
  CHECK(j["metrics"]["iterations"].size() >= 1);
  CHECK(j["metrics"].contains("initial_ks"));
  const std::string h = read_text(p + "_history.csv");
  CHECK(h.rfind("iteration,input_rows,generated", 0) == 0);
}

TEST_CASE("eval ks accepts the uniform circle") {
  TempDir dir;
  save_csv(gen_circle(200, 0, 11), dir / "u.csv");
  const std::string p = dir / "ks";
  REQUIRE(run(dir, "eval ks --in " + (dir / "u.csv") + " --coord angle --out " + p).code == 0);
  const Json j = Json::parse(read_text(p + "_ks.json"));
  CHECK(j["p_value"].get<double>() > 0.05);
  CHECK(fs::exists(p + "_ks.csv"));

  const Result r = run(dir, "eval ks --in " + (dir / "u.csv") + " --coord col:0 --out " + p);
  CHECK(r.code == 2);
}

TEST_CASE("eval classify reports all three methods") {
  TempDir dir;
  const std::string d = dir / "rings";
  REQUIRE(run(dir, "synth rings --n 440 --ratio 10 --seed 1 --out " + d).code == 0);
  const std::string p = dir / "cls";
  REQUIRE(run(dir, "eval classify --in " + d + ".csv --labels " + d + "_labels.csv --seed 1 --out " + p).code == 0);
  const Json j = Json::parse(read_text(p + "_report.json"));
  for (const char* key : {"acp_orig", "acr_orig", "acp_smote", "acr_smote", "acp_sugar", "acr_sugar"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["acr_sugar"].get<double>() > j["acr_orig"].get<double>());
  CHECK(read_text(p + "_report.csv").find("sugar") != std::string::npos);

  const Result missing = run(dir, "eval classify --in " + d + ".csv --out " + p);
  CHECK(missing.code == 2);
  const Result folds = run(dir, "eval classify --in " + d + ".csv --labels " + d + "_labels.csv --folds 50 --out " + p);
  CHECK(folds.code == 2);
  CHECK(error_line(folds)["message"].get<std::string>().find("fold") != std::string::npos);
}

TEST_CASE("eval cluster on the biased blobs does not lower the Rand Index") {
  TempDir dir;
  const std::string d = dir / "blobs";
  REQUIRE(run(dir, "synth blobs --seed 1 --out " + d).code == 0);
  const std::string p = dir / "clu";
  REQUIRE(run(dir, "eval cluster --k 5 --graph-bw adaptive:10 --threshold 0.3 --in " + d + ".csv --labels " + d +
                       "_labels.csv --seed 1 --out " + p)
              .code == 0);
  const Json j = Json::parse(read_text(p + "_report.json"));
  CHECK(j["ri_sugar"].get<double>() >= j["ri_orig"].get<double>());
  CHECK(j.contains("components_orig"));
}

TEST_CASE("eval mi writes one row per non-target column") {
  TempDir dir;
  const std::string d = dir / "swiss";
  REQUIRE(run(dir, "synth swiss --n 300 --seed 2 --out " + d).code == 0);
  const std::string p = dir / "mi";
  REQUIRE(run(dir, "eval mi --in " + d + ".csv --target 0 --out " + p).code == 0);
  const Json j = Json::parse(read_text(p + "_mi.json"));
  CHECK(j["columns"].size() == 2);
  double best = 0;
  for (const Json& c : j["columns"]) best = std::max(best, c["scaled_orig"].get<double>());
  CHECK(best == doctest::Approx(1.0));
}

TEST_CASE("failures exit nonzero with a parsable error line") {
  TempDir dir;
  Result r = run(dir, "generate --in " + (dir / "missing.csv") + " --out " + (dir / "x"));
  CHECK(r.code == 2);
  CHECK(error_line(r)["error"] == "usage");

  write_text(dir / "bad.csv", "a,b\n1,2\n3,oops\n");
  r = run(dir, "generate --in " + (dir / "bad.csv") + " --out " + (dir / "x"));
  CHECK(r.code == 3);
  const Json e = error_line(r);
  CHECK(e["error"] == "input");
  CHECK(e["row"] == 3);
  CHECK(e["col"] == 2);

  save_csv(gen_circle(20, 2, 1), dir / "small.csv");
  r = run(dir, "generate --in " + (dir / "small.csv") + " --diffusion-bw adaptive:40 --out " + (dir / "x"));
  CHECK(r.code == 4);
  CHECK(error_line(r)["step"] == "mgc_kernel");
  CHECK(!fs::exists(dir / "x_manifest.json"));

  r = run(dir, "generate --in " + (dir / "small.csv") + " --out " + (dir / "no_such_dir/x"));
  CHECK(r.code != 0);
  CHECK(error_line(r)["error"] == "failure");
}

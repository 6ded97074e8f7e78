#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "srlcomb/corpus_io.hpp"
#include "srlcomb/eval.hpp"

namespace fs = std::filesystem;
using namespace srlcomb;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Workspace {
  fs::path dir;

  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("srlcomb_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string operator/(const std::string& f) const { return (dir / f).string(); }

  void synth(int sentences = 40, std::uint64_t seed = 3) {
    auto r = run({"synth", "--out", dir.string(), "--sentences", std::to_string(sentences), "--seed",
                  std::to_string(seed)});
    REQUIRE(r.code == 0);
  }

  std::vector<std::string> inputs() const {
    std::vector<std::string> a;
    for (const char* s : {"M1", "M2", "M3"}) {
      a.insert(a.end(), {"--system", std::string(s) + "=" + (dir / (std::string(s) + ".props")).string()});
      a.insert(a.end(), {"--scores", std::string(s) + "=" + (dir / (std::string(s) + ".scores")).string()});
    }
    a.insert(a.end(), {"--syntax", (dir / "syntax.txt").string()});
    return a;
  }
};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("help shows the defaults") {
  auto infer = run({"infer", "--help"});
  CHECK(infer.code == 0);
  CHECK(infer.out.find("[0.1]") != std::string::npos);
  CHECK(infer.out.find("[0.30]") != std::string::npos);
  CHECK(infer.out.find("[1000]") != std::string::npos);
  auto train = run({"train", "--help"});
  CHECK(train.out.find("[5]") != std::string::npos);
  CHECK(train.out.find("[2]") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("argument errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"infer", "--system", "A=/nonexistent/a.props"}).code == 2);
  CHECK(run({"score", "--predicted", "x"}).code == 2);
  Workspace ws("errors");
  ws.synth(10);
  CHECK(run(cat({"infer", "--engine", "cs", "--scorer", "svm"}, ws.inputs())).code == 2);
  CHECK(run(cat({"infer", "--engine", "quantum"}, ws.inputs())).code == 2);
  CHECK(run(cat({"infer", "--scope", "pred", "--constraints", "1+5"}, ws.inputs())).code == 2);
  write_file(ws / "broken.props", "-\t(A0*\n-\t*\n\n");
  CHECK(run({"score", "--predicted", ws / "broken.props", "--gold", ws / "gold.props"}).code == 2);
}

TEST_CASE("synth is deterministic and writes a manifest") {
  Workspace a("synth_a"), b("synth_b");
  a.synth(30, 11);
  b.synth(30, 11);
  for (const char* f : {"gold.props", "syntax.txt", "M1.props", "M2.scores", "M3.props"})
    CHECK(read_file(a / f) == read_file(b / f));
  auto manifest = nlohmann::json::parse(read_file(a / "manifest.json"));
  CHECK(manifest["command"] == "synth");
  CHECK(manifest["seed"] == 11);
  CHECK(parse_props(read_file(a / "gold.props")).sentences.size() == 30);
}

TEST_CASE("infer, score and the manifest") {
  Workspace ws("infer");
  ws.synth();
  auto r = run(cat({"infer", "--gold", ws / "gold.props", "--out", ws / "combined.props", "--bootstrap", "200"},
                   ws.inputs()));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Overall") != std::string::npos);
  CHECK(r.out.find("(200 resamples, level 0.95)") != std::string::npos);
  auto combined = parse_props(read_file(ws / "combined.props"));
  auto gold = parse_props(read_file(ws / "gold.props"));
  const double f1 = score(combined, gold).f1;

  auto manifest = nlohmann::json::parse(read_file(ws / "combined.props.manifest.json"));
  CHECK(manifest["engine"] == "cs");
  CHECK(manifest["scope"] == "pred");
  CHECK(manifest["constraints"] == "1+2");
  CHECK(manifest["O"] == 0.30);
  CHECK(manifest["gamma"] == 0.1);

  auto s = run({"score", "--predicted", ws / "combined.props", "--gold", ws / "gold.props", "--bootstrap", "0",
                "--out", ws / "labels.csv"});
  REQUIRE(s.code == 0);
  CHECK(read_file(ws / "labels.csv").rfind("label,correct", 0) == 0);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", f1);
  CHECK(s.out.find(buf) != std::string::npos);

  auto stdout_run = run(cat({"infer", "--scope", "sentence"}, ws.inputs()));
  REQUIRE(stdout_run.code == 0);
  CHECK(parse_props(stdout_run.out).sentences.size() == gold.sentences.size());
}

TEST_CASE("search budget exhaustion exits 4 with output") {
  Workspace ws("budget");
  ws.synth();
  auto r = run(cat({"infer", "--node-budget", "1", "--out", ws / "partial.props"}, ws.inputs()));
  CHECK(r.code == 4);
  CHECK(parse_props(read_file(ws / "partial.props")).sentences.size() == 40);
}

TEST_CASE("training, model mismatch and dp inference") {
  Workspace ws("train");
  ws.synth(30);
  auto t = run(cat({"train", "--gold", ws / "gold.props", "--scorer", "perceptron-local", "--epochs", "2", "--out",
                    ws / "local.model"},
                   ws.inputs()));
  REQUIRE(t.code == 0);
  CHECK(t.out.find("trained perceptron-local model") != std::string::npos);
  CHECK(fs::exists(ws / "local.model.vocab"));

  auto ok = run(cat({"infer", "--engine", "dp", "--scorer", "perceptron-local", "--model", ws / "local.model"},
                    ws.inputs()));
  CHECK(ok.code == 0);
  auto wrong = run(cat({"infer", "--engine", "dp", "--scorer", "svm", "--model", ws / "local.model"}, ws.inputs()));
  CHECK(wrong.code == 3);
  auto missing = run(cat({"infer", "--engine", "dp", "--scorer", "svm", "--model", ws / "none.model"}, ws.inputs()));
  CHECK(missing.code == 2);
  auto probsum = run(cat({"infer", "--engine", "dp"}, ws.inputs()));
  CHECK(probsum.code == 0);
}

TEST_CASE("pool, sweep, curves and oracle") {
  Workspace ws("reports");
  ws.synth();
  auto pool = run(cat({"pool", "--gold", ws / "gold.props", "--out", ws / "pool.txt"}, ws.inputs()));
  REQUIRE(pool.code == 0);
  CHECK(pool.out.find("∩ of 3") != std::string::npos);
  CHECK(fs::file_size(ws / "pool.txt") > 0);

  auto sweep = run(cat({"sweep", "--gold", ws / "gold.props"}, ws.inputs()));
  REQUIRE(sweep.code == 0);
  CHECK(sweep.out.rfind("O,precision,recall,f1\n", 0) == 0);
  CHECK(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 22);
  auto coarse = run(cat({"sweep", "--gold", ws / "gold.props", "--grid", "0:1:0.5"}, ws.inputs()));
  CHECK(std::count(coarse.out.begin(), coarse.out.end(), '\n') == 4);
  CHECK(run(cat({"sweep", "--gold", ws / "gold.props", "--grid", "1:0:0.5"}, ws.inputs())).code == 2);

  fs::create_directories(ws.dir / "curves");
  auto curves = run(cat({"curves", "--gold", ws / "gold.props", "--out", ws / "curves"}, ws.inputs()));
  REQUIRE(curves.code == 0);
  CHECK(fs::exists(ws.dir / "curves" / "M2.csv"));

  auto oracle = run(cat({"oracle", "--gold", ws / "gold.props", "--priority", "2", "--priority", "0", "--priority", "1"},
                        ws.inputs()));
  REQUIRE(oracle.code == 0);
  for (const char* block : {"[Combination]", "[Re-Ranking]", "[Baselines]", "[Systems]", "PProps"})
    CHECK(oracle.out.find(block) != std::string::npos);
}

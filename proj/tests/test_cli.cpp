#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "spellvar/corpus.hpp"
#include "spellvar/pairs.hpp"

namespace fs = std::filesystem;
using spellvar::read_file;

namespace {

const std::string kCli = SPELLVAR_CLI_PATH;
const std::string kFixtures = SPELLVAR_FIXTURE_DIR;

// Scratch directory removed when the test case ends.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("spellvar-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const TempDir& dir) {
  const std::string cmd = kCli + " " + args + " >" + (dir / "stdout.txt") + " 2>" + (dir / "stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli: version and help") {
  TempDir d;
  CHECK(run("--version", d) == 0);
  CHECK(read_file(d / "stdout.txt").find("0.1.0") != std::string::npos);
  CHECK(run("--help", d) == 0);
  CHECK(run("extract --bogus", d) == 1);
}

TEST_CASE("cli: bootstrap extraction is byte-identical across runs") {
  TempDir d;
  REQUIRE(run("gen-synthetic --kind bootstrap --out " + (d / "syn"), d) == 0);
  const std::string args = "extract --method bootstrap --corpus " + (d / "syn/corpus.jsonl") +
                           " --seeds " + (d / "syn/seeds.tsv") + " --tau 0.5 --out ";
  REQUIRE(run(args + (d / "a"), d) == 0);
  REQUIRE(run(args + (d / "b") + " --threads 3", d) == 0);
  REQUIRE(run(args + (d / "c") + " --serial", d) == 0);
  const auto pairs = read_file(d / "a/pairs.tsv");
  const auto trace = read_file(d / "a/trace.jsonl");
  CHECK(spellvar::parse_pairs_tsv(pairs).size() >= 30);
  for (const char* other : {"b", "c"}) {
    CHECK(read_file(d / (std::string(other) + "/pairs.tsv")) == pairs);
    CHECK(read_file(d / (std::string(other) + "/trace.jsonl")) == trace);
  }
  CHECK(read_file(d / "a/manifest.json").find("\"command\"") != std::string::npos);
}

TEST_CASE("cli: selftrain extraction writes a loadable model") {
  TempDir d;
  REQUIRE(run("gen-synthetic --kind selftrain --out " + (d / "syn"), d) == 0);
  REQUIRE(run("extract --method selftrain --corpus " + (d / "syn/unlabeled.jsonl") + " --gold " +
                  (d / "syn/gold.tsv") + " --out " + (d / "out"),
              d) == 0);
  CHECK(fs::exists(d / "out/model.crf"));
  CHECK(fs::exists(d / "out/silver.tsv"));
  CHECK(read_file(d / "out/model.crf").rfind("spellvar-crf 1\n", 0) == 0);
  CHECK_FALSE(spellvar::parse_pairs_tsv(read_file(d / "out/pairs.tsv")).empty());
}

TEST_CASE("cli: baseline extraction on the rule fixtures") {
  TempDir d;
  REQUIRE(run("extract --method baseline --corpus " + kFixtures + "/baseline_rules.jsonl --out " + (d / "out"), d) == 0);
  CHECK(spellvar::parse_pairs_tsv(read_file(d / "out/pairs.tsv")).size() == 10);
}

TEST_CASE("cli: eval on the embedding fixture") {
  TempDir d;
  REQUIRE(run("gen-synthetic --kind embeddings --out " + (d / "syn"), d) == 0);
  REQUIRE(run("eval --pairs " + (d / "syn/pairs.tsv") + " --embeddings " + (d / "syn/embeddings.txt") + " " +
                  (d / "syn/embeddings.txt") + " --formal-vocab " + (d / "syn/formal_vocab.txt") + " --out " +
                  (d / "out"),
              d) == 0);
  CHECK(fs::exists(d / "out/report-1-embeddings.tsv"));
  CHECK(fs::exists(d / "out/report-2-embeddings.tsv"));
  CHECK(read_file(d / "out/summary.json").find("\"accuracy\"") != std::string::npos);

  spellvar::write_text_file(d / "bad.txt", "ur 1 0 0\nyour 1 0\n");
  CHECK(run("eval --pairs " + (d / "syn/pairs.tsv") + " --embeddings " + (d / "bad.txt") + " --formal-vocab " +
                (d / "syn/formal_vocab.txt") + " --out " + (d / "bad"),
            d) == 2);
  CHECK(read_file(d / "stderr.txt").find("line 2") != std::string::npos);
}

TEST_CASE("cli: correlate joins on keys") {
  TempDir d;
  REQUIRE(run("correlate --intrinsic " + kFixtures + "/intrinsic.tsv --extrinsic " + kFixtures +
                  "/extrinsic.tsv --keys cat,window,dim --out " + (d / "corr.tsv"),
              d) == 0);
  const auto report = read_file(d / "corr.tsv");
  CHECK(report.find("top1\tf1\t24\t1.000000") != std::string::npos);
  CHECK(report.find("top20\tf1\t24\t") != std::string::npos);
  CHECK(report.find("constant") == std::string::npos);
  CHECK(run("correlate --intrinsic " + kFixtures + "/intrinsic.tsv --extrinsic " + kFixtures +
                "/extrinsic.tsv --keys cat,window,dim --intrinsic-cols constant",
            d) == 2);
  CHECK(run("correlate --intrinsic " + kFixtures + "/intrinsic.tsv --extrinsic " + kFixtures +
                "/extrinsic.tsv --keys nope",
            d) != 0);
}

TEST_CASE("cli: annotate writes CoNLL-U") {
  TempDir d;
  REQUIRE(run("annotate --corpus " + kFixtures + "/your.jsonl --out " + (d / "out.conllu"), d) == 0);
  const auto text = read_file(d / "out.conllu");
  CHECK(text.find("saying") != std::string::npos);
  CHECK(spellvar::parse_conllu(text).size() == 1);
}

TEST_CASE("cli: configuration and data errors") {
  TempDir d;
  REQUIRE(run("gen-synthetic --kind bootstrap --out " + (d / "syn"), d) == 0);
  CHECK(run("extract --method bootstrap --corpus " + (d / "syn/corpus.jsonl") + " --seeds " + (d / "missing.tsv") +
                " --out " + (d / "x"),
            d) == 1);
  CHECK(read_file(d / "stderr.txt").find("missing.tsv") != std::string::npos);
  CHECK(run("extract --method nope --corpus " + (d / "syn/corpus.jsonl") + " --out " + (d / "x"), d) == 1);

  spellvar::write_text_file(d / "broken.jsonl", "{\"word\": \"a\", \"definition\": \"b\"}\n{oops\n");
  CHECK(run("extract --method baseline --corpus " + (d / "broken.jsonl") + " --out " + (d / "x"), d) == 2);
  CHECK(read_file(d / "stderr.txt").find("line 2") != std::string::npos);

  REQUIRE(run("extract --method bootstrap --iterations 0 --corpus " + (d / "syn/corpus.jsonl") + " --seeds " +
                  (d / "syn/seeds.tsv") + " --out " + (d / "zero"),
              d) == 0);
  CHECK(spellvar::parse_pairs_tsv(read_file(d / "zero/pairs.tsv")).empty());
}

TEST_CASE("cli: config file supplies subcommand options") {
  TempDir d;
  REQUIRE(run("gen-synthetic --kind bootstrap --out " + (d / "syn"), d) == 0);
  spellvar::write_text_file(d / "run.ini", "[extract]\nmethod=bootstrap\ncorpus=" + (d / "syn/corpus.jsonl") +
                                               "\nseeds=" + (d / "syn/seeds.tsv") + "\niterations=1\n");
  REQUIRE(run("--config " + (d / "run.ini") + " extract --out " + (d / "out"), d) == 0);
  const auto trace = read_file(d / "out/trace.jsonl");
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 1);
}

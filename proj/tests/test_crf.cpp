#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "crf_toy.hpp"
#include "oracles.hpp"
#include "spellvar/crf.hpp"
#include "spellvar/errors.hpp"

using namespace spellvar;
using namespace spellvar::crf;

namespace {

const std::string kFixtures = SPELLVAR_FIXTURE_DIR;

bool has(const std::vector<std::string>& feats, const std::string& f) {
  return std::find(feats.begin(), feats.end(), f) != feats.end();
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

}  // namespace

TEST_CASE("tags") {
  CHECK(tag_char(Tag::O) == 'O');
  CHECK(parse_tag("I") == Tag::I);
  CHECK_THROWS_AS(parse_tag("B"), DataError);
}

TEST_CASE("features skip sentinel fields and mark sequence edges") {
  const auto toks = tokenize("way of saying Your");
  const auto feats = extract_features(toks, 2);
  REQUIRE(feats.size() == 4);
  CHECK(feats[0].front() == "bias");
  CHECK(has(feats[0], "-1:BOS"));
  CHECK_FALSE(has(feats[1], "-1:BOS"));
  CHECK(has(feats[3], "+1:EOS"));
  CHECK(has(feats[3], "word.lower=your"));
  CHECK(has(feats[3], "word.istitle=True"));
  CHECK(has(feats[2], "+1:word.istitle=True"));
  CHECK(has(feats[3], "-2:word.lower=of"));
  CHECK_FALSE(has(feats[3], "-3:word.lower=way"));
  for (const auto& pos : feats) {
    for (const auto& f : pos) {
      CHECK(f.find("pos_") == std::string::npos);
      CHECK(f.find("lemma_") == std::string::npos);
      CHECK(f.find("=_") == std::string::npos);
    }
  }
}

TEST_CASE("features use the parse when present") {
  const Corpus c = load_conllu(kFixtures + "/your.jsonl", kFixtures + "/your.conllu");
  const auto feats = extract_features(c.entries[0], 3);
  const auto& last = feats[4];
  CHECK(has(last, "pos_=PRON"));
  CHECK(has(last, "head_text=saying"));
  CHECK(has(last, "head_pos=VERB"));
  CHECK(has(last, "head_tag=VBG"));
  CHECK(has(last, "-1:lemma_=say"));
  CHECK(has(last, "dep_=dobj"));
  CHECK_FALSE(has(last, "-1:dep_=pcomp"));
}

TEST_CASE("Viterbi matches exhaustive enumeration") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lat = toy::random_lattice(rng, 1 + rng.below(8));
    const auto d = viterbi(lat);
    const auto [path, score] = oracle::best_path(lat);
    CHECK(d.labels == path);
    CHECK(d.score == doctest::Approx(score).epsilon(1e-12));
    CHECK(path_score(lat, d.labels) == doctest::Approx(d.score).epsilon(1e-12));
  }
}

TEST_CASE("marginals and partition function match enumeration") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lat = toy::random_lattice(rng, 1 + rng.below(8));
    const auto got = lattice_marginals(lat);
    const auto want = oracle::marginals(lat);
    for (std::size_t t = 0; t < got.size(); ++t) {
      CHECK(std::abs(got[t][0] - want[t][0]) < 1e-9);
      CHECK(std::abs(got[t][1] - want[t][1]) < 1e-9);
      CHECK(std::abs(got[t][0] + got[t][1] - 1.0) < 1e-9);
    }
    CHECK(forward_backward(lat).log_z == doctest::Approx(oracle::log_partition(lat)).epsilon(1e-12));
  }
}

TEST_CASE("zero weights decode to all O with even marginals") {
  CrfModel model;
  const auto feats = extract_features(tokenize("anything at all here"), 3);
  CHECK(viterbi_decode(model, feats).labels == TagSequence(4, Tag::O));
  for (const auto& m : marginals(model, feats)) {
    CHECK(m[0] == doctest::Approx(0.5));
    CHECK(m[1] == doctest::Approx(0.5));
  }
  CHECK(viterbi(Lattice{}).labels.empty());
}

TEST_CASE("unknown features contribute nothing") {
  CrfModel model;
  model.state_weights["known"] = {0.25, -1.0};
  const auto lat = model.lattice({{"unknown", "known"}, {"also-unknown"}});
  CHECK(lat.emissions[0][0] == 0.25);
  CHECK(lat.emissions[0][1] == -1.0);
  CHECK(lat.emissions[1][0] == 0.0);
  CHECK(lat.emissions[1][1] == 0.0);
}

TEST_CASE("gradient matches central differences") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto data = toy::random_data(rng, 8, 4);
    const auto w = toy::random_weights(rng, data.num_weights());
    const double l2 = rng.uniform(0.0, 1.0);
    const auto analytic = log_likelihood_and_gradient(w, data, l2, Execution::serial);
    const auto numeric = oracle::numeric_gradient(
        [&](const std::vector<double>& x) {
          return log_likelihood_and_gradient(x, data, l2, Execution::serial).value;
        },
        w, 1e-5);
    CHECK(relative_error(analytic.gradient, numeric) < 1e-4);
  }
}

TEST_CASE("serial and parallel objectives agree") {
  Rng rng(24);
  const auto data = toy::random_data(rng, 30, 200);
  const auto w = toy::random_weights(rng, data.num_weights());
  const auto a = log_likelihood_and_gradient(w, data, 0.1, Execution::serial);
  const auto b = log_likelihood_and_gradient(w, data, 0.1, Execution::parallel);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  CHECK(relative_error(a.gradient, b.gradient) < 1e-12);

  // block reduction makes the parallel result independent of the thread count
  const int saved = max_threads();
  set_threads(1);
  const auto one = log_likelihood_and_gradient(w, data, 0.1, Execution::parallel);
  set_threads(4);
  const auto four = log_likelihood_and_gradient(w, data, 0.1, Execution::parallel);
  set_threads(saved);
  CHECK(one.value == four.value);
  CHECK(one.gradient == four.gradient);
}

TEST_CASE("compile rejects length mismatches") {
  std::vector<LabeledSequence> bad{{{{"bias"}, {"bias"}}, {Tag::O}}};
  CHECK_THROWS_AS(compile(bad), DataError);
}

TEST_CASE("training reaches full accuracy on separable data") {
  Rng rng(25);
  const auto data = toy::separable(rng, 60);
  TrainConfig cfg;
  const auto model = train(data, cfg);
  CHECK(model.info.iterations <= 200);
  CHECK(toy::training_accuracy(model, data) == 1.0);
  CHECK_FALSE(model.info.degenerate_labels);
}

TEST_CASE("strong L1 zeroes most state weights") {
  Rng rng(26);
  const auto data = toy::separable(rng, 60);
  TrainConfig cfg;
  cfg.l1 = 100.0;
  const auto model = train(data, cfg);
  REQUIRE(model.state_weight_count() > 0);
  CHECK(model.zero_state_weight_count() * 2 >= model.state_weight_count());
}

TEST_CASE("weight norm does not grow with L2") {
  Rng rng(27);
  const auto data = toy::separable(rng, 60);
  double last = INFINITY;
  for (double l2 : {0.01, 0.1, 1.0}) {
    TrainConfig cfg;
    cfg.l1 = 0.0;
    cfg.l2 = l2;
    cfg.max_optimizer_iterations = 500;
    cfg.gradient_tolerance = 1e-8;
    const double norm = toy::weight_norm(train(data, cfg));
    CHECK(norm <= last);
    last = norm;
  }
}

TEST_CASE("training input errors") {
  CHECK_THROWS_AS(train(std::vector<LabeledSequence>{}, TrainConfig{}), DataError);
  TrainConfig cfg;
  cfg.l1 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  std::vector<LabeledSequence> all_o{{{{"bias", "w=a"}, {"bias", "w=b"}}, {Tag::O, Tag::O}}};
  const auto model = train(all_o, TrainConfig{});
  CHECK(model.info.degenerate_labels);
  CHECK(viterbi_decode(model, all_o[0].features).labels == all_o[0].labels);
}

TEST_CASE("model file round trip") {
  Rng rng(28);
  const auto data = toy::separable(rng, 20);
  TrainConfig cfg;
  cfg.l1 = 0.5;
  const auto model = train(data, cfg);
  const auto text = serialize_model(model);
  const auto back = parse_model(text);
  CHECK(serialize_model(back) == text);
  CHECK(back.window == model.window);
  for (const auto& seq : data) {
    CHECK(viterbi_decode(back, seq.features).labels == viterbi_decode(model, seq.features).labels);
    const auto a = marginals(back, seq.features);
    const auto b = marginals(model, seq.features);
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t][1] == b[t][1]);
  }
}

TEST_CASE("model file errors") {
  CrfModel m;
  m.state_weights["bias"] = {0.5, -0.5};
  const auto text = serialize_model(m);
  CHECK_THROWS_AS(parse_model(text.substr(0, text.size() / 2)), DataError);
  CHECK_THROWS_AS(parse_model(text.substr(0, text.size() - 4)), DataError);
  std::string v2 = text;
  v2.replace(v2.find(" 1\n"), 3, " 2\n");
  CHECK_THROWS_AS(parse_model(v2), DataError);
  CHECK_THROWS_AS(parse_model("hello\n"), DataError);
  std::string bad_number = text;
  bad_number.replace(bad_number.find("0.5"), 3, "abc");
  CHECK_THROWS_AS(parse_model(bad_number), DataError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.crf"), DataError);
}

TEST_CASE("labeled data round trip") {
  const std::string text =
      "# id = g1\n# word = ur\nanother\tO\nway\tO\nof\tO\nsaying\tO\nyour\tI\n\n"
      "# word = gr8\ngreat\tI\n";
  const auto data = parse_labeled(text);
  REQUIRE(data.size() == 2);
  CHECK(data[0].entry.entry_id == "g1");
  CHECK(data[0].entry.headword == "ur");
  CHECK(data[0].labels.back() == Tag::I);
  CHECK(data[1].entry.entry_id == "S2");
  CHECK(parse_labeled(format_labeled(data)).size() == 2);
  CHECK(format_labeled(parse_labeled(format_labeled(data))) == format_labeled(data));
  CHECK_THROWS_AS(parse_labeled("a\tX\n"), DataError);
  CHECK_THROWS_AS(parse_labeled("a\tO\textra\n"), DataError);
}

TEST_CASE("seven-column labeled data carries the parse") {
  const std::string text =
      "# word = ur\nway\tO\tway\tNOUN\tNN\tROOT\t0\nof\tO\tof\tADP\tIN\tprep\t1\n"
      "saying\tO\tsay\tVERB\tVBG\tpcomp\t2\nyour\tI\tyour\tPRON\tPRP$\tdobj\t3\n";
  auto data = parse_labeled(text);
  REQUIRE(data.size() == 1);
  const auto& toks = data[0].entry.definition;
  CHECK(toks[3].head == 2);
  CHECK(toks[0].head == 0);
  CHECK(toks[2].lemma == "say");
  annotate_labeled(data, FallbackAnnotator{});
  CHECK(data[0].entry.definition[3].upos == "PRON");
  CHECK_THROWS_AS(parse_labeled("a\tO\ta\tX\tX\tdep\t5\n"), DataError);
}

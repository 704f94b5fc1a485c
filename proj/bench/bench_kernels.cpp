// Serial reference vs parallel path for the hot kernels. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include "spellvar/baseline.hpp"
#include "spellvar/bootstrap.hpp"
#include "spellvar/crf.hpp"
#include "spellvar/evalsim.hpp"
#include "spellvar/random.hpp"
#include "spellvar/synthetic.hpp"

using namespace spellvar;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

crf::CompiledData objective_data() {
  static const crf::CompiledData data = [] {
    const auto syn = synthetic::make_selftrain_corpus({30, 30, 400, 400, 2});
    auto gold = syn.gold;
    for (const auto& e : syn.unlabeled.entries) {
      gold.push_back({e, crf::TagSequence(e.definition.size(), crf::Tag::O)});
    }
    annotate_labeled(gold, FallbackAnnotator{});
    const auto seqs = crf::to_sequences(gold, 3);
    return crf::compile(seqs);
  }();
  return data;
}

void BM_CrfObjective(benchmark::State& state) {
  const auto data = objective_data();
  Rng rng(1);
  std::vector<double> w(data.num_weights());
  for (auto& x : w) x = rng.uniform(-0.1, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crf::log_likelihood_and_gradient(w, data, 0.08, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(data.sequences.size()));
}
BENCHMARK(BM_CrfObjective)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RankOfFormal(benchmark::State& state) {
  static const auto fx = synthetic::make_embedding_fixture(50000, 40, 100, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = fx.pairs[i++ % fx.pairs.size()];
    benchmark::DoNotOptimize(evalsim::rank_of_formal(fx.table, p.informal, p.formal, exec_of(state)));
  }
}
BENCHMARK(BM_RankOfFormal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FindMatches(benchmark::State& state) {
  static const auto syn = [] {
    synthetic::BootstrapCorpusOptions opt;
    opt.entries = 5000;
    return synthetic::make_bootstrap_corpus(opt);
  }();
  const auto pools = bootstrap::Pools::from_seeds(syn.seeds);
  const auto patterns =
      bootstrap::generate_patterns(syn.corpus, bootstrap::label_occurrences(syn.corpus, pools), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap::find_matches(syn.corpus, patterns, exec_of(state)));
  }
}
BENCHMARK(BM_FindMatches)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BaselineRules(benchmark::State& state) {
  static const auto syn = [] {
    synthetic::BootstrapCorpusOptions opt;
    opt.entries = 5000;
    return synthetic::make_bootstrap_corpus(opt);
  }();
  for (auto _ : state) {
    benchmark::DoNotOptimize(baseline::extract_baseline(syn.corpus, baseline::default_rules(), exec_of(state)));
  }
}
BENCHMARK(BM_BaselineRules)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

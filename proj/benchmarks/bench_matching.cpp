#include <benchmark/benchmark.h>

#include "neuroembed/ontology.hpp"
#include "neuroembed/rng.hpp"

using namespace neuroembed;

namespace {

std::string random_word(Rng& rng, std::size_t len) {
  std::string s(len, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng.uniform_index(26));
  return s;
}

void BM_Levenshtein(benchmark::State& state) {
  Rng rng(1);
  const auto len = static_cast<std::size_t>(state.range(0));
  const std::string a = random_word(rng, len), b = random_word(rng, len);
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein)->Arg(8)->Arg(16)->Arg(32);

// Fuzzy fallback scans every label in the table.
void BM_LookupFuzzy(benchmark::State& state) {
  Rng rng(2);
  SynonymTable table(OntologyId::EFO);
  for (int i = 0; i < state.range(0); ++i) {
    table.add("T" + std::to_string(i), random_word(rng, 12) + " " + random_word(rng, 8), {random_word(rng, 14)});
  }
  const std::string probe = random_word(rng, 20);
  for (auto _ : state) benchmark::DoNotOptimize(lookup(probe, table));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LookupFuzzy)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

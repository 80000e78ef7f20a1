#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "hypercomp/corpus_extract.hpp"

namespace {

std::string tagged_corpus(int lines) {
    const char* samples[] = {
        "we_PRP saw_VBD animals_NNS such_JJ as_IN dogs_NNS ,_, cats_NNS and_CC horses_NNS ._.",
        "the_DT apple_NN juice_NN and_CC other_JJ beverages_NNS were_VBD served_VBN ._.",
        "a_DT brick_NN wall_NN is_VBZ a_DT structure_NN ._.",
        "vehicles_NNS including_VBG police_NN cars_NNS and_CC buses_NNS ._.",
        "nothing_NN to_TO see_VB here_RB ._.",
    };
    std::string out;
    for (int i = 0; i < lines; ++i) out += std::string(samples[i % 5]) + "\n";
    return out;
}

void BM_ExtractCorpus(benchmark::State& state) {
    const auto text = tagged_corpus(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        std::istringstream in(text);
        benchmark::DoNotOptimize(hypercomp::extract::extract_corpus(in).size());
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ExtractCorpus)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

// Parallel kernels vs their serial references. Arg(0) = reference, Arg(1) = OpenMP.

#include <benchmark/benchmark.h>

#include <random>

#include "linkpred/kernels.hpp"
#include "../tests/synthetic.hpp"

using namespace linkpred;

namespace {

const std::vector<dataset::NodeRecord>& wiki_nodes() {
    static const auto nodes = [] {
        std::mt19937_64 rng(7);
        const char* words[] = {"alpha", "beta", "{{Infobox", "|", "x=1}}", "[[link]]", "'''bold'''", "the", "of", "in,"};
        std::vector<dataset::NodeRecord> out;
        for (std::uint64_t i = 0; i < 20000; ++i) {
            std::string text;
            for (std::size_t k = 40 + rng() % 200; k > 0; --k) {
                text += words[rng() % std::size(words)];
                text += rng() % 7 ? " " : "  ";
            }
            out.push_back({i, std::move(text)});
        }
        return out;
    }();
    return nodes;
}

const std::vector<pairs::SentencePair>& examples() {
    static const auto ex = synthetic::overlap_pairs(20000, 3);
    return ex;
}

void BM_clean_nodes(benchmark::State& state) {
    const textclean::CleanConfig cfg;
    for (auto _ : state) {
        auto r = state.range(0) ? kernels::clean_nodes(wiki_nodes(), cfg)
                                : kernels::reference::clean_nodes(wiki_nodes(), cfg);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * wiki_nodes().size());
}

void BM_featurize_all(benchmark::State& state) {
    for (auto _ : state) {
        auto r = state.range(0) ? kernels::featurize_all(examples(), 18)
                                : kernels::reference::featurize_all(examples(), 18);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * examples().size());
}

void BM_predict_all(benchmark::State& state) {
    baseline::TrainConfig cfg;
    cfg.epochs = 1;
    static const auto model = baseline::train(examples(), cfg);
    for (auto _ : state) {
        auto r = state.range(0) ? kernels::predict_all(model, examples())
                                : kernels::reference::predict_all(model, examples());
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * examples().size());
}

void BM_adamw_apply(benchmark::State& state) {
    const std::size_t dim = baseline::feature_dimension(18);
    std::vector<double> w(dim, 0.1), m(dim), v(dim), g(dim);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    for (auto& x : g) x = n(rng);
    const baseline::TrainConfig cfg;
    std::uint64_t step = 0;
    for (auto _ : state) {
        ++step;
        if (state.range(0)) kernels::adamw_apply(w, m, v, g, dim - 1, step, cfg);
        else kernels::reference::adamw_apply(w, m, v, g, dim - 1, step, cfg);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * dim);
}

void BM_count_confusion(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::vector<dataset::Label> p(1 << 22), g(1 << 22);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = dataset::label_from_bool(rng() & 1);
        g[i] = dataset::label_from_bool(rng() & 1);
    }
    for (auto _ : state) {
        auto r = state.range(0) ? kernels::count_confusion(p, g) : kernels::reference::count_confusion(p, g);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * p.size());
}

}  // namespace

BENCHMARK(BM_clean_nodes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_featurize_all)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_predict_all)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_adamw_apply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_count_confusion)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

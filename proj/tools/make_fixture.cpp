// Writes the synthetic overlap-separable fixture: nodes.tsv, train.csv,
// test.csv and manifest.json. A pair is labeled 1 iff the cleaned texts of its
// two nodes share at least one token. Raw texts carry wikitext noise (brace
// templates, link markup, punctuation, extra spaces) so cleaning matters: the
// templates of negative pairs mention words from the other side.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkpred/dataset.hpp"
#include "linkpred/pairs.hpp"
#include "linkpred/textclean.hpp"

namespace {

struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }
};

std::vector<std::string> make_vocab(Rng& rng, std::size_t n) {
    static const char* syllables[] = {"ka", "lo", "mi", "ru", "te", "sa", "no", "vi", "de", "pa",
                                      "zu", "ho", "fe", "gi", "ba", "tor", "len", "mar", "qui", "sel"};
    std::set<std::string> seen;
    std::vector<std::string> out;
    while (out.size() < n) {
        std::string w;
        const std::size_t parts = 2 + rng.below(2);
        for (std::size_t i = 0; i < parts; ++i) w += syllables[rng.below(std::size(syllables))];
        if (seen.insert(w).second) out.push_back(w);
    }
    return out;
}

std::string decorate(const std::string& word, Rng& rng) {
    switch (rng.below(8)) {
        case 0: return "[[" + word + "]]";
        case 1: return word + ",";
        case 2: return word + ".";
        case 3: return "'''" + word + "'''";
        case 4: return "(" + word + ")";
        default: return word;
    }
}

std::string render(const std::vector<std::string>& words, const std::vector<std::string>& decoys, Rng& rng) {
    std::string text;
    const std::size_t template_at = decoys.empty() ? words.size() + 1 : rng.below(words.size() + 1);
    for (std::size_t i = 0; i <= words.size(); ++i) {
        if (i == template_at) {
            text += "{{Infobox " + decoys[0] + " | name = " + (decoys.size() > 1 ? decoys[1] : decoys[0]);
            if (rng.chance(0.5)) text += " {{lang|" + decoys[0] + "}}";
            text += "}} ";
        }
        if (i == words.size()) break;
        text += decorate(words[i], rng);
        text += rng.chance(0.15) ? "   " : " ";
    }
    if (rng.chance(0.2)) text += "}}";
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    std::string out_dir = ".";
    std::size_t num_pairs = 200;
    std::uint64_t seed = 20230701;
    CLI::App app{"Synthetic link-prediction fixture generator"};
    app.add_option("--out-dir", out_dir, "Output directory");
    app.add_option("--pairs", num_pairs, "Number of pairs");
    app.add_option("--seed", seed, "Generator seed");
    CLI11_PARSE(app, argc, argv);

    Rng rng{seed};
    const auto vocab = make_vocab(rng, 600);

    std::vector<linkpred::dataset::NodeRecord> nodes;
    std::vector<linkpred::dataset::PairRecord> pairs;
    std::vector<std::uint64_t> ids(2 * num_pairs);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = 1000 + 7 * i;
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);

    const linkpred::textclean::CleanConfig clean_config;
    std::uint64_t count_0 = 0, count_1 = 0;
    for (std::size_t p = 0; p < num_pairs; ++p) {
        const bool linked = rng.chance(0.5);
        std::set<std::string> used;
        auto draw = [&](std::set<std::string>& avoid) {
            std::string w;
            do w = vocab[rng.below(vocab.size())];
            while (avoid.count(w));
            return w;
        };
        std::vector<std::string> premise, hypothesis;
        const std::size_t lp = 6 + rng.below(9), lh = 6 + rng.below(9);
        for (std::size_t i = 0; i < lp; ++i) premise.push_back(draw(used)), used.insert(premise.back());
        std::set<std::string> hyp_avoid = used;
        for (std::size_t i = 0; i < lh; ++i) hypothesis.push_back(draw(hyp_avoid)), hyp_avoid.insert(hypothesis.back());
        if (linked) {
            const std::size_t shared = 1 + rng.below(3);
            for (std::size_t k = 0; k < shared; ++k) hypothesis[rng.below(hypothesis.size())] = premise[rng.below(premise.size())];
        }
        // Decoys: premise words hidden inside the hypothesis's template.
        std::vector<std::string> decoys;
        if (rng.chance(0.6)) decoys = {premise[rng.below(premise.size())], premise[rng.below(premise.size())]};
        const std::string premise_text = render(premise, {}, rng);
        const std::string hypothesis_text = render(hypothesis, decoys, rng);

        const auto a = linkpred::pairs::tokenize(linkpred::textclean::clean(premise_text, clean_config).first);
        const auto b = linkpred::pairs::tokenize(linkpred::textclean::clean(hypothesis_text, clean_config).first);
        const std::set<std::string> sa(a.begin(), a.end());
        const bool overlap = std::any_of(b.begin(), b.end(), [&](const std::string& t) { return sa.count(t) != 0; });
        if (overlap != linked) {
            std::cerr << "generator invariant violated at pair " << p << '\n';
            return 1;
        }

        nodes.push_back({ids[2 * p], premise_text});
        nodes.push_back({ids[2 * p + 1], hypothesis_text});
        linkpred::dataset::PairRecord rec;
        rec.pair_id = std::to_string(p);
        rec.id1 = ids[2 * p];
        rec.id2 = ids[2 * p + 1];
        rec.label = linkpred::dataset::label_from_bool(linked);
        pairs.push_back(rec);
        (linked ? count_1 : count_0)++;
    }
    std::sort(nodes.begin(), nodes.end(), [](const auto& x, const auto& y) { return x.id < y.id; });

    const std::string dir = out_dir + "/";
    {
        std::ofstream f(dir + "nodes.tsv", std::ios::binary);
        f << "id\ttext\n";
        linkpred::dataset::write_nodes(f, nodes);
    }
    {
        std::ofstream f(dir + "train.csv", std::ios::binary);
        linkpred::dataset::write_pairs(f, pairs, linkpred::dataset::PairSchema::labeled);
    }
    {
        std::ofstream f(dir + "test.csv", std::ios::binary);
        linkpred::dataset::write_pairs(f, pairs, linkpred::dataset::PairSchema::unlabeled);
    }
    {
        std::ofstream f(dir + "manifest.json", std::ios::binary);
        nlohmann::json m = {{"generator", "make_fixture"}, {"seed", seed},       {"pairs", num_pairs},
                            {"nodes", nodes.size()},      {"count_0", count_0}, {"count_1", count_1},
                            {"label_rule", "1 iff cleaned premise and hypothesis share >= 1 token"}};
        f << m.dump(2) << '\n';
    }
    std::cout << "wrote " << num_pairs << " pairs (" << count_0 << " / " << count_1 << ") to " << out_dir << '\n';
    return 0;
}

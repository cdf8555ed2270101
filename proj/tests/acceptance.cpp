// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "linkpred/baseline.hpp"
#include "linkpred/cli.hpp"
#include "linkpred/dataset.hpp"
#include "linkpred/error.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/pairs.hpp"
#include "linkpred/prediction.hpp"
#include "linkpred/textclean.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace linkpred;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path fixture_dir{LINKPRED_FIXTURE_DIR};
int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  " << detail << '\n';
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 3) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct Cli {
    int code;
    std::string out;
    std::string err;
};

Cli run_cli(const std::vector<std::string>& args) {
    std::istringstream in;
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_line(const std::string& text, const std::string& kind) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() != '{') continue;
        auto j = nlohmann::json::parse(line);
        if (j.value("kind", "") == kind) return j;
    }
    return {};
}

std::vector<std::u32string> random_corpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::u32string alphabet = U"{}abcxyzQW ";
    std::vector<std::u32string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::u32string s(rng() % 41, U' ');
        for (auto& c : s) c = alphabet[rng() % alphabet.size()];
        out.push_back(std::move(s));
    }
    return out;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("linkpred_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void pseudocode_fidelity(const std::vector<std::u32string>& corpus) {
    const auto t0 = Clock::now();
    std::size_t mismatches = 0;
    for (const auto& s : corpus) {
        if (textclean::balance_curly_braces(s) != oracle::balance_curly_braces(s)) ++mismatches;
        if (textclean::remove_brace_spans(s) != oracle::remove_brace_spans(s)) ++mismatches;
    }
    const std::pair<std::u32string, std::u32string> balance_examples[] = {
        {U"{{foo}}", U"{{foo}}"}, {U"{{{foo}}", U"{{foo}}"}, {U"foo}} ", U"foo"}};
    const std::pair<std::u32string, std::u32string> debrace_examples[] = {
        {U"plain text", U"plain text"}, {U"a{{b}}c", U"ac"}, {U"x{a{b}c}y", U"xy"}, {U"}{ab", U""}};
    std::size_t example_failures = 0;
    for (const auto& [in, want] : balance_examples) {
        if (textclean::balance_curly_braces(in) != want || oracle::balance_curly_braces(in) != want) ++example_failures;
    }
    for (const auto& [in, want] : debrace_examples) {
        if (textclean::remove_brace_spans(in) != want || oracle::remove_brace_spans(in) != want) ++example_failures;
    }
    const textclean::CleanConfig cfg;
    const std::pair<std::string, std::string> clean_examples[] = {
        {"Intro {{Infobox | x=1}} text,  here.", "Intro text here"}, {"", ""}, {"{{a}}", ""}};
    for (const auto& [in, want] : clean_examples) {
        if (textclean::clean(std::string_view(in), cfg).first != want) ++example_failures;
    }
    const double secs = seconds_since(t0);
    report("brace algorithm fidelity", mismatches == 0 && example_failures == 0 && secs < 5.0,
           std::to_string(corpus.size()) + " strings, " + std::to_string(mismatches) + " mismatches, " +
               std::to_string(example_failures) + " worked-example failures, " + fmt(secs) + " s (limit 5 s)");
}

void cleaning_invariants(const std::vector<std::u32string>& corpus) {
    const textclean::CleanConfig cfg;
    const auto punct = textclean::PunctuationSet::ascii_default();
    std::size_t violations = 0;
    for (const auto& s : corpus) {
        const auto balanced = textclean::balance_curly_braces(s);
        if (oracle::count(balanced, U'{') != oracle::count(balanced, U'}')) ++violations;

        const auto once = textclean::clean(s, cfg).first;
        if (textclean::clean(once, cfg).first != once) ++violations;
        for (std::size_t i = 0; i < once.size(); ++i) {
            if (punct.contains(once[i])) ++violations;
            if (i && textclean::is_space(once[i]) && textclean::is_space(once[i - 1])) ++violations;
        }
    }
    report("cleaning invariants", violations == 0,
           std::to_string(corpus.size()) + " strings, " + std::to_string(violations) + " violations");
}

void label_statistics() {
    TempDir dir;
    const fs::path csv = dir.path / "train.csv";
    {
        std::ofstream f(csv, std::ios::binary);
        f << "id,id1,id2,label\n";
        std::uint64_t zeros = 512389, ones = 435843, id = 0;
        while (zeros || ones) {
            const bool one = ones && (!zeros || id % 2);
            if (one) --ones;
            else --zeros;
            f << id << ',' << (id * 7 % 1000) << ',' << (id * 13 % 1000) << ',' << (one ? 1 : 0) << '\n';
            ++id;
        }
    }
    const auto r = run_cli({"stats", "--pairs", csv.string()});
    const auto j = json_line(r.out, "label_stats");
    const bool counts_ok = r.code == 0 && !j.empty() && j["count_0"] == 512389 && j["count_1"] == 435843;
    report("label statistics: counts", counts_ok,
           j.empty() ? "stats exited " + std::to_string(r.code)
                     : "reported " + j["count_0"].dump() + " / " + j["count_1"].dump() + ", expected 512389 / 435843");

    const bool pct_ok = !j.empty() && j["pct_0"] == "54.03" && j["pct_1"] == "45.97";
    report("label statistics: percentages", pct_ok,
           j.empty() ? "no output"
                     : "reported " + j["pct_0"].get<std::string>() + "% / " + j["pct_1"].get<std::string>() +
                           "%, expected 54.03% / 45.97% (exact shares " + fmt(51238900.0 / 948232, 6) + "% / " +
                           fmt(43584300.0 / 948232, 6) + "%)");

    const auto manifest = nlohmann::json::parse(slurp(fixture_dir / "manifest.json"));
    const auto f = run_cli({"stats", "--pairs", (fixture_dir / "train.csv").string()});
    const auto fj = json_line(f.out, "label_stats");
    const bool fixture_ok = f.code == 0 && !fj.empty() && fj["count_0"] == manifest["count_0"] &&
                            fj["count_1"] == manifest["count_1"];
    report("fixture label counts", fixture_ok,
           fj.empty() ? "no output"
                      : "reported " + fj["count_0"].dump() + " / " + fj["count_1"].dump() + ", manifest " +
                            manifest["count_0"].dump() + " / " + manifest["count_1"].dump());
}

void metric_oracle() {
    const auto t0 = Clock::now();
    constexpr int n = 8;
    std::size_t mismatches = 0, cases = 0;
    std::vector<dataset::PairRecord> gold_records(n);
    std::vector<Prediction> preds(n);
    for (unsigned gm = 0; gm < (1u << n); ++gm) {
        std::vector<int> g(n);
        for (int i = 0; i < n; ++i) {
            g[i] = (gm >> i) & 1;
            gold_records[i] = {"p" + std::to_string(i), 0, 0, dataset::label_from_bool(g[i])};
        }
        for (unsigned pm = 0; pm < (1u << n); ++pm) {
            std::vector<int> p(n);
            for (int i = 0; i < n; ++i) {
                p[i] = (pm >> i) & 1;
                // Reversed order: matched by id.
                preds[n - 1 - i] = Prediction::from_probability("p" + std::to_string(i), p[i] ? 0.75 : 0.25, 0.5);
            }
            const double got = eval::macro_f1(eval::confusion(preds, gold_records));
            if (got != oracle::macro_f1(g, p)) ++mismatches;
            ++cases;
        }
    }
    const double secs = seconds_since(t0);
    report("metric oracle", mismatches == 0 && secs < 60.0,
           std::to_string(cases) + " assignments, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) +
               " s (limit 60 s)");
}

void gradient_check() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t dim = 10, rows = 1 + rng() % 8;
        std::vector<double> w(dim), ys(rows);
        std::vector<std::vector<double>> dense(rows, std::vector<double>(dim));
        std::vector<baseline::FeatureVector> xs(rows);
        for (auto& x : w) x = normal(rng);
        for (std::size_t r = 0; r < rows; ++r) {
            ys[r] = static_cast<double>(rng() & 1);
            for (std::size_t j = 0; j < dim; ++j) {
                if (rng() % 3 == 0) continue;
                dense[r][j] = normal(rng);
                xs[r].entries.push_back({static_cast<std::uint32_t>(j), dense[r][j]});
            }
        }
        std::vector<double> analytic(dim);
        baseline::logistic_gradient(w, xs, ys, analytic);
        const auto numeric = oracle::finite_difference_gradient(w, dense, ys);
        double diff = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            diff += (analytic[j] - numeric[j]) * (analytic[j] - numeric[j]);
            scale = std::max({scale, analytic[j] * analytic[j], numeric[j] * numeric[j]});
        }
        const double rel = scale == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / std::sqrt(scale * dim);
        worst = std::max(worst, rel);
    }
    report("gradient check", worst <= 1e-5, "100 instances, worst relative error " + fmt(worst) + " (limit 1e-5)");
}

double rel_err(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

void adamw_scalar() {
    double worst = 0.0;
    baseline::TrainConfig cfg;
    cfg.weight_decay = 0.0;
    for (double g : {3.5, -0.25, 1e-6, -42.0, 7e3}) {
        baseline::BaselineModel model(cfg, 4);
        const baseline::Feature grad[] = {{1, g}};
        baseline::adamw_step(model, grad, cfg);
        oracle::ScalarAdamW s{cfg.learning_rate, cfg.adamw_beta1, cfg.adamw_beta2, cfg.adamw_eps, cfg.weight_decay};
        s.step(g);
        const double correction = 1.0 / std::sqrt(1.0 - cfg.adamw_beta2);
        const double closed = -cfg.learning_rate * (g > 0 ? 1.0 : -1.0) * (std::abs(g) / (std::abs(g) + cfg.adamw_eps * correction));
        worst = std::max({worst, rel_err(model.weights()[1], s.w), rel_err(model.weights()[1], closed)});
    }

    cfg.weight_decay = 0.1;
    for (double w0 : {2.5, -0.125, 1e-3}) {
        baseline::BaselineModel model(cfg, 3);
        model.weights()[0] = w0;
        baseline::adamw_step(model, {}, cfg);
        worst = std::max(worst, rel_err(model.weights()[0], w0 - cfg.learning_rate * cfg.weight_decay * w0));
    }
    report("AdamW scalar checks", worst <= 1e-12, "worst relative error " + fmt(worst) + " (limit 1e-12)");
}

void end_to_end() {
    TempDir dir;
    const std::string nodes = (fixture_dir / "nodes.tsv").string();
    const std::string train = (fixture_dir / "train.csv").string();
    const std::string test = (fixture_dir / "test.csv").string();
    const std::vector<std::string> files{"nodes.clean.tsv", "train.prepared.tsv", "test.prepared.tsv",
                                         "model.txt",       "predictions.csv",    "submission.csv"};

    const auto t0 = Clock::now();
    const auto first = run_cli({"pipeline", "--nodes", nodes, "--train", train, "--test", test, "--out-dir",
                                (dir.path / "a").string()});
    const double secs = seconds_since(t0);
    const auto second = run_cli({"pipeline", "--nodes", nodes, "--train", train, "--test", test, "--out-dir",
                                 (dir.path / "b").string()});
    if (first.code != 0 || second.code != 0) {
        report("end-to-end learnability", false, "pipeline exited " + std::to_string(first.code) + ": " + first.err);
        return;
    }

    bool identical = true;
    for (const auto& f : files) identical = identical && slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f);

    std::ifstream pf(dir.path / "a" / "predictions.csv");
    const auto preds = read_predictions(pf);
    std::ifstream gf(train);
    const auto gold = dataset::parse_pairs(gf, true);
    const double f1 = eval::macro_f1(eval::confusion(preds, gold));

    std::ifstream sf(dir.path / "a" / "submission.csv", std::ios::binary);
    const auto rows = eval::parse_submission(sf);

    const char* threads = std::getenv("LINKPRED_THREADS");
    report("end-to-end learnability", secs < 30.0 && f1 >= 0.95 && identical && rows.size() == 200,
           "macro F1 " + fmt(f1, 5) + " (min 0.95), " + std::to_string(rows.size()) + " submission rows, " + fmt(secs) +
               " s on " + (threads ? threads : "default") + " thread(s) (limit 30 s), rerun " +
               (identical ? "byte-identical" : "DIFFERS"));
}

template <class T>
bool round_trips(const fs::path& path, const std::function<T(std::istream&)>& parse,
                 const std::function<void(std::ostream&, const T&)>& write) {
    std::ifstream in(path, std::ios::binary);
    const T first = parse(in);
    std::stringstream buf;
    write(buf, first);
    return parse(buf) == first;
}

void format_fidelity() {
    TempDir dir;
    const auto r = run_cli({"pipeline", "--nodes", (fixture_dir / "nodes.tsv").string(), "--train",
                            (fixture_dir / "train.csv").string(), "--test", (fixture_dir / "test.csv").string(),
                            "--out-dir", dir.path.string()});
    if (r.code != 0) {
        report("format fidelity", false, "pipeline exited " + std::to_string(r.code));
        return;
    }
    const std::string submission = slurp(dir.path / "submission.csv");
    static const std::regex grammar("id,label\n([^,\r\n]+,[01]\n)*");
    const bool grammar_ok = std::regex_match(submission, grammar);

    using Nodes = std::vector<dataset::NodeRecord>;
    using Pairs = std::vector<dataset::PairRecord>;
    using Prepared = std::vector<pairs::SentencePair>;
    using Preds = std::vector<Prediction>;
    using Rows = std::vector<eval::SubmissionRow>;
    std::vector<std::pair<std::string, bool>> checks;
    const auto nodes_parse = [](std::istream& in) { return dataset::parse_nodes(in).records(); };
    const auto nodes_write = [](std::ostream& out, const Nodes& n) { dataset::write_nodes(out, n); };
    checks.emplace_back("nodes.tsv", round_trips<Nodes>(fixture_dir / "nodes.tsv", nodes_parse, nodes_write));
    checks.emplace_back("nodes.clean.tsv",
                        round_trips<Nodes>(dir.path / "nodes.clean.tsv", nodes_parse, nodes_write));
    checks.emplace_back("train.csv", round_trips<Pairs>(
                                         fixture_dir / "train.csv",
                                         [](std::istream& in) { return dataset::parse_pairs(in, true); },
                                         [](std::ostream& out, const Pairs& p) {
                                             dataset::write_pairs(out, p, dataset::PairSchema::labeled);
                                         }));
    checks.emplace_back("test.csv", round_trips<Pairs>(
                                        fixture_dir / "test.csv",
                                        [](std::istream& in) { return dataset::parse_pairs(in, false); },
                                        [](std::ostream& out, const Pairs& p) {
                                            dataset::write_pairs(out, p, dataset::PairSchema::unlabeled);
                                        }));
    for (const char* f : {"train.prepared.tsv", "test.prepared.tsv"}) {
        checks.emplace_back(f, round_trips<Prepared>(
                                   dir.path / f, [](std::istream& in) { return pairs::read_prepared(in); },
                                   [](std::ostream& out, const Prepared& p) { pairs::write_prepared(out, p); }));
    }
    checks.emplace_back("predictions.csv",
                        round_trips<Preds>(
                            dir.path / "predictions.csv", [](std::istream& in) { return read_predictions(in); },
                            [](std::ostream& out, const Preds& p) { write_predictions(out, p); }));
    checks.emplace_back("submission.csv", round_trips<Rows>(
                                              dir.path / "submission.csv",
                                              [](std::istream& in) { return eval::parse_submission(in); },
                                              [](std::ostream& out, const Rows& rows) {
                                                  out << "id,label\n";
                                                  for (const auto& row : rows) {
                                                      out << row.pair_id << ',' << dataset::to_int(row.label) << '\n';
                                                  }
                                              }));

    bool ok = grammar_ok;
    std::string failed;
    for (const auto& [name, pass] : checks) {
        if (!pass) {
            ok = false;
            failed += " " + name;
        }
    }
    report("format fidelity", ok,
           std::string("submission grammar ") + (grammar_ok ? "ok" : "VIOLATED") + ", " +
               std::to_string(checks.size()) + " files round-tripped" + (failed.empty() ? "" : ", failed:" + failed));
}

void guarded(const std::string& name, void (*fn)()) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    const auto corpus = random_corpus(10000, 20230701);
    try {
        pseudocode_fidelity(corpus);
        cleaning_invariants(corpus);
    } catch (const std::exception& e) {
        report("brace algorithm fidelity / cleaning invariants", false, std::string("exception: ") + e.what());
    }
    guarded("label statistics", label_statistics);
    guarded("metric oracle", metric_oracle);
    guarded("gradient check", gradient_check);
    guarded("AdamW scalar checks", adamw_scalar);
    guarded("end-to-end learnability", end_to_end);
    guarded("format fidelity", format_fidelity);

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion line(s) failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}

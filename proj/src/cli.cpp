#include "linkpred/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkpred/baseline.hpp"
#include "linkpred/dataset.hpp"
#include "linkpred/error.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/kernels.hpp"
#include "linkpred/pairs.hpp"
#include "linkpred/textclean.hpp"

namespace linkpred::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    int threads = 0;

    bool no_balance = false;
    bool no_debrace = false;
    bool no_depunct = false;
    bool no_despace = false;
    bool report = false;

    std::size_t max_tokens = 128;
    bool lenient = false;
    baseline::TrainConfig train;

    std::string nodes = "-";
    std::string pairs = "-";
    std::string output = "-";
    std::string model;
    std::string predictions;
    std::string gold;
    std::string train_pairs;
    std::string test_pairs;
    std::string out_dir;

    textclean::CleanConfig clean_config() const {
        textclean::CleanConfig c;
        auto mask = textclean::StageMask::all();
        if (no_balance) mask = mask.without(textclean::Stage::balance);
        if (no_debrace) mask = mask.without(textclean::Stage::debrace);
        if (no_depunct) mask = mask.without(textclean::Stage::depunct);
        if (no_despace) mask = mask.without(textclean::Stage::despace);
        c.stages = mask;
        return c;
    }

    pairs::PairConfig pair_config() const {
        pairs::PairConfig c;
        c.max_tokens = max_tokens;
        c.validate();
        return c;
    }

    baseline::TrainConfig train_config() const {
        auto c = train;
        c.max_tokens = max_tokens;
        c.validate();
        return c;
    }

    dataset::JoinMode join_mode() const { return lenient ? dataset::JoinMode::lenient : dataset::JoinMode::strict; }
};

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;

    void log(const std::string& line) const { err << "[linkpred] " << line << '\n'; }
};

/// Output that only appears under its final name once commit() succeeds.
class OutputFile {
public:
    OutputFile(const std::string& path, std::ostream& stdout_stream) : path_(path) {
        if (path == "-") {
            stream_ = &stdout_stream;
            return;
        }
        const fs::path target(path);
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        tmp_ = path + ".tmp";
        file_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!file_) throw Error(ErrorKind::io, "cannot open '" + tmp_ + "' for writing");
        stream_ = &file_;
    }
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;

    ~OutputFile() {
        if (!tmp_.empty() && !committed_) {
            file_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }

    std::ostream& stream() { return *stream_; }

    void commit() {
        stream_->flush();
        if (!*stream_) throw Error(ErrorKind::io, "write to '" + path_ + "' failed");
        if (tmp_.empty()) return;
        file_.close();
        if (file_.fail()) throw Error(ErrorKind::io, "closing '" + tmp_ + "' failed");
        std::error_code ec;
        fs::rename(tmp_, path_, ec);
        if (ec) throw Error(ErrorKind::io, "renaming '" + tmp_ + "' to '" + path_ + "': " + ec.message());
        committed_ = true;
    }

private:
    std::string path_;
    std::string tmp_;
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
    bool committed_ = false;
};

class InputFile {
public:
    InputFile(const std::string& path, std::istream& stdin_stream) {
        if (path == "-") {
            stream_ = &stdin_stream;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");
        stream_ = &file_;
    }
    std::istream& stream() { return *stream_; }

private:
    std::ifstream file_;
    std::istream* stream_ = nullptr;
};

void require_input(const std::string& path, const char* flag) {
    if (path.empty()) throw Error(ErrorKind::validation, std::string("missing required option ") + flag);
    if (path == "-") return;
    if (!fs::is_regular_file(path)) {
        throw Error(ErrorKind::io, std::string(flag) + ": no such file '" + path + "'");
    }
}

void require_output(const std::string& path, const char* flag) {
    if (path.empty()) throw Error(ErrorKind::validation, std::string("missing required option ") + flag);
}

dataset::NodeTable load_nodes(const std::string& path, const Io& io) {
    InputFile f(path, io.in);
    auto table = dataset::parse_nodes(f.stream());
    io.log("read " + std::to_string(table.size()) + " nodes from " + path +
           (table.missing_text_count() ? " (" + std::to_string(table.missing_text_count()) + " without text)" : ""));
    return table;
}

std::vector<dataset::PairRecord> load_pairs(const std::string& path, const Io& io, dataset::PairSchema* schema,
                                            bool require_labels) {
    InputFile f(path, io.in);
    dataset::PairSchema found;
    auto pairs = dataset::parse_pairs_any(f.stream(), &found);
    if (require_labels && found != dataset::PairSchema::labeled) {
        throw Error(ErrorKind::validation, "'" + path + "' has no label column");
    }
    if (schema) *schema = found;
    io.log("read " + std::to_string(pairs.size()) + " pairs from " + path);
    return pairs;
}

dataset::NodeTable clean_table(const dataset::NodeTable& raw, const Options& opt, const Io& io,
                               textclean::CleanReport* report = nullptr) {
    auto cleaned = kernels::clean_nodes(raw.records(), opt.clean_config());
    dataset::NodeTable table;
    for (auto& n : cleaned.nodes) table.add(std::move(n));
    io.log("cleaned " + std::to_string(table.size()) + " nodes (" + std::to_string(cleaned.report.input_length) +
           " -> " + std::to_string(cleaned.report.output_length) + " chars)");
    if (report) *report = cleaned.report;
    return table;
}

std::vector<pairs::SentencePair> make_sentence_pairs(const std::vector<dataset::PairRecord>& records,
                                                     const dataset::NodeTable& cleaned, std::size_t max_tokens,
                                                     dataset::JoinMode mode, const Io& io) {
    auto joined = dataset::join_pairs(records, cleaned, mode);
    if (joined.skipped) io.log("skipped " + std::to_string(joined.skipped) + " pairs with missing nodes");
    pairs::PairConfig pc;
    pc.max_tokens = max_tokens;
    return kernels::build_pairs(joined.pairs, pc);
}

json clean_report_json(const textclean::CleanReport& r, std::size_t nodes) {
    return {{"kind", "clean_report"},
            {"nodes", nodes},
            {"input_length", r.input_length},
            {"output_length", r.output_length},
            {"braces_removed_balance", r.braces_removed_balance},
            {"chars_removed_debrace", r.chars_removed_debrace}};
}

void print_stats(const dataset::LabelStats& s, std::ostream& out) {
    using dataset::format_hundredths;
    auto thousands = [](std::uint64_t v) {
        std::string digits = std::to_string(v);
        std::string grouped;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (i && (digits.size() - i) % 3 == 0) grouped.push_back(',');
            grouped.push_back(digits[i]);
        }
        return grouped;
    };
    out << std::left << std::setw(12) << "" << std::setw(18) << "Non-related (0)" << "Related (1)" << '\n'
        << std::setw(12) << "Frequency" << std::setw(18) << thousands(s.count_0) << thousands(s.count_1) << '\n'
        << std::setw(12) << "Percentage" << std::setw(18) << format_hundredths(s.pct_0_hundredths) + " (%)"
        << format_hundredths(s.pct_1_hundredths) + " (%)" << '\n';
    out << json{{"kind", "label_stats"},
                {"count_0", s.count_0},
                {"count_1", s.count_1},
                {"total", s.total()},
                {"pct_0", format_hundredths(s.pct_0_hundredths)},
                {"pct_1", format_hundredths(s.pct_1_hundredths)}}
               .dump()
        << '\n';
}

void print_eval(const eval::EvalReport& r, std::ostream& out) {
    const auto& m = r.matrix;
    std::ostringstream line;
    line << std::fixed << std::setprecision(5);
    line << "pairs       " << m.total() << '\n'
         << "confusion   tp=" << m.tp << " fp=" << m.fp << " tn=" << m.tn << " fn=" << m.fn << '\n'
         << "class 0     precision=" << r.class_0.precision << " recall=" << r.class_0.recall
         << " f1=" << r.class_0.f1 << '\n'
         << "class 1     precision=" << r.class_1.precision << " recall=" << r.class_1.recall
         << " f1=" << r.class_1.f1 << '\n'
         << "macro F1    " << r.macro_f1 << '\n';
    out << line.str();
    out << json{{"kind", "eval"},
                {"tp", m.tp},
                {"fp", m.fp},
                {"tn", m.tn},
                {"fn", m.fn},
                {"precision_0", r.class_0.precision},
                {"recall_0", r.class_0.recall},
                {"f1_0", r.class_0.f1},
                {"precision_1", r.class_1.precision},
                {"recall_1", r.class_1.recall},
                {"f1_1", r.class_1.f1},
                {"macro_f1", r.macro_f1}}
               .dump()
        << '\n';
}

// ---- commands --------------------------------------------------------------

void cmd_clean(const Options& opt, const Io& io) {
    require_input(opt.nodes, "--nodes");
    auto raw = load_nodes(opt.nodes, io);
    textclean::CleanReport report;
    auto cleaned = clean_table(raw, opt, io, &report);

    OutputFile out(opt.output, io.out);
    dataset::write_nodes(out.stream(), cleaned.records());
    out.commit();
    io.log("wrote " + std::to_string(cleaned.size()) + " nodes to " + opt.output);
    if (opt.report) {
        std::ostream& sink = opt.output == "-" ? io.err : io.out;
        sink << clean_report_json(report, cleaned.size()).dump() << '\n';
    }
}

void cmd_stats(const Options& opt, const Io& io) {
    require_input(opt.pairs, "--pairs");
    InputFile f(opt.pairs, io.in);
    dataset::PairReader reader(f.stream(), dataset::PairSchema::labeled);
    dataset::LabelCounter counter;
    dataset::PairRecord rec;
    while (reader.next(rec)) counter.add(rec);
    const auto stats = counter.finish();
    io.log("read " + std::to_string(stats.total()) + " labeled pairs from " + opt.pairs);
    print_stats(stats, io.out);
}

void cmd_prepare(const Options& opt, const Io& io) {
    require_input(opt.pairs, "--pairs");
    require_input(opt.nodes, "--nodes");
    if (opt.pairs == "-" && opt.nodes == "-") {
        throw Error(ErrorKind::validation, "--pairs and --nodes cannot both read standard input");
    }
    const auto records = load_pairs(opt.pairs, io, nullptr, false);
    const auto cleaned = clean_table(load_nodes(opt.nodes, io), opt, io);
    const auto prepared = make_sentence_pairs(records, cleaned, opt.pair_config().max_tokens, opt.join_mode(), io);

    OutputFile out(opt.output, io.out);
    pairs::write_prepared(out.stream(), prepared);
    out.commit();
    io.log("wrote " + std::to_string(prepared.size()) + " prepared pairs to " + opt.output);
}

baseline::BaselineModel train_from(const std::vector<dataset::PairRecord>& records,
                                   const dataset::NodeTable& cleaned, const Options& opt, const Io& io) {
    const auto config = opt.train_config();
    const auto examples = make_sentence_pairs(records, cleaned, config.max_tokens, opt.join_mode(), io);
    baseline::TrainLog log;
    auto model = baseline::train(examples, config, &log);
    std::ostringstream msg;
    msg << "trained on " << examples.size() << " pairs, " << model.step() << " steps, loss "
        << log.epoch_losses.front() << " -> " << log.epoch_losses.back();
    io.log(msg.str());
    return model;
}

void save_model_file(const baseline::BaselineModel& model, const std::string& path, const Io& io) {
    OutputFile out(path, io.out);
    baseline::save_model(out.stream(), model);
    out.commit();
    io.log("wrote model to " + path);
}

baseline::BaselineModel load_model_file(const std::string& path, const Io& io) {
    InputFile f(path, io.in);
    auto model = baseline::load_model(f.stream());
    io.log("read model from " + path + " (dimension " + std::to_string(model.dimension()) + ")");
    return model;
}

std::vector<Prediction> predict_from(const baseline::BaselineModel& model,
                                     const std::vector<dataset::PairRecord>& records,
                                     const dataset::NodeTable& cleaned, const Options& opt, const Io& io) {
    const auto prepared =
        make_sentence_pairs(records, cleaned, model.config().max_tokens, opt.join_mode(), io);
    return kernels::predict_all(model, prepared);
}

void save_predictions(const std::vector<Prediction>& preds, const std::string& path, const Io& io) {
    OutputFile out(path, io.out);
    write_predictions(out.stream(), preds);
    out.commit();
    io.log("wrote " + std::to_string(preds.size()) + " predictions to " + path);
}

std::vector<Prediction> load_predictions(const std::string& path, const Io& io) {
    InputFile f(path, io.in);
    auto preds = read_predictions(f.stream());
    io.log("read " + std::to_string(preds.size()) + " predictions from " + path);
    return preds;
}

void save_submission(const std::vector<Prediction>& preds, const std::string& path, const Io& io) {
    OutputFile out(path, io.out);
    eval::emit_submission(preds, out.stream());
    out.commit();
    io.log("wrote " + std::to_string(preds.size()) + " submission rows to " + path);
}

void cmd_train(const Options& opt, const Io& io) {
    require_input(opt.pairs, "--pairs");
    require_input(opt.nodes, "--nodes");
    require_output(opt.model, "--model");
    const auto records = load_pairs(opt.pairs, io, nullptr, true);
    const auto cleaned = clean_table(load_nodes(opt.nodes, io), opt, io);
    save_model_file(train_from(records, cleaned, opt, io), opt.model, io);
}

void cmd_predict(const Options& opt, const Io& io) {
    require_input(opt.model, "--model");
    require_input(opt.pairs, "--pairs");
    require_input(opt.nodes, "--nodes");
    const auto model = load_model_file(opt.model, io);
    const auto records = load_pairs(opt.pairs, io, nullptr, false);
    const auto cleaned = clean_table(load_nodes(opt.nodes, io), opt, io);
    save_predictions(predict_from(model, records, cleaned, opt, io), opt.output, io);
}

void cmd_eval(const Options& opt, const Io& io) {
    require_input(opt.predictions, "--predictions");
    require_input(opt.gold, "--gold");
    const auto preds = load_predictions(opt.predictions, io);
    const auto gold = load_pairs(opt.gold, io, nullptr, true);
    print_eval(eval::evaluate(eval::confusion(preds, gold)), io.out);
}

void cmd_submit(const Options& opt, const Io& io) {
    require_input(opt.predictions, "--predictions");
    save_submission(load_predictions(opt.predictions, io), opt.output, io);
}

void cmd_pipeline(const Options& opt, const Io& io) {
    require_input(opt.nodes, "--nodes");
    require_input(opt.train_pairs, "--train");
    require_input(opt.test_pairs, "--test");
    require_output(opt.out_dir, "--out-dir");
    for (const auto* p : {&opt.nodes, &opt.train_pairs, &opt.test_pairs}) {
        if (*p == "-") throw Error(ErrorKind::validation, "pipeline inputs must be files");
    }
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);

    // clean
    textclean::CleanReport report;
    const auto cleaned = clean_table(load_nodes(opt.nodes, io), opt, io, &report);
    {
        OutputFile out((dir / "nodes.clean.tsv").string(), io.out);
        dataset::write_nodes(out.stream(), cleaned.records());
        out.commit();
    }

    // prepare
    dataset::PairSchema test_schema;
    const auto train_records = load_pairs(opt.train_pairs, io, nullptr, true);
    const auto test_records = load_pairs(opt.test_pairs, io, &test_schema, false);
    const auto config = opt.train_config();
    const auto train_prepared = make_sentence_pairs(train_records, cleaned, config.max_tokens, opt.join_mode(), io);
    const auto test_prepared = make_sentence_pairs(test_records, cleaned, config.max_tokens, opt.join_mode(), io);
    for (const auto& [name, data] : {std::pair{"train.prepared.tsv", &train_prepared},
                                     std::pair{"test.prepared.tsv", &test_prepared}}) {
        OutputFile out((dir / name).string(), io.out);
        pairs::write_prepared(out.stream(), *data);
        out.commit();
    }

    // train
    baseline::TrainLog log;
    const auto model = baseline::train(train_prepared, config, &log);
    {
        std::ostringstream msg;
        msg << "trained on " << train_prepared.size() << " pairs, " << model.step() << " steps, loss "
            << log.epoch_losses.front() << " -> " << log.epoch_losses.back();
        io.log(msg.str());
    }
    save_model_file(model, (dir / "model.txt").string(), io);

    // predict
    const auto preds = kernels::predict_all(model, test_prepared);
    save_predictions(preds, (dir / "predictions.csv").string(), io);

    // submit
    save_submission(preds, (dir / "submission.csv").string(), io);

    if (test_schema == dataset::PairSchema::labeled) {
        print_eval(eval::evaluate(eval::confusion(preds, test_records)), io.out);
    }
}

int exit_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse: return exit_parse;
        case ErrorKind::validation: return exit_validation;
        case ErrorKind::io: return exit_io;
        case ErrorKind::numeric: return exit_numeric;
    }
    return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Wikipedia link prediction as sentence-pair classification", "linkpred"};
    app.failure_message(CLI::FailureMessage::help);
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "Key-value config file (flat keys, INI/TOML syntax)");

    app.add_option("--threads", opt.threads, "Worker threads, 0 = all cores")
        ->envname("LINKPRED_THREADS")
        ->check(CLI::NonNegativeNumber);

    app.add_flag("--no-balance", opt.no_balance, "Skip brace balancing");
    app.add_flag("--no-debrace", opt.no_debrace, "Skip brace-span removal");
    app.add_flag("--no-depunct", opt.no_depunct, "Skip punctuation removal");
    app.add_flag("--no-despace", opt.no_despace, "Skip whitespace normalization");
    app.add_flag("--report", opt.report, "clean: print a JSON summary of what was removed");

    app.add_option("--max-tokens", opt.max_tokens, "Per-side token budget")->check(CLI::PositiveNumber);
    app.add_flag("--lenient", opt.lenient, "Skip pairs whose nodes are missing instead of failing");
    app.add_option("--batch-size", opt.train.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
    app.add_option("--learning-rate", opt.train.learning_rate, "AdamW learning rate");
    app.add_option("--adamw-eps", opt.train.adamw_eps, "AdamW epsilon");
    app.add_option("--adamw-beta1", opt.train.adamw_beta1, "AdamW beta1");
    app.add_option("--adamw-beta2", opt.train.adamw_beta2, "AdamW beta2");
    app.add_option("--weight-decay", opt.train.weight_decay, "Decoupled weight decay");
    app.add_option("--epochs", opt.train.epochs, "Training epochs")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.train.seed, "Shuffle seed");
    app.add_option("--hash-bits", opt.train.hash_bits, "log2 of the hashed feature space")
        ->check(CLI::Range(1, 30));
    app.add_option("--threshold", opt.train.decision_threshold, "Decision threshold on the probability");

    app.add_option("--nodes", opt.nodes, "Nodes TSV (id<TAB>text), '-' for stdin");
    app.add_option("--pairs", opt.pairs, "Pairs CSV, '-' for stdin");
    app.add_option("-o,--output", opt.output, "Output path, '-' for stdout");
    app.add_option("--model", opt.model, "Model file");
    app.add_option("--predictions", opt.predictions, "Predictions CSV (id,probability,label)");
    app.add_option("--gold", opt.gold, "Labeled pairs CSV to score against");
    app.add_option("--train", opt.train_pairs, "pipeline: labeled training pairs");
    app.add_option("--test", opt.test_pairs, "pipeline: pairs to predict");
    app.add_option("--out-dir", opt.out_dir, "pipeline: output directory");

    app.add_subcommand("clean", "Clean node texts: --nodes -> --output");
    app.add_subcommand("stats", "Label statistics of a labeled pairs CSV: --pairs");
    app.add_subcommand("prepare", "Build premise/hypothesis pairs: --pairs --nodes -> --output");
    app.add_subcommand("train", "Train the baseline: --pairs --nodes -> --model");
    app.add_subcommand("predict", "Score pairs: --model --pairs --nodes -> --output");
    app.add_subcommand("eval", "Macro F1 of --predictions against --gold");
    app.add_subcommand("submit", "Write the submission CSV: --predictions -> --output");
    app.add_subcommand("pipeline", "clean, prepare, train, predict, submit: --nodes --train --test --out-dir");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const Io io{in, out, err};
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        kernels::set_threads(opt.threads);
        if (command == "clean") cmd_clean(opt, io);
        else if (command == "stats") cmd_stats(opt, io);
        else if (command == "prepare") cmd_prepare(opt, io);
        else if (command == "train") cmd_train(opt, io);
        else if (command == "predict") cmd_predict(opt, io);
        else if (command == "eval") cmd_eval(opt, io);
        else if (command == "submit") cmd_submit(opt, io);
        else if (command == "pipeline") cmd_pipeline(opt, io);
    } catch (const Error& e) {
        err << "linkpred " << command << ": " << e.what() << '\n';
        return exit_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "linkpred " << command << ": io error: " << e.what() << '\n';
        return exit_io;
    }
    return exit_ok;
}

}  // namespace linkpred::cli

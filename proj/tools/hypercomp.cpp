#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hypercomp/composer.hpp"
#include "hypercomp/corpus_extract.hpp"
#include "hypercomp/dsm.hpp"
#include "hypercomp/error.hpp"
#include "hypercomp/hyperbolic.hpp"
#include "hypercomp/pair_rank.hpp"
#include "hypercomp/pipeline.hpp"
#include "hypercomp/stats.hpp"
#include "hypercomp/supervise.hpp"
#include "hypercomp/text.hpp"

namespace {

using namespace hypercomp;

struct Options {
    std::vector<std::string> corpus;
    std::vector<std::string> pairs;
    std::string ranked;
    std::string train_list;
    std::string poincare;
    std::string dsm;
    std::string dataset;
    std::string format = "reddy";
    std::string columns;
    std::string label;
    std::string output;
    std::string predictions;
    std::string compare;
    int threads = 1;

    int k = 5;
    double m = 10.0;
    double alpha = 0.4;
    double drop_top_percent = 1.0;
    bool no_fallback = false;
    std::vector<int> k_grid{5};
    std::vector<double> m_grid{10.0};
    std::vector<double> alpha_grid{0.4};

    hyperbolic::TrainConfig train;

    std::string model = "kernel-ridge";
    int splits = 25;
    double train_fraction = 0.75;
    double lambda = 1.0;
    std::optional<double> gamma;
    int components = 10;
    int neighbors = 5;
};

/// Writes to --output when given, otherwise to stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_.open(path, std::ios::binary);
        if (!file_) throw IoError("cannot open '" + path + "' for writing");
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    void close(const std::string& path) {
        if (!file_.is_open()) return;
        file_.close();
        if (!file_) throw IoError("failed writing '" + path + "'");
    }

private:
    std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

rank::RankedPairList load_ranked(const Options& o) {
    auto in = open_input(o.ranked);
    return rank::drop_top_percent(rank::read_ranked(in, o.ranked), o.drop_top_percent);
}

std::vector<compose::CompoundEntry> load_entries(const Options& o) {
    const auto format = pipeline::parse_format(o.format);
    std::optional<pipeline::ColumnMap> cols;
    if (!o.columns.empty()) cols = pipeline::ColumnMap::parse(o.columns);
    pipeline::DatasetReport report;
    auto entries = pipeline::load_dataset(o.dataset, format, o.label, cols, &report);
    std::cerr << "dataset: " << report.loaded << " of " << report.rows << " rows loaded\n";
    for (const auto& e : report.errors) std::cerr << "  " << e << '\n';
    return entries;
}

dsm::DenseEmbedding load_dsm(const std::string& path) {
    dsm::LoadReport report;
    auto emb = dsm::load_dense(path, &report);
    std::cerr << "vectors: " << report.rows_loaded << " loaded, " << report.skipped() << " skipped\n";
    return emb;
}

hyperbolic::PoincareEmbedding load_poincare(const std::string& path) {
    auto in = open_input(path);
    return hyperbolic::load(in, path);
}

std::string fmt(double v) { return text::format_double(v); }

int run_extract(const Options& o) {
    extract::ExtractStats st;
    auto occ = extract::extract_shards(o.corpus, o.threads, &st);
    Sink sink(o.output);
    extract::write_occurrences(sink.stream(), occ);
    sink.close(o.output);
    std::cerr << "lines " << st.lines << ", sentences " << st.sentences << ", malformed " << st.malformed
              << ", occurrences " << st.occurrences << '\n';
    return 0;
}

int run_rank(const Options& o) {
    rank::PairCounts counts;
    for (const auto& path : o.pairs) {
        auto in = open_input(path);
        rank::merge_counts(counts, rank::aggregate(extract::read_occurrences(in, path)));
    }
    auto list = rank::normalize(counts);
    Sink sink(o.output);
    rank::write_ranked(sink.stream(), list);
    sink.close(o.output);
    std::cerr << "distinct pairs " << list.size() << '\n';
    return 0;
}

int run_build_list(const Options& o) {
    auto ranked = load_ranked(o);
    auto targets = pipeline::dataset_targets(load_entries(o));
    auto list = rank::build_training_list(ranked, targets, o.k, o.m);
    Sink sink(o.output);
    rank::write_training_list(sink.stream(), list.pairs);
    sink.close(o.output);
    std::cerr << "training pairs " << list.pairs.size() << ", targets " << targets.size() << ", without pairs "
              << list.uncovered_targets.size() << '\n';
    return 0;
}

int run_train(const Options& o) {
    auto in = open_input(o.train_list);
    auto pairs = rank::read_training_list(in, o.train_list);
    auto result = hyperbolic::train(pairs, o.train);
    Sink sink(o.output);
    hyperbolic::save(sink.stream(), result.embedding);
    sink.close(o.output);
    std::cerr << "vocabulary " << result.embedding.size() << ", epochs " << result.epoch_loss.size();
    if (!result.epoch_loss.empty())
        std::cerr << ", loss " << fmt(result.epoch_loss.front()) << " -> " << fmt(result.epoch_loss.back());
    std::cerr << '\n';
    return 0;
}

void print_coverage(const compose::CoverageReport& c) {
    std::cerr << "combined " << c.combined << ", fallback " << c.fallback << ", uncovered " << c.uncovered;
    if (c.scaled) std::cerr << ", fallback scale " << fmt(c.scale_factor);
    std::cerr << '\n';
}

int run_score(const Options& o) {
    auto ranked = load_ranked(o);
    auto entries = load_entries(o);
    auto dsm = load_dsm(o.dsm);
    auto poin = load_poincare(o.poincare);
    compose::ScoreParams params{o.alpha, o.k, !o.no_fallback};
    auto scored = compose::score_dataset(entries, dsm, poin, rank::HypernymIndex(ranked), params);
    Sink sink(o.output);
    compose::write_predictions(sink.stream(), scored.entries);
    sink.close(o.output);
    print_coverage(scored.coverage);
    try {
        auto ev = pipeline::evaluate(scored.entries);
        std::cerr << "n " << ev.n << ", rho " << fmt(ev.rho) << ", |rho| " << fmt(ev.abs_rho) << '\n';
    } catch (const InvalidArgument& e) {
        std::cerr << "no correlation: " << e.what() << '\n';
    }
    return 0;
}

std::vector<compose::PredictionRow> read_rows(const std::string& path) {
    auto in = open_input(path);
    return compose::read_predictions(in, path);
}

int run_evaluate(const Options& o) {
    Sink sink(o.output);
    auto& out = sink.stream();
    auto a = read_rows(o.predictions);
    if (o.compare.empty()) {
        auto ev = pipeline::evaluate(a);
        out << "n\trho\tabs_rho\n" << ev.n << '\t' << fmt(ev.rho) << '\t' << fmt(ev.abs_rho) << '\n';
    } else {
        auto c = pipeline::compare(a, read_rows(o.compare));
        out << "file\tn\trho\tabs_rho\n";
        out << o.predictions << '\t' << c.first.n << '\t' << fmt(c.first.rho) << '\t' << fmt(c.first.abs_rho) << '\n';
        out << o.compare << '\t' << c.second.n << '\t' << fmt(c.second.rho) << '\t' << fmt(c.second.abs_rho) << '\n';
        out << "test\tn\tstatistic\tp\n";
        out << "wilcoxon" << (c.wilcoxon.exact ? "-exact" : "-normal") << '\t' << c.wilcoxon.n << '\t'
            << fmt(c.wilcoxon.w) << '\t' << fmt(c.wilcoxon.p) << '\n';
        if (c.z) out << "z\t" << c.paired << '\t' << fmt(c.z->z) << '\t' << fmt(c.z->p) << '\n';
    }
    sink.close(o.output);
    return 0;
}

int run_supervised(const Options& o) {
    auto entries = load_entries(o);
    auto dsm = load_dsm(o.dsm);
    auto poin = load_poincare(o.poincare);
    supervise::RegressorSpec spec{supervise::parse_model(o.model), o.lambda, o.gamma, o.components, o.neighbors};
    supervise::SplitPlan plan{o.train.seed, o.splits, o.train_fraction};
    auto report = supervise::run_protocol(entries, dsm, poin, spec, o.alpha, plan);
    Sink sink(o.output);
    supervise::write_report(sink.stream(), report);
    sink.close(o.output);
    std::cerr << "rows " << report.rows << " (dropped " << report.dropped << "), mixed |rho| "
              << fmt(report.mean_mixed) << " +/- " << fmt(report.std_mixed) << '\n';
    return 0;
}

int run_grid(const Options& o) {
    auto ranked = load_ranked(o);
    auto entries = load_entries(o);
    auto dsm = load_dsm(o.dsm);
    auto grid = pipeline::grid_search(entries, dsm, ranked, o.k_grid, o.m_grid, o.alpha_grid, o.train, !o.no_fallback);
    Sink sink(o.output);
    pipeline::write_grid(sink.stream(), grid);
    sink.close(o.output);
    const pipeline::GridCell* best = nullptr;
    for (const auto& c : grid.cells)
        if (c.error.empty() && (!best || c.eval.abs_rho > best->eval.abs_rho)) best = &c;
    std::cerr << "cells " << grid.cells.size() << ", trainings " << grid.trainings;
    if (best) std::cerr << ", best |rho| " << fmt(best->eval.abs_rho) << " at k=" << best->k << " m=" << fmt(best->m)
                        << " alpha=" << fmt(best->alpha);
    std::cerr << '\n';
    return 0;
}

void emit_error(const std::string& kind, const std::string& message) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << std::endl;
}

void add_train_flags(CLI::App* app, Options& o) {
    app->add_option("--dim", o.train.dim, "Embedding dimension")->capture_default_str();
    app->add_option("--negatives", o.train.negatives, "Negative samples per update")->capture_default_str();
    app->add_option("--lr", o.train.lr, "Learning rate")->capture_default_str();
    app->add_option("--epochs", o.train.epochs, "Training epochs")->capture_default_str();
    app->add_option("--burn-in", o.train.burn_in_epochs, "Epochs at the reduced burn-in rate")->capture_default_str();
    app->add_option("--l2", o.train.l2_coeff, "L2 coefficient on the hyponym vector")->capture_default_str();
    app->add_option("--seed", o.train.seed, "Random seed")->capture_default_str();
}

void add_dataset_flags(CLI::App* app, Options& o) {
    app->add_option("--dataset", o.dataset, "Gold dataset TSV")->required()->check(CLI::ExistingFile);
    app->add_option("--format", o.format, "Dataset format")
        ->check(CLI::IsMember({"reddy", "farahmand"}))
        ->capture_default_str();
    app->add_option("--columns", o.columns, "Zero-based column map: phrase,score[,score...]");
    app->add_option("--label", o.label, "Dataset label stored with each entry");
}

void add_output_flag(CLI::App* app, Options& o) {
    app->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Compositionality prediction with Poincare hypernymy embeddings"};
    app.require_subcommand(1);

    auto* extract = app.add_subcommand("extract", "Tagged corpus -> hyponym/hypernym occurrences");
    extract->add_option("--corpus", o.corpus, "Tagged corpus shard(s)")->required()->check(CLI::ExistingFile);
    extract->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    add_output_flag(extract, o);

    auto* rank_cmd = app.add_subcommand("rank", "Occurrences -> weighted, sorted pair list");
    rank_cmd->add_option("--pairs", o.pairs, "Occurrence file(s)")->required()->check(CLI::ExistingFile);
    add_output_flag(rank_cmd, o);

    auto* build = app.add_subcommand("build-list", "Ranked pairs + dataset -> Poincare training list");
    build->add_option("--ranked", o.ranked, "Ranked pair list")->required()->check(CLI::ExistingFile);
    add_dataset_flags(build, o);
    build->add_option("--k", o.k, "Pairs per target and direction")->capture_default_str();
    build->add_option("--m", o.m, "Percent of top pairs appended")->capture_default_str();
    build->add_option("--drop-top-percent", o.drop_top_percent, "Percent of top pairs dropped first")
        ->capture_default_str();
    add_output_flag(build, o);

    auto* train = app.add_subcommand("train", "Training list -> Poincare embedding");
    train->add_option("--train-list", o.train_list, "Training pair list")->required()->check(CLI::ExistingFile);
    add_train_flags(train, o);
    add_output_flag(train, o);

    auto* score = app.add_subcommand("score", "Unsupervised compositionality scores");
    score->add_option("--ranked", o.ranked, "Ranked pair list")->required()->check(CLI::ExistingFile);
    score->add_option("--poincare", o.poincare, "Poincare embedding")->required()->check(CLI::ExistingFile);
    score->add_option("--dsm", o.dsm, "Distributional vectors (text or gzip)")->required()->check(CLI::ExistingFile);
    add_dataset_flags(score, o);
    score->add_option("--k", o.k, "Hypernyms per surface")->capture_default_str();
    score->add_option("--alpha", o.alpha, "Weight of the Poincare term")->capture_default_str();
    score->add_option("--drop-top-percent", o.drop_top_percent, "Percent of top pairs dropped first")
        ->capture_default_str();
    score->add_flag("--no-fallback", o.no_fallback, "Mark Poincare-uncovered entries as uncovered");
    add_output_flag(score, o);

    auto* evaluate = app.add_subcommand("evaluate", "Spearman correlation of a predictions file");
    evaluate->add_option("--predictions", o.predictions, "Predictions TSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--compare", o.compare, "Second predictions TSV for significance tests")
        ->check(CLI::ExistingFile);
    add_output_flag(evaluate, o);

    auto* supervised = app.add_subcommand("supervised", "Supervised regression over random splits");
    add_dataset_flags(supervised, o);
    supervised->add_option("--dsm", o.dsm, "Distributional vectors")->required()->check(CLI::ExistingFile);
    supervised->add_option("--poincare", o.poincare, "Poincare embedding")->required()->check(CLI::ExistingFile);
    supervised->add_option("--model", o.model, "Regressor")
        ->check(CLI::IsMember({"kernel-ridge", "pls", "knn"}))
        ->capture_default_str();
    supervised->add_option("--alpha", o.alpha, "Weight of the Poincare prediction")->capture_default_str();
    supervised->add_option("--splits", o.splits, "Random splits")->capture_default_str();
    supervised->add_option("--train-fraction", o.train_fraction, "Training share per split")->capture_default_str();
    supervised->add_option("--seed", o.train.seed, "Split seed")->capture_default_str();
    supervised->add_option("--lambda", o.lambda, "Kernel ridge regularization")->capture_default_str();
    supervised->add_option("--gamma", o.gamma, "RBF width (default 1/features)");
    supervised->add_option("--components", o.components, "PLS components")->capture_default_str();
    supervised->add_option("--neighbors", o.neighbors, "kNN neighbours")->capture_default_str();
    add_output_flag(supervised, o);

    auto* grid = app.add_subcommand("grid", "Grid search over k, m and alpha");
    grid->add_option("--ranked", o.ranked, "Ranked pair list")->required()->check(CLI::ExistingFile);
    grid->add_option("--dsm", o.dsm, "Distributional vectors")->required()->check(CLI::ExistingFile);
    add_dataset_flags(grid, o);
    grid->add_option("--k", o.k_grid, "Comma-separated k values")->delimiter(',')->capture_default_str();
    grid->add_option("--m", o.m_grid, "Comma-separated m values")->delimiter(',')->capture_default_str();
    grid->add_option("--alpha", o.alpha_grid, "Comma-separated alpha values")->delimiter(',')->capture_default_str();
    grid->add_option("--drop-top-percent", o.drop_top_percent, "Percent of top pairs dropped first")
        ->capture_default_str();
    grid->add_flag("--no-fallback", o.no_fallback, "Mark Poincare-uncovered entries as uncovered");
    add_train_flags(grid, o);
    add_output_flag(grid, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what());
        return 2;
    }

    try {
        if (*extract) return run_extract(o);
        if (*rank_cmd) return run_rank(o);
        if (*build) return run_build_list(o);
        if (*train) return run_train(o);
        if (*score) return run_score(o);
        if (*evaluate) return run_evaluate(o);
        if (*supervised) return run_supervised(o);
        if (*grid) return run_grid(o);
    } catch (const Error& e) {
        emit_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 0;
}

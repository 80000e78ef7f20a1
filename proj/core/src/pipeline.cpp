#include "hypercomp/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "hypercomp/error.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::pipeline {

DatasetFormat parse_format(std::string_view name) {
    if (name == "reddy") return DatasetFormat::Reddy;
    if (name == "farahmand") return DatasetFormat::Farahmand;
    throw InvalidArgument("unknown dataset format '" + std::string(name) + "' (reddy, farahmand)");
}

ColumnMap ColumnMap::defaults(DatasetFormat format) {
    if (format == DatasetFormat::Reddy) return {0, {1}};
    return {0, {1, 2, 3, 4}};
}

ColumnMap ColumnMap::parse(std::string_view spec) {
    std::vector<std::size_t> cols;
    for (auto f : text::split(spec, ',')) {
        auto v = text::parse_int(f);
        if (!v || *v < 0) throw InvalidArgument("bad column mapping '" + std::string(spec) + "'");
        cols.push_back(static_cast<std::size_t>(*v));
    }
    if (cols.size() < 2) throw InvalidArgument("column mapping needs a phrase column and score columns");
    return {cols.front(), {cols.begin() + 1, cols.end()}};
}

std::vector<compose::CompoundEntry> load_dataset(std::istream& in, const std::string& source_name,
                                                 DatasetFormat format, const std::string& label,
                                                 const std::optional<ColumnMap>& columns, DatasetReport* report) {
    const ColumnMap cm = columns.value_or(ColumnMap::defaults(format));
    const std::size_t want_scores = format == DatasetFormat::Reddy ? 1 : 4;
    if (cm.scores.size() != want_scores)
        throw InvalidArgument("column mapping for this format needs " + std::to_string(want_scores) + " score columns");
    std::size_t max_col = cm.phrase;
    for (auto c : cm.scores) max_col = std::max(max_col, c);

    DatasetReport local;
    DatasetReport& rep = report ? *report : local;
    rep = DatasetReport{};
    std::vector<compose::CompoundEntry> out;
    std::string line;
    std::size_t lineno = 0;
    auto reject = [&](const std::string& why) { rep.errors.push_back("line " + std::to_string(lineno) + ": " + why); };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        ++rep.rows;
        auto cols = text::split(line, '\t');
        if (cols.size() <= max_col) {
            reject("expected at least " + std::to_string(max_col + 1) + " tab-separated columns");
            continue;
        }
        const std::string phrase_raw = text::to_lower(text::trim(cols[cm.phrase]));
        auto tokens = text::split_ws(phrase_raw);
        if (tokens.size() != 2) {
            reject("phrase '" + phrase_raw + "' does not have exactly two tokens");
            continue;
        }
        double gold = 0.0;
        bool ok = true;
        for (auto c : cm.scores) {
            auto v = text::parse_double(cols[c]);
            if (!v || !std::isfinite(*v)) {
                reject("bad score '" + std::string(cols[c]) + "'");
                ok = false;
                break;
            }
            if (format == DatasetFormat::Farahmand && *v != 0.0 && *v != 1.0) {
                reject("judgment '" + std::string(cols[c]) + "' is not binary");
                ok = false;
                break;
            }
            gold += *v;
        }
        if (!ok) continue;
        if (format == DatasetFormat::Reddy && !(gold >= 0.0 && gold <= 5.0)) {
            reject("score outside [0, 5]");
            continue;
        }
        compose::CompoundEntry e;
        e.w1 = std::string(tokens[0]);
        e.w2 = std::string(tokens[1]);
        e.phrase = e.w1 + " " + e.w2;
        e.gold = gold;
        e.dataset = label.empty() ? (format == DatasetFormat::Reddy ? "RD" : "FD") : label;
        out.push_back(std::move(e));
        ++rep.loaded;
    }
    if (out.empty()) throw ParseError(source_name, 0, "no dataset rows could be parsed");
    return out;
}

std::vector<compose::CompoundEntry> load_dataset(const std::string& path, DatasetFormat format,
                                                 const std::string& label, const std::optional<ColumnMap>& columns,
                                                 DatasetReport* report) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset '" + path + "'");
    return load_dataset(in, path, format, label, columns, report);
}

std::vector<std::string> dataset_targets(const std::vector<compose::CompoundEntry>& entries) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& e : entries)
        for (const auto* s : {&e.phrase, &e.w1, &e.w2})
            if (seen.insert(*s).second) out.push_back(*s);
    return out;
}

namespace {

Evaluation evaluate_pairs(const std::vector<double>& pred, const std::vector<double>& gold) {
    Evaluation ev;
    ev.n = pred.size();
    if (ev.n < 2) throw InvalidArgument("need at least two scored entries to evaluate");
    ev.rho = stats::spearman(pred, gold);
    ev.abs_rho = std::abs(ev.rho);
    return ev;
}

bool scored(compose::ScoreSource s, double score) {
    return s != compose::ScoreSource::Uncovered && std::isfinite(score);
}

}  // namespace

Evaluation evaluate(const std::vector<compose::ScoredEntry>& entries) {
    std::vector<double> pred, gold;
    for (const auto& s : entries)
        if (scored(s.source, s.score)) {
            pred.push_back(s.score);
            gold.push_back(s.entry.gold);
        }
    return evaluate_pairs(pred, gold);
}

Evaluation evaluate(const std::vector<compose::PredictionRow>& rows) {
    std::vector<double> pred, gold;
    for (const auto& r : rows)
        if (scored(r.source, r.score)) {
            pred.push_back(r.score);
            gold.push_back(r.gold);
        }
    return evaluate_pairs(pred, gold);
}

Comparison compare(const std::vector<compose::PredictionRow>& a, const std::vector<compose::PredictionRow>& b) {
    Comparison c;
    c.first = evaluate(a);
    c.second = evaluate(b);
    std::unordered_map<std::string, const compose::PredictionRow*> by_phrase;
    for (const auto& r : b)
        if (scored(r.source, r.score)) by_phrase.emplace(r.phrase, &r);
    std::vector<double> xa, xb;
    for (const auto& r : a) {
        if (!scored(r.source, r.score)) continue;
        auto it = by_phrase.find(r.phrase);
        if (it == by_phrase.end()) continue;
        xa.push_back(r.score);
        xb.push_back(it->second->score);
    }
    c.paired = xa.size();
    c.wilcoxon = stats::wilcoxon_signed_rank(xa, xb);
    try {
        c.z = stats::z_test(xa, xb);
    } catch (const Error&) {
        c.z.reset();
    }
    return c;
}

hyperbolic::TrainResult train_for(const rank::RankedPairList& ranked, const std::vector<std::string>& targets,
                                  int k, double m_percent, const hyperbolic::TrainConfig& cfg) {
    const auto list = rank::build_training_list(ranked, targets, k, m_percent);
    return hyperbolic::train(list.pairs, cfg);
}

GridResult grid_search(const std::vector<compose::CompoundEntry>& entries, const dsm::DenseEmbedding& dsm,
                       const rank::RankedPairList& ranked, const std::vector<int>& ks,
                       const std::vector<double>& ms, const std::vector<double>& alphas,
                       const hyperbolic::TrainConfig& train_cfg, bool fallback_enabled) {
    if (ks.empty() || ms.empty() || alphas.empty()) throw InvalidArgument("grid axes must be non-empty");
    const auto targets = dataset_targets(entries);
    const rank::HypernymIndex index(ranked);
    GridResult result;
    std::map<std::pair<int, double>, hyperbolic::PoincareEmbedding> cache;

    for (int k : ks) {
        for (double m : ms) {
            const hyperbolic::PoincareEmbedding* emb = nullptr;
            std::string train_error;
            try {
                auto key = std::make_pair(k, m);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    auto trained = train_for(ranked, targets, k, m, train_cfg);
                    ++result.trainings;
                    it = cache.emplace(key, std::move(trained.embedding)).first;
                }
                emb = &it->second;
            } catch (const Error& e) {
                train_error = e.what();
            }
            for (double alpha : alphas) {
                GridCell cell;
                cell.k = k;
                cell.m = m;
                cell.alpha = alpha;
                if (!emb) {
                    cell.error = train_error;
                    result.cells.push_back(std::move(cell));
                    continue;
                }
                try {
                    compose::ScoreParams params{alpha, k, fallback_enabled};
                    auto scores = compose::score_dataset(entries, dsm, *emb, index, params);
                    cell.coverage = scores.coverage;
                    cell.eval = evaluate(scores.entries);
                } catch (const Error& e) {
                    cell.error = e.what();
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

void write_grid(std::ostream& out, const GridResult& grid) {
    out << "k\tm\talpha\tabs_rho\tn\tcombined\tfallback\tuncovered\terror\n";
    for (const auto& c : grid.cells) {
        out << c.k << '\t' << text::format_double(c.m) << '\t' << text::format_double(c.alpha) << '\t'
            << (c.error.empty() ? text::format_double(c.eval.abs_rho) : std::string("nan")) << '\t' << c.eval.n << '\t'
            << c.coverage.combined << '\t' << c.coverage.fallback << '\t' << c.coverage.uncovered << '\t' << c.error
            << '\n';
    }
}

}  // namespace hypercomp::pipeline

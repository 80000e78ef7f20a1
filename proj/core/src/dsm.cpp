#include "hypercomp/dsm.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>

#include "hypercomp/error.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::dsm {

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Line source over either an istream or a (possibly gzipped) file.
class LineReader {
public:
    virtual ~LineReader() = default;
    virtual bool next(std::string& line) = 0;
};

class StreamLines : public LineReader {
public:
    explicit StreamLines(std::istream& in) : in_(in) {}
    bool next(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

private:
    std::istream& in_;
};

class GzLines : public LineReader {
public:
    explicit GzLines(const std::string& path) : file_(gzopen(path.c_str(), "rb"), &gzclose) {
        if (!file_) throw IoError("cannot open '" + path + "'");
    }
    bool next(std::string& line) override {
        line.clear();
        char buf[8192];
        while (gzgets(file_.get(), buf, sizeof buf) != nullptr) {
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                return true;
            }
        }
        return !line.empty();
    }

private:
    std::unique_ptr<gzFile_s, decltype(&gzclose)> file_;
};

DenseEmbedding load_lines(LineReader& reader, const std::string& source_name, LoadReport* report) {
    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep = LoadReport{};
    auto note = [&](std::size_t lineno, const std::string& why) {
        if (rep.diagnostics.size() < 100) rep.diagnostics.push_back("line " + std::to_string(lineno) + ": " + why);
    };

    std::string line;
    std::size_t lineno = 0;
    std::optional<DenseEmbedding> emb;
    std::vector<double> vec;
    bool first = true;
    while (reader.next(line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = text::split_ws(line);
        if (fields.empty()) continue;
        if (first) {
            first = false;
            if (fields.size() == 2 && text::parse_int(fields[0]) && text::parse_int(fields[1])) {
                auto dim = *text::parse_int(fields[1]);
                if (dim < 1) throw ParseError(source_name, lineno, "header dimension must be >= 1");
                emb.emplace(static_cast<int>(dim));
                continue;
            }
        }
        if (!emb) emb.emplace(static_cast<int>(fields.size() - 1));
        if (fields.size() - 1 != static_cast<std::size_t>(emb->dim())) {
            ++rep.dim_mismatch;
            note(lineno, "dimension " + std::to_string(fields.size() - 1) + " != " + std::to_string(emb->dim()));
            continue;
        }
        vec.resize(fields.size() - 1);
        bool ok = true;
        for (std::size_t i = 0; i < vec.size() && ok; ++i) {
            auto v = text::parse_double(fields[i + 1]);
            ok = v && std::isfinite(*v);
            if (ok) vec[i] = *v;
        }
        if (!ok) {
            ++rep.malformed;
            note(lineno, "unparseable component");
            continue;
        }
        std::string word(fields[0]);
        if (emb->find(word)) {
            ++rep.duplicates;
            note(lineno, "duplicate word '" + word + "'");
            continue;
        }
        if (norm(vec) == 0.0) {
            ++rep.zero_norm;
            note(lineno, "zero-norm vector for '" + word + "'");
            continue;
        }
        emb->add(std::move(word), vec);
        ++rep.rows_loaded;
    }
    if (!emb || emb->size() == 0) throw ParseError(source_name, 0, "no vectors could be loaded");
    return std::move(*emb);
}

}  // namespace

DenseEmbedding::DenseEmbedding(int dim) : dim_(dim) {
    if (dim < 1) throw InvalidArgument("dense embedding dimension must be >= 1");
}

std::size_t DenseEmbedding::add(std::string word, std::span<const double> vec) {
    if (vec.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("vector length != dim");
    if (norm(vec) == 0.0) throw DomainError("zero-norm vector for '" + word + "'");
    if (index_.count(word)) throw InvalidArgument("duplicate word '" + word + "'");
    const std::size_t idx = words_.size();
    index_.emplace(word, idx);
    words_.push_back(std::move(word));
    data_.insert(data_.end(), vec.begin(), vec.end());
    return idx;
}

std::optional<std::span<const double>> DenseEmbedding::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return vector(it->second);
}

std::span<const double> DenseEmbedding::vector(std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

DenseEmbedding load_dense(const std::string& path, LoadReport* report) {
    GzLines reader(path);
    return load_lines(reader, path, report);
}

DenseEmbedding load_dense(std::istream& in, const std::string& source_name, LoadReport* report) {
    StreamLines reader(in);
    return load_lines(reader, source_name, report);
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("cosine of vectors with different lengths");
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw DomainError("cosine of a zero-norm vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

std::optional<std::span<const double>> find_phrase(const DenseEmbedding& emb, std::string_view phrase,
                                                   std::string_view w1, std::string_view w2) {
    const std::string joined = std::string(w1) + "_" + std::string(w2);
    if (auto v = emb.find(joined)) return v;
    if (auto v = emb.find(std::string(w1) + " " + std::string(w2))) return v;
    return emb.find(phrase);
}

double score_d(std::string_view phrase, std::string_view w1, std::string_view w2, const DenseEmbedding& emb) {
    auto vp = find_phrase(emb, phrase, w1, w2);
    auto v1 = emb.find(w1);
    auto v2 = emb.find(w2);
    if (!vp || !v1 || !v2) {
        std::vector<std::string> missing;
        if (!vp) missing.emplace_back(phrase);
        if (!v1) missing.emplace_back(w1);
        if (!v2) missing.emplace_back(w2);
        throw UncoveredError(std::move(missing));
    }
    const double n1 = norm(*v1);
    const double n2 = norm(*v2);
    std::vector<double> sum(static_cast<std::size_t>(emb.dim()));
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = (*v1)[i] / n1 + (*v2)[i] / n2;
    return cosine(*vp, sum);
}

}  // namespace hypercomp::dsm

#include "hypercomp/corpus_extract.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "hypercomp/error.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::extract {

Tag coarse_tag(std::string_view s, std::string_view tag) {
    if (s == "such" || s == "as" || s == "other" || s == "including" || s == "especially")
        return Tag::Lit;
    if (s == "and" || s == "or") return Tag::Conj;
    if (s == "," || tag == "," || tag == "PUNCT-COMMA") return Tag::Comma;

    const std::string t = [&] {
        std::string u(tag);
        for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return u;
    }();
    if (t == "DET" || t == "DT") return Tag::Det;
    if (t == "ADJ" || t == "JJ" || t == "JJR" || t == "JJS") return Tag::Adj;
    if (t == "NOUN" || t == "NN" || t == "NNS") return Tag::Noun;
    if (t == "PROPN" || t == "NNP" || t == "NNPS") return Tag::Propn;
    if (t == "CONJ" || t == "CCONJ" || t == "CC") return Tag::Conj;
    return Tag::Other;
}

std::optional<TaggedSentence> parse_tagged_line(std::string_view line) {
    auto fields = text::split_ws(line);
    if (fields.empty()) return std::nullopt;
    TaggedSentence sent;
    sent.tokens.reserve(fields.size());
    for (auto f : fields) {
        auto pos = f.rfind('_');
        if (pos == std::string_view::npos || pos == 0 || pos + 1 == f.size()) return std::nullopt;
        Token tok;
        tok.surface = text::to_lower(f.substr(0, pos));
        tok.tag = coarse_tag(tok.surface, f.substr(pos + 1));
        sent.tokens.push_back(std::move(tok));
    }
    return sent;
}

namespace {

bool is_nominal(Tag t) { return t == Tag::Noun || t == Tag::Propn; }

}  // namespace

std::vector<Chunk> chunk_noun_phrases(const TaggedSentence& sentence) {
    const auto& toks = sentence.tokens;
    std::vector<Chunk> chunks;
    std::size_t i = 0;
    while (i < toks.size()) {
        std::size_t body = i;
        if (toks[body].tag == Tag::Det) ++body;
        std::size_t nouns = body;
        while (nouns < toks.size() && toks[nouns].tag == Tag::Adj) ++nouns;
        std::size_t end = nouns;
        while (end < toks.size() && is_nominal(toks[end].tag)) ++end;
        if (end == nouns) {
            ++i;
            continue;
        }
        Chunk c;
        c.span = {i, end};
        for (std::size_t t = body; t < end; ++t) {
            if (t > body) c.np.surface += ' ';
            c.np.surface += toks[t].surface;
        }
        c.np.head = toks[end - 1].surface;
        chunks.push_back(std::move(c));
        i = end;
    }
    return chunks;
}

namespace {

// A sentence viewed as a sequence of noun phrases and the single tokens between them.
class ElementView {
public:
    ElementView(const TaggedSentence& s, const std::vector<Chunk>& chunks) : sent_(s), chunks_(chunks) {
        std::size_t next_chunk = 0;
        std::size_t i = 0;
        while (i < s.tokens.size()) {
            if (next_chunk < chunks.size() && chunks[next_chunk].span.begin == i) {
                elems_.push_back({true, next_chunk});
                i = chunks[next_chunk].span.end;
                ++next_chunk;
            } else {
                elems_.push_back({false, i});
                ++i;
            }
        }
    }

    std::ptrdiff_t size() const { return static_cast<std::ptrdiff_t>(elems_.size()); }

    bool np(std::ptrdiff_t e) const { return in_range(e) && elems_[e].is_np; }

    const std::string& np_surface(std::ptrdiff_t e) const { return chunks_[elems_[e].index].np.surface; }

    bool comma(std::ptrdiff_t e) const { return tag_is(e, Tag::Comma); }

    bool word(std::ptrdiff_t e, std::string_view w) const {
        return in_range(e) && !elems_[e].is_np && sent_.tokens[elems_[e].index].surface == w;
    }

    bool and_or(std::ptrdiff_t e) const { return word(e, "and") || word(e, "or"); }

private:
    struct Elem {
        bool is_np;
        std::size_t index;  // chunk index or token index
    };

    bool in_range(std::ptrdiff_t e) const { return e >= 0 && e < size(); }
    bool tag_is(std::ptrdiff_t e, Tag t) const {
        return in_range(e) && !elems_[e].is_np && sent_.tokens[elems_[e].index].tag == t;
    }

    const TaggedSentence& sent_;
    const std::vector<Chunk>& chunks_;
    std::vector<Elem> elems_;
};

// NP (, NP)* [[,] and|or NP] starting at element `p`.
std::vector<std::ptrdiff_t> list_forward(const ElementView& v, std::ptrdiff_t p) {
    std::vector<std::ptrdiff_t> out;
    if (!v.np(p)) return out;
    out.push_back(p);
    std::ptrdiff_t q = p + 1;
    while (true) {
        if (v.comma(q)) {
            if (v.np(q + 1)) {
                out.push_back(q + 1);
                q += 2;
                continue;
            }
            if (v.and_or(q + 1) && v.np(q + 2)) out.push_back(q + 2);
            break;
        }
        if (v.and_or(q) && v.np(q + 1)) out.push_back(q + 1);
        break;
    }
    return out;
}

// NP (, NP)* [,] ending just before element `conj`.
std::vector<std::ptrdiff_t> list_backward(const ElementView& v, std::ptrdiff_t conj) {
    std::vector<std::ptrdiff_t> out;
    std::ptrdiff_t q = conj - 1;
    if (v.comma(q)) --q;
    if (!v.np(q)) return out;
    out.push_back(q);
    while (v.comma(q - 1) && v.np(q - 2)) {
        q -= 2;
        out.push_back(q);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<PairOccurrence> match_patterns(const TaggedSentence& sentence, const std::vector<Chunk>& chunks) {
    ElementView v(sentence, chunks);
    std::vector<PairOccurrence> out;

    auto emit = [&](const std::vector<std::ptrdiff_t>& hyponyms, std::ptrdiff_t hypernym, int id) {
        const auto& hyper = v.np_surface(hypernym);
        for (auto h : hyponyms) {
            const auto& hypo = v.np_surface(h);
            if (hypo != hyper) out.push_back({hypo, hyper, id});
        }
    };

    for (std::ptrdiff_t e = 0; e < v.size(); ++e) {
        // (i) such NP as LIST
        if (v.word(e, "such") && v.np(e + 1) && v.word(e + 2, "as")) {
            emit(list_forward(v, e + 3), e + 1, 1);
        }
        // (ii) NP such as LIST
        if (v.np(e) && v.word(e + 1, "such") && v.word(e + 2, "as")) {
            emit(list_forward(v, e + 3), e, 2);
        }
        // (iii) / (iv) LIST or|and other NP
        if (v.and_or(e) && v.word(e + 1, "other") && v.np(e + 2)) {
            emit(list_backward(v, e), e + 2, v.word(e, "or") ? 3 : 4);
        }
        // (v) / (vi) NP, including|especially LIST
        if (v.np(e) && v.comma(e + 1)) {
            if (v.word(e + 2, "including")) emit(list_forward(v, e + 3), e, 5);
            if (v.word(e + 2, "especially")) emit(list_forward(v, e + 3), e, 6);
        }
    }
    return out;
}

ExtractStats& ExtractStats::operator+=(const ExtractStats& o) {
    lines += o.lines;
    blank += o.blank;
    malformed += o.malformed;
    sentences += o.sentences;
    occurrences += o.occurrences;
    return *this;
}

ExtractStats extract_corpus(std::istream& in, const OccurrenceSink& sink) {
    ExtractStats stats;
    std::string line;
    while (std::getline(in, line)) {
        ++stats.lines;
        if (text::trim(line).empty()) {
            ++stats.blank;
            continue;
        }
        auto sent = parse_tagged_line(line);
        if (!sent) {
            ++stats.malformed;
            continue;
        }
        ++stats.sentences;
        for (const auto& occ : match_patterns(*sent, chunk_noun_phrases(*sent))) {
            ++stats.occurrences;
            sink(occ);
        }
    }
    return stats;
}

std::vector<PairOccurrence> extract_corpus(std::istream& in, ExtractStats* stats) {
    std::vector<PairOccurrence> out;
    auto s = extract_corpus(in, [&](const PairOccurrence& o) { out.push_back(o); });
    if (stats) *stats = s;
    return out;
}

std::vector<PairOccurrence> extract_shards(const std::vector<std::string>& paths, unsigned threads,
                                           ExtractStats* stats) {
    for (const auto& p : paths) {
        std::ifstream probe(p);
        if (!probe) throw IoError("cannot open corpus shard '" + p + "'");
    }
    std::vector<std::vector<PairOccurrence>> per_shard(paths.size());
    std::vector<ExtractStats> per_stats(paths.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) {
            std::ifstream in(paths[i]);
            per_shard[i] = extract_corpus(in, &per_stats[i]);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(paths.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    std::vector<PairOccurrence> out;
    ExtractStats total;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        out.insert(out.end(), std::make_move_iterator(per_shard[i].begin()),
                   std::make_move_iterator(per_shard[i].end()));
        total += per_stats[i];
    }
    if (stats) *stats = total;
    return out;
}

void write_occurrences(std::ostream& out, const std::vector<PairOccurrence>& occ) {
    for (const auto& o : occ) out << o.hyponym << '\t' << o.hypernym << '\t' << o.pattern_id << '\n';
}

std::vector<PairOccurrence> read_occurrences(std::istream& in, const std::string& source_name) {
    std::vector<PairOccurrence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 2 && cols.size() != 3)
            throw ParseError(source_name, lineno, "expected 2 or 3 tab-separated columns");
        PairOccurrence o{std::string(cols[0]), std::string(cols[1]), 0};
        if (o.hyponym.empty() || o.hypernym.empty()) throw ParseError(source_name, lineno, "empty surface");
        if (cols.size() == 3) {
            auto id = text::parse_int(cols[2]);
            if (!id || *id < 0 || *id > 6) throw ParseError(source_name, lineno, "bad pattern id");
            o.pattern_id = static_cast<int>(*id);
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace hypercomp::extract

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Noun-phrase chunking and Hearst-pattern extraction over pre-tagged text.
//
// Input lines look like `Animals_NNS such_JJ as_IN dogs_NNS ,_, cats_NNS and_CC horses_NNS`.
// Tags are folded onto a coarse set; pattern keywords (such, as, other, including,
// especially) are recognised by surface and never become part of a noun phrase.
namespace hypercomp::extract {

enum class Tag { Det, Adj, Noun, Propn, Conj, Comma, Lit, Other };

struct Token {
    std::string surface;  // lowercased
    Tag tag = Tag::Other;
};

/// A non-empty tagged sentence.
struct TaggedSentence {
    std::vector<Token> tokens;
};

/// Maps a fine-grained (Penn or Universal) tag onto the coarse set.
/// Keyword surfaces win over the tag: `such_JJ` is a literal, `and_X` a conjunction.
Tag coarse_tag(std::string_view surface_lower, std::string_view tag);

/// Parses one `surface_TAG ...` line. Returns nullopt on a malformed or empty line.
std::optional<TaggedSentence> parse_tagged_line(std::string_view line);

/// Half-open token range [begin, end) of a chunk, including a stripped determiner.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct NounPhrase {
    std::string surface;  // determiner stripped, space-joined
    std::string head;     // final noun
};

struct Chunk {
    NounPhrase np;
    Span span;
};

/// Greedy, left-to-right, maximal chunks matching DET? ADJ* NOUN+ (PROPN counts as NOUN).
std::vector<Chunk> chunk_noun_phrases(const TaggedSentence& sentence);

struct PairOccurrence {
    std::string hyponym;
    std::string hypernym;
    int pattern_id = 0;  // 1..6

    friend bool operator==(const PairOccurrence&, const PairOccurrence&) = default;
    friend auto operator<=>(const PairOccurrence&, const PairOccurrence&) = default;
};

/// Applies the six patterns:
///   1  such NP as NP, NP[,] and/or NP
///   2  NP such as NP, NP[,] and/or NP
///   3  NP, NP[,] or other NP
///   4  NP, NP[,] and other NP
///   5  NP, including NP, NP[,] and/or NP
///   6  NP, especially NP, NP[,] and/or NP
/// Occurrences come out ordered by the pattern anchor, then left to right within the list.
std::vector<PairOccurrence> match_patterns(const TaggedSentence& sentence,
                                           const std::vector<Chunk>& chunks);

struct ExtractStats {
    std::size_t lines = 0;
    std::size_t blank = 0;
    std::size_t malformed = 0;
    std::size_t sentences = 0;
    std::size_t occurrences = 0;

    ExtractStats& operator+=(const ExtractStats& o);
};

using OccurrenceSink = std::function<void(const PairOccurrence&)>;

/// Streams `in` line by line. Malformed lines are skipped and tallied.
ExtractStats extract_corpus(std::istream& in, const OccurrenceSink& sink);

/// Convenience overload collecting everything in memory.
std::vector<PairOccurrence> extract_corpus(std::istream& in, ExtractStats* stats = nullptr);

/// Extracts several shard files, possibly concurrently, and concatenates the
/// results in shard order.
std::vector<PairOccurrence> extract_shards(const std::vector<std::string>& paths,
                                           unsigned threads, ExtractStats* stats = nullptr);

/// `hyponym<TAB>hypernym<TAB>pattern_id` rows.
void write_occurrences(std::ostream& out, const std::vector<PairOccurrence>& occ);
std::vector<PairOccurrence> read_occurrences(std::istream& in, const std::string& source_name);

}  // namespace hypercomp::extract

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Pretrained distributional vectors and the additive-composition similarity score.
namespace hypercomp::dsm {

class DenseEmbedding {
public:
    explicit DenseEmbedding(int dim);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }

    /// Throws on duplicate word, wrong length or a zero-norm vector.
    std::size_t add(std::string word, std::span<const double> vec);

    std::optional<std::span<const double>> find(std::string_view word) const;
    const std::string& word(std::size_t i) const { return words_[i]; }
    std::span<const double> vector(std::size_t i) const;

private:
    int dim_;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct LoadReport {
    std::size_t rows_loaded = 0;
    std::size_t dim_mismatch = 0;
    std::size_t duplicates = 0;
    std::size_t zero_norm = 0;
    std::size_t malformed = 0;
    std::vector<std::string> diagnostics;  // "line N: reason", first 100 only

    std::size_t skipped() const { return dim_mismatch + duplicates + zero_norm + malformed; }
};

/// Word-vector text format (`count dim` header, then `word v1 ... vd`). The header is
/// optional; without it the first row fixes the dimension. Gzip input is detected
/// and decompressed transparently. Bad rows are skipped and reported; throws only
/// if the file cannot be read or no row loads.
DenseEmbedding load_dense(const std::string& path, LoadReport* report = nullptr);
DenseEmbedding load_dense(std::istream& in, const std::string& source_name, LoadReport* report = nullptr);

/// a.b / (|a||b|). Throws DomainError if either norm is zero.
double cosine(std::span<const double> a, std::span<const double> b);

/// Looks a two-word phrase up as `w1_w2`, then `w1 w2`, then as given.
std::optional<std::span<const double>> find_phrase(const DenseEmbedding& emb, std::string_view phrase,
                                                   std::string_view w1, std::string_view w2);

/// cos(v(w1w2), v(w1)/|v(w1)| + v(w2)/|v(w2)|). Throws UncoveredError naming every
/// missing surface.
double score_d(std::string_view phrase, std::string_view w1, std::string_view w2, const DenseEmbedding& emb);

}  // namespace hypercomp::dsm

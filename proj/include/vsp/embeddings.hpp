#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vsp {

/// Pre-trained word vectors, all of length `dim()`.
class VectorStore {
public:
    VectorStore() = default;
    explicit VectorStore(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    bool contains(std::string_view word) const;
    /// Empty span when `word` is out of vocabulary.
    std::span<const double> lookup(std::string_view word) const;

    /// Inserts or replaces. Throws std::invalid_argument on a length mismatch.
    /// Returns false when an existing vector was replaced.
    bool set(std::string word, std::vector<double> vec);

    /// Load-time diagnostics (duplicate words).
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::vector<std::string>& warnings() { return warnings_; }

    /// Writes the text format accepted by load_vectors, words in sorted order.
    void save(const std::filesystem::path& path) const;

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
    std::vector<std::string> warnings_;
};

/// Reads `<count> <dim>` followed by `<word> <f1> ... <f_dim>` rows.
VectorStore parse_vectors(std::string_view text);
VectorStore load_vectors(const std::filesystem::path& path);

enum class IdfFormula {
    smoothed,  // ln((1+N)/(1+df)) + 1
    raw,       // ln(N/df), zero for words in every document; unseen get ln(N) + 1
};

struct IdfTable {
    std::size_t n_docs = 0;
    std::unordered_map<std::string, double> weights;
    double default_weight = 1.0;

    double weight(std::string_view lemma) const;
};

/// Throws std::invalid_argument on an empty corpus.
IdfTable compute_idf(const std::vector<std::vector<std::string>>& corpus,
                     IdfFormula formula = IdfFormula::smoothed);

struct SentenceVector {
    std::vector<double> v;
    std::size_t n_known = 0;
    std::vector<std::string> oov;
};

SentenceVector sentence_vector(const std::vector<std::string>& tokens, const VectorStore& store,
                               const IdfTable& idf);

/// 1 - cos(a, b). Throws UndefinedDistance when either operand has zero norm.
double distance(std::span<const double> a, std::span<const double> b);
double distance(const SentenceVector& a, const SentenceVector& b);

}  // namespace vsp

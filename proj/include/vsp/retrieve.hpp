#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsp/category.hpp"
#include "vsp/embeddings.hpp"
#include "vsp/normalizer.hpp"

namespace vsp {

inline constexpr double kDefaultRejectionThreshold = 0.45;

struct KbRecord {
    std::string question;
    std::string answer;
    Category category = Category::unknown;
    std::size_t line = 0;
};

/// One JSON object per line with `question`, `answer`, `category`.
/// Throws ParseError on an empty file or a malformed record.
std::vector<KbRecord> parse_kb_records(std::string_view text);
std::vector<KbRecord> load_kb_records(const std::filesystem::path& path);

struct KnowledgeEntry {
    std::string question;
    std::string answer;
    Category category = Category::unknown;
    std::vector<std::string> tokens;
    SentenceVector qvec;
};

struct SkippedRecord {
    std::size_t line = 0;
    std::string question;
    std::string reason;
};

struct Neighbor {
    const KnowledgeEntry* entry = nullptr;
    double distance = 0.0;
};

/// Category-partitioned question/answer store searched by cosine distance.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    KnowledgeBase(IdfTable idf, double tau);

    double tau() const { return tau_; }
    const IdfTable& idf() const { return idf_; }
    const std::vector<KnowledgeEntry>& partition(Category c) const { return partitions_[index_of(c)]; }
    std::size_t size() const;
    const std::vector<SkippedRecord>& skipped() const { return skipped_; }

    /// Throws std::invalid_argument when qvec has no known token.
    void add(KnowledgeEntry entry);
    void note_skipped(SkippedRecord s) { skipped_.push_back(std::move(s)); }

    /// Vectorizes with this KB's IDF weights.
    SentenceVector vectorize(const std::vector<std::string>& tokens, const VectorStore& store) const;

    /// Closest entry in `cat` regardless of threshold; ties keep load order.
    /// Throws UndefinedDistance for a zero probe.
    std::optional<Neighbor> closest(Category cat, const SentenceVector& q) const;

    /// closest(), rejected when the distance exceeds `tau` (defaults to tau()).
    std::optional<Neighbor> nearest(Category cat, const SentenceVector& q) const;
    std::optional<Neighbor> nearest(Category cat, const SentenceVector& q, double tau) const;

    nlohmann::json to_json() const;
    static KnowledgeBase from_json(const nlohmann::json& j);

private:
    IdfTable idf_;
    double tau_ = kDefaultRejectionThreshold;
    std::array<std::vector<KnowledgeEntry>, kCategoryCount> partitions_;
    std::vector<SkippedRecord> skipped_;
};

/// Normalizes and vectorizes every record once. Records with no embeddable
/// token are listed in skipped(). Throws std::invalid_argument unless
/// 0 < tau < 2.
KnowledgeBase build_kb(const std::vector<KbRecord>& records, const NormalizerConfig& norm,
                       const VectorStore& store, const IdfTable& idf, double tau);

/// IDF over the normalized KB questions, then build_kb.
KnowledgeBase build_kb(const std::vector<KbRecord>& records, const NormalizerConfig& norm,
                       const VectorStore& store, double tau);

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase load_kb(const std::filesystem::path& path);

}  // namespace vsp

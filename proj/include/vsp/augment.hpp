#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsp/lexicon.hpp"
#include "vsp/normalizer.hpp"
#include "vsp/retrieve.hpp"

namespace vsp {

inline constexpr std::size_t kDefaultMaxVariants = 256;

struct Expansion {
    /// Lexicographically sorted, deduplicated; always contains the input.
    std::vector<std::vector<std::string>> variants;
    /// Π |concept| over concept-bearing positions, saturating at SIZE_MAX.
    std::size_t product = 1;
    bool truncated = false;
};

/// Substitutes every member of each token's concept. Throws AmbiguityError
/// when a token belongs to more than one concept.
Expansion expand(const std::vector<std::string>& tokens, const ConceptLexicon& lexicon,
                 std::size_t max_variants = kDefaultMaxVariants);

struct AugmentationReport {
    std::size_t input_count = 0;
    std::size_t output_count = 0;
    std::vector<std::size_t> factors;
    std::vector<std::size_t> truncated;  // input indexes whose expansion was capped

    nlohmann::json to_json() const;
};

struct AugmentedCorpus {
    std::vector<KbRecord> records;
    AugmentationReport report;
};

/// Each input record is kept verbatim, followed by one record per extra
/// variant whose question is the space-joined lemmas.
AugmentedCorpus augment_records(const std::vector<KbRecord>& records, const NormalizerConfig& norm,
                                const ConceptLexicon& lexicon, std::size_t max_variants = kDefaultMaxVariants);

}  // namespace vsp

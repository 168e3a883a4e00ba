#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vsp {

inline constexpr std::size_t kMaxTokens = 50;

/// Lookup tables driving normalization. Keys and values are stored NFC and
/// lowercase. `validate()` enforces the fixed-point conditions that make
/// normalize() idempotent.
struct NormalizerConfig {
    std::unordered_set<std::string> stopwords;
    std::unordered_map<std::string, std::string> lemma_map;
    std::unordered_map<std::string, std::string> spell_map;
    std::size_t max_len = kMaxTokens;

    /// Throws ParseError naming the offending entry.
    void validate() const;
};

struct NormalizedUtterance {
    std::vector<std::string> tokens;
    std::string raw;
};

/// NFC, lowercase, then every code point in Unicode categories P or S
/// becomes a space.
std::string fold_text(std::string_view raw);

NormalizedUtterance normalize(std::string_view raw, const NormalizerConfig& cfg);

std::string join_tokens(const std::vector<std::string>& tokens);

std::unordered_set<std::string> parse_stopwords(std::string_view text);
std::unordered_map<std::string, std::string> parse_mapping(std::string_view text);

NormalizerConfig load_normalizer_config(const std::filesystem::path& stopwords,
                                        const std::filesystem::path& lemmas,
                                        const std::filesystem::path& spelling);

std::string read_file(const std::filesystem::path& path);

}  // namespace vsp

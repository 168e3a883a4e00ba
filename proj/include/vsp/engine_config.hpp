#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "vsp/ensemble.hpp"
#include "vsp/normalizer.hpp"
#include "vsp/retrieve.hpp"

namespace vsp {

inline constexpr std::string_view kDefaultRephrase = "I did not understand, could you rephrase?";

/// Asset paths and engine knobs, read from a JSON file. Relative paths are
/// resolved against the directory holding the file.
struct EngineConfig {
    std::filesystem::path stopwords;
    std::filesystem::path lemmas;
    std::filesystem::path spelling;
    std::filesystem::path concepts;
    std::filesystem::path rules;
    std::filesystem::path vectors;
    std::filesystem::path kb;
    std::filesystem::path ensemble;
    std::filesystem::path train_data;  // optional; used by `train`
    double tau = kDefaultRejectionThreshold;
    VoteMode vote_mode = VoteMode::max_prob;
    std::string rephrase{kDefaultRephrase};
    std::size_t max_len = kMaxTokens;
    std::uint64_t seed = 7;
    EnsembleConfig training;
    std::string cors_origin = "*";
    std::chrono::seconds session_ttl{2 * 60 * 60};
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::filesystem::path path)
        : std::runtime_error(what + ": " + path.string()), path_(std::move(path)) {}
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

EngineConfig load_engine_config(const std::filesystem::path& path);
EngineConfig engine_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Throws ConfigError naming the first missing asset or an out-of-range knob.
void validate_engine_config(const EngineConfig& cfg, bool require_ensemble = true);

NormalizerConfig load_normalizer(const EngineConfig& cfg);

}  // namespace vsp

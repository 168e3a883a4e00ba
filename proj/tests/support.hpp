#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

#include "vsp/normalizer.hpp"

namespace vsp_test {

inline std::filesystem::path source_dir() { return VSP_SOURCE_DIR; }
inline std::filesystem::path scenario_dir() { return source_dir() / "data" / "scenario"; }
inline std::filesystem::path scenario_config() { return scenario_dir() / "engine.json"; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(std::string_view tag = "vsp") {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                (std::string(tag) + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, std::string_view text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// The small table set used by hand-worked normalization examples.
inline vsp::NormalizerConfig fixture_normalizer() {
    vsp::NormalizerConfig cfg;
    cfg.stopwords = {"do", "you", "have", "the", "a", "did", "is", "how", "much", "what", "your", "any"};
    cfg.lemma_map = {{"urinating", "urinate"}, {"took", "take"}, {"taking", "take"}, {"pees", "pee"},
                     {"medications", "medication"}, {"struggled", "struggle"}, {"pains", "pain"}};
    cfg.spell_map = {{"urinatting", "urinating"}, {"paine", "pain"}};
    return cfg;
}

}  // namespace vsp_test

#include "vsp/engine_config.hpp"

#include "vsp/errors.hpp"

namespace vsp {

using nlohmann::json;

EngineConfig engine_config_from_json(const json& j, const std::filesystem::path& base_dir) {
    EngineConfig cfg;
    auto path = [&](const char* key, std::filesystem::path& out) {
        if (!j.contains(key)) return;
        std::filesystem::path p = j.at(key).get<std::string>();
        out = p.is_absolute() ? p : base_dir / p;
    };
    path("stopwords", cfg.stopwords);
    path("lemmas", cfg.lemmas);
    path("spelling", cfg.spelling);
    path("concepts", cfg.concepts);
    path("rules", cfg.rules);
    path("vectors", cfg.vectors);
    path("kb", cfg.kb);
    path("ensemble", cfg.ensemble);
    path("train_data", cfg.train_data);
    cfg.tau = j.value("tau", cfg.tau);
    if (j.contains("vote_mode")) {
        auto mode = parse_vote_mode(j.at("vote_mode").get<std::string>());
        if (!mode) throw ParseError("unknown vote_mode " + j.at("vote_mode").dump());
        cfg.vote_mode = *mode;
    }
    cfg.rephrase = j.value("rephrase", cfg.rephrase);
    cfg.max_len = j.value("max_len", cfg.max_len);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.cors_origin = j.value("cors_origin", cfg.cors_origin);
    cfg.session_ttl = std::chrono::seconds(j.value("session_ttl_seconds", cfg.session_ttl.count()));
    if (j.contains("training")) cfg.training = ensemble_config_from_json(j.at("training"), cfg.training);
    cfg.training.vote_mode = cfg.vote_mode;
    cfg.training.convnet.max_len = cfg.max_len;
    return cfg;
}

EngineConfig load_engine_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed engine config (") + e.what() + ")", path);
    } catch (const std::runtime_error&) {
        throw ConfigError("cannot read engine config", path);
    }
    try {
        return engine_config_from_json(j, std::filesystem::absolute(path).parent_path());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed engine config (") + e.what() + ")", path);
    }
}

void validate_engine_config(const EngineConfig& cfg, bool require_ensemble) {
    auto require = [](const std::filesystem::path& p, const char* what) {
        if (p.empty()) throw ConfigError(std::string("engine config does not name the ") + what + " file", what);
        if (!std::filesystem::is_regular_file(p)) throw ConfigError(std::string("missing ") + what + " file", p);
    };
    require(cfg.stopwords, "stopwords");
    require(cfg.lemmas, "lemmas");
    require(cfg.spelling, "spelling");
    require(cfg.concepts, "concepts");
    require(cfg.rules, "rules");
    require(cfg.vectors, "vectors");
    require(cfg.kb, "kb");
    if (require_ensemble) require(cfg.ensemble, "ensemble");
    if (!(cfg.tau > 0.0 && cfg.tau < 2.0)) throw ConfigError("tau must lie in (0, 2)", "tau");
    if (cfg.max_len == 0) throw ConfigError("max_len must be positive", "max_len");
}

NormalizerConfig load_normalizer(const EngineConfig& cfg) {
    NormalizerConfig norm = load_normalizer_config(cfg.stopwords, cfg.lemmas, cfg.spelling);
    norm.max_len = cfg.max_len;
    return norm;
}

}  // namespace vsp

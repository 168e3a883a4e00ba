#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vsp/ensemble.hpp"
#include "vsp/errors.hpp"
#include "vsp/normalizer.hpp"

namespace vsp {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'V', 'S', 'P', 'E', 'N', 'S', 'M', 'B'};
constexpr std::uint32_t kArchiveVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}
std::uint64_t get_u64(std::string_view in, std::size_t pos) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]);
    return v;
}
std::uint32_t get_u32(std::string_view in, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]);
    return v;
}

json config_to_json(const EnsembleConfig& cfg) {
    return {
        {"submodels", cfg.submodels},
        {"train_fraction", cfg.train_fraction},
        {"min_support", cfg.min_support},
        {"vote_mode", to_string(cfg.vote_mode)},
        {"linear", {{"epochs", cfg.linear.epochs}, {"learning_rate", cfg.linear.learning_rate},
                    {"init_scale", cfg.linear.init_scale}}},
        {"convnet", {{"widths", cfg.convnet.widths}, {"maps", cfg.convnet.maps}, {"dropout", cfg.convnet.dropout},
                     {"learning_rate", cfg.convnet.learning_rate}, {"rho", cfg.convnet.rho},
                     {"epsilon", cfg.convnet.epsilon}, {"epochs", cfg.convnet.epochs},
                     {"batch_size", cfg.convnet.batch_size}, {"max_len", cfg.convnet.max_len}}},
    };
}

}  // namespace

EnsembleConfig ensemble_config_from_json(const nlohmann::json& j, EnsembleConfig cfg) {
    cfg.submodels = j.value("submodels", cfg.submodels);
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    cfg.min_support = j.value("min_support", cfg.min_support);
    if (j.contains("vote_mode")) {
        auto mode = parse_vote_mode(j.at("vote_mode").get<std::string>());
        if (!mode) throw ParseError("unknown vote_mode " + j.at("vote_mode").dump());
        cfg.vote_mode = *mode;
    }
    if (j.contains("linear")) {
        const auto& l = j.at("linear");
        cfg.linear.epochs = l.value("epochs", cfg.linear.epochs);
        cfg.linear.learning_rate = l.value("learning_rate", cfg.linear.learning_rate);
        cfg.linear.init_scale = l.value("init_scale", cfg.linear.init_scale);
    }
    if (j.contains("convnet")) {
        const auto& c = j.at("convnet");
        cfg.convnet.widths = c.value("widths", cfg.convnet.widths);
        cfg.convnet.maps = c.value("maps", cfg.convnet.maps);
        cfg.convnet.dropout = c.value("dropout", cfg.convnet.dropout);
        cfg.convnet.learning_rate = c.value("learning_rate", cfg.convnet.learning_rate);
        cfg.convnet.rho = c.value("rho", cfg.convnet.rho);
        cfg.convnet.epsilon = c.value("epsilon", cfg.convnet.epsilon);
        cfg.convnet.epochs = c.value("epochs", cfg.convnet.epochs);
        cfg.convnet.batch_size = c.value("batch_size", cfg.convnet.batch_size);
        cfg.convnet.max_len = c.value("max_len", cfg.convnet.max_len);
    }
    return cfg;
}

std::string serialize_ensemble(const Ensemble& ens) {
    json manifest;
    manifest["format"] = "vsp-ensemble";
    manifest["version"] = kArchiveVersion;
    manifest["dim"] = ens.dim;
    manifest["seed"] = ens.seed;
    manifest["config"] = config_to_json(ens.cfg);
    json alpha = json::object();
    for (Method m : kAllMethods)
        for (Category c : kAllCategories)
            alpha[std::string(to_string(m))][std::string(to_string(c))] =
                ens.alpha[static_cast<std::size_t>(m)][index_of(c)];
    manifest["alpha"] = alpha;
    json weights = json::object();
    for (const auto& [w, v] : ens.idf.weights) weights[w] = v;
    manifest["idf"] = {{"n_docs", ens.idf.n_docs}, {"default_weight", ens.idf.default_weight}, {"weights", weights}};

    std::string blocks;
    std::size_t offset = 0;
    json submodels = json::array();
    for (Method m : kAllMethods) {
        for (Category c : kAllCategories) {
            const auto& bc = ens.classifier(m, c);
            for (std::size_t k = 0; k < bc.submodels.size(); ++k) {
                const Submodel& sm = bc.submodels[k];
                json entry = {{"method", to_string(m)},
                              {"category", to_string(c)},
                              {"index", k},
                              {"seed", sm.seed},
                              {"validation_accuracy", sm.validation_accuracy}};
                const std::vector<double>* params = nullptr;
                if (const auto* lin = std::get_if<LinearModel>(&sm.model)) {
                    params = &lin->params;
                } else {
                    const auto& cnn = std::get<ConvNetModel>(sm.model);
                    entry["widths"] = cnn.widths();
                    entry["maps"] = cnn.maps();
                    params = &cnn.params();
                }
                entry["offset"] = offset;
                entry["count"] = params->size();
                for (double x : *params) put_u64(blocks, std::bit_cast<std::uint64_t>(x));
                offset += params->size();
                submodels.push_back(std::move(entry));
            }
        }
    }
    manifest["submodels"] = std::move(submodels);
    manifest["param_count"] = offset;

    const std::string manifest_text = manifest.dump();
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kArchiveVersion);
    put_u32(out, 0);
    put_u64(out, manifest_text.size());
    out += manifest_text;
    out += blocks;
    return out;
}

Ensemble deserialize_ensemble(std::string_view bytes) {
    constexpr std::size_t header = sizeof kMagic + 4 + 4 + 8;
    if (bytes.size() < header || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw ParseError("not an ensemble archive");
    const std::uint32_t version = get_u32(bytes, 8);
    if (version != kArchiveVersion) throw ParseError("unsupported archive version " + std::to_string(version));
    const std::uint64_t manifest_size = get_u64(bytes, 16);
    if (manifest_size > bytes.size() - header) throw ParseError("truncated archive manifest");
    json manifest;
    try {
        manifest = json::parse(bytes.substr(header, manifest_size));
    } catch (const json::exception& e) {
        throw ParseError(std::string("corrupt archive manifest: ") + e.what());
    }
    if (manifest.value("version", 0u) != kArchiveVersion) throw ParseError("manifest version mismatch");
    const std::string_view data = bytes.substr(header + manifest_size);
    const std::uint64_t param_count = manifest.at("param_count").get<std::uint64_t>();
    if (data.size() != param_count * 8) throw ParseError("archive parameter section has the wrong size");

    Ensemble ens;
    try {
        ens.dim = manifest.at("dim").get<std::size_t>();
        ens.seed = manifest.at("seed").get<std::uint64_t>();
        ens.cfg = ensemble_config_from_json(manifest.at("config"), EnsembleConfig{});
        for (Method m : kAllMethods)
            for (Category c : kAllCategories)
                ens.alpha[static_cast<std::size_t>(m)][index_of(c)] =
                    manifest.at("alpha").at(std::string(to_string(m))).at(std::string(to_string(c))).get<double>();
        const auto& idf = manifest.at("idf");
        ens.idf.n_docs = idf.at("n_docs").get<std::size_t>();
        ens.idf.default_weight = idf.at("default_weight").get<double>();
        for (const auto& [w, v] : idf.at("weights").items()) ens.idf.weights[w] = v.get<double>();

        for (Method m : kAllMethods)
            for (Category c : kAllCategories) {
                auto& bc = ens.classifiers[static_cast<std::size_t>(m)][index_of(c)];
                bc.method = m;
                bc.category = c;
            }
        for (const auto& entry : manifest.at("submodels")) {
            const auto method_name = entry.at("method").get<std::string>();
            const Method m = method_name == "convnet" ? Method::convnet : Method::linear;
            if (method_name != "convnet" && method_name != "linear") throw ParseError("unknown method " + method_name);
            const auto cat = parse_category(entry.at("category").get<std::string>());
            if (!cat) throw ParseError("unknown category in archive");
            const std::size_t offset = entry.at("offset").get<std::size_t>();
            const std::size_t count = entry.at("count").get<std::size_t>();
            if (offset + count > param_count) throw ParseError("parameter block out of range");
            std::vector<double> params(count);
            for (std::size_t i = 0; i < count; ++i) params[i] = std::bit_cast<double>(get_u64(data, (offset + i) * 8));

            Submodel sm;
            sm.seed = entry.at("seed").get<std::uint64_t>();
            sm.validation_accuracy = entry.at("validation_accuracy").get<double>();
            if (m == Method::linear) {
                LinearModel lin(ens.dim);
                if (lin.params.size() != count) throw ParseError("linear block has the wrong size");
                lin.params = std::move(params);
                sm.model = std::move(lin);
            } else {
                ConvNetModel cnn(ens.dim, entry.at("widths").get<std::vector<std::size_t>>(),
                                 entry.at("maps").get<std::size_t>());
                if (cnn.params().size() != count) throw ParseError("convnet block has the wrong size");
                cnn.params() = std::move(params);
                sm.model = std::move(cnn);
            }
            ens.classifiers[static_cast<std::size_t>(m)][index_of(*cat)].submodels.push_back(std::move(sm));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed archive manifest: ") + e.what());
    }
    return ens;
}

void save_ensemble(const Ensemble& ens, const std::filesystem::path& path) {
    const std::string bytes = serialize_ensemble(ens);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Ensemble load_ensemble(const std::filesystem::path& path) {
    try {
        return deserialize_ensemble(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError::in_file(path.string(), e);
    }
}

}  // namespace vsp

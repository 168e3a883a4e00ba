// vsp: train, augment, build-kb, eval, replay, chat and serve for the
// virtual patient dialogue engine.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vsp/augment.hpp"
#include "vsp/dialogue.hpp"
#include "vsp/engine_config.hpp"
#include "vsp/errors.hpp"
#include "vsp/evalharness.hpp"
#include "vsp/jsonl.hpp"
#include "vsp/service.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string default_config() {
    if (const char* env = std::getenv("VSP_CONFIG")) return env;
    return "engine.json";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json kb_record_json(const vsp::KbRecord& r) {
    return {{"question", r.question}, {"answer", r.answer}, {"category", vsp::to_string(r.category)}};
}

int cmd_train(const std::string& config_path, std::string data, std::string out, const std::string& alpha_out,
              std::optional<std::uint64_t> seed, std::size_t cv_folds, bool augment) {
    auto cfg = vsp::load_engine_config(config_path);
    vsp::validate_engine_config(cfg, false);
    const auto norm = vsp::load_normalizer(cfg);
    const auto store = vsp::load_vectors(cfg.vectors);
    const std::filesystem::path data_path = data.empty() ? cfg.train_data : std::filesystem::path(data);
    if (data_path.empty()) throw vsp::ConfigError("no training data given", "train_data");
    auto dataset = vsp::load_training_questions(data_path, norm);
    if (augment) {
        vsp::ConceptLexicon lexicon;
        vsp::load_rule_assets(cfg, norm, &lexicon);
        std::vector<vsp::LabeledQuestion> expanded;
        for (const auto& q : dataset)
            for (auto& v : vsp::expand(q.tokens, lexicon).variants) expanded.push_back({std::move(v), q.category});
        std::cerr << "augmented training set: " << dataset.size() << " -> " << expanded.size() << " questions\n";
        dataset = std::move(expanded);
    }
    const std::uint64_t s = seed.value_or(cfg.seed);

    if (cv_folds > 0) {
        const auto report = vsp::cross_validate(dataset, store, cfg.training, s, cv_folds);
        std::printf("%zu-fold accuracy: convnet %.2f%%  linear %.2f%%  combined %.2f%%\n", report.folds,
                    100.0 * report.method_accuracy[0], 100.0 * report.method_accuracy[1],
                    100.0 * report.combined_accuracy);
    }

    const auto ens = vsp::train_ensemble(dataset, store, cfg.training, s);
    const std::filesystem::path out_path = out.empty() ? cfg.ensemble : std::filesystem::path(out);
    if (out_path.empty()) throw vsp::ConfigError("no output archive given", "ensemble");
    vsp::save_ensemble(ens, out_path);

    json alpha = json::object();
    std::printf("%-22s %8s %8s\n", "category", "convnet", "linear");
    for (vsp::Category c : vsp::kAllCategories) {
        const double a_cnn = ens.alpha[0][vsp::index_of(c)];
        const double a_lin = ens.alpha[1][vsp::index_of(c)];
        std::printf("%-22s %8.4f %8.4f\n", std::string(vsp::to_string(c)).c_str(), a_cnn, a_lin);
        alpha[std::string(vsp::to_string(c))] = {{"convnet", a_cnn}, {"linear", a_lin}};
    }
    const std::filesystem::path alpha_path =
        alpha_out.empty() ? std::filesystem::path(out_path).replace_extension(".alpha.json") : std::filesystem::path(alpha_out);
    write_text(alpha_path, json{{"schema_version", 1}, {"seed", s}, {"alpha", alpha}}.dump(2) + "\n");
    std::cerr << "wrote " << out_path.string() << " (" << ens.submodel_count() << " submodels) and "
              << alpha_path.string() << "\n";
    return 0;
}

int cmd_augment(const std::string& config_path, const std::string& in, const std::string& out,
                const std::string& report_path, std::size_t max_variants) {
    auto cfg = vsp::load_engine_config(config_path);
    const auto norm = vsp::load_normalizer(cfg);
    vsp::ConceptLexicon lexicon;
    try {
        lexicon = vsp::parse_lexicon(vsp::read_file(cfg.concepts), norm);
    } catch (const vsp::ParseError& e) {
        throw vsp::ParseError::in_file(cfg.concepts.string(), e);
    }
    const auto corpus = vsp::augment_records(vsp::load_kb_records(in), norm, lexicon, max_variants);
    std::string text;
    for (const auto& r : corpus.records) text += kb_record_json(r).dump() + "\n";
    write_text(out, text);
    const std::string report = corpus.report.to_json().dump(2) + "\n";
    if (report_path.empty())
        std::cout << report;
    else
        write_text(report_path, report);
    std::cerr << corpus.report.input_count << " questions -> " << corpus.report.output_count << " variants\n";
    return 0;
}

int cmd_build_kb(const std::string& config_path, std::string in, const std::string& out, std::optional<double> tau) {
    auto cfg = vsp::load_engine_config(config_path);
    const auto norm = vsp::load_normalizer(cfg);
    const auto store = vsp::load_vectors(cfg.vectors);
    const auto kb = vsp::build_kb(vsp::load_kb_records(in.empty() ? cfg.kb : std::filesystem::path(in)), norm, store,
                                  tau.value_or(cfg.tau));
    for (vsp::Category c : vsp::kAllCategories)
        std::printf("%-22s %6zu\n", std::string(vsp::to_string(c)).c_str(), kb.partition(c).size());
    for (const auto& s : kb.skipped())
        std::printf("skipped line %zu (%s): %s\n", s.line, s.reason.c_str(), s.question.c_str());
    if (!out.empty()) vsp::save_kb(kb, out);
    return 0;
}

int cmd_eval(const std::vector<std::string>& transcripts, const std::string& out, const std::string& prefill,
             const std::string& prefill_out, const std::string& config_path) {
    if (!prefill.empty()) {
        const auto engine = vsp::Engine::load(vsp::load_engine_config(config_path));
        vsp::Session session("prefill");
        std::string text;
        vsp::for_each_jsonl_file(prefill, [&](const json& j, std::size_t) {
            const auto q = j.at("question").get<std::string>();
            const auto resp = engine->handle(session, q);
            text += json{{"question", q}, {"system_response", resp.text}, {"path", vsp::to_string(resp.path)},
                         {"label", nullptr}}
                        .dump() +
                    "\n";
        });
        if (prefill_out.empty())
            std::cout << text;
        else
            write_text(prefill_out, text);
        if (transcripts.empty()) return 0;
    }
    if (transcripts.empty()) throw CLI::ValidationError("--transcript", "at least one transcript is required");

    std::vector<vsp::NamedReport> rows;
    for (const auto& spec : transcripts) {
        std::string name, path = spec;
        if (auto eq = spec.find('='); eq != std::string::npos) {
            name = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            name = std::filesystem::path(spec).stem().string();
        }
        rows.emplace_back(name, vsp::score(vsp::load_transcript(path)));
    }
    std::cout << vsp::render_table(rows);
    for (const auto& c : vsp::compare_to_baseline(rows))
        if (c.f1_delta)
            std::printf("%s vs %s: F1 %+.2f points, error reduction %.2f%%\n", c.system.c_str(), c.baseline.c_str(),
                        *c.f1_delta, c.error_reduction.value_or(0.0));
    if (!out.empty()) write_text(out, vsp::comparison_report(rows).dump(2) + "\n");
    return 0;
}

int cmd_replay(const std::string& config_path, const std::string& file, const std::string& out) {
    const auto engine = vsp::Engine::load(vsp::load_engine_config(config_path));
    const auto outcomes = vsp::run_replay(*engine, vsp::load_replay(file));
    std::size_t failures = 0;
    std::string text;
    for (const auto& o : outcomes) {
        json line = o.response.to_json();
        line["question"] = o.entry.question;
        text += line.dump() + "\n";
        if (o.ok()) continue;
        ++failures;
        std::printf("turn %zu FAILED: %s\n  got [%s] %s\n", o.response.turn_index, o.entry.question.c_str(),
                    std::string(vsp::to_string(o.response.path)).c_str(), o.response.text.c_str());
        if (o.entry.expected_path || o.entry.expected_answer)
            std::printf("  expected [%s] %s\n",
                        o.entry.expected_path ? std::string(vsp::to_string(*o.entry.expected_path)).c_str() : "*",
                        o.entry.expected_answer.value_or("*").c_str());
    }
    if (!out.empty()) write_text(out, text);
    std::printf("%zu/%zu turns as expected\n", outcomes.size() - failures, outcomes.size());
    return failures == 0 ? 0 : kExitRuntime;
}

int cmd_chat(const std::string& config_path) {
    const auto engine = vsp::Engine::load(vsp::load_engine_config(config_path));
    vsp::Session session(vsp::new_session_id());
    std::string line;
    std::cout << "> " << std::flush;
    while (std::getline(std::cin, line)) {
        if (line == "/quit" || line == "/exit") break;
        if (!line.empty()) {
            const auto resp = engine->handle(session, line);
            std::cout << "[" << vsp::to_string(resp.path) << "] " << resp.text << "\n";
        }
        std::cout << "> " << std::flush;
    }
    std::cout << "\n";
    return 0;
}

int cmd_serve(const std::string& config_path, const std::string& host, int port) {
    const auto cfg = vsp::load_engine_config(config_path);
    const auto engine = vsp::Engine::load(cfg);
    vsp::SessionStore sessions(cfg.session_ttl);
    std::cerr << "serving on http://" << host << ":" << port << "\n";
    if (!vsp::run_service(*engine, sessions, {cfg.cors_origin}, host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitRuntime;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual standardized patient dialogue engine"};
    app.require_subcommand(1);
    std::string config = default_config();

    auto* train = app.add_subcommand("train", "Train the classifier ensemble");
    std::string train_data, train_out, alpha_out;
    std::optional<std::uint64_t> seed;
    std::size_t cv_folds = 0;
    bool train_augment = false;
    train->add_option("--config", config, "Engine config JSON");
    train->add_option("--data", train_data, "Labeled questions (JSONL); defaults to train_data in the config");
    train->add_option("--out", train_out, "Ensemble archive; defaults to ensemble in the config");
    train->add_option("--alpha-out", alpha_out, "Validation coefficient table (JSON)");
    train->add_option("--seed", seed, "Training seed; defaults to the config seed");
    train->add_option("--cv", cv_folds, "Also report k-fold cross-validation accuracy");
    train->add_flag("--augment", train_augment, "Expand training questions through the concept lexicon");

    auto* augment = app.add_subcommand("augment", "Expand a question corpus with concept synonyms");
    std::string aug_in, aug_out, aug_report;
    std::size_t max_variants = vsp::kDefaultMaxVariants;
    augment->add_option("--config", config, "Engine config JSON");
    augment->add_option("--in", aug_in, "Input KB-format JSONL")->required();
    augment->add_option("--out", aug_out, "Augmented JSONL")->required();
    augment->add_option("--report", aug_report, "Report JSON (stdout when omitted)");
    augment->add_option("--max-variants", max_variants, "Cap on variants per question");

    auto* build_kb = app.add_subcommand("build-kb", "Normalize and vectorize a knowledge base");
    std::string kb_in, kb_out;
    std::optional<double> tau;
    build_kb->add_option("--config", config, "Engine config JSON");
    build_kb->add_option("--in", kb_in, "KB JSONL; defaults to kb in the config");
    build_kb->add_option("--out", kb_out, "Write the vectorized index (JSON)");
    build_kb->add_option("--tau", tau, "Rejection threshold");

    auto* eval = app.add_subcommand("eval", "Score annotated transcripts");
    std::vector<std::string> transcripts;
    std::string eval_out, prefill, prefill_out;
    eval->add_option("--transcript", transcripts, "Annotated JSONL, optionally as name=path (repeatable)");
    eval->add_option("--out", eval_out, "Report JSON");
    eval->add_option("--prefill", prefill, "Questions JSONL to answer with the engine for annotators");
    eval->add_option("--prefill-out", prefill_out, "Where to write the prefilled transcript");
    eval->add_option("--config", config, "Engine config JSON (for --prefill)");

    auto* replay = app.add_subcommand("replay", "Run a replay file and check expected paths and answers");
    std::string replay_file, replay_out;
    replay->add_option("--config", config, "Engine config JSON");
    replay->add_option("--file", replay_file, "Replay JSONL")->required();
    replay->add_option("--out", replay_out, "Write the produced transcript (JSONL)");

    auto* chat = app.add_subcommand("chat", "Interactive session on the terminal");
    chat->add_option("--config", config, "Engine config JSON");

    auto* serve = app.add_subcommand("serve", "HTTP chat service");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--config", config, "Engine config JSON");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*train) return cmd_train(config, train_data, train_out, alpha_out, seed, cv_folds, train_augment);
        if (*augment) return cmd_augment(config, aug_in, aug_out, aug_report, max_variants);
        if (*build_kb) return cmd_build_kb(config, kb_in, kb_out, tau);
        if (*eval) return cmd_eval(transcripts, eval_out, prefill, prefill_out, config);
        if (*replay) return cmd_replay(config, replay_file, replay_out);
        if (*chat) return cmd_chat(config);
        if (*serve) return cmd_serve(config, host, port);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

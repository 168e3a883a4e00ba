#include "vsp/dialogue.hpp"

#include "vsp/errors.hpp"
#include "vsp/jsonl.hpp"

namespace vsp {

using nlohmann::json;

std::string_view to_string(AnswerPath p) {
    switch (p) {
        case AnswerPath::rule: return "rule";
        case AnswerPath::similarity: return "similarity";
        case AnswerPath::rephrase: return "rephrase";
    }
    return "rephrase";
}

std::optional<AnswerPath> parse_answer_path(std::string_view s) {
    if (s == "rule") return AnswerPath::rule;
    if (s == "similarity") return AnswerPath::similarity;
    if (s == "rephrase") return AnswerPath::rephrase;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trace

json ResponseTrace::to_json() const {
    json j = {{"tokens", tokens}, {"n_known", n_known}, {"tau", tau}};
    if (rule_id) {
        j["rule_id"] = *rule_id;
        j["topic"] = to_string(*rule_topic);
        j["rejoinder"] = rejoinder;
    }
    if (!skipped_rules.empty()) j["skipped_rules"] = skipped_rules;
    if (scores) {
        json s = json::array();
        for (Category c : kAllCategories) s.push_back({{"category", to_string(c)}, {"score", scores->scores[index_of(c)]}});
        j["scores"] = std::move(s);
        j["category"] = to_string(scores->winner);
        json per_method = json::object();
        for (Method m : kAllMethods) per_method[std::string(to_string(m))] = scores->per_method[static_cast<std::size_t>(m)];
        j["method_outputs"] = std::move(per_method);
    }
    if (kb_question) j["kb_question"] = *kb_question;
    if (distance) j["distance"] = *distance;
    if (!reason.empty()) j["reason"] = reason;
    return j;
}

ResponseTrace ResponseTrace::from_json(const json& j) {
    ResponseTrace t;
    t.tokens = j.at("tokens").get<std::vector<std::string>>();
    t.n_known = j.at("n_known").get<std::size_t>();
    t.tau = j.at("tau").get<double>();
    if (j.contains("rule_id")) {
        t.rule_id = j.at("rule_id").get<std::string>();
        t.rule_topic = parse_category(j.at("topic").get<std::string>());
        t.rejoinder = j.value("rejoinder", false);
    }
    if (j.contains("skipped_rules")) t.skipped_rules = j.at("skipped_rules").get<std::vector<std::string>>();
    if (j.contains("scores")) {
        CategoryScores s;
        for (const auto& item : j.at("scores")) {
            const auto c = parse_category(item.at("category").get<std::string>());
            if (!c) throw ParseError("unknown category in trace");
            s.scores[index_of(*c)] = item.at("score").get<double>();
        }
        if (auto c = parse_category(j.at("category").get<std::string>())) s.winner = *c;
        if (j.contains("method_outputs"))
            for (Method m : kAllMethods) {
                const auto v = j.at("method_outputs").at(std::string(to_string(m))).get<std::vector<double>>();
                std::copy_n(v.begin(), std::min(v.size(), kCategoryCount), s.per_method[static_cast<std::size_t>(m)].begin());
            }
        t.scores = s;
    }
    if (j.contains("kb_question")) t.kb_question = j.at("kb_question").get<std::string>();
    if (j.contains("distance")) t.distance = j.at("distance").get<double>();
    t.reason = j.value("reason", std::string{});
    return t;
}

json DialogueResponse::to_json() const {
    return {{"answer", text}, {"path", to_string(path)}, {"trace", trace.to_json()}, {"turn", turn_index}};
}

AnswerPath infer_path(const ResponseTrace& t) {
    if (t.rule_id) return AnswerPath::rule;
    if (t.tokens.empty() || t.n_known == 0 || !t.scores) return AnswerPath::rephrase;
    std::size_t winner = 0;
    for (std::size_t c = 1; c < kCategoryCount; ++c)
        if (t.scores->scores[c] > t.scores->scores[winner]) winner = c;
    if (static_cast<Category>(winner) == Category::unknown) return AnswerPath::rephrase;
    if (!t.distance || !t.kb_question) return AnswerPath::rephrase;
    return *t.distance <= t.tau ? AnswerPath::similarity : AnswerPath::rephrase;
}

// ---------------------------------------------------------------------------
// Engine

Engine::Engine(NormalizerConfig norm, ConceptLexicon lexicon, RuleSet rules, VectorStore store, Ensemble ensemble,
               KnowledgeBase kb, std::string rephrase)
    : norm_(std::move(norm)),
      lexicon_(std::move(lexicon)),
      rules_(std::move(rules)),
      store_(std::move(store)),
      ensemble_(std::move(ensemble)),
      kb_(std::move(kb)),
      rephrase_(std::move(rephrase)) {
    if (ensemble_.dim != store_.dim())
        throw std::invalid_argument("ensemble was trained on " + std::to_string(ensemble_.dim) +
                                    "-dimensional vectors but the store has " + std::to_string(store_.dim()));
}

DialogueResponse Engine::answer(SessionMemory& memory, std::string_view question) const {
    DialogueResponse resp;
    ResponseTrace& trace = resp.trace;
    trace.tau = kb_.tau();
    trace.tokens = normalize(question, norm_).tokens;
    auto rephrase = [&](std::string reason) {
        resp.path = AnswerPath::rephrase;
        resp.text = rephrase_;
        trace.reason = std::move(reason);
        return resp;
    };
    if (trace.tokens.empty()) return rephrase("empty");

    ++stats_.rule_scans;
    if (auto m = match(rules_, memory, trace.tokens)) {
        resp.path = AnswerPath::rule;
        resp.text = std::move(m->response);
        trace.rule_id = m->rule_id;
        trace.rule_topic = m->topic;
        trace.rejoinder = m->rejoinder;
        trace.skipped_rules = std::move(m->skipped);
        return resp;
    }

    const SentenceVector probe = kb_.vectorize(trace.tokens, store_);
    trace.n_known = probe.n_known;
    if (probe.n_known == 0) return rephrase("oov");

    ++stats_.classifier_calls;
    const auto input = prepare_input(trace.tokens, store_, ensemble_.idf, norm_.max_len);
    trace.scores = ensemble_predict(ensemble_, input);
    const Category winner = trace.scores->winner;
    if (winner == Category::unknown) return rephrase("unknown_category");

    ++stats_.retrieval_calls;
    const auto best = kb_.closest(winner, probe);
    if (!best) return rephrase("empty_partition");
    trace.kb_question = best->entry->question;
    trace.distance = best->distance;
    if (best->distance > kb_.tau()) return rephrase("rejected");
    resp.path = AnswerPath::similarity;
    resp.text = best->entry->answer;
    return resp;
}

DialogueResponse Engine::handle(Session& session, std::string_view question) const {
    SessionMemory memory = session.memory;
    DialogueResponse resp = answer(memory, question);
    if (resp.path != AnswerPath::rule) memory.followup_open = false;
    resp.turn_index = session.transcript.size();
    session.memory = std::move(memory);
    session.transcript.push_back({std::string(question), resp});
    return resp;
}

RuleSet load_rule_assets(const EngineConfig& cfg, const NormalizerConfig& norm, ConceptLexicon* lexicon_out) {
    ConceptLexicon lexicon;
    try {
        lexicon = parse_lexicon(read_file(cfg.concepts), norm);
    } catch (const ParseError& e) {
        throw ParseError::in_file(cfg.concepts.string(), e);
    }
    RuleSet rules;
    try {
        rules = parse_rules(read_file(cfg.rules), lexicon, norm);
    } catch (const ParseError& e) {
        throw ParseError::in_file(cfg.rules.string(), e);
    }
    if (lexicon_out) *lexicon_out = std::move(lexicon);
    return rules;
}

std::unique_ptr<Engine> Engine::load(const EngineConfig& cfg) {
    validate_engine_config(cfg, true);
    NormalizerConfig norm = load_normalizer(cfg);
    ConceptLexicon lexicon;
    RuleSet rules = load_rule_assets(cfg, norm, &lexicon);
    VectorStore store = load_vectors(cfg.vectors);
    Ensemble ensemble = load_ensemble(cfg.ensemble);
    ensemble.cfg.vote_mode = cfg.vote_mode;
    KnowledgeBase kb = build_kb(load_kb_records(cfg.kb), norm, store, cfg.tau);
    return std::make_unique<Engine>(std::move(norm), std::move(lexicon), std::move(rules), std::move(store),
                                    std::move(ensemble), std::move(kb), cfg.rephrase);
}

std::vector<LabeledQuestion> load_training_questions(const std::filesystem::path& path, const NormalizerConfig& norm) {
    std::vector<LabeledQuestion> out;
    for_each_jsonl_file(path, [&](const json& j, std::size_t line) {
        const auto name = j.at("category").get<std::string>();
        const auto cat = parse_category(name);
        if (!cat) throw ParseError("unknown category '" + name + "'", line);
        out.push_back({normalize(j.at("question").get<std::string>(), norm).tokens, *cat});
    });
    return out;
}

// ---------------------------------------------------------------------------
// Replay

std::vector<ReplayEntry> parse_replay(std::string_view jsonl) {
    std::vector<ReplayEntry> out;
    for_each_jsonl(jsonl, [&](const json& j, std::size_t line) {
        ReplayEntry e;
        e.question = j.at("question").get<std::string>();
        if (j.contains("expected_path") && !j.at("expected_path").is_null()) {
            const auto name = j.at("expected_path").get<std::string>();
            e.expected_path = parse_answer_path(name);
            if (!e.expected_path) throw ParseError("unknown path '" + name + "'", line);
        }
        if (j.contains("expected_answer") && !j.at("expected_answer").is_null())
            e.expected_answer = j.at("expected_answer").get<std::string>();
        out.push_back(std::move(e));
    });
    return out;
}

std::vector<ReplayEntry> load_replay(const std::filesystem::path& path) {
    try {
        return parse_replay(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError::in_file(path.string(), e);
    }
}

std::vector<ReplayOutcome> run_replay(const Engine& engine, const std::vector<ReplayEntry>& entries) {
    Session session("replay");
    std::vector<ReplayOutcome> out;
    for (const auto& e : entries) {
        ReplayOutcome o;
        o.entry = e;
        o.response = engine.handle(session, e.question);
        o.path_ok = !e.expected_path || *e.expected_path == o.response.path;
        o.answer_ok = !e.expected_answer || *e.expected_answer == o.response.text;
        o.trace_consistent = infer_path(ResponseTrace::from_json(o.response.trace.to_json())) == o.response.path;
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace vsp

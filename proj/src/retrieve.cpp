#include "vsp/retrieve.hpp"

#include <fstream>
#include <stdexcept>

#include "vsp/errors.hpp"
#include "vsp/jsonl.hpp"

namespace vsp {

using nlohmann::json;

std::vector<KbRecord> parse_kb_records(std::string_view text) {
    std::vector<KbRecord> out;
    for_each_jsonl(text, [&](const json& j, std::size_t line) {
        KbRecord r;
        r.question = j.at("question").get<std::string>();
        r.answer = j.at("answer").get<std::string>();
        const auto name = j.at("category").get<std::string>();
        const auto cat = parse_category(name);
        if (!cat) throw ParseError("unknown category '" + name + "'", line);
        r.category = *cat;
        r.line = line;
        out.push_back(std::move(r));
    });
    if (out.empty()) throw ParseError("knowledge base file has no records");
    return out;
}

std::vector<KbRecord> load_kb_records(const std::filesystem::path& path) {
    try {
        return parse_kb_records(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError::in_file(path.string(), e);
    }
}

KnowledgeBase::KnowledgeBase(IdfTable idf, double tau) : idf_(std::move(idf)), tau_(tau) {
    if (!(tau > 0.0 && tau < 2.0)) throw std::invalid_argument("rejection threshold must lie in (0, 2)");
}

std::size_t KnowledgeBase::size() const {
    std::size_t n = 0;
    for (const auto& p : partitions_) n += p.size();
    return n;
}

void KnowledgeBase::add(KnowledgeEntry entry) {
    if (entry.qvec.n_known == 0) throw std::invalid_argument("knowledge entry has no embeddable token");
    partitions_[index_of(entry.category)].push_back(std::move(entry));
}

SentenceVector KnowledgeBase::vectorize(const std::vector<std::string>& tokens, const VectorStore& store) const {
    return sentence_vector(tokens, store, idf_);
}

std::optional<Neighbor> KnowledgeBase::closest(Category cat, const SentenceVector& q) const {
    if (q.n_known == 0) throw UndefinedDistance("probe has no known token");
    std::optional<Neighbor> best;
    for (const auto& e : partitions_[index_of(cat)]) {
        const double d = distance(q, e.qvec);
        if (!best || d < best->distance) best = Neighbor{&e, d};
    }
    return best;
}

std::optional<Neighbor> KnowledgeBase::nearest(Category cat, const SentenceVector& q, double tau) const {
    auto best = closest(cat, q);
    if (best && best->distance > tau) return std::nullopt;
    return best;
}

std::optional<Neighbor> KnowledgeBase::nearest(Category cat, const SentenceVector& q) const {
    return nearest(cat, q, tau_);
}

json KnowledgeBase::to_json() const {
    json weights = json::object();
    for (const auto& [w, v] : idf_.weights) weights[w] = v;
    json entries = json::array();
    for (const auto& part : partitions_)
        for (const auto& e : part)
            entries.push_back({{"question", e.question},
                               {"answer", e.answer},
                               {"category", to_string(e.category)},
                               {"tokens", e.tokens},
                               {"qvec", e.qvec.v},
                               {"n_known", e.qvec.n_known}});
    json skipped = json::array();
    for (const auto& s : skipped_) skipped.push_back({{"line", s.line}, {"question", s.question}, {"reason", s.reason}});
    return {{"schema_version", 1},
            {"tau", tau_},
            {"idf", {{"n_docs", idf_.n_docs}, {"default_weight", idf_.default_weight}, {"weights", weights}}},
            {"entries", entries},
            {"skipped", skipped}};
}

KnowledgeBase KnowledgeBase::from_json(const json& j) {
    IdfTable idf;
    const auto& ji = j.at("idf");
    idf.n_docs = ji.at("n_docs").get<std::size_t>();
    idf.default_weight = ji.at("default_weight").get<double>();
    for (const auto& [w, v] : ji.at("weights").items()) idf.weights[w] = v.get<double>();
    KnowledgeBase kb(std::move(idf), j.at("tau").get<double>());
    for (const auto& je : j.at("entries")) {
        KnowledgeEntry e;
        e.question = je.at("question").get<std::string>();
        e.answer = je.at("answer").get<std::string>();
        const auto cat = parse_category(je.at("category").get<std::string>());
        if (!cat) throw ParseError("unknown category in knowledge base index");
        e.category = *cat;
        e.tokens = je.at("tokens").get<std::vector<std::string>>();
        e.qvec.v = je.at("qvec").get<std::vector<double>>();
        e.qvec.n_known = je.at("n_known").get<std::size_t>();
        kb.add(std::move(e));
    }
    for (const auto& js : j.value("skipped", json::array()))
        kb.note_skipped({js.at("line").get<std::size_t>(), js.at("question").get<std::string>(),
                         js.at("reason").get<std::string>()});
    return kb;
}

KnowledgeBase build_kb(const std::vector<KbRecord>& records, const NormalizerConfig& norm,
                       const VectorStore& store, const IdfTable& idf, double tau) {
    if (records.empty()) throw std::invalid_argument("knowledge base needs at least one record");
    KnowledgeBase kb(idf, tau);
    for (const auto& r : records) {
        KnowledgeEntry e;
        e.question = r.question;
        e.answer = r.answer;
        e.category = r.category;
        e.tokens = normalize(r.question, norm).tokens;
        e.qvec = kb.vectorize(e.tokens, store);
        if (e.qvec.n_known == 0) {
            kb.note_skipped({r.line, r.question, e.tokens.empty() ? "no content words" : "all words out of vocabulary"});
            continue;
        }
        kb.add(std::move(e));
    }
    return kb;
}

KnowledgeBase build_kb(const std::vector<KbRecord>& records, const NormalizerConfig& norm,
                       const VectorStore& store, double tau) {
    if (records.empty()) throw std::invalid_argument("knowledge base needs at least one record");
    std::vector<std::vector<std::string>> corpus;
    for (const auto& r : records) corpus.push_back(normalize(r.question, norm).tokens);
    return build_kb(records, norm, store, compute_idf(corpus), tau);
}

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kb.to_json().dump() << '\n';
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
    try {
        return KnowledgeBase::from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": malformed knowledge base index: " + e.what());
    }
}

}  // namespace vsp

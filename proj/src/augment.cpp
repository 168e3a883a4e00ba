#include "vsp/augment.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "vsp/errors.hpp"

namespace vsp {

Expansion expand(const std::vector<std::string>& tokens, const ConceptLexicon& lexicon, std::size_t max_variants) {
    struct Slot {
        std::size_t position;
        std::vector<std::string> members;
    };
    std::vector<Slot> slots;
    Expansion out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto owners = lexicon.concepts_of(tokens[i]);
        if (owners.size() > 1) {
            std::string names;
            for (const auto& o : owners) names += (names.empty() ? "" : ", ") + o;
            throw AmbiguityError("'" + tokens[i] + "' belongs to several concepts: " + names);
        }
        if (owners.empty()) continue;
        const auto& members = lexicon.members(owners.front());
        slots.push_back({i, {members.begin(), members.end()}});
        const std::size_t n = members.size();
        out.product = out.product > std::numeric_limits<std::size_t>::max() / n ? std::numeric_limits<std::size_t>::max()
                                                                                  : out.product * n;
    }

    const std::size_t cap = std::max<std::size_t>(max_variants, 1);
    std::set<std::vector<std::string>> variants;
    std::vector<std::size_t> choice(slots.size(), 0);
    std::vector<std::string> current = tokens;
    for (;;) {
        for (std::size_t s = 0; s < slots.size(); ++s) current[slots[s].position] = slots[s].members[choice[s]];
        variants.insert(current);
        if (variants.size() == cap) break;
        std::size_t s = slots.size();
        while (s > 0 && ++choice[s - 1] == slots[s - 1].members.size()) choice[--s] = 0;
        if (s == 0) break;
    }
    out.truncated = variants.size() < out.product;
    if (!variants.contains(tokens)) {
        variants.erase(std::prev(variants.end()));
        variants.insert(tokens);
    }
    out.variants.assign(variants.begin(), variants.end());
    return out;
}

nlohmann::json AugmentationReport::to_json() const {
    return {{"input_count", input_count}, {"output_count", output_count}, {"factors", factors}, {"truncated", truncated}};
}

AugmentedCorpus augment_records(const std::vector<KbRecord>& records, const NormalizerConfig& norm,
                                const ConceptLexicon& lexicon, std::size_t max_variants) {
    AugmentedCorpus out;
    out.report.input_count = records.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const KbRecord& r = records[i];
        const auto tokens = normalize(r.question, norm).tokens;
        Expansion ex;
        try {
            ex = expand(tokens, lexicon, max_variants);
        } catch (const AmbiguityError& e) {
            throw AmbiguityError("record at line " + std::to_string(r.line) + ": " + e.what());
        }
        out.records.push_back(r);
        for (const auto& v : ex.variants) {
            if (v == tokens) continue;
            KbRecord extra = r;
            extra.question = join_tokens(v);
            out.records.push_back(std::move(extra));
        }
        out.report.factors.push_back(ex.variants.size());
        out.report.output_count += ex.variants.size();
        if (ex.truncated) out.report.truncated.push_back(i);
    }
    return out;
}

}  // namespace vsp

// Acceptance report: one PASS / FAIL / SUBSTITUTED line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "classify_fixtures.hpp"
#include "engine_fixture.hpp"
#include "vsp/augment.hpp"
#include "vsp/convnet.hpp"
#include "vsp/evalharness.hpp"
#include "vsp/linear_model.hpp"

using namespace vsp;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

int g_failures = 0;

void report(const char* name, const std::function<Outcome()>& body, double budget_seconds) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && secs >= budget_seconds) o.require(false, "over time budget");
    if (!o.pass) ++g_failures;
    std::printf("%-4s  %-28s %7.3fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
}

std::vector<AnnotatedTurn> synthetic(std::size_t c, std::size_t i, std::size_t n) {
    std::vector<AnnotatedTurn> out;
    out.insert(out.end(), c, {"q", "a", Label::coherent});
    out.insert(out.end(), i, {"q", "a", Label::incoherent});
    out.insert(out.end(), n, {"q", "I did not understand", Label::not_recognized});
    return out;
}

bool near(std::optional<double> v, double target, double tol) { return v && std::abs(*v - target) <= tol; }

Outcome metric_reproduction() {
    Outcome o;
    // label counts whose shares equal the reference rates
    const auto rules = score(synthetic(8781, 249, 970));
    o.require(near(rules.precision, 97.24, 0.02) && near(rules.recall, 87.81, 0.02) && near(rules.f1, 92.29, 0.02),
              "test-session rules row");
    // 94.88 + 5.11 sums to 99.99, hence 9999 turns
    const auto combined = score(synthetic(9488, 511, 0));
    o.require(near(combined.precision, 94.88, 0.02) && near(combined.recall, 94.88, 0.02) &&
                  near(combined.f1, 94.88, 0.02),
              "combined row");
    const auto domain = score(synthetic(7079, 149, 2772));
    o.require(near(domain.precision, 97.95, 0.02) && near(domain.f1, 82.18, 0.02), "out-of-domain rules row");
    char buf[160];
    std::snprintf(buf, sizeof buf, "F1 %.2f / %.2f / %.2f", *rules.f1, *combined.f1, *domain.f1);
    if (o.pass) o.detail = buf;
    return o;
}

// Direct transcription of the combination: per-method max over submodels,
// weighted sum with alpha, softmax, argmax.
struct OracleResult {
    std::vector<double> scores;
    std::size_t winner;
};

OracleResult algorithm1(const SubmodelOutputs& y, const std::vector<std::vector<double>>& alpha) {
    const std::size_t cats = y[0].size();
    std::vector<double> s(cats, 0.0);
    for (std::size_t c = 0; c < cats; ++c)
        for (std::size_t e = 0; e < y.size(); ++e) {
            double yc = y[e][c][0];
            for (double p : y[e][c]) yc = p > yc ? p : yc;
            s[c] += alpha[e][c] * yc;
        }
    double total = 0.0;
    std::vector<double> ex(cats);
    for (std::size_t c = 0; c < cats; ++c) total += ex[c] = std::exp(s[c]);
    for (auto& v : ex) v /= total;
    std::size_t w = 0;
    for (std::size_t c = 1; c < cats; ++c)
        if (ex[c] > ex[w]) w = c;
    return {ex, w};
}

Outcome algorithm1_oracle() {
    Outcome o;
    const std::vector<double> levels{0.1, 0.5, 0.9};
    const std::vector<std::vector<double>> alpha{{0.9, 0.6, 0.75}, {0.8, 0.95, 0.7}};
    constexpr std::size_t k = 3 * 2 * 2;
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= levels.size();
    SubmodelOutputs y(2, std::vector<std::vector<double>>(3, std::vector<double>(2)));
    std::size_t mismatches = 0;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (std::size_t e = 0; e < 2; ++e)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t m = 0; m < 2; ++m) {
                    y[e][c][m] = levels[rest % 3];
                    rest /= 3;
                }
        const auto got = combine_outputs(y, alpha, VoteMode::max_prob);
        const auto want = algorithm1(y, alpha);
        if (got.scores != want.scores || got.winner != want.winner) ++mismatches;
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " enumerations differ");

    // the full predictor against the oracle on a trained seven-category ensemble
    const auto corpus = vsp_test::toy_corpus(10);
    const auto ens = train_ensemble(corpus.questions, corpus.store, vsp_test::toy_config(), 3);
    std::vector<std::vector<double>> full_alpha(2);
    for (std::size_t e = 0; e < 2; ++e) full_alpha[e].assign(ens.alpha[e].begin(), ens.alpha[e].end());
    std::size_t predict_mismatches = 0;
    for (const auto& q : corpus.questions) {
        const auto in = prepare_input(q.tokens, corpus.store, ens.idf, 50);
        const auto got = ensemble_predict(ens, in, VoteMode::max_prob);
        const auto want = algorithm1(submodel_outputs(ens, in), full_alpha);
        if (!std::equal(want.scores.begin(), want.scores.end(), got.scores.begin()) ||
            index_of(got.winner) != want.winner)
            ++predict_mismatches;
    }
    o.require(predict_mismatches == 0, std::to_string(predict_mismatches) + " predictions differ");
    if (o.pass) o.detail = std::to_string(total) + " enumerations, " + std::to_string(corpus.questions.size()) +
                           " predictions bit-identical";
    return o;
}

double reference_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

Outcome distance_oracle() {
    Outcome o;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t dim = 1 + rng() % 300;
        std::vector<double> a(dim), b(dim);
        for (auto& x : a) x = n(rng);
        for (auto& x : b) x = n(rng);
        const double d = distance(a, b);
        worst = std::max(worst, std::abs(d - reference_distance(a, b)));
        o.require(d == distance(b, a), "symmetry");
        o.require(d >= 0.0 && d <= 2.0, "range");
        o.require(std::abs(distance(a, a)) <= 1e-12, "self-distance");
        auto sa = a;
        const double s = scale(rng);
        for (auto& x : sa) x *= s;
        o.require(std::abs(distance(sa, b) - d) <= 1e-12, "scale invariance");
    }
    o.require(worst <= 1e-12, "reference mismatch");
    if (o.pass) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "1000 pairs, max |diff| %.1e", worst);
        o.detail = buf;
    }
    return o;
}

Outcome retrieval_oracle() {
    Outcome o;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    VectorStore store(16);
    for (int w = 0; w < 200; ++w) {
        std::vector<double> v(16);
        for (auto& x : v) x = n(rng);
        store.set("w" + std::to_string(w), v);
    }
    auto phrase = [&] {
        std::string q;
        for (std::size_t i = 0, len = 1 + rng() % 6; i < len; ++i) q += " w" + std::to_string(rng() % 200);
        return q;
    };
    std::vector<KbRecord> recs;
    for (int i = 0; i < 500; ++i) recs.push_back({phrase(), "a" + std::to_string(i), kAllCategories[rng() % 7], 0});
    const auto kb = build_kb(recs, NormalizerConfig{}, store, 1.0);
    o.require(kb.size() == 500, "kb size");
    const std::vector<double> taus{0.1, 0.3, 0.45, 0.7, 1.0};
    for (int p = 0; p < 200; ++p) {
        const Category cat = kAllCategories[rng() % 7];
        std::vector<std::string> toks;
        std::istringstream in(phrase());
        for (std::string t; in >> t;) toks.push_back(t);
        const auto q = kb.vectorize(toks, store);
        const auto& part = kb.partition(cat);
        const KnowledgeEntry* best = nullptr;
        double best_d = 0.0;
        for (const auto& e : part) {
            const double d = distance(q, e.qvec);
            if (!best || d < best_d) {
                best = &e;
                best_d = d;
            }
        }
        const auto got = kb.closest(cat, q);
        o.require(got && got->entry == best && got->distance == best_d, "exhaustive scan mismatch");
        bool was_absent = false;
        for (auto it = taus.rbegin(); it != taus.rend(); ++it) {
            const auto hit = kb.nearest(cat, q, *it);
            if (hit) o.require(hit->entry->category == cat && hit->distance <= *it, "hygiene");
            if (was_absent) o.require(!hit, "monotone rejection");
            was_absent = !hit;
        }
    }
    if (o.pass) o.detail = "200 probes x 500 entries, 5 thresholds";
    return o;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

Outcome gradient_checks() {
    Outcome o;
    Rng rng(3);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        LinearModel lm(4);
        for (auto& p : lm.params) p = rng.normal();
        std::vector<double> x(4);
        for (auto& v : x) v = rng.normal();
        std::vector<double> g(lm.params.size(), 0.0);
        linear_loss_and_grad(lm, x, t % 2, g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto a = lm, b = lm;
            a.params[i] += 1e-5;
            b.params[i] -= 1e-5;
            worst = std::max(worst, rel(g[i], (linear_loss_and_grad(a, x, t % 2, {}) -
                                               linear_loss_and_grad(b, x, t % 2, {})) / 2e-5));
        }

        ConvNetModel cm(3, {3, 4, 5}, 2);
        for (auto& p : cm.params()) p = 0.5 * rng.normal();
        TokenSequence seq;
        seq.dim = 3;
        seq.length = 2 + t;
        seq.data.resize(seq.dim * seq.length);
        for (auto& v : seq.data) v = rng.normal();
        std::vector<double> cg(cm.params().size(), 0.0);
        cm.loss_and_grad(seq, t % 2, {}, cg);
        for (std::size_t i = 0; i < cg.size(); ++i) {
            auto a = cm, b = cm;
            a.params()[i] += 1e-6;
            b.params()[i] -= 1e-6;
            worst = std::max(worst, rel(cg[i], (a.loss_and_grad(seq, t % 2, {}, {}) -
                                                b.loss_and_grad(seq, t % 2, {}, {})) / 2e-6));
        }
    }
    o.require(worst < 1e-4, "finite-difference mismatch");

    std::vector<LinearExample> sep;
    for (int i = 0; i < 100; ++i) {
        SentenceVector s;
        s.v = {(i % 2 ? 2.0 : -2.0) + 0.5 * rng.normal(), 0.5 * rng.normal()};
        s.n_known = 1;
        sep.push_back({s, i % 2});
    }
    LinearTrainConfig cfg;
    cfg.epochs = 100;
    const auto fit = train_linear(sep, cfg, 1);
    o.require(fit.accuracy == 1.0, "separable fixture not fitted");
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "max rel err %.1e, separable fixture 100%%", worst);
        o.detail = buf;
    }
    return o;
}

Outcome end_to_end() {
    Outcome o;
    vsp_test::TempDir dir;
    const auto cfg = vsp_test::trained_scenario(dir);
    const auto engine = Engine::load(cfg);
    o.require(engine->rules().size() == 60, "rule count");
    o.require(engine->kb().size() == 150, "kb size");
    for (Category c : kAllCategories)
        if (c != Category::unknown) o.require(!engine->kb().partition(c).empty(), "empty partition");
    const auto entries = load_replay(vsp_test::scenario_dir() / "replay.jsonl");
    o.require(entries.size() == 50, "replay length");
    const auto outcomes = run_replay(*engine, entries);
    std::size_t ok = 0;
    bool memory = false, concept_match = false;
    std::set<AnswerPath> paths;
    for (const auto& r : outcomes) {
        ok += r.ok();
        paths.insert(r.response.path);
        memory |= r.ok() && r.response.text == "I said two";
        concept_match |= r.ok() && r.entry.question == "Have you struggled to pee?" &&
                         r.response.trace.rule_id == "s_urinate";
    }
    o.require(ok == entries.size(), std::to_string(ok) + "/" + std::to_string(entries.size()) + " turns");
    o.require(memory, "memory exchange");
    o.require(concept_match, "concept match");
    o.require(paths.size() == 3, "not every path exercised");
    if (o.pass) o.detail = "50/50 turns, every path exercised";
    return o;
}

Outcome augmentation_counting() {
    Outcome o;
    std::mt19937_64 rng(4);
    for (int f = 0; f < 100; ++f) {
        ConceptLexicon lex;
        std::vector<std::vector<std::string>> concepts;
        for (std::size_t c = 0, nc = 1 + rng() % 4; c < nc; ++c) {
            std::set<std::string> m;
            for (std::size_t i = 0, sz = 1 + rng() % 4; i < sz; ++i) m.insert("k" + std::to_string(c) + "_" + std::to_string(i));
            concepts.emplace_back(m.begin(), m.end());
            lex.add("~c" + std::to_string(c), m);
        }
        std::vector<std::string> q;
        std::size_t product = 1;
        for (std::size_t i = 0, len = 1 + rng() % 5; i < len; ++i) {
            if (rng() % 2) {
                const auto& c = concepts[rng() % concepts.size()];
                q.push_back(c[rng() % c.size()]);
                product *= c.size();
            } else {
                q.push_back("plain");
            }
        }
        const auto ex = expand(q, lex);
        o.require(ex.product == product && ex.variants.size() == product, "count law");
        o.require(std::find(ex.variants.begin(), ex.variants.end(), q) != ex.variants.end(), "original membership");
        for (const auto& v : ex.variants) o.require(expand(v, lex).variants == ex.variants, "idempotence");
    }
    if (o.pass) o.detail = "100 fixtures";
    return o;
}

std::string replay_transcript(const Engine& engine) {
    std::string out;
    for (const auto& r : run_replay(engine, load_replay(vsp_test::scenario_dir() / "replay.jsonl")))
        out += r.response.to_json().dump() + "\n";
    return out;
}

Outcome determinism() {
    Outcome o;
    vsp_test::TempDir a, b;
    const auto cfg_a = vsp_test::trained_scenario(a);
    const auto cfg_b = vsp_test::trained_scenario(b);
    o.require(read_file(cfg_a.ensemble) == read_file(cfg_b.ensemble), "archives differ");
    const auto ea = Engine::load(cfg_a);
    const auto eb = Engine::load(cfg_b);
    std::string pa, pb;
    for (const auto& e : load_training_questions(cfg_a.train_data, ea->normalizer())) {
        const auto in = prepare_input(e.tokens, ea->vectors(), ea->ensemble().idf, 50);
        for (double s : ensemble_predict(ea->ensemble(), in).scores) pa += std::to_string(s) + ' ';
        for (double s : ensemble_predict(eb->ensemble(), in).scores) pb += std::to_string(s) + ' ';
    }
    o.require(pa == pb, "predictions differ");
    o.require(replay_transcript(*ea) == replay_transcript(*eb), "transcripts differ");
    if (o.pass) o.detail = "archive, predictions and transcript byte-identical";
    return o;
}

}  // namespace

int main() {
    report("metric reproduction", metric_reproduction, 1.0);
    std::printf("%-11s %-28s %8s  %s\n", "SUBSTITUTED", "corpus-dependent numbers", "",
                "classifier accuracies and live rates need the original corpora; covered by the suites below");
    report("combination oracle", algorithm1_oracle, 10.0);
    report("distance oracle", distance_oracle, 0);
    report("retrieval oracle", retrieval_oracle, 0);
    report("gradient checks", gradient_checks, 0);
    report("end-to-end pipeline", end_to_end, 30.0);
    report("augmentation counting", augmentation_counting, 0);
    report("determinism", determinism, 0);
    std::printf("%d failing criteria\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "vsp/normalizer.hpp"

namespace {

std::string g_binary;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& stdin_text = {}) {
    vsp_test::TempDir dir;
    std::string cmd = "'" + g_binary + "' " + args;
    if (!stdin_text.empty()) {
        vsp_test::write_file(dir / "stdin.txt", stdin_text);
        cmd += " < '" + (dir / "stdin.txt").string() + "'";
    }
    cmd += " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string config_arg() { return "--config '" + vsp_test::scenario_config().string() + "'"; }

std::size_t line_count(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += !line.empty();
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a.rfind("--vsp=", 0) == 0) g_binary = a.substr(6);
    }
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli --vsp=<path to vsp binary>\n");
        return 2;
    }
    return ctx.run();
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("augment --in x.jsonl").code == 2);
    CHECK(run("train --seed notanumber").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("runtime failures exit 1 and name the path") {
    const auto r = run("build-kb --config /nonexistent/engine.json");
    CHECK(r.code == 1);
    CHECK(r.out.find("/nonexistent/engine.json") != std::string::npos);
    vsp_test::TempDir dir;
    vsp_test::write_file(dir / "bad.jsonl", "{\"question\": \"q\"\n");
    const auto bad = run("eval --transcript '" + (dir / "bad.jsonl").string() + "'");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("bad.jsonl") != std::string::npos);
}

TEST_CASE("eval prints the rules-row F1") {
    vsp_test::TempDir dir;
    std::string text;
    auto add = [&](const char* label, int n) {
        for (int i = 0; i < n; ++i)
            text += nlohmann::json{{"question", "q"}, {"system_response", "a"}, {"label", label}}.dump() + "\n";
    };
    add("coherent", 8781);
    add("incoherent", 249);
    add("not_recognized", 970);
    vsp_test::write_file(dir / "rules.jsonl", text);
    const auto r = run("eval --transcript 'Rules=" + (dir / "rules.jsonl").string() + "' --out '" +
                       (dir / "report.json").string() + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("92.29") != std::string::npos);
    CHECK(r.out.find("97.24") != std::string::npos);
    const auto report = nlohmann::json::parse(vsp::read_file(dir / "report.json"));
    CHECK(report["systems"][0]["system"] == "Rules");
    CHECK(std::abs(report["systems"][0]["f1"].get<double>() - 92.29) <= 0.02);
}

TEST_CASE("augment adds one line for the urinate fixture") {
    vsp_test::TempDir dir;
    vsp_test::write_file(dir / "kb.jsonl",
                         "{\"question\": \"Do you have trouble urinating?\", \"answer\": \"No\", \"category\": \"symptoms\"}\n");
    vsp_test::write_file(dir / "concepts.txt", "concept: ~urinate [ urinate pee ]\n");
    auto cfg = nlohmann::json::parse(vsp::read_file(vsp_test::scenario_config()));
    for (const char* k : {"stopwords", "lemmas", "spelling"})
        cfg[k] = (vsp_test::scenario_dir() / cfg[k].get<std::string>()).string();
    cfg["concepts"] = (dir / "concepts.txt").string();
    vsp_test::write_file(dir / "engine.json", cfg.dump());
    const auto r = run("augment --config '" + (dir / "engine.json").string() + "' --in '" + (dir / "kb.jsonl").string() + "' --out '" +
                       (dir / "aug.jsonl").string() + "' --report '" + (dir / "report.json").string() + "'");
    CHECK(r.code == 0);
    CHECK(line_count(dir / "aug.jsonl") == 2);
    CHECK(vsp::read_file(dir / "aug.jsonl").find("trouble pee") != std::string::npos);
    CHECK(nlohmann::json::parse(vsp::read_file(dir / "report.json"))["factors"][0] == 2);
}

TEST_CASE("build-kb reports partition sizes") {
    vsp_test::TempDir dir;
    const auto r = run("build-kb " + config_arg() + " --out '" + (dir / "kb.json").string() + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("symptoms") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "kb.json"));
}

TEST_CASE("train twice gives byte-identical archives, then replay and chat") {
    vsp_test::TempDir dir;
    const auto a = run("train " + config_arg() + " --seed 7 --out '" + (dir / "a.vspm").string() + "'");
    const auto b = run("train " + config_arg() + " --seed 7 --out '" + (dir / "b.vspm").string() + "'");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out.find("convnet") != std::string::npos);
    CHECK(vsp::read_file(dir / "a.vspm") == vsp::read_file(dir / "b.vspm"));
    CHECK(vsp::read_file(dir / "a.alpha.json") == vsp::read_file(dir / "b.alpha.json"));
    const auto alpha = nlohmann::json::parse(vsp::read_file(dir / "a.alpha.json"));
    CHECK(alpha["alpha"].size() == 7);

    // a config pointing at the fresh archive
    auto cfg = nlohmann::json::parse(vsp::read_file(vsp_test::scenario_config()));
    for (const char* k : {"stopwords", "lemmas", "spelling", "concepts", "rules", "vectors", "kb", "train_data"})
        cfg[k] = (vsp_test::scenario_dir() / cfg[k].get<std::string>()).string();
    cfg["ensemble"] = (dir / "a.vspm").string();
    vsp_test::write_file(dir / "engine.json", cfg.dump());
    const std::string local = "--config '" + (dir / "engine.json").string() + "'";

    const auto replay = run("replay " + local + " --file '" + (vsp_test::scenario_dir() / "replay.jsonl").string() +
                            "' --out '" + (dir / "t1.jsonl").string() + "'");
    CHECK(replay.code == 0);
    CHECK(replay.out.find("50/50") != std::string::npos);
    run("replay " + local + " --file '" + (vsp_test::scenario_dir() / "replay.jsonl").string() + "' --out '" +
        (dir / "t2.jsonl").string() + "'");
    CHECK(vsp::read_file(dir / "t1.jsonl") == vsp::read_file(dir / "t2.jsonl"));

    vsp_test::write_file(dir / "wrong.jsonl",
                         "{\"question\": \"Hello doctor\", \"expected_path\": \"similarity\"}\n");
    CHECK(run("replay " + local + " --file '" + (dir / "wrong.jsonl").string() + "'").code == 1);

    const auto chat = run("chat " + local, "did you take medication?\nhow much did you take?\n/quit\n");
    CHECK(chat.code == 0);
    CHECK(chat.out.find("[rule] yes I took two paracetamol") != std::string::npos);
    CHECK(chat.out.find("[rule] I said two") != std::string::npos);
}

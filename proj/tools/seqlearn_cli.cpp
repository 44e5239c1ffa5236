#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqlearn/config.hpp"
#include "seqlearn/errors.hpp"
#include "seqlearn/report.hpp"
#include "seqlearn/runner.hpp"

namespace {

struct CommandDoc {
    const char* name;
    const char* help;
};

constexpr CommandDoc kCommands[] = {
    {"extrapolate-eval", "run one guesser over streams and report NV / weak-NV verdicts"},
    {"duel", "check that a guesser and its bit-flipped mirror split every horizon"},
    {"defeat", "construct and verify the sparse-zero stream a guesser never gets right"},
    {"adversary-pair", "build favorable and defiant streams around one guesser"},
    {"coarse", "block-double a stream and score the last-bit guesser on it"},
    {"forecast-eval", "score a forecaster on sampled paths (NC / weak-NC)"},
    {"merge", "depth-bounded total variation between forecaster and source"},
    {"defeat-nc", "construct the stream whose zeros a forecaster keeps calling ones"},
    {"bm-game", "play prefix games whose outcomes pile up wicked prefixes"},
    {"witness-check", "spot-check witness families on sampled guessers and stems"},
    {"meagre-chain", "certify a chain of shrinking forecast balls and its super-bad floor"},
    {"escape", "iterate a witness family to flee one guesser"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "seqlearn — exact-arithmetic test bench for sequence guessers and forecasters.\n"
        "Exit codes: 0 ok, 1 refuted under expect = consistent, 2 bad configuration,\n"
        "3 search budget or resource exhausted."};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string outdir;
    for (const auto& doc : kCommands) {
        CLI::App* sub = app.add_subcommand(doc.name, doc.help);
        sub->add_option("--config", config_path, "key = value file loaded first");
        sub->add_option("--set", overrides, "override one key (key=value); repeatable");
        sub->add_option("--out", outdir,
                        "directory for verdicts.jsonl, trajectory CSVs, certificates");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    seqlearn::Config cfg;
    try {
        if (!config_path.empty()) cfg = seqlearn::Config::parse_file(config_path);
        for (const auto& kv : overrides) cfg.set_pair(kv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "seqlearn: %s\n", e.what());
        return 2;
    }
    cfg.set("command", cmd);

    auto t0 = std::chrono::steady_clock::now();
    seqlearn::RunResult res = seqlearn::run(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!outdir.empty()) {
        try {
            seqlearn::write_report(res.report, outdir, secs);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "seqlearn: writing %s: %s\n", outdir.c_str(), e.what());
            if (res.exit_code == 0) res.exit_code = 2;
        }
    }

    if (res.exit_code >= 2) {
        std::fprintf(stderr, "seqlearn %s: %s\n", cmd.c_str(), res.message.c_str());
    } else {
        std::printf("%s: %s\n", cmd.c_str(), res.message.c_str());
        for (const auto& rec : res.report.records) {
            if (!rec.contains("verdict")) continue;
            std::printf("  %-28s %s\n",
                        rec.value("case", std::string{"-"}).c_str(),
                        rec["verdict"].get<std::string>().c_str());
        }
    }
    return res.exit_code;
}

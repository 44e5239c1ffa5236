#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqlearn/config.hpp"
#include "seqlearn/rational.hpp"

namespace seqlearn {

using ordered_json = nlohmann::ordered_json;

// one value series, written as <name>.csv: checkpoint, value, num, den
struct Trajectory {
    std::string name;
    std::vector<std::uint64_t> checkpoints;
    std::vector<Rational> values;
};

struct CertificateFile {
    std::string name;  // file stem; written as <name>.txt
    std::string text;
};

struct RunReport {
    std::string command;
    std::string version = "0.1.0";
    Config config;  // fully resolved, defaults materialized
    std::vector<ordered_json> records;
    std::vector<Trajectory> trajectories;
    std::vector<CertificateFile> certificates;
};

// exact rational as "num/den" (plain integer when the denominator is 1)
std::string json_rat(const Rational& q);
// {"exact": "num/den", "decimal": 12-place truncation}
ordered_json json_rat_full(const Rational& q);

std::string config_digest_hex(const Config& cfg);
std::string trajectory_csv(const Trajectory& t);
std::string verdicts_jsonl(const RunReport& rep);

// writes verdicts.jsonl, one CSV per trajectory, one .txt per certificate, and
// run_meta.json (wall clock lives there so reports stay byte-reproducible)
void write_report(const RunReport& rep, const std::string& outdir, double wall_seconds);

// filesystem-safe case key: alphanumerics kept, runs of anything else become '-'
std::string slug(const std::string& text);

}  // namespace seqlearn

#include "seqlearn/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqlearn/errors.hpp"

namespace seqlearn {

std::string json_rat(const Rational& q) { return rat_str(q); }

ordered_json json_rat_full(const Rational& q) {
    ordered_json j;
    j["exact"] = rat_str(q);
    j["decimal"] = rat_decimal(q, 12);
    return j;
}

std::string config_digest_hex(const Config& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(cfg.digest()));
    return buf;
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    out << "checkpoint,value,num,den\n";
    for (std::size_t i = 0; i < t.checkpoints.size() && i < t.values.size(); ++i) {
        const Rational& v = t.values[i];
        out << t.checkpoints[i] << "," << rat_decimal(v, 12) << "," << v.get_num().get_str()
            << "," << v.get_den().get_str() << "\n";
    }
    return out.str();
}

std::string verdicts_jsonl(const RunReport& rep) {
    std::ostringstream out;
    ordered_json head;
    head["record"] = "config";
    head["command"] = rep.command;
    head["version"] = rep.version;
    head["digest"] = config_digest_hex(rep.config);
    ordered_json entries = ordered_json::object();
    for (const auto& [k, v] : rep.config.entries()) entries[k] = v;
    head["entries"] = entries;
    out << head.dump() << "\n";
    for (const auto& rec : rep.records) out << rec.dump() << "\n";
    return out.str();
}

void write_report(const RunReport& rep, const std::string& outdir, double wall_seconds) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) throw resource_error("cannot create output directory '" + outdir + "'");
    auto put = [&](const std::string& name, const std::string& content) {
        std::ofstream f(fs::path(outdir) / name, std::ios::binary);
        if (!f) throw resource_error("cannot write '" + name + "' under '" + outdir + "'");
        f << content;
    };
    put("verdicts.jsonl", verdicts_jsonl(rep));
    for (const auto& t : rep.trajectories) put(t.name + ".csv", trajectory_csv(t));
    for (const auto& c : rep.certificates) put(c.name + ".txt", c.text);
    ordered_json meta;
    meta["wall_seconds"] = wall_seconds;
    meta["version"] = rep.version;
    put("run_meta.json", meta.dump(2) + "\n");
}

std::string slug(const std::string& text) {
    std::string out;
    bool dash = false;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            dash = false;
        } else if (!dash && !out.empty()) {
            out += '-';
            dash = true;
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out.empty() ? "case" : out;
}

}  // namespace seqlearn

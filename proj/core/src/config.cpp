#include "seqlearn/config.hpp"

#include <fstream>
#include <sstream>

#include "seqlearn/digest.hpp"
#include "seqlearn/errors.hpp"

namespace seqlearn {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

Config Config::parse_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw config_error("line " + std::to_string(lineno) + ": unterminated [section]");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw config_error("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw config_error("line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        cfg.values_[key] = val;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void Config::set(const std::string& key, const std::string& raw) { values_[key] = raw; }

void Config::set_pair(const std::string& pair) {
    std::size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error("override '" + pair + "' is not key=value");
    values_[trim(pair.substr(0, eq))] = trim(pair.substr(eq + 1));
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& Config::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw config_error("missing config key '" + key + "'");
    return it->second;
}

std::string Config::str(const std::string& key) const { return strip_quotes(raw(key)); }

std::string Config::str(const std::string& key, const std::string& dflt) const {
    return has(key) ? str(key) : dflt;
}

std::uint64_t Config::u64(const std::string& key) const {
    const std::string& v = raw(key);
    try {
        std::size_t used = 0;
        std::uint64_t out = std::stoull(v, &used);
        if (used != v.size()) throw config_error("");
        return out;
    } catch (...) {
        throw config_error("config key '" + key + "': '" + v + "' is not a number");
    }
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t dflt) const {
    return has(key) ? u64(key) : dflt;
}

Rational Config::rational(const std::string& key) const {
    try {
        return parse_rational(raw(key));
    } catch (const std::exception& ex) {
        throw config_error("config key '" + key + "': " + ex.what());
    }
}

Rational Config::rational(const std::string& key, const Rational& dflt) const {
    return has(key) ? rational(key) : dflt;
}

std::vector<std::string> Config::list(const std::string& key) const {
    const std::string& v = raw(key);
    std::string t = trim(v);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw config_error("config key '" + key + "' is not a [list]");
    std::vector<std::string> out;
    std::string item;
    int depth = 0;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        char c = t[i];
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            std::string tr = trim(item);
            if (!tr.empty()) out.push_back(tr);
            item.clear();
        } else {
            item += c;
        }
    }
    std::string tr = trim(item);
    if (!tr.empty()) out.push_back(tr);
    return out;
}

std::vector<std::uint64_t> Config::u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const std::string& item : list(key)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) throw config_error("");
        } catch (...) {
            throw config_error("config key '" + key + "': '" + item + "' is not a number");
        }
    }
    return out;
}

std::vector<std::uint64_t> Config::u64_list(const std::string& key,
                                            const std::vector<std::uint64_t>& dflt) const {
    return has(key) ? u64_list(key) : dflt;
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
    return out.str();
}

std::uint64_t Config::digest() const { return fnv1a(canonical()); }

}  // namespace seqlearn

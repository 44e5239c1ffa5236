#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqlearn/rational.hpp"

namespace seqlearn {

/* Flat key = value text with [section] prefixes; values keep their raw spelling
 * and are parsed on typed access.  Lines starting with # are comments. */
class Config {
  public:
    static Config parse_text(const std::string& text);
    static Config parse_file(const std::string& path);

    void set(const std::string& key, const std::string& raw);
    // applies a command-line override of the form key=value
    void set_pair(const std::string& pair);

    bool has(const std::string& key) const;
    const std::string& raw(const std::string& key) const;

    std::string str(const std::string& key) const;
    std::string str(const std::string& key, const std::string& dflt) const;
    std::uint64_t u64(const std::string& key) const;
    std::uint64_t u64(const std::string& key, std::uint64_t dflt) const;
    Rational rational(const std::string& key) const;
    Rational rational(const std::string& key, const Rational& dflt) const;
    // top-level comma split of a [bracketed] list, nesting respected
    std::vector<std::string> list(const std::string& key) const;
    std::vector<std::uint64_t> u64_list(const std::string& key) const;
    std::vector<std::uint64_t> u64_list(const std::string& key,
                                        const std::vector<std::uint64_t>& dflt) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    // canonical "key = value" lines, sorted; the digest input
    std::string canonical() const;
    std::uint64_t digest() const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace seqlearn

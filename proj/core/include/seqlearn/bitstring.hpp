#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace seqlearn {

using Bit = int;  // 0 or 1

/*
 * Finite binary string, bits packed 64 per word.  Positions are 1-based
 * throughout the library: w.bit(1) is the first bit, w.prefix(m) the first
 * m bits.  prefix(0) is the empty string.
 */
class BitString {
  public:
    BitString() = default;

    static BitString from_string(std::string_view s);  // '0'/'1' only
    static BitString repeated(Bit b, std::size_t n);

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    void push_back(Bit b);
    void append(const BitString& other);

    Bit bit(std::size_t k) const;  // 1-based, k in [1, size()]
    Bit back() const { return bit(n_); }

    BitString prefix(std::size_t m) const;  // first m bits, m <= size()
    bool is_prefix_of(const BitString& other) const;

    std::size_t count_ones() const;
    std::string str() const;

    bool operator==(const BitString& other) const;
    bool operator!=(const BitString& other) const { return !(*this == other); }

    std::uint64_t hash() const;

  private:
    std::vector<std::uint64_t> words_;
    std::size_t n_ = 0;
};

BitString operator+(const BitString& a, const BitString& b);

}  // namespace seqlearn

template <>
struct std::hash<seqlearn::BitString> {
    std::size_t operator()(const seqlearn::BitString& w) const { return w.hash(); }
};

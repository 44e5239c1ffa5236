#include "seqlearn/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace seqlearn {

BitString BitString::from_string(std::string_view s) {
    BitString w;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string may contain only 0/1");
        w.push_back(c == '1' ? 1 : 0);
    }
    return w;
}

BitString BitString::repeated(Bit b, std::size_t n) {
    BitString w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(b);
    return w;
}

void BitString::push_back(Bit b) {
    if (n_ % 64 == 0) words_.push_back(0);
    if (b) words_.back() |= (std::uint64_t{1} << (n_ % 64));
    ++n_;
}

void BitString::append(const BitString& other) {
    for (std::size_t k = 1; k <= other.n_; ++k) push_back(other.bit(k));
}

Bit BitString::bit(std::size_t k) const {
    if (k == 0 || k > n_) throw std::out_of_range("bit index outside [1, size]");
    std::size_t i = k - 1;
    return static_cast<Bit>((words_[i / 64] >> (i % 64)) & 1u);
}

BitString BitString::prefix(std::size_t m) const {
    if (m > n_) throw std::out_of_range("prefix longer than string");
    BitString w;
    w.n_ = m;
    w.words_.assign(words_.begin(), words_.begin() + (m + 63) / 64);
    if (m % 64 != 0 && !w.words_.empty())
        w.words_.back() &= (std::uint64_t{1} << (m % 64)) - 1;
    return w;
}

bool BitString::is_prefix_of(const BitString& other) const {
    if (n_ > other.n_) return false;
    if (n_ == 0) return true;
    std::size_t full = n_ / 64;
    for (std::size_t i = 0; i < full; ++i)
        if (words_[i] != other.words_[i]) return false;
    if (n_ % 64 != 0) {
        std::uint64_t mask = (std::uint64_t{1} << (n_ % 64)) - 1;
        if ((words_[full] & mask) != (other.words_[full] & mask)) return false;
    }
    return true;
}

std::size_t BitString::count_ones() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

std::string BitString::str() const {
    std::string s;
    s.reserve(n_);
    for (std::size_t k = 1; k <= n_; ++k) s.push_back(bit(k) ? '1' : '0');
    return s;
}

bool BitString::operator==(const BitString& other) const {
    return n_ == other.n_ && words_ == other.words_;
}

std::uint64_t BitString::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ull;
    };
    mix(n_);
    for (std::uint64_t w : words_) mix(w);
    return h;
}

BitString operator+(const BitString& a, const BitString& b) {
    BitString w = a;
    w.append(b);
    return w;
}

}  // namespace seqlearn

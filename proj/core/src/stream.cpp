#include "seqlearn/stream.hpp"

#include <cstdlib>

#include "seqlearn/errors.hpp"

namespace seqlearn {

struct BitStream::State {
    Generator gen;
    BitString cache;
    std::size_t cap;
    std::string name;
    mutable std::mutex mu;
};

BitStream::BitStream(Generator gen, std::string name, std::size_t cache_cap)
    : st_(std::make_shared<State>()) {
    st_->gen = std::move(gen);
    st_->cap = cache_cap;
    st_->name = std::move(name);
}

std::size_t BitStream::default_cache_cap() {
    static const std::size_t cap = [] {
        if (const char* e = std::getenv("SEQLEARN_STREAM_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(e, &end, 10);
            if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        }
        return std::size_t{1} << 20;
    }();
    return cap;
}

BitString BitStream::prefix(std::size_t n) const {
    std::lock_guard<std::mutex> lock(st_->mu);
    if (n > st_->cap)
        throw resource_error("stream '" + st_->name + "' prefix " + std::to_string(n) +
                             " exceeds cache cap " + std::to_string(st_->cap));
    while (st_->cache.size() < n) st_->cache.push_back(st_->gen(st_->cache));
    return st_->cache.prefix(n);
}

Bit BitStream::bit(std::size_t k) const {
    if (k == 0) throw precondition_error("stream indices are 1-based");
    std::lock_guard<std::mutex> lock(st_->mu);
    if (k > st_->cap)
        throw resource_error("stream '" + st_->name + "' index " + std::to_string(k) +
                             " exceeds cache cap " + std::to_string(st_->cap));
    while (st_->cache.size() < k) st_->cache.push_back(st_->gen(st_->cache));
    return st_->cache.bit(k);
}

std::size_t BitStream::cached_size() const {
    std::lock_guard<std::mutex> lock(st_->mu);
    return st_->cache.size();
}

const std::string& BitStream::name() const { return st_->name; }

BitStream constant_stream(Bit b) {
    return BitStream([b](const BitString&) { return b; },
                     b ? "all-ones" : "all-zeros");
}

BitStream alternating_stream() {
    return BitStream([](const BitString& w) { return static_cast<Bit>(w.size() % 2); },
                     "alternating");
}

BitStream periodic_stream(const BitString& pattern) {
    if (pattern.empty()) throw precondition_error("periodic pattern must be non-empty");
    return BitStream(
        [pattern](const BitString& w) { return pattern.bit(w.size() % pattern.size() + 1); },
        "periodic(" + pattern.str() + ")");
}

BitStream stream_from_string(const BitString& w, const BitStream& tail) {
    return BitStream(
        [w, tail](const BitString& sofar) {
            std::size_t n = sofar.size() + 1;
            if (n <= w.size()) return w.bit(n);
            return tail.bit(n - w.size());
        },
        "prefixed(" + w.str() + "," + tail.name() + ")");
}

}  // namespace seqlearn

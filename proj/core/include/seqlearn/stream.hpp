#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "seqlearn/bitstring.hpp"

namespace seqlearn {

/*
 * Lazy memoized bit stream, 1-indexed.  The generator is handed the
 * definitive prefix built so far and must return the next bit; it is invoked
 * exactly once per index, in increasing order, so stateful generator
 * closures are safe.  Evaluated bits are cached and never recomputed, which
 * pins down pseudo-random streams after first evaluation.  Copies share the
 * cache; queries are serialized by a mutex so a handed-off stream stays
 * consistent.  Extending the cache past the cap is a resource_error.
 */
class BitStream {
  public:
    using Generator = std::function<Bit(const BitString& sofar)>;

    explicit BitStream(Generator gen, std::string name = "stream",
                       std::size_t cache_cap = default_cache_cap());

    BitString prefix(std::size_t n) const;
    Bit bit(std::size_t k) const;  // 1-based
    std::size_t cached_size() const;
    const std::string& name() const;

    // 2^20 unless overridden by the SEQLEARN_STREAM_CAP environment variable
    static std::size_t default_cache_cap();

  private:
    struct State;
    std::shared_ptr<State> st_;
};

BitStream constant_stream(Bit b);
BitStream alternating_stream();  // 0,1,0,1,...
BitStream periodic_stream(const BitString& pattern);

// begins with w, then bit n = tail(n - |w|)
BitStream stream_from_string(const BitString& w, const BitStream& tail);

}  // namespace seqlearn

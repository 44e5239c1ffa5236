#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqlearn/rational.hpp"

namespace seqlearn {

/*
 * Set of natural numbers given by a strictly increasing enumerator:
 * enumerate(k) is the k-th member (1-based), nullopt once the set is
 * exhausted.  Membership and counting are answered by extending a memoized
 * member list, so the two views can never disagree.
 */
class IndexSet {
  public:
    using Enumerator = std::function<std::optional<std::uint64_t>(std::uint64_t k)>;

    static IndexSet from_enumerator(Enumerator e, std::string name);
    static IndexSet from_sorted(std::vector<std::uint64_t> members);
    static IndexSet all();
    static IndexSet none();
    static IndexSet powers_of(std::uint64_t base);  // base^1, base^2, ...
    static IndexSet squares();                      // 1, 4, 9, ...

    bool contains(std::uint64_t n) const;
    std::optional<std::uint64_t> member(std::uint64_t k) const;  // 1-based
    std::uint64_t count_upto(std::uint64_t n) const;
    std::vector<std::uint64_t> members_upto(std::uint64_t n) const;
    // 1-based ordinal of n within the set, if a member
    std::optional<std::uint64_t> rank_of(std::uint64_t n) const;

    const std::string& name() const;

  private:
    struct State;
    std::shared_ptr<State> st_;
};

// |{k <= n : k in s}| / n, exact
Rational density_upto(const IndexSet& s, std::uint64_t n);

// density trajectory of a hit set along a horizon
struct DensityStats {
    std::uint64_t horizon = 0;
    std::uint64_t hits = 0;
    std::vector<std::uint64_t> checkpoints;
    std::vector<Rational> values;  // density at each checkpoint
};

/*
 * Geometric checkpoint ladder: `count` strictly increasing indices ending
 * exactly at `horizon`, spaced by the ratio horizon^(1/count) where room
 * permits (computed with exact integer roots, no floating point).  Requires
 * 1 <= count <= horizon.
 */
std::vector<std::uint64_t> checkpoints(std::uint64_t horizon, std::uint64_t count);

}  // namespace seqlearn

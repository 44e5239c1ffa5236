#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "seqlearn/bitstring.hpp"
#include "seqlearn/index_set.hpp"
#include "seqlearn/rational.hpp"
#include "seqlearn/stream.hpp"

namespace seqlearn {

/*
 * Borel probability measure on infinite bit sequences, presented through its
 * conditionals: prob_one() is the exact chance that the next bit is 1 given
 * the prefix consumed so far.  Cursors are cheap value state (copyable via
 * clone), so tree walks fork them instead of recomputing cylinder products.
 * Querying a conditional on a zero-weight prefix raises
 * undefined_conditional; a law declaring full support raises support_error
 * if a queried conditional ever lands on 0 or 1.
 */
class LawCursor {
  public:
    virtual ~LawCursor() = default;
    virtual Rational prob_one() const = 0;
    virtual void advance(Bit b) = 0;
    virtual std::unique_ptr<LawCursor> clone() const = 0;
};

class ConditionalLaw {
  public:
    using CursorFactory = std::function<std::unique_ptr<LawCursor>()>;

    ConditionalLaw() = default;
    ConditionalLaw(std::string name, bool full_support, CursorFactory make);

    // conditional P(next = 1 | w); enforces the declared full-support claim
    Rational p1(const BitString& w) const;
    std::unique_ptr<LawCursor> cursor() const;
    bool full_support() const { return full_support_; }
    const std::string& name() const { return name_; }

  private:
    std::string name_;
    bool full_support_ = false;
    CursorFactory make_;
};

// product of conditionals along w: the measure of the cylinder [w]
Rational cylinder_weight(const ConditionalLaw& mu, const BitString& w);

ConditionalLaw bernoulli(const Rational& p);
ConditionalLaw laplace_bayes();  // p1(w) = (#ones + 1) / (|w| + 2)
// order-k chain: conditional on the last k bits via table[bits-as-integer],
// fair until k bits have been seen
ConditionalLaw markov(std::size_t order, const std::vector<Rational>& table);
ConditionalLaw delta_law(const BitStream& sigma);  // point mass on sigma
// base law with the deterministic inject bit forced at spike positions
// (the ell-th spike carries inject(ell))
ConditionalLaw spiked_law(const ConditionalLaw& base, const IndexSet& spikes,
                          const BitStream& inject);
// exact finite mixture: weights must be positive and sum to 1
ConditionalLaw mixture(const std::vector<Rational>& weights,
                       const std::vector<ConditionalLaw>& components);
// chance-flipping opponent: answers 1/10 where mu leans toward 1, 9/10 where
// it leans toward 0, so conditionals stay at least 2/5 away from mu's
ConditionalLaw evil_forecaster(const ConditionalLaw& mu);
// forecaster that puts chance 2^-n on a 0 after any length-n prefix (n >= 1;
// the empty prefix is fair so support stays full)
ConditionalLaw ref_forecaster();

/*
 * Measure glued over a complete prefix-free code: cell w_k gets mass p_k and
 * relative law mu inside it, so lambda(w_k . v) = p_k * mu(v | w_k).
 * Conditionals past a cell equal mu's exactly.  parts must be prefix-free
 * with Kraft sum exactly 1; weights must be positive and sum to 1.
 */
ConditionalLaw glue_partition(const std::vector<BitString>& parts,
                              const std::vector<Rational>& weights, const ConditionalLaw& mu);

// finite weight table at a fixed depth (cells in string order, summing to 1),
// extended past that depth by tail's conditionals at the full prefix
ConditionalLaw weight_table_law(std::size_t depth, const std::vector<Rational>& cells,
                                const ConditionalLaw& tail);

// certified approximation: the true value lies within error_bound of estimate
struct ApproxValue {
    Rational estimate;
    Rational error_bound;
};

/*
 * Effective approximation of the countable mixture
 * 1/2 base + sum_k 2^-(k+1) family(k): truncates the sum at k = n+1 and
 * rounds each component weight to a dyadic of the scheduled precision
 * (base at n+1 bits, members at 2n bits).  The three error parts -- base
 * rounding, member rounding, dropped tail -- are each at most 2^-(n+2), so
 * the result is within 2^-n of the limit mixture.
 */
ApproxValue mixture_approx(const ConditionalLaw& base,
                           const std::function<ConditionalLaw(std::uint64_t)>& family,
                           const BitString& w, std::uint64_t n);

/*
 * Deterministic sampler: bit k is 1 iff the k-th deviate of the seeded
 * generator falls below the law's conditional on the prefix so far.  The
 * same seed at a longer horizon extends the shorter path bit for bit.
 */
BitString sample(const ConditionalLaw& law, std::uint64_t seed, std::uint64_t horizon);

// lazy stream drawing bits exactly as sample() does
BitStream sampled_stream(const ConditionalLaw& law, std::uint64_t seed);

}  // namespace seqlearn

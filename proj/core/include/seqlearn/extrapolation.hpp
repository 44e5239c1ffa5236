#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqlearn/bitstring.hpp"
#include "seqlearn/index_set.hpp"
#include "seqlearn/stream.hpp"
#include "seqlearn/verdict.hpp"

namespace seqlearn {

/*
 * Total next-bit extrapolator.  The core engine is a Scanner: it consumes a
 * prefix one bit at a time and at any point reports the prediction for the
 * next bit, so walking a horizon costs O(1) amortized per position.
 * predict(w) runs a fresh scanner over w; scanners are pure functions of the
 * consumed prefix, which keeps every evaluation deterministic and
 * order-independent.
 */
class Extrapolator {
  public:
    struct Scanner {
        virtual ~Scanner() = default;
        virtual Bit predict() const = 0;   // prediction for the next bit
        virtual void advance(Bit b) = 0;   // consume the actual next bit
        virtual std::unique_ptr<Scanner> clone() const = 0;
    };
    using ScannerFactory = std::function<std::unique_ptr<Scanner>()>;

    Extrapolator() = default;
    Extrapolator(std::string name, ScannerFactory make);

    Bit predict(const BitString& w) const;
    std::unique_ptr<Scanner> scanner() const;
    const std::string& name() const { return name_; }

  private:
    std::string name_;
    ScannerFactory make_;
};

// partial extrapolator: prediction may be undefined
class PartialExtrapolator {
  public:
    using Fn = std::function<std::optional<Bit>(const BitString&)>;
    PartialExtrapolator(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    std::optional<Bit> predict(const BitString& w) const { return fn_(w); }
    const std::string& name() const { return name_; }

    static PartialExtrapolator lift(const Extrapolator& m);
    static PartialExtrapolator undefined_where(const Extrapolator& m,
                                               std::function<bool(const BitString&)> holes,
                                               std::string name);
    static PartialExtrapolator undefined_everywhere();

  private:
    std::string name_;
    Fn fn_;
};

Extrapolator always_bit(Bit b);
Extrapolator last_bit();                     // empty prefix predicts 1
Extrapolator majority(std::size_t k);        // majority of last k bits; ties and empty predict 1
Extrapolator table_extrapolator(const std::vector<std::pair<BitString, Bit>>& entries,
                                Bit dflt);
Extrapolator evil_twin(const Extrapolator& m);  // flips every prediction

/*
 * Error-parity switcher: counts its own mispredictions on the input's
 * proper prefixes; on even parity answers like m, on odd parity follows the
 * first family stream whose prefix matches the input (falling back to m when
 * none does), answering that stream's next bit.
 */
Extrapolator combine_nv(const Extrapolator& m, const std::vector<BitStream>& family);

/*
 * Windowed follower: on a length-n input consults only family members with
 * index ell satisfying 2^ell <= n; answers the first matching member's next
 * bit, otherwise m.  Cannot damage density-1 learning: disagreements with m
 * stop once every consulted member has diverged.
 */
Extrapolator combine_weak(const Extrapolator& m, const std::vector<BitStream>& family);


struct VerdictReport {
    std::string criterion;
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> error_positions;
    std::optional<std::uint64_t> last_error;
    std::vector<std::uint64_t> undefined_positions;
    DensityStats correct;  // correct-prediction density at checkpoints
    Verdict verdict = Verdict::inconclusive;
    Rational r{1};
    Rational tol{0};
    std::uint64_t tail = 0;
};

// sigma starts with w and then always carries m's own prediction
BitStream guess_sequence(const Extrapolator& m, const BitString& w);

// positions k in [1, horizon] with m(sigma[k-1]) != sigma(k), ascending
std::vector<std::uint64_t> error_positions(const Extrapolator& m, const BitStream& sigma,
                                           std::uint64_t horizon);

// finite-horizon next-value check: consistent iff the tail window (horizon-tail, horizon]
// is error free; never refuted (a finite run cannot rule the limit out)
VerdictReport check_nv(const Extrapolator& m, const BitStream& sigma, std::uint64_t horizon,
                       std::uint64_t tail, std::uint64_t checkpoint_count = 16);

// density criterion at rate r: consistent needs correct density >= r - tol at each of the
// last three checkpoints; refuted needs it below r - tol at all three; a window that
// straddles the bar is inconclusive
VerdictReport check_weak_nv(const Extrapolator& m, const BitStream& sigma, std::uint64_t horizon,
                            const Rational& r, const Rational& tol,
                            std::uint64_t checkpoint_count = 16);

// undefined anywhere in [1, horizon] refutes; otherwise as check_nv
VerdictReport check_nv_prime(const PartialExtrapolator& m, const BitStream& sigma,
                             std::uint64_t horizon, std::uint64_t tail,
                             std::uint64_t checkpoint_count = 16);

// undefined counts as an error; otherwise as check_nv
VerdictReport check_nv_dprime(const PartialExtrapolator& m, const BitStream& sigma,
                              std::uint64_t horizon, std::uint64_t tail,
                              std::uint64_t checkpoint_count = 16);

/*
 * Stream 1^{n_1}.0.1^{n_2}.0... where n_j is the smallest n > 2^j such that
 * m, after the prefix built so far followed by 1^n, predicts a 1; the
 * appended 0 then defeats that prediction.  Every 0 is an m-error and the
 * j-th zero sits past position 2^j.  Each block search tries at most
 * `budget` candidates before raising construction_error with the block.
 */
BitStream defeat_nv(const Extrapolator& m, std::uint64_t budget = std::uint64_t{1} << 20);

/*
 * Spiked pair: both streams start with w and carry spice bits at the spike
 * positions (the ell-th spike gets spice(ell)); elsewhere the first stream
 * follows m's prediction on its own prefix and the second defies it.  So m's
 * errors on the first stream, and its correct predictions past w on the
 * second, can only sit at spikes.  All spikes must lie past |w|.
 */
std::pair<BitStream, BitStream> adversarial_pair(const Extrapolator& m, const BitString& w,
                                                 const BitStream& spice, const IndexSet& spikes);

// 2 copies of bit 1, 4 copies of bit 2, ..., 2^k copies of bit k
BitStream coarse_block_double(const BitStream& sigma0);

}  // namespace seqlearn

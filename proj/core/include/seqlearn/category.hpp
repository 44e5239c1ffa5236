#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqlearn/bitstring.hpp"
#include "seqlearn/certificate.hpp"
#include "seqlearn/extrapolation.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/rational.hpp"

namespace seqlearn {

// fraction of positions k <= |w| where m's next-bit call on w's (k-1)-prefix misses w(k)
Rational wickedness(const Extrapolator& m, const BitString& w);

// number of non-empty prefixes of x with wickedness >= 1/2
std::uint64_t wicked_prefix_count(const Extrapolator& m, const BitString& x);

struct WitnessFamily {
    // F(n, w) must strictly extend w
    std::function<BitString(std::uint64_t, const BitString&)> F;
};

// F(n, w) = w plus |w| bits defying m, plus n more (one leading defying bit when w is empty)
WitnessFamily nwd_witness_weaknv(const Extrapolator& m);

struct GameTranscript {
    std::vector<BitString> moves;  // Player I first, strictly alternating
    BitString realized_prefix() const;
};

using Strategy = std::function<BitString(const GameTranscript&)>;

GameTranscript play_banach_mazur(const Strategy& player_one, const Strategy& player_two,
                                 std::uint64_t rounds);

// Player II extends the current prefix u to F(k, u) on round k
Strategy bm_strategy_from_witness(const WitnessFamily& fam);
Strategy constant_strategy(const BitString& word);
Strategy random_strategy(std::uint64_t seed);  // move length 1..4, pure in (seed, transcript)

// Exact tallies of the witness game against always-`b`, carried as counts: the
// responder's moves are uniform runs, so the realized prefix (which doubles
// every round and dwarfs memory long before round 40) never materializes.
// Agrees bit for bit with play_banach_mazur(random_strategy(seed),
// bm_strategy_from_witness(nwd_witness_weaknv(always_bit(b))), rounds).
struct LongGameStats {
    std::uint64_t rounds = 0;
    BigInt length;            // realized prefix length
    BigInt nasty;             // bits defying always-b
    BigInt wicked_prefixes;   // prefixes with wickedness >= 1/2
    BigInt padded_wicked;     // same count after a run of `pad` agreeing bits
    Rational nasty_density;   // nasty / length
};

LongGameStats bm_long_game_constant(Bit b, std::uint64_t seed, std::uint64_t rounds,
                                    std::uint64_t pad = 0);

// w_0 = w, w_{k+1} = F(k, w_k).0; returns w_steps
BitString baire_escape(const WitnessFamily& fam, const BitString& w, std::uint64_t steps);

// rational ball in the depth-k cylinder metric d(mu, nu) = max_w |mu(w) - nu(w)|
struct BasisBall {
    std::uint64_t depth = 1;
    std::vector<Rational> center;  // 2^depth cells, first bit of the cell most significant
    Rational radius;

    void validate() const;
    static std::size_t index_of(const BitString& w);
    static BitString string_at(std::uint64_t depth, std::size_t index);
};

BasisBall uniform_ball(std::uint64_t depth, const Rational& radius);
BasisBall full_ball();  // depth 1, center (1/2, 1/2), radius 1/2

std::string to_text(const BasisBall& ball);
BasisBall parse_ball(const std::string& text);

struct CertOrReject {
    std::optional<Certificate> cert;
    std::string reject_reason;  // rejections mean "not proven", never "false"
    bool ok() const { return cert.has_value(); }
};

// sufficient condition: d(restrict(inner), outer.center) + 2^(depth gap) * inner.radius
// <= outer.radius
CertOrReject ball_contains(const BasisBall& outer, const BasisBall& inner);

// certifies |mu(s|w) - nu(s|w)| >= 1/5 for every nu in the ball and every w one level
// below the ball's depth, via worst-case interval quotients
CertOrReject bad_gap_certificate(const ConditionalLaw& mu, const BasisBall& ball);

struct ShrinkResult {
    BasisBall ball;
    Certificate contains_cert;
    Certificate bad_gap_cert;
};

// 1/10-9/10 split against mu, radius the largest power of ten both certificates accept
ShrinkResult shrink_against(const ConditionalLaw& mu, const BasisBall& ball);

// k <= K is bad when the conditional gap is >= 1/5 on all of level k; super-bad when
// more than half of j <= k are bad
std::uint64_t superbad_count(const ConditionalLaw& mu, const ConditionalLaw& nu,
                             std::uint64_t K, std::uint64_t max_depth = 12);

struct ChainStep {
    BasisBall ball;
    Certificate contains_cert;
    Certificate bad_gap_cert;
};

struct MeagreChain {
    BasisBall start;
    std::vector<ChainStep> steps;
    std::optional<Certificate> superbad_cert;  // min certified-level gap of the final center
    std::uint64_t superbad_bound = 0;          // implied super-bad count floor
};

MeagreChain meagre_chain(const ConditionalLaw& mu, const BasisBall& start, std::uint64_t t);

// the final ball's center extended past its depth by mu's conditionals
ConditionalLaw center_extension(const ConditionalLaw& mu, const BasisBall& ball);

// cell table summing to 1 within strictly less than the ball's radius of its center
std::vector<Rational> perturb_center(const BasisBall& ball, std::uint64_t seed);

}  // namespace seqlearn

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "seqlearn/errors.hpp"
#include "seqlearn/extrapolation.hpp"
#include "seqlearn/stream.hpp"

using namespace seqlearn;

namespace {
BitString bs(const char* s) { return BitString::from_string(s); }
}  // namespace

TEST_CASE("stock extrapolators") {
    CHECK(always_bit(1).predict(bs("0101")) == 1);
    CHECK(always_bit(0).predict(bs("")) == 0);

    CHECK(last_bit().predict(bs("")) == 1);
    CHECK(last_bit().predict(bs("10")) == 0);
    CHECK(last_bit().predict(bs("01")) == 1);

    Extrapolator m3 = majority(3);
    CHECK(m3.predict(bs("")) == 1);        // empty: tie rule
    CHECK(m3.predict(bs("0")) == 0);       // fewer than 3 bits: use what's there
    CHECK(m3.predict(bs("00")) == 0);
    CHECK(m3.predict(bs("10")) == 1);      // 1-1 tie predicts 1
    CHECK(m3.predict(bs("1100")) == 0);    // window is the last 3 bits: 100
    CHECK(m3.predict(bs("0011")) == 1);
}

TEST_CASE("table extrapolator with default") {
    Extrapolator t = table_extrapolator({{bs("0"), 0}, {bs("11"), 1}}, 1);
    CHECK(t.predict(bs("0")) == 0);
    CHECK(t.predict(bs("11")) == 1);
    CHECK(t.predict(bs("10")) == 1);  // default
    Extrapolator empty_key = table_extrapolator({{bs(""), 0}}, 1);
    CHECK(empty_key.predict(bs("")) == 0);
    CHECK(empty_key.predict(bs("1")) == 1);
}

TEST_CASE("evil twin flips every prediction") {
    Extrapolator m = majority(3);
    Extrapolator t = evil_twin(m);
    for (const char* s : {"", "0", "1", "0110", "11100", "010101"})
        CHECK(t.predict(bs(s)) == 1 - m.predict(bs(s)));
}

TEST_CASE("evil twin splits the horizon exactly") {
    Extrapolator m = last_bit();
    Extrapolator t = evil_twin(m);
    for (std::uint64_t h : {1u, 17u, 256u}) {
        BitStream s = periodic_stream(bs("1101"));
        std::uint64_t e1 = error_positions(m, s, h).size();
        std::uint64_t e2 = error_positions(t, s, h).size();
        CHECK(e1 + e2 == h);
    }
}

TEST_CASE("guess sequences are the guesser's own trajectory") {
    // always-1 from "0": first bit 0, then 1 forever
    CHECK(guess_sequence(always_bit(1), bs("0")).prefix(5).str() == "01111");
    // last-bit from "10": repeats the trailing 0
    CHECK(guess_sequence(last_bit(), bs("10")).prefix(6).str() == "100000");
    // empty start: the guesser free-runs from its empty-prefix prediction
    CHECK(guess_sequence(last_bit(), bs("")).prefix(4).str() == "1111");
}

TEST_CASE("guessed sequences have no errors past the seed") {
    for (const char* w : {"", "0", "10", "0110", "111000"}) {
        for (int which = 0; which < 3; ++which) {
            Extrapolator m = which == 0 ? always_bit(0) : which == 1 ? last_bit() : majority(2);
            BitStream sigma = guess_sequence(m, bs(w));
            auto errs = error_positions(m, sigma, 400);
            for (auto p : errs) CHECK(p <= bs(w).size());
        }
    }
}

TEST_CASE("error positions") {
    CHECK(error_positions(always_bit(1), constant_stream(1), 100).empty());
    auto odd = error_positions(always_bit(1), alternating_stream(), 10);
    CHECK(odd == std::vector<std::uint64_t>{1, 3, 5, 7, 9});
    // alternating defies last-bit everywhere
    CHECK(error_positions(last_bit(), alternating_stream(), 50).size() == 50);
}

TEST_CASE("next-value verdicts need a quiet tail") {
    Extrapolator m = always_bit(1);
    VerdictReport ok = check_nv(m, guess_sequence(m, bs("0")), 1000, 250);
    CHECK(ok.verdict == Verdict::consistent);
    CHECK(ok.last_error == 1u);
    CHECK(ok.error_positions == std::vector<std::uint64_t>{1});

    VerdictReport meh = check_nv(m, alternating_stream(), 1000, 250);
    CHECK(meh.verdict == Verdict::inconclusive);  // errors persist into the tail
    CHECK(meh.correct.values.back() == rat(1, 2));

    // a finite run never refutes the limit statement
    CHECK(check_nv(m, constant_stream(0), 200, 50).verdict == Verdict::inconclusive);
}

TEST_CASE("density verdicts at rate r") {
    Extrapolator m = always_bit(1);
    // all-ones with sparse zero spikes: density -> 1
    auto spiked = adversarial_pair(m, bs(""), constant_stream(0), IndexSet::powers_of(10));
    VerdictReport good = check_weak_nv(m, spiked.first, 10000, rat(1), rat(1, 100));
    CHECK(good.verdict == Verdict::consistent);
    CHECK(good.correct.values.back() == rat(10000 - 4, 10000));
    CHECK(good.error_positions == std::vector<std::uint64_t>{10, 100, 1000, 10000});

    VerdictReport bad = check_weak_nv(m, spiked.second, 10000, rat(1), rat(1, 100));
    CHECK(bad.verdict == Verdict::refuted);
    CHECK(bad.error_positions.size() >= 10000 - 4);

    // consistency at rate r implies consistency at any smaller rate
    for (auto r : {rat(9, 10), rat(1, 2), rat(1, 4)}) {
        CHECK(check_weak_nv(m, spiked.first, 10000, r, rat(1, 100)).verdict ==
              Verdict::consistent);
    }
}

TEST_CASE("alternating stream sits between the rate extremes") {
    Extrapolator m = always_bit(1);
    // correct density is exactly 1/2: consistent at r = 1/2, refuted at r = 1
    CHECK(check_weak_nv(m, alternating_stream(), 4096, rat(1, 2), rat(1, 100)).verdict ==
          Verdict::consistent);
    CHECK(check_weak_nv(m, alternating_stream(), 4096, rat(1), rat(1, 100)).verdict ==
          Verdict::refuted);
}

TEST_CASE("partial extrapolators: undefined refutes or errs by flavor") {
    Extrapolator m = always_bit(1);
    PartialExtrapolator total = PartialExtrapolator::lift(m);
    CHECK(check_nv_prime(total, guess_sequence(m, bs("0")), 500, 100).verdict ==
          Verdict::consistent);

    PartialExtrapolator holey = PartialExtrapolator::undefined_where(
        m, [](const BitString& w) { return w.size() == 3; }, "hole-at-3");
    VerdictReport prime = check_nv_prime(holey, constant_stream(1), 500, 100);
    CHECK(prime.verdict == Verdict::refuted);
    CHECK(prime.undefined_positions == std::vector<std::uint64_t>{4});

    // the double-prime flavor tolerates the hole as one early miss, recorded apart
    VerdictReport dprime = check_nv_dprime(holey, constant_stream(1), 500, 100);
    CHECK(dprime.verdict == Verdict::consistent);
    CHECK(dprime.error_positions.empty());
    CHECK(dprime.undefined_positions == std::vector<std::uint64_t>{4});

    PartialExtrapolator nowhere = PartialExtrapolator::undefined_everywhere();
    CHECK(check_nv_prime(nowhere, constant_stream(1), 100, 20).verdict == Verdict::refuted);
    CHECK(check_nv_dprime(nowhere, constant_stream(1), 100, 20).verdict ==
          Verdict::inconclusive);
}

TEST_CASE("defeat stream structure") {
    Extrapolator m = last_bit();
    BitStream sigma = defeat_nv(m);
    BitString head = sigma.prefix(1 << 12);
    std::vector<std::uint64_t> zeros;
    for (std::uint64_t k = 1; k <= head.size(); ++k)
        if (head.bit(k) == 0) zeros.push_back(k);
    REQUIRE(!zeros.empty());
    auto errs = error_positions(m, sigma, 1 << 12);
    for (std::size_t j = 0; j < zeros.size(); ++j) {
        CHECK(zeros[j] > (std::uint64_t{1} << (j + 1)));  // j-th zero past 2^j (1-based)
        CHECK(std::find(errs.begin(), errs.end(), zeros[j]) != errs.end());
    }
    // zero count up to n stays within log2(n) + 1
    CHECK(zeros.size() <= 13);
}

TEST_CASE("defeat search reports unreachable blocks") {
    // construction is lazy: the wall only shows when a bit is forced
    BitStream lazy = defeat_nv(always_bit(0), 64);
    // always-0 never predicts a 1, so the very first block search fails
    CHECK_THROWS_AS(lazy.bit(1), construction_error);
    bool threw = false;
    try {
        defeat_nv(always_bit(0), 64).bit(1);
    } catch (const construction_error& e) {
        threw = true;
        CHECK(e.block == 1);
    }
    CHECK(threw);
    // the flipped last-bit guesser predicts 0 after any run of ones
    CHECK_THROWS_AS(defeat_nv(evil_twin(last_bit()), 64).bit(1), construction_error);
}

TEST_CASE("adversarial pair carries spice at the spikes") {
    Extrapolator m = last_bit();
    BitStream spice = alternating_stream();  // 0,1,0,1,...
    std::vector<std::uint64_t> sq;
    for (std::uint64_t j = 2; j * j <= 400; ++j) sq.push_back(j * j);
    IndexSet spikes = IndexSet::from_sorted(sq);  // squares, kept clear of the seed
    auto [fav, defi] = adversarial_pair(m, bs("11"), spice, spikes);
    BitString f = fav.prefix(30), d = defi.prefix(30);
    CHECK(f.prefix(2).str() == "11");
    CHECK(d.prefix(2).str() == "11");
    // spikes past the seed: 4, 9, 16, 25 carry spice bits 0, 1, 0, 1 in order
    CHECK(f.bit(4) == 0);
    CHECK(f.bit(9) == 1);
    CHECK(f.bit(16) == 0);
    CHECK(f.bit(25) == 1);
    CHECK(d.bit(4) == 0);
    CHECK(d.bit(9) == 1);
    // off the spikes the favorable stream obeys m, the defiant one inverts it
    auto errs_f = error_positions(m, fav, 400);
    for (auto p : errs_f) {
        bool at_spike = spikes.contains(p);
        bool in_seed = p <= 2;
        CHECK((at_spike || in_seed));
    }
    auto errs_d = error_positions(m, defi, 400);
    std::uint64_t correct = 400 - errs_d.size();
    CHECK(correct <= 2 + spikes.count_upto(400));
}

TEST_CASE("adversarial pair rejects spikes inside the seed") {
    CHECK_THROWS_AS(
        adversarial_pair(last_bit(), bs("111"), constant_stream(0), IndexSet::from_sorted({2, 9})),
        precondition_error);
}

TEST_CASE("combined guesser keeps the base's family and its own sequences") {
    std::vector<BitStream> family = {constant_stream(1), alternating_stream()};
    Extrapolator base = always_bit(0);
    Extrapolator comb = combine_nv(base, family);
    // learns each family member outright
    CHECK(check_nv(comb, constant_stream(1), 2000, 500).verdict == Verdict::consistent);
    CHECK(check_nv(comb, alternating_stream(), 2000, 500).verdict == Verdict::consistent);
    // and still matches the base's verdict on the base's own guessed sequences
    for (const char* w : {"", "1", "01"}) {
        BitStream sigma = guess_sequence(base, bs(w));
        CHECK(check_nv(comb, sigma, 2000, 500).verdict ==
              check_nv(base, sigma, 2000, 500).verdict);
    }
}

TEST_CASE("windowed combiner disagreement stays logarithmic") {
    std::vector<BitStream> family = {constant_stream(1), alternating_stream(),
                                     periodic_stream(bs("110")), constant_stream(0)};
    Extrapolator base = majority(2);
    Extrapolator comb = combine_weak(base, family);
    const std::uint64_t horizon = 1 << 12;
    // a stream that leaves every family member within the first few bits
    BitStream probe = periodic_stream(bs("1001"));
    auto mb = base.scanner();
    auto mc = comb.scanner();
    BitString sofar;
    std::uint64_t disagreements = 0;
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        if (mb->predict() != mc->predict()) ++disagreements;
        Bit b = probe.bit(k);
        mb->advance(b);
        mc->advance(b);
    }
    CHECK(disagreements <= 4 * 12);
}

TEST_CASE("block doubling repeats each source bit in growing runs") {
    BitStream c = coarse_block_double(alternating_stream());
    // 2 copies of bit 1 (0), 4 of bit 2 (1), 8 of bit 3 (0)
    CHECK(c.prefix(14).str() == "00111100000000");
    auto errs = error_positions(last_bit(), c, 1 << 10);
    CHECK(errs.size() == 10);  // one error per block start within 2^10
    for (std::size_t j = 0; j < errs.size(); ++j)
        CHECK(errs[j] == (std::uint64_t{1} << (j + 1)) - 1);
}

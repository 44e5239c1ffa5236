#include <doctest.h>

#include <cstdint>
#include <vector>

#include "seqlearn/errors.hpp"
#include "seqlearn/forecasting.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/stream.hpp"

using namespace seqlearn;

namespace {
BitString bs(const char* s) { return BitString::from_string(s); }
}  // namespace

TEST_CASE("gap trajectories index by prefix length") {
    ConditionalLaw mu = bernoulli(rat(1, 2));
    ConditionalLaw lam =
        spiked_law(bernoulli(rat(1, 2)), IndexSet::powers_of(10), constant_stream(1));
    BitString path = sample(lam, 3, 1000);
    GapTrajectory g = gap_trajectory(mu, lam, path, rat(1, 4));
    REQUIRE(g.gaps.size() == 1000);
    // right before a spike the source is certain of a 1, the fair coin is not
    CHECK(g.gaps[9] == rat(1, 2));
    CHECK(g.gaps[99] == rat(1, 2));
    CHECK(g.gaps[999] == rat(1, 2));
    CHECK(g.gaps[0] == rat(0));
    CHECK(g.gaps[500] == rat(0));
    CHECK(g.checkpoints.back() == 1000);
    CHECK(g.at_checkpoint.size() == g.checkpoints.size());
    // good times are everything except the three pre-spike positions
    CHECK(g.good_density == rat(997, 1000));
}

TEST_CASE("matching laws are consistent with zero gaps") {
    ConditionalLaw mu = bernoulli(rat(1, 2));
    NcReport rep = check_nc(mu, bernoulli(rat(1, 2)), {1, 2, 3}, 2000, rat(1, 20));
    CHECK(rep.verdict == Verdict::consistent);
    for (const auto& g : rep.trajectories) {
        CHECK(g.gaps.back() == rat(0));
        CHECK(g.tail_violations.empty());
    }
    CHECK(rep.criterion == "NC");
    CHECK(rep.tail == 500);  // default: a quarter of the horizon
}

TEST_CASE("constant disagreement refutes") {
    NcReport rep =
        check_nc(bernoulli(rat(1, 2)), bernoulli(rat(3, 4)), {1, 2}, 2000, rat(1, 10));
    CHECK(rep.verdict == Verdict::refuted);
    for (const auto& g : rep.trajectories) CHECK(g.gaps.back() == rat(1, 4));
}

TEST_CASE("late spikes leave the finite check inconclusive") {
    ConditionalLaw mu = bernoulli(rat(1, 2));
    ConditionalLaw lam =
        spiked_law(bernoulli(rat(1, 2)), IndexSet::powers_of(10), constant_stream(1));
    NcReport rep = check_nc(mu, lam, {1, 2, 3, 4}, 10000, rat(1, 4));
    CHECK(rep.verdict == Verdict::inconclusive);
    for (std::size_t i = 0; i < rep.per_seed.size(); ++i) {
        CHECK(rep.per_seed[i] == Verdict::inconclusive);
        CHECK(rep.trajectories[i].tail_violations ==
              std::vector<std::uint64_t>{10000});  // the 10^4 spike sits in the tail
    }
}

TEST_CASE("rule of succession closes the gap on coin flips") {
    ConditionalLaw lb = laplace_bayes();
    for (const auto& p : {rat(1, 4), rat(1, 2), rat(9, 10)}) {
        NcReport rep = check_nc(lb, bernoulli(p), {1, 2, 3, 4, 5}, 4000, rat(1, 20));
        std::size_t fine = 0;
        for (const auto& g : rep.trajectories)
            if (g.gaps.back() < rat(1, 20)) ++fine;
        CHECK(fine >= 4);  // allow one unlucky path at this short horizon
    }
}

TEST_CASE("weak flavor scores the good-time density") {
    ConditionalLaw mu = bernoulli(rat(1, 2));
    ConditionalLaw lam =
        spiked_law(bernoulli(rat(1, 2)), IndexSet::powers_of(10), constant_stream(1));
    NcReport rep = check_weak_nc(mu, lam, {1, 2, 3}, 10000, rat(1, 4), rat(1));
    CHECK(rep.criterion == "weakNC");
    CHECK(rep.verdict == Verdict::consistent);  // bad times have density 4/10^4
    for (const auto& g : rep.trajectories) CHECK(g.good_density == rat(9996, 10000));

    NcReport bad = check_weak_nc(bernoulli(rat(1, 2)), bernoulli(rat(3, 4)), {1, 2}, 2000,
                                 rat(1, 10), rat(1));
    CHECK(bad.verdict == Verdict::refuted);  // no good times at all
}

TEST_CASE("depth-1 merging is exactly the conditional gap") {
    ConditionalLaw mu = bernoulli(rat(1, 2));
    ConditionalLaw ones = delta_law(constant_stream(1));
    CHECK(merge_depth(mu, ones, bs("1"), 1) == rat(1, 2));
    for (const char* w : {"", "1", "10", "011"}) {
        ConditionalLaw lam = laplace_bayes();
        CHECK(merge_depth(mu, lam, bs(w), 1) == rat_abs(mu.p1(bs(w)) - lam.p1(bs(w))));
    }
}

TEST_CASE("merging distance never shrinks with depth") {
    ConditionalLaw mu = laplace_bayes();
    ConditionalLaw lam = bernoulli(rat(2, 3));
    for (const char* w : {"", "1", "1101"}) {
        Rational prev{0};
        for (std::uint64_t d = 1; d <= 6; ++d) {
            Rational v = merge_depth(mu, lam, bs(w), d);
            CHECK(v >= prev);
            CHECK(v <= rat(1));
            prev = v;
        }
    }
}

TEST_CASE("identical laws merge to zero at every depth") {
    ConditionalLaw mu = laplace_bayes();
    for (std::uint64_t d = 1; d <= 5; ++d) CHECK(merge_depth(mu, mu, bs("01"), d) == rat(0));
}

TEST_CASE("glued sources merge exactly past the partition") {
    ConditionalLaw mu = laplace_bayes();
    ConditionalLaw lam = glue_partition({bs("0"), bs("10"), bs("11")},
                                        {rat(1, 10), rat(2, 10), rat(7, 10)}, mu);
    for (const char* w : {"0", "10", "11", "011", "1101", "1100110"})
        for (std::uint64_t d = 1; d <= 6; ++d)
            CHECK(merge_depth(mu, lam, bs(w), d) == rat(0));
    // at the root the partition weights still separate the laws
    CHECK(merge_depth(mu, lam, bs(""), 2) > rat(0));
}

TEST_CASE("zero-weight prefixes are rejected") {
    ConditionalLaw ones = delta_law(constant_stream(1));
    CHECK_THROWS_AS(merge_depth(bernoulli(rat(1, 2)), ones, bs("0"), 2), precondition_error);
}

TEST_CASE("strong check carries its depth caveat") {
    ConditionalLaw mu = laplace_bayes();
    ConditionalLaw lam = glue_partition({bs("0"), bs("10"), bs("11")},
                                        {rat(1, 10), rat(2, 10), rat(7, 10)}, mu);
    StrongNcReport rep = check_strong_nc(mu, lam, {1, 2, 3}, 300, 4, rat(1, 10));
    CHECK(rep.verdict == Verdict::consistent);
    CHECK(rep.criterion == "strongNC");
    CHECK(!rep.caveat.empty());
    for (const auto& t : rep.trajectories) CHECK(t.values.back() == rat(0));

    StrongNcReport bad =
        check_strong_nc(bernoulli(rat(1, 2)), bernoulli(rat(3, 4)), {1, 2}, 400, 1, rat(1, 10));
    CHECK(bad.verdict == Verdict::refuted);
    for (const auto& t : bad.trajectories)
        for (const auto& v : t.values) CHECK(v == rat(1, 4));
}

TEST_CASE("forecast-defeating streams blow the 9/10 threshold at every zero") {
    BitStream sigma = defeat_nc(bernoulli(rat(19, 20)));
    // the conditional always exceeds 9/10, so block j has the least length > 2^j
    BitString head = sigma.prefix(64);
    CHECK(head.prefix(4).str() == "1110");  // block length 3, then the zero
    std::vector<std::uint64_t> zeros;
    for (std::uint64_t k = 1; k <= 64; ++k)
        if (head.bit(k) == 0) zeros.push_back(k);
    CHECK(zeros == std::vector<std::uint64_t>{4, 10, 20, 38});  // blocks 3,5,9,17

    BitStream lb = defeat_nc(laplace_bayes());
    auto cur = laplace_bayes().cursor();
    std::uint64_t zero_count = 0;
    for (std::uint64_t k = 1; k <= (1 << 14); ++k) {
        Bit b = lb.bit(k);
        if (b == 0) {
            ++zero_count;
            CHECK(cur->prob_one() > rat(9, 10));
        }
        cur->advance(b);
    }
    CHECK(zero_count <= 14);
    CHECK(zero_count >= 1);
}

TEST_CASE("a fair coin cannot be pushed past 9/10") {
    // lazily built: the failed block search surfaces on the first forced bit
    CHECK_THROWS_AS(defeat_nc(bernoulli(rat(1, 2)), 256).bit(1), construction_error);
    bool threw = false;
    try {
        defeat_nc(bernoulli(rat(1, 2)), 256).bit(1);
    } catch (const construction_error& e) {
        threw = true;
        CHECK(e.block == 1);
    }
    CHECK(threw);
}

TEST_CASE("sampled-path positivity guards fire") {
    // forecaster that kills every 0-branch cannot walk a path containing 0s
    ConditionalLaw ones = delta_law(constant_stream(1));
    CHECK_THROWS_AS(check_strong_nc(ones, bernoulli(rat(1, 2)), {1}, 100, 2, rat(1, 10)),
                    precondition_error);
}

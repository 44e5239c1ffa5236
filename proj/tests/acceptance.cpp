// End-to-end acceptance checks: one line per criterion, nonzero exit on any
// failure.  Tolerances and sample plans are pinned here, not configurable.
#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "seqlearn/category.hpp"
#include "seqlearn/certificate.hpp"
#include "seqlearn/errors.hpp"
#include "seqlearn/extrapolation.hpp"
#include "seqlearn/forecasting.hpp"
#include "seqlearn/index_set.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/registry.hpp"
#include "seqlearn/stream.hpp"

using namespace seqlearn;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::ostringstream line;
    line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << std::setw(2) << std::setfill('0')
         << idx << ": " << name;
    if (!detail.empty()) line << " -- " << detail;
    std::cout << line.str() << "\n";
    if (!ok) ++failures;
}

void run_criterion(int idx, const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("unexpected exception: ") + e.what();
        ok = false;
    }
    report(idx, name, ok, detail);
}

BitString bits(const char* s) { return BitString::from_string(s); }

// all strings of length <= max_len, shortest first
std::vector<BitString> strings_up_to(std::size_t max_len) {
    std::vector<BitString> out;
    out.push_back(BitString{});
    for (std::size_t len = 1; len <= max_len; ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            BitString w;
            for (std::size_t i = 0; i < len; ++i)
                w.push_back((v >> (len - 1 - i)) & 1 ? 1 : 0);
            out.push_back(std::move(w));
        }
    }
    return out;
}

// first position where the two streams differ, or 0 if none within the window
std::uint64_t first_divergence(const BitStream& a, const BitStream& b, std::uint64_t window) {
    for (std::uint64_t t = 1; t <= window; ++t)
        if (a.bit(t) != b.bit(t)) return t;
    return 0;
}

bool evil_twins_split(std::string& detail) {
    const std::uint64_t horizon = 10000;
    std::vector<BitStream> corpus;
    for (const std::string& name : standard_corpus()) corpus.push_back(make_stream(name));
    std::size_t pairs = 0;
    for (const std::string& mname : standard_extrapolators()) {
        Extrapolator m = make_extrapolator(mname);
        Extrapolator twin = evil_twin(m);
        for (const BitStream& s : corpus) {
            std::uint64_t e1 = error_positions(m, s, horizon).size();
            std::uint64_t e2 = error_positions(twin, s, horizon).size();
            if (e1 + e2 != horizon) {
                detail = mname + " on " + s.name() + " splits " + std::to_string(e1) + "+" +
                         std::to_string(e2);
                return false;
            }
            ++pairs;
        }
    }
    detail = std::to_string(pairs) + " guesser/stream pairs split " +
             std::to_string(horizon) + " exactly";
    return true;
}

bool own_guesses_stick(std::string& detail) {
    const std::uint64_t horizon = 2000, tail = 500;
    std::vector<BitString> stems = strings_up_to(6);
    std::size_t checked = 0;
    for (const std::string& mname : standard_extrapolators()) {
        Extrapolator m = make_extrapolator(mname);
        for (const BitString& w : stems) {
            VerdictReport rep = check_nv(m, guess_sequence(m, w), horizon, tail);
            bool late_error =
                !rep.error_positions.empty() && rep.error_positions.back() > w.size();
            if (rep.verdict != Verdict::consistent || late_error) {
                detail = mname + " stumbles past its own seed \"" + w.str() + "\"";
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " guesser/seed runs, never an error past the seed";
    return true;
}

bool spiked_pair_densities(std::string& detail) {
    const std::uint64_t horizon = 10000;
    Extrapolator m = always_bit(1);
    auto [favorable, defiant] =
        adversarial_pair(m, BitString{}, constant_stream(0), IndexSet::powers_of(10));
    std::uint64_t ef = error_positions(m, favorable, horizon).size();
    std::uint64_t ed = error_positions(m, defiant, horizon).size();
    VerdictReport vf = check_weak_nv(m, favorable, horizon, rat(1), rat(1, 100));
    VerdictReport vd = check_weak_nv(m, defiant, horizon, rat(1), rat(1, 100));
    bool ok = ef == 4 && ed >= horizon - 4 && vf.verdict == Verdict::consistent &&
              vd.verdict == Verdict::refuted;
    std::ostringstream os;
    os << ef << " errors on the favorable stream, " << ed << " on the defiant one";
    detail = os.str();
    return ok;
}

bool defeat_streams_check_out(std::string& detail) {
    const std::uint64_t budget = std::uint64_t{1} << 20;
    const std::uint64_t horizon = std::uint64_t{1} << 14;
    std::size_t built = 0;
    std::vector<std::string> walled;
    for (const std::string& mname : standard_extrapolators()) {
        Extrapolator m = make_extrapolator(mname);
        try {
            BitStream sigma = defeat_nv(m, budget);
            auto errs = error_positions(m, sigma, horizon);
            std::vector<std::uint64_t> zeros;
            for (std::uint64_t t = 1; t <= horizon; ++t)
                if (sigma.bit(t) == Bit{0}) zeros.push_back(t);
            for (std::size_t j = 0; j < zeros.size(); ++j) {
                if (!std::binary_search(errs.begin(), errs.end(), zeros[j])) {
                    detail = mname + ": zero at " + std::to_string(zeros[j]) +
                             " is not an error";
                    return false;
                }
                if (zeros[j] <= (std::uint64_t{1} << std::min<std::size_t>(j + 1, 62))) {
                    detail = mname + ": zero " + std::to_string(j + 1) + " sits at " +
                             std::to_string(zeros[j]) + ", not past 2^" +
                             std::to_string(j + 1);
                    return false;
                }
            }
            ++built;
        } catch (const construction_error& e) {
            walled.push_back(mname + " (block " + std::to_string(e.block) + ")");
        }
    }
    std::ostringstream os;
    os << built << " defeating streams verified to " << horizon;
    if (!walled.empty()) {
        os << "; construction walls reported for ";
        for (std::size_t i = 0; i < walled.size(); ++i) os << (i ? ", " : "") << walled[i];
    }
    detail = os.str();
    return true;
}

bool error_parity_combiner_dominates(std::string& detail) {
    const std::uint64_t horizon = 2000, tail = 500;
    Extrapolator base = always_bit(0);
    std::vector<BitStream> family = {constant_stream(1), alternating_stream()};
    Extrapolator comb = combine_nv(base, family);
    for (const BitStream& member : family) {
        if (check_nv(comb, member, horizon, tail).verdict != Verdict::consistent) {
            detail = "combiner misses family member " + member.name();
            return false;
        }
    }
    std::size_t matched = 0;
    for (const char* stem : {"", "1", "01", "110", "0101"}) {
        BitStream guessed = guess_sequence(base, bits(stem));
        Verdict vb = check_nv(base, guessed, horizon, tail).verdict;
        Verdict vc = check_nv(comb, guessed, horizon, tail).verdict;
        if (vb != vc) {
            detail = std::string("verdicts diverge on the sequence guessed from \"") + stem +
                     "\"";
            return false;
        }
        ++matched;
    }
    detail = "both family members learned, verdicts match the base on " +
             std::to_string(matched) + " guessed sequences";
    return true;
}

bool windowed_combiner_disagreement_bound(std::string& detail) {
    const std::uint64_t horizon = std::uint64_t{1} << 14;
    const std::uint64_t bound = 4 * 14;  // family size times log2(horizon)
    Extrapolator base = always_bit(0);
    std::vector<BitStream> family = {constant_stream(1), alternating_stream(),
                                     periodic_stream(bits("110")), constant_stream(0)};
    Extrapolator comb = combine_weak(base, family);
    std::vector<BitStream> probes;
    for (const char* p : {"10", "100", "1001", "0011", "111000", "10110"})
        probes.push_back(periodic_stream(bits(p)));
    for (std::uint64_t seed : {1, 2, 3, 4})
        probes.push_back(sampled_stream(bernoulli(rat(1, 2)), seed));
    std::uint64_t worst = 0;
    for (const BitStream& s : probes) {
        for (const BitStream& member : family) {
            std::uint64_t div = first_divergence(s, member, 100);
            if (div == 0) {
                detail = s.name() + " never leaves " + member.name() + " within 100 bits";
                return false;
            }
        }
        BitString path = s.prefix(horizon);
        auto bc = base.scanner();
        auto cc = comb.scanner();
        std::uint64_t disagreements = 0;
        for (std::uint64_t t = 1; t <= horizon; ++t) {
            if (bc->predict() != cc->predict()) ++disagreements;
            Bit b = path.bit(t);
            bc->advance(b);
            cc->advance(b);
        }
        worst = std::max(worst, disagreements);
        if (disagreements > bound) {
            detail = s.name() + " draws " + std::to_string(disagreements) +
                     " disagreements, cap is " + std::to_string(bound);
            return false;
        }
    }
    detail = "worst disagreement count " + std::to_string(worst) + " of " +
             std::to_string(bound) + " allowed over 10 streams";
    return true;
}

bool add_one_estimator_converges(std::string& detail) {
    const std::uint64_t horizon = 10000;
    const Rational eps = rat(1, 20);
    const int need = 27, seeds = 30;
    std::ostringstream os;
    bool ok = true;
    for (const Rational& p : {rat(1, 4), rat(1, 2), rat(9, 10)}) {
        int good = 0;
        for (std::uint64_t seed = 1; seed <= static_cast<std::uint64_t>(seeds); ++seed) {
            BitString path = sample(bernoulli(p), seed, horizon);
            std::uint64_t ones = 0;
            for (std::size_t k = 1; k <= path.size(); ++k) ones += path.bit(k) == 1;
            Rational estimate(ones + 1, horizon + 2);
            estimate.canonicalize();
            if (rat_abs(estimate - p) < eps) ++good;
        }
        if (good < need) ok = false;
        os << (os.str().empty() ? "" : ", ") << good << "/" << seeds << " at bias "
           << rat_str(p);
    }
    detail = os.str() + " inside 1/20";
    return ok;
}

bool contrarian_forecaster_gap(std::string& detail) {
    std::vector<ConditionalLaw> laws = {bernoulli(rat(1, 2)), laplace_bayes(),
                                        markov(1, {rat(1, 4), rat(2, 3)})};
    std::vector<BitString> stems = strings_up_to(12);
    const Rational floor = rat(2, 5);
    Rational least{1};
    for (const ConditionalLaw& mu : laws) {
        ConditionalLaw twin = evil_forecaster(mu);
        for (const BitString& w : stems) {
            Rational gap = rat_abs(mu.p1(w) - twin.p1(w));
            least = std::min(least, gap);
            if (gap < floor) {
                detail = mu.name() + " keeps only " + rat_str(gap) + " of gap after \"" +
                         w.str() + "\"";
                return false;
            }
        }
    }
    detail = "smallest gap " + rat_str(least) + " over " +
             std::to_string(3 * stems.size()) + " conditionals, floor 2/5";
    return true;
}

bool glued_source_merges_exactly(std::string& detail) {
    ConditionalLaw mu = laplace_bayes();
    ConditionalLaw lambda =
        glue_partition({bits("0"), bits("10"), bits("11")},
                       {rat(1, 10), rat(2, 10), rat(7, 10)}, laplace_bayes());
    std::size_t zeros = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        BitString path = sample(lambda, seed, 200);
        for (std::size_t n = 3; n <= 200; ++n) {
            BitString prefix = path.prefix(n);
            for (std::uint64_t d = 1; d <= 6; ++d) {
                Rational v = merge_depth(mu, lambda, prefix, d);
                if (v != 0) {
                    detail = "seed " + std::to_string(seed) + ", prefix " +
                             std::to_string(n) + ", depth " + std::to_string(d) +
                             " leaves " + rat_str(v);
                    return false;
                }
                ++zeros;
            }
        }
    }
    detail = std::to_string(zeros) + " merge values, all exactly zero";
    return true;
}

bool mixture_truncations_are_cauchy(std::string& detail) {
    std::vector<ConditionalLaw> members = {bernoulli(rat(1, 3)),
                                           bernoulli(rat(2, 3)),
                                           laplace_bayes(),
                                           markov(1, {rat(1, 4), rat(2, 3)}),
                                           ref_forecaster(),
                                           bernoulli(rat(1, 7))};
    auto family = [&members](std::uint64_t k) { return members[k % members.size()]; };
    ConditionalLaw base = bernoulli(rat(1, 2));
    std::vector<BitString> stems = strings_up_to(10);
    std::size_t checked = 0;
    for (std::uint64_t n : {4u, 8u, 12u, 16u, 20u}) {
        Rational budget = pow2(-static_cast<long>(n)) + pow2(-static_cast<long>(n + 5));
        for (const BitString& w : stems) {
            ApproxValue coarse = mixture_approx(base, family, w, n);
            ApproxValue fine = mixture_approx(base, family, w, n + 5);
            if (coarse.error_bound != pow2(-static_cast<long>(n))) {
                detail = "advertised error bound drifts at precision " + std::to_string(n);
                return false;
            }
            if (rat_abs(coarse.estimate - fine.estimate) >= budget) {
                detail = "estimates " + std::to_string(n) + " and " + std::to_string(n + 5) +
                         " differ by " + rat_str(rat_abs(coarse.estimate - fine.estimate)) +
                         " after \"" + w.str() + "\"";
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " adjacent-precision pairs inside the dyadic budget";
    return true;
}

bool density_learning_splits_from_plain(std::string& detail) {
    const std::uint64_t horizon = 10000;
    std::size_t consistent = 0;
    for (std::uint64_t b : {2, 3, 10}) {
        IndexSet zeros = IndexSet::powers_of(b);
        BitStream sigma([zeros](const BitString& sofar) {
            return zeros.contains(sofar.size() + 1) ? Bit{0} : Bit{1};
        }, "ones-except-powers-of-" + std::to_string(b));
        NcReport rep = check_weak_nc(ref_forecaster(), delta_law(sigma), {1}, horizon,
                                     rat(1, 4), rat(1), rat(1, 100));
        if (rep.verdict != Verdict::consistent) {
            detail = "sparse-zero source with base " + std::to_string(b) +
                     " is not density-learned";
            return false;
        }
        ++consistent;
    }

    const std::uint64_t horizon2 = std::uint64_t{1} << 14;
    BitStream sigma = defeat_nc(laplace_bayes(), std::uint64_t{1} << 20);
    auto cur = laplace_bayes().cursor();
    std::uint64_t zero_count = 0;
    for (std::uint64_t t = 1; t <= horizon2; ++t) {
        Bit b = sigma.bit(t);
        if (b == 0) {
            if (cur->prob_one() < rat(9, 10)) {
                detail = "zero at " + std::to_string(t) + " carries gap only " +
                         rat_str(cur->prob_one());
                return false;
            }
            ++zero_count;
        }
        cur->advance(b);
    }
    if (zero_count == 0 || zero_count > 14) {
        detail = std::to_string(zero_count) + " zeros, expected between 1 and 14";
        return false;
    }
    std::ostringstream os;
    os << consistent << " sparse-zero sources density-learned; " << zero_count
       << " defeating zeros in " << horizon2 << ", each with gap >= 9/10";
    detail = os.str();
    return true;
}

bool certified_shrink_chain(std::string& detail) {
    const std::uint64_t levels = 7;
    const std::uint64_t min_superbad = 3;
    ConditionalLaw mu = bernoulli(rat(1, 2));
    MeagreChain chain = meagre_chain(mu, full_ball(), 6);
    if (chain.steps.size() != 6) {
        detail = "chain stopped after " + std::to_string(chain.steps.size()) + " steps";
        return false;
    }
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        if (!replay(chain.steps[i].contains_cert) || !replay(chain.steps[i].bad_gap_cert)) {
            detail = "certificate at step " + std::to_string(i + 1) + " fails to replay";
            return false;
        }
    }
    const BasisBall& fin = chain.steps.back().ball;
    std::uint64_t sb_center = superbad_count(mu, center_extension(mu, fin), levels);
    std::uint64_t sb_min = sb_center;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ConditionalLaw law = weight_table_law(fin.depth, perturb_center(fin, seed), mu);
        sb_min = std::min(sb_min, superbad_count(mu, law, levels));
    }
    if (sb_center < min_superbad || sb_min < min_superbad) {
        detail = "super-bad count dropped to " + std::to_string(std::min(sb_center, sb_min));
        return false;
    }
    std::ostringstream os;
    os << "12 certificates replay; super-bad count >= " << sb_min << " (center "
       << sb_center << ") across 21 laws at " << levels << " levels";
    detail = os.str();
    return true;
}

bool witness_strategy_wins_long_games(std::string& detail) {
    const std::uint64_t rounds = 40, pad = 64;
    Rational least{1};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        LongGameStats st = bm_long_game_constant(1, seed, rounds, pad);
        least = std::min(least, st.nasty_density);
        if (st.wicked_prefixes < rounds || st.nasty_density < rat(1, 4) ||
            st.padded_wicked < st.wicked_prefixes) {
            detail = "seed " + std::to_string(seed) + " breaks the wickedness targets";
            return false;
        }
    }
    // the tally is the same game the explicit engine plays, checked where both fit
    Extrapolator m = always_bit(1);
    Strategy two = bm_strategy_from_witness(nwd_witness_weaknv(m));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        BitString u = play_banach_mazur(random_strategy(seed), two, 6).realized_prefix();
        LongGameStats st = bm_long_game_constant(1, seed, 6, 0);
        if (st.length != u.size() || st.wicked_prefixes != wicked_prefix_count(m, u)) {
            detail = "run-length tally diverges from the explicit game at seed " +
                     std::to_string(seed);
            return false;
        }
    }
    detail = "50 games of " + std::to_string(rounds) +
             " rounds hit every target, least nasty density " + rat_str(least) +
             "; tally cross-checked against the explicit engine";
    return true;
}

bool escape_route_defies_guesser(std::string& detail) {
    Extrapolator m = always_bit(1);
    BitString x = baire_escape(nwd_witness_weaknv(m), bits("1"), 10);
    std::uint64_t wick = wicked_prefix_count(m, x);
    detail = std::to_string(wick) + " wicked prefixes along " + std::to_string(x.size()) +
             " bits, 10 required";
    return wick >= 10;
}

bool block_doubling_starves_repeater(std::string& detail) {
    const std::uint64_t horizon = std::uint64_t{1} << 16;
    auto errs = error_positions(last_bit(), coarse_block_double(alternating_stream()), horizon);
    detail = std::to_string(errs.size()) + " errors in " + std::to_string(horizon) +
             " bits, 17 allowed";
    return errs.size() <= 17;
}

}  // namespace

int main() {
    run_criterion(1, "evil twins split every error count exactly", evil_twins_split);
    run_criterion(2, "every guesser locks onto its own guessed sequences", own_guesses_stick);
    run_criterion(3, "spiked adversary pair pins density verdicts", spiked_pair_densities);
    run_criterion(4, "defeating streams put sparse zeros on errors", defeat_streams_check_out);
    run_criterion(5, "error-parity combiner learns its family and keeps base verdicts",
                  error_parity_combiner_dominates);
    run_criterion(6, "windowed combiner rarely leaves its base",
                  windowed_combiner_disagreement_bound);
    run_criterion(7, "add-one estimator closes the gap on coin flips",
                  add_one_estimator_converges);
    run_criterion(8, "contrarian forecaster keeps a 2/5 gap everywhere",
                  contrarian_forecaster_gap);
    run_criterion(9, "reweighted glue source merges to zero at every depth",
                  glued_source_merges_exactly);
    run_criterion(10, "mixture truncations stay dyadically Cauchy",
                  mixture_truncations_are_cauchy);
    run_criterion(11, "density forecasting survives sparse surprises that defeat plain",
                  density_learning_splits_from_plain);
    run_criterion(12, "shrink chain certifies an avoiding ball with super-bad laws",
                  certified_shrink_chain);
    run_criterion(13, "witness strategy wins 50 long extension games",
                  witness_strategy_wins_long_games);
    run_criterion(14, "iterated witness escapes the first ten covers",
                  escape_route_defies_guesser);
    run_criterion(15, "block doubling starves the last-bit repeater",
                  block_doubling_starves_repeater);

    if (failures == 0) {
        std::cout << "all 15 criteria passed\n";
        return 0;
    }
    std::cout << failures << " criterion(s) failed\n";
    return 1;
}

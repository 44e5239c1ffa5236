#include "seqlearn/category.hpp"

#include <sstream>

#include "seqlearn/digest.hpp"
#include "seqlearn/errors.hpp"
#include "seqlearn/rng.hpp"

namespace seqlearn {

Rational wickedness(const Extrapolator& m, const BitString& w) {
    if (w.size() == 0) throw precondition_error("wickedness needs a non-empty string");
    auto sc = m.scanner();
    std::uint64_t nasty = 0;
    for (std::size_t k = 1; k <= w.size(); ++k) {
        Bit b = w.bit(k);
        if (sc->predict() != b) ++nasty;
        sc->advance(b);
    }
    Rational q(static_cast<unsigned long>(nasty), static_cast<unsigned long>(w.size()));
    q.canonicalize();
    return q;
}

std::uint64_t wicked_prefix_count(const Extrapolator& m, const BitString& x) {
    auto sc = m.scanner();
    std::uint64_t nasty = 0, wicked = 0;
    for (std::size_t k = 1; k <= x.size(); ++k) {
        Bit b = x.bit(k);
        if (sc->predict() != b) ++nasty;
        sc->advance(b);
        if (2 * nasty >= k) ++wicked;
    }
    return wicked;
}

WitnessFamily nwd_witness_weaknv(const Extrapolator& m) {
    WitnessFamily fam;
    fam.F = [m](std::uint64_t n, const BitString& w) {
        auto sc = m.scanner();
        BitString x = w;
        for (std::size_t k = 1; k <= w.size(); ++k) sc->advance(w.bit(k));
        std::uint64_t extra = (w.size() == 0 ? 1 : w.size()) + n;
        for (std::uint64_t i = 0; i < extra; ++i) {
            Bit b = 1 - sc->predict();
            x.push_back(b);
            sc->advance(b);
        }
        return x;
    };
    return fam;
}

BitString GameTranscript::realized_prefix() const {
    BitString out;
    for (const auto& mv : moves) out.append(mv);
    return out;
}

GameTranscript play_banach_mazur(const Strategy& player_one, const Strategy& player_two,
                                 std::uint64_t rounds) {
    if (rounds == 0) throw precondition_error("the game needs at least one round");
    const std::uint64_t cap = BitStream::default_cache_cap();
    GameTranscript t;
    std::uint64_t length = 0;
    for (std::uint64_t k = 1; k <= rounds; ++k) {
        BitString mv = player_one(t);
        if (mv.size() == 0)
            throw rule_violation("Player I played the empty string", "Player I");
        length += mv.size();
        t.moves.push_back(std::move(mv));
        mv = player_two(t);
        if (mv.size() == 0)
            throw rule_violation("Player II played the empty string", "Player II");
        length += mv.size();
        t.moves.push_back(std::move(mv));
        if (length > cap)
            throw resource_error("realized prefix reached " + std::to_string(length) +
                                 " bits after round " + std::to_string(k) +
                                 ", past the cache cap " + std::to_string(cap) +
                                 " (responses double the prefix; raise SEQLEARN_STREAM_CAP "
                                 "or use the run-length game summary)");
    }
    return t;
}

Strategy bm_strategy_from_witness(const WitnessFamily& fam) {
    return [fam](const GameTranscript& t) {
        if (t.moves.size() % 2 != 1)
            throw precondition_error("the witness strategy moves second");
        std::uint64_t k = (t.moves.size() + 1) / 2;
        BitString u = t.realized_prefix();
        BitString x = fam.F(k, u);
        if (x.size() <= u.size() || !u.is_prefix_of(x))
            throw rule_violation("witness failed to strictly extend the prefix", "witness");
        BitString suffix;
        for (std::size_t i = u.size() + 1; i <= x.size(); ++i) suffix.push_back(x.bit(i));
        return suffix;
    };
}

Strategy constant_strategy(const BitString& word) {
    return [word](const GameTranscript&) { return word; };
}

// Keyed on the move count alone so replays with a summarized transcript (long
// games keep only run lengths, not bits) still see the same moves.
Strategy random_strategy(std::uint64_t seed) {
    return [seed](const GameTranscript& t) {
        std::uint64_t key = mix64(seed ^ mix64(t.moves.size() + 1));
        std::uint64_t len = 1 + (key & 3);
        BitString mv;
        for (std::uint64_t i = 0; i < len; ++i)
            mv.push_back(static_cast<Bit>((key >> (2 + i)) & 1));
        return mv;
    };
}

LongGameStats bm_long_game_constant(Bit b, std::uint64_t seed, std::uint64_t rounds,
                                    std::uint64_t pad) {
    if (rounds == 0) throw precondition_error("the game needs at least one round");
    if (b != 0 && b != 1) throw precondition_error("predictions must be 0 or 1");
    LongGameStats st;
    st.rounds = rounds;
    BigInt L = 0, N = 0, W = 0;
    for (std::uint64_t k = 1; k <= rounds; ++k) {
        // Player I: same draw random_strategy makes from a 2(k-1)-move transcript
        std::uint64_t key = mix64(seed ^ mix64(2 * (k - 1) + 1));
        std::uint64_t len = 1 + (key & 3);
        for (std::uint64_t i = 0; i < len; ++i) {
            Bit v = static_cast<Bit>((key >> (2 + i)) & 1);
            L += 1;
            if (v != b) N += 1;
            if (2 * N >= L) W += 1;
        }
        // Player II: |u| + k defying bits, one uniform run
        BigInt a = L + k;
        BigInt first = L - 2 * N;  // least i in the run with 2(N+i) >= L+i
        if (first < 1) first = 1;
        if (a >= first) W += a - first + 1;
        N += a;
        L += a;
    }
    st.length = L;
    st.nasty = N;
    st.wicked_prefixes = W;
    st.nasty_density = Rational(N, L);
    st.nasty_density.canonicalize();
    // a tail of agreeing bits: prefix L+i stays wicked while i <= 2N - L
    BigInt extra = 2 * N - L;
    if (extra < 0) extra = 0;
    if (extra > pad) extra = pad;
    st.padded_wicked = W + extra;
    return st;
}

BitString baire_escape(const WitnessFamily& fam, const BitString& w, std::uint64_t steps) {
    if (steps == 0) throw precondition_error("escape needs at least one step");
    BitString cur = w;
    for (std::uint64_t k = 0; k < steps; ++k) {
        BitString x = fam.F(k, cur);
        if (x.size() <= cur.size() || !cur.is_prefix_of(x))
            throw rule_violation("witness failed to strictly extend the prefix", "witness");
        cur = std::move(x);
        cur.push_back(0);
    }
    return cur;
}

void BasisBall::validate() const {
    if (depth == 0 || depth > 26) throw precondition_error("ball depth out of range");
    if (center.size() != (std::size_t{1} << depth))
        throw precondition_error("ball center needs 2^depth cells");
    Rational sum(0);
    for (const auto& c : center) {
        if (c < 0) throw precondition_error("ball center cells must be >= 0");
        sum += c;
    }
    if (sum != 1) throw precondition_error("ball center must sum to 1");
    if (radius <= 0) throw precondition_error("ball radius must be positive");
}

std::size_t BasisBall::index_of(const BitString& w) {
    std::size_t idx = 0;
    for (std::size_t k = 1; k <= w.size(); ++k) idx = (idx << 1) | static_cast<std::size_t>(w.bit(k));
    return idx;
}

BitString BasisBall::string_at(std::uint64_t depth, std::size_t index) {
    BitString w;
    for (std::uint64_t k = depth; k-- > 0;)
        w.push_back(static_cast<Bit>((index >> k) & 1));
    return w;
}

BasisBall uniform_ball(std::uint64_t depth, const Rational& radius) {
    BasisBall b;
    b.depth = depth;
    b.center.assign(std::size_t{1} << depth, pow2(-static_cast<long>(depth)));
    b.radius = radius;
    b.validate();
    return b;
}

BasisBall full_ball() { return uniform_ball(1, Rational(1, 2)); }

std::string to_text(const BasisBall& ball) {
    std::ostringstream out;
    out << "ball " << ball.depth << "\n";
    out << "radius " << ball.radius.get_num().get_str() << " " << ball.radius.get_den().get_str()
        << "\n";
    for (std::size_t i = 0; i < ball.center.size(); ++i)
        out << "cell " << BasisBall::string_at(ball.depth, i).str() << " "
            << ball.center[i].get_num().get_str() << " " << ball.center[i].get_den().get_str()
            << "\n";
    out << "end\n";
    return out.str();
}

BasisBall parse_ball(const std::string& text) {
    BasisBall ball;
    ball.center.clear();
    std::istringstream in(text);
    std::string line;
    bool have_depth = false, ended = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "ball") {
            ls >> ball.depth;
            have_depth = true;
        } else if (tag == "radius") {
            std::string num, den;
            ls >> num >> den;
            ball.radius = Rational(BigInt(num), BigInt(den));
            ball.radius.canonicalize();
        } else if (tag == "cell") {
            std::string bits, num, den;
            ls >> bits >> num >> den;
            if (!ls) throw precondition_error("malformed ball cell: " + line);
            Rational v{BigInt(num), BigInt(den)};
            v.canonicalize();
            ball.center.push_back(v);
        } else if (tag == "end") {
            ended = true;
            break;
        } else {
            throw precondition_error("unknown ball line: " + line);
        }
    }
    if (!have_depth || !ended) throw precondition_error("incomplete ball record");
    ball.validate();
    return ball;
}

namespace {

// mu's chance of 1 after every string of the given length, in cell-index order
std::vector<Rational> level_conditionals(const ConditionalLaw& mu, std::uint64_t depth) {
    std::vector<Rational> out(std::size_t{1} << depth);
    struct Walk {
        std::vector<Rational>* out;
        std::uint64_t depth;
        void run(LawCursor* cur, std::uint64_t level, std::size_t idx) {
            if (level == depth) {
                (*out)[idx] = cur->prob_one();
                return;
            }
            auto c0 = cur->clone();
            c0->advance(0);
            run(c0.get(), level + 1, idx << 1);
            cur->advance(1);
            run(cur, level + 1, (idx << 1) | 1);
        }
    };
    auto cur = mu.cursor();
    Walk{&out, depth}.run(cur.get(), 0, 0);
    return out;
}

}  // namespace

CertOrReject ball_contains(const BasisBall& outer, const BasisBall& inner) {
    outer.validate();
    inner.validate();
    if (inner.depth < outer.depth)
        throw precondition_error("containment needs the inner ball at least as deep");
    std::uint64_t gap = inner.depth - outer.depth;
    TraceBuilder tb("contains");
    tb.premise("outer ball", fnv1a(to_text(outer)));
    tb.premise("inner ball", fnv1a(to_text(inner)));
    std::size_t dmax = 0;
    bool first = true;
    for (std::size_t i = 0; i < outer.center.size(); ++i) {
        std::string cell = BasisBall::string_at(outer.depth, i).str();
        std::size_t base = i << gap;
        std::size_t acc = tb.value(inner.center[base], "inner cell");
        for (std::size_t j = 1; j < (std::size_t{1} << gap); ++j)
            acc = tb.add(acc, tb.value(inner.center[base + j], "inner cell"));
        std::size_t oc = tb.value(outer.center[i], "outer cell " + cell);
        std::size_t dist = tb.abs(tb.sub(acc, oc), "deviation at " + cell);
        dmax = first ? dist : tb.max(dmax, dist);
        first = false;
    }
    std::size_t factor = tb.value(pow2(static_cast<long>(gap)), "2^depth-gap");
    std::size_t term = tb.mul(factor, tb.value(inner.radius, "inner radius"));
    std::size_t lhs = tb.add(dmax, term, "deviation plus inflated radius");
    std::size_t rhs = tb.value(outer.radius, "outer radius");
    if (tb.at(lhs) > tb.at(rhs)) {
        CertOrReject out;
        out.reject_reason = "containment not proven: " + rat_str(tb.at(lhs)) + " > " +
                            rat_str(tb.at(rhs));
        return out;
    }
    CertOrReject out;
    out.cert = tb.conclude(lhs, Relation::le, rhs);
    return out;
}

CertOrReject bad_gap_certificate(const ConditionalLaw& mu, const BasisBall& ball) {
    ball.validate();
    if (!mu.full_support())
        throw precondition_error("gap certification needs a full-support forecaster");
    std::uint64_t k = ball.depth - 1;
    std::vector<Rational> mu1 = level_conditionals(mu, k);
    TraceBuilder tb("bad_gap");
    tb.premise("forecaster " + mu.name(), fnv1a(mu.name()));
    tb.premise("ball", fnv1a(to_text(ball)));
    std::size_t eps = tb.value(ball.radius, "radius");
    std::size_t twoe = tb.add(eps, eps, "twice the radius");
    std::size_t zero = tb.value(Rational(0));
    std::size_t one = tb.value(Rational(1));
    std::size_t floor_step = tb.value(Rational(1, 5), "gap floor");
    std::size_t gmin = 0;
    bool first = true;
    std::string argmin;
    Rational worst(2);
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        std::string cell = k == 0 ? std::string("(empty)") : BasisBall::string_at(k, i).str();
        std::size_t c0 = tb.value(ball.center[2 * i], "cell " + cell + "0");
        std::size_t c1 = tb.value(ball.center[2 * i + 1], "cell " + cell + "1");
        std::size_t cw = tb.add(c0, c1, "cell mass");
        std::size_t den_lo = tb.sub(cw, twoe, "mass lower bound");
        if (tb.at(den_lo) <= 0) {
            CertOrReject out;
            out.reject_reason = "denominator bound not positive at cell " + cell;
            return out;
        }
        std::size_t den_hi = tb.add(cw, twoe, "mass upper bound");
        std::size_t lo = tb.div(tb.max(tb.sub(c1, eps), zero), den_hi, "conditional lower bound");
        std::size_t hi = tb.min(tb.div(tb.add(c1, eps), den_lo), one, "conditional upper bound");
        std::size_t m1 = tb.value(mu1[i], "forecast chance of 1 after " + cell);
        std::size_t bound =
            tb.max(tb.sub(m1, hi), tb.sub(lo, m1), "certified gap at " + cell);
        if (tb.at(bound) < worst) {
            worst = tb.at(bound);
            argmin = cell;
        }
        gmin = first ? bound : tb.min(gmin, bound);
        first = false;
    }
    if (tb.at(gmin) < Rational(1, 5)) {
        CertOrReject out;
        out.reject_reason =
            "gap bound " + rat_str(tb.at(gmin)) + " below 1/5 at cell " + argmin;
        return out;
    }
    CertOrReject out;
    out.cert = tb.conclude(gmin, Relation::ge, floor_step,
                           "every measure in the ball keeps a conditional gap of at least 1/5 "
                           "against the forecaster one level below the ball's depth");
    return out;
}

ShrinkResult shrink_against(const ConditionalLaw& mu, const BasisBall& ball) {
    ball.validate();
    if (!mu.full_support()) throw precondition_error("shrink needs a full-support forecaster");
    for (const auto& c : ball.center)
        if (c <= 0) throw precondition_error("shrink needs strictly positive center cells");
    std::vector<Rational> mu1 = level_conditionals(mu, ball.depth);
    BasisBall next;
    next.depth = ball.depth + 1;
    next.center.resize(ball.center.size() * 2);
    for (std::size_t i = 0; i < ball.center.size(); ++i) {
        Rational light = ball.center[i] / 10;
        Rational heavy = ball.center[i] * 9 / 10;
        // starve the side mu prefers
        if (mu1[i] <= Rational(1, 2)) {
            next.center[2 * i] = light;
            next.center[2 * i + 1] = heavy;
        } else {
            next.center[2 * i] = heavy;
            next.center[2 * i + 1] = light;
        }
    }
    std::string last_blocker = "no radius attempted";
    for (unsigned m = 1; m <= 64; ++m) {
        next.radius = pow10_neg(m);
        CertOrReject inside = ball_contains(ball, next);
        if (!inside.ok()) {
            last_blocker = inside.reject_reason;
            continue;
        }
        CertOrReject gap = bad_gap_certificate(mu, next);
        if (!gap.ok()) {
            last_blocker = gap.reject_reason;
            continue;
        }
        return ShrinkResult{std::move(next), std::move(*inside.cert), std::move(*gap.cert)};
    }
    throw shrink_failure("no radius down to 10^-64 certified; last blocker: " + last_blocker);
}

std::uint64_t superbad_count(const ConditionalLaw& mu, const ConditionalLaw& nu, std::uint64_t K,
                             std::uint64_t max_depth) {
    if (K > max_depth) throw precondition_error("super-bad scan depth exceeds the maximum");
    if (K == 0) return 0;
    std::vector<Rational> min_gap(K + 1, Rational(2));
    struct Walk {
        std::vector<Rational>* min_gap;
        std::uint64_t K;
        void run(LawCursor* mc, LawCursor* nc, std::uint64_t level) {
            if (level >= 1) {
                Rational g = rat_abs(mc->prob_one() - nc->prob_one());
                if (g < (*min_gap)[level]) (*min_gap)[level] = g;
                if (level == K) return;
            }
            auto m0 = mc->clone();
            auto n0 = nc->clone();
            m0->advance(0);
            n0->advance(0);
            run(m0.get(), n0.get(), level + 1);
            mc->advance(1);
            nc->advance(1);
            run(mc, nc, level + 1);
        }
    };
    auto mc = mu.cursor();
    auto nc = nu.cursor();
    Walk{&min_gap, K}.run(mc.get(), nc.get(), 0);
    const Rational floor_gap(1, 5);
    std::uint64_t count = 0, bad_so_far = 0;
    for (std::uint64_t k = 1; k <= K; ++k) {
        if (min_gap[k] >= floor_gap) ++bad_so_far;
        if (2 * bad_so_far > k) ++count;
    }
    return count;
}

ConditionalLaw center_extension(const ConditionalLaw& mu, const BasisBall& ball) {
    ball.validate();
    return weight_table_law(ball.depth, ball.center, mu);
}

MeagreChain meagre_chain(const ConditionalLaw& mu, const BasisBall& start, std::uint64_t t) {
    MeagreChain out;
    out.start = start;
    BasisBall cur = start;
    for (std::uint64_t i = 0; i < t; ++i) {
        ShrinkResult res = shrink_against(mu, cur);
        cur = res.ball;
        out.steps.push_back(
            ChainStep{std::move(res.ball), std::move(res.contains_cert), std::move(res.bad_gap_cert)});
    }
    if (t > start.depth + 1) out.superbad_bound = t - start.depth - 1;
    if (t >= 1) {
        ConditionalLaw ext = center_extension(mu, cur);
        std::uint64_t lo = start.depth, hi = start.depth + t - 1;
        std::vector<Rational> muc = level_conditionals(mu, hi);
        std::vector<Rational> nuc = level_conditionals(ext, hi);
        // per-level minimum over all strings of that length, from the two conditional tables
        TraceBuilder tb("superbad_count");
        tb.premise("forecaster " + mu.name(), fnv1a(mu.name()));
        tb.premise("final ball", fnv1a(to_text(cur)));
        std::size_t floor_step = tb.value(Rational(1, 5), "gap floor");
        std::size_t gmin = 0;
        bool first = true;
        for (std::uint64_t level = lo; level <= hi; ++level) {
            std::vector<Rational> a = level == hi ? muc : level_conditionals(mu, level);
            std::vector<Rational> b = level == hi ? nuc : level_conditionals(ext, level);
            Rational m(2);
            for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, rat_abs(a[i] - b[i]));
            std::size_t v = tb.value(m, "min center gap at level " + std::to_string(level));
            gmin = first ? v : tb.min(gmin, v);
            first = false;
        }
        out.superbad_cert =
            tb.conclude(gmin, Relation::ge, floor_step,
                        "levels " + std::to_string(lo) + ".." + std::to_string(hi) +
                            " are bad for the final center; the majority rule then gives a "
                            "super-bad count of at least " + std::to_string(out.superbad_bound));
    }
    return out;
}

std::vector<Rational> perturb_center(const BasisBall& ball, std::uint64_t seed) {
    ball.validate();
    std::vector<Rational> out = ball.center;
    const std::uint64_t rounds = 8;
    Rational cap = ball.radius / (2 * rounds);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        std::uint64_t n = out.size();
        std::uint64_t a = draw_range(seed, 2 * r + 1, 0, n - 1);
        std::uint64_t b = draw_range(seed, 2 * r + 2, 0, n - 1);
        if (a == b) continue;
        Rational delta = cap * deviate(seed, 100 + r);
        if (delta > out[a]) delta = out[a];
        out[a] -= delta;
        out[b] += delta;
    }
    return out;
}

}  // namespace seqlearn

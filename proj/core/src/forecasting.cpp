#include "seqlearn/forecasting.hpp"

#include <algorithm>

#include "seqlearn/errors.hpp"
#include "seqlearn/index_set.hpp"
#include "seqlearn/parallel.hpp"

namespace seqlearn {

namespace {

bool tail3_nondecreasing(const std::vector<Rational>& v) {
    std::size_t k = std::min<std::size_t>(3, v.size());
    for (std::size_t i = v.size() - k + 1; i < v.size(); ++i)
        if (v[i] < v[i - 1]) return false;
    return true;
}

bool tail3_at_least(const std::vector<Rational>& v, const Rational& bound) {
    std::size_t k = std::min<std::size_t>(3, v.size());
    for (std::size_t i = v.size() - k; i < v.size(); ++i)
        if (v[i] < bound) return false;
    return true;
}

bool tail3_below(const std::vector<Rational>& v, const Rational& bound) {
    std::size_t k = std::min<std::size_t>(3, v.size());
    for (std::size_t i = v.size() - k; i < v.size(); ++i)
        if (v[i] >= bound) return false;
    return true;
}

Verdict majority_verdict(const std::vector<Verdict>& per_seed) {
    std::size_t n = per_seed.size(), ok = 0, bad = 0;
    for (Verdict v : per_seed) {
        if (v == Verdict::consistent) ++ok;
        if (v == Verdict::refuted) ++bad;
    }
    if (ok * 10 >= n * 9) return Verdict::consistent;
    if (bad * 10 >= n * 9) return Verdict::refuted;
    return Verdict::inconclusive;
}

std::uint64_t default_tail(std::uint64_t horizon, std::uint64_t tail) {
    if (tail == 0) tail = horizon / 4;
    return std::min(tail, horizon);
}

void require_seeds(const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw precondition_error("need at least one seed");
}

}  // namespace

GapTrajectory gap_trajectory(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                             const BitString& sigma, const Rational& eps,
                             std::size_t checkpoint_count) {
    if (!mu.full_support()) throw precondition_error("forecaster must have full support");
    if (sigma.size() == 0) throw precondition_error("need a non-empty path");
    GapTrajectory out;
    out.horizon = sigma.size();
    out.eps = eps;
    out.checkpoints = checkpoints(out.horizon, checkpoint_count);
    auto mc = mu.cursor();
    auto lc = lambda.cursor();
    std::uint64_t good = 0;
    std::size_t ci = 0;
    Rational seg(0);
    out.gaps.reserve(sigma.size());
    for (std::uint64_t t = 1; t <= sigma.size(); ++t) {
        Rational g = rat_abs(mc->prob_one() - lc->prob_one());
        if (g < eps) ++good;
        if (g > seg) seg = g;
        out.gaps.push_back(g);
        if (ci < out.checkpoints.size() && t == out.checkpoints[ci]) {
            out.at_checkpoint.push_back(g);
            out.segment_max.push_back(seg);
            Rational dens(static_cast<unsigned long>(good), static_cast<unsigned long>(t));
            dens.canonicalize();
            out.density.push_back(dens);
            seg = 0;
            ++ci;
        }
        Bit b = sigma.bit(t);
        mc->advance(b);
        lc->advance(b);
    }
    out.good_density = out.density.back();
    return out;
}

NcReport check_nc(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                  const std::vector<std::uint64_t>& seeds, std::uint64_t horizon,
                  const Rational& eps, std::uint64_t tail, std::size_t checkpoint_count) {
    require_seeds(seeds);
    NcReport rep;
    rep.criterion = "NC";
    rep.horizon = horizon;
    rep.tail = default_tail(horizon, tail);
    rep.eps = eps;
    rep.checkpoints = checkpoints(horizon, checkpoint_count);
    rep.trajectories.resize(seeds.size());
    rep.per_seed.resize(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        BitString path = sample(lambda, seeds[i], horizon);
        GapTrajectory traj = gap_trajectory(mu, lambda, path, eps, checkpoint_count);
        traj.seed = seeds[i];
        bool quiet = true;
        for (std::uint64_t t = horizon - rep.tail + 1; t <= horizon; ++t) {
            if (traj.gaps[t - 1] >= eps) {
                quiet = false;
                if (traj.tail_violations.size() < 64) traj.tail_violations.push_back(t);
            }
        }
        if (quiet)
            rep.per_seed[i] = Verdict::consistent;
        else if (tail3_at_least(traj.segment_max, 2 * eps) &&
                 tail3_nondecreasing(traj.segment_max))
            rep.per_seed[i] = Verdict::refuted;
        else
            rep.per_seed[i] = Verdict::inconclusive;
        rep.trajectories[i] = std::move(traj);
    });
    rep.verdict = majority_verdict(rep.per_seed);
    return rep;
}

NcReport check_weak_nc(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                       const std::vector<std::uint64_t>& seeds, std::uint64_t horizon,
                       const Rational& eps, const Rational& r, const Rational& tol,
                       std::size_t checkpoint_count) {
    require_seeds(seeds);
    if (r <= 0 || r > 1) throw precondition_error("target density must lie in (0, 1]");
    NcReport rep;
    rep.criterion = "weakNC";
    rep.horizon = horizon;
    rep.tail = default_tail(horizon, 0);
    rep.eps = eps;
    rep.r = r;
    rep.tol = tol;
    rep.checkpoints = checkpoints(horizon, checkpoint_count);
    rep.trajectories.resize(seeds.size());
    rep.per_seed.resize(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        BitString path = sample(lambda, seeds[i], horizon);
        GapTrajectory traj = gap_trajectory(mu, lambda, path, eps, checkpoint_count);
        traj.seed = seeds[i];
        const Rational bar = r - tol;
        if (tail3_at_least(traj.density, bar))
            rep.per_seed[i] = Verdict::consistent;
        else if (tail3_below(traj.density, bar))
            rep.per_seed[i] = Verdict::refuted;
        else
            rep.per_seed[i] = Verdict::inconclusive;
        rep.trajectories[i] = std::move(traj);
    });
    rep.verdict = majority_verdict(rep.per_seed);
    return rep;
}

namespace {

// sum of |p_v - q_v| over the depth-d extensions, conditional masses p, q at the node
Rational tv_walk(LawCursor* mc, LawCursor* lc, const Rational& p, const Rational& q,
                 std::uint64_t depth) {
    if (depth == 0 || p == 0 || q == 0) return rat_abs(p - q);
    Rational pm = mc->prob_one();
    Rational pl = lc->prob_one();
    Rational total(0);
    Rational p0 = p * (Rational(1) - pm), q0 = q * (Rational(1) - pl);
    if (p0 == 0 || q0 == 0) {
        total += rat_abs(p0 - q0);
    } else {
        auto mc0 = mc->clone();
        auto lc0 = lc->clone();
        mc0->advance(0);
        lc0->advance(0);
        total += tv_walk(mc0.get(), lc0.get(), p0, q0, depth - 1);
    }
    Rational p1 = p * pm, q1 = q * pl;
    if (p1 == 0 || q1 == 0) {
        total += rat_abs(p1 - q1);
    } else {
        mc->advance(1);
        lc->advance(1);
        total += tv_walk(mc, lc, p1, q1, depth - 1);
    }
    return total;
}

// advances cur along w, refusing to step through a zero-chance bit
void advance_positive(LawCursor* cur, const BitString& w, const char* who) {
    for (std::size_t k = 1; k <= w.size(); ++k) {
        Bit b = w.bit(k);
        Rational p = cur->prob_one();
        if ((b ? p : Rational(1) - p) == 0)
            throw precondition_error(std::string(who) + " assigns zero weight to the prefix");
        cur->advance(b);
    }
}

}  // namespace

Rational merge_depth(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                     const BitString& prefix, std::uint64_t d, std::uint64_t d_max) {
    if (d > d_max) throw precondition_error("depth exceeds the configured maximum");
    auto mc = mu.cursor();
    auto lc = lambda.cursor();
    advance_positive(mc.get(), prefix, "first law");
    advance_positive(lc.get(), prefix, "second law");
    Rational q = tv_walk(mc.get(), lc.get(), Rational(1), Rational(1), d) / 2;
    q.canonicalize();
    return q;
}

StrongNcReport check_strong_nc(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                               const std::vector<std::uint64_t>& seeds, std::uint64_t horizon,
                               std::uint64_t d, const Rational& eps, std::uint64_t tail,
                               std::size_t checkpoint_count) {
    require_seeds(seeds);
    if (d > 10) throw precondition_error("depth exceeds the configured maximum");
    StrongNcReport rep;
    rep.criterion = "strongNC";
    rep.horizon = horizon;
    rep.tail = default_tail(horizon, tail);
    rep.depth = d;
    rep.eps = eps;
    rep.checkpoints = checkpoints(horizon, checkpoint_count);
    rep.caveat = "depth-" + std::to_string(d) +
                 " cylinder diagnostic: a lower bound for the full sigma-algebra supremum; "
                 "consistency here does not certify strong merging";
    rep.trajectories.resize(seeds.size());
    rep.per_seed.resize(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        BitString path = sample(lambda, seeds[i], horizon);
        MergeReport traj;
        traj.seed = seeds[i];
        traj.depth = d;
        traj.checkpoints = rep.checkpoints;
        auto mc = mu.cursor();
        auto lc = lambda.cursor();
        std::size_t ci = 0;
        for (std::uint64_t t = 0; t <= horizon && ci < rep.checkpoints.size(); ++t) {
            if (t == rep.checkpoints[ci]) {
                auto mcc = mc->clone();
                auto lcc = lc->clone();
                Rational v = tv_walk(mcc.get(), lcc.get(), Rational(1), Rational(1), d) / 2;
                v.canonicalize();
                traj.values.push_back(v);
                ++ci;
            }
            if (t == horizon) break;
            Bit b = path.bit(t + 1);
            Rational pm = mc->prob_one();
            if ((b ? pm : Rational(1) - pm) == 0)
                throw precondition_error("forecaster assigns zero weight to a sampled prefix");
            mc->advance(b);
            lc->advance(b);
        }
        bool quiet = true;
        for (std::size_t k = 0; k < traj.values.size(); ++k)
            if (rep.checkpoints[k] > horizon - rep.tail && traj.values[k] >= eps) quiet = false;
        if (quiet)
            rep.per_seed[i] = Verdict::consistent;
        else if (tail3_at_least(traj.values, 2 * eps) && tail3_nondecreasing(traj.values))
            rep.per_seed[i] = Verdict::refuted;
        else
            rep.per_seed[i] = Verdict::inconclusive;
        rep.trajectories[i] = std::move(traj);
    });
    rep.verdict = majority_verdict(rep.per_seed);
    return rep;
}

BitStream defeat_nc(const ConditionalLaw& nu, std::uint64_t budget) {
    if (!nu.full_support()) throw precondition_error("defeat target must have full support");
    struct Plan {
        std::unique_ptr<LawCursor> cur;
        BitString bits;
        std::uint64_t zeros = 0;
        std::uint64_t budget;

        void put(Bit b) {
            cur->advance(b);
            bits.push_back(b);
        }
        void ensure(std::size_t n) {
            const Rational bar(9, 10);
            while (bits.size() < n) {
                std::uint64_t j = zeros + 1;
                if (j >= 62) throw resource_error("block index out of range");
                for (std::uint64_t i = 0; i < (std::uint64_t{1} << j); ++i) put(1);
                std::uint64_t tried = 0;
                for (;;) {
                    if (tried++ >= budget)
                        throw construction_error(
                            "no block length pushes the next-one chance past 9/10", j);
                    put(1);
                    if (cur->prob_one() > bar) break;
                }
                put(0);
                ++zeros;
            }
        }
    };
    auto plan = std::make_shared<Plan>();
    plan->cur = nu.cursor();
    plan->budget = budget;
    return BitStream(
        [plan](const BitString& sofar) -> Bit {
            plan->ensure(sofar.size() + 1);
            return plan->bits.bit(sofar.size() + 1);
        },
        "defeat-nc(" + nu.name() + ")");
}

}  // namespace seqlearn

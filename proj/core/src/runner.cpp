#include "seqlearn/runner.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

#include "seqlearn/category.hpp"
#include "seqlearn/certificate.hpp"
#include "seqlearn/errors.hpp"
#include "seqlearn/extrapolation.hpp"
#include "seqlearn/forecasting.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/registry.hpp"
#include "seqlearn/rng.hpp"
#include "seqlearn/verdict.hpp"

namespace seqlearn {

namespace {

std::string pad2(std::size_t i) {
    std::string s = std::to_string(i);
    return s.size() < 2 ? "0" + s : s;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out + "]";
}

// Resolvers: read a key with its default, then write the resolved value back
// so the emitted report carries the complete effective configuration.

std::uint64_t res_u64(Config& cfg, const std::string& key, std::uint64_t dflt) {
    std::uint64_t v = cfg.u64(key, dflt);
    cfg.set(key, std::to_string(v));
    return v;
}

Rational res_rat(Config& cfg, const std::string& key, const Rational& dflt) {
    Rational v = cfg.rational(key, dflt);
    cfg.set(key, rat_str(v));
    return v;
}

std::string res_str(Config& cfg, const std::string& key, const std::string& dflt) {
    std::string v = cfg.str(key, dflt);
    cfg.set(key, v);
    return v;
}

std::vector<std::string> res_list(Config& cfg, const std::string& key,
                                  const std::vector<std::string>& dflt) {
    std::vector<std::string> v = cfg.has(key) ? cfg.list(key) : dflt;
    cfg.set(key, join_list(v));
    return v;
}

std::vector<std::uint64_t> res_seeds(Config& cfg, const std::string& key,
                                     std::uint64_t dflt_count) {
    std::vector<std::uint64_t> v;
    if (cfg.has(key)) {
        v = cfg.u64_list(key);
    } else {
        for (std::uint64_t s = 1; s <= dflt_count; ++s) v.push_back(s);
    }
    if (v.empty()) throw config_error("'" + key + "' must name at least one seed");
    std::vector<std::string> txt;
    for (auto s : v) txt.push_back(std::to_string(s));
    cfg.set(key, join_list(txt));
    return v;
}

ordered_json verdict_rec(const std::string& kase) {
    ordered_json rec;
    rec["record"] = "verdict";
    rec["case"] = kase;
    return rec;
}

void fill_nv_rec(ordered_json& rec, const VerdictReport& vr) {
    rec["criterion"] = vr.criterion;
    rec["verdict"] = to_string(vr.verdict);
    rec["horizon"] = vr.horizon;
    rec["tail"] = vr.tail;
    rec["error_count"] = vr.error_positions.size();
    if (vr.last_error)
        rec["last_error"] = *vr.last_error;
    else
        rec["last_error"] = nullptr;
    rec["undefined_count"] = vr.undefined_positions.size();
    if (!vr.correct.values.empty())
        rec["final_density"] = json_rat_full(vr.correct.values.back());
}

Trajectory density_traj(const std::string& name, const DensityStats& st) {
    Trajectory t;
    t.name = name;
    t.checkpoints = st.checkpoints;
    t.values = st.values;
    return t;
}

// ---- extrapolate-eval: NV / weak-NV verdicts for one guesser over streams ----

int do_extrapolate_eval(Config& cfg, RunReport& rep, std::string& msg) {
    std::string mexpr = res_str(cfg, "m", "always-1");
    auto streams = res_list(cfg, "streams", standard_corpus());
    std::uint64_t horizon = res_u64(cfg, "horizon", 10000);
    std::uint64_t tail = res_u64(cfg, "tail", horizon / 4);
    std::string check = res_str(cfg, "check", "nv");
    if (check != "nv" && check != "weak-nv")
        throw config_error("'check' must be nv or weak-nv, got '" + check + "'");
    Rational r{1}, tol{0};
    if (check == "weak-nv") {
        r = res_rat(cfg, "r", Rational{1});
        tol = res_rat(cfg, "tol", Rational(1, 100));
    }

    Extrapolator m = make_extrapolator(mexpr);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        BitStream s = make_stream(streams[i]);
        VerdictReport vr = check == "nv" ? check_nv(m, s, horizon, tail)
                                         : check_weak_nv(m, s, horizon, r, tol);
        std::string kase = "s" + pad2(i) + "-" + slug(streams[i]);
        ordered_json rec = verdict_rec(kase);
        rec["m"] = mexpr;
        rec["stream"] = streams[i];
        fill_nv_rec(rec, vr);
        if (check == "weak-nv") {
            rec["r"] = json_rat(vr.r);
            rec["tol"] = json_rat(vr.tol);
        }
        rep.records.push_back(rec);
        rep.trajectories.push_back(density_traj(kase + "-density", vr.correct));
        if (vr.verdict == Verdict::refuted) ++bad;
    }
    std::ostringstream os;
    os << streams.size() << " stream(s), " << bad << " refuted";
    msg = os.str();
    return 0;
}

// ---- duel: a guesser and its mirror split every horizon exactly ----

int do_duel(Config& cfg, RunReport& rep, std::string& msg) {
    std::string mexpr = res_str(cfg, "m", "last-bit");
    auto streams = res_list(cfg, "streams", standard_corpus());
    std::uint64_t horizon = res_u64(cfg, "horizon", 10000);

    Extrapolator m = make_extrapolator(mexpr);
    Extrapolator twin = evil_twin(m);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        BitStream s = make_stream(streams[i]);
        std::uint64_t e1 = error_positions(m, s, horizon).size();
        std::uint64_t e2 = error_positions(twin, s, horizon).size();
        bool exact = e1 + e2 == horizon;
        ordered_json rec = verdict_rec("s" + pad2(i) + "-" + slug(streams[i]));
        rec["record"] = "duel";
        rec["m"] = mexpr;
        rec["stream"] = streams[i];
        rec["horizon"] = horizon;
        rec["m_errors"] = e1;
        rec["twin_errors"] = e2;
        rec["sum"] = e1 + e2;
        rec["verdict"] = exact ? "consistent" : "refuted";
        rep.records.push_back(rec);
        if (!exact) ++bad;
    }
    msg = bad == 0 ? "every error count split exactly"
                   : std::to_string(bad) + " stream(s) failed to split the horizon";
    return 0;
}

// ---- defeat: build the sparse-zero stream a guesser always misses ----

int do_defeat(Config& cfg, RunReport& rep, std::string& msg) {
    std::string mexpr = res_str(cfg, "m", "last-bit");
    std::uint64_t budget = res_u64(cfg, "budget", std::uint64_t{1} << 20);
    std::uint64_t horizon = res_u64(cfg, "horizon", std::uint64_t{1} << 14);

    Extrapolator m = make_extrapolator(mexpr);
    try {
        BitStream sigma = defeat_nv(m, budget);
        std::vector<std::uint64_t> zeros;
        for (std::uint64_t t = 1; t <= horizon; ++t)
            if (sigma.bit(t) == Bit{0}) zeros.push_back(t);
        auto errs = error_positions(m, sigma, horizon);
        bool zeros_are_errors = true;
        for (auto z : zeros)
            if (!std::binary_search(errs.begin(), errs.end(), z)) {
                zeros_are_errors = false;
                break;
            }
        bool sparse = true;
        for (std::size_t j = 0; j < zeros.size(); ++j)
            if (zeros[j] <= (std::uint64_t{1} << std::min<std::size_t>(j + 1, 62))) {
                sparse = false;
                break;
            }
        ordered_json rec = verdict_rec("defeat-" + slug(mexpr));
        rec["record"] = "defeat";
        rec["m"] = mexpr;
        rec["horizon"] = horizon;
        rec["zero_count"] = zeros.size();
        ordered_json zp = ordered_json::array();
        for (std::size_t j = 0; j < zeros.size() && j < 16; ++j) zp.push_back(zeros[j]);
        rec["zero_positions"] = zp;
        rec["zeros_all_errors"] = zeros_are_errors;
        rec["zeros_sparse"] = sparse;
        rec["verdict"] = (zeros_are_errors && sparse) ? "consistent" : "refuted";
        rep.records.push_back(rec);
        msg = std::to_string(zeros.size()) + " zero(s) within the horizon, every one an error";
        return 0;
    } catch (const construction_error& e) {
        ordered_json rec = verdict_rec("defeat-" + slug(mexpr));
        rec["record"] = "defeat";
        rec["m"] = mexpr;
        rec["verdict"] = "construction-error";
        rec["block"] = e.block;
        rec["message"] = e.what();
        rep.records.push_back(rec);
        msg = e.what();
        return 3;
    }
}

// ---- adversary-pair: favorable vs defiant stream around one guesser ----

int do_adversary_pair(Config& cfg, RunReport& rep, std::string& msg) {
    std::string mexpr = res_str(cfg, "m", "always-1");
    std::string wtxt = res_str(cfg, "w", "");
    std::string spice = res_str(cfg, "spice", "all-zeros");
    std::string sched = res_str(cfg, "schedule", "powers-of(10)");
    std::uint64_t horizon = res_u64(cfg, "horizon", 10000);
    Rational r = res_rat(cfg, "r", Rational{1});
    Rational tol = res_rat(cfg, "tol", Rational(1, 100));

    Extrapolator m = make_extrapolator(mexpr);
    auto pair = adversarial_pair(m, BitString::from_string(wtxt), make_stream(spice),
                                 make_schedule(sched));
    const char* names[2] = {"favorable", "defiant"};
    const BitStream* both[2] = {&pair.first, &pair.second};
    for (int i = 0; i < 2; ++i) {
        VerdictReport vr = check_weak_nv(m, *both[i], horizon, r, tol);
        ordered_json rec = verdict_rec(names[i]);
        rec["m"] = mexpr;
        rec["w"] = wtxt;
        fill_nv_rec(rec, vr);
        rec["r"] = json_rat(vr.r);
        rec["tol"] = json_rat(vr.tol);
        rep.records.push_back(rec);
        rep.trajectories.push_back(
            density_traj(std::string(names[i]) + "-density", vr.correct));
    }
    msg = "favorable and defiant streams evaluated";
    return 0;
}

// ---- coarse: block-doubled stream against the last-bit guesser ----

int do_coarse(Config& cfg, RunReport& rep, std::string& msg) {
    std::string sexpr = res_str(cfg, "stream", "alternating");
    std::uint64_t horizon = res_u64(cfg, "horizon", std::uint64_t{1} << 16);
    std::uint64_t tail = res_u64(cfg, "tail", horizon / 4);

    BitStream sigma = coarse_block_double(make_stream(sexpr));
    Extrapolator m = last_bit();
    VerdictReport vr = check_nv(m, sigma, horizon, tail);
    ordered_json rec = verdict_rec("coarse-" + slug(sexpr));
    rec["base"] = sexpr;
    fill_nv_rec(rec, vr);
    rep.records.push_back(rec);
    rep.trajectories.push_back(density_traj("coarse-density", vr.correct));
    msg = std::to_string(vr.error_positions.size()) + " error(s) over the horizon";
    return 0;
}

// ---- forecast-eval: NC / weak-NC verdicts over sampled paths ----

int do_forecast_eval(Config& cfg, RunReport& rep, std::string& msg) {
    std::string fexpr = res_str(cfg, "forecaster", "laplace-bayes");
    std::string sexpr = res_str(cfg, "source", "bernoulli(1/2)");
    auto seeds = res_seeds(cfg, "seeds", 10);
    std::uint64_t horizon = res_u64(cfg, "horizon", 10000);
    std::uint64_t tail = res_u64(cfg, "tail", horizon / 4);
    Rational eps = res_rat(cfg, "eps", Rational(1, 20));
    std::string check = res_str(cfg, "check", "nc");
    if (check != "nc" && check != "weak-nc")
        throw config_error("'check' must be nc or weak-nc, got '" + check + "'");

    ConditionalLaw mu = make_law(fexpr);
    ConditionalLaw lambda = make_law(sexpr);
    NcReport nc;
    if (check == "nc") {
        nc = check_nc(mu, lambda, seeds, horizon, eps, tail);
    } else {
        Rational r = res_rat(cfg, "r", Rational{1});
        Rational tol = res_rat(cfg, "tol", Rational(1, 100));
        nc = check_weak_nc(mu, lambda, seeds, horizon, eps, r, tol);
    }

    std::size_t ok = 0, bad = 0;
    for (std::size_t i = 0; i < nc.trajectories.size(); ++i) {
        const GapTrajectory& g = nc.trajectories[i];
        Verdict v = nc.per_seed[i];
        if (v == Verdict::consistent) ++ok;
        if (v == Verdict::refuted) ++bad;
        ordered_json rec;
        rec["record"] = "seed-verdict";
        rec["case"] = "seed" + std::to_string(g.seed);
        rec["seed"] = g.seed;
        rec["criterion"] = nc.criterion;
        rec["verdict"] = to_string(v);
        rec["final_gap"] = json_rat_full(g.gaps.back());
        rec["good_density"] = json_rat_full(g.good_density);
        ordered_json tv = ordered_json::array();
        for (auto t : g.tail_violations) tv.push_back(t);
        rec["tail_violations"] = tv;
        rep.records.push_back(rec);
        std::string key = "seed" + std::to_string(g.seed);
        Trajectory traj;
        traj.checkpoints = g.checkpoints;
        if (check == "nc") {
            traj.name = key + "-gap";
            traj.values = g.at_checkpoint;
        } else {
            traj.name = key + "-density";
            traj.values = g.density;
        }
        rep.trajectories.push_back(traj);
    }
    ordered_json rec = verdict_rec("overall");
    rec["criterion"] = nc.criterion;
    rec["forecaster"] = fexpr;
    rec["source"] = sexpr;
    rec["verdict"] = to_string(nc.verdict);
    rec["horizon"] = nc.horizon;
    rec["tail"] = nc.tail;
    rec["eps"] = json_rat(nc.eps);
    if (check == "weak-nc") {
        rec["r"] = json_rat(nc.r);
        rec["tol"] = json_rat(nc.tol);
    }
    rec["seed_count"] = seeds.size();
    rec["consistent_seeds"] = ok;
    rec["refuted_seeds"] = bad;
    rep.records.push_back(rec);
    std::ostringstream os;
    os << to_string(nc.verdict) << " (" << ok << "/" << seeds.size()
       << " seeds consistent)";
    msg = os.str();
    return 0;
}

// ---- merge: depth-bounded distance between forecaster and source ----

int do_merge(Config& cfg, RunReport& rep, std::string& msg) {
    std::string fexpr = res_str(cfg, "forecaster", "laplace-bayes");
    std::string sexpr = res_str(cfg, "source", "bernoulli(1/2)");
    auto seeds = res_seeds(cfg, "seeds", 10);
    std::uint64_t horizon = res_u64(cfg, "horizon", 1000);
    std::uint64_t tail = res_u64(cfg, "tail", horizon / 4);
    std::uint64_t depth = res_u64(cfg, "depth", 6);
    Rational eps = res_rat(cfg, "eps", Rational(1, 10));

    ConditionalLaw mu = make_law(fexpr);
    ConditionalLaw lambda = make_law(sexpr);
    StrongNcReport sr = check_strong_nc(mu, lambda, seeds, horizon, depth, eps, tail);

    std::size_t ok = 0;
    for (std::size_t i = 0; i < sr.trajectories.size(); ++i) {
        const MergeReport& mr = sr.trajectories[i];
        if (sr.per_seed[i] == Verdict::consistent) ++ok;
        ordered_json rec;
        rec["record"] = "seed-verdict";
        rec["case"] = "seed" + std::to_string(mr.seed);
        rec["seed"] = mr.seed;
        rec["criterion"] = sr.criterion;
        rec["verdict"] = to_string(sr.per_seed[i]);
        rec["final_value"] = json_rat_full(mr.values.back());
        rep.records.push_back(rec);
        Trajectory traj;
        traj.name = "seed" + std::to_string(mr.seed) + "-merge";
        traj.checkpoints = mr.checkpoints;
        traj.values = mr.values;
        rep.trajectories.push_back(traj);
    }
    ordered_json rec = verdict_rec("overall");
    rec["criterion"] = sr.criterion;
    rec["forecaster"] = fexpr;
    rec["source"] = sexpr;
    rec["verdict"] = to_string(sr.verdict);
    rec["horizon"] = sr.horizon;
    rec["tail"] = sr.tail;
    rec["depth"] = sr.depth;
    rec["eps"] = json_rat(sr.eps);
    rec["seed_count"] = seeds.size();
    rec["consistent_seeds"] = ok;
    rec["caveat"] = sr.caveat;
    rep.records.push_back(rec);
    msg = to_string(sr.verdict) + std::string(" — ") + sr.caveat;
    return 0;
}

// ---- defeat-nc: stream whose zero bits a forecaster keeps calling ones ----

int do_defeat_nc(Config& cfg, RunReport& rep, std::string& msg) {
    std::string fexpr = res_str(cfg, "law", "laplace-bayes");
    std::uint64_t budget = res_u64(cfg, "budget", std::uint64_t{1} << 20);
    std::uint64_t horizon = res_u64(cfg, "horizon", std::uint64_t{1} << 14);

    ConditionalLaw nu = make_law(fexpr);
    try {
        BitStream sigma = defeat_nc(nu, budget);
        auto cur = nu.cursor();
        std::vector<std::uint64_t> zeros;
        std::vector<Rational> gaps;
        for (std::uint64_t t = 1; t <= horizon; ++t) {
            Bit b = sigma.bit(t);
            if (b == Bit{0}) {
                zeros.push_back(t);
                gaps.push_back(cur->prob_one());
            }
            cur->advance(b);
        }
        Rational min_gap{1};
        for (const auto& g : gaps) min_gap = std::min(min_gap, g);
        bool gap_ok = !gaps.empty() && min_gap >= Rational(9, 10);
        Rational density{0};
        if (!zeros.empty()) {
            density = Rational(BigInt(zeros.size()), BigInt(horizon));
            density.canonicalize();
        }
        ordered_json rec = verdict_rec("defeat-nc-" + slug(fexpr));
        rec["record"] = "defeat-nc";
        rec["law"] = fexpr;
        rec["horizon"] = horizon;
        rec["zero_count"] = zeros.size();
        rec["zero_density"] = json_rat_full(density);
        if (!gaps.empty()) rec["min_zero_gap"] = json_rat_full(min_gap);
        rec["verdict"] = gap_ok ? "consistent" : "refuted";
        rep.records.push_back(rec);
        Trajectory traj;
        traj.name = "zero-gaps";
        traj.checkpoints = zeros;
        traj.values = gaps;
        rep.trajectories.push_back(traj);
        msg = std::to_string(zeros.size()) + " zero(s), every pre-zero forecast above 9/10";
        return 0;
    } catch (const construction_error& e) {
        ordered_json rec = verdict_rec("defeat-nc-" + slug(fexpr));
        rec["record"] = "defeat-nc";
        rec["law"] = fexpr;
        rec["verdict"] = "construction-error";
        rec["block"] = e.block;
        rec["message"] = e.what();
        rep.records.push_back(rec);
        msg = e.what();
        return 3;
    }
}

// ---- bm-game: random openings against the witness-driven responder ----

int do_bm_game(Config& cfg, RunReport& rep, std::string& msg) {
    std::string mexpr = res_str(cfg, "m", "always-1");
    std::string mode = res_str(cfg, "mode", "direct");
    std::uint64_t rounds = res_u64(cfg, "rounds", mode == "summary" ? 40 : 12);
    auto seeds = res_seeds(cfg, "seeds", 50);
    std::uint64_t pad = res_u64(cfg, "pad", 64);
    if (mode != "direct" && mode != "summary")
        throw config_error("'mode' must be direct or summary, got '" + mode + "'");
    if (mode == "summary" && mexpr != "always-0" && mexpr != "always-1")
        throw config_error("summary mode needs m = always-0 or always-1 "
                           "(uniform responder runs); got '" + mexpr + "'");

    Extrapolator m = make_extrapolator(mexpr);
    WitnessFamily fam = nwd_witness_weaknv(m);
    Strategy two = bm_strategy_from_witness(fam);
    std::size_t ok = 0;
    for (auto seed : seeds) {
        ordered_json rec;
        rec["record"] = "game";
        rec["case"] = "seed" + std::to_string(seed);
        rec["seed"] = seed;
        bool pass = false;
        if (mode == "summary") {
            LongGameStats st =
                bm_long_game_constant(mexpr == "always-1" ? 1 : 0, seed, rounds, pad);
            pass = st.wicked_prefixes >= rounds && st.nasty_density >= Rational(1, 4) &&
                   st.padded_wicked >= st.wicked_prefixes;
            rec["prefix_length"] = st.length.get_str();
            rec["wicked_prefixes"] = st.wicked_prefixes.get_str();
            rec["nasty_density"] = json_rat_full(st.nasty_density);
            rec["padded_wicked_prefixes"] = st.padded_wicked.get_str();
        } else {
            GameTranscript t = play_banach_mazur(random_strategy(seed), two, rounds);
            BitString u = t.realized_prefix();
            std::uint64_t wick = wicked_prefix_count(m, u);
            Rational dens = wickedness(m, u);
            BitString padded = u;
            for (std::uint64_t i = 0; i < pad; ++i) padded.push_back(Bit{1});
            std::uint64_t wick_pad = wicked_prefix_count(m, padded);
            pass = wick >= rounds && dens >= Rational(1, 4) && wick_pad >= wick;
            rec["prefix_length"] = u.size();
            rec["wicked_prefixes"] = wick;
            rec["nasty_density"] = json_rat_full(dens);
            rec["padded_wicked_prefixes"] = wick_pad;
        }
        if (pass) ++ok;
        rec["verdict"] = pass ? "consistent" : "refuted";
        rep.records.push_back(rec);
    }
    ordered_json rec = verdict_rec("overall");
    rec["record"] = "summary";
    rec["m"] = mexpr;
    rec["games"] = seeds.size();
    rec["passed"] = ok;
    rec["verdict"] = ok == seeds.size() ? "consistent" : "refuted";
    rep.records.push_back(rec);
    std::ostringstream os;
    os << ok << "/" << seeds.size() << " games hit the wickedness targets";
    msg = os.str();
    return 0;
}

// ---- witness-check: sampled witnesses always extend the promised defiance ----

int do_witness_check(Config& cfg, RunReport& rep, std::string& msg) {
    std::uint64_t samples = res_u64(cfg, "samples", 100);
    std::uint64_t seed = res_u64(cfg, "seed", 2026);
    std::uint64_t wmax = res_u64(cfg, "max-stem", 10);
    std::uint64_t nmax = res_u64(cfg, "max-order", 5);
    std::uint64_t ext = res_u64(cfg, "extension", 8);

    auto roster = standard_extrapolators();
    std::uint64_t pass = 0;
    ordered_json failures = ordered_json::array();
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::uint64_t which =
            draw_range(seed, 3 * i + 1, 0, static_cast<std::uint64_t>(roster.size()) - 1);
        std::uint64_t wlen = draw_range(seed, 3 * i + 2, 0, wmax);
        std::uint64_t n = draw_range(seed, 3 * i + 3, 0, nmax);
        BitString w;
        for (std::uint64_t j = 0; j < wlen; ++j)
            w.push_back(Bit(static_cast<int>(draw_range(seed, 10000 + i * 64 + j, 0, 1))));
        Extrapolator m = make_extrapolator(roster[which]);
        WitnessFamily fam = nwd_witness_weaknv(m);
        BitString x = fam.F(n, w);
        bool base_ok = w.is_prefix_of(x) && x.size() > w.size() &&
                       wicked_prefix_count(m, x) >= n;
        BitString y = x;
        for (std::uint64_t j = 0; j < ext; ++j)
            y.push_back(Bit(static_cast<int>(draw_range(seed, 50000 + i * 64 + j, 0, 1))));
        bool ext_ok = wicked_prefix_count(m, y) >= n;
        if (base_ok && ext_ok) {
            ++pass;
        } else if (failures.size() < 8) {
            ordered_json f;
            f["m"] = roster[which];
            f["stem"] = w.str();
            f["order"] = n;
            failures.push_back(f);
        }
    }
    ordered_json rec = verdict_rec("overall");
    rec["samples"] = samples;
    rec["passed"] = pass;
    if (!failures.empty()) rec["failures"] = failures;
    rec["verdict"] = pass == samples ? "consistent" : "refuted";
    rep.records.push_back(rec);
    std::ostringstream os;
    os << pass << "/" << samples << " sampled witnesses verified";
    msg = os.str();
    return 0;
}

// ---- meagre-chain: shrinking certified balls around one forecaster ----

int do_meagre_chain(Config& cfg, RunReport& rep, std::string& msg) {
    std::string fexpr = res_str(cfg, "forecaster", "bernoulli(1/2)");
    std::uint64_t t = res_u64(cfg, "steps", 6);
    std::uint64_t K = res_u64(cfg, "levels", 7);
    std::uint64_t nperturb = res_u64(cfg, "perturbations", 20);
    std::uint64_t seed = res_u64(cfg, "seed", 9);
    std::uint64_t start_depth = res_u64(cfg, "start-depth", 1);

    ConditionalLaw mu = make_law(fexpr);
    BasisBall start = start_depth <= 1 ? full_ball()
                                       : uniform_ball(start_depth, Rational(1, 2));
    MeagreChain chain = meagre_chain(mu, start, t);

    bool replays_ok = true;
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        const ChainStep& st = chain.steps[i];
        std::string base = "step" + pad2(i + 1);
        rep.certificates.push_back({base + "-contains", to_text(st.contains_cert)});
        rep.certificates.push_back({base + "-bad-gap", to_text(st.bad_gap_cert)});
        rep.certificates.push_back({base + "-ball", to_text(st.ball)});
        if (!replay(st.contains_cert) || !replay(st.bad_gap_cert)) replays_ok = false;
    }
    if (chain.superbad_cert)
        rep.certificates.push_back({"superbad", to_text(*chain.superbad_cert)});
    if (chain.superbad_cert && !replay(*chain.superbad_cert)) replays_ok = false;

    const BasisBall& fin = chain.steps.back().ball;
    ConditionalLaw center = center_extension(mu, fin);
    std::uint64_t sb_center = superbad_count(mu, center, K);
    std::uint64_t sb_min = sb_center;
    for (std::uint64_t p = 0; p < nperturb; ++p) {
        std::vector<Rational> cells = perturb_center(fin, seed + p);
        ConditionalLaw law = weight_table_law(fin.depth, cells, mu);
        sb_min = std::min(sb_min, superbad_count(mu, law, K));
    }
    bool pass = replays_ok && sb_center >= chain.superbad_bound &&
                sb_min >= chain.superbad_bound;

    ordered_json rec = verdict_rec("chain");
    rec["record"] = "chain";
    rec["forecaster"] = fexpr;
    rec["steps"] = t;
    rec["final_depth"] = fin.depth;
    ordered_json radii = ordered_json::array();
    for (const auto& st : chain.steps) radii.push_back(json_rat(st.ball.radius));
    rec["radii"] = radii;
    rec["certificates_replayed"] = replays_ok;
    rec["superbad_levels"] = K;
    rec["superbad_center"] = sb_center;
    rec["superbad_min_perturbed"] = sb_min;
    rec["superbad_bound"] = chain.superbad_bound;
    rec["verdict"] = pass ? "consistent" : "refuted";
    rep.records.push_back(rec);
    std::ostringstream os;
    os << chain.steps.size() << " shrink step(s) certified, superbad count "
       << sb_center << " at " << K << " levels";
    msg = os.str();
    return 0;
}

// ---- escape: iterate a witness family to flee any single guesser ----

int do_escape(Config& cfg, RunReport& rep, std::string& msg) {
    std::string mexpr = res_str(cfg, "m", "always-1");
    std::string wtxt = res_str(cfg, "w", "1");
    std::uint64_t steps = res_u64(cfg, "steps", 10);

    Extrapolator m = make_extrapolator(mexpr);
    WitnessFamily fam = nwd_witness_weaknv(m);
    BitString x = baire_escape(fam, BitString::from_string(wtxt), steps);
    std::uint64_t wick = wicked_prefix_count(m, x);
    ordered_json rec = verdict_rec("escape-" + slug(mexpr));
    rec["m"] = mexpr;
    rec["start"] = wtxt;
    rec["steps"] = steps;
    rec["length"] = x.size();
    rec["wicked_prefixes"] = wick;
    rec["prefix"] = x.size() <= 128 ? x.str() : x.prefix(128).str() + "...";
    rec["verdict"] = wick >= steps ? "consistent" : "refuted";
    rep.records.push_back(rec);
    msg = std::to_string(wick) + " wicked prefix(es) along the escape route";
    return 0;
}

using Handler = int (*)(Config&, RunReport&, std::string&);

struct CommandEntry {
    const char* name;
    Handler fn;
};

constexpr CommandEntry kCommands[] = {
    {"extrapolate-eval", do_extrapolate_eval},
    {"duel", do_duel},
    {"defeat", do_defeat},
    {"adversary-pair", do_adversary_pair},
    {"coarse", do_coarse},
    {"forecast-eval", do_forecast_eval},
    {"merge", do_merge},
    {"defeat-nc", do_defeat_nc},
    {"bm-game", do_bm_game},
    {"witness-check", do_witness_check},
    {"meagre-chain", do_meagre_chain},
    {"escape", do_escape},
};

}  // namespace

RunResult run(const Config& cfg0) {
    RunResult res;
    Config cfg = cfg0;
    try {
        if (!cfg.has("command")) throw config_error("missing 'command'");
        std::string cmd = cfg.str("command");
        res.report.command = cmd;
        Handler fn = nullptr;
        for (const auto& e : kCommands)
            if (cmd == e.name) fn = e.fn;
        if (!fn) throw config_error("unknown command '" + cmd + "'");
        int code = fn(cfg, res.report, res.message);
        res.report.config = cfg;
        if (code == 0 && cfg.str("expect", "") == "consistent") {
            for (const auto& rec : res.report.records)
                if (rec.contains("verdict") && rec["verdict"] == "refuted") {
                    code = 1;
                    res.message = "refuted verdict under expect = consistent: " +
                                  rec.value("case", std::string{"?"});
                    break;
                }
        }
        res.exit_code = code;
    } catch (const config_error& e) {
        res.exit_code = 2;
        res.message = e.what();
    } catch (const resource_error& e) {
        res.exit_code = 3;
        res.message = e.what();
    } catch (const construction_error& e) {
        res.exit_code = 3;
        res.message = e.what();
    } catch (const shrink_failure& e) {
        res.exit_code = 3;
        res.message = e.what();
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.message = e.what();
        res.report.config = cfg;
    }
    if (res.report.config.entries().empty()) res.report.config = cfg;
    return res;
}

}  // namespace seqlearn

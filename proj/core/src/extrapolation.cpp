#include "seqlearn/extrapolation.hpp"

#include <algorithm>
#include <unordered_map>

#include "seqlearn/errors.hpp"

namespace seqlearn {

namespace {

using Scanner = Extrapolator::Scanner;

struct ConstScanner final : Scanner {
    Bit b;
    explicit ConstScanner(Bit bb) : b(bb) {}
    Bit predict() const override { return b; }
    void advance(Bit) override {}
    std::unique_ptr<Scanner> clone() const override { return std::make_unique<ConstScanner>(*this); }
};

struct LastBitScanner final : Scanner {
    Bit last = 1;
    Bit predict() const override { return last; }
    void advance(Bit b) override { last = b; }
    std::unique_ptr<Scanner> clone() const override { return std::make_unique<LastBitScanner>(*this); }
};

struct MajorityScanner final : Scanner {
    std::size_t k;
    std::vector<Bit> ring;
    std::size_t seen = 0;
    explicit MajorityScanner(std::size_t kk) : k(kk), ring(kk, 0) {}
    Bit predict() const override {
        std::size_t window = std::min(seen, k);
        if (window == 0) return 1;
        std::size_t ones = 0;
        for (std::size_t i = 0; i < window; ++i) ones += static_cast<std::size_t>(ring[(seen - 1 - i) % k]);
        return 2 * ones >= window ? 1 : 0;
    }
    void advance(Bit b) override {
        ring[seen % k] = b;
        ++seen;
    }
    std::unique_ptr<Scanner> clone() const override { return std::make_unique<MajorityScanner>(*this); }
};

struct TableScanner final : Scanner {
    std::shared_ptr<const std::unordered_map<BitString, Bit>> map;
    std::size_t maxlen;
    Bit dflt;
    BitString head;  // first min(consumed, maxlen+1) bits
    std::size_t consumed = 0;
    Bit predict() const override {
        if (consumed > maxlen) return dflt;
        auto it = map->find(head);
        return it == map->end() ? dflt : it->second;
    }
    void advance(Bit b) override {
        if (consumed <= maxlen) head.push_back(b);
        ++consumed;
    }
    std::unique_ptr<Scanner> clone() const override { return std::make_unique<TableScanner>(*this); }
};

struct FlipScanner final : Scanner {
    std::unique_ptr<Scanner> inner;
    explicit FlipScanner(std::unique_ptr<Scanner> in) : inner(std::move(in)) {}
    FlipScanner(const FlipScanner& o) : inner(o.inner->clone()) {}
    Bit predict() const override { return 1 - inner->predict(); }
    void advance(Bit b) override { inner->advance(b); }
    std::unique_ptr<Scanner> clone() const override { return std::make_unique<FlipScanner>(*this); }
};

// shared by both combiners: which family members still match the consumed
// prefix, and what each matching member says comes next
struct FamilyTracker {
    std::vector<BitStream> streams;
    std::vector<char> matched;
    std::size_t consumed = 0;
    explicit FamilyTracker(std::vector<BitStream> fam)
        : streams(std::move(fam)), matched(streams.size(), 1) {}
    void advance(Bit b) {
        for (std::size_t i = 0; i < streams.size(); ++i)
            if (matched[i] && streams[i].bit(consumed + 1) != b) matched[i] = 0;
        ++consumed;
    }
    // next bit of the first matching member with 1-based index <= max_index
    std::optional<Bit> follow(std::size_t max_index) const {
        std::size_t bound = std::min(max_index, streams.size());
        for (std::size_t i = 0; i < bound; ++i)
            if (matched[i]) return streams[i].bit(consumed + 1);
        return std::nullopt;
    }
};

struct CombineNvScanner final : Scanner {
    std::unique_ptr<Scanner> base;
    FamilyTracker fam;
    std::uint64_t own_errors = 0;
    CombineNvScanner(std::unique_ptr<Scanner> b, std::vector<BitStream> f)
        : base(std::move(b)), fam(std::move(f)) {}
    CombineNvScanner(const CombineNvScanner& o)
        : base(o.base->clone()), fam(o.fam), own_errors(o.own_errors) {}
    Bit predict() const override {
        if (own_errors % 2 == 0) return base->predict();
        auto f = fam.follow(fam.streams.size());
        return f ? *f : base->predict();
    }
    void advance(Bit b) override {
        if (predict() != b) ++own_errors;
        base->advance(b);
        fam.advance(b);
    }
    std::unique_ptr<Scanner> clone() const override { return std::make_unique<CombineNvScanner>(*this); }
};

struct CombineWeakScanner final : Scanner {
    std::unique_ptr<Scanner> base;
    FamilyTracker fam;
    CombineWeakScanner(std::unique_ptr<Scanner> b, std::vector<BitStream> f)
        : base(std::move(b)), fam(std::move(f)) {}
    CombineWeakScanner(const CombineWeakScanner& o) : base(o.base->clone()), fam(o.fam) {}
    Bit predict() const override {
        // member ell is consulted only once the prefix is at least 2^ell long
        std::size_t window = 0;
        while (window < fam.streams.size() &&
               (std::uint64_t{1} << (window + 1)) <= fam.consumed)
            ++window;
        auto f = fam.follow(window);
        return f ? *f : base->predict();
    }
    void advance(Bit b) override {
        base->advance(b);
        fam.advance(b);
    }
    std::unique_ptr<Scanner> clone() const override {
        return std::make_unique<CombineWeakScanner>(*this);
    }
};

// keeps a scanner in sync with a stream generator's definitive prefix
struct FedScanner {
    std::shared_ptr<Scanner> sc;
    std::size_t fed = 0;
    void sync(const BitString& sofar) {
        while (fed < sofar.size()) {
            ++fed;
            sc->advance(sofar.bit(fed));
        }
    }
};

std::string family_label(const std::vector<BitStream>& family) {
    std::string s = "[";
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i) s += ",";
        s += family[i].name();
    }
    return s + "]";
}

}  // namespace

Extrapolator::Extrapolator(std::string name, ScannerFactory make)
    : name_(std::move(name)), make_(std::move(make)) {}

Bit Extrapolator::predict(const BitString& w) const {
    auto sc = make_();
    for (std::size_t k = 1; k <= w.size(); ++k) sc->advance(w.bit(k));
    return sc->predict();
}

std::unique_ptr<Scanner> Extrapolator::scanner() const { return make_(); }

PartialExtrapolator PartialExtrapolator::lift(const Extrapolator& m) {
    return PartialExtrapolator(m.name(),
                               [m](const BitString& w) { return std::optional<Bit>(m.predict(w)); });
}

PartialExtrapolator PartialExtrapolator::undefined_where(
    const Extrapolator& m, std::function<bool(const BitString&)> holes, std::string name) {
    return PartialExtrapolator(std::move(name),
                               [m, holes](const BitString& w) -> std::optional<Bit> {
                                   if (holes(w)) return std::nullopt;
                                   return m.predict(w);
                               });
}

PartialExtrapolator PartialExtrapolator::undefined_everywhere() {
    return PartialExtrapolator("undefined", [](const BitString&) { return std::optional<Bit>(); });
}

Extrapolator always_bit(Bit b) {
    return Extrapolator(b ? "always-1" : "always-0",
                        [b] { return std::make_unique<ConstScanner>(b); });
}

Extrapolator last_bit() {
    return Extrapolator("last-bit", [] { return std::make_unique<LastBitScanner>(); });
}

Extrapolator majority(std::size_t k) {
    if (k == 0) throw precondition_error("majority order must be >= 1");
    return Extrapolator("k-th-order-majority(" + std::to_string(k) + ")",
                        [k] { return std::make_unique<MajorityScanner>(k); });
}

Extrapolator table_extrapolator(const std::vector<std::pair<BitString, Bit>>& entries, Bit dflt) {
    auto map = std::make_shared<std::unordered_map<BitString, Bit>>();
    std::size_t maxlen = 0;
    for (const auto& [w, b] : entries) {
        (*map)[w] = b;
        maxlen = std::max(maxlen, w.size());
    }
    return Extrapolator("table[" + std::to_string(entries.size()) + "," +
                            std::to_string(dflt) + "]",
                        [map, maxlen, dflt] {
                            auto sc = std::make_unique<TableScanner>();
                            sc->map = map;
                            sc->maxlen = maxlen;
                            sc->dflt = dflt;
                            return sc;
                        });
}

Extrapolator evil_twin(const Extrapolator& m) {
    return Extrapolator("evil-of(" + m.name() + ")",
                        [m] { return std::make_unique<FlipScanner>(m.scanner()); });
}

Extrapolator combine_nv(const Extrapolator& m, const std::vector<BitStream>& family) {
    return Extrapolator("combine-nv(" + m.name() + "," + family_label(family) + ")",
                        [m, family] { return std::make_unique<CombineNvScanner>(m.scanner(), family); });
}

Extrapolator combine_weak(const Extrapolator& m, const std::vector<BitStream>& family) {
    return Extrapolator("combine-weak(" + m.name() + "," + family_label(family) + ")",
                        [m, family] {
                            return std::make_unique<CombineWeakScanner>(m.scanner(), family);
                        });
}

BitStream guess_sequence(const Extrapolator& m, const BitString& w) {
    auto fs = std::make_shared<FedScanner>();
    fs->sc = std::shared_ptr<Scanner>(m.scanner().release());
    return BitStream(
        [m, w, fs](const BitString& sofar) -> Bit {
            fs->sync(sofar);
            if (sofar.size() + 1 <= w.size()) return w.bit(sofar.size() + 1);
            return fs->sc->predict();
        },
        "guess(" + m.name() + "," + w.str() + ")");
}

std::vector<std::uint64_t> error_positions(const Extrapolator& m, const BitStream& sigma,
                                           std::uint64_t horizon) {
    BitString path = sigma.prefix(horizon);
    std::vector<std::uint64_t> errs;
    auto sc = m.scanner();
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        Bit b = path.bit(k);
        if (sc->predict() != b) errs.push_back(k);
        sc->advance(b);
    }
    return errs;
}

namespace {

DensityStats correct_density_stats(std::uint64_t horizon, const std::vector<std::uint64_t>& bad,
                                   std::uint64_t checkpoint_count) {
    DensityStats ds;
    ds.horizon = horizon;
    ds.hits = horizon - bad.size();
    ds.checkpoints = checkpoints(horizon, std::min<std::uint64_t>(checkpoint_count, horizon));
    for (std::uint64_t c : ds.checkpoints) {
        auto upto = static_cast<std::uint64_t>(
            std::upper_bound(bad.begin(), bad.end(), c) - bad.begin());
        Rational d(static_cast<unsigned long>(c - upto), static_cast<unsigned long>(c));
        d.canonicalize();
        ds.values.push_back(d);
    }
    return ds;
}

// stability window: every density over the last three checkpoints clears the bar
bool window_clears(const std::vector<Rational>& v, const Rational& bar) {
    std::size_t k = std::min<std::size_t>(3, v.size());
    if (k == 0) return false;
    for (std::size_t i = v.size() - k; i < v.size(); ++i)
        if (v[i] < bar) return false;
    return true;
}

bool window_misses(const std::vector<Rational>& v, const Rational& bar) {
    std::size_t k = std::min<std::size_t>(3, v.size());
    if (k == 0) return false;
    for (std::size_t i = v.size() - k; i < v.size(); ++i)
        if (v[i] >= bar) return false;
    return true;
}

bool tail_quiet(const std::vector<std::uint64_t>& errs, std::uint64_t horizon, std::uint64_t tail) {
    // no entries in (horizon - tail, horizon]
    auto it = std::upper_bound(errs.begin(), errs.end(), horizon - tail);
    return it == errs.end() || *it > horizon;
}

void require_window(std::uint64_t horizon, std::uint64_t tail) {
    if (horizon == 0) throw precondition_error("horizon must be >= 1");
    if (tail == 0 || tail > horizon) throw precondition_error("need 1 <= tail <= horizon");
}

}  // namespace

VerdictReport check_nv(const Extrapolator& m, const BitStream& sigma, std::uint64_t horizon,
                       std::uint64_t tail, std::uint64_t checkpoint_count) {
    require_window(horizon, tail);
    VerdictReport rep;
    rep.criterion = "NV";
    rep.horizon = horizon;
    rep.tail = tail;
    rep.error_positions = error_positions(m, sigma, horizon);
    if (!rep.error_positions.empty()) rep.last_error = rep.error_positions.back();
    rep.correct = correct_density_stats(horizon, rep.error_positions, checkpoint_count);
    // a clean tail is evidence for convergence; errors there leave the limit open,
    // and no finite horizon can refute it
    rep.verdict = tail_quiet(rep.error_positions, horizon, tail) ? Verdict::consistent
                                                                 : Verdict::inconclusive;
    return rep;
}

VerdictReport check_weak_nv(const Extrapolator& m, const BitStream& sigma, std::uint64_t horizon,
                            const Rational& r, const Rational& tol,
                            std::uint64_t checkpoint_count) {
    if (horizon == 0) throw precondition_error("horizon must be >= 1");
    if (r <= 0 || r > 1) throw precondition_error("rate r must lie in (0, 1]");
    if (tol < 0) throw precondition_error("tolerance must be >= 0");
    VerdictReport rep;
    rep.criterion = r == 1 ? "weakNV" : "NV(" + rat_str(r) + ")";
    rep.horizon = horizon;
    rep.r = r;
    rep.tol = tol;
    rep.error_positions = error_positions(m, sigma, horizon);
    if (!rep.error_positions.empty()) rep.last_error = rep.error_positions.back();
    rep.correct = correct_density_stats(horizon, rep.error_positions, checkpoint_count);
    const Rational bar = r - tol;
    if (window_clears(rep.correct.values, bar))
        rep.verdict = Verdict::consistent;
    else if (window_misses(rep.correct.values, bar))
        rep.verdict = Verdict::refuted;
    else
        rep.verdict = Verdict::inconclusive;
    return rep;
}

namespace {

VerdictReport check_partial(const PartialExtrapolator& m, const BitStream& sigma,
                            std::uint64_t horizon, std::uint64_t tail,
                            std::uint64_t checkpoint_count, bool undefined_refutes,
                            const char* label) {
    require_window(horizon, tail);
    VerdictReport rep;
    rep.criterion = label;
    rep.horizon = horizon;
    rep.tail = tail;
    BitString path = sigma.prefix(horizon);
    BitString cur;
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        Bit b = path.bit(k);
        auto p = m.predict(cur);
        if (!p)
            rep.undefined_positions.push_back(k);
        else if (*p != b)
            rep.error_positions.push_back(k);
        cur.push_back(b);
    }
    if (!rep.error_positions.empty()) rep.last_error = rep.error_positions.back();
    std::vector<std::uint64_t> bad;
    std::merge(rep.error_positions.begin(), rep.error_positions.end(),
               rep.undefined_positions.begin(), rep.undefined_positions.end(),
               std::back_inserter(bad));
    rep.correct = correct_density_stats(horizon, bad, checkpoint_count);
    if (undefined_refutes) {
        if (!rep.undefined_positions.empty()) {
            rep.verdict = Verdict::refuted;
            return rep;
        }
        rep.verdict = tail_quiet(rep.error_positions, horizon, tail) ? Verdict::consistent
                                                                     : Verdict::inconclusive;
    } else {
        rep.verdict =
            tail_quiet(bad, horizon, tail) ? Verdict::consistent : Verdict::inconclusive;
    }
    return rep;
}

}  // namespace

VerdictReport check_nv_prime(const PartialExtrapolator& m, const BitStream& sigma,
                             std::uint64_t horizon, std::uint64_t tail,
                             std::uint64_t checkpoint_count) {
    return check_partial(m, sigma, horizon, tail, checkpoint_count, true, "NV'");
}

VerdictReport check_nv_dprime(const PartialExtrapolator& m, const BitStream& sigma,
                              std::uint64_t horizon, std::uint64_t tail,
                              std::uint64_t checkpoint_count) {
    return check_partial(m, sigma, horizon, tail, checkpoint_count, false, "NV''");
}

BitStream defeat_nv(const Extrapolator& m, std::uint64_t budget) {
    if (budget == 0) throw precondition_error("defeat budget must be >= 1");
    struct Plan {
        BitString bits;
        std::shared_ptr<Scanner> sc;  // always advanced through all of bits
        std::uint64_t zeros = 0;
    };
    auto plan = std::make_shared<Plan>();
    plan->sc = std::shared_ptr<Scanner>(m.scanner().release());
    return BitStream(
        [m, budget, plan](const BitString& sofar) -> Bit {
            std::uint64_t n = sofar.size() + 1;
            while (plan->bits.size() < n) {
                std::uint64_t j = plan->zeros + 1;
                if (j > 62) throw resource_error("defeat block index overflow");
                std::uint64_t floor_len = std::uint64_t{1} << j;
                for (std::uint64_t i = 0; i < floor_len; ++i) {
                    plan->bits.push_back(1);
                    plan->sc->advance(1);
                }
                bool found = false;
                for (std::uint64_t tries = 0; tries < budget; ++tries) {
                    plan->bits.push_back(1);
                    plan->sc->advance(1);
                    if (plan->sc->predict() == 1) {
                        found = true;
                        break;
                    }
                }
                if (!found)
                    throw construction_error("defeat stream for '" + m.name() +
                                                 "': no 1-prediction within budget " +
                                                 std::to_string(budget) + " in block " +
                                               std::to_string(j),
                                             j);
                plan->bits.push_back(0);
                plan->sc->advance(0);
                ++plan->zeros;
            }
            return plan->bits.bit(n);
        },
        "defeat(" + m.name() + ")");
}

std::pair<BitStream, BitStream> adversarial_pair(const Extrapolator& m, const BitString& w,
                                                 const BitStream& spice, const IndexSet& spikes) {
    if (!w.empty() && spikes.count_upto(w.size()) > 0)
        throw precondition_error("spike positions must all exceed |w|");
    auto make = [&](bool defy, const char* tag) {
        auto fs = std::make_shared<FedScanner>();
        fs->sc = std::shared_ptr<Scanner>(m.scanner().release());
        return BitStream(
            [m, w, spice, spikes, defy, fs](const BitString& sofar) -> Bit {
                std::uint64_t n = sofar.size() + 1;
                fs->sync(sofar);
                if (n <= w.size()) return w.bit(n);
                if (auto rank = spikes.rank_of(n)) return spice.bit(*rank);
                Bit p = fs->sc->predict();
                return defy ? 1 - p : p;
            },
            std::string(tag) + "(" + m.name() + ")");
    };
    return {make(false, "adv-star"), make(true, "adv-dagger")};
}

BitStream coarse_block_double(const BitStream& sigma0) {
    return BitStream(
        [sigma0](const BitString& sofar) -> Bit {
            std::uint64_t n = sofar.size() + 1;
            std::uint64_t k = 1, total = 2;
            while (n > total) {
                ++k;
                total += std::uint64_t{1} << k;
            }
            return sigma0.bit(k);
        },
        "block-double(" + sigma0.name() + ")");
}

}  // namespace seqlearn

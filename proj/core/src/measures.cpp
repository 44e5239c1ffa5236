#include "seqlearn/measures.hpp"

#include <algorithm>

#include "seqlearn/errors.hpp"
#include "seqlearn/rng.hpp"

namespace seqlearn {

namespace {

struct BernoulliCursor final : LawCursor {
    Rational p;
    explicit BernoulliCursor(Rational pp) : p(std::move(pp)) {}
    Rational prob_one() const override { return p; }
    void advance(Bit) override {}
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<BernoulliCursor>(*this);
    }
};

struct LaplaceCursor final : LawCursor {
    std::uint64_t n = 0, ones = 0;
    Rational prob_one() const override {
        Rational q(static_cast<unsigned long>(ones + 1), static_cast<unsigned long>(n + 2));
        q.canonicalize();
        return q;
    }
    void advance(Bit b) override {
        ++n;
        ones += static_cast<std::uint64_t>(b);
    }
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<LaplaceCursor>(*this);
    }
};

struct MarkovCursor final : LawCursor {
    std::size_t order;
    std::shared_ptr<const std::vector<Rational>> table;
    std::size_t seen = 0;
    std::size_t context = 0;  // last `order` bits, first of them most significant
    Rational prob_one() const override {
        if (seen < order) return Rational(1, 2);
        return (*table)[context];
    }
    void advance(Bit b) override {
        context = ((context << 1) | static_cast<std::size_t>(b)) &
                  ((std::size_t{1} << order) - 1);
        ++seen;
    }
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<MarkovCursor>(*this);
    }
};

struct DeltaCursor final : LawCursor {
    BitStream sigma;
    std::size_t pos = 0;
    bool alive = true;
    explicit DeltaCursor(BitStream s) : sigma(std::move(s)) {}
    Rational prob_one() const override {
        if (!alive) throw undefined_conditional("conditional off the support of " + sigma.name());
        return Rational(sigma.bit(pos + 1));
    }
    void advance(Bit b) override {
        if (alive && sigma.bit(pos + 1) != b) alive = false;
        ++pos;
    }
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<DeltaCursor>(*this);
    }
};

struct SpikedCursor final : LawCursor {
    std::unique_ptr<LawCursor> base;
    IndexSet spikes;
    BitStream inject;
    std::size_t pos = 0;
    bool alive = true;
    SpikedCursor(std::unique_ptr<LawCursor> b, IndexSet s, BitStream i)
        : base(std::move(b)), spikes(std::move(s)), inject(std::move(i)) {}
    SpikedCursor(const SpikedCursor& o)
        : base(o.base->clone()), spikes(o.spikes), inject(o.inject), pos(o.pos), alive(o.alive) {}
    Rational prob_one() const override {
        if (!alive) throw undefined_conditional("conditional off the spiked support");
        if (auto rank = spikes.rank_of(pos + 1)) return Rational(inject.bit(*rank));
        return base->prob_one();
    }
    void advance(Bit b) override {
        if (alive) {
            if (auto rank = spikes.rank_of(pos + 1)) {
                if (inject.bit(*rank) != b) alive = false;
            }
        }
        base->advance(b);
        ++pos;
    }
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<SpikedCursor>(*this);
    }
};

struct MixtureCursor final : LawCursor {
    std::vector<Rational> live_weight;  // mixture weight times component cylinder weight
    std::vector<std::unique_ptr<LawCursor>> cursors;
    MixtureCursor(const std::vector<Rational>& weights,
                  const std::vector<ConditionalLaw>& components) {
        live_weight = weights;
        for (const auto& c : components) cursors.push_back(c.cursor());
    }
    MixtureCursor(const MixtureCursor& o) : live_weight(o.live_weight) {
        for (const auto& c : o.cursors) cursors.push_back(c->clone());
    }
    Rational prob_one() const override {
        Rational num(0), den(0);
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            if (live_weight[i] == 0) continue;
            num += live_weight[i] * cursors[i]->prob_one();
            den += live_weight[i];
        }
        if (den == 0) throw undefined_conditional("conditional on a zero-weight mixture prefix");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }
    void advance(Bit b) override {
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            if (live_weight[i] == 0) continue;
            Rational p = cursors[i]->prob_one();
            live_weight[i] *= b ? p : Rational(1) - p;
            if (live_weight[i] != 0) cursors[i]->advance(b);
        }
    }
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<MixtureCursor>(*this);
    }
};

struct EvilCursor final : LawCursor {
    std::unique_ptr<LawCursor> inner;
    explicit EvilCursor(std::unique_ptr<LawCursor> in) : inner(std::move(in)) {}
    EvilCursor(const EvilCursor& o) : inner(o.inner->clone()) {}
    Rational prob_one() const override {
        // lean against mu: where mu sees 1 at least as likely, offer 1 chance 1/10
        return inner->prob_one() >= Rational(1, 2) ? Rational(1, 10) : Rational(9, 10);
    }
    void advance(Bit b) override { inner->advance(b); }
    std::unique_ptr<LawCursor> clone() const override { return std::make_unique<EvilCursor>(*this); }
};

struct RefCursor final : LawCursor {
    std::uint64_t n = 0;
    BigInt pw{1};  // 2^n
    Rational prob_one() const override {
        if (n == 0) return Rational(1, 2);
        Rational q(pw - 1, pw);
        q.canonicalize();
        return q;
    }
    void advance(Bit) override {
        ++n;
        pw *= 2;
    }
    std::unique_ptr<LawCursor> clone() const override { return std::make_unique<RefCursor>(*this); }
};

// binary trie over code cells; leaves carry part indices
struct GlueTrie {
    struct Node {
        int child[2] = {-1, -1};
        int part = -1;       // >= 0 at a leaf
        Rational mass{0};    // total weight of parts below
    };
    std::vector<Node> nodes;  // 0 is the root

    static std::shared_ptr<const GlueTrie> build(const std::vector<BitString>& parts,
                                                 const std::vector<Rational>& weights) {
        auto trie = std::make_shared<GlueTrie>();
        trie->nodes.emplace_back();
        for (std::size_t i = 0; i < parts.size(); ++i) {
            int cur = 0;
            for (std::size_t k = 1; k <= parts[i].size(); ++k) {
                if (trie->nodes[cur].part >= 0)
                    throw precondition_error("code is not prefix-free");
                Bit b = parts[i].bit(k);
                if (trie->nodes[cur].child[b] < 0) {
                    trie->nodes[cur].child[b] = static_cast<int>(trie->nodes.size());
                    trie->nodes.emplace_back();
                }
                trie->nodes[cur].mass += weights[i];
                cur = trie->nodes[cur].child[b];
            }
            if (trie->nodes[cur].part >= 0 || trie->nodes[cur].child[0] >= 0 ||
                trie->nodes[cur].child[1] >= 0)
                throw precondition_error("code is not prefix-free");
            trie->nodes[cur].part = static_cast<int>(i);
            trie->nodes[cur].mass = weights[i];
        }
        return trie;
    }
};

struct GlueCursor final : LawCursor {
    std::shared_ptr<const GlueTrie> trie;
    std::unique_ptr<LawCursor> mu;  // advanced along every consumed bit
    int node = 0;                   // current trie node; -1 once inside a cell
    GlueCursor(std::shared_ptr<const GlueTrie> t, std::unique_ptr<LawCursor> m)
        : trie(std::move(t)), mu(std::move(m)) {
        if (trie->nodes[0].part >= 0) node = -1;  // the empty string is a cell
    }
    GlueCursor(const GlueCursor& o) : trie(o.trie), mu(o.mu->clone()), node(o.node) {}
    Rational prob_one() const override {
        if (node < 0) return mu->prob_one();
        const auto& nd = trie->nodes[node];
        int c1 = nd.child[1];
        Rational w1 = c1 < 0 ? Rational(0) : trie->nodes[c1].mass;
        Rational q = w1 / nd.mass;
        q.canonicalize();
        return q;
    }
    void advance(Bit b) override {
        if (node >= 0) {
            int c = trie->nodes[node].child[b];
            if (c < 0)
                throw undefined_conditional("prefix left the glued code's support");
            node = trie->nodes[c].part >= 0 ? -1 : c;
        }
        mu->advance(b);
    }
    std::unique_ptr<LawCursor> clone() const override { return std::make_unique<GlueCursor>(*this); }
};

struct TableLawCursor final : LawCursor {
    std::shared_ptr<const std::vector<std::vector<Rational>>> levels;  // level l: 2^l sums
    std::unique_ptr<LawCursor> tail;
    std::size_t level = 0, idx = 0;
    TableLawCursor(std::shared_ptr<const std::vector<std::vector<Rational>>> ls,
                   std::unique_ptr<LawCursor> t)
        : levels(std::move(ls)), tail(std::move(t)) {}
    TableLawCursor(const TableLawCursor& o)
        : levels(o.levels), tail(o.tail->clone()), level(o.level), idx(o.idx) {}
    Rational prob_one() const override {
        std::size_t depth = levels->size() - 1;
        if (level >= depth) return tail->prob_one();
        const Rational& whole = (*levels)[level][idx];
        if (whole == 0) throw undefined_conditional("conditional on a zero-weight table cell");
        Rational q = (*levels)[level + 1][2 * idx + 1] / whole;
        q.canonicalize();
        return q;
    }
    void advance(Bit b) override {
        std::size_t depth = levels->size() - 1;
        if (level < depth) {
            idx = 2 * idx + static_cast<std::size_t>(b);
            ++level;
        }
        tail->advance(b);
    }
    std::unique_ptr<LawCursor> clone() const override {
        return std::make_unique<TableLawCursor>(*this);
    }
};

void check_unit_weights(const std::vector<Rational>& weights) {
    Rational sum(0);
    for (const auto& w : weights) {
        if (w <= 0) throw precondition_error("weights must be positive");
        sum += w;
    }
    if (sum != 1) throw precondition_error("weights must sum to 1");
}

// round to the nearest multiple of 2^-bits (ties up); error <= 2^-(bits+1)
Rational dyadic_round(const Rational& q, std::uint64_t bits) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    BigInt t;
    // floor((2*num*scale + den) / (2*den))
    BigInt num2 = q.get_num() * scale * 2 + q.get_den();
    mpz_fdiv_q(t.get_mpz_t(), num2.get_mpz_t(), BigInt(q.get_den() * 2).get_mpz_t());
    Rational r(t, scale);
    r.canonicalize();
    return r;
}

}  // namespace

ConditionalLaw::ConditionalLaw(std::string name, bool full_support, CursorFactory make)
    : name_(std::move(name)), full_support_(full_support), make_(std::move(make)) {}

Rational ConditionalLaw::p1(const BitString& w) const {
    auto cur = make_();
    for (std::size_t k = 1; k <= w.size(); ++k) cur->advance(w.bit(k));
    Rational q = cur->prob_one();
    if (full_support_ && (q <= 0 || q >= 1))
        throw support_error("law '" + name_ + "' claims full support but p1(" + w.str() +
                            ") = " + rat_str(q));
    return q;
}

std::unique_ptr<LawCursor> ConditionalLaw::cursor() const { return make_(); }

Rational cylinder_weight(const ConditionalLaw& mu, const BitString& w) {
    auto cur = mu.cursor();
    Rational weight(1);
    for (std::size_t k = 1; k <= w.size(); ++k) {
        Bit b = w.bit(k);
        Rational p = cur->prob_one();
        weight *= b ? p : Rational(1) - p;
        if (weight == 0) return weight;
        cur->advance(b);
    }
    return weight;
}

ConditionalLaw bernoulli(const Rational& p) {
    if (p < 0 || p > 1) throw precondition_error("bernoulli bias must lie in [0, 1]");
    bool full = p > 0 && p < 1;
    return ConditionalLaw("bernoulli(" + rat_str(p) + ")", full,
                          [p] { return std::make_unique<BernoulliCursor>(p); });
}

ConditionalLaw laplace_bayes() {
    return ConditionalLaw("laplace-bayes", true, [] { return std::make_unique<LaplaceCursor>(); });
}

ConditionalLaw markov(std::size_t order, const std::vector<Rational>& table) {
    if (order >= 20) throw precondition_error("markov order too large");
    if (table.size() != (std::size_t{1} << order))
        throw precondition_error("markov table must have 2^order entries");
    bool full = true;
    for (const auto& p : table) {
        if (p < 0 || p > 1) throw precondition_error("markov entries must lie in [0, 1]");
        if (p == 0 || p == 1) full = false;
    }
    auto shared = std::make_shared<const std::vector<Rational>>(table);
    return ConditionalLaw("markov(" + std::to_string(order) + ")", full, [order, shared] {
        auto c = std::make_unique<MarkovCursor>();
        c->order = order;
        c->table = shared;
        return c;
    });
}

ConditionalLaw delta_law(const BitStream& sigma) {
    return ConditionalLaw("delta(" + sigma.name() + ")", false,
                          [sigma] { return std::make_unique<DeltaCursor>(sigma); });
}

ConditionalLaw spiked_law(const ConditionalLaw& base, const IndexSet& spikes,
                          const BitStream& inject) {
    return ConditionalLaw(
        "spiked(" + base.name() + "," + spikes.name() + "," + inject.name() + ")", false,
        [base, spikes, inject] {
            return std::make_unique<SpikedCursor>(base.cursor(), spikes, inject);
        });
}

ConditionalLaw mixture(const std::vector<Rational>& weights,
                       const std::vector<ConditionalLaw>& components) {
    if (weights.empty() || weights.size() != components.size())
        throw precondition_error("mixture needs matching non-empty weights and components");
    check_unit_weights(weights);
    bool full = false;
    std::string nm = "mixture(";
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].full_support()) full = true;
        if (i) nm += ",";
        nm += components[i].name();
    }
    nm += ")";
    return ConditionalLaw(nm, full, [weights, components] {
        return std::make_unique<MixtureCursor>(weights, components);
    });
}

ConditionalLaw evil_forecaster(const ConditionalLaw& mu) {
    if (!mu.full_support())
        throw precondition_error("evil forecaster needs a full-support opponent");
    return ConditionalLaw("evil-of(" + mu.name() + ")", true,
                          [mu] { return std::make_unique<EvilCursor>(mu.cursor()); });
}

ConditionalLaw ref_forecaster() {
    return ConditionalLaw("ref-forecaster", true, [] { return std::make_unique<RefCursor>(); });
}

ConditionalLaw glue_partition(const std::vector<BitString>& parts,
                              const std::vector<Rational>& weights, const ConditionalLaw& mu) {
    if (parts.empty() || parts.size() != weights.size())
        throw precondition_error("glue needs matching non-empty parts and weights");
    check_unit_weights(weights);
    Rational kraft(0);
    for (const auto& p : parts) kraft += pow2(-static_cast<long>(p.size()));
    if (kraft != 1)
        throw precondition_error("code is not complete: Kraft sum " + rat_str(kraft));
    auto trie = GlueTrie::build(parts, weights);
    return ConditionalLaw("glue[" + std::to_string(parts.size()) + "](" + mu.name() + ")",
                          mu.full_support(),
                          [trie, mu] { return std::make_unique<GlueCursor>(trie, mu.cursor()); });
}

ConditionalLaw weight_table_law(std::size_t depth, const std::vector<Rational>& cells,
                                const ConditionalLaw& tail) {
    if (depth > 30 || cells.size() != (std::size_t{1} << depth))
        throw precondition_error("weight table must have 2^depth cells");
    bool positive = true;
    Rational sum(0);
    for (const auto& c : cells) {
        if (c < 0) throw precondition_error("cell weights must be >= 0");
        if (c == 0) positive = false;
        sum += c;
    }
    if (sum != 1) throw precondition_error("cell weights must sum to 1");
    auto levels = std::make_shared<std::vector<std::vector<Rational>>>(depth + 1);
    (*levels)[depth] = cells;
    for (std::size_t l = depth; l > 0; --l) {
        auto& up = (*levels)[l - 1];
        up.resize(std::size_t{1} << (l - 1));
        for (std::size_t i = 0; i < up.size(); ++i)
            up[i] = (*levels)[l][2 * i] + (*levels)[l][2 * i + 1];
    }
    std::shared_ptr<const std::vector<std::vector<Rational>>> shared = levels;
    return ConditionalLaw("table-law[" + std::to_string(depth) + "](" + tail.name() + ")",
                          positive && tail.full_support(), [shared, tail] {
                              return std::make_unique<TableLawCursor>(shared, tail.cursor());
                          });
}

ApproxValue mixture_approx(const ConditionalLaw& base,
                           const std::function<ConditionalLaw(std::uint64_t)>& family,
                           const BitString& w, std::uint64_t n) {
    if (n == 0) throw precondition_error("approximation index must be >= 1");
    ApproxValue out;
    out.estimate = dyadic_round(cylinder_weight(base, w), n + 1) / 2;
    Rational half_pow(1);  // 2^-(k+1) running
    for (std::uint64_t k = 1; k <= n + 1; ++k) {
        half_pow /= 2;
        out.estimate += half_pow / 2 * dyadic_round(cylinder_weight(family(k), w), 2 * n);
    }
    out.estimate.canonicalize();
    out.error_bound = pow2(-static_cast<long>(n));
    return out;
}

BitString sample(const ConditionalLaw& law, std::uint64_t seed, std::uint64_t horizon) {
    auto cur = law.cursor();
    BitString path;
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        Bit b = deviate(seed, k) < cur->prob_one() ? 1 : 0;
        path.push_back(b);
        cur->advance(b);
    }
    return path;
}

BitStream sampled_stream(const ConditionalLaw& law, std::uint64_t seed) {
    struct Fed {
        std::unique_ptr<LawCursor> cur;
        std::size_t fed = 0;
    };
    auto st = std::make_shared<Fed>();
    st->cur = law.cursor();
    return BitStream(
        [st, seed](const BitString& sofar) -> Bit {
            while (st->fed < sofar.size()) {
                ++st->fed;
                st->cur->advance(sofar.bit(st->fed));
            }
            return deviate(seed, sofar.size() + 1) < st->cur->prob_one() ? 1 : 0;
        },
        "sampled(" + law.name() + "," + std::to_string(seed) + ")");
}

}  // namespace seqlearn

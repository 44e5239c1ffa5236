#include "seqlearn/index_set.hpp"

#include <algorithm>
#include <mutex>

#include "seqlearn/errors.hpp"

namespace seqlearn {

struct IndexSet::State {
    Enumerator gen;
    std::string name;
    std::vector<std::uint64_t> memo;  // members in order
    bool exhausted = false;
    mutable std::mutex mu;

    // grow memo until its last member is >= n or the set runs out
    void cover(std::uint64_t n) {
        while (!exhausted && (memo.empty() || memo.back() < n)) {
            auto next = gen(memo.size() + 1);
            if (!next) {
                exhausted = true;
                break;
            }
            if (!memo.empty() && *next <= memo.back())
                throw precondition_error("index set '" + name + "' enumerator not strictly increasing");
            memo.push_back(*next);
        }
    }
};

IndexSet IndexSet::from_enumerator(Enumerator e, std::string name) {
    IndexSet s;
    s.st_ = std::make_shared<State>();
    s.st_->gen = std::move(e);
    s.st_->name = std::move(name);
    return s;
}

IndexSet IndexSet::from_sorted(std::vector<std::uint64_t> members) {
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i] <= members[i - 1])
            throw precondition_error("index set members must be strictly increasing");
    std::string nm = "set[" + std::to_string(members.size()) + "]";
    return from_enumerator(
        [members](std::uint64_t k) -> std::optional<std::uint64_t> {
            if (k > members.size()) return std::nullopt;
            return members[k - 1];
        },
        std::move(nm));
}

IndexSet IndexSet::all() {
    return from_enumerator([](std::uint64_t k) { return std::optional<std::uint64_t>(k); }, "all");
}

IndexSet IndexSet::none() {
    return from_enumerator([](std::uint64_t) { return std::optional<std::uint64_t>(); }, "none");
}

IndexSet IndexSet::powers_of(std::uint64_t base) {
    if (base < 2) throw precondition_error("power schedule needs base >= 2");
    return from_enumerator(
        [base](std::uint64_t k) -> std::optional<std::uint64_t> {
            std::uint64_t v = 1;
            for (std::uint64_t i = 0; i < k; ++i) {
                if (v > UINT64_MAX / base) return std::nullopt;
                v *= base;
            }
            return v;
        },
        "powers-of-" + std::to_string(base));
}

IndexSet IndexSet::squares() {
    return from_enumerator(
        [](std::uint64_t k) -> std::optional<std::uint64_t> {
            if (k >= (std::uint64_t{1} << 32)) return std::nullopt;
            return k * k;
        },
        "squares");
}

bool IndexSet::contains(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(st_->mu);
    st_->cover(n);
    return std::binary_search(st_->memo.begin(), st_->memo.end(), n);
}

std::optional<std::uint64_t> IndexSet::member(std::uint64_t k) const {
    if (k == 0) throw precondition_error("member ordinals are 1-based");
    std::lock_guard<std::mutex> lock(st_->mu);
    while (!st_->exhausted && st_->memo.size() < k) {
        auto next = st_->gen(st_->memo.size() + 1);
        if (!next) {
            st_->exhausted = true;
            break;
        }
        if (!st_->memo.empty() && *next <= st_->memo.back())
            throw precondition_error("index set enumerator not strictly increasing");
        st_->memo.push_back(*next);
    }
    if (st_->memo.size() < k) return std::nullopt;
    return st_->memo[k - 1];
}

std::uint64_t IndexSet::count_upto(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(st_->mu);
    st_->cover(n);
    return static_cast<std::uint64_t>(
        std::upper_bound(st_->memo.begin(), st_->memo.end(), n) - st_->memo.begin());
}

std::vector<std::uint64_t> IndexSet::members_upto(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(st_->mu);
    st_->cover(n);
    auto end = std::upper_bound(st_->memo.begin(), st_->memo.end(), n);
    return {st_->memo.begin(), end};
}

std::optional<std::uint64_t> IndexSet::rank_of(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(st_->mu);
    st_->cover(n);
    auto it = std::lower_bound(st_->memo.begin(), st_->memo.end(), n);
    if (it == st_->memo.end() || *it != n) return std::nullopt;
    return static_cast<std::uint64_t>(it - st_->memo.begin()) + 1;
}

const std::string& IndexSet::name() const { return st_->name; }

Rational density_upto(const IndexSet& s, std::uint64_t n) {
    if (n == 0) throw precondition_error("density needs n >= 1");
    Rational q(static_cast<unsigned long>(s.count_upto(n)), static_cast<unsigned long>(n));
    q.canonicalize();
    return q;
}

std::vector<std::uint64_t> checkpoints(std::uint64_t horizon, std::uint64_t count) {
    if (count == 0 || horizon == 0 || count > horizon)
        throw precondition_error("checkpoints need 1 <= count <= horizon");
    std::vector<std::uint64_t> cs(count);
    BigInt h(static_cast<unsigned long>(horizon));
    for (std::uint64_t i = 1; i <= count; ++i) {
        // floor(horizon^(i/count)) via integer count-th root of horizon^i
        BigInt p, r;
        mpz_pow_ui(p.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(i));
        mpz_root(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(count));
        std::uint64_t c = r.get_ui();
        if (i > 1 && c <= cs[i - 2]) c = cs[i - 2] + 1;  // force strict increase
        std::uint64_t ceiling = horizon - (count - i);   // leave room to finish
        if (c > ceiling) c = ceiling;
        cs[i - 1] = c;
    }
    cs[count - 1] = horizon;
    return cs;
}

}  // namespace seqlearn

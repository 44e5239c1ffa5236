#include "seqlearn/registry.hpp"

#include <cctype>

#include "seqlearn/errors.hpp"

namespace seqlearn {

namespace {

bool token_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '/' ||
           c == ':' || c == '.' || c == '*' || c == '^';
}

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw config_error("bad expression at offset " + std::to_string(pos) + ": " + why +
                           " in '" + text + "'");
    }
    void expect(char c) {
        if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::vector<Expr> arg_list(char closer) {
        std::vector<Expr> args;
        skip_ws();
        if (pos < text.size() && text[pos] == closer) {
            ++pos;
            return args;
        }
        for (;;) {
            args.push_back(expr());
            skip_ws();
            if (pos >= text.size()) fail("unterminated argument list");
            if (text[pos] == ',') {
                ++pos;
                continue;
            }
            if (text[pos] == closer) {
                ++pos;
                return args;
            }
            fail("expected ',' or close");
        }
    }

    Expr expr() {
        skip_ws();
        if (pos >= text.size()) fail("empty expression");
        Expr e;
        if (text[pos] == '[') {
            ++pos;
            e.list = true;
            e.args = arg_list(']');
            return e;
        }
        if (text[pos] == '"') {
            ++pos;
            std::size_t start = pos;
            while (pos < text.size() && text[pos] != '"') ++pos;
            if (pos >= text.size()) fail("unterminated quote");
            e.atom = text.substr(start, pos - start);
            ++pos;
            return e;
        }
        std::size_t start = pos;
        while (pos < text.size() && token_char(text[pos])) ++pos;
        if (pos == start) fail("expected a token");
        std::string tok = text.substr(start, pos - start);
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            e.head = tok;
            e.args = arg_list(')');
            return e;
        }
        e.atom = tok;
        return e;
    }
};

std::uint64_t as_uint(const Expr& e, const char* what) {
    if (!e.leaf()) throw config_error(std::string("expected a number for ") + what);
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(e.atom, &used);
        if (used != e.atom.size()) throw config_error("");
        return v;
    } catch (...) {
        throw config_error("'" + e.atom + "' is not a number (" + what + ")");
    }
}

Rational as_rational(const Expr& e, const char* what) {
    if (!e.leaf()) throw config_error(std::string("expected a rational for ") + what);
    try {
        return parse_rational(e.atom);
    } catch (const std::exception& ex) {
        throw config_error("'" + e.atom + "' is not a rational (" + what + "): " + ex.what());
    }
}

BitString as_bits(const Expr& e, const char* what) {
    if (!e.leaf()) throw config_error(std::string("expected a bit string for ") + what);
    try {
        return BitString::from_string(e.atom);
    } catch (const std::exception& ex) {
        throw config_error("'" + e.atom + "' is not a bit string (" + what + "): " + ex.what());
    }
}

const std::vector<Expr>& as_list(const Expr& e, const char* what) {
    if (!e.list) throw config_error(std::string("expected a [list] for ") + what);
    return e.args;
}

void need_args(const Expr& e, std::size_t n) {
    if (e.args.size() != n)
        throw config_error(e.head + " takes " + std::to_string(n) + " argument(s), got " +
                           std::to_string(e.args.size()));
}

}  // namespace

std::string Expr::show() const {
    if (leaf()) return atom;
    std::string out = list ? "[" : head + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += args[i].show();
    }
    out += list ? "]" : ")";
    return out;
}

Expr parse_expr(const std::string& text) {
    Parser p{text};
    Expr e = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return e;
}

Extrapolator make_extrapolator(const Expr& e) {
    if (e.leaf()) {
        if (e.atom == "always-0") return always_bit(0);
        if (e.atom == "always-1") return always_bit(1);
        if (e.atom == "last-bit") return last_bit();
        throw config_error("unknown extrapolator '" + e.atom + "'");
    }
    if (e.list) throw config_error("a list is not an extrapolator");
    if (e.head == "majority" || e.head == "k-th-order-majority") {
        need_args(e, 1);
        return majority(as_uint(e.args[0], "majority window"));
    }
    if (e.head == "table") {
        need_args(e, 2);
        std::vector<std::pair<BitString, Bit>> entries;
        for (const Expr& item : as_list(e.args[0], "table entries")) {
            if (!item.leaf()) throw config_error("table entries look like bits:bit");
            auto colon = item.atom.find(':');
            if (colon == std::string::npos || colon + 2 != item.atom.size())
                throw config_error("table entry '" + item.atom + "' is not bits:bit");
            BitString w = BitString::from_string(item.atom.substr(0, colon));
            char b = item.atom[colon + 1];
            if (b != '0' && b != '1')
                throw config_error("table entry '" + item.atom + "' is not bits:bit");
            entries.emplace_back(std::move(w), b - '0');
        }
        std::uint64_t dflt = as_uint(e.args[1], "table default");
        if (dflt > 1) throw config_error("table default must be 0 or 1");
        return table_extrapolator(entries, static_cast<Bit>(dflt));
    }
    if (e.head == "evil-of") {
        need_args(e, 1);
        return evil_twin(make_extrapolator(e.args[0]));
    }
    if (e.head == "combine-nv" || e.head == "combine-weak") {
        need_args(e, 2);
        Extrapolator base = make_extrapolator(e.args[0]);
        std::vector<BitStream> family;
        for (const Expr& item : as_list(e.args[1], "combiner family"))
            family.push_back(make_stream(item));
        return e.head == "combine-nv" ? combine_nv(base, family) : combine_weak(base, family);
    }
    throw config_error("unknown extrapolator '" + e.head + "'");
}

BitStream make_stream(const Expr& e) {
    if (e.leaf()) {
        if (e.atom == "all-ones") return constant_stream(1);
        if (e.atom == "all-zeros") return constant_stream(0);
        if (e.atom == "alternating") return alternating_stream();
        throw config_error("unknown stream '" + e.atom + "'");
    }
    if (e.list) throw config_error("a list is not a stream");
    if (e.head == "periodic") {
        need_args(e, 1);
        return periodic_stream(as_bits(e.args[0], "period"));
    }
    if (e.head == "prefixed") {
        need_args(e, 2);
        return stream_from_string(as_bits(e.args[0], "prefix"), make_stream(e.args[1]));
    }
    if (e.head == "guess") {
        need_args(e, 2);
        return guess_sequence(make_extrapolator(e.args[0]), as_bits(e.args[1], "seed string"));
    }
    if (e.head == "sampled") {
        need_args(e, 2);
        return sampled_stream(make_law(e.args[0]), as_uint(e.args[1], "seed"));
    }
    if (e.head == "defeat") {
        need_args(e, 1);
        return defeat_nv(make_extrapolator(e.args[0]));
    }
    if (e.head == "defeated-block-double" || e.head == "coarse") {
        need_args(e, 1);
        return coarse_block_double(make_stream(e.args[0]));
    }
    throw config_error("unknown stream '" + e.head + "'");
}

IndexSet make_schedule(const Expr& e) {
    if (e.leaf()) {
        if (e.atom == "squares") return IndexSet::squares();
        if (e.atom == "all") return IndexSet::all();
        if (e.atom == "none") return IndexSet::none();
        throw config_error("unknown schedule '" + e.atom + "'");
    }
    if (e.list) {
        std::vector<std::uint64_t> members;
        for (const Expr& item : e.args) members.push_back(as_uint(item, "schedule member"));
        return IndexSet::from_sorted(std::move(members));
    }
    if (e.head == "powers-of") {
        need_args(e, 1);
        return IndexSet::powers_of(as_uint(e.args[0], "base"));
    }
    throw config_error("unknown schedule '" + e.head + "'");
}

ConditionalLaw make_law(const Expr& e) {
    if (e.leaf()) {
        if (e.atom == "laplace-bayes") return laplace_bayes();
        if (e.atom == "ref-forecaster") return ref_forecaster();
        throw config_error("unknown law '" + e.atom + "'");
    }
    if (e.list) throw config_error("a list is not a law");
    if (e.head == "bernoulli") {
        need_args(e, 1);
        return bernoulli(as_rational(e.args[0], "bias"));
    }
    if (e.head == "markov") {
        need_args(e, 2);
        std::vector<Rational> table;
        for (const Expr& item : as_list(e.args[1], "markov table"))
            table.push_back(as_rational(item, "markov entry"));
        return markov(as_uint(e.args[0], "markov order"), table);
    }
    if (e.head == "delta") {
        need_args(e, 1);
        return delta_law(make_stream(e.args[0]));
    }
    if (e.head == "spiked") {
        need_args(e, 3);
        return spiked_law(make_law(e.args[0]), make_schedule(e.args[1]), make_stream(e.args[2]));
    }
    if (e.head == "mixture") {
        need_args(e, 2);
        std::vector<Rational> weights;
        for (const Expr& item : as_list(e.args[0], "mixture weights"))
            weights.push_back(as_rational(item, "weight"));
        std::vector<ConditionalLaw> components;
        for (const Expr& item : as_list(e.args[1], "mixture components"))
            components.push_back(make_law(item));
        return mixture(weights, components);
    }
    if (e.head == "evil-of") {
        need_args(e, 1);
        return evil_forecaster(make_law(e.args[0]));
    }
    if (e.head == "glue") {
        need_args(e, 3);
        std::vector<BitString> parts;
        for (const Expr& item : as_list(e.args[0], "glue parts"))
            parts.push_back(as_bits(item, "glue part"));
        std::vector<Rational> weights;
        for (const Expr& item : as_list(e.args[1], "glue weights"))
            weights.push_back(as_rational(item, "glue weight"));
        return glue_partition(parts, weights, make_law(e.args[2]));
    }
    if (e.head == "table-law") {
        need_args(e, 2);
        const auto& items = as_list(e.args[0], "table cells");
        std::vector<Rational> cells;
        for (const Expr& item : items) cells.push_back(as_rational(item, "cell"));
        std::size_t depth = 0;
        while ((std::size_t{1} << depth) < cells.size()) ++depth;
        return weight_table_law(depth, cells, make_law(e.args[1]));
    }
    throw config_error("unknown law '" + e.head + "'");
}

Extrapolator make_extrapolator(const std::string& expr) {
    return make_extrapolator(parse_expr(expr));
}
BitStream make_stream(const std::string& expr) { return make_stream(parse_expr(expr)); }
ConditionalLaw make_law(const std::string& expr) { return make_law(parse_expr(expr)); }
IndexSet make_schedule(const std::string& expr) { return make_schedule(parse_expr(expr)); }

std::vector<std::string> standard_extrapolators() {
    return {
        "always-0",
        "always-1",
        "last-bit",
        "majority(1)",
        "majority(3)",
        "majority(5)",
        "table([0:0, 11:1], 1)",
        "evil-of(last-bit)",
        "combine-nv(always-0, [all-ones, alternating])",
        "combine-weak(always-0, [all-ones, alternating, periodic(110), all-zeros])",
    };
}

std::vector<std::string> standard_corpus() {
    return {
        "all-ones",
        "all-zeros",
        "alternating",
        "periodic(110)",
        "periodic(1101)",
        "periodic(1001110)",
        "guess(last-bit, 10)",
        "guess(majority(3), 0110)",
        "sampled(bernoulli(1/2), 7)",
        "sampled(laplace-bayes, 11)",
    };
}

}  // namespace seqlearn

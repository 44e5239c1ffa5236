#include "seqlearn/rational.hpp"

#include <stdexcept>

namespace seqlearn {

Rational pow2(long k) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0) return Rational(p);
    Rational q(1, p);
    q.canonicalize();
    return q;
}

Rational pow10_neg(unsigned m) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, m);
    Rational q(1, p);
    q.canonicalize();
    return q;
}

std::string rat_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string rat_decimal(const Rational& q, unsigned places) {
    bool neg = q < 0;
    Rational a = neg ? Rational(-q) : q;
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    BigInt scaled = (a.get_num() * scale) / a.get_den();  // floor, a >= 0
    BigInt whole = scaled / scale;
    BigInt frac = scaled % scale;
    std::string fs = frac.get_str();
    fs.insert(fs.begin(), places - fs.size(), '0');
    std::string out = whole.get_str() + "." + fs;
    return neg ? "-" + out : out;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational{BigInt(s)};
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

}  // namespace seqlearn

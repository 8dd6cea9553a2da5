#include "billiards/numeric.h"

#include <cctype>

namespace billiards {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool all_digits(const std::string& s, std::size_t from) {
    if (from >= s.size()) return false;
    for (std::size_t i = from; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Rational parse_integer(const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (!all_digits(s, start)) throw std::invalid_argument("bad number: " + s);
    Rational q;
    q = mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
    return q;
}

}  // namespace

bool is_exact_literal(const std::string& text) {
    std::string s = trim(text);
    return s.find_first_of(".eE") == std::string::npos;
}

Rational parse_rational(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational n = parse_integer(s.substr(0, slash));
        Rational d = parse_integer(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator: " + s);
        Rational q = n / d;
        q.canonicalize();
        return q;
    }
    // decimal with optional exponent
    std::string mant = s;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        std::string e = s.substr(epos + 1);
        std::size_t st = (!e.empty() && (e[0] == '-' || e[0] == '+')) ? 1 : 0;
        if (!all_digits(e, st)) throw std::invalid_argument("bad exponent: " + s);
        exp10 = std::stol(e);
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        neg = mant[0] == '-';
        mant = mant.substr(1);
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || !all_digits(digits, 0)) throw std::invalid_argument("bad number: " + s);
    mpz_class num(digits, 10);
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational q = exp10 < 0 ? Rational(num, p10) : Rational(num * p10);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace billiards

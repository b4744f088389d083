#include "orbkit/rational.hpp"

#include <limits>
#include <numeric>
#include <tuple>
#include <utility>

namespace orbkit {

std::string to_string(const Rational& r) {
    auto num = numerator_of(r);
    auto den = denominator_of(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(const std::string& text, const std::string& whole) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size()) throw Error("parse", "parse_rational", "malformed rational '" + whole + "'");
    BigInt value = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw Error("parse", "parse_rational", "malformed rational '" + whole + "'");
        value = value * 10 + (c - '0');
    }
    return negative ? BigInt(-value) : value;
}

} // namespace

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(text, text));
    auto num = parse_integer(text.substr(0, slash), text);
    auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error("parse", "parse_rational", "zero denominator in '" + text + "'");
    return Rational(num, den);
}

std::int64_t to_int64(const BigInt& v, const char* where) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error("overflow", where, "integer " + v.str() + " exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

std::int64_t to_int64(const Rational& r, const char* where) {
    if (!is_integer(r)) throw Error("precondition", where, "expected an integer, got " + to_string(r));
    return to_int64(numerator_of(r), where);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t mod64(std::int64_t a, std::int64_t m) {
    auto r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = mod64(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        auto q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1)
        throw Error("precondition", "inverse_mod", std::to_string(a) + " is not invertible modulo " + std::to_string(m));
    return mod64(old_s, m);
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace orbkit

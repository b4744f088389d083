#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orbkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Library-wide failure carrying a short machine code and the place it was raised.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string where, const std::string& message)
        : std::runtime_error(code + " in " + where + ": " + message),
          code_(std::move(code)), where_(std::move(where)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& where() const noexcept { return where_; }

private:
    std::string code_;
    std::string where_;
};

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw Error("precondition", "make_rational", "zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

// "p/q" or "p" when the denominator is one.
std::string to_string(const Rational& r);

// Accepts "p", "-p", "p/q"; throws Error("parse", ...) otherwise.
Rational parse_rational(const std::string& text);

std::int64_t to_int64(const BigInt& v, const char* where);
std::int64_t to_int64(const Rational& r, const char* where);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t mod64(std::int64_t a, std::int64_t m);
// Inverse of a modulo m; throws when gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);
bool is_prime(std::int64_t n);

} // namespace orbkit

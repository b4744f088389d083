#pragma once

#include "orbkit/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace orbkit {

// Integer coefficients of the m-th cyclotomic polynomial, constant term first.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t m);

// Element of Q(zeta_m), stored as a polynomial in zeta of degree < phi(m).
class CyclotomicValue {
public:
    explicit CyclotomicValue(std::int64_t m, const Rational& c = 0);

    static CyclotomicValue root_power(std::int64_t m, std::int64_t k);  // zeta^k

    std::int64_t modulus() const { return m_; }
    const std::vector<Rational>& coefficients() const { return c_; }

    CyclotomicValue operator+(const CyclotomicValue& o) const;
    CyclotomicValue operator-(const CyclotomicValue& o) const;
    CyclotomicValue operator*(const CyclotomicValue& o) const;
    CyclotomicValue operator/(const CyclotomicValue& o) const;
    CyclotomicValue operator*(const Rational& s) const;
    CyclotomicValue& operator+=(const CyclotomicValue& o) { return *this = *this + o; }
    CyclotomicValue inverse() const;

    bool is_zero() const;
    bool is_rational() const;
    // The value when rational, else nullopt.
    std::optional<Rational> as_rational() const;

    // Image under the automorphism zeta -> zeta^t, gcd(t, m) = 1.
    CyclotomicValue conjugate(std::int64_t t) const;
    // Sum of all Galois conjugates (always rational).
    Rational trace() const;

    bool operator==(const CyclotomicValue& o) const { return m_ == o.m_ && c_ == o.c_; }

private:
    CyclotomicValue(std::int64_t m, std::vector<Rational> raw);  // reduces `raw`
    void require_same(const CyclotomicValue& o) const;

    std::int64_t m_;
    std::vector<Rational> c_;
};

std::int64_t euler_phi(std::int64_t m);

} // namespace orbkit

#include "orbkit/cyclotomic.hpp"

#include <map>
#include <mutex>

namespace orbkit {
namespace {

using IntPoly = std::vector<std::int64_t>;
using RatPoly = std::vector<Rational>;

IntPoly divide_exact(IntPoly num, const IntPoly& den) {
    // den is monic.
    IntPoly q(num.size() - den.size() + 1, 0);
    for (std::size_t i = q.size(); i-- > 0;) {
        auto c = num[i + den.size() - 1];
        q[i] = c;
        for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    return q;
}

void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Returns (q, r) with a = q*b + r.
std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
    trim(a);
    RatPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size() && !a.empty()) {
        auto shift = a.size() - b.size();
        Rational c = a.back() / b.back();
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        trim(a);
    }
    return {q, a};
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

RatPoly sub(const RatPoly& a, const RatPoly& b) {
    RatPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

} // namespace

std::int64_t euler_phi(std::int64_t m) {
    std::int64_t result = m, x = m;
    for (std::int64_t p = 2; p * p <= x; ++p) {
        if (x % p) continue;
        while (x % p == 0) x /= p;
        result -= result / p;
    }
    if (x > 1) result -= result / x;
    return result;
}

const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t m) {
    static std::mutex mu;
    static std::map<std::int64_t, IntPoly> cache;
    if (m < 1) throw Error("precondition", "cyclotomic_polynomial", "modulus must be positive");
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    IntPoly p(static_cast<std::size_t>(m) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(m)] = 1;
    for (std::int64_t d = 1; d < m; ++d)
        if (m % d == 0) p = divide_exact(p, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(m, std::move(p)).first->second;
}

CyclotomicValue::CyclotomicValue(std::int64_t m, const Rational& c) : m_(m), c_(static_cast<std::size_t>(euler_phi(m)), 0) {
    c_[0] = c;
}

CyclotomicValue::CyclotomicValue(std::int64_t m, std::vector<Rational> raw) : m_(m) {
    const auto& phi_poly = cyclotomic_polynomial(m);
    const std::size_t deg = phi_poly.size() - 1;
    for (std::size_t d = raw.size(); d-- > deg;) {
        Rational c = raw[d];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= deg; ++i) raw[d - deg + i] -= c * phi_poly[i];
    }
    raw.resize(deg, 0);
    c_ = std::move(raw);
}

CyclotomicValue CyclotomicValue::root_power(std::int64_t m, std::int64_t k) {
    std::vector<Rational> raw(static_cast<std::size_t>(mod64(k, m)) + 1, 0);
    raw.back() = 1;
    return CyclotomicValue(m, std::move(raw));
}

void CyclotomicValue::require_same(const CyclotomicValue& o) const {
    if (m_ != o.m_)
        throw Error("precondition", "CyclotomicValue", "mixed moduli " + std::to_string(m_) + " and " + std::to_string(o.m_));
}

CyclotomicValue CyclotomicValue::operator+(const CyclotomicValue& o) const {
    require_same(o);
    auto r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

CyclotomicValue CyclotomicValue::operator-(const CyclotomicValue& o) const {
    require_same(o);
    auto r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
}

CyclotomicValue CyclotomicValue::operator*(const CyclotomicValue& o) const {
    require_same(o);
    return CyclotomicValue(m_, mul(c_, o.c_));
}

CyclotomicValue CyclotomicValue::operator*(const Rational& s) const {
    auto r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

CyclotomicValue CyclotomicValue::operator/(const CyclotomicValue& o) const { return *this * o.inverse(); }

CyclotomicValue CyclotomicValue::inverse() const {
    if (is_zero()) throw Error("precondition", "CyclotomicValue::inverse", "division by zero");
    // Extended Euclid: s * value + t * Phi = 1.
    const auto& ip = cyclotomic_polynomial(m_);
    RatPoly r0(ip.begin(), ip.end()), r1 = c_;
    trim(r1);
    RatPoly s0, s1{Rational(1)};
    while (!(r1.size() == 1)) {
        auto [q, r] = divmod(r0, r1);
        auto s = sub(s0, mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
        if (r1.empty()) throw Error("internal", "CyclotomicValue::inverse", "value shares a factor with Phi_m");
    }
    Rational lead = r1[0];
    for (auto& x : s1) x /= lead;
    return CyclotomicValue(m_, std::move(s1));
}

bool CyclotomicValue::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CyclotomicValue::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

std::optional<Rational> CyclotomicValue::as_rational() const {
    if (!is_rational()) return std::nullopt;
    return c_.empty() ? Rational(0) : c_[0];
}

CyclotomicValue CyclotomicValue::conjugate(std::int64_t t) const {
    if (gcd64(mod64(t, m_), m_) != 1) throw Error("precondition", "CyclotomicValue::conjugate", "exponent not a unit");
    std::vector<Rational> raw(static_cast<std::size_t>(m_), 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        raw[static_cast<std::size_t>(mod64(static_cast<std::int64_t>(i) * t, m_))] += c_[i];
    return CyclotomicValue(m_, std::move(raw));
}

Rational CyclotomicValue::trace() const {
    CyclotomicValue sum(m_);
    for (std::int64_t t = 1; t <= m_; ++t)
        if (gcd64(t, m_) == 1) sum += conjugate(t);
    auto r = sum.as_rational();
    if (!r) throw Error("internal", "CyclotomicValue::trace", "trace is not rational");
    return *r;
}

} // namespace orbkit

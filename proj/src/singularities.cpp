#include "orbkit/singularities.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

namespace orbkit {

void validate_point(const CyclicSingularPoint& p) {
    if (p.m < 2) throw Error("precondition", "validate_point", "order " + std::to_string(p.m) + " must exceed 1");
    for (auto w : {p.w1, p.w2})
        if (gcd64(mod64(w, p.m), p.m) != 1)
            throw Error("precondition", "validate_point",
                        "weight " + std::to_string(w) + " is not coprime to the order " + std::to_string(p.m) +
                            " (the action would not be free off the fixed point)");
}

CyclicType normalize_type(const CyclicSingularPoint& p) {
    validate_point(p);
    return {p.m, mod64(mod64(p.w2, p.m) * inverse_mod(p.w1, p.m), p.m)};
}

std::vector<std::int64_t> hj_chain(std::int64_t m, std::int64_t q) {
    if (m < 2 || q < 1 || q >= m || gcd64(m, q) != 1)
        throw Error("precondition", "hj_chain",
                    "invalid type (" + std::to_string(m) + ", " + std::to_string(q) + ")");
    std::vector<std::int64_t> chain;
    while (q != 0) {
        auto b = (m + q - 1) / q;
        chain.push_back(b);
        std::tie(m, q) = std::make_pair(q, b * q - m);
    }
    return chain;
}

std::vector<Rational> discrepancies(const std::vector<std::int64_t>& chain) {
    const auto n = chain.size();
    if (std::any_of(chain.begin(), chain.end(), [](auto b) { return b < 2; }))
        throw Error("precondition", "discrepancies", "chain entries must be at least 2");
    // Tridiagonal system: a_{k-1} - b_k a_k + a_{k+1} = b_k - 2.
    std::vector<Rational> diag(n), rhs(n), upper(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
        diag[k] = -chain[k];
        rhs[k] = chain[k] - 2;
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (diag[k - 1] == 0) throw Error("internal", "discrepancies", "singular chain system");
        Rational f = 1 / diag[k - 1];
        diag[k] -= f * upper[k - 1];
        rhs[k] -= f * rhs[k - 1];
    }
    std::vector<Rational> a(n);
    for (std::size_t k = n; k-- > 0;) {
        if (diag[k] == 0) throw Error("internal", "discrepancies", "singular chain system");
        Rational r = rhs[k];
        if (k + 1 < n) r -= upper[k] * a[k + 1];
        a[k] = r / diag[k];
    }
    return a;
}

std::int64_t sl_part_order(const CyclicSingularPoint& p) {
    validate_point(p);
    return gcd64(p.m, mod64(p.w1 + p.w2, p.m));
}

std::int64_t mj_order(const CyclicSingularPoint& p) { return p.m / sl_part_order(p); }

bool du_val_consistency(const CyclicSingularPoint& p) {
    auto t = normalize_type(p);
    auto a = discrepancies(hj_chain(t.m, t.q));
    bool zero = std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
    bool trivial = mj_order(p) == 1;
    if (zero != trivial)
        throw Error("internal", "du_val_consistency",
                    "m_j = 1 is " + std::string(trivial ? "true" : "false") + " but vanishing discrepancies is " +
                        (zero ? "true" : "false"));
    return trivial;
}

} // namespace orbkit

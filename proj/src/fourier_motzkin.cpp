#include "orbkit/fourier_motzkin.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>

namespace orbkit {
namespace {

class Bits {
public:
    explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    Bits operator|(const Bits& o) const {
        Bits r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
        return r;
    }
    std::size_t size_bits() const { return words_.size() * 64; }

private:
    std::vector<std::uint64_t> words_;
};

struct Row {
    std::vector<Rational> c;
    Rational rhs;  // c . x >= rhs
    Bits inequalities;
    Bits equalities;
};

bool is_zero_row(const Row& r) {
    return std::all_of(r.c.begin(), r.c.end(), [](const Rational& v) { return v == 0; });
}

void normalise(Row& r) {
    for (const auto& v : r.c) {
        if (v != 0) {
            Rational s = v < 0 ? Rational(-v) : v;
            for (auto& x : r.c) x /= s;
            r.rhs /= s;
            return;
        }
    }
}

std::vector<std::string> names_of(const Row& r, const std::vector<HomogeneousConstraint>& src,
                                  const std::vector<std::size_t>& ineq_ids, const std::vector<std::size_t>& eq_ids) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < ineq_ids.size(); ++i)
        if (r.inequalities.test(i)) ids.push_back(ineq_ids[i]);
    for (std::size_t i = 0; i < eq_ids.size(); ++i)
        if (r.equalities.test(i)) ids.push_back(eq_ids[i]);
    std::sort(ids.begin(), ids.end());
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(src[id].name);
    return out;
}

// Keeps the strongest row for each normalised coefficient vector.
std::vector<Row> deduplicate(std::vector<Row> rows) {
    std::map<std::vector<Rational>, std::size_t> seen;
    std::vector<Row> out;
    for (auto& r : rows) {
        auto it = seen.find(r.c);
        if (it == seen.end()) {
            seen.emplace(r.c, out.size());
            out.push_back(std::move(r));
        } else {
            auto& kept = out[it->second];
            if (r.rhs > kept.rhs || (r.rhs == kept.rhs && r.inequalities.count() < kept.inequalities.count()))
                kept = std::move(r);
        }
    }
    return out;
}

struct Substitution {
    std::size_t var;
    std::vector<Rational> expr;  // var = sum expr[j] * x_j (expr[var] == 0)
};

} // namespace

FeasibilityResult solve_homogeneous(const std::vector<HomogeneousConstraint>& constraints, std::size_t n_vars) {
    std::vector<std::size_t> ineq_ids, eq_ids;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].coeffs.size() != n_vars)
            throw Error("precondition", "solve_homogeneous", "constraint '" + constraints[i].name + "' has wrong width");
        (constraints[i].relation == Relation::eq ? eq_ids : ineq_ids).push_back(i);
    }

    // Equalities: Gaussian substitution.
    std::vector<Row> eqs;
    for (std::size_t k = 0; k < eq_ids.size(); ++k) {
        Row r{constraints[eq_ids[k]].coeffs, 0, Bits(ineq_ids.size()), Bits(eq_ids.size())};
        r.equalities.set(k);
        eqs.push_back(std::move(r));
    }
    std::vector<Row> rows;
    for (std::size_t k = 0; k < ineq_ids.size(); ++k) {
        const auto& src = constraints[ineq_ids[k]];
        Row r{src.coeffs, src.relation == Relation::gt ? Rational(1) : Rational(0), Bits(ineq_ids.size()),
              Bits(eq_ids.size())};
        r.inequalities.set(k);
        rows.push_back(std::move(r));
    }

    FeasibilityResult result;
    std::vector<Substitution> subs;
    for (std::size_t k = 0; k < eqs.size(); ++k) {
        Row e = eqs[k];
        auto pivot = std::find_if(e.c.begin(), e.c.end(), [](const Rational& v) { return v != 0; });
        if (pivot == e.c.end()) continue;  // 0 = 0: redundant
        std::size_t var = static_cast<std::size_t>(pivot - e.c.begin());
        Rational p = *pivot;
        Substitution s{var, std::vector<Rational>(n_vars, 0)};
        for (std::size_t j = 0; j < n_vars; ++j)
            if (j != var) s.expr[j] = -e.c[j] / p;
        auto apply = [&](Row& r) {
            if (r.c[var] == 0) return;
            Rational f = r.c[var];
            for (std::size_t j = 0; j < n_vars; ++j) r.c[j] += f * s.expr[j];
            r.c[var] = 0;
            r.inequalities = r.inequalities | e.inequalities;
            r.equalities = r.equalities | e.equalities;
        };
        for (std::size_t m = k + 1; m < eqs.size(); ++m) apply(eqs[m]);
        for (auto& r : rows) apply(r);
        subs.push_back(std::move(s));
    }

    auto contradiction = [&](const std::vector<Row>& rs) -> std::optional<Row> {
        for (const auto& r : rs)
            if (is_zero_row(r) && r.rhs > 0) return r;
        return std::nullopt;
    };

    std::vector<bool> eliminated(n_vars, false);
    for (const auto& s : subs) eliminated[s.var] = true;

    for (auto& r : rows) normalise(r);
    rows = deduplicate(std::move(rows));

    std::vector<std::vector<Row>> levels;
    std::vector<std::size_t> order;
    std::size_t steps = 0;
    while (true) {
        if (auto bad = contradiction(rows)) {
            result.certificate = names_of(*bad, constraints, ineq_ids, eq_ids);
            return result;
        }
        std::optional<std::size_t> best;
        long long best_cost = 0;
        for (std::size_t v = 0; v < n_vars; ++v) {
            if (eliminated[v]) continue;
            long long pos = 0, neg = 0;
            for (const auto& r : rows) {
                if (r.c[v] > 0) ++pos;
                else if (r.c[v] < 0) ++neg;
            }
            long long cost = pos * neg - pos - neg;
            if (!best || cost < best_cost) {
                best = v;
                best_cost = cost;
            }
        }
        if (!best) break;
        std::size_t v = *best;
        ++steps;
        levels.push_back(rows);
        order.push_back(v);
        eliminated[v] = true;

        std::vector<Row> next, pos, neg;
        for (auto& r : rows) {
            if (r.c[v] > 0) pos.push_back(r);
            else if (r.c[v] < 0) neg.push_back(r);
            else if (!is_zero_row(r)) next.push_back(r);
            else if (r.rhs > 0) next.push_back(r);
        }
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                Bits hist = p.inequalities | n.inequalities;
                if (hist.count() > steps + 1) continue;  // Chernikov
                Rational fp = -n.c[v], fn = p.c[v];
                Row r{std::vector<Rational>(n_vars), fp * p.rhs + fn * n.rhs, hist, p.equalities | n.equalities};
                for (std::size_t j = 0; j < n_vars; ++j) r.c[j] = fp * p.c[j] + fn * n.c[j];
                r.c[v] = 0;
                normalise(r);
                next.push_back(std::move(r));
            }
        }
        rows = deduplicate(std::move(next));
    }

    // Back substitution, last eliminated first.
    std::vector<Rational> x(n_vars, 0);
    std::vector<bool> assigned(n_vars, false);
    for (std::size_t i = order.size(); i-- > 0;) {
        std::size_t v = order[i];
        std::optional<Rational> lo, hi;
        for (const auto& r : levels[i]) {
            if (r.c[v] == 0) continue;
            Rational rest = 0;
            for (std::size_t j = 0; j < n_vars; ++j)
                if (j != v && assigned[j]) rest += r.c[j] * x[j];
            Rational bound = (r.rhs - rest) / r.c[v];
            if (r.c[v] > 0) {
                if (!lo || bound > *lo) lo = bound;
            } else {
                if (!hi || bound < *hi) hi = bound;
            }
        }
        if (lo && hi && *lo > *hi)
            throw Error("internal", "solve_homogeneous", "empty interval during back substitution");
        if (lo && hi) x[v] = (*lo + *hi) / 2;
        else if (lo) x[v] = *lo;
        else if (hi) x[v] = *hi;
        else x[v] = 0;
        assigned[v] = true;
    }
    for (std::size_t i = subs.size(); i-- > 0;) {
        Rational val = 0;
        for (std::size_t j = 0; j < n_vars; ++j) val += subs[i].expr[j] * x[j];
        x[subs[i].var] = val;
    }

    // Scale to a primitive integer vector.
    BigInt l = 1;
    for (const auto& v : x) l = boost::multiprecision::lcm(l, denominator_of(v));
    BigInt g = 0;
    for (auto& v : x) {
        v *= Rational(l);
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator_of(v)));
    }
    if (g > 1)
        for (auto& v : x) v /= Rational(g);

    result.feasible = true;
    result.point = std::move(x);
    return result;
}

} // namespace orbkit

#include "orbkit/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <thread>

namespace orbkit {

namespace {

using Row = std::vector<std::int64_t>;

std::int64_t lcm_of_denominators(const std::vector<Rational>& ws) {
    std::int64_t d = 1;
    for (const auto& w : ws) d = lcm64(d, to_int64(denominator_of(w), "target_from_spec"));
    return d;
}

std::size_t worker_count(std::size_t tasks) {
    std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ORBKIT_THREADS")) {
        char* end = nullptr;
        auto v = std::strtoul(env, &end, 10);
        if (end != env && v > 0) n = v;
    }
    return std::max<std::size_t>(1, std::min(n, tasks));
}

} // namespace

SearchTarget target_from_spec(const OrbifoldSpec& raw) {
    auto spec = with_default_labels(raw);
    validate_spec(spec);
    SearchTarget t;
    std::vector<Rational> weights;
    struct Where {
        bool chain;
        std::size_t owner, pos;
    };
    std::vector<Where> where;
    for (std::size_t i = 0; i < spec.surfaces.size(); ++i) {
        const auto& s = spec.surfaces[i];
        t.components.push_back({s.label, 2 * s.m * (s.genus - 1), s.genus, 0});
        weights.push_back(make_rational(s.m - 1, s.m));
        where.push_back({false, i, 0});
        t.units.push_back({"surface g=" + std::to_string(s.genus) + " m=" + std::to_string(s.m) + " nu=" +
                               std::to_string(mod64(s.normal_weight, s.m)),
                           {t.components.size() - 1}});
    }
    for (std::size_t j = 0; j < spec.points.size(); ++j) {
        const auto& p = spec.points[j];
        auto ty = normalize_type(p.type);
        auto chain = hj_chain(ty.m, ty.q);
        auto a = discrepancies(chain);
        if (p.chain_labels.size() != chain.size())
            throw Error("precondition", "target_from_spec", p.label + ": chain label count does not match the chain");
        SearchUnit unit{"point " + std::to_string(ty.m) + ";1," + std::to_string(ty.q), {}};
        for (std::size_t k = 0; k < chain.size(); ++k) {
            t.components.push_back({p.chain_labels[k], -chain[k], 0, 0});
            weights.push_back(-a[k]);
            where.push_back({true, j, k});
            unit.members.push_back(t.components.size() - 1);
        }
        t.units.push_back(std::move(unit));
    }
    t.scale = lcm_of_denominators(weights);
    for (std::size_t c = 0; c < t.components.size(); ++c)
        t.components[c].weight = to_int64(weights[c] * Rational(t.scale), "target_from_spec");
    const auto n = t.components.size();
    t.pairing.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            bool adj = x != y && where[x].chain && where[y].chain && where[x].owner == where[y].owner &&
                       (where[x].pos + 1 == where[y].pos || where[y].pos + 1 == where[x].pos);
            t.pairing[x][y] = adj ? 1 : 0;
        }
    return t;
}

SearchTarget disjoint_spheres_target(std::size_t count, std::int64_t square, std::int64_t weight, std::int64_t scale) {
    SearchTarget t;
    t.scale = scale;
    for (std::size_t i = 0; i < count; ++i) {
        t.components.push_back({"F" + std::to_string(i + 1), square, 0, weight});
        t.units.push_back({"sphere", {i}});
    }
    t.pairing.assign(count, std::vector<std::int64_t>(count, 0));
    return t;
}

std::vector<std::string> check_assignment(const SearchTarget& target, const Configuration& asg) {
    std::vector<std::string> bad;
    const auto n = asg.basis.size();
    std::vector<const ClassVector*> cls;
    for (const auto& c : target.components) {
        const auto* lc = asg.find(c.label);
        if (!lc || lc->cls.b.size() != n) {
            bad.push_back("missing or malformed class for " + c.label);
            return bad;
        }
        cls.push_back(&lc->cls);
    }
    std::int64_t a_sum = 0;
    std::vector<std::int64_t> b_sum(n, 0);
    for (std::size_t x = 0; x < cls.size(); ++x) {
        const auto& c = target.components[x];
        const auto& f = *cls[x];
        if (intersect(f, f) != c.square) bad.push_back(c.label + ": square " + std::to_string(intersect(f, f)));
        if (intersect(canonical_class(n), f) != c.k_dot()) bad.push_back(c.label + ": wrong K.F");
        for (std::size_t y = x + 1; y < cls.size(); ++y)
            if (intersect(f, *cls[y]) != target.pairing[x][y])
                bad.push_back(c.label + "." + target.components[y].label + " = " + std::to_string(intersect(f, *cls[y])));
        a_sum += c.weight * f.a;
        for (std::size_t i = 0; i < n; ++i) b_sum[i] += c.weight * f.b[i];
    }
    if (a_sum != 3 * target.scale) bad.push_back("weighted a-sum " + std::to_string(a_sum));
    for (std::size_t i = 0; i < n; ++i)
        if (b_sum[i] != target.scale) bad.push_back("weighted sum of column " + std::to_string(i + 1));
    return bad;
}

namespace {

// Rows (a, b_1..b_N).  Lex-minimal representative under unit permutations within types and column permutations.
class Canonicalizer {
public:
    Canonicalizer(const SearchTarget& t, std::vector<std::vector<Row>> unit_rows) : t_(t), rows_(std::move(unit_rows)) {}

    CanonicalForm run() {
        used_.assign(rows_.size(), false);
        std::vector<Row> prefix;
        descend(0, prefix);
        return CanonicalForm{best_};
    }

private:
    static std::vector<Row> sorted_columns(const std::vector<Row>& m) {
        if (m.empty()) return m;
        const auto n = m.front().size() - 1;
        std::vector<std::vector<std::int64_t>> cols(n);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& r : m) cols[i].push_back(r[i + 1]);
        std::sort(cols.begin(), cols.end());
        std::vector<Row> out = m;
        for (std::size_t r = 0; r < m.size(); ++r)
            for (std::size_t i = 0; i < n; ++i) out[r][i + 1] = cols[i][r];
        return out;
    }

    void descend(std::size_t slot, std::vector<Row>& prefix) {
        auto sorted = sorted_columns(prefix);
        if (have_best_) {
            auto cmp = std::lexicographical_compare_three_way(sorted.begin(), sorted.end(), best_.begin(),
                                                              best_.begin() + static_cast<std::ptrdiff_t>(sorted.size()));
            if (cmp > 0) return;
            if (cmp < 0 && slot < rows_.size()) have_best_ = false;  // every completion beats the old best
        }
        if (slot == rows_.size()) {
            if (!have_best_ || sorted < best_) {
                best_ = sorted;
                have_best_ = true;
            }
            return;
        }
        for (std::size_t u = 0; u < rows_.size(); ++u) {
            if (used_[u] || t_.units[u].type != t_.units[slot].type) continue;
            used_[u] = true;
            for (const auto& r : rows_[u]) prefix.push_back(r);
            descend(slot + 1, prefix);
            prefix.resize(prefix.size() - rows_[u].size());
            used_[u] = false;
        }
    }

    const SearchTarget& t_;
    std::vector<std::vector<Row>> rows_;
    std::vector<bool> used_;
    std::vector<Row> best_;
    bool have_best_ = false;
};

Row key_of(const ClassVector& f) {
    Row r{f.a};
    r.insert(r.end(), f.b.begin(), f.b.end());
    return r;
}

CanonicalForm canonical_from_rows(const SearchTarget& t, std::vector<std::vector<Row>> unit_rows) {
    return Canonicalizer(t, std::move(unit_rows)).run();
}

} // namespace

CanonicalForm canonicalize_solution(const SearchTarget& target, const Configuration& asg) {
    std::vector<std::vector<Row>> unit_rows;
    for (const auto& u : target.units) {
        std::vector<Row> rows;
        for (auto m : u.members) {
            const auto* lc = asg.find(target.components[m].label);
            if (!lc) throw Error("precondition", "canonicalize_solution", "no class for " + target.components[m].label);
            rows.push_back(key_of(lc->cls));
        }
        unit_rows.push_back(std::move(rows));
    }
    return canonical_from_rows(target, std::move(unit_rows));
}

CanonicalForm canonicalize_solution(const Configuration& asg) {
    SearchTarget t;
    for (std::size_t i = 0; i < asg.classes.size(); ++i) {
        t.components.push_back({asg.classes[i].label, 0, 0, 0});
        t.units.push_back({"any", {i}});
    }
    return canonicalize_solution(t, asg);
}

Configuration assignment_from_canonical(const SearchTarget& target, const CanonicalForm& form) {
    Configuration c;
    const auto n = form.rows.empty() ? 0 : form.rows.front().size() - 1;
    c.basis = numeric_basis(n);
    std::size_t r = 0;
    std::map<std::size_t, ClassVector> by_component;
    for (const auto& u : target.units)
        for (auto m : u.members) {
            const auto& row = form.rows.at(r++);
            by_component[m] = ClassVector{row[0], Row(row.begin() + 1, row.end())};
        }
    for (std::size_t m = 0; m < target.components.size(); ++m) c.classes.push_back({target.components[m].label, by_component.at(m)});
    return c;
}

namespace {

class Searcher {
public:
    // a_by_unit: a-coefficients in unit order.  Rows are processed by decreasing a.
    Searcher(const SearchTarget& t, std::size_t n, std::size_t limit, const std::vector<std::int64_t>& a_by_unit)
        : t_(t), n_(n), limit_(limit) {
        struct Slot {
            std::size_t comp, unit, member;
            std::int64_t a;
        };
        std::vector<Slot> slots;
        std::map<std::size_t, std::vector<std::int64_t>> unit_a;
        for (std::size_t u = 0, k = 0; u < t.units.size(); ++u)
            for (std::size_t m = 0; m < t.units[u].members.size(); ++m, ++k) {
                slots.push_back({t.units[u].members[m], u, m, a_by_unit[k]});
                unit_a[u].push_back(a_by_unit[k]);
            }
        std::stable_sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) { return x.a > y.a; });
        const auto rows = slots.size();
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos_of;
        for (std::size_t p = 0; p < rows; ++p) {
            order_.push_back(slots[p].comp);
            a_.push_back(slots[p].a);
            pos_of[{slots[p].unit, slots[p].member}] = p;
        }
        // Units of one type with identical a-vectors are ordered by their rows.
        std::vector<long> twin(t.units.size(), -1);
        for (std::size_t u = 0; u < t.units.size(); ++u)
            for (std::size_t v = u; v-- > 0;)
                if (t.units[v].type == t.units[u].type && unit_a[v] == unit_a[u]) {
                    twin[u] = static_cast<long>(v);
                    break;
                }
        cmp_pos_.assign(rows, -1);
        prev_in_unit_.assign(rows, -1);
        std::map<std::size_t, long> last_seen;
        for (std::size_t p = 0; p < rows; ++p) {
            const auto u = slots[p].unit;
            if (twin[u] >= 0)
                cmp_pos_[p] = static_cast<long>(pos_of.at({static_cast<std::size_t>(twin[u]), slots[p].member}));
            if (last_seen.count(u)) prev_in_unit_[p] = last_seen[u];
            last_seen[u] = static_cast<long>(p);
        }
        less_at_.assign(rows, 0);
        fut_min_.assign(rows + 1, 0);
        fut_max_.assign(rows + 1, 0);
        neg_budget_.assign(rows + 1, 0);
        for (std::size_t p = rows; p-- > 0;) {
            auto w = t.components[order_[p]].weight;
            fut_min_[p] = fut_min_[p + 1] + w * (a_[p] == 0 ? -1 : 0);
            fut_max_[p] = fut_max_[p + 1] + w * (a_[p] == 0 ? 1 : a_[p]);
            neg_budget_[p] = neg_budget_[p + 1] + (a_[p] == 0 ? w : 0);
        }
        rows_.assign(rows, Row(n + 1, 0));
        ctx_.reserve(rows + 1);
        col_sum_.assign(n, 0);
    }

    std::vector<CanonicalForm> run(std::size_t& nodes) {
        std::vector<char> starts(n_, 0);
        if (n_ > 0) starts[0] = 1;
        place(0, starts);
        nodes = nodes_;
        return std::vector<CanonicalForm>(found_.begin(), found_.end());
    }

    bool truncated() const { return truncated_; }

private:
    bool stop() const { return found_.size() >= limit_; }

    void place(std::size_t p, const std::vector<char>& starts) {
        if (stop()) return;
        if (p == order_.size()) {
            record();
            return;
        }
        const bool less = prev_in_unit_[p] >= 0 && less_at_[static_cast<std::size_t>(prev_in_unit_[p])];
        const Row* prev = cmp_pos_[p] >= 0 && !less ? &rows_[static_cast<std::size_t>(cmp_pos_[p])] : nullptr;
        const auto& comp = t_.components[order_[p]];
        const auto a = a_[p];
        auto& row = rows_[p];
        row.assign(n_ + 1, 0);
        row[0] = -a;
        const std::int64_t lo = a == 0 ? -1 : 0;
        const std::int64_t hi = a == 0 ? 1 : a;
        const std::int64_t sum = comp.k_dot() + 3 * a;
        const std::int64_t sq = a * a - comp.square;
        if (sq < 0) return;
        if (a > 0 && (sum < 0 || sq < sum || sq > a * sum)) return;

        Ctx ctx{p, lo, hi, comp.weight, less, prev, &starts, {}, std::vector<std::int64_t>(p, 0), {}, {}};
        for (std::size_t g = 0; g < p; ++g) ctx.need.push_back(a * a_[g] - t_.pairing[order_[p]][order_[g]]);
        // suffix[g][i]: entries of row g in columns after i, ascending.
        ctx.suffix.assign(p, std::vector<Row>(n_));
        for (std::size_t g = 0; g < p; ++g)
            for (std::size_t i = 0; i < n_; ++i) {
                Row xs(rows_[g].begin() + static_cast<std::ptrdiff_t>(i) + 2, rows_[g].end());
                std::sort(xs.begin(), xs.end());
                ctx.suffix[g][i] = std::move(xs);
            }
        // Column overshoot can only be repaid by the single -1 of each later zero-a row.
        ctx.excess_after.assign(n_ + 1, 0);
        for (std::size_t i = n_; i-- > 0;)
            ctx.excess_after[i] = ctx.excess_after[i + 1] + std::max<std::int64_t>(0, col_sum_[i] - t_.scale);
        if (ctx.excess_after[0] > neg_budget_[p]) return;
        ctx_.push_back(std::move(ctx));
        gen(0, sum, sq, 0);
        ctx_.pop_back();
    }

    struct Ctx {
        std::size_t p;
        std::int64_t lo, hi, w;
        bool less;
        const Row* prev;
        const std::vector<char>* starts;
        std::vector<std::int64_t> need, dot;
        std::vector<std::vector<Row>> suffix;
        std::vector<std::int64_t> excess_after;
    };

    bool rest_feasible(std::size_t r, std::int64_t s, std::int64_t q, std::int64_t lo, std::int64_t hi) const {
        const auto rr = static_cast<std::int64_t>(r);
        if (r == 0) return s == 0 && q == 0;
        if (s < rr * lo || s > rr * hi || q < 0) return false;
        if (q < (s < 0 ? -s : s)) return false;
        if (lo >= 0) {
            if (s * s > rr * q) return false;
            if (q > hi * s) return false;
        } else if (q > rr * std::max(lo * lo, hi * hi) || (q - s) % 2 != 0) {
            return false;
        }
        return true;
    }

    // Sum and square sum of the columns after i under per-column caps: class order, column capacity.
    bool capped_feasible(const Ctx& c, std::size_t i, std::int64_t v, std::int64_t s, std::int64_t q,
                         std::int64_t spare) const {
        auto& caps = caps_buf_;
        caps.clear();
        bool same_class = true;
        for (std::size_t j = i + 1; j < n_; ++j) {
            if ((*c.starts)[j]) same_class = false;
            std::int64_t cap = same_class ? v : c.hi;
            if (c.w > 0) cap = std::min(cap, (std::max(t_.scale, col_sum_[j]) + spare - col_sum_[j]) / c.w);
            if (cap < 0) return false;
            caps.push_back(cap);
        }
        std::sort(caps.begin(), caps.end());
        std::int64_t total = 0;
        for (auto x : caps) total += x;
        if (total < s) return false;
        std::int64_t mx = 0, left = s;
        for (auto it = caps.rbegin(); it != caps.rend() && left > 0; ++it) {
            auto t = std::min(*it, left);
            mx += t * t;
            left -= t;
        }
        if (mx < q) return false;
        std::int64_t mn = 0;
        left = s;
        auto k = static_cast<std::int64_t>(caps.size());
        for (auto x : caps) {
            if (x * k <= left) {
                mn += x * x;
                left -= x;
                --k;
                continue;
            }
            auto lvl = left / k, rem = left % k;
            mn += rem * (lvl + 1) * (lvl + 1) + (k - rem) * lvl * lvl;
            break;
        }
        return mn <= q;
    }

    // Entries in {-1, 0, 1} with (q + s) / 2 ones and (q - s) / 2 minus ones.
    static std::pair<std::int64_t, std::int64_t> unit_dot_range(const Row& xs, std::int64_t s, std::int64_t q) {
        const auto plus = static_cast<std::size_t>((q + s) / 2), minus = static_cast<std::size_t>((q - s) / 2);
        const auto len = xs.size();
        std::int64_t mn = 0, mx = 0;
        for (std::size_t k = 0; k < plus; ++k) {
            mx += xs[len - 1 - k];
            mn += xs[k];
        }
        for (std::size_t k = 0; k < minus; ++k) {
            mx -= xs[k];
            mn -= xs[len - 1 - k];
        }
        return {mn, mx};
    }

    // Range of sum v_j x_j over entries v_j in [lo, hi] with sum v_j = s (greedy, xs ascending).
    static std::pair<std::int64_t, std::int64_t> dot_range(const Row& xs, std::int64_t s, std::int64_t lo, std::int64_t hi) {
        std::int64_t base = 0;
        for (auto x : xs) base += lo * x;
        const auto extra = s - lo * static_cast<std::int64_t>(xs.size());
        std::int64_t mn = base, mx = base, left = extra;
        for (auto x : xs) {
            auto t = std::min(hi - lo, left);
            mn += t * x;
            left -= t;
        }
        left = extra;
        for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
            auto t = std::min(hi - lo, left);
            mx += t * *it;
            left -= t;
        }
        return {mn, mx};
    }

    void gen(std::size_t i, std::int64_t s_left, std::int64_t q_left, std::int64_t excess) {
        if (stop()) return;
        auto& c = ctx_.back();
        auto& row = rows_[c.p];
        const auto& starts = *c.starts;
        if (i == n_) {
            if (s_left != 0 || q_left != 0 || c.dot != c.need) return;
            ++nodes_;
            std::vector<char> next = starts;
            for (std::size_t j = 1; j < n_; ++j)
                if (row[j + 1] != row[j]) next[j] = 1;
            for (std::size_t j = 0; j < n_; ++j) col_sum_[j] += c.w * row[j + 1];
            less_at_[c.p] = c.less || (c.prev && row < *c.prev);
            place(c.p + 1, next);
            for (std::size_t j = 0; j < n_; ++j) col_sum_[j] -= c.w * row[j + 1];
            return;
        }
        std::int64_t top = c.hi;
        if (!starts[i] && i > 0) top = std::min(top, row[i]);  // row[i] holds column i-1
        bool tied = c.prev && !c.less && std::equal(row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(i),
                                                    c.prev->begin() + 1);
        if (tied) top = std::min(top, (*c.prev)[i + 1]);
        const auto s_target = t_.scale;
        for (std::int64_t v = top; v >= c.lo; --v) {
            auto col = col_sum_[i] + c.w * v;
            if (col + fut_min_[c.p + 1] > s_target || col + fut_max_[c.p + 1] < s_target) continue;
            const auto ex2 = excess + std::max<std::int64_t>(0, col - s_target);
            if (c.lo >= 0 && ex2 + c.excess_after[i + 1] > neg_budget_[c.p + 1]) continue;
            auto s2 = s_left - v, q2 = q_left - v * v;
            if (!rest_feasible(n_ - i - 1, s2, q2, c.lo, c.hi)) continue;
            if (c.lo >= 0 && !capped_feasible(c, i, v, s2, q2, neg_budget_[c.p + 1] - ex2 - c.excess_after[i + 1]))
                continue;
            bool ok = true;
            for (std::size_t g = 0; g < c.p && ok; ++g) {
                auto d = c.dot[g] + v * rows_[g][i + 1];
                auto [mn, mx] = c.lo < 0 ? unit_dot_range(c.suffix[g][i], s2, q2) : dot_range(c.suffix[g][i], s2, c.lo, c.hi);
                if (d + mn > c.need[g] || d + mx < c.need[g]) ok = false;
            }
            if (!ok) continue;
            row[i + 1] = v;
            for (std::size_t g = 0; g < c.p; ++g) c.dot[g] += v * rows_[g][i + 1];
            gen(i + 1, s2, q2, ex2);
            for (std::size_t g = 0; g < c.p; ++g) c.dot[g] -= v * rows_[g][i + 1];
            row[i + 1] = 0;
            if (stop()) return;
        }
    }

    void record() {
        std::vector<std::vector<Row>> unit_rows(t_.units.size());
        for (std::size_t u = 0; u < t_.units.size(); ++u)
            for (auto m : t_.units[u].members) {
                auto p = static_cast<std::size_t>(std::find(order_.begin(), order_.end(), m) - order_.begin());
                Row r = rows_[p];
                r[0] = -r[0];
                unit_rows[u].push_back(std::move(r));
            }
        auto form = canonical_from_rows(t_, std::move(unit_rows));
        found_.insert(std::move(form));
        if (found_.size() >= limit_) truncated_ = true;
    }

    const SearchTarget& t_;
    std::size_t n_, limit_;
    std::vector<std::int64_t> a_;
    std::vector<std::size_t> order_;
    std::vector<long> cmp_pos_, prev_in_unit_;
    std::vector<char> less_at_;
    std::vector<std::int64_t> fut_min_, fut_max_, neg_budget_, col_sum_;
    std::vector<Row> rows_;
    std::vector<Ctx> ctx_;
    mutable Row caps_buf_;
    std::set<CanonicalForm> found_;
    std::size_t nodes_ = 0;
    bool truncated_ = false;
};

// a-coefficients in unit order; a-vectors of same-type units are lexicographically non-decreasing.
std::vector<std::vector<std::int64_t>> a_distributions(const SearchTarget& t) {
    std::vector<std::size_t> order, unit_of, member;
    for (std::size_t u = 0; u < t.units.size(); ++u)
        for (std::size_t k = 0; k < t.units[u].members.size(); ++k) {
            order.push_back(t.units[u].members[k]);
            unit_of.push_back(u);
            member.push_back(k);
        }
    std::map<std::string, std::size_t> last_start;  // type -> first position of the last unit seen
    std::vector<long> twin(order.size(), -1);       // same member of the previous same-type unit
    for (std::size_t p = 0; p < order.size(); ++p) {
        const auto& ty = t.units[unit_of[p]].type;
        if (member[p] == 0) {
            auto it = last_start.find(ty);
            if (it != last_start.end()) twin[p] = static_cast<long>(it->second);
            last_start[ty] = p;
        } else if (twin[p - 1] >= 0) {
            twin[p] = twin[p - 1] + 1;
        }
    }
    const std::int64_t total = 3 * t.scale;
    std::vector<std::int64_t> lo(order.size()), hi(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        const auto& c = t.components[order[p]];
        bool zero_ok = c.genus == 0 && c.square <= -1;
        lo[p] = zero_ok ? 0 : 1;
        hi[p] = c.weight > 0 ? total / c.weight : total;
    }
    std::vector<std::int64_t> min_rest(order.size() + 1, 0);
    for (std::size_t p = order.size(); p-- > 0;)
        min_rest[p] = min_rest[p + 1] + t.components[order[p]].weight * lo[p];

    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur(order.size(), 0);
    std::function<void(std::size_t, std::int64_t, bool)> rec = [&](std::size_t p, std::int64_t left, bool tied) {
        if (p == order.size()) {
            if (left == 0) out.push_back(cur);
            return;
        }
        const auto w = t.components[order[p]].weight;
        if (member[p] == 0) tied = twin[p] >= 0;
        std::int64_t from = lo[p];
        if (tied) from = std::max(from, cur[static_cast<std::size_t>(twin[p])]);
        for (std::int64_t a = from; a <= hi[p]; ++a) {
            auto rest = left - w * a;
            if (rest < min_rest[p + 1]) break;
            cur[p] = a;
            rec(p + 1, rest, tied && a == cur[static_cast<std::size_t>(twin[p])]);
        }
    };
    rec(0, total, false);
    return out;
}

} // namespace

SearchResult search_expressions(const SearchTarget& target, std::size_t n_blowups, std::size_t limit) {
    SearchResult res;
    if (limit == 0 || target.components.empty()) return res;

    // Coefficient accounting: (sum w F)^2 = scale^2 (9 - N).
    std::int64_t lhs = 0;
    const auto& cs = target.components;
    for (std::size_t x = 0; x < cs.size(); ++x)
        for (std::size_t y = 0; y < cs.size(); ++y)
            lhs += cs[x].weight * cs[y].weight * (x == y ? cs[x].square : target.pairing[x][y]);
    if (lhs != target.scale * target.scale * (9 - static_cast<std::int64_t>(n_blowups))) return res;

    auto branches = a_distributions(target);
    res.stats.branches = branches.size();
    std::vector<std::vector<CanonicalForm>> per_branch(branches.size());
    std::vector<std::size_t> nodes(branches.size(), 0);
    std::vector<char> cut(branches.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            auto b = next.fetch_add(1);
            if (b >= branches.size()) return;
            Searcher s(target, n_blowups, limit, branches[b]);
            per_branch[b] = s.run(nodes[b]);
            cut[b] = s.truncated();
        }
    };
    const auto workers = worker_count(branches.size());
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::set<CanonicalForm> merged;
    for (std::size_t b = 0; b < branches.size(); ++b) {
        merged.insert(per_branch[b].begin(), per_branch[b].end());
        res.stats.nodes += nodes[b];
        res.stats.truncated = res.stats.truncated || cut[b];
    }
    for (const auto& f : merged) {
        if (res.forms.size() >= limit) {
            res.stats.truncated = true;
            break;
        }
        res.forms.push_back(f);
        res.assignments.push_back(assignment_from_canonical(target, f));
    }
    return res;
}

} // namespace orbkit

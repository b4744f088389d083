#include "orbkit/blowdown.hpp"

#include "orbkit/orbifold.hpp"

#include <algorithm>
#include <optional>

namespace orbkit {

namespace {

std::string class_name(const std::string& basis_label) { return "E_" + basis_label; }

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
    return out;
}

bool zero_a(const ClassVector& f) { return f.a == 0; }

} // namespace

Branch line_branch(std::string owner, std::int64_t line) { return {Branch::Kind::line, std::move(owner), line, 1, 1}; }

Branch germ_branch(std::string owner, std::int64_t ref_line, std::int64_t kappa, std::int64_t lambda) {
    if (lambda < 1 || kappa <= lambda || gcd64(kappa, lambda) != 1)
        throw Error("precondition", "germ_branch",
                    "germ (" + std::to_string(kappa) + "," + std::to_string(lambda) + ") needs kappa > lambda >= 1, coprime");
    return {Branch::Kind::germ, std::move(owner), ref_line, kappa, lambda};
}

std::int64_t local_mult(const Branch& x, const Branch& y) {
    if (x.is_line() && y.is_line()) {
        if (x.line == y.line)
            throw Error("precondition", "local_mult",
                        "branches of " + x.owner + " and " + y.owner + " both occupy line L" + std::to_string(x.line));
        return 1;
    }
    if (x.is_line()) return y.line == x.line ? y.kappa : y.lambda;
    if (y.is_line()) return x.line == y.line ? x.kappa : x.lambda;
    if (x.line == y.line) return std::min(x.kappa * y.lambda, y.kappa * x.lambda);
    return x.lambda * y.lambda;
}

std::int64_t delta_invariant(const Branch& b) { return b.is_line() ? 0 : (b.kappa - 1) * (b.lambda - 1) / 2; }

const char* to_string(FinalTarget t) { return t == FinalTarget::cp2 ? "CP2" : "CP2#-CP2"; }

const ComponentState* ArrangementState::component(const std::string& label) const {
    for (const auto& c : components)
        if (c.label == label) return &c;
    return nullptr;
}

const MarkedPoint* ArrangementState::point(const std::string& id) const {
    for (const auto& p : points)
        if (p.id == id) return &p;
    return nullptr;
}

std::set<std::string> eps_zero(const Configuration& config) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < config.basis.size(); ++i) {
        bool hit = std::any_of(config.classes.begin(), config.classes.end(), [&](const LabeledClass& c) {
            return zero_a(c.cls) && c.cls.b[i] == 1;
        });
        if (!hit) out.insert(class_name(config.basis[i]));
    }
    return out;
}

FinalStageDecision final_stage(const Configuration& config, const AreaVector& areas) {
    FinalStageDecision d;
    if (areas.e.size() >= 2 && areas.e[0] == areas.e[1]) d.conditions.push_back("(c)");
    for (const auto& c : config.classes) {
        auto lead = leading_index(c.cls);
        if (lead && *lead == 1) d.conditions.push_back("(d) via " + c.label);
    }
    std::vector<std::string> witnesses;
    for (const auto& c : config.classes)
        if (!c.cls.b.empty() && 2 * c.cls.b[0] < c.cls.a) witnesses.push_back(c.label);
    if (!witnesses.empty()) d.conditions.push_back("(e) via " + join(witnesses));
    d.target = d.conditions.empty() ? FinalTarget::cp2_one_blowup : FinalTarget::cp2;
    return d;
}

AssumptionReport check_assumptions(const Configuration& config) {
    AssumptionReport rep;
    const auto& cs = config.classes;
    const auto n = config.basis.size();
    for (const auto& c : cs)
        if (c.cls.b.size() != n) throw Error("dimension", "check_assumptions", c.label + " has the wrong number of coefficients");

    for (std::size_t x = 0; x < cs.size(); ++x)
        for (std::size_t y = x + 1; y < cs.size(); ++y) {
            auto v = intersect(cs[x].cls, cs[y].cls);
            if (v != 0 && v != 1)
                rep.violations.push_back("(dagger): " + cs[x].label + "." + cs[y].label + " = " + std::to_string(v) +
                                         ", expected 0 or 1");
        }

    auto disc_count = [&](std::size_t i, const std::string& except) {
        std::int64_t total = 0;
        for (const auto& c : cs)
            if (c.label != except && c.cls.b[i] > 0) total += c.cls.b[i];
        return total;
    };

    for (const auto& s : cs) {
        if (!zero_a(s.cls)) continue;
        auto lead = leading_index(s.cls);
        if (!lead)
            throw Error("precondition", "check_assumptions",
                        s.label + " = " + format_class(s.cls, config.basis) +
                            " has zero a-coefficient but is not of the form E_n - E_l1 - ... - E_lk");
        const auto li = *lead - 1;
        const auto lead_name = class_name(config.basis[li]);
        std::vector<std::size_t> ls;
        for (std::size_t i = 0; i < n; ++i)
            if (s.cls.b[i] == 1) ls.push_back(i);
        for (auto i : ls)
            if (i < li)
                rep.violations.push_back(s.label + ": subtracted class " + class_name(config.basis[i]) +
                                         " precedes the leading class " + lead_name);

        std::vector<const LabeledClass*> z;
        for (const auto& c : cs)
            if (&c != &s && zero_a(c.cls) && c.cls.b[li] == 1) z.push_back(&c);
        auto& names = rep.z_sets[s.label];
        for (auto* c : z) names.push_back(c->label);

        if (z.size() > 2) {
            rep.violations.push_back(s.label + ": " + std::to_string(z.size()) + " zero-a components (" + join(names) +
                                     ") contain the leading class " + lead_name + ", at most two allowed");
            continue;
        }
        std::vector<std::optional<std::size_t>> shared;
        for (auto* c : z) {
            std::vector<std::size_t> common;
            for (auto i : ls)
                if (c->cls.b[i] == 1) common.push_back(i);
            if (common.size() > 1)
                rep.violations.push_back(c->label + " contains more than one subtracted class of " + s.label);
            shared.push_back(common.empty() ? std::nullopt : std::optional<std::size_t>(common.front()));
        }
        if (z.size() == 2 && shared[0] && shared[0] == shared[1])
            rep.violations.push_back(names[0] + " and " + names[1] + " share the subtracted class " +
                                     class_name(config.basis[*shared[0]]) + " of " + s.label);

        auto in_z = [&](std::size_t i) {
            return std::any_of(z.begin(), z.end(), [&](const LabeledClass* c) { return c->cls.b[i] != 0; });
        };
        if (z.size() == 2) {
            for (auto i : ls) {
                if (in_z(i)) continue;
                auto d = disc_count(i, s.label);
                if (d > 1)
                    rep.violations.push_back("(a) for " + s.label + ": " + class_name(config.basis[i]) + " carries " +
                                             std::to_string(d) + " branches of other components, at most one allowed");
            }
        } else if (z.size() == 1) {
            std::vector<std::string> complicated;
            for (auto i : ls)
                if (!in_z(i) && disc_count(i, s.label) > 1) complicated.push_back(class_name(config.basis[i]));
            if (complicated.size() > 1)
                rep.violations.push_back("(b) for " + s.label + ": several classes (" + join(complicated) +
                                         ") meet more than one branch of other components, at most one allowed");
        }
    }
    return rep;
}

namespace {

class Engine {
public:
    Engine(const Configuration& config, const BlowdownOptions& options) : config_(config), options_(options) {
        st_.basis = config.basis;
        st_.stage = config.basis.size();
        st_.non_canonical = options.strict_germs;
        for (const auto& c : config.classes) st_.components.push_back({c.label, c.cls, c.cls, true});
        const auto& cs = config.classes;
        std::int64_t serial = 0;
        for (std::size_t x = 0; x < cs.size(); ++x)
            for (std::size_t y = x + 1; y < cs.size(); ++y) {
                if (intersect(cs[x].cls, cs[y].cls) != 1) continue;
                MarkedPoint p;
                p.id = "O" + std::to_string(++serial);
                p.label = "original";
                auto l1 = fresh_line(), l2 = fresh_line();
                p.lines = {l1, l2};
                p.branches = {line_branch(cs[x].label, l1), line_branch(cs[y].label, l2)};
                st_.points.push_back(std::move(p));
            }
        auto assumptions = check_assumptions(config);
        z_sets_ = assumptions.z_sets;
    }

    ArrangementState run(const FinalStageDecision& decision) {
        st_.decision = decision;
        const std::size_t last = decision.target == FinalTarget::cp2 ? 1 : 2;
        while (st_.stage >= last && st_.stage > 0) step();
        return std::move(st_);
    }

private:
    std::int64_t fresh_line() { return st_.next_line++; }

    [[noreturn]] void fail(const std::string& code, const std::string& msg) const {
        throw Error(code, "run_blowdown", "stage " + class_name(st_.basis[st_.stage - 1]) + ": " + msg);
    }

    void step() {
        const auto k = st_.stage;
        const auto target = ClassVector::exceptional(k, k);
        ComponentState* s = nullptr;
        for (auto& c : st_.components) {
            if (!c.live || c.current != target) continue;
            if (s) fail("E-SCOPE", "both " + s->label + " and " + c.label + " have class " + class_name(st_.basis[k - 1]));
            s = &c;
        }
        for (auto& c : st_.components)
            if (c.live && &c != s && c.current.b[k - 1] < 0)
                fail("E-NEG", c.label + " has coefficient " + std::to_string(-c.current.b[k - 1]) + " on the class");
        if (s) leading_step(*s);
        else generic_step();
        for (auto& c : st_.components)
            if (c.live) c.current = drop_coordinate(c.current, k);
        st_.basis.pop_back();
        --st_.stage;
    }

    void generic_step() {
        const auto k = st_.stage;
        MarkedPoint p;
        p.label = p.id = class_name(st_.basis[k - 1]);
        for (const auto& c : st_.components) {
            if (!c.live) continue;
            for (std::int64_t j = 0; j < c.current.b[k - 1]; ++j) {
                auto l = fresh_line();
                p.lines.push_back(l);
                p.branches.push_back(line_branch(c.label, l));
            }
        }
        st_.log.push_back("generic " + p.id + ": " + std::to_string(p.branches.size()) + " branches");
        st_.points.push_back(std::move(p));
    }

    void leading_step(ComponentState& s) {
        const auto k = st_.stage;
        const auto name = class_name(st_.basis[k - 1]);
        std::vector<std::size_t> q_idx;
        for (std::size_t i = 0; i < st_.points.size(); ++i) {
            const auto& p = st_.points[i];
            auto own = std::count_if(p.branches.begin(), p.branches.end(), [&](const Branch& b) { return b.owner == s.label; });
            if (own == 0) continue;
            if (own > 1) fail("E-SCOPE", s.label + " has " + std::to_string(own) + " branches at " + p.id);
            q_idx.push_back(i);
        }

        const auto& zv = z_sets_[s.label];
        const std::set<std::string> z(zv.begin(), zv.end());

        auto s_branch = [&](const MarkedPoint& p) -> const Branch& {
            return *std::find_if(p.branches.begin(), p.branches.end(), [&](const Branch& b) { return b.owner == s.label; });
        };
        auto has_z = [&](const MarkedPoint& p) {
            return std::any_of(p.branches.begin(), p.branches.end(), [&](const Branch& b) { return z.count(b.owner) > 0; });
        };
        auto simple = [&](const MarkedPoint& p) {
            std::size_t foreign = 0;
            bool all_lines = true;
            for (const auto& b : p.branches)
                if (b.owner != s.label) {
                    ++foreign;
                    all_lines = all_lines && b.is_line();
                }
            return foreign == 0 || (foreign == 1 && all_lines);
        };

        for (auto i : q_idx) {
            const auto& p = st_.points[i];
            if (!s_branch(p).is_line())
                fail("E-NESTED", s.label + " carries a singular branch at " + p.id);
        }

        // Residual: the branches of F at the absorbed points account for F . E_k.
        for (const auto& c : st_.components) {
            if (!c.live || &c == &s) continue;
            std::int64_t contact = 0;
            for (auto i : q_idx) {
                const auto& p = st_.points[i];
                const auto& sb = s_branch(p);
                for (const auto& b : p.branches)
                    if (b.owner == c.label) contact += local_mult(b, sb);
            }
            if (contact != c.current.b[k - 1])
                fail("E-RESIDUAL", c.label + " meets " + s.label + " with total multiplicity " + std::to_string(contact) +
                                       " at the marked points but its coefficient is " +
                                       std::to_string(c.current.b[k - 1]));
        }

        std::set<std::size_t> privileged;
        for (auto i : q_idx)
            if (has_z(st_.points[i])) privileged.insert(i);
        if (!z.empty()) {
            std::vector<std::size_t> complicated;
            for (auto i : q_idx)
                if (!privileged.count(i) && !st_.points[i].original() && !simple(st_.points[i])) complicated.push_back(i);
            if (z.size() == 1 && complicated.size() == 1) privileged.insert(complicated.front());
            else if (!complicated.empty() && !options_.strict_germs)
                fail("E-SCOPE", "point " + st_.points[complicated.front()].id + " on " + s.label +
                                    " carries several foreign branches and cannot be placed in the local model");
        }

        MarkedPoint np;
        np.label = np.id = name;
        for (auto i : q_idx) {
            const auto& p = st_.points[i];
            const auto& sb = s_branch(p);
            const auto dir = fresh_line();
            np.lines.push_back(dir);
            // The co-line plays the role of w1 = 0 in the local model: the Z-member's line when
            // present, otherwise the common tangent line of germs not tangent to S.
            std::optional<std::int64_t> co_line;
            for (const auto& b : p.branches)
                if (z.count(b.owner)) {
                    if (!b.is_line()) fail("E-SCOPE", b.owner + " has a singular branch at " + p.id);
                    if (co_line) fail("E-SCOPE", "two members of Z(" + s.label + ") pass through " + p.id);
                    co_line = b.line;
                }
            if (!co_line) {
                std::set<std::int64_t> refs;
                for (const auto& b : p.branches)
                    if (b.owner != s.label && !b.is_line() && b.line != sb.line) refs.insert(b.line);
                if (refs.size() > 1)
                    fail("E-SCOPE", "germs at " + p.id + " are tangent to " + std::to_string(refs.size()) +
                                        " different lines besides " + s.label);
                if (!refs.empty()) co_line = *refs.begin();
            }
            const bool germ_rule = options_.strict_germs || (!p.original() && (z.empty() || privileged.count(i)));
            std::size_t foreign = 0;
            for (const auto& b : p.branches)
                if (b.owner != s.label) ++foreign;
            if (p.original() && foreign > 1)
                fail("E-SCOPE", "inherited point " + p.id + " carries " + std::to_string(foreign + 1) + " branches");

            for (const auto& b : p.branches) {
                if (b.owner == s.label) continue;
                if (z.count(b.owner)) {
                    np.branches.push_back(line_branch(b.owner, dir));
                } else if (germ_rule) {
                    if (b.is_line()) {
                        if (co_line && b.line == *co_line)
                            fail("E-SCOPE", b.owner + " lies on the co-line at " + p.id + " but is not in Z(" + s.label + ")");
                        np.branches.push_back(germ_branch(b.owner, dir, 2, 1));
                    } else if (b.line == sb.line) {
                        np.branches.push_back(germ_branch(b.owner, dir, b.kappa + b.lambda, b.kappa));
                    } else if (co_line && b.line == *co_line) {
                        np.branches.push_back(germ_branch(b.owner, dir, b.kappa + b.lambda, b.lambda));
                    } else {
                        fail("E-SCOPE", "germ of " + b.owner + " at " + p.id + " is tangent to a line that is neither " +
                                            s.label + " nor the co-line");
                    }
                } else {
                    if (!b.is_line()) fail("E-SCOPE", "germ of " + b.owner + " at non-privileged point " + p.id);
                    auto l = fresh_line();
                    np.lines.push_back(l);
                    np.branches.push_back(line_branch(b.owner, l));
                }
            }
        }

        std::vector<std::string> absorbed;
        for (auto it = q_idx.rbegin(); it != q_idx.rend(); ++it) {
            absorbed.push_back(st_.points[*it].id);
            st_.points.erase(st_.points.begin() + static_cast<std::ptrdiff_t>(*it));
        }
        std::reverse(absorbed.begin(), absorbed.end());
        st_.log.push_back("leading " + name + ": blow down " + s.label + ", absorbing " + join(absorbed));
        s.live = false;
        st_.points.push_back(std::move(np));
    }

    const Configuration& config_;
    BlowdownOptions options_;
    ArrangementState st_;
    std::map<std::string, std::vector<std::string>> z_sets_;
};

} // namespace

ArrangementState run_blowdown(const Configuration& config, const FinalStageDecision& decision, const BlowdownOptions& options) {
    if (config.basis.size() < 2) throw Error("precondition", "run_blowdown", "needs N >= 2");
    auto rep = check_assumptions(config);
    if (!rep.ok()) throw Error("E-ASSUMPTION", "run_blowdown", join(rep.violations, "; "));
    return Engine(config, options).run(decision);
}

ArrangementState run_blowdown(const Configuration& config, const AreaVector& areas, const BlowdownOptions& options) {
    auto val = validate_area_vector(areas, config.vectors());
    if (!val.ok()) throw Error("E-AREAS", "run_blowdown", join(val.violations, "; "));
    if (is_odd(areas) != Parity::odd)
        throw Error("E-PARITY", "run_blowdown", "the area vector is even; only the odd case ends in the plane");
    if (!ruled_check(config.basis.size(), areas))
        throw Error("E-AREAS", "run_blowdown", "K . omega is not negative for this area vector");
    return run_blowdown(config, final_stage(config, areas), options);
}

VerificationReport verify_arrangement(const ArrangementState& state, const Configuration& config) {
    VerificationReport rep;
    std::vector<const ComponentState*> live;
    for (const auto& c : state.components)
        if (c.live) live.push_back(&c);

    for (std::size_t x = 0; x < live.size(); ++x)
        for (std::size_t y = x + 1; y < live.size(); ++y) {
            PairRecord r{live[x]->label, live[y]->label, 0, intersect(live[x]->current, live[y]->current)};
            for (const auto& p : state.points)
                for (const auto& b1 : p.branches)
                    if (b1.owner == r.first)
                        for (const auto& b2 : p.branches)
                            if (b2.owner == r.second) r.local_sum += local_mult(b1, b2);
            if (r.local_sum != r.homological)
                rep.violations.push_back("conservation " + r.first + "." + r.second + ": local sum " +
                                         std::to_string(r.local_sum) + " but homological product " +
                                         std::to_string(r.homological));
            rep.pairs.push_back(std::move(r));
        }

    for (const auto* c : live) {
        GenusRecord g{c->label, adjunction_genus(c->original), adjunction_genus(c->current), 0};
        for (const auto& p : state.points) {
            std::vector<const Branch*> own;
            for (const auto& b : p.branches)
                if (b.owner == c->label) own.push_back(&b);
            for (std::size_t i = 0; i < own.size(); ++i) {
                g.singular_correction += delta_invariant(*own[i]);
                for (std::size_t j = i + 1; j < own.size(); ++j) g.singular_correction += local_mult(*own[i], *own[j]);
            }
        }
        if (g.original_genus != g.arithmetic_genus - g.singular_correction)
            rep.violations.push_back("genus " + c->label + ": adjunction genus " + to_string(g.original_genus) +
                                     " but arithmetic genus " + to_string(g.arithmetic_genus) + " minus corrections " +
                                     std::to_string(g.singular_correction));
        rep.genera.push_back(std::move(g));
    }

    auto expected = eps_zero(config);
    if (state.decision.target == FinalTarget::cp2_one_blowup && !config.basis.empty())
        expected.erase(class_name(config.basis.front()));
    std::set<std::string> created;
    for (const auto& p : state.points)
        if (!p.original()) created.insert(p.label);
    if (created != expected) {
        std::vector<std::string> a(created.begin(), created.end()), b(expected.begin(), expected.end());
        rep.violations.push_back("created points {" + join(a) + "} differ from the expected labels {" + join(b) + "}");
    }

    for (const auto& c : state.components) {
        bool should_live = c.original.a != 0;
        if (c.live != should_live)
            rep.violations.push_back("survival " + c.label + ": " + (c.live ? "survives" : "vanished") + " but a = " +
                                     std::to_string(c.original.a));
    }
    if (config.classes.size() != state.components.size())
        rep.violations.push_back("component count " + std::to_string(state.components.size()) + " differs from " +
                                 std::to_string(config.classes.size()));
    return rep;
}

} // namespace orbkit

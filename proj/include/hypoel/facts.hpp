#pragma once

#include "hypoel/sheaf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypoel {

// {t : A <= Tag(t)} over the family's parameter domain (exact).
inline Interval inclusion_region_lhs_fixed(const SheafSpace& A, SpaceTag family) {
    auto level = [](SpaceTag t) {
        switch (t) {
            case SpaceTag::Cw: return 0;
            case SpaceTag::GevreyBeurling:
            case SpaceTag::GevreyRoumieu: return 1;
            case SpaceTag::Cinf: return 2;
            case SpaceTag::Sobolev: return 3;
            case SpaceTag::Dprime: return 4;
            case SpaceTag::UltraRoumieu:
            case SpaceTag::UltraBeurling: return 5;
            case SpaceTag::Hyperfunction: return 6;
        }
        return -1;
    };
    int la = level(A.tag), lf = level(family);
    switch (family) {
        case SpaceTag::GevreyRoumieu:
            if (A.tag == SpaceTag::Cw) return Interval::all();
            if (A.tag == SpaceTag::GevreyRoumieu || A.tag == SpaceTag::GevreyBeurling)
                return Interval::at_least(A.param);
            return Interval::none();
        case SpaceTag::GevreyBeurling:
            if (A.tag == SpaceTag::Cw) return Interval::all();
            if (A.tag == SpaceTag::GevreyRoumieu) return Interval::greater_than(A.param);
            if (A.tag == SpaceTag::GevreyBeurling) return Interval::at_least(A.param);
            return Interval::none();
        case SpaceTag::Sobolev:
            if (la < 3) return Interval::all();
            if (A.tag == SpaceTag::Sobolev) return Interval::at_most(A.param);
            return Interval::none();
        case SpaceTag::UltraRoumieu:
            if (la <= 4) return Interval::all();
            if (A.tag == SpaceTag::UltraRoumieu) return Interval::at_most(A.param);
            if (A.tag == SpaceTag::UltraBeurling) return Interval::less_than(A.param);
            return Interval::none();
        case SpaceTag::UltraBeurling:
            if (la <= 4) return Interval::all();
            if (A.tag == SpaceTag::UltraRoumieu || A.tag == SpaceTag::UltraBeurling)
                return Interval::at_most(A.param);
            return Interval::none();
        default:
            // non-parametric family: inclusion independent of t
            return includes(A, SheafSpace(family)) ? Interval::all() : Interval::none();
    }
}

// {t : Tag(t) <= A} over the family's parameter domain (exact).
inline Interval inclusion_region_rhs_fixed(SpaceTag family, const SheafSpace& A) {
    auto level = [](SpaceTag t) {
        switch (t) {
            case SpaceTag::Cw: return 0;
            case SpaceTag::GevreyBeurling:
            case SpaceTag::GevreyRoumieu: return 1;
            case SpaceTag::Cinf: return 2;
            case SpaceTag::Sobolev: return 3;
            case SpaceTag::Dprime: return 4;
            case SpaceTag::UltraRoumieu:
            case SpaceTag::UltraBeurling: return 5;
            case SpaceTag::Hyperfunction: return 6;
        }
        return -1;
    };
    int la = level(A.tag), lf = level(family);
    switch (family) {
        case SpaceTag::GevreyRoumieu:
            if (la >= 2) return Interval::all();
            if (A.tag == SpaceTag::GevreyRoumieu) return Interval::at_most(A.param);
            if (A.tag == SpaceTag::GevreyBeurling) return Interval::less_than(A.param);
            return Interval::none();
        case SpaceTag::GevreyBeurling:
            if (la >= 2) return Interval::all();
            if (A.tag == SpaceTag::GevreyRoumieu || A.tag == SpaceTag::GevreyBeurling)
                return Interval::at_most(A.param);
            return Interval::none();
        case SpaceTag::Sobolev:
            if (la >= 4) return Interval::all();
            if (A.tag == SpaceTag::Sobolev) return Interval::at_least(A.param);
            return Interval::none();
        case SpaceTag::UltraRoumieu:
            if (A.tag == SpaceTag::Hyperfunction) return Interval::all();
            if (A.tag == SpaceTag::UltraRoumieu) return Interval::at_least(A.param);
            if (A.tag == SpaceTag::UltraBeurling) return Interval::at_least(A.param);
            return Interval::none();
        case SpaceTag::UltraBeurling:
            if (A.tag == SpaceTag::Hyperfunction) return Interval::all();
            if (A.tag == SpaceTag::UltraRoumieu) return Interval::greater_than(A.param);
            if (A.tag == SpaceTag::UltraBeurling) return Interval::at_least(A.param);
            return Interval::none();
        default:
            (void)lf;
            return includes(SheafSpace(family, Rational(2)), A) ? Interval::all() : Interval::none();
    }
}

// parameter domain of a family tag (Gevrey/ultra orders live in (1, inf))
inline Interval family_domain(SpaceTag tag) {
    switch (tag) {
        case SpaceTag::GevreyRoumieu:
        case SpaceTag::GevreyBeurling:
            return Interval::at_least(Rational(1));  // s = 1 collapses to Cw
        case SpaceTag::UltraRoumieu:
        case SpaceTag::UltraBeurling:
            return Interval::greater_than(Rational(1));
        case SpaceTag::Sobolev:
            return Interval::all();
        default:
            return Interval::all();
    }
}

enum class SlotRef { Fixed, S, R };

struct SpaceSlot {
    SlotRef ref = SlotRef::Fixed;
    SheafSpace space;                    // when Fixed
    SpaceTag family = SpaceTag::Dprime;  // when S or R

    static SpaceSlot fixed(SheafSpace s) { return {SlotRef::Fixed, std::move(s), SpaceTag::Dprime}; }
    static SpaceSlot s(SpaceTag family) { return {SlotRef::S, SheafSpace(), family}; }
    static SpaceSlot r(SpaceTag family) { return {SlotRef::R, SheafSpace(), family}; }

    SheafSpace instantiate(const Rational& s_val, const Rational& r_val) const {
        switch (ref) {
            case SlotRef::Fixed: return space;
            case SlotRef::S: return SheafSpace(family, s_val);
            case SlotRef::R: return SheafSpace(family, r_val);
        }
        return space;
    }

    // value of the slot's parameter that makes it equal `target`, if any
    std::optional<Rational> solve(const SheafSpace& target) const {
        if (ref == SlotRef::Fixed) return std::nullopt;
        if (target.tag == family) return target.param;
        // canonical collapse: G^1 = Cw
        if (target.tag == SpaceTag::Cw &&
            (family == SpaceTag::GevreyRoumieu || family == SpaceTag::GevreyBeurling))
            return Rational(1);
        return std::nullopt;
    }

    friend bool operator==(const SpaceSlot& a, const SpaceSlot& b) {
        if (a.ref != b.ref) return false;
        if (a.ref == SlotRef::Fixed) return a.space == b.space;
        return a.family == b.family;
    }
    friend bool operator<(const SpaceSlot& a, const SpaceSlot& b) {
        if (a.ref != b.ref) return a.ref < b.ref;
        if (a.ref == SlotRef::Fixed) return a.space < b.space;
        return a.family < b.family;
    }

    std::string to_string() const {
        switch (ref) {
            case SlotRef::Fixed: return space.to_string();
            case SlotRef::S: return SheafSpace(family, Rational(2)).to_string() + "@s";
            case SlotRef::R: return SheafSpace(family, Rational(2)).to_string() + "@r";
        }
        return "?";
    }
};

// how the r parameter is constrained
enum class RRel { Unused, Absolute, GreaterThanS, AtLeastS };

struct Provenance {
    std::string citation;        // literature reference, for axioms
    std::string rule;            // rule id, for derived facts
    std::vector<int> premises;   // fact ids
    std::string note;
    bool axiom() const { return rule.empty(); }
};

// A (possibly parameterized) hypoellipticity assertion about one operator:
// holds/fails h(slot0, slot1[, slot2]) for all admissible (s, r).
struct HypoFact {
    int id = -1;
    std::string op;
    bool holds = true;
    std::vector<SpaceSlot> slots;  // size 2 (pair) or 3 (triple)
    Interval s_range = Interval::all();
    RRel r_rel = RRel::Unused;
    Interval r_range = Interval::all();
    // Sobolev shift family: slots are H^{r0 + k step}, H^{t0 + k step} (+Cinf) for all integer k
    std::optional<Rational> shift_step;
    Provenance prov;

    bool is_pair() const { return slots.size() == 2; }
    bool uses_s() const {
        for (const auto& sl : slots)
            if (sl.ref == SlotRef::S) return true;
        return false;
    }
    bool uses_r() const {
        for (const auto& sl : slots)
            if (sl.ref == SlotRef::R) return true;
        return false;
    }

    bool same_shape(const HypoFact& o) const {
        return op == o.op && holds == o.holds && slots == o.slots && r_rel == o.r_rel &&
               shift_step == o.shift_step;
    }

    std::string to_string() const {
        std::string out = holds ? "h(" : "not h(";
        for (size_t k = 0; k < slots.size(); ++k) out += (k ? ", " : "") + slots[k].to_string();
        out += ")";
        if (uses_s()) out += " for s in " + s_range.to_string();
        if (uses_r()) {
            switch (r_rel) {
                case RRel::Absolute: out += ", r in " + r_range.to_string(); break;
                case RRel::GreaterThanS: out += ", r > s"; break;
                case RRel::AtLeastS: out += ", r >= s"; break;
                default: break;
            }
        }
        if (shift_step) out += " (shift step " + hypoel::to_string(*shift_step) + ")";
        return out;
    }
};

// a concrete question: h(spaces...) for one operator
struct Question {
    std::string op;
    std::vector<SheafSpace> spaces;

    std::string to_string() const {
        std::string out = "h(";
        for (size_t k = 0; k < spaces.size(); ++k) out += (k ? ", " : "") + spaces[k].to_string();
        return out + ")";
    }
};

// "h(F, G)" or "h(F, G, H)" in canonical space text forms
inline Question parse_question(const std::string& op, const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.rfind("h(", 0) != 0 || t.back() != ')')
        throw std::invalid_argument("question must look like h(F,G) or h(F,G,H)");
    std::string body = t.substr(2, t.size() - 3);
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : body) {
        if (c == '{' || c == '(') ++depth;
        if (c == '}' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 2 && parts.size() != 3)
        throw std::invalid_argument("question must have two or three spaces");
    Question q;
    q.op = op;
    for (const auto& p : parts) q.spaces.push_back(parse_space(p));
    return q;
}

namespace fact_detail {

// exists s in I_s, r in I_r with r > s (strict) or r >= s
inline bool exists_pair(const Interval& is, const Interval& ir, bool strict) {
    if (is.empty || ir.empty) return false;
    if (!is.has_lo || !ir.has_hi) return true;
    if (is.lo < ir.hi) return true;
    if (is.lo == ir.hi && !strict && is.lo_closed && ir.hi_closed) return true;
    return false;
}

}  // namespace fact_detail

// Decides whether `fact` implies the (concrete) question with the same
// polarity. For holds-facts the implicit monotonicity is restriction in the
// first slot (and premise/conclusion widening for triples); for fails-facts
// the contrapositive direction.
inline bool fact_supports(const HypoFact& fact, const Question& q, bool want_holds) {
    if (fact.op != q.op || fact.holds != want_holds) return false;
    if (fact.slots.size() != q.spaces.size()) return false;

    if (fact.shift_step) {
        // family h(H^{r0+km}, H^{t0+km}[, Cinf]) for all integers k
        if (fact.slots.size() != q.spaces.size()) return false;
        if (fact.slots[0].ref != SlotRef::Fixed || fact.slots[1].ref != SlotRef::Fixed) return false;
        if (fact.slots[0].space.tag != SpaceTag::Sobolev || q.spaces[0].tag != SpaceTag::Sobolev)
            return false;
        if (fact.slots[1].space.tag != SpaceTag::Sobolev || q.spaces[1].tag != SpaceTag::Sobolev)
            return false;
        if (fact.slots.size() == 3 && !(fact.slots[2].space == q.spaces[2])) return false;
        Rational m = *fact.shift_step;
        Rational r0 = fact.slots[0].space.param, t0 = fact.slots[1].space.param;
        Rational a = q.spaces[0].param, b = q.spaces[1].param;
        if (m == 0) {
            // dense family: an arbitrary rational shift is allowed
            return want_holds ? a - r0 >= b - t0 : a - r0 <= b - t0;
        }
        // need integer k with: holds: a >= r0 + km and t0 + km >= b
        //                      fails: a <= r0 + km and t0 + km <= b (contrapositive direction)
        auto floor_div = [](const Rational& x, const Rational& m2) {
            Rational q = x / m2;
            BigInt n = boost::multiprecision::numerator(q);
            BigInt d = boost::multiprecision::denominator(q);
            BigInt fl = n / d;
            if (n < 0 && n % d != 0) fl -= 1;
            return fl;
        };
        auto ceil_div = [&](const Rational& x, const Rational& m2) {
            return -floor_div(-x, m2);
        };
        if (want_holds) {
            BigInt kmax = floor_div(a - r0, m);
            BigInt kmin = ceil_div(b - t0, m);
            return kmin <= kmax;
        }
        BigInt kmin = ceil_div(a - r0, m);
        BigInt kmax = floor_div(b - t0, m);
        return kmin <= kmax;
    }

    // Pin parameters from slots that demand (semantic) equality:
    // pair holds: slot1 equality; pair fails: slot1 equality;
    // triples have no equality slots (all are inclusions), but parameterized
    // triples beyond the shift family are not generated.
    std::optional<Rational> s_pin, r_pin;
    auto pin = [&](const SpaceSlot& slot, const SheafSpace& target) -> bool {
        if (slot.ref == SlotRef::Fixed) return slot.space == target;
        auto v = slot.solve(target);
        if (!v) return false;
        auto& pinned = slot.ref == SlotRef::S ? s_pin : r_pin;
        if (pinned && *pinned != *v) return false;
        pinned = *v;
        return true;
    };

    // inclusion condition: value regions for the slot's parameter
    auto region_lhs = [&](const SpaceSlot& slot, const SheafSpace& fixed_lhs) {
        // {t : fixed_lhs <= slot(t)}
        return inclusion_region_lhs_fixed(fixed_lhs, slot.family).intersect(family_domain(slot.family));
    };
    auto region_rhs = [&](const SpaceSlot& slot, const SheafSpace& fixed_rhs) {
        // {t : slot(t) <= fixed_rhs}
        return inclusion_region_rhs_fixed(slot.family, fixed_rhs).intersect(family_domain(slot.family));
    };

    Interval s_ok = fact.uses_s() ? fact.s_range : Interval::all();
    Interval r_ok = Interval::all();
    if (fact.uses_r()) {
        if (fact.r_rel == RRel::Absolute) r_ok = fact.r_range;
    }

    auto apply_condition = [&](const SpaceSlot& slot, const SheafSpace& target, bool lhs_fixed,
                               bool equality) -> bool {
        // equality: slot == target; else inclusion with `target` on the
        // fixed side (lhs_fixed: target <= slot; else slot <= target)
        if (equality) return pin(slot, target);
        if (slot.ref == SlotRef::Fixed)
            return lhs_fixed ? includes(target, slot.space) : includes(slot.space, target);
        Interval reg = lhs_fixed ? region_lhs(slot, target) : region_rhs(slot, target);
        auto& pinned = slot.ref == SlotRef::S ? s_pin : r_pin;
        if (pinned) return reg.contains(*pinned);
        auto& range = slot.ref == SlotRef::S ? s_ok : r_ok;
        range = range.intersect(reg);
        return !range.empty;
    };

    bool ok = true;
    if (fact.is_pair()) {
        if (want_holds) {
            // question (Fq, Gq): need Gq == slot1, Fq <= slot0
            ok = pin(fact.slots[1], q.spaces[1]);
            if (ok) ok = apply_condition(fact.slots[0], q.spaces[0], true, false);
        } else {
            // fails: need Gq == slot1, slot0 <= Fq
            ok = pin(fact.slots[1], q.spaces[1]);
            if (ok) ok = apply_condition(fact.slots[0], q.spaces[0], false, false);
        }
    } else {
        if (want_holds) {
            // triple holds: Fq <= F, G <= Gq, Hq <= H
            ok = apply_condition(fact.slots[0], q.spaces[0], true, false) &&
                 apply_condition(fact.slots[1], q.spaces[1], false, false) &&
                 apply_condition(fact.slots[2], q.spaces[2], true, false);
        } else {
            // triple fails: F <= Fq, Gq <= G, H <= Hq
            ok = apply_condition(fact.slots[0], q.spaces[0], false, false) &&
                 apply_condition(fact.slots[1], q.spaces[1], true, false) &&
                 apply_condition(fact.slots[2], q.spaces[2], false, false);
        }
    }
    if (!ok) return false;

    // range membership of pinned values
    if (s_pin && !(fact.uses_s() ? fact.s_range : Interval::all()).contains(*s_pin)) return false;
    if (r_pin && fact.r_rel == RRel::Absolute && !fact.r_range.contains(*r_pin)) return false;
    if (s_pin) s_ok = s_ok.intersect(Interval::point(*s_pin));
    if (r_pin) r_ok = r_ok.intersect(Interval::point(*r_pin));
    if (fact.uses_s() && s_ok.empty) return false;
    if (fact.uses_r() && fact.r_rel == RRel::Absolute && r_ok.empty) return false;

    // relational constraint between r and s
    if (fact.uses_r() && (fact.r_rel == RRel::GreaterThanS || fact.r_rel == RRel::AtLeastS)) {
        bool strict = fact.r_rel == RRel::GreaterThanS;
        Interval is = s_ok, ir = r_ok;
        if (s_pin) is = Interval::point(*s_pin);
        if (r_pin) ir = Interval::point(*r_pin);
        if (!fact.uses_s()) is = Interval::all();
        if (!fact_detail::exists_pair(is, ir, strict)) return false;
    }
    return true;
}

// region pattern: all slots fixed except one, which carries the free variable
struct RegionQuestion {
    std::string op;
    std::vector<SpaceSlot> slots;  // exactly one S-reference, no R
};

// For which values v of the free parameter does the fact set support
// holds/fails of the instantiated question? Exact union of intervals.
template <typename FactRange>
inline IntervalSet region_of(const FactRange& facts, const RegionQuestion& rq, bool want_holds) {
    IntervalSet out;
    int free_slot = -1;
    for (size_t k = 0; k < rq.slots.size(); ++k)
        if (rq.slots[k].ref != SlotRef::Fixed) free_slot = static_cast<int>(k);
    if (free_slot < 0) throw std::invalid_argument("region question has no free slot");
    SpaceTag family = rq.slots[static_cast<size_t>(free_slot)].family;
    Interval domain = family_domain(family);

    // candidate thresholds: all rational parameters appearing anywhere
    std::vector<Rational> cuts;
    auto push = [&](const Rational& v) { cuts.push_back(v); };
    for (const auto& sl : rq.slots)
        if (sl.ref == SlotRef::Fixed && sl.space.parametric()) push(sl.space.param);
    for (const auto& f : facts) {
        if (f.op != rq.op) continue;
        for (const auto& sl : f.slots)
            if (sl.ref == SlotRef::Fixed && sl.space.parametric()) push(sl.space.param);
        if (f.s_range.has_lo) push(f.s_range.lo);
        if (f.s_range.has_hi) push(f.s_range.hi);
        if (f.r_rel == RRel::Absolute) {
            if (f.r_range.has_lo) push(f.r_range.lo);
            if (f.r_range.has_hi) push(f.r_range.hi);
        }
    }
    push(Rational(1));
    push(Rational(2));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // probe each cut point and each open cell between cuts; support is
    // constant on cells because every comparison thresholds at a cut
    auto supported_at = [&](const Rational& v) {
        if (!domain.contains(v)) return false;
        Question q;
        q.op = rq.op;
        for (const auto& sl : rq.slots)
            q.spaces.push_back(sl.ref == SlotRef::Fixed ? sl.space : SheafSpace(family, v));
        for (const auto& f : facts)
            if (fact_supports(f, q, want_holds)) return true;
        return false;
    };

    for (size_t k = 0; k < cuts.size(); ++k) {
        if (supported_at(cuts[k])) out.add(Interval::point(cuts[k]));
        // cell to the right of cuts[k]
        Rational probe = k + 1 < cuts.size() ? Rational((cuts[k] + cuts[k + 1]) / 2)
                                             : Rational(cuts[k] + 1);
        if (supported_at(probe)) {
            Interval cell = k + 1 < cuts.size() ? Interval::open(cuts[k], cuts[k + 1])
                                                : Interval::greater_than(cuts[k]);
            out.add(cell);
        }
    }
    // cell below the smallest cut
    if (!cuts.empty() && supported_at(cuts.front() - 1)) out.add(Interval::less_than(cuts.front()));
    return out;
}

// ---------------------------------------------------------------------------
// The two generic lattice operations on concrete facts.
// ---------------------------------------------------------------------------

// h(F,G) and h(G,H) give h(F,H); middle spaces must agree.
inline HypoFact compose_hypo(const HypoFact& f1, const HypoFact& f2) {
    if (f1.op != f2.op) throw std::invalid_argument("compose_hypo: different operators");
    if (!f1.holds || !f2.holds) throw std::invalid_argument("compose_hypo: both facts must hold");
    if (!f1.is_pair() || !f2.is_pair()) throw std::invalid_argument("compose_hypo: pairs only");
    if (f1.uses_s() || f1.uses_r() || f2.uses_s() || f2.uses_r())
        throw std::invalid_argument("compose_hypo: concrete facts only");
    if (!(f1.slots[1].space == f2.slots[0].space))
        throw std::invalid_argument("compose_hypo: middle spaces differ");
    HypoFact out;
    out.op = f1.op;
    out.holds = true;
    out.slots = {f1.slots[0], f2.slots[1]};
    out.prov.rule = "compose";
    out.prov.premises = {f1.id, f2.id};
    return out;
}

// h(F,H) gives h(G,H) whenever H <= G <= F.
inline HypoFact restrict_hypo(const HypoFact& f, const SheafSpace& G) {
    if (!f.is_pair() || !f.holds || f.uses_s() || f.uses_r())
        throw std::invalid_argument("restrict_hypo: concrete holds-pairs only");
    const SheafSpace& F = f.slots[0].space;
    const SheafSpace& H = f.slots[1].space;
    if (!includes(H, G) || !includes(G, F))
        throw std::invalid_argument("restrict_hypo: G must lie between H and F");
    HypoFact out;
    out.op = f.op;
    out.holds = true;
    out.slots = {SpaceSlot::fixed(G), SpaceSlot::fixed(H)};
    out.prov.rule = "restrict";
    out.prov.premises = {f.id};
    return out;
}

}  // namespace hypoel

#pragma once

#include "hypoel/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypoel {

// The function/distribution space descriptors, ordered by inclusion.
// Canonical text forms: Cw, G{s}, G({s}), Cinf, H{r}, L2, D', D'{s}, D'({s}), B.
enum class SpaceTag {
    Cw,             // real-analytic
    GevreyBeurling, // G^(s),   s > 1
    GevreyRoumieu,  // G^s,     s > 1
    Cinf,
    Sobolev,        // H^r_loc, r rational (L2 = H^0)
    Dprime,         // distributions
    UltraRoumieu,   // D'_s,    s > 1
    UltraBeurling,  // D'_(s),  s > 1
    Hyperfunction,  // B
};

struct SheafSpace {
    SpaceTag tag = SpaceTag::Dprime;
    Rational param{0};

    SheafSpace() = default;
    SheafSpace(SpaceTag t, Rational p = Rational(0)) : tag(t), param(std::move(p)) {
        switch (tag) {
            case SpaceTag::GevreyBeurling:
            case SpaceTag::GevreyRoumieu:
                if (param < 1) throw std::invalid_argument("Gevrey order must be >= 1");
                if (param == 1) {  // G^1 is the real-analytic class
                    tag = SpaceTag::Cw;
                    param = 0;
                }
                break;
            case SpaceTag::UltraRoumieu:
            case SpaceTag::UltraBeurling:
                if (param <= 1) throw std::invalid_argument("ultradistribution order must be > 1");
                break;
            default:
                break;
        }
    }

    static SheafSpace Cw() { return {SpaceTag::Cw}; }
    static SheafSpace G(Rational s) { return {SpaceTag::GevreyRoumieu, std::move(s)}; }
    static SheafSpace G_beurling(Rational s) { return {SpaceTag::GevreyBeurling, std::move(s)}; }
    static SheafSpace Cinf() { return {SpaceTag::Cinf}; }
    static SheafSpace H(Rational r) { return {SpaceTag::Sobolev, std::move(r)}; }
    static SheafSpace L2() { return {SpaceTag::Sobolev, Rational(0)}; }
    static SheafSpace Dprime() { return {SpaceTag::Dprime}; }
    static SheafSpace Ds(Rational s) { return {SpaceTag::UltraRoumieu, std::move(s)}; }
    static SheafSpace Ds_beurling(Rational s) { return {SpaceTag::UltraBeurling, std::move(s)}; }
    static SheafSpace B() { return {SpaceTag::Hyperfunction}; }

    bool parametric() const {
        switch (tag) {
            case SpaceTag::GevreyBeurling:
            case SpaceTag::GevreyRoumieu:
            case SpaceTag::Sobolev:
            case SpaceTag::UltraRoumieu:
            case SpaceTag::UltraBeurling:
                return true;
            default:
                return false;
        }
    }

    friend bool operator==(const SheafSpace& a, const SheafSpace& b) {
        return a.tag == b.tag && (!a.parametric() || a.param == b.param);
    }
    friend bool operator!=(const SheafSpace& a, const SheafSpace& b) { return !(a == b); }
    friend bool operator<(const SheafSpace& a, const SheafSpace& b) {
        if (a.tag != b.tag) return a.tag < b.tag;
        return a.parametric() && a.param < b.param;
    }

    std::string to_string() const {
        switch (tag) {
            case SpaceTag::Cw: return "Cw";
            case SpaceTag::GevreyRoumieu: return "G{" + hypoel::to_string(param) + "}";
            case SpaceTag::GevreyBeurling: return "G({" + hypoel::to_string(param) + "})";
            case SpaceTag::Cinf: return "Cinf";
            case SpaceTag::Sobolev:
                return param == 0 ? "L2" : "H{" + hypoel::to_string(param) + "}";
            case SpaceTag::Dprime: return "D'";
            case SpaceTag::UltraRoumieu: return "D'{" + hypoel::to_string(param) + "}";
            case SpaceTag::UltraBeurling: return "D'({" + hypoel::to_string(param) + "})";
            case SpaceTag::Hyperfunction: return "B";
        }
        return "?";
    }
};

inline Rational parse_rational_text(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (...) {
        throw std::invalid_argument("bad rational: " + s);
    }
}

inline SheafSpace parse_space(const std::string& text) {
    auto braced = [&](size_t prefix_len, size_t suffix_len) {
        return parse_rational_text(text.substr(prefix_len, text.size() - prefix_len - suffix_len));
    };
    if (text == "Cw") return SheafSpace::Cw();
    if (text == "Cinf") return SheafSpace::Cinf();
    if (text == "L2") return SheafSpace::L2();
    if (text == "D'") return SheafSpace::Dprime();
    if (text == "B") return SheafSpace::B();
    if (text.rfind("G({", 0) == 0 && text.size() > 5 && text.substr(text.size() - 2) == "})")
        return SheafSpace::G_beurling(braced(3, 2));
    if (text.rfind("G{", 0) == 0 && text.back() == '}') return SheafSpace::G(braced(2, 1));
    if (text.rfind("H{", 0) == 0 && text.back() == '}') return SheafSpace::H(braced(2, 1));
    if (text.rfind("D'({", 0) == 0 && text.size() > 6 && text.substr(text.size() - 2) == "})")
        return SheafSpace::Ds_beurling(braced(4, 2));
    if (text.rfind("D'{", 0) == 0 && text.back() == '}') return SheafSpace::Ds(braced(3, 1));
    throw std::invalid_argument("unrecognized space: " + text);
}

// A is a subsheaf of B. Generators (duality order for the ultradistribution
// side: the space shrinks as the order grows):
//   Cw < G^(s) < G^s < G^(t)            (s < t)
//   G^s < Cinf < H^r, H^t < H^r         (r < t)
//   H^r < D' < D'_s,  D'_s < D'_(s),  D'_(t) < D'_s (s < t),  everything < B
inline bool includes(const SheafSpace& A, const SheafSpace& B) {
    if (A == B) return true;
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
    int la = level(A.tag), lb = level(B.tag);
    if (la != lb) return la < lb;
    // same level, different tag or parameter
    switch (A.tag) {
        case SpaceTag::GevreyBeurling:
            if (B.tag == SpaceTag::GevreyBeurling) return A.param <= B.param;
            return A.param <= B.param;  // G^(s) < G^t iff s <= t
        case SpaceTag::GevreyRoumieu:
            if (B.tag == SpaceTag::GevreyRoumieu) return A.param <= B.param;
            return A.param < B.param;  // G^s < G^(t) iff s < t (strict)
        case SpaceTag::Sobolev:
            return A.param >= B.param;
        case SpaceTag::UltraRoumieu:
            if (B.tag == SpaceTag::UltraRoumieu) return A.param >= B.param;
            return A.param >= B.param;  // D'_s < D'_(t) iff t <= s
        case SpaceTag::UltraBeurling:
            if (B.tag == SpaceTag::UltraBeurling) return A.param >= B.param;
            return A.param > B.param;  // D'_(s) < D'_t iff t < s (strict)
        default:
            return false;
    }
}

// ---------------------------------------------------------------------------
// Rational intervals with open/closed endpoints (threshold algebra).
// ---------------------------------------------------------------------------
struct Interval {
    bool empty = true;
    bool has_lo = false, has_hi = false;
    bool lo_closed = false, hi_closed = false;
    Rational lo{0}, hi{0};

    static Interval none() { return {}; }
    static Interval all() {
        Interval i;
        i.empty = false;
        return i;
    }
    static Interval point(Rational q) { return closed(q, q); }
    static Interval closed(Rational a, Rational b) {
        Interval i;
        i.empty = a > b;
        i.has_lo = i.has_hi = true;
        i.lo_closed = i.hi_closed = true;
        i.lo = std::move(a);
        i.hi = std::move(b);
        return i;
    }
    static Interval open(Rational a, Rational b) {
        Interval i = closed(std::move(a), std::move(b));
        i.lo_closed = i.hi_closed = false;
        i.empty = !(i.lo < i.hi);
        return i;
    }
    static Interval at_least(Rational a) {
        Interval i;
        i.empty = false;
        i.has_lo = true;
        i.lo_closed = true;
        i.lo = std::move(a);
        return i;
    }
    static Interval greater_than(Rational a) {
        Interval i = at_least(std::move(a));
        i.lo_closed = false;
        return i;
    }
    static Interval at_most(Rational b) {
        Interval i;
        i.empty = false;
        i.has_hi = true;
        i.hi_closed = true;
        i.hi = std::move(b);
        return i;
    }
    static Interval less_than(Rational b) {
        Interval i = at_most(std::move(b));
        i.hi_closed = false;
        return i;
    }
    static Interval left_open(Rational a, Rational b, bool hi_closed = true) {
        Interval i;
        i.empty = !(a < b);
        i.has_lo = i.has_hi = true;
        i.lo_closed = false;
        i.hi_closed = hi_closed;
        i.lo = std::move(a);
        i.hi = std::move(b);
        return i;
    }

    bool contains(const Rational& q) const {
        if (empty) return false;
        if (has_lo && (q < lo || (q == lo && !lo_closed))) return false;
        if (has_hi && (q > hi || (q == hi && !hi_closed))) return false;
        return true;
    }

    Interval intersect(const Interval& o) const {
        if (empty || o.empty) return none();
        Interval r;
        r.empty = false;
        // lower bound: the larger one
        if (has_lo || o.has_lo) {
            r.has_lo = true;
            if (!has_lo) {
                r.lo = o.lo;
                r.lo_closed = o.lo_closed;
            } else if (!o.has_lo) {
                r.lo = lo;
                r.lo_closed = lo_closed;
            } else if (lo > o.lo) {
                r.lo = lo;
                r.lo_closed = lo_closed;
            } else if (o.lo > lo) {
                r.lo = o.lo;
                r.lo_closed = o.lo_closed;
            } else {
                r.lo = lo;
                r.lo_closed = lo_closed && o.lo_closed;
            }
        }
        if (has_hi || o.has_hi) {
            r.has_hi = true;
            if (!has_hi) {
                r.hi = o.hi;
                r.hi_closed = o.hi_closed;
            } else if (!o.has_hi) {
                r.hi = hi;
                r.hi_closed = hi_closed;
            } else if (hi < o.hi) {
                r.hi = hi;
                r.hi_closed = hi_closed;
            } else if (o.hi < hi) {
                r.hi = o.hi;
                r.hi_closed = o.hi_closed;
            } else {
                r.hi = hi;
                r.hi_closed = hi_closed && o.hi_closed;
            }
        }
        if (r.has_lo && r.has_hi) {
            if (r.lo > r.hi) return none();
            if (r.lo == r.hi && !(r.lo_closed && r.hi_closed)) return none();
        }
        return r;
    }

    // can the union be expressed as one interval?
    bool merges_with(const Interval& o) const {
        if (empty || o.empty) return true;
        Interval inter = intersect(o);
        if (!inter.empty) return true;
        // adjacent: one's hi touches the other's lo with at least one side closed
        auto touch = [](const Interval& a, const Interval& b) {
            return a.has_hi && b.has_lo && a.hi == b.lo && (a.hi_closed || b.lo_closed);
        };
        return touch(*this, o) || touch(o, *this);
    }

    Interval merge(const Interval& o) const {
        if (empty) return o;
        if (o.empty) return *this;
        Interval r;
        r.empty = false;
        if (has_lo && o.has_lo) {
            if (lo < o.lo || (lo == o.lo && lo_closed)) {
                r.has_lo = true;
                r.lo = lo;
                r.lo_closed = lo == o.lo ? (lo_closed || o.lo_closed) : lo_closed;
            } else {
                r.has_lo = true;
                r.lo = o.lo;
                r.lo_closed = lo == o.lo ? (lo_closed || o.lo_closed) : o.lo_closed;
            }
        }
        if (has_hi && o.has_hi) {
            if (hi > o.hi || (hi == o.hi && hi_closed)) {
                r.has_hi = true;
                r.hi = hi;
                r.hi_closed = hi == o.hi ? (hi_closed || o.hi_closed) : hi_closed;
            } else {
                r.has_hi = true;
                r.hi = o.hi;
                r.hi_closed = hi == o.hi ? (hi_closed || o.hi_closed) : o.hi_closed;
            }
        }
        return r;
    }

    bool subset_of(const Interval& o) const {
        if (empty) return true;
        if (o.empty) return false;
        Interval inter = intersect(o);
        return inter == *this;
    }

    friend bool operator==(const Interval& a, const Interval& b) {
        if (a.empty != b.empty) return false;
        if (a.empty) return true;
        if (a.has_lo != b.has_lo || a.has_hi != b.has_hi) return false;
        if (a.has_lo && (a.lo != b.lo || a.lo_closed != b.lo_closed)) return false;
        if (a.has_hi && (a.hi != b.hi || a.hi_closed != b.hi_closed)) return false;
        return true;
    }

    std::string to_string() const {
        if (empty) return "(empty)";
        std::string l = has_lo ? (lo_closed ? "[" : "(") + hypoel::to_string(lo) : std::string("(-inf");
        std::string h = has_hi ? hypoel::to_string(hi) + (hi_closed ? "]" : ")") : std::string("inf)");
        return l + ", " + h;
    }
};

// A sorted list of disjoint, non-mergeable intervals: the holds-region of a
// parameterized fact family.
struct IntervalSet {
    std::vector<Interval> parts;

    void add(const Interval& iv) {
        if (iv.empty) return;
        Interval cur = iv;
        std::vector<Interval> next;
        for (const auto& p : parts) {
            if (cur.merges_with(p))
                cur = cur.merge(p);
            else
                next.push_back(p);
        }
        next.push_back(cur);
        std::sort(next.begin(), next.end(), [](const Interval& a, const Interval& b) {
            if (a.has_lo != b.has_lo) return !a.has_lo;
            if (!a.has_lo) return false;
            return a.lo < b.lo;
        });
        parts = std::move(next);
    }
    bool contains(const Rational& q) const {
        for (const auto& p : parts)
            if (p.contains(q)) return true;
        return false;
    }
    bool empty() const { return parts.empty(); }
    friend bool operator==(const IntervalSet& a, const IntervalSet& b) { return a.parts == b.parts; }
    std::string to_string() const {
        if (parts.empty()) return "(empty)";
        std::string out;
        for (size_t k = 0; k < parts.size(); ++k) out += (k ? " u " : "") + parts[k].to_string();
        return out;
    }
};

}  // namespace hypoel

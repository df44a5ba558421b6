#pragma once

#include "hypoel/facts.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hypoel {

// Guard flags for one operator. Flags that are not decidable from syntax are
// axioms (with citations); computed corroboration is recorded alongside.
struct OperatorMetadata {
    std::string id;
    bool constant_coefficients = false;
    std::optional<bool> elliptic;                  // probe verdict, when known
    bool tube_guards = false;                      // P0 elliptic, same order
    std::optional<Rational> commuting_elliptic_order;
    bool in_class_S = false;                       // L2 a-priori bound for tP
    bool hormander = false;
    std::optional<unsigned> bracket_depth;         // corroborating m_y
    std::optional<bool> nondegenerate;             // at the marked point
    bool no_delta_solution = false;
    bool transpose_not_solvable = false;           // tP fails Cinf-local solvability
    bool transpose_same = false;                   // tP = +-P
    bool is_system = false;
    Rational system_order{1};                      // s0 (1 for real-analytic structures)
    bool locally_solvable = false;                 // (Cinf,Cinf) local solvability
    std::vector<SheafSpace> solvable_with_kernel;  // spaces G for the solvability bridge
    std::map<std::string, std::string> corroboration;

    std::string transpose_id() const { return transpose_same ? id : id + "^t"; }
};

enum class QueryVerdict { holds, fails, unknown };

struct QueryResult {
    QueryVerdict verdict = QueryVerdict::unknown;
    int fact_id = -1;  // the supporting fact
};

struct DerivationResult {
    std::vector<HypoFact> facts;
    bool contradiction = false;
    std::vector<std::pair<int, int>> contradictions;  // holds/fails fact id pairs
    int iterations = 0;

    // order-independent content signature (for determinism checks)
    std::string signature() const {
        std::vector<std::string> lines;
        for (const auto& f : facts) {
            std::string line = f.op + "|" + (f.holds ? "+" : "-") + "|";
            for (const auto& s : f.slots) line += s.to_string() + ",";
            line += "|" + (f.uses_s() ? f.s_range.to_string() : std::string("-"));
            line += "|" + std::to_string(static_cast<int>(f.r_rel));
            if (f.r_rel == RRel::Absolute) line += f.r_range.to_string();
            if (f.shift_step) line += "|shift " + hypoel::to_string(*f.shift_step);
            line += "|" + f.prov.rule;
            lines.push_back(std::move(line));
        }
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (const auto& l : lines) out += l + "\n";
        return out;
    }

    QueryResult query(const Question& q) const {
        QueryResult r;
        for (const auto& f : facts)
            if (fact_supports(f, q, true)) {
                r.verdict = QueryVerdict::holds;
                r.fact_id = f.id;
                break;
            }
        for (const auto& f : facts)
            if (fact_supports(f, q, false)) {
                if (r.verdict == QueryVerdict::holds) continue;  // contradiction surfaced elsewhere
                r.verdict = QueryVerdict::fails;
                r.fact_id = f.id;
                break;
            }
        return r;
    }

    IntervalSet holds_region(const RegionQuestion& rq) const { return region_of(facts, rq, true); }
    IntervalSet fails_region(const RegionQuestion& rq) const { return region_of(facts, rq, false); }
};

namespace engine_detail {

inline int space_level(SpaceTag t) {
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
}

// {sigma : slot admits G^r (resp. D'_r) for some r > sigma}
inline Interval admits_family_above(const SpaceSlot& slot, SpaceTag fam, const Interval& s_range,
                                    const Interval& r_range, RRel r_rel) {
    if (slot.ref == SlotRef::Fixed) {
        const SheafSpace& F = slot.space;
        if (fam == SpaceTag::GevreyRoumieu) {
            if (space_level(F.tag) >= 2) return Interval::all();
            if (F.tag == SpaceTag::GevreyRoumieu || F.tag == SpaceTag::GevreyBeurling)
                return Interval::less_than(F.param);
            return Interval::none();
        }
        if (fam == SpaceTag::UltraRoumieu) {
            if (F.tag == SpaceTag::Hyperfunction || F.tag == SpaceTag::UltraRoumieu ||
                F.tag == SpaceTag::UltraBeurling)
                return Interval::all();
            return Interval::none();
        }
        return Interval::none();
    }
    if (slot.ref == SlotRef::R && slot.family == fam &&
        (r_rel == RRel::GreaterThanS || r_rel == RRel::AtLeastS))
        return Interval::all();  // r ranges above s by construction
    if (slot.ref == SlotRef::R && slot.family == fam && r_rel == RRel::Absolute) {
        // r can exceed sigma iff sigma < sup r_range
        if (!r_range.has_hi) return Interval::all();
        return Interval::less_than(r_range.hi);
    }
    return Interval::none();
}

}  // namespace engine_detail

// Forward-chaining engine. Rules are monotone fact-set transformers; the
// closure is their least fixed point, canonicalized by interval merging.
class InferenceEngine {
public:
    explicit InferenceEngine(std::vector<OperatorMetadata> metadata) {
        for (auto& m : metadata) meta_[m.id] = m;
    }

    const OperatorMetadata* metadata_for(const std::string& op) const {
        auto it = meta_.find(op);
        if (it != meta_.end()) return &it->second;
        // facts about tP consult P's metadata
        if (op.size() > 2 && op.substr(op.size() - 2) == "^t") {
            auto base = meta_.find(op.substr(0, op.size() - 2));
            if (base != meta_.end()) return &base->second;
        }
        return nullptr;
    }

    using RuleFn = std::vector<HypoFact> (InferenceEngine::*)(const std::vector<HypoFact>&,
                                                              const OperatorMetadata&) const;

    static const std::vector<std::pair<std::string, RuleFn>>& rule_table() {
        static const std::vector<std::pair<std::string, RuleFn>> table{
            {"compose", &InferenceEngine::rule_compose},
            {"const-coeff-equivalences", &InferenceEngine::rule_const_coeff_equivalences},
            {"elliptic-equivalences", &InferenceEngine::rule_elliptic_equivalences},
            {"sobolev-shift", &InferenceEngine::rule_sobolev_shift},
            {"tube-extension", &InferenceEngine::rule_tube_extension},
            {"tube-analytic", &InferenceEngine::rule_tube_analytic},
            {"transpose-weak-hypo", &InferenceEngine::rule_transpose_weak_hypo},
            {"class-S-upgrade", &InferenceEngine::rule_class_S_upgrade},
            {"hormander-package", &InferenceEngine::rule_hormander_package},
            {"solvability", &InferenceEngine::rule_solvability},
            {"solvability-bridge", &InferenceEngine::rule_solvability_bridge},
            {"system-equivalences", &InferenceEngine::rule_system_equivalences},
        };
        return table;
    }

    // `rule_order` permutes rule application (the closure must not depend on it)
    DerivationResult derive(std::vector<HypoFact> axioms,
                            const std::vector<size_t>* rule_order = nullptr) const {
        std::vector<HypoFact> facts;
        int next_id = 0;
        // Facts merge only within the same producing rule so every fact's
        // range is replayable from its own premises.
        auto insert = [&](HypoFact f) {
            validate_lattice(f);
            for (auto& e : facts) {
                if (!e.same_shape(f) || e.prov.rule != f.prov.rule) continue;
                bool same_r = (!f.uses_r()) || f.r_rel != RRel::Absolute || f.r_range == e.r_range;
                if (!same_r) continue;
                Interval fs = f.uses_s() ? f.s_range : Interval::all();
                Interval es = e.uses_s() ? e.s_range : Interval::all();
                auto merge_premises = [&]() {
                    for (int id : f.prov.premises)
                        if (std::find(e.prov.premises.begin(), e.prov.premises.end(), id) ==
                            e.prov.premises.end())
                            e.prov.premises.push_back(id);
                    std::sort(e.prov.premises.begin(), e.prov.premises.end());
                };
                if (fs.subset_of(es)) {
                    merge_premises();
                    return false;
                }
                if (es.merges_with(fs)) {
                    e.s_range = es.merge(fs);
                    merge_premises();
                    return true;
                }
            }
            f.id = next_id++;
            std::sort(f.prov.premises.begin(), f.prov.premises.end());
            facts.push_back(std::move(f));
            return true;
        };
        for (auto& a : axioms) insert(std::move(a));

        std::vector<size_t> order;
        if (rule_order) {
            order = *rule_order;
        } else {
            for (size_t k = 0; k < rule_table().size(); ++k) order.push_back(k);
        }

        DerivationResult out;
        const int max_rounds = 64;
        int round = 0;
        bool changed = true;
        while (changed && round < max_rounds) {
            ++round;
            changed = false;
            for (size_t idx : order) {
                RuleFn fn = rule_table()[idx].second;
                for (const auto& [id, m] : meta_) {
                    std::vector<HypoFact> fresh = (this->*fn)(facts, m);
                    for (auto& f : fresh)
                        if (insert(std::move(f))) changed = true;
                }
            }
        }
        out.iterations = round;
        out.facts = facts;

        // contradiction scan: a holds-fact and a fails-fact that answer the
        // same concrete question
        for (const auto& h : out.facts) {
            if (!h.holds) continue;
            for (const auto& g : out.facts) {
                if (g.holds || g.op != h.op || g.slots.size() != h.slots.size()) continue;
                if (facts_conflict(h, g)) {
                    out.contradiction = true;
                    out.contradictions.emplace_back(h.id, g.id);
                }
            }
        }
        return out;
    }

    // Replays a derived fact: applies its producing rule to its recorded
    // premises and checks that the conclusion still covers the fact.
    bool replay(const HypoFact& f, const std::vector<HypoFact>& closure) const {
        if (f.prov.rule.empty()) return true;  // axiom
        const OperatorMetadata* m = metadata_for(f.op);
        if (!m) return false;
        std::vector<HypoFact> premises;
        for (int id : f.prov.premises)
            for (const auto& c : closure)
                if (c.id == id) premises.push_back(c);
        RuleFn fn = nullptr;
        for (const auto& [name, candidate] : rule_table())
            if (name == f.prov.rule) fn = candidate;
        if (!fn) return false;
        std::vector<HypoFact> conclusions = (this->*fn)(premises, *m);
        // a fact may be the merge of several emissions; its range must be
        // covered by the union of matching conclusion ranges
        IntervalSet covered;
        for (const auto& c : conclusions) {
            if (c.op != f.op || c.holds != f.holds || !(c.slots == f.slots)) continue;
            if (c.r_rel != f.r_rel || c.shift_step != f.shift_step) continue;
            if (f.uses_r() && f.r_rel == RRel::Absolute && !(f.r_range == c.r_range)) continue;
            covered.add(c.uses_s() ? c.s_range : Interval::all());
        }
        Interval fs = f.uses_s() ? f.s_range : Interval::all();
        for (const auto& part : covered.parts)
            if (fs.subset_of(part)) return true;
        return false;
    }

    // --- the rules; public so proof traces can be replayed rule by rule ----

    // R1: compose h(F, G) with h(G', H), G <= G'.
    std::vector<HypoFact> rule_compose(const std::vector<HypoFact>& facts,
                                       const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        for (const auto& f1 : facts) {
            if (f1.op != m.id && f1.op != m.transpose_id()) continue;
            if (!f1.holds || !f1.is_pair()) continue;
            for (const auto& f2 : facts) {
                if (f2.op != f1.op || !f2.holds || !f2.is_pair()) continue;
                if (f2.slots[0].ref != SlotRef::Fixed || f2.slots[1].ref != SlotRef::Fixed)
                    continue;
                const SheafSpace& F2 = f2.slots[0].space;
                const SheafSpace& H2 = f2.slots[1].space;
                if (f1.slots[1].ref == SlotRef::Fixed) {
                    if (f1.uses_s() || f1.uses_r()) continue;
                    if (!includes(f1.slots[1].space, F2)) continue;
                    if (f1.slots[0].ref != SlotRef::Fixed) continue;
                    if (f1.slots[0].space == H2 || includes(f1.slots[0].space, H2))
                        continue;  // no content: conclusion space not below start
                    HypoFact c;
                    c.op = f1.op;
                    c.slots = {f1.slots[0], SpaceSlot::fixed(H2)};
                    c.prov.rule = "compose";
                    c.prov.premises = {f1.id, f2.id};
                    out.push_back(std::move(c));
                } else if (f1.slots[1].ref == SlotRef::S && !f1.uses_r()) {
                    // middle is a family: compose on the s-region where fam(s) <= F2
                    Interval reg = inclusion_region_rhs_fixed(f1.slots[1].family, F2)
                                       .intersect(f1.s_range)
                                       .intersect(family_domain(f1.slots[1].family));
                    if (reg.empty) continue;
                    if (f1.slots[0].ref == SlotRef::Fixed &&
                        includes(f1.slots[0].space, H2))
                        continue;
                    HypoFact c;
                    c.op = f1.op;
                    c.slots = {f1.slots[0], SpaceSlot::fixed(H2)};
                    c.s_range = reg;
                    c.prov.rule = "compose";
                    c.prov.premises = {f1.id, f2.id};
                    if (c.slots[0].ref == SlotRef::Fixed || c.slots[0].ref == SlotRef::S)
                        out.push_back(std::move(c));
                }
            }
        }
        return out;
    }

    // R3: constant-coefficient Gevrey equivalences.
    std::vector<HypoFact> rule_const_coeff_equivalences(const std::vector<HypoFact>& facts,
                                                        const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.constant_coefficients) return out;
        for (bool polarity : {true, false}) {
            auto [region, premise_ids] = member_region_r3(facts, m.id, polarity);
            if (region.empty()) continue;
            for (const auto& part : region.parts)
                emit_r3_members(out, m.id, polarity, part, premise_ids);
        }
        return out;
    }

    // R4: elliptic equivalences for constant-coefficient operators.
    std::vector<HypoFact> rule_elliptic_equivalences(const std::vector<HypoFact>& facts,
                                                     const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.constant_coefficients || !m.elliptic.has_value()) return out;
        bool holds = *m.elliptic;
        auto emit = [&](SheafSpace F, SheafSpace G) {
            HypoFact f;
            f.op = m.id;
            f.holds = holds;
            f.slots = {SpaceSlot::fixed(std::move(F)), SpaceSlot::fixed(std::move(G))};
            f.prov.rule = "elliptic-equivalences";
            f.prov.note = holds ? "ellipticity verdict: elliptic" : "ellipticity verdict: not elliptic";
            out.push_back(std::move(f));
        };
        emit(SheafSpace::Dprime(), SheafSpace::Cw());
        emit(SheafSpace::B(), SheafSpace::Cw());
        emit(SheafSpace::B(), SheafSpace::Cinf());
        emit(SheafSpace::B(), SheafSpace::Dprime());
        emit(SheafSpace::Cinf(), SheafSpace::Cw());
        (void)facts;
        return out;
    }

    // R5: Sobolev shifting for operators commuting with an elliptic operator
    // of order mm, plus the triple bridge and the negative cascade.
    std::vector<HypoFact> rule_sobolev_shift(const std::vector<HypoFact>& facts,
                                             const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.commuting_elliptic_order) return out;
        Rational mm = *m.commuting_elliptic_order;
        bool hypo_cinf = false;
        int hypo_id = -1;
        bool fails_cinf = false;
        int fails_id = -1;
        Question q_cinf{m.id, {SheafSpace::Dprime(), SheafSpace::Cinf()}};
        for (const auto& f : facts) {
            if (fact_supports(f, q_cinf, true)) {
                hypo_cinf = true;
                hypo_id = f.id;
            }
            if (fact_supports(f, q_cinf, false)) {
                fails_cinf = true;
                fails_id = f.id;
            }
        }
        for (const auto& f : facts) {
            if (f.op != m.id || !f.holds || f.uses_s() || f.uses_r() || f.shift_step) continue;
            bool sobolev_pair = f.is_pair() && f.slots[0].space.tag == SpaceTag::Sobolev &&
                                f.slots[1].space.tag == SpaceTag::Sobolev;
            bool sobolev_triple = f.slots.size() == 3 &&
                                  f.slots[0].space.tag == SpaceTag::Sobolev &&
                                  f.slots[1].space.tag == SpaceTag::Sobolev &&
                                  f.slots[2].space == SheafSpace::Cinf();
            if (!sobolev_pair && !sobolev_triple) continue;
            if (f.slots[0].space.param >= f.slots[1].space.param) continue;  // needs r < t
            HypoFact shifted = f;
            shifted.id = -1;
            shifted.shift_step = mm;
            shifted.prov = {};
            shifted.prov.rule = "sobolev-shift";
            shifted.prov.premises = {f.id};
            out.push_back(shifted);
            if (sobolev_pair) {
                // a pair gives the triple with a Cinf ceiling for free
                HypoFact triple = f;
                triple.id = -1;
                triple.slots.push_back(SpaceSlot::fixed(SheafSpace::Cinf()));
                triple.prov = {};
                triple.prov.rule = "sobolev-shift";
                triple.prov.premises = {f.id};
                out.push_back(triple);
            }
            // triple bridge: h(H^r, H^{r+mm}, Cinf) for some r gives h(D', Cinf)
            if ((sobolev_triple || sobolev_pair) && !hypo_cinf &&
                f.slots[1].space.param - f.slots[0].space.param >= mm) {
                HypoFact c;
                c.op = m.id;
                c.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())};
                c.prov.rule = "sobolev-shift";
                c.prov.premises = {f.id};
                out.push_back(std::move(c));
            }
        }
        if (hypo_cinf) {
            // h(H^r, H^{r+mm}, Cinf) for every real r: dense shift family
            HypoFact f;
            f.op = m.id;
            f.slots = {SpaceSlot::fixed(SheafSpace::H(Rational(0))),
                       SpaceSlot::fixed(SheafSpace::H(mm)), SpaceSlot::fixed(SheafSpace::Cinf())};
            f.shift_step = Rational(0);  // dense: all rational shifts
            f.prov.rule = "sobolev-shift";
            f.prov.premises = {hypo_id};
            out.push_back(std::move(f));
        }
        if (fails_cinf) {
            // negative cascade: no Sobolev gain against a Cinf right-hand side
            HypoFact t;
            t.op = m.id;
            t.holds = false;
            t.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::Sobolev),
                       SpaceSlot::fixed(SheafSpace::Cinf())};
            t.s_range = Interval::all();
            t.prov.rule = "sobolev-shift";
            t.prov.premises = {fails_id};
            out.push_back(std::move(t));
            HypoFact p;
            p.op = m.id;
            p.holds = false;
            p.slots = {SpaceSlot::s(SpaceTag::Sobolev), SpaceSlot::fixed(SheafSpace::Cinf())};
            p.s_range = Interval::all();
            p.prov.rule = "sobolev-shift";
            p.prov.premises = {fails_id};
            out.push_back(std::move(p));
        }
        return out;
    }

    // R6: tube extension, h(G^r, G^s) with r > s gives h(D'_s, G^s).
    std::vector<HypoFact> rule_tube_extension(const std::vector<HypoFact>& facts,
                                              const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.tube_guards) return out;
        auto [region, ids] = gevrey_above_region(facts, m.id, SpaceTag::GevreyRoumieu);
        for (const auto& part : region.parts) {
            HypoFact f;
            f.op = m.id;
            f.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
            f.s_range = part.intersect(Interval::greater_than(Rational(1)));
            if (f.s_range.empty) continue;
            f.prov.rule = "tube-extension";
            f.prov.premises = ids;
            out.push_back(std::move(f));
        }
        return out;
    }

    // R7: analytic tube variant, h(G^r, Cw) for some r > 1 gives h(B, Cw).
    std::vector<HypoFact> rule_tube_analytic(const std::vector<HypoFact>& facts,
                                             const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.tube_guards) return out;
        for (const auto& f : facts) {
            if (f.op != m.id || !f.holds || !f.is_pair()) continue;
            if (!slot_is_cw(f.slots[1])) continue;
            Interval admits = engine_detail::admits_family_above(
                f.slots[0], SpaceTag::GevreyRoumieu, f.s_range, f.r_range, f.r_rel);
            if (!admits.contains(Rational(1))) continue;
            HypoFact c;
            c.op = m.id;
            c.slots = {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::fixed(SheafSpace::Cw())};
            c.prov.rule = "tube-analytic";
            c.prov.premises = {f.id};
            out.push_back(std::move(c));
            break;
        }
        return out;
    }

    // R8: class-S transpose theorem, h(D', G^s) gives tP h(D'_s, D'_r) for
    // r > s and tP h(D'_s, D').
    std::vector<HypoFact> rule_transpose_weak_hypo(const std::vector<HypoFact>& facts,
                                                   const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.in_class_S) return out;
        auto [region, ids] = dprime_gevrey_region(facts, m.id);
        for (const auto& part : region.parts) {
            Interval s_part = part.intersect(Interval::greater_than(Rational(1)));
            if (s_part.empty) continue;
            HypoFact a;
            a.op = m.transpose_id();
            a.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::r(SpaceTag::UltraRoumieu)};
            a.s_range = s_part;
            a.r_rel = RRel::GreaterThanS;
            a.prov.rule = "transpose-weak-hypo";
            a.prov.premises = ids;
            out.push_back(a);
            HypoFact b;
            b.op = m.transpose_id();
            b.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Dprime())};
            b.s_range = s_part;
            b.prov.rule = "transpose-weak-hypo";
            b.prov.premises = ids;
            out.push_back(b);
        }
        return out;
    }

    // R8b: class-S upgrade, h(D', G^s) gives h(D', Cinf) and h(D', G^r), r > s.
    std::vector<HypoFact> rule_class_S_upgrade(const std::vector<HypoFact>& facts,
                                               const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.in_class_S) return out;
        auto [region, ids] = dprime_gevrey_region(facts, m.id);
        if (region.empty()) return out;
        HypoFact c;
        c.op = m.id;
        c.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())};
        c.prov.rule = "class-S-upgrade";
        c.prov.premises = ids;
        out.push_back(c);
        for (const auto& part : region.parts) {
            HypoFact g;
            g.op = m.id;
            g.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
            g.s_range = part.has_lo ? Interval::greater_than(part.lo) : Interval::greater_than(Rational(1));
            g.s_range = g.s_range.merge(part);
            g.prov.rule = "class-S-upgrade";
            g.prov.premises = ids;
            out.push_back(g);
        }
        return out;
    }

    // R9: Hoermander package. Both P and tP h(D', G^s) give, for both:
    // h(D'_s, G^r) r >= s; h(D'_s, Cinf); h(D'_s, D'); h(D'_s, D'_r) r > s.
    std::vector<HypoFact> rule_hormander_package(const std::vector<HypoFact>& facts,
                                                 const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.hormander) return out;
        auto [rp, idp] = dprime_gevrey_region(facts, m.id);
        IntervalSet rt = rp;
        std::vector<int> idt = idp;
        if (!m.transpose_same) {
            auto [r2, id2] = dprime_gevrey_region(facts, m.id + "^t");
            rt = r2;
            idt = id2;
        }
        std::vector<int> ids = idp;
        for (int k : idt)
            if (std::find(ids.begin(), ids.end(), k) == ids.end()) ids.push_back(k);
        for (const auto& pp : rp.parts)
            for (const auto& pt : rt.parts) {
                Interval part = pp.intersect(pt).intersect(Interval::greater_than(Rational(1)));
                if (part.empty) continue;
                for (const std::string& target : {m.id, m.transpose_id()}) {
                    HypoFact a;
                    a.op = target;
                    a.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::r(SpaceTag::GevreyRoumieu)};
                    a.s_range = part;
                    a.r_rel = RRel::AtLeastS;
                    a.prov.rule = "hormander-package";
                    a.prov.premises = ids;
                    out.push_back(a);
                    HypoFact b;
                    b.op = target;
                    b.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Cinf())};
                    b.s_range = part;
                    b.prov.rule = "hormander-package";
                    b.prov.premises = ids;
                    out.push_back(b);
                    HypoFact c;
                    c.op = target;
                    c.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Dprime())};
                    c.s_range = part;
                    c.prov.rule = "hormander-package";
                    c.prov.premises = ids;
                    out.push_back(c);
                    HypoFact d;
                    d.op = target;
                    d.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::r(SpaceTag::UltraRoumieu)};
                    d.s_range = part;
                    d.r_rel = RRel::GreaterThanS;
                    d.prov.rule = "hormander-package";
                    d.prov.premises = ids;
                    out.push_back(d);
                }
            }
        return out;
    }

    // R10 contrapositive: a nondegenerate operator whose transpose is not
    // Cinf-locally solvable fails h(D'_s, D') and h(D'_(s), D') for all s.
    std::vector<HypoFact> rule_solvability(const std::vector<HypoFact>& facts,
                                           const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        bool guard = m.nondegenerate.value_or(false) || m.no_delta_solution;
        if (!guard || !m.transpose_not_solvable) return out;
        (void)facts;
        for (SpaceTag fam : {SpaceTag::UltraRoumieu, SpaceTag::UltraBeurling}) {
            HypoFact f;
            f.op = m.id;
            f.holds = false;
            f.slots = {SpaceSlot::s(fam), SpaceSlot::fixed(SheafSpace::Dprime())};
            f.s_range = Interval::greater_than(Rational(1));
            f.prov.rule = "solvability";
            f.prov.note = "transpose not Cinf-locally solvable; operator nondegenerate";
            out.push_back(std::move(f));
        }
        return out;
    }

    // forward R10: does the closure establish Cinf-local solvability of tP?
    struct SolvabilityConclusion {
        bool established = false;
        std::vector<int> premises;
    };
    SolvabilityConclusion transpose_solvability(const std::vector<HypoFact>& facts,
                                                const OperatorMetadata& m) const {
        SolvabilityConclusion out;
        bool guard = m.nondegenerate.value_or(false) || m.no_delta_solution;
        if (!guard) return out;
        for (const auto& f : facts) {
            if (f.op != m.id || !f.holds || !f.is_pair()) continue;
            // need h(D'_(s), D') or h(D'_s, D') for some s > 1
            Question q1{m.id, {SheafSpace::Ds_beurling(Rational(2)), SheafSpace::Dprime()}};
            Question q2{m.id, {SheafSpace::Ds(Rational(2)), SheafSpace::Dprime()}};
            // try a few orders; the inclusion D'_(sigma) < D'_s (s < sigma) is
            // already wired into fact_supports
            for (const Rational& s : {Rational(3, 2), Rational(2), Rational(3), Rational(5)}) {
                Question qa{m.id, {SheafSpace::Ds_beurling(s), SheafSpace::Dprime()}};
                Question qb{m.id, {SheafSpace::Ds(s), SheafSpace::Dprime()}};
                if (fact_supports(f, qa, true) || fact_supports(f, qb, true)) {
                    out.established = true;
                    out.premises.push_back(f.id);
                    return out;
                }
            }
            (void)q1;
            (void)q2;
        }
        return out;
    }

    // R11: local solvability with respect to G plus ker P in G give h(B, G).
    std::vector<HypoFact> rule_solvability_bridge(const std::vector<HypoFact>& facts,
                                                  const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        (void)facts;
        for (const auto& G : m.solvable_with_kernel) {
            HypoFact f;
            f.op = m.id;
            f.slots = {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::fixed(G)};
            f.prov.rule = "solvability-bridge";
            f.prov.note = "locally solvable w.r.t. " + G.to_string() + " with kernel inside";
            out.push_back(std::move(f));
        }
        return out;
    }

    // R12: system equivalences for locally integrable structures of order s0:
    // for sigma > s0, h(D'_s, G^sigma) <=> h(D', G^sigma) <=> h(Cinf, G^sigma)
    // <=> h(G^s, G^sigma) (s > sigma); with local solvability also h(D'_s, D')
    // and h(D'_s, Cinf).
    std::vector<HypoFact> rule_system_equivalences(const std::vector<HypoFact>& facts,
                                                   const OperatorMetadata& m) const {
        std::vector<HypoFact> out;
        if (!m.is_system) return out;
        Interval domain = Interval::greater_than(m.system_order);
        for (bool polarity : {true, false}) {
            auto [region, ids] = member_region_r12(facts, m.id, polarity);
            for (const auto& part0 : region.parts) {
                Interval part = part0.intersect(domain);
                if (part.empty) continue;
                auto stamp = [&](HypoFact f) {
                    f.op = m.id;
                    f.holds = polarity;
                    f.s_range = part;
                    f.prov.rule = "system-equivalences";
                    f.prov.premises = ids;
                    out.push_back(std::move(f));
                };
                {
                    HypoFact f;
                    f.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
                    stamp(f);
                }
                {
                    HypoFact f;
                    f.slots = {SpaceSlot::fixed(SheafSpace::Cinf()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
                    stamp(f);
                }
                {
                    HypoFact f;
                    f.slots = {SpaceSlot::r(SpaceTag::UltraRoumieu), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
                    f.r_rel = RRel::GreaterThanS;
                    stamp(f);
                }
                {
                    HypoFact f;
                    f.slots = {SpaceSlot::r(SpaceTag::GevreyRoumieu), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
                    f.r_rel = RRel::GreaterThanS;
                    stamp(f);
                }
                if (polarity && m.locally_solvable) {
                    // addendum: h(D'_s, D') and h(D'_s, Cinf) for s above the region
                    Interval above = part.has_lo ? Interval::greater_than(part.lo) : domain;
                    HypoFact f;
                    f.op = m.id;
                    f.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Dprime())};
                    f.s_range = above.intersect(domain);
                    f.prov.rule = "system-equivalences";
                    f.prov.premises = ids;
                    out.push_back(f);
                    HypoFact g = f;
                    g.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Cinf())};
                    out.push_back(g);
                }
            }
        }
        return out;
    }

private:
    static bool slot_is_cw(const SpaceSlot& s) {
        return s.ref == SlotRef::Fixed && s.space == SheafSpace::Cw();
    }

    static void validate_lattice(const HypoFact& f) {
        // probe a few parameter values and require the subsheaf preconditions
        auto probes_for = [](const Interval& iv) {
            std::vector<Rational> ps;
            if (iv.has_lo && iv.lo_closed) ps.push_back(iv.lo);
            if (iv.has_lo) ps.push_back(iv.lo + 1);
            if (iv.has_hi && iv.hi_closed) ps.push_back(iv.hi);
            if (iv.has_lo && iv.has_hi) ps.push_back((iv.lo + iv.hi) / 2);
            if (!iv.has_lo && !iv.has_hi) ps.push_back(Rational(2));
            std::vector<Rational> ok;
            for (const auto& p : ps)
                if (iv.contains(p)) ok.push_back(p);
            return ok;
        };
        Interval s_iv = f.uses_s() ? f.s_range : Interval::point(Rational(2));
        for (const auto& s : probes_for(s_iv)) {
            std::vector<Rational> rs;
            if (f.uses_r()) {
                if (f.r_rel == RRel::Absolute)
                    rs = probes_for(f.r_range);
                else
                    rs = {s + 1, s + 2};
                if (f.r_rel == RRel::AtLeastS) rs.push_back(s);
            } else {
                rs = {s + 1};
            }
            for (const auto& r : rs) {
                std::vector<SheafSpace> inst;
                bool valid = true;
                for (const auto& slot : f.slots) {
                    try {
                        inst.push_back(slot.instantiate(s, r));
                    } catch (const std::invalid_argument&) {
                        valid = false;  // probe outside the family domain
                        break;
                    }
                }
                if (!valid) continue;
                for (size_t k = 1; k < inst.size(); ++k)
                    if (!includes(inst[k], inst[k - 1]))
                        throw std::logic_error("fact violates lattice preconditions: " +
                                               f.to_string());
            }
        }
    }

    // conservative conflict check between a holds- and a fails-fact
    static bool facts_conflict(const HypoFact& h, const HypoFact& g) {
        // same slot structure: ranges must overlap
        bool same_slots = h.slots == g.slots;
        if (same_slots && h.r_rel == g.r_rel) {
            Interval hs = h.uses_s() ? h.s_range : Interval::all();
            Interval gs = g.uses_s() ? g.s_range : Interval::all();
            if (hs.intersect(gs).empty) return false;
            if (h.uses_r() && h.r_rel == RRel::Absolute &&
                h.r_range.intersect(g.r_range).empty)
                return false;
            return true;
        }
        // cross-shape: probe concrete questions generated from both facts
        std::vector<Rational> probes{Rational(3, 2), Rational(2), Rational(3), Rational(4)};
        for (const auto& s : probes)
            for (const auto& r : probes) {
                if (r <= s) continue;
                for (const HypoFact* base : {&h, &g}) {
                    std::vector<SheafSpace> inst;
                    bool valid = true;
                    for (const auto& slot : base->slots) {
                        try {
                            inst.push_back(slot.instantiate(s, r));
                        } catch (...) {
                            valid = false;
                            break;
                        }
                    }
                    if (!valid) continue;
                    Question q{h.op, inst};
                    if (fact_supports(h, q, true) && fact_supports(g, q, false)) return true;
                }
            }
        return false;
    }

    // region of s where h(D', G^s) is established (a building block for
    // R8/R8b/R9); returns contributing fact ids
    std::pair<IntervalSet, std::vector<int>> dprime_gevrey_region(
        const std::vector<HypoFact>& facts, const std::string& op) const {
        RegionQuestion rq;
        rq.op = op;
        rq.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
        IntervalSet region = region_of(facts, rq, true);
        std::vector<int> ids;
        for (const auto& f : facts)
            if (f.op == op && f.holds && f.is_pair() &&
                ((f.slots[1].ref != SlotRef::Fixed &&
                  (f.slots[1].family == SpaceTag::GevreyRoumieu)) ||
                 (f.slots[1].ref == SlotRef::Fixed &&
                  f.slots[1].space.tag == SpaceTag::GevreyRoumieu)))
                ids.push_back(f.id);
        return {region, ids};
    }

    // region of s where exists r > s with holds/fails h(G^r, G^s)
    std::pair<IntervalSet, std::vector<int>> gevrey_above_region(
        const std::vector<HypoFact>& facts, const std::string& op, SpaceTag) const {
        IntervalSet region;
        std::vector<int> ids;
        for (const auto& f : facts) {
            if (f.op != op || !f.holds || !f.is_pair()) continue;
            Interval s_values;
            if (f.slots[1].ref == SlotRef::S && f.slots[1].family == SpaceTag::GevreyRoumieu)
                s_values = f.s_range;
            else if (f.slots[1].ref == SlotRef::Fixed &&
                     f.slots[1].space.tag == SpaceTag::GevreyRoumieu)
                s_values = Interval::point(f.slots[1].space.param);
            else
                continue;
            Interval admits = engine_detail::admits_family_above(
                f.slots[0], SpaceTag::GevreyRoumieu, f.s_range, f.r_range, f.r_rel);
            Interval part = s_values.intersect(admits);
            if (!part.empty) {
                region.add(part);
                ids.push_back(f.id);
            }
        }
        return {region, ids};
    }

    // R3 member detection: region of s where any of the six members is
    // established with the requested polarity
    std::pair<IntervalSet, std::vector<int>> member_region_r3(const std::vector<HypoFact>& facts,
                                                              const std::string& op,
                                                              bool polarity) const {
        IntervalSet region;
        std::vector<int> ids;
        auto merge = [&](const IntervalSet& r, std::vector<int> contributing) {
            for (const auto& p : r.parts) region.add(p);
            for (int k : contributing)
                if (std::find(ids.begin(), ids.end(), k) == ids.end()) ids.push_back(k);
        };
        auto pattern_region = [&](std::vector<SpaceSlot> slots) {
            RegionQuestion rq;
            rq.op = op;
            rq.slots = std::move(slots);
            IntervalSet r = region_of(facts, rq, polarity);
            std::vector<int> contributing;
            for (const auto& f : facts)
                if (f.op == op && f.holds == polarity) contributing.push_back(f.id);
            merge(r, contributing);
        };
        // members with G^s as the conclusion space
        pattern_region({SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)});
        pattern_region({SpaceSlot::fixed(SheafSpace::Cinf()), SpaceSlot::s(SpaceTag::GevreyRoumieu)});
        // the diagonal h(D'_s, G^s) member
        {
            IntervalSet r;
            std::vector<int> contributing;
            for (const auto& f : facts) {
                if (f.op != op || f.holds != polarity || !f.is_pair()) continue;
                if (f.slots[0].ref == SlotRef::S && f.slots[0].family == SpaceTag::UltraRoumieu &&
                    f.slots[1].ref == SlotRef::S && f.slots[1].family == SpaceTag::GevreyRoumieu) {
                    r.add(f.s_range);
                    contributing.push_back(f.id);
                }
            }
            merge(r, contributing);
        }
        // h(G^t, G^s) with t > s (positive: exists t; negative via equivalence)
        if (polarity) {
            auto [r, contributing] = gevrey_above_region(facts, op, SpaceTag::GevreyRoumieu);
            merge(r, contributing);
        }
        // h(D'_s, D') and h(D'_s, Cinf) members
        for (const SheafSpace& target : {SheafSpace::Dprime(), SheafSpace::Cinf()}) {
            IntervalSet r;
            std::vector<int> contributing;
            for (const auto& f : facts) {
                if (f.op != op || f.holds != polarity || !f.is_pair()) continue;
                if (f.slots[0].ref == SlotRef::S && f.slots[0].family == SpaceTag::UltraRoumieu &&
                    f.slots[1].ref == SlotRef::Fixed && f.slots[1].space == target) {
                    r.add(f.s_range);
                    contributing.push_back(f.id);
                }
            }
            merge(r, contributing);
        }
        return {region, ids};
    }

    void emit_r3_members(std::vector<HypoFact>& out, const std::string& op, bool polarity,
                         const Interval& part0, const std::vector<int>& ids) const {
        Interval part = part0.intersect(Interval::greater_than(Rational(1)));
        if (part.empty) return;
        auto stamp = [&](HypoFact f) {
            f.op = op;
            f.holds = polarity;
            f.s_range = part;
            f.prov.rule = "const-coeff-equivalences";
            f.prov.premises = ids;
            out.push_back(std::move(f));
        };
        {
            HypoFact f;
            f.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
            stamp(f);
        }
        {
            HypoFact f;
            f.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
            stamp(f);
        }
        {
            HypoFact f;
            f.slots = {SpaceSlot::fixed(SheafSpace::Cinf()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
            stamp(f);
        }
        {
            HypoFact f;
            f.slots = {SpaceSlot::r(SpaceTag::GevreyRoumieu), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
            f.r_rel = RRel::GreaterThanS;
            stamp(f);
        }
        {
            HypoFact f;
            f.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Dprime())};
            stamp(f);
        }
        {
            HypoFact f;
            f.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::fixed(SheafSpace::Cinf())};
            stamp(f);
        }
    }

    // R12 member detection over the conclusion order sigma
    std::pair<IntervalSet, std::vector<int>> member_region_r12(const std::vector<HypoFact>& facts,
                                                               const std::string& op,
                                                               bool polarity) const {
        IntervalSet region;
        std::vector<int> ids;
        auto merge = [&](const Interval& part, int id) {
            if (part.empty) return;
            region.add(part);
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        };
        for (const auto& f : facts) {
            if (f.op != op || f.holds != polarity || !f.is_pair()) continue;
            Interval sigma_values;
            if (f.slots[1].ref == SlotRef::S && f.slots[1].family == SpaceTag::GevreyRoumieu)
                sigma_values = f.s_range;
            else if (f.slots[1].ref == SlotRef::Fixed &&
                     f.slots[1].space.tag == SpaceTag::GevreyRoumieu)
                sigma_values = Interval::point(f.slots[1].space.param);
            else
                continue;
            if (f.slots[0].ref == SlotRef::Fixed) {
                const SheafSpace& F = f.slots[0].space;
                if (polarity) {
                    // positive member needs F above some G^s (s > sigma) or F in {D', Cinf}
                    if (F == SheafSpace::Dprime() || F == SheafSpace::Cinf()) {
                        merge(sigma_values, f.id);
                    } else {
                        Interval admits = engine_detail::admits_family_above(
                            f.slots[0], SpaceTag::GevreyRoumieu, f.s_range, f.r_range, f.r_rel);
                        merge(sigma_values.intersect(admits), f.id);
                    }
                } else {
                    // negative member: any of D', Cinf, G^s (s>sigma), D'_s
                    if (F == SheafSpace::Dprime() || F == SheafSpace::Cinf()) {
                        merge(sigma_values, f.id);
                    } else if (F.tag == SpaceTag::GevreyRoumieu || F.tag == SpaceTag::UltraRoumieu) {
                        merge(sigma_values.intersect(Interval::less_than(F.param)), f.id);
                    }
                }
            } else if (f.slots[0].ref == SlotRef::R &&
                       (f.slots[0].family == SpaceTag::GevreyRoumieu ||
                        f.slots[0].family == SpaceTag::UltraRoumieu) &&
                       f.r_rel == RRel::GreaterThanS) {
                merge(sigma_values, f.id);
            }
        }
        return {region, ids};
    }

    std::map<std::string, OperatorMetadata> meta_;
};

}  // namespace hypoel

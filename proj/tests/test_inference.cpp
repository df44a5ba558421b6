#include "hypoel/inference.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hypoel;

namespace {

HypoFact mk(const std::string& op, bool holds, std::vector<SpaceSlot> slots,
            Interval s = Interval::all(), RRel rrel = RRel::Unused) {
    HypoFact f;
    f.op = op;
    f.holds = holds;
    f.slots = std::move(slots);
    f.s_range = s;
    f.r_rel = rrel;
    f.prov.citation = "test axiom";
    return f;
}

}  // namespace

TEST_CASE("empty axiom set yields an empty closure") {
    OperatorMetadata m;
    m.id = "p";
    InferenceEngine eng({m});
    auto res = eng.derive({});
    REQUIRE(res.facts.empty());
    REQUIRE_FALSE(res.contradiction);
    REQUIRE(res.query(parse_question("p", "h(D', Cinf)")).verdict == QueryVerdict::unknown);
}

TEST_CASE("tube extension derives the ultradistribution diagonal") {
    OperatorMetadata m;
    m.id = "bg";
    m.tube_guards = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("bg", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(2)))});
    // h(D'_s, G^s) for s >= 2
    REQUIRE(res.query(parse_question("bg", "h(D'{2}, G{2})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("bg", "h(D'{3}, G{3})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("bg", "h(D'{3/2}, G{3/2})")).verdict == QueryVerdict::unknown);
}

TEST_CASE("constant-coefficient equivalences propagate both polarities") {
    OperatorMetadata m;
    m.id = "p";
    m.constant_coefficients = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("p", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(2))),
                           mk("p", false,
                              {SpaceSlot::fixed(SheafSpace::Cinf()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::open(Rational(1), Rational(2)))});
    REQUIRE(res.query(parse_question("p", "h(D'{2}, G{2})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(D'{2}, Cinf)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(D'{2}, D')")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(G{3}, G{2})")).verdict == QueryVerdict::holds);
    // negative side flows to every member on (1,2)
    REQUIRE(res.query(parse_question("p", "h(D', G{3/2})")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("p", "h(D'{3/2}, D')")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("p", "h(G{2}, G{3/2})")).verdict == QueryVerdict::fails);
    REQUIRE_FALSE(res.contradiction);
}

TEST_CASE("elliptic equivalences fire from the verdict") {
    OperatorMetadata m;
    m.id = "lap";
    m.constant_coefficients = true;
    m.elliptic = true;
    InferenceEngine eng({m});
    auto res = eng.derive({});
    REQUIRE(res.query(parse_question("lap", "h(B, Cw)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("lap", "h(D', Cw)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("lap", "h(B, D')")).verdict == QueryVerdict::holds);

    OperatorMetadata h;
    h.id = "heat";
    h.constant_coefficients = true;
    h.elliptic = false;
    InferenceEngine eng2({h});
    auto res2 = eng2.derive({mk("heat", true,
                                {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())})});
    REQUIRE(res2.query(parse_question("heat", "h(B, Cinf)")).verdict == QueryVerdict::fails);
    REQUIRE(res2.query(parse_question("heat", "h(D', Cinf)")).verdict == QueryVerdict::holds);
    REQUIRE_FALSE(res2.contradiction);
}

TEST_CASE("Sobolev shifting produces the whole ladder") {
    OperatorMetadata m;
    m.id = "p";
    m.commuting_elliptic_order = Rational(2);
    InferenceEngine eng({m});
    auto res = eng.derive({mk("p", true,
                              {SpaceSlot::fixed(SheafSpace::H(Rational(0))),
                               SpaceSlot::fixed(SheafSpace::H(Rational(1)))})});
    REQUIRE(res.query(parse_question("p", "h(H{2}, H{3})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(H{-4}, H{-3})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(L2, H{1}, Cinf)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(H{1}, H{2})")).verdict == QueryVerdict::unknown);
}

TEST_CASE("Sobolev triple bridge reaches h(D', Cinf) and back") {
    OperatorMetadata m;
    m.id = "p";
    m.commuting_elliptic_order = Rational(1);
    InferenceEngine eng({m});
    auto res = eng.derive({mk("p", true,
                              {SpaceSlot::fixed(SheafSpace::H(Rational(0))),
                               SpaceSlot::fixed(SheafSpace::H(Rational(1))),
                               SpaceSlot::fixed(SheafSpace::Cinf())})});
    REQUIRE(res.query(parse_question("p", "h(D', Cinf)")).verdict == QueryVerdict::holds);
    // and the dense family: h(H^r, H^{r+1}, Cinf) for every rational r
    REQUIRE(res.query(parse_question("p", "h(H{1/3}, H{4/3}, Cinf)")).verdict == QueryVerdict::holds);
}

TEST_CASE("negative Sobolev cascade from a failed h(D', Cinf)") {
    OperatorMetadata m;
    m.id = "lewy";
    m.commuting_elliptic_order = Rational(2);
    InferenceEngine eng({m});
    auto res = eng.derive({mk("lewy", false,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())})});
    REQUIRE(res.query(parse_question("lewy", "h(H{7}, Cinf)")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("lewy", "h(D', H{-5}, Cinf)")).verdict == QueryVerdict::fails);
    REQUIRE_FALSE(res.contradiction);
}

TEST_CASE("class-S transpose theorem targets the transpose operator") {
    OperatorMetadata m;
    m.id = "p";
    m.in_class_S = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("p", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(2)))});
    REQUIRE(res.query(parse_question("p^t", "h(D'{2}, D'{3})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p^t", "h(D'{2}, D')")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p^t", "h(D'{2}, D'{2})")).verdict == QueryVerdict::unknown);
    // Metivier upgrade applies to p itself
    REQUIRE(res.query(parse_question("p", "h(D', Cinf)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(D', G{5})")).verdict == QueryVerdict::holds);
}

TEST_CASE("Hormander package from a both-sided Gevrey premise") {
    OperatorMetadata m;
    m.id = "ol";
    m.hormander = true;
    m.in_class_S = true;
    m.transpose_same = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("ol", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(2)))});
    REQUIRE(res.query(parse_question("ol", "h(D'{2}, G{2})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("ol", "h(D'{2}, G{3})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("ol", "h(D'{2}, Cinf)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("ol", "h(D'{2}, D')")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("ol", "h(D'{2}, D'{3})")).verdict == QueryVerdict::holds);
    // above the threshold the family keeps working
    REQUIRE(res.query(parse_question("ol", "h(D'{3}, G{3})")).verdict == QueryVerdict::holds);
    // below it nothing is claimed
    REQUIRE(res.query(parse_question("ol", "h(D'{3/2}, G{2})")).verdict == QueryVerdict::unknown);
}

TEST_CASE("solvability contrapositive requires the nondegeneracy guard") {
    OperatorMetadata lewy;
    lewy.id = "lewy";
    lewy.nondegenerate = true;
    lewy.transpose_not_solvable = true;
    InferenceEngine eng({lewy});
    auto res = eng.derive({});
    REQUIRE(res.query(parse_question("lewy", "h(D'{2}, D')")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("lewy", "h(D'({2}), D')")).verdict == QueryVerdict::fails);

    // degenerate operator: the guard must block the rule even though the
    // transpose is unsolvable (the delta-type solution is the obstruction)
    OperatorMetadata euler;
    euler.id = "euler";
    euler.nondegenerate = false;
    euler.transpose_not_solvable = true;
    InferenceEngine eng2({euler});
    auto res2 = eng2.derive({mk("euler", true,
                               {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::fixed(SheafSpace::Dprime())})});
    REQUIRE(res2.query(parse_question("euler", "h(D'{2}, D')")).verdict == QueryVerdict::holds);
    REQUIRE_FALSE(res2.contradiction);
}

TEST_CASE("forward solvability conclusion with corroborating facts") {
    OperatorMetadata m;
    m.id = "p";
    m.nondegenerate = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("p", true,
                              {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::fixed(SheafSpace::Dprime())})});
    auto conclusion = eng.transpose_solvability(res.facts, m);
    REQUIRE(conclusion.established);
    REQUIRE_FALSE(conclusion.premises.empty());
}

TEST_CASE("solvability bridge emits h(B, G)") {
    OperatorMetadata m;
    m.id = "p";
    m.solvable_with_kernel = {SheafSpace::Cinf()};
    InferenceEngine eng({m});
    auto res = eng.derive({});
    REQUIRE(res.query(parse_question("p", "h(B, Cinf)")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("p", "h(D', Cinf)")).verdict == QueryVerdict::holds);
}

TEST_CASE("system equivalences spread negative facts (odd Mizohata pattern)") {
    OperatorMetadata m;
    m.id = "sys";
    m.is_system = true;
    m.system_order = Rational(1);
    InferenceEngine eng({m});
    // seed: fails h(G^s, G^2) for some s > 2 - encoded as the concrete G^3
    auto res = eng.derive({mk("sys", false,
                              {SpaceSlot::fixed(SheafSpace::G(Rational(3))),
                               SpaceSlot::fixed(SheafSpace::G(Rational(2)))})});
    REQUIRE(res.query(parse_question("sys", "h(D', G{2})")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("sys", "h(Cinf, G{2})")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("sys", "h(D'{4}, G{2})")).verdict == QueryVerdict::fails);
    REQUIRE(res.query(parse_question("sys", "h(G{5}, G{2})")).verdict == QueryVerdict::fails);
}

TEST_CASE("system equivalences positive direction plus solvable addendum") {
    OperatorMetadata m;
    m.id = "sys";
    m.is_system = true;
    m.system_order = Rational(1);
    m.locally_solvable = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("sys", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::greater_than(Rational(1)))});
    REQUIRE(res.query(parse_question("sys", "h(D'{3}, G{2})")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("sys", "h(D'{2}, D')")).verdict == QueryVerdict::holds);
    REQUIRE(res.query(parse_question("sys", "h(D'{2}, Cinf)")).verdict == QueryVerdict::holds);
}

TEST_CASE("contradictory axioms are reported with both traces") {
    OperatorMetadata m;
    m.id = "p";
    InferenceEngine eng({m});
    auto res = eng.derive({mk("p", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())}),
                           mk("p", false,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())})});
    REQUIRE(res.contradiction);
    REQUIRE_FALSE(res.contradictions.empty());
}

TEST_CASE("closure is independent of rule application order") {
    OperatorMetadata m;
    m.id = "bg";
    m.tube_guards = true;
    m.hormander = true;
    m.in_class_S = true;
    m.transpose_same = true;
    InferenceEngine eng({m});
    std::vector<HypoFact> axioms{
        mk("bg", true, {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
           Interval::at_least(Rational(2))),
        mk("bg", false, {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
           Interval::open(Rational(1), Rational(2)))};
    auto base = eng.derive(axioms);
    std::vector<size_t> order;
    for (size_t k = 0; k < InferenceEngine::rule_table().size(); ++k) order.push_back(k);
    std::mt19937 rng(99);
    for (int round = 0; round < 6; ++round) {
        std::shuffle(order.begin(), order.end(), rng);
        auto shuffled = eng.derive(axioms, &order);
        REQUIRE(shuffled.signature() == base.signature());
    }
}

TEST_CASE("every derived fact replays through its rule") {
    OperatorMetadata m;
    m.id = "bg";
    m.tube_guards = true;
    m.hormander = true;
    m.in_class_S = true;
    m.transpose_same = true;
    InferenceEngine eng({m});
    auto res = eng.derive({mk("bg", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(2)))});
    size_t derived = 0;
    for (const auto& f : res.facts) {
        if (!f.prov.rule.empty()) ++derived;
        REQUIRE(eng.replay(f, res.facts));
    }
    REQUIRE(derived > 0);
}

TEST_CASE("sharpness preference: the union of regions is reported") {
    OperatorMetadata m;
    m.id = "ol42";
    InferenceEngine eng({m});
    // catalog sharp fact s >= 2 and a commutator bound s >= 4 coexist
    auto res = eng.derive({mk("ol42", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(2))),
                           mk("ol42", true,
                              {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)},
                              Interval::at_least(Rational(4)))});
    RegionQuestion rq;
    rq.op = "ol42";
    rq.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
    IntervalSet holds = res.holds_region(rq);
    REQUIRE(holds.parts.size() == 1);
    REQUIRE(holds.parts[0] == Interval::at_least(Rational(2)));
    REQUIRE(res.query(parse_question("ol42", "h(D', G{3})")).verdict == QueryVerdict::holds);
}

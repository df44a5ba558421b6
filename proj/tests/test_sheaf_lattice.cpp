#include "hypoel/facts.hpp"
#include "hypoel/sheaf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hypoel;

namespace {

SheafSpace rand_space(std::mt19937& rng) {
    std::uniform_int_distribution<int> tag(0, 8);
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> den(1, 4);
    Rational p = Rational(1) + Rational(num(rng), den(rng));
    switch (tag(rng)) {
        case 0: return SheafSpace::Cw();
        case 1: return SheafSpace::G(p);
        case 2: return SheafSpace::G_beurling(p);
        case 3: return SheafSpace::Cinf();
        case 4: return SheafSpace::H(p - 2);
        case 5: return SheafSpace::Dprime();
        case 6: return SheafSpace::Ds(p);
        case 7: return SheafSpace::Ds_beurling(p);
        default: return SheafSpace::B();
    }
}

}  // namespace

TEST_CASE("paper inclusions hold in the lattice") {
    // G^t < G^(s) for t < s
    REQUIRE(includes(SheafSpace::G(Rational(3, 2)), SheafSpace::G_beurling(Rational(2))));
    REQUIRE_FALSE(includes(SheafSpace::G(Rational(2)), SheafSpace::G_beurling(Rational(2))));
    // D'_(s) < D'_{s0} for s0 < s
    REQUIRE(includes(SheafSpace::Ds_beurling(Rational(3)), SheafSpace::Ds(Rational(2))));
    REQUIRE_FALSE(includes(SheafSpace::Ds_beurling(Rational(2)), SheafSpace::Ds(Rational(2))));
    // reflexivity
    SheafSpace a = SheafSpace::Ds(Rational(5, 2));
    REQUIRE(includes(a, a));
}

TEST_CASE("duality flips the Gevrey and ultradistribution chains") {
    // function side grows with the order
    REQUIRE(includes(SheafSpace::Cw(), SheafSpace::G(Rational(2))));
    REQUIRE(includes(SheafSpace::G(Rational(2)), SheafSpace::G(Rational(3))));
    REQUIRE(includes(SheafSpace::G_beurling(Rational(2)), SheafSpace::G(Rational(2))));
    REQUIRE(includes(SheafSpace::G(Rational(2)), SheafSpace::Cinf()));
    // distribution side shrinks with the order
    REQUIRE(includes(SheafSpace::Ds(Rational(3)), SheafSpace::Ds(Rational(2))));
    REQUIRE(includes(SheafSpace::Dprime(), SheafSpace::Ds(Rational(2))));
    REQUIRE(includes(SheafSpace::Ds(Rational(2)), SheafSpace::Ds_beurling(Rational(2))));
    REQUIRE(includes(SheafSpace::Ds(Rational(2)), SheafSpace::B()));
    // Sobolev scale
    REQUIRE(includes(SheafSpace::H(Rational(2)), SheafSpace::H(Rational(-1))));
    REQUIRE(includes(SheafSpace::Cinf(), SheafSpace::H(Rational(7))));
    REQUIRE(includes(SheafSpace::L2(), SheafSpace::Dprime()));
    REQUIRE(SheafSpace::L2() == SheafSpace::H(Rational(0)));
}

TEST_CASE("includes is a partial order on random descriptors") {
    std::mt19937 rng(3);
    std::vector<SheafSpace> pool;
    for (int k = 0; k < 40; ++k) pool.push_back(rand_space(rng));
    for (const auto& a : pool) REQUIRE(includes(a, a));
    for (const auto& a : pool)
        for (const auto& b : pool) {
            if (includes(a, b) && includes(b, a)) REQUIRE(a == b);
            for (const auto& c : pool)
                if (includes(a, b) && includes(b, c)) REQUIRE(includes(a, c));
        }
}

TEST_CASE("canonical text forms round-trip") {
    for (const char* text : {"Cw", "G{2}", "G{3/2}", "G({2})", "Cinf", "H{-1}", "H{5/2}", "L2",
                             "D'", "D'{2}", "D'({3})", "B"}) {
        SheafSpace s = parse_space(text);
        REQUIRE(parse_space(s.to_string()) == s);
    }
    REQUIRE(parse_space("G{1}") == SheafSpace::Cw());
    REQUIRE(parse_space("H{0}") == SheafSpace::L2());
    REQUIRE_THROWS_AS(parse_space("G{1/2}"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_space("D'{1}"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_space("nonsense"), std::invalid_argument);
}

TEST_CASE("interval algebra") {
    Interval a = Interval::at_least(Rational(2));
    REQUIRE(a.contains(Rational(2)));
    REQUIRE_FALSE(Interval::greater_than(Rational(2)).contains(Rational(2)));
    Interval b = Interval::open(Rational(1), Rational(2));
    REQUIRE(b.intersect(a).empty);
    REQUIRE(b.merges_with(a));  // (1,2) touching [2, inf)
    Interval m = b.merge(a);
    REQUIRE(m == Interval::greater_than(Rational(1)));
    REQUIRE(Interval::closed(Rational(2), Rational(3)).subset_of(a));
    REQUIRE_FALSE(a.subset_of(Interval::closed(Rational(2), Rational(3))));
    Interval okaji = Interval::left_open(Rational(1), Rational(4, 1));
    REQUIRE(okaji.contains(Rational(4)));
    REQUIRE_FALSE(okaji.contains(Rational(1)));
}

TEST_CASE("interval sets normalize unions") {
    IntervalSet s;
    s.add(Interval::open(Rational(1), Rational(2)));
    s.add(Interval::at_least(Rational(2)));
    REQUIRE(s.parts.size() == 1);
    REQUIRE(s.parts[0] == Interval::greater_than(Rational(1)));
    s.add(Interval::point(Rational(0)));
    REQUIRE(s.parts.size() == 2);
    // insertion order independence
    IntervalSet t;
    t.add(Interval::point(Rational(0)));
    t.add(Interval::at_least(Rational(2)));
    t.add(Interval::open(Rational(1), Rational(2)));
    REQUIRE(s == t);
}

TEST_CASE("compose and restrict on concrete facts") {
    HypoFact f1;
    f1.id = 1;
    f1.op = "P";
    f1.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::G(Rational(2)))};
    HypoFact f2;
    f2.id = 2;
    f2.op = "P";
    f2.slots = {SpaceSlot::fixed(SheafSpace::G(Rational(2))), SpaceSlot::fixed(SheafSpace::Cw())};
    HypoFact comp = compose_hypo(f1, f2);
    REQUIRE(comp.slots[0].space == SheafSpace::Dprime());
    REQUIRE(comp.slots[1].space == SheafSpace::Cw());
    REQUIRE(comp.prov.premises == std::vector<int>{1, 2});

    // middle mismatch
    HypoFact f3 = f2;
    f3.slots[0] = SpaceSlot::fixed(SheafSpace::G(Rational(3)));
    REQUIRE_THROWS_AS(compose_hypo(f1, f3), std::invalid_argument);

    // restriction: h(B, Cw) restricted to D'
    HypoFact g;
    g.id = 4;
    g.op = "P";
    g.slots = {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::fixed(SheafSpace::Cw())};
    HypoFact r = restrict_hypo(g, SheafSpace::Dprime());
    REQUIRE(r.slots[0].space == SheafSpace::Dprime());
    // L2 also lies between Cw and B
    REQUIRE(restrict_hypo(g, SheafSpace::L2()).slots[0].space == SheafSpace::L2());

    // h(D', Cinf) restricted to L2
    HypoFact h;
    h.id = 5;
    h.op = "P";
    h.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::fixed(SheafSpace::Cinf())};
    REQUIRE(restrict_hypo(h, SheafSpace::L2()).slots[0].space == SheafSpace::L2());
    // lattice violation: B is not contained in D'
    REQUIRE_THROWS_AS(restrict_hypo(h, SheafSpace::B()), std::invalid_argument);
}

TEST_CASE("fact support: parameterized facts answer concrete questions") {
    HypoFact bg;
    bg.op = "bg";
    bg.holds = true;
    bg.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
    bg.s_range = Interval::at_least(Rational(2));

    REQUIRE(fact_supports(bg, parse_question("bg", "h(D', G{2})"), true));
    REQUIRE(fact_supports(bg, parse_question("bg", "h(D', G{3})"), true));
    REQUIRE_FALSE(fact_supports(bg, parse_question("bg", "h(D', G{3/2})"), true));
    // restriction in the first slot comes for free
    REQUIRE(fact_supports(bg, parse_question("bg", "h(Cinf, G{2})"), true));
    REQUIRE(fact_supports(bg, parse_question("bg", "h(G{3}, G{2})"), true));
    REQUIRE_FALSE(fact_supports(bg, parse_question("bg", "h(D'{2}, G{2})"), true));

    // negative fact: fails h(D', G^s) on (1,2) propagates contrapositively
    HypoFact neg = bg;
    neg.holds = false;
    neg.s_range = Interval::open(Rational(1), Rational(2));
    REQUIRE(fact_supports(neg, parse_question("bg", "h(D', G{3/2})"), false));
    REQUIRE(fact_supports(neg, parse_question("bg", "h(D'{2}, G{3/2})"), false));  // D' < D'_2
    REQUIRE_FALSE(fact_supports(neg, parse_question("bg", "h(Cinf, G{3/2})"), false));
    REQUIRE_FALSE(fact_supports(neg, parse_question("bg", "h(D', G{2})"), false));
}

TEST_CASE("fact support: two-parameter families") {
    // h(D'_s, D'_r) for r > s, s >= 2
    HypoFact f;
    f.op = "P";
    f.slots = {SpaceSlot::s(SpaceTag::UltraRoumieu), SpaceSlot::r(SpaceTag::UltraRoumieu)};
    f.s_range = Interval::at_least(Rational(2));
    f.r_rel = RRel::GreaterThanS;

    REQUIRE(fact_supports(f, parse_question("P", "h(D'{2}, D'{3})"), true));
    REQUIRE(fact_supports(f, parse_question("P", "h(D'{5/2}, D'{3})"), true));
    REQUIRE_FALSE(fact_supports(f, parse_question("P", "h(D'{2}, D'{2})"), true));
    REQUIRE_FALSE(fact_supports(f, parse_question("P", "h(D'{3}, D'{2})"), true));
    // F-side restriction: D'_3 < D'_2, so h(D'_3, D'_4) follows from s = 2... and also s = 3
    REQUIRE(fact_supports(f, parse_question("P", "h(D'{3}, D'{4})"), true));
}

TEST_CASE("fact support: Sobolev shift families") {
    // h(H^{r}, H^{r+2}, Cinf) for all integer shifts of step 2 from (0, 2)
    HypoFact f;
    f.op = "P";
    f.slots = {SpaceSlot::fixed(SheafSpace::H(Rational(0))),
               SpaceSlot::fixed(SheafSpace::H(Rational(2))),
               SpaceSlot::fixed(SheafSpace::Cinf())};
    f.shift_step = Rational(2);
    REQUIRE(fact_supports(f, parse_question("P", "h(L2, H{2}, Cinf)"), true));
    REQUIRE(fact_supports(f, parse_question("P", "h(H{4}, H{6}, Cinf)"), true));
    REQUIRE(fact_supports(f, parse_question("P", "h(H{-2}, L2, Cinf)"), true));
    REQUIRE_FALSE(fact_supports(f, parse_question("P", "h(H{1}, H{3}, Cinf)"), true));
    // triple monotonicity at a fixed shift: h(H^0, H^1, Cinf) is weaker
    REQUIRE(fact_supports(f, parse_question("P", "h(L2, H{1}, Cinf)"), true));
}

TEST_CASE("region extraction matches the seeded thresholds") {
    std::vector<HypoFact> facts;
    HypoFact bg;
    bg.op = "bg";
    bg.holds = true;
    bg.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
    bg.s_range = Interval::at_least(Rational(2));
    facts.push_back(bg);
    HypoFact neg = bg;
    neg.holds = false;
    neg.s_range = Interval::open(Rational(1), Rational(2));
    facts.push_back(neg);

    RegionQuestion rq;
    rq.op = "bg";
    rq.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
    IntervalSet holds = region_of(facts, rq, true);
    IntervalSet fails = region_of(facts, rq, false);
    REQUIRE(holds.parts.size() == 1);
    REQUIRE(holds.parts[0] == Interval::at_least(Rational(2)));
    REQUIRE(fails.parts.size() == 1);
    REQUIRE(fails.parts[0] == Interval::open(Rational(1), Rational(2)));
}

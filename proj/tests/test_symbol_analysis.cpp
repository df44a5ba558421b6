#include "hypoel/parser.hpp"
#include "hypoel/symbol.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hypoel;

namespace {
SamplerSettings quick(unsigned res = 4, size_t sphere = 1024) {
    SamplerSettings s;
    s.resolution = res;
    s.sphere_points = sphere;
    return s;
}
}  // namespace

TEST_CASE("principal symbol of the Laplacian is -(xi^2 + eta^2)") {
    SymbolPoly p = principal_symbol(parse_operator("Dx^2 + Dy^2"));
    REQUIRE(p.degree == 2);
    REQUIRE(p.xi_terms.size() == 2);
    for (const auto& [mi, c] : p.xi_terms)
        REQUIRE(c.as_polynomial()->constant_value() == GRat(-1));
}

TEST_CASE("principal symbol of Baouendi-Goulaouic") {
    SymbolPoly p = principal_symbol(parse_operator("Dt^2 + t^2*Dx1^2 + Dx2^2"));
    // -(tau^2 + t^2 xi1^2 + xi2^2): check at an exact point
    std::vector<GRat> x{GRat(2), GRat(0), GRat(0)};
    std::vector<GRat> xi{GRat(1), GRat(1), GRat(1)};
    REQUIRE(*p.eval_exact(x, xi) == GRat(-(1 + 4 + 1)));
}

TEST_CASE("principal symbol of the heat operator drops the time term") {
    SymbolPoly p = principal_symbol(parse_operator("Dt - Dx^2 - Dy^2"));
    REQUIRE(p.degree == 2);
    std::vector<GRat> x{GRat(0), GRat(0), GRat(0)};
    std::vector<GRat> xi{GRat(0), GRat(2), GRat(3)};
    REQUIRE(*p.eval_exact(x, xi) == GRat(13));  // +(xi^2 + eta^2) by the i^2 convention
}

TEST_CASE("symbol homogeneity is exact under rational scaling") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> cd(-3, 3);
    DiffOperator P = parse_operator("Dt^2 + t^2*Dx1^2 + Dx2^2");
    SymbolPoly p = principal_symbol(P);
    for (int round = 0; round < 20; ++round) {
        std::vector<GRat> x{GRat(Rational(cd(rng))), GRat(Rational(cd(rng))), GRat(Rational(cd(rng)))};
        std::vector<GRat> xi{GRat(Rational(cd(rng))), GRat(Rational(cd(rng))), GRat(Rational(cd(rng)))};
        Rational lambda(cd(rng) == 0 ? 2 : cd(rng), 3);
        std::vector<GRat> sxi(xi);
        for (auto& v : sxi) v *= GRat(lambda);
        GRat lhs = *p.eval_exact(x, sxi);
        GRat rhs = grat_pow(GRat(lambda), p.degree) * (*p.eval_exact(x, xi));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("Laplacian is elliptic with margin 1") {
    auto rep = is_elliptic(parse_operator("Dx^2 + Dy^2"), RegionBox::unit_box(2), quick());
    REQUIRE(rep.verdict == EllipticVerdict::elliptic);
    REQUIRE(rep.margin == Catch::Approx(1.0));
}

TEST_CASE("heat operator is not elliptic, witness along the time direction") {
    auto rep = is_elliptic(parse_operator("Dt - Dx^2 - Dy^2"), RegionBox::unit_box(3), quick(2, 512));
    REQUIRE(rep.verdict == EllipticVerdict::not_elliptic);
    REQUIRE_FALSE(rep.witness_xi_exact.empty());
    REQUIRE(rep.witness_xi_exact[1] == 0);
    REQUIRE(rep.witness_xi_exact[2] == 0);
    REQUIRE((rep.witness_xi_exact[0] == 1 || rep.witness_xi_exact[0] == -1));
}

TEST_CASE("Mizohata operator is elliptic away from x = 0") {
    DiffOperator L1 = parse_operator("Dx + i*x*Dy");
    RegionBox box;
    box.bounds = {{Rational(1, 2), Rational(1)}, {Rational(-1), Rational(1)}};
    auto rep = is_elliptic(L1, box, quick());
    REQUIRE(rep.verdict == EllipticVerdict::elliptic);
    // and certified non-elliptic on a box spanning x = 0
    auto rep0 = is_elliptic(L1, RegionBox::unit_box(2), quick());
    REQUIRE(rep0.verdict == EllipticVerdict::not_elliptic);
}

TEST_CASE("is_elliptic rejects an empty region") {
    RegionBox bad;
    REQUIRE_THROWS_AS(is_elliptic(parse_operator("Dx^2"), bad, quick()), std::invalid_argument);
}

TEST_CASE("characteristic set of an elliptic operator is empty") {
    auto cs = characteristic_set_sample(parse_operator("Dx^2 + Dy^2"), RegionBox::unit_box(2),
                                        quick(4, 2048));
    REQUIRE(cs.points.empty());
}

TEST_CASE("characteristic set of Mizohata clusters at x = 0, xi = 0") {
    SamplerSettings s = quick(8, 4096);
    s.tol = 1e-2;  // sampling proxy: grid points rarely hit the zero set exactly
    auto cs = characteristic_set_sample(parse_operator("Dx + i*x^2*Dy"), RegionBox::unit_box(2), s);
    REQUIRE_FALSE(cs.points.empty());
    for (const auto& pt : cs.points) {
        REQUIRE(std::abs(pt.xi[0]) < 0.05);                  // xi component small
        REQUIRE(std::abs(std::abs(pt.xi[1]) - 1.0) < 0.05);  // eta near +-1
        REQUIRE(std::abs(pt.x[0]) < 0.35);                   // x near 0
    }
}

TEST_CASE("characteristic set of Baouendi-Goulaouic respects the tube containment") {
    SamplerSettings s = quick(4, 2048);
    s.tol = 1e-2;
    DiffOperator bg = parse_operator("Dt^2 + t^2*Dx1^2 + Dx2^2");
    auto cs = characteristic_set_sample(bg, RegionBox::unit_box(3), s);
    REQUIRE_FALSE(cs.points.empty());
    for (const auto& pt : cs.points) {
        REQUIRE(std::abs(pt.xi[0]) < 0.11);  // tau ~ 0
        REQUIRE(std::abs(pt.x[0]) < 0.15);   // t ~ 0
        double xi_group = std::hypot(pt.xi[1], pt.xi[2]);
        REQUIRE(xi_group > 0.9);             // xi-group bounded away from zero
    }
}

TEST_CASE("tube decomposition of Baouendi-Goulaouic") {
    DiffOperator bg = parse_operator("Dt^2 + t^2*Dx1^2 + Dx2^2");
    auto tube = tube_decompose(bg, {"t"}, std::nullopt, quick(4, 64));
    REQUIRE(tube.has_value());
    REQUIRE(tube->p0 == parse_operator("Dt^2"));
    REQUIRE(tube->p0_elliptic);
    REQUIRE(tube->same_order);
    REQUIRE(tube->guards_satisfied());
}

TEST_CASE("tube decomposition of Mizohata along its x variable") {
    DiffOperator L2 = parse_operator("Dx + i*x^2*Dy");
    auto tube = tube_decompose(L2, {"x"}, std::nullopt, quick(4, 64));
    REQUIRE(tube.has_value());
    REQUIRE(tube->p0 == parse_operator("Dx"));
    REQUIRE(tube->guards_satisfied());
}

TEST_CASE("tube decomposition fails for the wrong split") {
    DiffOperator p = parse_operator("Dx + x*Dy");
    auto tube = tube_decompose(p, {"y"}, std::nullopt, quick(2, 16));
    REQUIRE_FALSE(tube.has_value());
}

TEST_CASE("tube guard soundness: no characteristic point with vanishing xi-group") {
    SamplerSettings s = quick(4, 2048);
    s.tol = 1e-6;
    DiffOperator bg = parse_operator("Dt^2 + t^2*Dx1^2 + Dx2^2");
    auto tube = tube_decompose(bg, {"t"}, std::nullopt, quick(4, 64));
    REQUIRE(tube->guards_satisfied());
    auto cs = characteristic_set_sample(bg, RegionBox::unit_box(3), s);
    for (const auto& pt : cs.points) {
        double xi_group = std::hypot(pt.xi[1], pt.xi[2]);
        REQUIRE(xi_group > s.tol);
    }
}

TEST_CASE("monotone refinement: finer grids never increase the sampled minimum") {
    DiffOperator heat = parse_operator("Dt - Dx^2 - Dy^2");
    SymbolPoly p = principal_symbol(heat);
    RegionBox box = RegionBox::unit_box(3);
    auto raw_min = [&](unsigned res, size_t sphere) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& x : elliptic_detail::region_grid(box, res))
            for (size_t k = 0; k < sphere; ++k)
                m = std::min(m, std::abs(p.eval(x, sphere_point(3, k))));
        return m;
    };
    REQUIRE(raw_min(4, 1024) <= raw_min(2, 512));
    REQUIRE(raw_min(8, 2048) <= raw_min(4, 1024));
}

TEST_CASE("nondegenerate_at decides exactly") {
    std::vector<GRat> origin1{GRat(0)};
    std::vector<GRat> anywhere{GRat(Rational(7, 3))};
    REQUIRE(nondegenerate_at(parse_operator("Dx^2 + Dy^2"), std::vector<GRat>{GRat(0), GRat(0)}));
    REQUIRE_FALSE(nondegenerate_at(parse_operator("x*Dx + 1"), origin1));
    REQUIRE(nondegenerate_at(parse_operator("x*Dx + 1"), anywhere));
    REQUIRE_FALSE(nondegenerate_at(parse_operator("x^3*Dx - 2"), origin1));
    // Lewy operator does not degenerate at the origin
    DiffOperator lewy = parse_operator("(1/2)*Dx + (1/2)*i*Dy + y*Dw - i*x*Dw");
    std::vector<GRat> origin3{GRat(0), GRat(0), GRat(0)};
    REQUIRE(nondegenerate_at(lewy, origin3));
}

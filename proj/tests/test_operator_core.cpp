#include "hypoel/parser.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hypoel;

namespace {

DiffOperator rand_operator(std::mt19937& rng, int nvars, unsigned maxord, unsigned maxdeg) {
    std::uniform_int_distribution<int> nt(1, 4);
    std::uniform_int_distribution<int> cd(-4, 4);
    std::uniform_int_distribution<unsigned> od(0, maxord);
    std::uniform_int_distribution<unsigned> ed(0, maxdeg);
    std::vector<std::string> vars;
    for (int v = 0; v < nvars; ++v) vars.push_back("x" + std::to_string(v + 1));
    DiffOperator p(vars);
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
        MultiIndex alpha(nvars, 0);
        unsigned budget = od(rng);
        for (int v = 0; v < nvars && budget; ++v) {
            std::uniform_int_distribution<unsigned> part(0, budget);
            alpha[v] = part(rng);
            budget -= alpha[v];
        }
        Polynomial c(nvars);
        MultiIndex m(nvars, 0);
        for (int v = 0; v < nvars; ++v) m[v] = ed(rng);
        c += Polynomial::monomial(nvars, m, GRat(Rational(cd(rng))));
        p.add_term(alpha, CoeffExpr(c));
    }
    p.prune();
    return p;
}

}  // namespace

TEST_CASE("parse: 2-D Laplacian") {
    DiffOperator p = parse_operator("Dx^2 + Dy^2");
    REQUIRE(p.dim() == 2);
    REQUIRE(p.order() == 2);
    REQUIRE(p.terms().size() == 2);
}

TEST_CASE("parse: Baouendi-Goulaouic operator") {
    DiffOperator q = parse_operator("Dt^2 + t^2*Dx1^2 + Dx2^2");
    REQUIRE(q.dim() == 3);
    REQUIRE(q.order() == 2);
    REQUIRE(q.variables() == std::vector<std::string>{"t", "x1", "x2"});
    MultiIndex dx1(3, 0);
    dx1[1] = 2;
    Polynomial t2 = Polynomial::variable(3, 0).pow(2);
    REQUIRE(*q.coefficient(dx1).as_polynomial() == t2);
}

TEST_CASE("parse: Komatsu family member x^3*Dx - 2") {
    DiffOperator p = parse_operator("x^3*Dx - 2");
    REQUIRE(p.dim() == 1);
    REQUIRE(p.order() == 1);
    MultiIndex d1{1};
    REQUIRE(*p.coefficient(d1).as_polynomial() == Polynomial::variable(1, 0).pow(3));
    MultiIndex d0{0};
    REQUIRE(p.coefficient(d0).as_polynomial()->constant_value() == GRat(-2));
}

TEST_CASE("parse errors carry positions") {
    REQUIRE_THROWS_AS(parse_operator("Dx +"), ParseError);
    REQUIRE_THROWS_AS(parse_operator("1.5*Dx"), ParseError);
    REQUIRE_THROWS_AS(parse_operator("Dx^2 + Dy", std::vector<std::string>{"x"}), ParseError);
}

TEST_CASE("parse-print roundtrip on canonical forms") {
    for (const char* text : {"Dx^2 + Dy^2", "Dt^2 + t^2*Dx1^2 + Dx2^2", "x^3*Dx - 2",
                             "Dx + i*x^2*Dy", "(1/2)*Dx + y*Dw - i*x*Dw"}) {
        DiffOperator p = parse_operator(text);
        DiffOperator q = parse_operator(p.to_string());
        REQUIRE(p == q);
        REQUIRE(p.to_string() == q.to_string());
    }
}

TEST_CASE("parse-print roundtrip on random operators") {
    std::mt19937 rng(11);
    for (int round = 0; round < 40; ++round) {
        DiffOperator p = rand_operator(rng, 2, 3, 2);
        // ambient variable list is context; the printer may not mention every variable
        DiffOperator q = parse_operator(p.to_string(), p.variables());
        REQUIRE(p == q);
    }
}

TEST_CASE("operator composition follows Leibniz") {
    // Dx * x as composition: d/dx (x u) = x u' + u
    DiffOperator p = parse_operator("Dx*x");
    DiffOperator expected = parse_operator("x*Dx + 1");
    REQUIRE(p == expected);
}

TEST_CASE("transpose of the Lewy operator is -L") {
    DiffOperator lewy = parse_operator("(1/2)*Dx + (1/2)*i*Dy + y*Dw - i*x*Dw");
    REQUIRE(lewy.transpose() == GRat(-1) * lewy);
}

TEST_CASE("transpose of constant-coefficient operators flips odd orders") {
    DiffOperator p = parse_operator("Dx^3 + 2*Dx^2 + Dx + 5");
    DiffOperator expected = parse_operator("-Dx^3 + 2*Dx^2 - Dx + 5");
    REQUIRE(p.transpose() == expected);
}

TEST_CASE("transpose of x*Dx + 1 is -x*Dx") {
    DiffOperator p = parse_operator("x*Dx + 1");
    REQUIRE(p.transpose() == parse_operator("-x*Dx"));
}

TEST_CASE("transpose is an involution") {
    std::mt19937 rng(23);
    for (int round = 0; round < 40; ++round) {
        DiffOperator p = rand_operator(rng, 2, 3, 2);
        REQUIRE(p.transpose().transpose() == p);
    }
}

TEST_CASE("apply: Laplacian of x^2+y^2 is 4") {
    DiffOperator lap = parse_operator("Dx^2 + Dy^2");
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    CoeffExpr f(x * x + y * y);
    CoeffExpr out = lap.apply(f);
    REQUIRE(out.is_polynomial());
    REQUIRE(out.as_polynomial()->constant_value() == GRat(4));
}

TEST_CASE("apply: P_1 annihilates exp(-1/x)") {
    DiffOperator p1 = parse_operator("x^2*Dx - 1");
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr f = CoeffExpr::exp(RationalFunction(Polynomial(1, GRat(-1)), x));
    REQUIRE(p1.apply(f).is_zero());
}

TEST_CASE("apply: Dx applied to x*y gives y") {
    DiffOperator dx = parse_operator("Dx + 0*Dy");
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    CoeffExpr out = dx.apply(CoeffExpr(x * y));
    REQUIRE(*out.as_polynomial() == y);
}

TEST_CASE("apply is linear") {
    std::mt19937 rng(37);
    std::uniform_int_distribution<int> cd(-3, 3);
    for (int round = 0; round < 20; ++round) {
        DiffOperator p = rand_operator(rng, 2, 2, 2);
        Polynomial f(2), g(2);
        for (int t = 0; t < 3; ++t) {
            MultiIndex m(2, 0);
            m[0] = static_cast<unsigned>(std::abs(cd(rng)));
            m[1] = static_cast<unsigned>(std::abs(cd(rng)));
            f += Polynomial::monomial(2, m, GRat(Rational(cd(rng))));
            std::swap(m[0], m[1]);
            g += Polynomial::monomial(2, m, GRat(Rational(cd(rng))));
        }
        CoeffExpr lhs = p.apply(CoeffExpr(f) + CoeffExpr(g));
        CoeffExpr rhs = p.apply(CoeffExpr(f)) + p.apply(CoeffExpr(g));
        REQUIRE((lhs - rhs).is_zero());
    }
}

TEST_CASE("commutes: constant coefficient operators") {
    DiffOperator p = parse_operator("Dx^2 + 3*Dy");
    DiffOperator q = parse_operator("Dx*Dy + 0*Dx");
    REQUIRE(commutes(p, q));
}

TEST_CASE("commutes: tube vector field with its elliptic companion") {
    // L = Dx + a(x) Dy with a = i x^2;  Q = M Dy^2 + L^2 commutes with L
    DiffOperator L = parse_operator("Dx + i*x^2*Dy");
    DiffOperator Q = parse_operator("2*Dy^2 + (Dx + i*x^2*Dy)^2");
    REQUIRE(commutes(L, Q));
}

TEST_CASE("commutes: Dx and x*Dx do not commute") {
    DiffOperator a = parse_operator("Dx");
    DiffOperator b = parse_operator("x*Dx");
    REQUIRE_FALSE(commutes(a, b));
    // the commutator is Dx itself
    DiffOperator c = compose(a, b) - compose(b, a);
    REQUIRE(c == parse_operator("Dx"));
}

TEST_CASE("commutes agrees with the apply-based oracle") {
    std::mt19937 rng(51);
    for (int round = 0; round < 15; ++round) {
        DiffOperator p = rand_operator(rng, 2, 2, 1);
        DiffOperator q = rand_operator(rng, 2, 2, 1);
        bool direct = commutes(p, q);
        // oracle: compare P(Qf) with Q(Pf) on a monomial basis of high enough degree
        unsigned deg = p.order() + q.order() + 4;
        bool oracle = true;
        for (unsigned a = 0; a <= deg && oracle; ++a)
            for (unsigned b = 0; a + b <= deg && oracle; ++b) {
                Polynomial f = Polynomial::monomial(2, MultiIndex{a, b}, GRat(1));
                CoeffExpr lhs = p.apply(q.apply(CoeffExpr(f)));
                CoeffExpr rhs = q.apply(p.apply(CoeffExpr(f)));
                if (!(lhs - rhs).is_zero()) oracle = false;
            }
        REQUIRE(direct == oracle);
    }
}

TEST_CASE("vector fields reject higher-order terms") {
    REQUIRE_THROWS_AS(VectorField(parse_operator("Dx^2")), std::invalid_argument);
    REQUIRE_THROWS_AS(VectorField(parse_operator("Dx + 1")), std::invalid_argument);
    REQUIRE_NOTHROW(VectorField(parse_operator("Dx + x*Dy")));
}

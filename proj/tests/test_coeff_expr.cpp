#include "hypoel/coeff_expr.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hypoel;

namespace {
RationalFunction rf(const Polynomial& p) { return RationalFunction(p); }
}  // namespace

TEST_CASE("derivative of exp(-1/x) stays in the atom algebra") {
    Polynomial x = Polynomial::variable(1, 0);
    RationalFunction minus_inv_x(Polynomial(1, GRat(-1)), x);
    CoeffExpr f = CoeffExpr::exp(minus_inv_x);
    CoeffExpr df = f.derivative(0);
    // d/dx exp(-1/x) = (1/x^2) exp(-1/x)
    CoeffExpr expected = CoeffExpr(RationalFunction(Polynomial(1, GRat(1)), x * x)) * f;
    REQUIRE((df - expected).is_zero());
}

TEST_CASE("sin/cos derivatives and the Pythagorean combination") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr s = CoeffExpr::sin(rf(x));
    CoeffExpr c = CoeffExpr::cos(rf(x));
    REQUIRE((s.derivative(0) - c).is_zero());
    REQUIRE((c.derivative(0) + s).is_zero());
    // sin^2 + cos^2 = 1 resolves to zero through the exponential expansion
    CoeffExpr one(1, GRat(1));
    REQUIRE((s * s + c * c - one).is_zero());
    // sin(2x) = 2 sin x cos x
    CoeffExpr s2 = CoeffExpr::sin(rf(GRat(2) * x));
    REQUIRE((s2 - GRat(2) * (s * c)).is_zero());
}

TEST_CASE("fractional powers fold integer parts and merge") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr a = CoeffExpr::pow(rf(x), Rational(3, 2));
    CoeffExpr b = CoeffExpr::pow(rf(x), Rational(1, 2));
    // x^{3/2} * x^{1/2} = x^2
    CoeffExpr prod = a * b;
    REQUIRE(prod.is_polynomial());
    REQUIRE(*prod.as_polynomial() == x * x);
    // d/dx x^{1/2} = (1/2) x^{-1/2}
    CoeffExpr db = b.derivative(0);
    CoeffExpr expected = CoeffExpr(RationalFunction(Polynomial(1, GRat(Rational(1, 2))), x)) * b;
    REQUIRE((db - expected).is_zero());
}

TEST_CASE("taylor expansion of polynomial data matches binomial shift") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr p = CoeffExpr(x.pow(3));
    UnitSeries ts = p.taylor(GRat(1), 5);
    REQUIRE(ts.parts.size() == 1);
    const auto& s = ts.parts.begin()->second;
    // (1+h)^3 = 1 + 3h + 3h^2 + h^3
    REQUIRE(s[0] == GRat(1));
    REQUIRE(s[1] == GRat(3));
    REQUIRE(s[2] == GRat(3));
    REQUIRE(s[3] == GRat(1));
    REQUIRE(ts.coeff_is_zero(4));
}

TEST_CASE("taylor of sin at 0 has rational coefficients") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr s = CoeffExpr::sin(rf(x));
    UnitSeries ts = s.taylor(GRat(0), 5);
    REQUIRE(ts.parts.size() == 1);
    REQUIRE(ts.parts.begin()->first.trivial());
    const auto& c = ts.parts.begin()->second;
    REQUIRE(c[0] == GRat(0));
    REQUIRE(c[1] == GRat(1));
    REQUIRE(c[2] == GRat(0));
    REQUIRE(c[3] == GRat(Rational(-1, 6)));
    REQUIRE(c[5] == GRat(Rational(1, 120)));
}

TEST_CASE("taylor of exp away from 0 keeps the transcendental unit") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr e = CoeffExpr::exp(rf(x));
    UnitSeries ts = e.taylor(GRat(1), 3);
    REQUIRE(ts.parts.size() == 1);
    const UnitKey& k = ts.parts.begin()->first;
    REQUIRE(k.exp_arg == GRat(1));
    const auto& c = ts.parts.begin()->second;
    REQUIRE(c[0] == GRat(1));
    REQUIRE(c[2] == GRat(Rational(1, 2)));
    REQUIRE_FALSE(ts.coeff_is_zero(0));
}

TEST_CASE("exact unit evaluation decides zero at points") {
    Polynomial x = Polynomial::variable(1, 0);
    // sin(x) - sin(x) == 0 anywhere
    CoeffExpr z = CoeffExpr::sin(rf(x)) - CoeffExpr::sin(rf(x));
    std::array<GRat, 1> pt{GRat(Rational(2, 3))};
    REQUIRE(z.is_zero_at(std::span<const GRat>(pt)));
    // sin at a nonzero rational point is provably nonzero
    CoeffExpr s = CoeffExpr::sin(rf(x));
    REQUIRE_FALSE(s.is_zero_at(std::span<const GRat>(pt)));
    std::array<GRat, 1> origin{GRat(0)};
    REQUIRE(s.is_zero_at(std::span<const GRat>(origin)));
    // exp never vanishes
    CoeffExpr e = CoeffExpr::exp(rf(x));
    REQUIRE_FALSE(e.is_zero_at(std::span<const GRat>(pt)));
}

TEST_CASE("numeric evaluation agrees with std functions") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr f = CoeffExpr::exp(rf(x)) * CoeffExpr::cos(rf(x)) + CoeffExpr(x);
    std::array<std::complex<double>, 1> pt{std::complex<double>(0.7, 0.0)};
    double expected = std::exp(0.7) * std::cos(0.7) + 0.7;
    REQUIRE(f.eval(std::span<const std::complex<double>>(pt)).real() == Catch::Approx(expected));
}

TEST_CASE("taylor rejects fractional power of a vanishing base") {
    Polynomial x = Polynomial::variable(1, 0);
    CoeffExpr h = CoeffExpr::pow(rf(x), Rational(1, 2));
    REQUIRE_THROWS_AS(h.taylor(GRat(0), 3), std::domain_error);
}

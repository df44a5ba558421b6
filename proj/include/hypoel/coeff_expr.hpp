#pragma once

#include "hypoel/polynomial.hpp"

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypoel {

// Quotient of polynomials. Denominators are kept monic w.r.t. their
// lexicographically largest monomial so syntactic comparison is stable;
// no multivariate GCD is attempted (univariate quotients are reduced).
struct RationalFunction {
    Polynomial num;
    Polynomial den;

    RationalFunction() = default;
    explicit RationalFunction(Polynomial n) : num(std::move(n)), den(num.nvars(), GRat(1)) {}
    RationalFunction(Polynomial n, Polynomial d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
        normalize();
    }

    int nvars() const { return num.nvars(); }
    bool is_zero() const { return num.is_zero(); }
    bool is_polynomial() const { return den.is_constant(); }

    static RationalFunction constant(int nvars, const GRat& c) {
        return RationalFunction(Polynomial(nvars, c));
    }

    RationalFunction operator-() const {
        RationalFunction r;
        r.num = -num;
        r.den = den;
        return r;
    }
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.den == b.den) return RationalFunction(a.num + b.num, a.den);
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num * b.num, a.den * b.den);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
        return RationalFunction(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return (a.num * b.den) == (b.num * a.den);
    }
    friend bool operator<(const RationalFunction& a, const RationalFunction& b) {
        // syntactic order on the normalized representation (total, not semantic)
        auto key = [](const RationalFunction& r) {
            std::vector<std::pair<MultiIndex, GRat>> k(r.num.terms().begin(), r.num.terms().end());
            for (const auto& t : r.den.terms()) k.emplace_back(t);
            return k;
        };
        return key(a) < key(b);
    }

    RationalFunction derivative(int var) const {
        if (is_polynomial()) {
            RationalFunction r(num.derivative(var));
            if (!den.is_constant()) throw std::logic_error("unreachable");
            r.num = r.num * Polynomial(num.nvars(), GRat(1) / den.constant_value());
            return r;
        }
        return RationalFunction(num.derivative(var) * den - num * den.derivative(var), den * den);
    }

    GRat eval(std::span<const GRat> p) const {
        GRat d = den.eval(p);
        if (d.is_zero()) throw std::domain_error("RationalFunction: pole at evaluation point");
        return num.eval(p) / d;
    }
    std::complex<double> eval(std::span<const std::complex<double>> p) const {
        return num.eval(p) / den.eval(p);
    }

    bool depends_only_on(const std::vector<int>& vars) const {
        return num.depends_only_on(vars) && den.depends_only_on(vars);
    }

    RationalFunction pow_int(long e) const {
        if (e >= 0) return RationalFunction(num.pow(static_cast<unsigned>(e)), den.pow(static_cast<unsigned>(e)));
        if (num.is_zero()) throw std::domain_error("RationalFunction: 0 to negative power");
        return RationalFunction(den.pow(static_cast<unsigned>(-e)), num.pow(static_cast<unsigned>(-e)));
    }

    std::string to_string(std::span<const std::string> names) const {
        if (is_polynomial()) {
            Polynomial p = (GRat(1) / den.constant_value()) * num;
            return p.to_string(names);
        }
        return "(" + num.to_string(names) + ")/(" + den.to_string(names) + ")";
    }

private:
    void normalize() {
        if (num.is_zero()) {
            den = Polynomial(den.nvars(), GRat(1));
            return;
        }
        if (den.is_constant()) {
            num = (GRat(1) / den.constant_value()) * num;
            den = Polynomial(den.nvars(), GRat(1));
            return;
        }
        if (nvars() == 1) reduce_univariate();
        GRat lead = den.terms().rbegin()->second;
        if (!lead.is_one()) {
            GRat inv = GRat(1) / lead;
            num = inv * num;
            den = inv * den;
        }
    }

    void reduce_univariate() {
        auto gcd = [](std::vector<GRat> a, std::vector<GRat> b) {
            auto deg = [](const std::vector<GRat>& p) {
                int d = static_cast<int>(p.size()) - 1;
                while (d >= 0 && p[static_cast<size_t>(d)].is_zero()) --d;
                return d;
            };
            while (deg(b) >= 0) {
                int da = deg(a), db = deg(b);
                if (da < db) {
                    std::swap(a, b);
                    continue;
                }
                GRat f = a[static_cast<size_t>(da)] / b[static_cast<size_t>(db)];
                for (int k = 0; k <= db; ++k)
                    a[static_cast<size_t>(k + da - db)] -= f * b[static_cast<size_t>(k)];
                a.resize(static_cast<size_t>(std::max(deg(a) + 1, 0)));
                if (static_cast<int>(a.size()) - 1 < db) std::swap(a, b);
            }
            return a;
        };
        std::vector<GRat> g = gcd(to_dense_univariate(num), to_dense_univariate(den));
        int dg = static_cast<int>(g.size()) - 1;
        while (dg >= 0 && g[static_cast<size_t>(dg)].is_zero()) --dg;
        if (dg <= 0) return;
        auto divide = [&](const Polynomial& p) {
            std::vector<GRat> a = to_dense_univariate(p);
            int da = static_cast<int>(a.size()) - 1;
            std::vector<GRat> q(static_cast<size_t>(std::max(da - dg + 1, 1)), GRat(0));
            for (int k = da; k >= dg; --k) {
                GRat f = a[static_cast<size_t>(k)] / g[static_cast<size_t>(dg)];
                q[static_cast<size_t>(k - dg)] = f;
                for (int j = 0; j <= dg; ++j) a[static_cast<size_t>(k - dg + j)] -= f * g[static_cast<size_t>(j)];
            }
            Polynomial r(1);
            for (size_t k = 0; k < q.size(); ++k)
                r += Polynomial::monomial(1, MultiIndex{static_cast<unsigned>(k)}, q[k]);
            return r;
        };
        num = divide(num);
        den = divide(den);
    }
};

enum class AtomKind { Exp, Sin, Cos, Pow };

// A closed-form factor: exp(r), sin(r), cos(r) or r^q with q a non-integer
// rational (integer powers fold into the rational-function coefficient).
// For Pow the normalized exponent lies in (0,1).
struct Atom {
    AtomKind kind;
    RationalFunction arg;
    Rational power{0};

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.kind == b.kind && a.power == b.power && a.arg == b.arg;
    }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.power != b.power) return a.power < b.power;
        return a.arg < b.arg;
    }
};

struct CoeffTerm {
    RationalFunction coeff;
    std::vector<Atom> atoms;  // sorted; at most one Exp atom (args merged)
};

// A transcendental-unit signature used by exact zero tests: the value
// c * exp(z) * prod a_j^{q_j} with z, a_j Gaussian rationals. Distinct keys
// carry linearly independent values over Q(i) (Lindemann-Weierstrass for the
// exponentials; pow factors are grouped syntactically, see is_decidable()).
struct UnitKey {
    GRat exp_arg;                                    // exp(z); z = 0 means no factor
    std::vector<std::pair<GRat, Rational>> powers;   // sorted (base, exponent), base > 0 real

    friend bool operator==(const UnitKey& a, const UnitKey& b) {
        return a.exp_arg == b.exp_arg && a.powers == b.powers;
    }
    friend bool operator<(const UnitKey& a, const UnitKey& b) {
        if (!(a.exp_arg == b.exp_arg)) return a.exp_arg < b.exp_arg;
        return a.powers < b.powers;
    }
    bool trivial() const { return exp_arg.is_zero() && powers.empty(); }
};

// Coefficients of a truncated expansion, one rational series per unit.
// Zero-ness of the n-th coefficient is decidable whenever at most one
// pow-product appears per exponential argument (always true here: pow keys
// are part of the grouping).
struct UnitSeries {
    std::map<UnitKey, std::vector<GRat>> parts;
    unsigned order = 0;

    bool coeff_is_zero(unsigned n) const {
        for (const auto& [k, s] : parts)
            if (n < s.size() && !s[n].is_zero()) return false;
        return true;
    }
};

namespace series_detail {

using Series = std::vector<GRat>;

inline Series mul(const Series& a, const Series& b, unsigned N) {
    Series r(N + 1, GRat(0));
    for (size_t i = 0; i < a.size() && i <= N; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size() && i + j <= N; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline Series div(const Series& a, const Series& b, unsigned N) {
    if (b.empty() || b[0].is_zero()) throw std::domain_error("series division by vanishing series");
    Series r(N + 1, GRat(0));
    for (unsigned n = 0; n <= N; ++n) {
        GRat acc = n < a.size() ? a[n] : GRat(0);
        for (unsigned k = 1; k <= n; ++k)
            if (k < b.size()) acc -= b[k] * r[n - k];
        r[n] = acc / b[0];
    }
    return r;
}

// exp of a series with zero constant term
inline Series exp0(const Series& u, unsigned N) {
    Series r(N + 1, GRat(0));
    r[0] = GRat(1);
    for (unsigned n = 1; n <= N; ++n) {
        GRat acc(0);
        for (unsigned k = 1; k <= n; ++k)
            if (k < u.size()) acc += GRat(Rational(k)) * u[k] * r[n - k];
        r[n] = acc / GRat(Rational(n));
    }
    return r;
}

// (1 + u)^q for a series with zero constant term (J.C.P. Miller recurrence)
inline Series pow_q(const Series& u, const Rational& q, unsigned N) {
    Series r(N + 1, GRat(0));
    r[0] = GRat(1);
    for (unsigned n = 1; n <= N; ++n) {
        GRat acc(0);
        for (unsigned k = 1; k <= n; ++k) {
            if (k >= u.size()) break;
            Rational w = q * Rational(k) - Rational(n - k);
            acc += GRat(w) * u[k] * r[n - k];
        }
        r[n] = acc / GRat(Rational(n));
    }
    return r;
}

}  // namespace series_detail

// Sum of rational-function-times-atoms terms, closed under +, *, d/dx.
class CoeffExpr {
public:
    CoeffExpr() = default;
    explicit CoeffExpr(int nvars) : nvars_(nvars) {}
    explicit CoeffExpr(Polynomial p) : nvars_(p.nvars()) {
        if (!p.is_zero()) terms_.push_back({RationalFunction(std::move(p)), {}});
    }
    explicit CoeffExpr(RationalFunction r) : nvars_(r.nvars()) {
        if (!r.is_zero()) terms_.push_back({std::move(r), {}});
    }
    CoeffExpr(int nvars, const GRat& c) : CoeffExpr(Polynomial(nvars, c)) {}

    static CoeffExpr exp(const RationalFunction& arg) {
        CoeffExpr e(arg.nvars());
        if (arg.is_zero()) return CoeffExpr(arg.nvars(), GRat(1));
        CoeffTerm t{RationalFunction::constant(arg.nvars(), GRat(1)), {Atom{AtomKind::Exp, arg, Rational(0)}}};
        e.terms_.push_back(std::move(t));
        return e;
    }
    static CoeffExpr sin(const RationalFunction& arg) {
        CoeffExpr e(arg.nvars());
        if (arg.is_zero()) return e;
        CoeffTerm t{RationalFunction::constant(arg.nvars(), GRat(1)), {Atom{AtomKind::Sin, arg, Rational(0)}}};
        e.terms_.push_back(std::move(t));
        return e;
    }
    static CoeffExpr cos(const RationalFunction& arg) {
        if (arg.is_zero()) return CoeffExpr(arg.nvars(), GRat(1));
        CoeffExpr e(arg.nvars());
        CoeffTerm t{RationalFunction::constant(arg.nvars(), GRat(1)), {Atom{AtomKind::Cos, arg, Rational(0)}}};
        e.terms_.push_back(std::move(t));
        return e;
    }
    // r^q; integer part of q folds into the rational-function coefficient
    static CoeffExpr pow(const RationalFunction& base, const Rational& q) {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (denominator(q) == 1) {
            long e = static_cast<long>(numerator(q));
            return CoeffExpr(base.pow_int(e));
        }
        BigInt n = numerator(q), d = denominator(q);
        BigInt fl = n / d;
        if (n < 0 && n % d != 0) fl -= 1;
        Rational frac = q - Rational(fl);
        CoeffExpr e(base.nvars());
        CoeffTerm t{base.pow_int(static_cast<long>(fl)), {Atom{AtomKind::Pow, base, frac}}};
        e.terms_.push_back(std::move(t));
        return e;
    }

    int nvars() const { return nvars_; }
    const std::vector<CoeffTerm>& terms() const { return terms_; }
    bool is_polynomial() const {
        for (const auto& t : terms_)
            if (!t.atoms.empty() || !t.coeff.is_polynomial()) return false;
        return true;
    }
    std::optional<Polynomial> as_polynomial() const {
        Polynomial acc(nvars_);
        for (const auto& t : terms_) {
            if (!t.atoms.empty() || !t.coeff.is_polynomial()) return std::nullopt;
            acc += t.coeff.num;
        }
        return acc;
    }

    CoeffExpr operator-() const {
        CoeffExpr r(*this);
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }
    friend CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b) {
        CoeffExpr r(a);
        for (const auto& t : b.terms_) r.add_term(t);
        return r;
    }
    friend CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b) { return a + (-b); }
    friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b) {
        CoeffExpr r(a.nvars_);
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) r.add_term(mul_terms(ta, tb));
        return r;
    }
    friend CoeffExpr operator*(const GRat& c, const CoeffExpr& e) {
        return CoeffExpr(e.nvars_, c) * e;
    }

    CoeffExpr derivative(int var) const {
        CoeffExpr r(nvars_);
        for (const auto& t : terms_) {
            CoeffTerm base{t.coeff.derivative(var), t.atoms};
            r.add_term(base);
            for (size_t k = 0; k < t.atoms.size(); ++k) {
                const Atom& a = t.atoms[k];
                RationalFunction da = a.arg.derivative(var);
                if (da.is_zero()) continue;
                CoeffTerm piece;
                piece.coeff = t.coeff * da;
                std::vector<Atom> rest;
                for (size_t j = 0; j < t.atoms.size(); ++j)
                    if (j != k) rest.push_back(t.atoms[j]);
                switch (a.kind) {
                    case AtomKind::Exp:
                        piece.atoms = t.atoms;
                        break;
                    case AtomKind::Sin: {
                        piece.atoms = rest;
                        piece.atoms.push_back(Atom{AtomKind::Cos, a.arg, Rational(0)});
                        break;
                    }
                    case AtomKind::Cos: {
                        piece.coeff = -piece.coeff;
                        piece.atoms = rest;
                        piece.atoms.push_back(Atom{AtomKind::Sin, a.arg, Rational(0)});
                        break;
                    }
                    case AtomKind::Pow: {
                        // q r^{q-1} r' = q r' r^{-1} * r^{q}
                        piece.coeff = piece.coeff * RationalFunction::constant(nvars_, GRat(a.power)) / a.arg;
                        piece.atoms = t.atoms;
                        break;
                    }
                }
                std::sort(piece.atoms.begin(), piece.atoms.end());
                r.add_term(piece);
            }
        }
        return r;
    }

    // Exact zero test as a function: trig atoms are rewritten as complex
    // exponentials; terms group by (exp argument, pow factors); each group's
    // rational-function coefficient must vanish. Sound, and complete within
    // the formal atom algebra (principal branches for pow).
    bool is_zero() const {
        std::map<ExpandedKey, RationalFunction> groups = expand_to_exponentials();
        for (const auto& [k, c] : groups)
            if (!c.is_zero()) return false;
        return true;
    }

    friend bool operator==(const CoeffExpr& a, const CoeffExpr& b) { return (a - b).is_zero(); }

    std::complex<double> eval(std::span<const std::complex<double>> p) const {
        std::complex<double> acc(0, 0);
        for (const auto& t : terms_) {
            std::complex<double> v = t.coeff.eval(p);
            for (const auto& a : t.atoms) {
                std::complex<double> w = a.arg.eval(p);
                switch (a.kind) {
                    case AtomKind::Exp: v *= std::exp(w); break;
                    case AtomKind::Sin: v *= std::sin(w); break;
                    case AtomKind::Cos: v *= std::cos(w); break;
                    case AtomKind::Pow: v *= std::pow(w, to_double(a.power)); break;
                }
            }
            acc += v;
        }
        return acc;
    }

    // Exact evaluation into unit coordinates; throws on a pole or on a pow
    // atom with non-positive-real base (branch ambiguity).
    std::map<UnitKey, GRat> eval_units(std::span<const GRat> p) const {
        std::map<UnitKey, GRat> out;
        for (const auto& t : terms_) {
            GRat c = t.coeff.eval(p);
            if (c.is_zero()) continue;
            // split trig atoms into exponential halves
            std::vector<std::pair<GRat, UnitKey>> branches{{c, UnitKey{}}};
            for (const auto& a : t.atoms) {
                GRat v = a.arg.eval(p);
                std::vector<std::pair<GRat, UnitKey>> next;
                for (auto& [bc, bk] : branches) {
                    switch (a.kind) {
                        case AtomKind::Exp: {
                            UnitKey k = bk;
                            k.exp_arg += v;
                            next.emplace_back(bc, std::move(k));
                            break;
                        }
                        case AtomKind::Sin: {
                            GRat i = GRat::i();
                            UnitKey k1 = bk, k2 = bk;
                            k1.exp_arg += i * v;
                            k2.exp_arg += -(i * v);
                            GRat half = GRat(Rational(1, 2));
                            next.emplace_back(bc * half / i, std::move(k1));
                            next.emplace_back(-(bc * half / i), std::move(k2));
                            break;
                        }
                        case AtomKind::Cos: {
                            GRat i = GRat::i();
                            UnitKey k1 = bk, k2 = bk;
                            k1.exp_arg += i * v;
                            k2.exp_arg += -(i * v);
                            GRat half = GRat(Rational(1, 2));
                            next.emplace_back(bc * half, std::move(k1));
                            next.emplace_back(bc * half, std::move(k2));
                            break;
                        }
                        case AtomKind::Pow: {
                            if (v.is_zero()) {
                                // r^q with r(p)=0 and q in (0,1): value 0
                                next.clear();
                                break;
                            }
                            if (!v.is_real() || v.re < 0)
                                throw std::domain_error("pow atom: non-positive base at evaluation point");
                            if (v.is_one()) {
                                next.emplace_back(bc, bk);
                                break;
                            }
                            UnitKey k = bk;
                            k.powers.emplace_back(v, a.power);
                            std::sort(k.powers.begin(), k.powers.end(),
                                      [](const auto& x, const auto& y) {
                                          if (!(x.first == y.first)) return x.first < y.first;
                                          return x.second < y.second;
                                      });
                            next.emplace_back(bc, std::move(k));
                            break;
                        }
                    }
                    if (a.kind == AtomKind::Pow && v.is_zero()) break;
                }
                branches = std::move(next);
                if (branches.empty()) break;
            }
            for (auto& [bc, bk] : branches) {
                auto [it, fresh] = out.emplace(bk, bc);
                if (!fresh) it->second += bc;
            }
        }
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

    // Exact rational value when the units collapse to the trivial one.
    std::optional<GRat> eval_exact(std::span<const GRat> p) const {
        auto units = eval_units(p);
        if (units.empty()) return GRat(0);
        if (units.size() == 1 && units.begin()->first.trivial()) return units.begin()->second;
        return std::nullopt;
    }

    bool is_zero_at(std::span<const GRat> p) const { return eval_units(p).empty(); }

    // Univariate Taylor expansion at x0 up to the given order.
    UnitSeries taylor(const GRat& x0, unsigned order) const {
        if (nvars_ != 1) throw std::logic_error("taylor: univariate expressions only");
        using series_detail::Series;
        UnitSeries out;
        out.order = order;
        std::array<GRat, 1> pt{x0};
        for (const auto& t : terms_) {
            // coefficient series
            Series cs = ratfunc_series(t.coeff, x0, order);
            std::vector<std::pair<UnitKey, Series>> branches{{UnitKey{}, cs}};
            for (const auto& a : t.atoms) {
                Series as = ratfunc_series(a.arg, x0, order);
                GRat a0 = as.empty() ? GRat(0) : as[0];
                Series u = as;
                if (!u.empty()) u[0] = GRat(0);
                std::vector<std::pair<UnitKey, Series>> next;
                for (auto& [bk, bs] : branches) {
                    switch (a.kind) {
                        case AtomKind::Exp: {
                            Series e = series_detail::exp0(u, order);
                            UnitKey k = bk;
                            k.exp_arg += a0;
                            next.emplace_back(std::move(k), series_detail::mul(bs, e, order));
                            break;
                        }
                        case AtomKind::Sin:
                        case AtomKind::Cos: {
                            GRat i = GRat::i();
                            Series iu(u.size()), miu(u.size());
                            for (size_t k = 0; k < u.size(); ++k) {
                                iu[k] = i * u[k];
                                miu[k] = -(i * u[k]);
                            }
                            Series ep = series_detail::exp0(iu, order);
                            Series em = series_detail::exp0(miu, order);
                            GRat cp, cm;
                            if (a.kind == AtomKind::Sin) {
                                cp = GRat(Rational(1, 2)) / i;
                                cm = -cp;
                            } else {
                                cp = GRat(Rational(1, 2));
                                cm = cp;
                            }
                            UnitKey k1 = bk, k2 = bk;
                            k1.exp_arg += i * a0;
                            k2.exp_arg += -(i * a0);
                            Series s1 = series_detail::mul(bs, ep, order);
                            Series s2 = series_detail::mul(bs, em, order);
                            for (auto& v : s1) v *= cp;
                            for (auto& v : s2) v *= cm;
                            next.emplace_back(std::move(k1), std::move(s1));
                            next.emplace_back(std::move(k2), std::move(s2));
                            break;
                        }
                        case AtomKind::Pow: {
                            if (a0.is_zero())
                                throw std::domain_error(
                                    "pow atom: fractional power of vanishing base has no Taylor expansion");
                            if (!a0.is_real() || a0.re < 0)
                                throw std::domain_error("pow atom: non-positive base at expansion point");
                            Series un = u;
                            for (auto& v : un) v /= a0;  // r = a0 (1 + un)
                            Series pw = series_detail::pow_q(un, a.power, order);
                            UnitKey k = bk;
                            if (!a0.is_one()) {
                                k.powers.emplace_back(a0, a.power);
                                std::sort(k.powers.begin(), k.powers.end(),
                                          [](const auto& x, const auto& y) {
                                              if (!(x.first == y.first)) return x.first < y.first;
                                              return x.second < y.second;
                                          });
                            }
                            next.emplace_back(std::move(k), series_detail::mul(bs, pw, order));
                            break;
                        }
                    }
                }
                branches = std::move(next);
            }
            (void)pt;
            for (auto& [bk, bs] : branches) {
                auto [it, fresh] = out.parts.emplace(bk, bs);
                if (!fresh)
                    for (size_t k = 0; k < bs.size(); ++k) it->second[k] += bs[k];
            }
        }
        // drop all-zero parts
        for (auto it = out.parts.begin(); it != out.parts.end();) {
            bool all0 = true;
            for (const auto& v : it->second)
                if (!v.is_zero()) {
                    all0 = false;
                    break;
                }
            it = all0 ? out.parts.erase(it) : std::next(it);
        }
        return out;
    }

    std::string to_string(std::span<const std::string> names) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (size_t k = 0; k < terms_.size(); ++k) {
            const auto& t = terms_[k];
            std::string piece = t.coeff.to_string(names);
            bool coeff_is_one = piece == "1";
            bool needs_parens = piece.find('+') != std::string::npos ||
                                piece.find(" - ") != std::string::npos;
            if (needs_parens) piece = "(" + piece + ")";
            for (const auto& a : t.atoms) {
                std::string as = a.arg.to_string(names);
                std::string atom_str;
                switch (a.kind) {
                    case AtomKind::Exp: atom_str = "exp(" + as + ")"; break;
                    case AtomKind::Sin: atom_str = "sin(" + as + ")"; break;
                    case AtomKind::Cos: atom_str = "cos(" + as + ")"; break;
                    case AtomKind::Pow:
                        atom_str = "(" + as + ")^(" + hypoel::to_string(a.power) + ")";
                        break;
                }
                if (coeff_is_one) {
                    piece = atom_str;
                    coeff_is_one = false;
                } else {
                    piece += "*" + atom_str;
                }
            }
            if (k == 0) {
                out = piece;
            } else if (!piece.empty() && piece[0] == '-') {
                out += " - " + piece.substr(1);
            } else {
                out += " + " + piece;
            }
        }
        return out;
    }

private:
    struct ExpandedKey {
        RationalFunction exp_arg;                              // possibly zero
        std::vector<std::pair<RationalFunction, Rational>> powers;
        friend bool operator<(const ExpandedKey& a, const ExpandedKey& b) {
            if (!(a.exp_arg == b.exp_arg)) return a.exp_arg < b.exp_arg;
            if (a.powers.size() != b.powers.size()) return a.powers.size() < b.powers.size();
            for (size_t k = 0; k < a.powers.size(); ++k) {
                if (a.powers[k].second != b.powers[k].second) return a.powers[k].second < b.powers[k].second;
                if (!(a.powers[k].first == b.powers[k].first)) return a.powers[k].first < b.powers[k].first;
            }
            return false;
        }
    };

    std::map<ExpandedKey, RationalFunction> expand_to_exponentials() const {
        std::map<ExpandedKey, RationalFunction> out;
        GRat i = GRat::i();
        ExpandedKey trivial_key;
        trivial_key.exp_arg = RationalFunction::constant(nvars_, GRat(0));
        for (const auto& t : terms_) {
            std::vector<std::pair<GRat, ExpandedKey>> branches{{GRat(1), trivial_key}};
            for (const auto& a : t.atoms) {
                std::vector<std::pair<GRat, ExpandedKey>> next;
                RationalFunction iarg =
                    RationalFunction::constant(nvars_, i) * a.arg;
                for (auto& [bc, bk] : branches) {
                    switch (a.kind) {
                        case AtomKind::Exp: {
                            ExpandedKey k = bk;
                            k.exp_arg = k.exp_arg + a.arg;
                            next.emplace_back(bc, std::move(k));
                            break;
                        }
                        case AtomKind::Sin: {
                            ExpandedKey k1 = bk, k2 = bk;
                            k1.exp_arg = k1.exp_arg + iarg;
                            k2.exp_arg = k2.exp_arg - iarg;
                            GRat c = GRat(Rational(1, 2)) / i;
                            next.emplace_back(bc * c, std::move(k1));
                            next.emplace_back(-(bc * c), std::move(k2));
                            break;
                        }
                        case AtomKind::Cos: {
                            ExpandedKey k1 = bk, k2 = bk;
                            k1.exp_arg = k1.exp_arg + iarg;
                            k2.exp_arg = k2.exp_arg - iarg;
                            GRat c = GRat(Rational(1, 2));
                            next.emplace_back(bc * c, std::move(k1));
                            next.emplace_back(bc * c, std::move(k2));
                            break;
                        }
                        case AtomKind::Pow: {
                            ExpandedKey k = bk;
                            k.powers.emplace_back(a.arg, a.power);
                            std::sort(k.powers.begin(), k.powers.end(),
                                      [](const auto& x, const auto& y) {
                                          if (x.second != y.second) return x.second < y.second;
                                          return x.first < y.first;
                                      });
                            next.emplace_back(bc, std::move(k));
                            break;
                        }
                    }
                }
                branches = std::move(next);
            }
            for (auto& [bc, bk] : branches) {
                RationalFunction contrib = t.coeff * RationalFunction::constant(nvars_, bc);
                auto [it, fresh] = out.emplace(bk, contrib);
                if (!fresh) it->second = it->second + contrib;
            }
        }
        return out;
    }

    static series_detail::Series ratfunc_series(const RationalFunction& r, const GRat& x0,
                                                unsigned order) {
        std::array<GRat, 1> shift{x0};
        Polynomial n = r.num.shift(std::span<const GRat>(shift));
        Polynomial d = r.den.shift(std::span<const GRat>(shift));
        series_detail::Series ns = to_dense_univariate(n);
        series_detail::Series ds = to_dense_univariate(d);
        ns.resize(order + 1, GRat(0));
        ds.resize(order + 1, GRat(0));
        return series_detail::div(ns, ds, order);
    }

    static CoeffTerm mul_terms(const CoeffTerm& a, const CoeffTerm& b) {
        CoeffTerm r;
        r.coeff = a.coeff * b.coeff;
        r.atoms = a.atoms;
        for (const auto& atom : b.atoms) r.atoms.push_back(atom);
        // merge exp atoms
        RationalFunction exp_sum;
        bool has_exp = false;
        std::vector<Atom> rest;
        for (auto& atom : r.atoms) {
            if (atom.kind == AtomKind::Exp) {
                exp_sum = has_exp ? exp_sum + atom.arg : atom.arg;
                has_exp = true;
            } else {
                rest.push_back(atom);
            }
        }
        if (has_exp && !exp_sum.is_zero())
            rest.push_back(Atom{AtomKind::Exp, exp_sum, Rational(0)});
        // merge identical pow atoms (same base): exponents add, integer part folds out
        std::sort(rest.begin(), rest.end());
        std::vector<Atom> merged;
        for (auto& atom : rest) {
            if (atom.kind == AtomKind::Pow && !merged.empty() && merged.back().kind == AtomKind::Pow &&
                merged.back().arg == atom.arg) {
                Rational q = merged.back().power + atom.power;
                merged.pop_back();
                using boost::multiprecision::denominator;
                if (denominator(q) == 1) {
                    r.coeff = r.coeff * atom.arg.pow_int(static_cast<long>(boost::multiprecision::numerator(q)));
                } else if (q != 0) {
                    BigInt fl = boost::multiprecision::numerator(q) / denominator(q);
                    if (q < 0 && boost::multiprecision::numerator(q) % denominator(q) != 0) fl -= 1;
                    if (fl != 0) r.coeff = r.coeff * atom.arg.pow_int(static_cast<long>(fl));
                    merged.push_back(Atom{AtomKind::Pow, atom.arg, q - Rational(fl)});
                }
            } else {
                merged.push_back(atom);
            }
        }
        r.atoms = std::move(merged);
        std::sort(r.atoms.begin(), r.atoms.end());
        return r;
    }

    void add_term(const CoeffTerm& t) {
        if (t.coeff.is_zero()) return;
        for (auto& mine : terms_) {
            if (mine.atoms == t.atoms) {
                mine.coeff = mine.coeff + t.coeff;
                if (mine.coeff.is_zero()) {
                    mine = terms_.back();
                    terms_.pop_back();
                    std::sort(terms_.begin(), terms_.end(), [](const CoeffTerm& a, const CoeffTerm& b) {
                        return a.atoms < b.atoms;
                    });
                }
                return;
            }
        }
        terms_.push_back(t);
        std::sort(terms_.begin(), terms_.end(),
                  [](const CoeffTerm& a, const CoeffTerm& b) { return a.atoms < b.atoms; });
    }

    int nvars_ = 0;
    std::vector<CoeffTerm> terms_;
};

}  // namespace hypoel

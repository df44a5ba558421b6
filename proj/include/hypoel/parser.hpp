#pragma once

#include "hypoel/diff_operator.hpp"

#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypoel {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& what, size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Recursive-descent parser for the operator DSL:
//   expr     := ['-'] term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := primary ('^' exponent)*
//   primary  := rational | ident | 'i' | 'exp(' expr ')' | 'sin(' expr ')'
//             | 'cos(' expr ')' | 'D' ident | '(' expr ')'
//   exponent := nat | '(' rational ')'
// Factors compose left to right ("Dx*x" is d/dx o (x .) = x d/dx + 1);
// '/' and fractional exponents require order-zero right-hand sides.
class OperatorParser {
public:
    explicit OperatorParser(std::string text,
                            std::optional<std::vector<std::string>> declared_vars = std::nullopt)
        : text_(std::move(text)), declared_(std::move(declared_vars)) {}

    DiffOperator parse() {
        collect_variables();
        pos_ = 0;
        DiffOperator result = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return result;
    }

    const std::vector<std::string>& variables() const { return vars_; }

private:
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    }
    static bool is_keyword(const std::string& s) {
        return s == "i" || s == "exp" || s == "sin" || s == "cos";
    }

    void collect_variables() {
        if (declared_) {
            vars_ = *declared_;
            known_only_ = true;
        } else {
            std::set<std::string> names;
            size_t k = 0;
            while (k < text_.size()) {
                char c = text_[k];
                if (ident_start(c)) {
                    size_t start = k;
                    while (k < text_.size() && ident_char(text_[k])) ++k;
                    std::string id = text_.substr(start, k - start);
                    if (is_keyword(id)) continue;
                    if (id.size() > 1 && id[0] == 'D')
                        names.insert(id.substr(1));
                    else
                        names.insert(id);
                } else {
                    ++k;
                }
            }
            vars_.assign(names.begin(), names.end());
            std::sort(vars_.begin(), vars_.end(), natural_less);
            known_only_ = false;
        }
    }

    // so that x2 sorts before x10
    static bool natural_less(const std::string& a, const std::string& b) {
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (std::isdigit(static_cast<unsigned char>(a[i])) &&
                std::isdigit(static_cast<unsigned char>(b[j]))) {
                size_t i0 = i, j0 = j;
                while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
                while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
                std::string na = a.substr(i0, i - i0), nb = b.substr(j0, j - j0);
                if (na.size() != nb.size()) return na.size() < nb.size();
                if (na != nb) return na < nb;
            } else {
                if (a[i] != b[j]) return a[i] < b[j];
                ++i;
                ++j;
            }
        }
        return a.size() - i < b.size() - j;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    DiffOperator parse_expr() {
        skip_ws();
        bool negate = accept('-');
        DiffOperator acc = parse_term();
        if (negate) acc = GRat(-1) * acc;
        while (true) {
            skip_ws();
            if (accept('+')) {
                acc = acc + parse_term();
            } else if (accept('-')) {
                acc = acc - parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    DiffOperator parse_term() {
        DiffOperator acc = parse_factor();
        while (true) {
            skip_ws();
            if (accept('*')) {
                acc = compose(acc, parse_factor());
            } else if (peek('/')) {
                size_t at = pos_;
                ++pos_;
                DiffOperator rhs = parse_factor();
                acc = compose(acc, invert_order_zero(rhs, at));
            } else {
                break;
            }
        }
        return acc;
    }

    DiffOperator parse_factor() {
        DiffOperator base = parse_primary();
        while (peek('^')) {
            size_t at = pos_;
            ++pos_;
            skip_ws();
            if (accept('(')) {
                Rational q = parse_signed_rational();
                expect(')');
                base = coefficient_power(base, q, at);
            } else {
                unsigned long e = parse_nat();
                DiffOperator acc = DiffOperator::identity(vars_);
                for (unsigned long k = 0; k < e; ++k) acc = compose(acc, base);
                base = acc;
            }
        }
        return base;
    }

    DiffOperator parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (accept('(')) {
            DiffOperator inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational q = parse_unsigned_rational();
            return constant_op(GRat(q));
        }
        if (c == '.')
            throw ParseError("non-rational literal", pos_);
        if (ident_start(c)) {
            size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
            std::string id = text_.substr(start, pos_ - start);
            if (id == "i") return constant_op(GRat::i());
            if (id == "exp" || id == "sin" || id == "cos") {
                expect('(');
                DiffOperator arg_op = parse_expr();
                expect(')');
                RationalFunction arg = to_ratfunc(arg_op, start);
                CoeffExpr e = id == "exp"   ? CoeffExpr::exp(arg)
                              : id == "sin" ? CoeffExpr::sin(arg)
                                            : CoeffExpr::cos(arg);
                DiffOperator p(vars_);
                p.add_term(MultiIndex(vars_.size(), 0), e);
                return p;
            }
            if (id.size() > 1 && id[0] == 'D') {
                std::string v = id.substr(1);
                int idx = find_var(v, start);
                return DiffOperator::partial(vars_, idx);
            }
            int idx = find_var(id, start);
            DiffOperator p(vars_);
            p.add_term(MultiIndex(vars_.size(), 0),
                       CoeffExpr(Polynomial::variable(static_cast<int>(vars_.size()), idx)));
            return p;
        }
        throw ParseError("syntax error", pos_);
    }

    int find_var(const std::string& name, size_t at) const {
        for (size_t k = 0; k < vars_.size(); ++k)
            if (vars_[k] == name) return static_cast<int>(k);
        throw ParseError("unknown variable '" + name + "'", at);
    }

    unsigned long parse_nat() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected natural number", pos_);
        if (pos_ < text_.size() && text_[pos_] == '.')
            throw ParseError("non-rational literal", pos_);
        return std::stoul(text_.substr(start, pos_ - start));
    }

    Rational parse_unsigned_rational() {
        BigInt n(static_cast<long>(parse_nat()));
        skip_ws();
        if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            BigInt d(static_cast<long>(parse_nat()));
            return Rational(n, d);
        }
        return Rational(n);
    }

    Rational parse_signed_rational() {
        skip_ws();
        bool neg = accept('-');
        Rational q = parse_unsigned_rational();
        return neg ? -q : q;
    }

    DiffOperator constant_op(const GRat& c) {
        DiffOperator p(vars_);
        p.add_term(MultiIndex(vars_.size(), 0), CoeffExpr(static_cast<int>(vars_.size()), c));
        return p;
    }

    RationalFunction to_ratfunc(const DiffOperator& op, size_t at) const {
        if (op.order() != 0)
            throw ParseError("expected a coefficient expression, found derivatives", at);
        if (op.is_zero()) return RationalFunction::constant(static_cast<int>(vars_.size()), GRat(0));
        const CoeffExpr& c = op.terms().begin()->second;
        if (c.terms().size() != 1 || !c.terms()[0].atoms.empty())
            throw ParseError("argument must be a rational expression", at);
        return c.terms()[0].coeff;
    }

    DiffOperator invert_order_zero(const DiffOperator& op, size_t at) const {
        RationalFunction r = to_ratfunc(op, at);
        if (r.is_zero()) throw ParseError("division by zero", at);
        DiffOperator p(vars_);
        p.add_term(MultiIndex(vars_.size(), 0),
                   CoeffExpr(RationalFunction::constant(static_cast<int>(vars_.size()), GRat(1)) / r));
        return p;
    }

    DiffOperator coefficient_power(const DiffOperator& op, const Rational& q, size_t at) const {
        using boost::multiprecision::denominator;
        if (denominator(q) == 1 && q >= 0) {
            unsigned long e = static_cast<unsigned long>(boost::multiprecision::numerator(q));
            DiffOperator acc = DiffOperator::identity(vars_);
            for (unsigned long k = 0; k < e; ++k) acc = compose(acc, op);
            return acc;
        }
        RationalFunction base = to_ratfunc(op, at);
        DiffOperator p(vars_);
        p.add_term(MultiIndex(vars_.size(), 0), CoeffExpr::pow(base, q));
        return p;
    }

    std::string text_;
    std::optional<std::vector<std::string>> declared_;
    std::vector<std::string> vars_;
    bool known_only_ = false;
    size_t pos_ = 0;
};

inline DiffOperator parse_operator(const std::string& text,
                                   std::optional<std::vector<std::string>> vars = std::nullopt) {
    OperatorParser p(text, std::move(vars));
    return p.parse();
}

inline VectorField parse_vector_field(const std::string& text,
                                      std::optional<std::vector<std::string>> vars = std::nullopt) {
    return VectorField(parse_operator(text, std::move(vars)));
}

}  // namespace hypoel

#pragma once

#include "hypoel/coeff_expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace hypoel {

// P = sum_alpha a_alpha(x) d^alpha, canonical merged form: one term per
// multi-index, zero terms dropped, map order gives deterministic printing.
class DiffOperator {
public:
    DiffOperator() = default;
    explicit DiffOperator(std::vector<std::string> variables)
        : vars_(std::move(variables)) {}

    static DiffOperator zero(std::vector<std::string> variables) {
        return DiffOperator(std::move(variables));
    }
    static DiffOperator identity(std::vector<std::string> variables) {
        DiffOperator p(std::move(variables));
        p.add_term(MultiIndex(p.dim(), 0), CoeffExpr(static_cast<int>(p.dim()), GRat(1)));
        return p;
    }
    static DiffOperator partial(std::vector<std::string> variables, int var) {
        DiffOperator p(std::move(variables));
        MultiIndex m(p.dim(), 0);
        m[var] = 1;
        p.add_term(m, CoeffExpr(static_cast<int>(p.dim()), GRat(1)));
        return p;
    }

    size_t dim() const { return vars_.size(); }
    const std::vector<std::string>& variables() const { return vars_; }
    const std::map<MultiIndex, CoeffExpr>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int var_index(const std::string& name) const {
        for (size_t k = 0; k < vars_.size(); ++k)
            if (vars_[k] == name) return static_cast<int>(k);
        return -1;
    }

    unsigned order() const {
        unsigned m = 0;
        for (const auto& [mi, c] : terms_) m = std::max(m, mi_order(mi));
        return m;
    }

    void add_term(const MultiIndex& mi, const CoeffExpr& c) {
        if (c.terms().empty()) return;
        auto it = terms_.find(mi);
        if (it == terms_.end()) {
            terms_.emplace(mi, c);
        } else {
            CoeffExpr sum = it->second + c;
            if (sum.terms().empty())
                terms_.erase(it);
            else
                it->second = sum;
        }
    }

    CoeffExpr coefficient(const MultiIndex& mi) const {
        auto it = terms_.find(mi);
        return it == terms_.end() ? CoeffExpr(static_cast<int>(dim())) : it->second;
    }

    bool has_polynomial_coefficients() const {
        for (const auto& [mi, c] : terms_)
            if (!c.is_polynomial()) return false;
        return true;
    }
    bool has_constant_coefficients() const {
        for (const auto& [mi, c] : terms_) {
            auto p = c.as_polynomial();
            if (!p || !p->is_constant()) return false;
        }
        return true;
    }
    bool has_real_coefficients() const {
        for (const auto& [mi, c] : terms_)
            for (const auto& t : c.terms()) {
                for (const auto& [m, v] : t.coeff.num.terms())
                    if (v.im != 0) return false;
                for (const auto& [m, v] : t.coeff.den.terms())
                    if (v.im != 0) return false;
                for (const auto& a : t.atoms) {
                    for (const auto& [m, v] : a.arg.num.terms())
                        if (v.im != 0) return false;
                    for (const auto& [m, v] : a.arg.den.terms())
                        if (v.im != 0) return false;
                }
            }
        return true;
    }

    DiffOperator operator-() const {
        DiffOperator r(vars_);
        for (const auto& [mi, c] : terms_) r.terms_.emplace(mi, -c);
        return r;
    }
    friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
        if (a.vars_ != b.vars_)
            throw std::invalid_argument("DiffOperator: mismatched variable sets");
        DiffOperator r(a);
        for (const auto& [mi, c] : b.terms_) r.add_term(mi, c);
        return r;
    }
    friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) {
        return a + (-b);
    }
    friend DiffOperator operator*(const GRat& s, const DiffOperator& p) {
        DiffOperator r(p.vars_);
        CoeffExpr sc(static_cast<int>(p.dim()), s);
        for (const auto& [mi, c] : p.terms_) r.add_term(mi, sc * c);
        return r;
    }
    friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
        if (a.vars_ != b.vars_) return false;
        return (a - b).normalized_is_zero();
    }

    bool normalized_is_zero() const {
        for (const auto& [mi, c] : terms_)
            if (!c.is_zero()) return false;
        return true;
    }

    // Pf, exact.
    CoeffExpr apply(const CoeffExpr& f) const {
        CoeffExpr acc(static_cast<int>(dim()));
        for (const auto& [mi, c] : terms_) {
            CoeffExpr g = f;
            for (size_t v = 0; v < mi.size(); ++v)
                for (unsigned j = 0; j < mi[v]; ++j) g = g.derivative(static_cast<int>(v));
            acc = acc + c * g;
        }
        return acc;
    }

    // Operator composition via the Leibniz rule:
    // (a d^alpha)(b d^beta) = sum_{gamma<=alpha} C(alpha,gamma) a d^gamma(b) d^{alpha-gamma+beta}.
    friend DiffOperator compose(const DiffOperator& A, const DiffOperator& B) {
        DiffOperator r(A.vars_);
        for (const auto& [alpha, a] : A.terms_) {
            for (const auto& [beta, b] : B.terms_) {
                std::vector<MultiIndex> subs = multi_indices_below(alpha);
                for (const auto& gamma : subs) {
                    CoeffExpr db = b;
                    for (size_t v = 0; v < gamma.size(); ++v)
                        for (unsigned j = 0; j < gamma[v]; ++j) db = db.derivative(static_cast<int>(v));
                    GRat binom = GRat(Rational(mi_binomial(alpha, gamma)));
                    MultiIndex rest(alpha);
                    for (size_t v = 0; v < rest.size(); ++v) rest[v] = rest[v] - gamma[v] + beta[v];
                    r.add_term(rest, binom * (a * db));
                }
            }
        }
        r.prune();
        return r;
    }

    // tP defined by sum (-1)^{|alpha|} d^alpha (a_alpha . ), expanded to
    // canonical form by Leibniz.
    DiffOperator transpose() const {
        DiffOperator r(vars_);
        for (const auto& [alpha, a] : terms_) {
            GRat sign = (mi_order(alpha) % 2 == 0) ? GRat(1) : GRat(-1);
            for (const auto& gamma : multi_indices_below(alpha)) {
                CoeffExpr da = a;
                for (size_t v = 0; v < gamma.size(); ++v)
                    for (unsigned j = 0; j < gamma[v]; ++j) da = da.derivative(static_cast<int>(v));
                GRat c = sign * GRat(Rational(mi_binomial(alpha, gamma)));
                MultiIndex rest(alpha);
                for (size_t v = 0; v < rest.size(); ++v) rest[v] -= gamma[v];
                r.add_term(rest, c * da);
            }
        }
        r.prune();
        return r;
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::span<const std::string> names(vars_);
        std::string out;
        bool first = true;
        // highest order first, then lexicographic: deterministic and readable
        std::vector<const std::pair<const MultiIndex, CoeffExpr>*> items;
        for (const auto& t : terms_) items.push_back(&t);
        std::sort(items.begin(), items.end(), [](auto* a, auto* b) {
            unsigned oa = mi_order(a->first), ob = mi_order(b->first);
            if (oa != ob) return oa > ob;
            return a->first < b->first;
        });
        for (auto* item : items) {
            const auto& [mi, c] = *item;
            std::string dpart;
            for (size_t v = 0; v < mi.size(); ++v) {
                if (mi[v] == 0) continue;
                if (!dpart.empty()) dpart += "*";
                dpart += "D" + vars_[v];
                if (mi[v] > 1) dpart += "^" + std::to_string(mi[v]);
            }
            std::string cs = c.to_string(names);
            std::string piece;
            if (dpart.empty()) {
                piece = cs;
            } else if (cs == "1") {
                piece = dpart;
            } else if (cs == "-1") {
                piece = "-" + dpart;
            } else {
                bool parens = cs.find('+') != std::string::npos || cs.find(" - ") != std::string::npos ||
                              (cs.find('-') != std::string::npos && cs.rfind('-') != 0);
                piece = (parens ? "(" + cs + ")" : cs) + "*" + dpart;
            }
            if (first) {
                out = piece;
                first = false;
            } else if (!piece.empty() && piece[0] == '-') {
                out += " - " + piece.substr(1);
            } else {
                out += " + " + piece;
            }
        }
        return out;
    }

private:
    static std::vector<MultiIndex> multi_indices_below(const MultiIndex& alpha) {
        std::vector<MultiIndex> out{MultiIndex(alpha.size(), 0)};
        for (size_t v = 0; v < alpha.size(); ++v) {
            std::vector<MultiIndex> next;
            for (const auto& m : out)
                for (unsigned j = 0; j <= alpha[v]; ++j) {
                    MultiIndex n(m);
                    n[v] = j;
                    next.push_back(n);
                }
            out = std::move(next);
        }
        return out;
    }

    std::vector<std::string> vars_;
    std::map<MultiIndex, CoeffExpr> terms_;
};

// PQ - QP = 0, by full symbolic expansion.
inline bool commutes(const DiffOperator& P, const DiffOperator& Q, unsigned /*degree_bound*/ = 0) {
    DiffOperator c = compose(P, Q) - compose(Q, P);
    return c.normalized_is_zero();
}

// Order-1 operator with vanishing constant term.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(DiffOperator op) : op_(std::move(op)) {
        for (const auto& [mi, c] : op_.terms())
            if (mi_order(mi) != 1)
                throw std::invalid_argument("VectorField: every term must have |alpha| = 1");
    }
    static VectorField from_components(std::vector<std::string> variables,
                                       std::vector<CoeffExpr> components) {
        DiffOperator op(std::move(variables));
        for (size_t v = 0; v < components.size(); ++v) {
            MultiIndex m(op.dim(), 0);
            m[v] = 1;
            op.add_term(m, components[v]);
        }
        return VectorField(std::move(op));
    }

    const DiffOperator& op() const { return op_; }
    size_t dim() const { return op_.dim(); }

    CoeffExpr component(int var) const {
        MultiIndex m(op_.dim(), 0);
        m[var] = 1;
        return op_.coefficient(m);
    }
    bool is_zero() const { return op_.normalized_is_zero(); }
    std::string to_string() const { return op_.to_string(); }

private:
    DiffOperator op_;
};

// [X,Y] = XY - YX; first order again, exact coefficients.
inline VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    const size_t n = X.dim();
    std::vector<CoeffExpr> comp;
    comp.reserve(n);
    for (size_t j = 0; j < n; ++j) {
        CoeffExpr acc(static_cast<int>(n));
        for (size_t k = 0; k < n; ++k) {
            acc = acc + X.component(static_cast<int>(k)) *
                            Y.component(static_cast<int>(j)).derivative(static_cast<int>(k));
            acc = acc - Y.component(static_cast<int>(k)) *
                            X.component(static_cast<int>(j)).derivative(static_cast<int>(k));
        }
        comp.push_back(acc);
    }
    return VectorField::from_components(X.op().variables(), std::move(comp));
}

// The L_j spanning a system, with optional first integrals Z_k.
struct OperatorSystem {
    std::vector<std::string> variables;
    std::vector<VectorField> fields;
    std::vector<CoeffExpr> first_integrals;

    size_t dim() const { return variables.size(); }
    void validate() const {
        for (const auto& f : fields)
            if (f.dim() != variables.size())
                throw std::invalid_argument("OperatorSystem: mismatched ambient dimension");
    }
};

}  // namespace hypoel

#pragma once

#include "hypoel/rational.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace hypoel {

// Exponent vector; always sized to the ambient dimension of its owner.
using MultiIndex = std::vector<unsigned>;

inline unsigned mi_order(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0u);
}

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a);
    for (size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}

inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] > b[k]) return false;
    return true;
}

inline BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (unsigned j = 0; j < k; ++j) {
        r *= (n - j);
        r /= (j + 1);
    }
    return r;
}

// Multi-index binomial prod binom(a_k, b_k).
inline BigInt mi_binomial(const MultiIndex& a, const MultiIndex& b) {
    BigInt r = 1;
    for (size_t k = 0; k < a.size(); ++k) r *= binomial(a[k], b[k]);
    return r;
}

// Sparse multivariate polynomial over the Gaussian rationals.
// Terms live in a map keyed by exponent vector, so the representation is
// canonical by construction (lexicographic exponent order, no zero terms).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}
    Polynomial(int nvars, const GRat& c) : nvars_(nvars) {
        if (!c.is_zero()) terms_[MultiIndex(nvars, 0)] = c;
    }

    static Polynomial variable(int nvars, int which, const GRat& scale = GRat(1)) {
        Polynomial p(nvars);
        MultiIndex m(nvars, 0);
        m[which] = 1;
        if (!scale.is_zero()) p.terms_[m] = scale;
        return p;
    }
    static Polynomial constant(int nvars, const GRat& c) { return Polynomial(nvars, c); }
    static Polynomial monomial(int nvars, const MultiIndex& m, const GRat& c) {
        Polynomial p(nvars);
        if (!c.is_zero()) p.terms_[m] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<MultiIndex, GRat>& terms() const { return terms_; }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && mi_order(terms_.begin()->first) == 0);
    }
    GRat constant_value() const {
        if (terms_.empty()) return GRat(0);
        auto it = terms_.find(MultiIndex(nvars_, 0));
        return it == terms_.end() ? GRat(0) : it->second;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, mi_order(m));
        return d;
    }
    unsigned degree_in(int var) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }
    // true when no exponent outside `vars` is nonzero
    bool depends_only_on(const std::vector<int>& vars) const {
        for (const auto& [m, c] : terms_)
            for (size_t k = 0; k < m.size(); ++k)
                if (m[k] > 0 && std::find(vars.begin(), vars.end(), static_cast<int>(k)) == vars.end())
                    return false;
        return true;
    }
    bool depends_on(int var) const {
        for (const auto& [m, c] : terms_)
            if (m[var] > 0) return true;
        return false;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(mi_add(ma, mb), ca * cb);
        return r;
    }
    friend Polynomial operator*(const GRat& c, Polynomial p) {
        if (c.is_zero()) return Polynomial(p.nvars_);
        for (auto& [m, v] : p.terms_) v *= c;
        return p;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r(nvars_, GRat(1));
        Polynomial base = *this;
        while (e) {
            if (e & 1u) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    Polynomial derivative(int var) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            MultiIndex d(m);
            d[var] -= 1;
            r.add_term(d, GRat(Rational(m[var])) * c);
        }
        return r;
    }

    GRat eval(std::span<const GRat> point) const {
        GRat acc(0);
        for (const auto& [m, c] : terms_) {
            GRat t = c;
            for (size_t k = 0; k < m.size(); ++k)
                if (m[k]) t *= grat_pow(point[k], m[k]);
            acc += t;
        }
        return acc;
    }

    std::complex<double> eval(std::span<const std::complex<double>> point) const {
        std::complex<double> acc(0.0, 0.0);
        for (const auto& [m, c] : terms_) {
            std::complex<double> t = c.to_complex();
            for (size_t k = 0; k < m.size(); ++k)
                for (unsigned j = 0; j < m[k]; ++j) t *= point[k];
            acc += t;
        }
        return acc;
    }

    // Substitutes x_k -> x_k + a_k; exact Taylor recentering.
    Polynomial shift(std::span<const GRat> a) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            Polynomial t(nvars_, c);
            for (size_t k = 0; k < m.size(); ++k) {
                if (m[k] == 0) continue;
                Polynomial lin = Polynomial::variable(nvars_, static_cast<int>(k));
                lin += Polynomial(nvars_, a[k]);
                t = t * lin.pow(m[k]);
            }
            r += t;
        }
        return r;
    }

    // Extends/permutes the variable set: old var k becomes new var mapping[k].
    Polynomial remap(int new_nvars, std::span<const int> mapping) const {
        Polynomial r(new_nvars);
        for (const auto& [m, c] : terms_) {
            MultiIndex nm(new_nvars, 0);
            for (size_t k = 0; k < m.size(); ++k) nm[mapping[k]] = m[k];
            r.add_term(nm, c);
        }
        return r;
    }

    std::string to_string(std::span<const std::string> names) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::string mono;
            for (size_t k = 0; k < m.size(); ++k) {
                if (m[k] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += names[k];
                if (m[k] > 1) mono += "^" + std::to_string(m[k]);
            }
            std::string cs = hypoel::to_string(c);
            bool needs_parens = cs.find('+') != std::string::npos ||
                                cs.find('-') != std::string::npos;
            std::string piece;
            if (mono.empty()) {
                piece = needs_parens && !first ? "(" + cs + ")" : cs;
            } else if (c.is_one()) {
                piece = mono;
            } else if (c == GRat(-1)) {
                piece = "-" + mono;
            } else {
                piece = (needs_parens ? "(" + cs + ")" : cs) + "*" + mono;
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
    void add_term(const MultiIndex& m, const GRat& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    int nvars_ = 0;
    std::map<MultiIndex, GRat> terms_;
};

// Univariate dense view helpers (Taylor machinery works on these).
inline std::vector<GRat> to_dense_univariate(const Polynomial& p) {
    std::vector<GRat> c(p.total_degree() + 1, GRat(0));
    for (const auto& [m, v] : p.terms()) c[m[0]] = v;
    return c;
}

}  // namespace hypoel

#pragma once

#include "hypoel/diff_operator.hpp"
#include "hypoel/facts.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace hypoel {

struct BracketReport {
    std::vector<GRat> point;
    unsigned max_len = 0;
    std::optional<unsigned> spanning_length;  // m_y, least length reaching full rank
    std::vector<unsigned> rank_by_length;     // rank of the span at y for length <= l
    std::vector<std::string> witnesses;       // spanning words, printed in the DSL
    // the rank is computed at a single point; the Lie-algebra condition is an
    // open-neighborhood statement, so this is a pointwise proxy
    bool pointwise_proxy = true;
};

namespace bracket_detail {

// exact rank of row vectors over the rationals (Gaussian elimination)
inline unsigned rational_rank(std::vector<std::vector<GRat>> rows) {
    unsigned rank = 0;
    if (rows.empty()) return 0;
    size_t cols = rows[0].size();
    for (size_t c = 0; c < cols && rank < rows.size(); ++c) {
        size_t pivot = rows.size();
        for (size_t r = rank; r < rows.size(); ++r)
            if (!rows[r][c].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c].is_zero()) continue;
            GRat factor = rows[r][c] / rows[rank][c];
            for (size_t cc = c; cc < cols; ++cc) rows[r][cc] -= factor * rows[rank][cc];
        }
        ++rank;
    }
    return rank;
}

inline std::vector<GRat> eval_field(const VectorField& X, std::span<const GRat> y) {
    std::vector<GRat> v;
    for (size_t k = 0; k < X.dim(); ++k) {
        auto val = X.component(static_cast<int>(k)).eval_exact(y);
        if (!val)
            throw std::domain_error("hormander_depth: field component not exactly evaluable");
        v.push_back(*val);
    }
    return v;
}

}  // namespace bracket_detail

// Closes the given fields under pairwise bracketing up to max_len, evaluates
// every word at y, and reports the least length whose span has full rank.
// Real coefficients required.
inline BracketReport hormander_depth(const std::vector<VectorField>& fields,
                                     std::span<const GRat> y, unsigned max_len = 8) {
    if (fields.empty()) throw std::invalid_argument("hormander_depth: no fields");
    const size_t n = fields.front().dim();
    for (const auto& f : fields) {
        if (f.dim() != n) throw std::invalid_argument("hormander_depth: mismatched dimensions");
        if (!f.op().has_real_coefficients())
            throw std::invalid_argument("hormander_depth: complex coefficients rejected");
    }
    if (y.size() != n) throw std::invalid_argument("hormander_depth: wrong point dimension");

    BracketReport rep;
    rep.point.assign(y.begin(), y.end());
    rep.max_len = max_len;

    struct Word {
        VectorField field;
        std::string printed;
    };
    // words_by_len[l] holds all distinct words of length l+1
    std::vector<std::vector<Word>> words_by_len(max_len);
    auto canonical_new = [&](const VectorField& f, unsigned len) {
        if (f.is_zero()) return false;
        for (const auto& w : words_by_len[len - 1]) {
            if ((w.field.op() - f.op()).normalized_is_zero()) return false;
            if ((w.field.op() + f.op()).normalized_is_zero()) return false;  // sign duplicate
        }
        return true;
    };
    for (const auto& f : fields)
        if (canonical_new(f, 1)) words_by_len[0].push_back({f, f.to_string()});

    for (unsigned len = 2; len <= max_len; ++len) {
        for (unsigned a = 1; a < len; ++a) {
            unsigned b = len - a;
            if (a > b) break;  // brackets are antisymmetric, (a,b) covers (b,a)
            for (const auto& wa : words_by_len[a - 1]) {
                for (const auto& wb : words_by_len[b - 1]) {
                    VectorField br = lie_bracket(wa.field, wb.field);
                    if (canonical_new(br, len))
                        words_by_len[len - 1].push_back(
                            {br, "[" + wa.printed + ", " + wb.printed + "]"});
                }
            }
        }
    }

    std::vector<std::vector<GRat>> rows;
    std::vector<std::string> row_words;
    for (unsigned len = 1; len <= max_len; ++len) {
        for (const auto& w : words_by_len[len - 1]) {
            rows.push_back(bracket_detail::eval_field(w.field, y));
            row_words.push_back(w.printed);
        }
        unsigned rank = bracket_detail::rational_rank(rows);
        rep.rank_by_length.push_back(rank);
        if (rank == n && !rep.spanning_length) {
            rep.spanning_length = len;
            rep.witnesses = row_words;
        }
    }
    return rep;
}

// h(D', G^s) for all s >= m, for P and tP; the commutator bound is not
// always sharp, so the fact is tagged accordingly.
inline HypoFact depth_to_gevrey_fact(unsigned m) {
    if (m < 1) throw std::invalid_argument("depth_to_gevrey_fact: m >= 1 required");
    HypoFact f;
    f.holds = true;
    f.slots = {SpaceSlot::fixed(SheafSpace::Dprime()), SpaceSlot::s(SpaceTag::GevreyRoumieu)};
    f.s_range = Interval::at_least(Rational(m));
    f.prov.rule = "commutator-depth";
    f.prov.note = "not-sharp";
    return f;
}

}  // namespace hypoel

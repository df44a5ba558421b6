#pragma once

#include "hypoel/diff_operator.hpp"
#include "hypoel/facts.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace hypoel {

struct VanishingOrder {
    bool infinite = false;      // identically zero
    unsigned order = 0;
    bool lower_bound_only = false;  // scan hit the depth bound on atom data

    friend bool operator==(const VanishingOrder& a, const VanishingOrder& b) {
        return a.infinite == b.infinite && a.order == b.order &&
               a.lower_bound_only == b.lower_bound_only;
    }
};

// Least j with nonzero j-th Taylor coefficient at x0. Polynomial data is
// fully decidable; atom data is scanned up to depth_bound and reported as a
// lower bound when everything vanished but the function does not.
inline VanishingOrder vanishing_order(const CoeffExpr& f, const GRat& x0,
                                      unsigned depth_bound = 64) {
    if (f.is_zero()) return {true, 0, false};
    if (auto p = f.as_polynomial()) {
        std::array<GRat, 1> a{x0};
        Polynomial shifted = p->shift(std::span<const GRat>(a));
        unsigned best = 0;
        bool found = false;
        for (const auto& [m, c] : shifted.terms())
            if (!found || m[0] < best) {
                best = m[0];
                found = true;
            }
        return {false, best, false};
    }
    UnitSeries ts = f.taylor(x0, depth_bound);
    for (unsigned j = 0; j <= depth_bound; ++j)
        if (!ts.coeff_is_zero(j)) return {false, j, false};
    return {false, depth_bound, true};
}

struct IrregularityReport {
    GRat x0;
    unsigned order = 0;                  // m
    std::vector<VanishingOrder> orders;  // ord(a_i) for i = 0..m
    Rational sigma{1};
    std::vector<unsigned> maximizing;    // indices i attaining the max
    bool exact = true;                   // false when a lower-bound order was involved

    // recompute sigma from the stored orders (the report invariant)
    Rational recompute() const {
        Rational best(1);
        const auto& am = orders.back();
        if (am.infinite) throw std::logic_error("irregularity: a_m vanishes identically");
        for (unsigned i = 0; i + 1 <= order && i < orders.size() - 1; ++i) {
            if (orders[i].infinite) continue;
            Rational cand = (Rational(am.order) - Rational(orders[i].order)) / Rational(order - i);
            if (cand > best) best = cand;
        }
        return best;
    }
};

// Komatsu irregularity of a 1-D operator at x0:
//   sigma = max(1, max_{0 <= i < m} (ord a_m - ord a_i)/(m - i)).
inline IrregularityReport irregularity(const DiffOperator& P, const GRat& x0,
                                       unsigned depth_bound = 64) {
    if (P.dim() != 1) throw std::invalid_argument("irregularity: one-dimensional operators only");
    unsigned m = P.order();
    CoeffExpr am = P.coefficient(MultiIndex{m});
    if (am.is_zero()) throw std::invalid_argument("irregularity: leading coefficient vanishes identically");

    IrregularityReport rep;
    rep.x0 = x0;
    rep.order = m;
    for (unsigned i = 0; i <= m; ++i) {
        CoeffExpr ai = P.coefficient(MultiIndex{i});
        VanishingOrder vo = vanishing_order(ai, x0, depth_bound);
        if (vo.lower_bound_only) rep.exact = false;
        rep.orders.push_back(vo);
    }
    rep.sigma = Rational(1);
    rep.maximizing.clear();
    const auto& ordm = rep.orders[m];
    for (unsigned i = 0; i < m; ++i) {
        if (rep.orders[i].infinite) continue;
        Rational cand = (Rational(ordm.order) - Rational(rep.orders[i].order)) / Rational(m - i);
        if (cand > rep.sigma) {
            rep.sigma = cand;
            rep.maximizing = {i};
        } else if (cand == rep.sigma && rep.sigma > 1) {
            rep.maximizing.push_back(i);
        }
    }
    return rep;
}

// The threshold facts an irregularity value yields, as fact templates with
// an empty operator id (callers stamp the id):
//   sigma = 1:            h(B, D')
//   s <= sigma/(sigma-1): h(B, D'_(s))          [all s > 1 when sigma = 1]
//   s <  sigma/(sigma-1): h(G^(s), Cw)
//   t <  sigma/(sigma-1): h(G^t, Cw)            [via G^t < G^(s) for t < s]
inline std::vector<HypoFact> irregularity_thresholds(const Rational& sigma) {
    if (sigma < 1) throw std::invalid_argument("irregularity_thresholds: sigma must be >= 1");
    std::vector<HypoFact> out;
    auto base = [&]() {
        HypoFact f;
        f.holds = true;
        f.prov.rule = "irregularity-threshold";
        return f;
    };

    if (sigma == 1) {
        HypoFact f = base();
        f.slots = {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::fixed(SheafSpace::Dprime())};
        out.push_back(f);
    }

    // Beurling ultradistribution fact
    {
        HypoFact f = base();
        f.slots = {SpaceSlot::fixed(SheafSpace::B()), SpaceSlot::s(SpaceTag::UltraBeurling)};
        f.s_range = sigma == 1 ? Interval::greater_than(Rational(1))
                               : Interval::left_open(Rational(1), sigma / (sigma - 1));
        if (!f.s_range.empty) out.push_back(f);
    }
    // Beurling Gevrey to analytic
    {
        HypoFact f = base();
        f.slots = {SpaceSlot::s(SpaceTag::GevreyBeurling), SpaceSlot::fixed(SheafSpace::Cw())};
        f.s_range = sigma == 1 ? Interval::greater_than(Rational(1))
                               : Interval::open(Rational(1), sigma / (sigma - 1));
        if (!f.s_range.empty) out.push_back(f);
    }
    // Roumieu corollary
    {
        HypoFact f = base();
        f.slots = {SpaceSlot::s(SpaceTag::GevreyRoumieu), SpaceSlot::fixed(SheafSpace::Cw())};
        f.s_range = sigma == 1 ? Interval::greater_than(Rational(1))
                               : Interval::open(Rational(1), sigma / (sigma - 1));
        if (!f.s_range.empty) out.push_back(f);
    }
    return out;
}

}  // namespace hypoel

#pragma once

#include "hypoel/diff_operator.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hypoel {

// p_m(x, xi) = sum_{|alpha| = m} i^m a_alpha(x) xi^alpha, homogeneous of
// degree m in xi.
struct SymbolPoly {
    size_t dim = 0;
    unsigned degree = 0;
    std::vector<std::string> variables;
    std::map<MultiIndex, CoeffExpr> xi_terms;  // includes the i^m factor

    std::complex<double> eval(std::span<const double> x, std::span<const double> xi) const {
        std::vector<std::complex<double>> xc(x.begin(), x.end());
        std::complex<double> acc(0, 0);
        for (const auto& [mi, c] : xi_terms) {
            std::complex<double> t = c.eval(xc);
            for (size_t v = 0; v < mi.size(); ++v)
                for (unsigned j = 0; j < mi[v]; ++j) t *= xi[v];
            acc += t;
        }
        return acc;
    }

    // exact evaluation; defined whenever every coefficient evaluates exactly
    std::optional<GRat> eval_exact(std::span<const GRat> x, std::span<const GRat> xi) const {
        GRat acc(0);
        for (const auto& [mi, c] : xi_terms) {
            auto v = c.eval_exact(x);
            if (!v) return std::nullopt;
            GRat t = *v;
            for (size_t k = 0; k < mi.size(); ++k)
                if (mi[k]) t *= grat_pow(xi[k], mi[k]);
            acc += t;
        }
        return acc;
    }

    // decides p_m(x, xi) = 0 exactly (units machinery handles atoms)
    bool vanishes_at(std::span<const GRat> x, std::span<const GRat> xi) const {
        CoeffExpr acc(static_cast<int>(dim));
        for (const auto& [mi, c] : xi_terms) {
            GRat t(1);
            for (size_t k = 0; k < mi.size(); ++k)
                if (mi[k]) t *= grat_pow(xi[k], mi[k]);
            acc = acc + t * c;
        }
        return acc.is_zero_at(x);
    }

    std::string to_string(std::span<const std::string> xi_names) const {
        DiffOperator printer(variables);
        (void)xi_names;
        std::string out;
        bool first = true;
        for (const auto& [mi, c] : xi_terms) {
            std::string mono;
            for (size_t v = 0; v < mi.size(); ++v) {
                if (mi[v] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += std::string(xi_names[v]);
                if (mi[v] > 1) mono += "^" + std::to_string(mi[v]);
            }
            std::string cs = c.to_string(variables);
            bool parens = cs.find('+') != std::string::npos || cs.find(" - ") != std::string::npos ||
                          (cs.size() > 1 && cs[0] == '-');
            std::string piece = mono.empty() ? cs
                                : cs == "1"  ? mono
                                : cs == "-1" ? "-" + mono
                                             : (parens ? "(" + cs + ")" : cs) + "*" + mono;
            if (first) {
                out = piece;
                first = false;
            } else if (!piece.empty() && piece[0] == '-') {
                out += " - " + piece.substr(1);
            } else {
                out += " + " + piece;
            }
        }
        return out.empty() ? "0" : out;
    }
};

inline SymbolPoly principal_symbol(const DiffOperator& P) {
    SymbolPoly s;
    s.dim = P.dim();
    s.degree = P.order();
    s.variables = P.variables();
    GRat im = grat_pow(GRat::i(), static_cast<long>(s.degree));
    for (const auto& [mi, c] : P.terms())
        if (mi_order(mi) == s.degree) {
            CoeffExpr scaled = im * c;
            if (!scaled.is_zero()) s.xi_terms.emplace(mi, scaled);
        }
    return s;
}

// ---------------------------------------------------------------------------
// Deterministic quasi-uniform points on S^{d-1}: prefix of an infinite
// low-discrepancy (Kronecker/R_d) sequence pushed through area-preserving
// spherical coordinates. Prefix nesting makes sampled minima monotone in the
// point count.
// ---------------------------------------------------------------------------
namespace sphere_detail {

inline std::vector<double> kronecker_alphas(int dims) {
    // generalized golden ratio: unique real root > 1 of x^{d+1} = x + 1
    double phi = 1.5;
    for (int it = 0; it < 64; ++it)
        phi = std::pow(1.0 + phi, 1.0 / (dims + 1));
    std::vector<double> a(dims);
    double p = 1.0;
    for (int j = 0; j < dims; ++j) {
        p /= phi;
        a[j] = p;
    }
    return a;
}

// inverse CDF of density proportional to sin^k(psi) on [0, pi], via a cached
// cumulative table (trapezoid on a fine grid, then interpolated inversion)
inline double inv_sin_power_cdf(double u, int k) {
    constexpr int kNodes = 4096;
    static thread_local std::map<int, std::vector<double>> tables;
    auto it = tables.find(k);
    if (it == tables.end()) {
        std::vector<double> cum(kNodes + 1, 0.0);
        double h = M_PI / kNodes;
        double prev = 0.0;
        for (int j = 1; j <= kNodes; ++j) {
            double f = std::pow(std::sin(j * h), k);
            cum[static_cast<size_t>(j)] = cum[static_cast<size_t>(j - 1)] + 0.5 * (prev + f) * h;
            prev = f;
        }
        it = tables.emplace(k, std::move(cum)).first;
    }
    const auto& cum = it->second;
    double target = u * cum.back();
    auto pos = std::lower_bound(cum.begin(), cum.end(), target);
    size_t j = pos == cum.begin() ? 0 : static_cast<size_t>(pos - cum.begin()) - 1;
    if (j >= kNodes) j = kNodes - 1;
    double lo = cum[j], hi = cum[j + 1];
    double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
    return (static_cast<double>(j) + frac) * M_PI / kNodes;
}

}  // namespace sphere_detail

inline std::vector<double> sphere_point_compute(int d, size_t k) {
    if (d == 1) return {k % 2 == 0 ? 1.0 : -1.0};
    static thread_local std::map<int, std::vector<double>> alpha_cache;
    auto it = alpha_cache.find(d);
    if (it == alpha_cache.end())
        it = alpha_cache.emplace(d, sphere_detail::kronecker_alphas(d - 1)).first;
    const auto& alphas = it->second;
    std::vector<double> u(alphas.size());
    for (size_t j = 0; j < alphas.size(); ++j) {
        double v = 0.5 + (static_cast<double>(k) + 1.0) * alphas[j];
        u[j] = v - std::floor(v);
    }
    // spherical coordinates: angles psi_0..psi_{d-3} with densities
    // sin^{d-2},...,sin^1, final angle uniform on [0, 2*pi)
    std::vector<double> point(d, 1.0);
    double radial = 1.0;
    for (int j = 0; j < d - 2; ++j) {
        double psi = sphere_detail::inv_sin_power_cdf(u[static_cast<size_t>(j)], d - 2 - j);
        point[static_cast<size_t>(j)] = radial * std::cos(psi);
        radial *= std::sin(psi);
    }
    double theta = 2.0 * M_PI * u.back();
    point[static_cast<size_t>(d) - 2] = radial * std::cos(theta);
    point[static_cast<size_t>(d) - 1] = radial * std::sin(theta);
    return point;
}

// k-th point of the deterministic sphere sequence in R^d (|point| = 1);
// the whole prefix is cached per dimension
inline const std::vector<double>& sphere_point(int d, size_t k) {
    static thread_local std::map<int, std::vector<std::vector<double>>> cache;
    auto& points = cache[d];
    while (points.size() <= k) points.push_back(sphere_point_compute(d, points.size()));
    return points[k];
}

struct RegionBox {
    std::vector<std::pair<Rational, Rational>> bounds;  // per x variable

    size_t dim() const { return bounds.size(); }
    bool valid() const {
        if (bounds.empty()) return false;
        for (const auto& [lo, hi] : bounds)
            if (lo > hi) return false;
        return true;
    }
    static RegionBox unit_box(size_t dim) {
        RegionBox b;
        for (size_t k = 0; k < dim; ++k) b.bounds.emplace_back(Rational(-1), Rational(1));
        return b;
    }
};

enum class EllipticVerdict { elliptic, not_elliptic, inconclusive };

struct EllipticityReport {
    EllipticVerdict verdict = EllipticVerdict::inconclusive;
    double margin = 0.0;              // refined min |p_m| over region x sphere
    std::vector<double> witness_x;    // populated when not_elliptic
    std::vector<double> witness_xi;
    std::vector<Rational> witness_x_exact;   // exact zero certificate, if found
    std::vector<Rational> witness_xi_exact;
    unsigned resolution = 0;
    size_t sphere_points = 0;
};

struct SamplerSettings {
    unsigned resolution = 8;        // subdivisions per region axis
    size_t sphere_points = 4096;
    double tol = 1e-9;
    int descent_steps = 60;
    int descent_seeds = 16;
};

namespace elliptic_detail {

inline std::vector<std::vector<double>> region_grid(const RegionBox& box, unsigned resolution) {
    std::vector<std::vector<double>> axes;
    for (const auto& [lo, hi] : box.bounds) {
        std::vector<double> pts;
        double l = to_double(lo), h = to_double(hi);
        if (resolution == 0 || l == h) {
            pts.push_back(0.5 * (l + h));
        } else {
            for (unsigned j = 0; j <= resolution; ++j)
                pts.push_back(l + (h - l) * j / resolution);
        }
        axes.push_back(std::move(pts));
    }
    std::vector<std::vector<double>> grid{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& partial : grid)
            for (double v : axis) {
                auto q = partial;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        grid = std::move(next);
    }
    return grid;
}

struct SamplePoint {
    std::vector<double> x, xi;
    double value;
};

inline double clamp_to(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// pattern-search descent over the region box and the xi sphere
inline SamplePoint descend(const SymbolPoly& p, const RegionBox& box, SamplePoint s, int steps) {
    auto value = [&](const std::vector<double>& x, const std::vector<double>& xi) {
        return std::abs(p.eval(x, xi));
    };
    double xstep = 0.0;
    for (const auto& [lo, hi] : box.bounds)
        xstep = std::max(xstep, (to_double(hi) - to_double(lo)) / 16.0);
    double astep = 0.25;
    for (int it = 0; it < steps; ++it) {
        bool improved = false;
        for (size_t v = 0; v < s.x.size() && xstep > 0; ++v) {
            for (double dir : {+1.0, -1.0}) {
                auto xt = s.x;
                xt[v] = clamp_to(xt[v] + dir * xstep, to_double(box.bounds[v].first),
                                 to_double(box.bounds[v].second));
                double val = value(xt, s.xi);
                if (val < s.value) {
                    s.x = xt;
                    s.value = val;
                    improved = true;
                }
            }
        }
        for (size_t v = 0; v < s.xi.size(); ++v) {
            for (double dir : {+1.0, -1.0}) {
                auto xt = s.xi;
                xt[v] += dir * astep;
                double norm = 0;
                for (double c : xt) norm += c * c;
                norm = std::sqrt(norm);
                if (norm < 1e-12) continue;
                for (double& c : xt) c /= norm;
                double val = value(s.x, xt);
                if (val < s.value) {
                    s.xi = xt;
                    s.value = val;
                    improved = true;
                }
            }
        }
        if (!improved) {
            xstep *= 0.5;
            astep *= 0.5;
            if (xstep < 1e-14 && astep < 1e-14) break;
        }
    }
    return s;
}

inline std::optional<Rational> snap_rational(double v, long den) {
    double scaled = v * static_cast<double>(den);
    double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 0.25) return std::nullopt;
    return Rational(BigInt(static_cast<long long>(rounded)), BigInt(den));
}

}  // namespace elliptic_detail

// Samples |p_m| over region x sphere, descends from the smallest samples and
// classifies per the two-tier exact/approximate policy:
// elliptic when the refined minimum clears 10*tol, not_elliptic only with an
// exact zero certificate, inconclusive otherwise.
inline EllipticityReport is_elliptic(const DiffOperator& P, const RegionBox& region,
                                     const SamplerSettings& settings = {}) {
    if (!region.valid() || region.dim() != P.dim())
        throw std::invalid_argument("is_elliptic: empty or mismatched region");
    SymbolPoly p = principal_symbol(P);
    const int d = static_cast<int>(P.dim());

    EllipticityReport rep;
    rep.resolution = settings.resolution;
    rep.sphere_points = settings.sphere_points;

    auto grid = elliptic_detail::region_grid(region, settings.resolution);
    std::vector<elliptic_detail::SamplePoint> samples;
    double global_min = std::numeric_limits<double>::infinity();
    for (const auto& x : grid) {
        for (size_t k = 0; k < settings.sphere_points; ++k) {
            std::vector<double> xi = sphere_point(d, k);
            double v = std::abs(p.eval(x, xi));
            global_min = std::min(global_min, v);
            samples.push_back({x, xi, v});
        }
    }
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    if (samples.size() > static_cast<size_t>(settings.descent_seeds))
        samples.resize(static_cast<size_t>(settings.descent_seeds));

    elliptic_detail::SamplePoint best = samples.front();
    for (auto& s : samples) {
        auto refined = elliptic_detail::descend(p, region, s, settings.descent_steps);
        if (refined.value < best.value) best = refined;
    }
    rep.margin = best.value;

    if (best.value <= settings.tol) {
        // try to certify an exact zero (polynomial and atom data both supported
        // by the exact vanishing test)
        for (long den : {1L, 2L, 3L, 4L, 6L, 8L, 12L, 16L, 24L, 32L, 64L, 100L, 1000L}) {
            std::vector<Rational> xr, xir;
            bool ok = true;
            for (double v : best.x) {
                auto q = elliptic_detail::snap_rational(v, den);
                if (!q) {
                    ok = false;
                    break;
                }
                xr.push_back(*q);
            }
            double ximax = 0;
            for (double v : best.xi) ximax = std::max(ximax, std::abs(v));
            for (double v : best.xi) {
                auto q = elliptic_detail::snap_rational(v / ximax, den);
                if (!q) {
                    ok = false;
                    break;
                }
                xir.push_back(*q);
            }
            if (!ok) continue;
            bool xi_zero = true;
            for (const auto& q : xir)
                if (q != 0) xi_zero = false;
            if (xi_zero) continue;
            std::vector<GRat> xg(xr.begin(), xr.end()), xig(xir.begin(), xir.end());
            // clamp snapped x into the region
            bool inside = true;
            for (size_t k = 0; k < xr.size(); ++k)
                if (xr[k] < region.bounds[k].first || xr[k] > region.bounds[k].second) inside = false;
            if (!inside) continue;
            if (p.vanishes_at(xg, xig)) {
                rep.verdict = EllipticVerdict::not_elliptic;
                rep.witness_x = best.x;
                rep.witness_xi = best.xi;
                rep.witness_x_exact = xr;
                rep.witness_xi_exact = xir;
                return rep;
            }
        }
        rep.verdict = EllipticVerdict::inconclusive;
        rep.witness_x = best.x;
        rep.witness_xi = best.xi;
        return rep;
    }
    rep.verdict = best.value > 10.0 * settings.tol ? EllipticVerdict::elliptic
                                                   : EllipticVerdict::inconclusive;
    return rep;
}

struct CharSet {
    struct Point {
        std::vector<double> x, xi;
        double value;
    };
    std::vector<Point> points;
    unsigned resolution = 0;
    size_t sphere_points = 0;
    double tol = 0;
};

inline CharSet characteristic_set_sample(const DiffOperator& P, const RegionBox& region,
                                         const SamplerSettings& settings = {}) {
    if (!region.valid() || region.dim() != P.dim())
        throw std::invalid_argument("characteristic_set_sample: empty or mismatched region");
    SymbolPoly p = principal_symbol(P);
    const int d = static_cast<int>(P.dim());
    CharSet cs;
    cs.resolution = settings.resolution;
    cs.sphere_points = settings.sphere_points;
    cs.tol = settings.tol;
    for (const auto& x : elliptic_detail::region_grid(region, settings.resolution)) {
        for (size_t k = 0; k < settings.sphere_points; ++k) {
            std::vector<double> xi = sphere_point(d, k);
            double v = std::abs(p.eval(x, xi));
            if (v <= settings.tol) cs.points.push_back({x, xi, v});
        }
    }
    return cs;
}

struct TubeDecomposition {
    std::vector<int> t_vars;  // indices into P's variables
    std::vector<int> x_vars;
    DiffOperator p0;          // over the t variables only
    bool p0_elliptic = false;
    bool same_order = false;
    EllipticityReport p0_report;

    bool guards_satisfied() const { return p0_elliptic && same_order; }
};

// Splits P per a t/x variable grouping. Succeeds iff every coefficient is a
// function of the t-group only; P0 keeps the beta = 0 terms, restricted to
// the t variables. Ellipticity of P0 is probed on the projected region.
inline std::optional<TubeDecomposition> tube_decompose(
    const DiffOperator& P, const std::vector<std::string>& t_var_names,
    std::optional<RegionBox> t_region = std::nullopt, const SamplerSettings& settings = {}) {
    std::vector<int> t_idx;
    for (const auto& name : t_var_names) {
        int k = P.var_index(name);
        if (k < 0) throw std::invalid_argument("tube_decompose: unknown variable " + name);
        t_idx.push_back(k);
    }
    std::vector<int> x_idx;
    for (size_t k = 0; k < P.dim(); ++k)
        if (std::find(t_idx.begin(), t_idx.end(), static_cast<int>(k)) == t_idx.end())
            x_idx.push_back(static_cast<int>(k));

    auto coeff_ok = [&](const CoeffExpr& c) {
        for (const auto& term : c.terms()) {
            if (!term.coeff.depends_only_on(t_idx)) return false;
            for (const auto& a : term.atoms)
                if (!a.arg.depends_only_on(t_idx)) return false;
        }
        return true;
    };
    for (const auto& [mi, c] : P.terms())
        if (!coeff_ok(c)) return std::nullopt;

    // remap the t-block onto its own ambient space
    std::vector<std::string> t_names;
    std::vector<int> mapping(P.dim(), -1);
    for (size_t j = 0; j < t_idx.size(); ++j) {
        mapping[static_cast<size_t>(t_idx[j])] = static_cast<int>(j);
        t_names.push_back(P.variables()[static_cast<size_t>(t_idx[j])]);
    }
    // unused x variables map beyond the t block; they never occur in P0
    int extra = static_cast<int>(t_idx.size());
    for (size_t k = 0; k < mapping.size(); ++k)
        if (mapping[k] < 0) mapping[k] = extra++;

    TubeDecomposition out;
    out.t_vars = t_idx;
    out.x_vars = x_idx;
    out.p0 = DiffOperator(t_names);
    for (const auto& [mi, c] : P.terms()) {
        bool pure_t = true;
        for (int xv : x_idx)
            if (mi[static_cast<size_t>(xv)] > 0) pure_t = false;
        if (!pure_t) continue;
        MultiIndex tmi(t_idx.size(), 0);
        for (size_t j = 0; j < t_idx.size(); ++j) tmi[j] = mi[static_cast<size_t>(t_idx[j])];
        // coefficients remap onto the t ambient space
        CoeffExpr remapped(static_cast<int>(t_idx.size()));
        for (const auto& term : c.terms()) {
            RationalFunction rc(term.coeff.num.remap(static_cast<int>(t_idx.size()), mapping),
                                term.coeff.den.remap(static_cast<int>(t_idx.size()), mapping));
            CoeffExpr piece(rc);
            for (const auto& a : term.atoms) {
                RationalFunction arg(a.arg.num.remap(static_cast<int>(t_idx.size()), mapping),
                                     a.arg.den.remap(static_cast<int>(t_idx.size()), mapping));
                switch (a.kind) {
                    case AtomKind::Exp: piece = piece * CoeffExpr::exp(arg); break;
                    case AtomKind::Sin: piece = piece * CoeffExpr::sin(arg); break;
                    case AtomKind::Cos: piece = piece * CoeffExpr::cos(arg); break;
                    case AtomKind::Pow: piece = piece * CoeffExpr::pow(arg, a.power); break;
                }
            }
            remapped = remapped + piece;
        }
        out.p0.add_term(tmi, remapped);
    }
    out.p0.prune();
    out.same_order = out.p0.order() == P.order();
    RegionBox box = t_region ? *t_region : RegionBox::unit_box(t_idx.size());
    out.p0_report = is_elliptic(out.p0, box, settings);
    out.p0_elliptic = out.p0_report.verdict == EllipticVerdict::elliptic;
    return out;
}

// sum_{|alpha| = m} |a_alpha(x0)| > 0, decided exactly.
inline bool nondegenerate_at(const DiffOperator& P, std::span<const GRat> x0) {
    unsigned m = P.order();
    for (const auto& [mi, c] : P.terms()) {
        if (mi_order(mi) != m) continue;
        if (!c.is_zero_at(x0)) return true;
    }
    return false;
}

}  // namespace hypoel

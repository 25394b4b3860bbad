#pragma once

// Inequality harness: runs the constrained and unconstrained potential
// estimates, the 1-d weighted Hardy checks, the rearrangement estimate, the
// Lorentz-Zygmund blow-up family, and the Orlicz-target checks, and reduces
// each run to an InequalityReport with a fitted trend.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "numeric.hpp"
#include "operators.hpp"
#include "profile.hpp"
#include "rearrange.hpp"
#include "spaces.hpp"
#include "young.hpp"

namespace ripot {

struct InequalityReport {
    enum class Trend { bounded, divergent, inconclusive };

    struct Row {
        std::string label;
        double level = 0.0; // refinement parameter for the trend fit
        double norm_x = 0.0;
        double norm_y = 0.0;
        double ratio = 0.0;
    };

    std::string inequality;
    std::vector<Row> rows;
    Trend trend = Trend::inconclusive;
    double slope = 0.0;    // least-squares slope of log ratio vs log level
    double constant = 0.0; // max ratio over the rows
};

inline const char* trend_name(InequalityReport::Trend t) {
    switch (t) {
        case InequalityReport::Trend::bounded: return "bounded";
        case InequalityReport::Trend::divergent: return "divergent";
        default: return "inconclusive";
    }
}

namespace detail {

inline std::string fmt_g(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

// slope of the least-squares line through (log level, log ratio); rows with
// nonpositive entries are skipped
inline double loglog_slope(const std::vector<InequalityReport::Row>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& row : rows) {
        if (!(row.ratio > 0.0) || !(row.level > 0.0)) continue;
        const double x = std::log(row.level), y = std::log(row.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2) return 0.0;
    const double den = k * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (k * sxy - sx * sy) / den;
}

} // namespace ripot::detail

/// Fills trend, slope and constant.  Divergent means ratios strictly increase
/// across all levels and the last one exceeds the first by at least 35%;
/// a logarithmic blow-up over three octaves clears that bar at 256^2
/// resolution while discretization drift of a genuinely bounded family stays
/// near 20%.  Bounded means every positive ratio sits inside a factor-3
/// window (all-zero reports are bounded).  The fitted slope is diagnostic
/// output, not a decision input.
inline void finalize_report(InequalityReport& rep) {
    rep.constant = 0.0;
    for (const auto& row : rep.rows) rep.constant = std::max(rep.constant, row.ratio);
    rep.slope = detail::loglog_slope(rep.rows);
    rep.trend = InequalityReport::Trend::inconclusive;
    if (rep.rows.size() < 3) return;

    bool increasing = true;
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        increasing = increasing && rep.rows[i].ratio < rep.rows[i + 1].ratio;
    if (increasing && rep.rows.back().ratio >= 1.35 * rep.rows.front().ratio) {
        rep.trend = InequalityReport::Trend::divergent;
        return;
    }
    double lo = inf, hi = 0.0;
    for (const auto& row : rep.rows) {
        if (row.ratio <= 0.0) continue;
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    if (hi == 0.0 || hi <= 3.0 * lo) rep.trend = InequalityReport::Trend::bounded;
}

inline std::string to_csv(const InequalityReport& rep) {
    std::ostringstream out;
    out.precision(15);
    out << "level,norm_X (dimensionless),norm_Y (dimensionless),ratio (dimensionless)\n";
    for (const auto& row : rep.rows)
        out << row.level << ',' << row.norm_x << ',' << row.norm_y << ',' << row.ratio << '\n';
    return out.str();
}

namespace detail {

/// Exact integral of s^w * f*(s) over (0, t) for a step profile.
inline double weighted_partial_step(const Profile& f, double w, double t) {
    if (f.head().present())
        throw std::invalid_argument("weighted_partial_step: step profiles only");
    double acc = 0.0;
    for (const auto& seg : f.segments()) {
        const double hi = std::min(seg.hi, t);
        if (!(seg.lo < hi)) break;
        if (seg.v != 0.0) acc += seg.v * power_log_integral(w, 0.0, 0.0, seg.lo, hi);
    }
    return acc;
}

/// Exact integral of s^w * H(s) over (0, t) for a piecewise power function.
inline double weighted_partial_piecewise(const PiecewisePower& H, double w, double t) {
    double acc = 0.0;
    for (const auto& seg : H.segs) {
        const double hi = std::min(seg.hi, t);
        if (!(seg.lo < hi)) continue;
        for (const auto& term : seg.terms)
            if (term.c != 0.0) acc += term.c * power_log_integral(w + term.e, 0.0, 0.0, seg.lo, hi);
    }
    return acc;
}

/// Exact weighted-L1 Lorentz-Zygmund norm (q = 1) of a non-increasing
/// piecewise power function, matching the weight convention of module spaces.
inline double lz_q1_norm_piecewise(const PiecewisePower& H, double p, double r) {
    double acc = 0.0;
    for (const auto& seg : H.segs)
        for (const auto& term : seg.terms)
            if (term.c != 0.0)
                acc += term.c * weight_integral(1.0 / p - 1.0 + term.e, r, 0.0, seg.lo, seg.hi);
    return acc;
}

/// Staircase surrogate: samples |H| on a geometric grid and rearranges the
/// cells into a step Profile, so any space norm applies.  Trend-grade
/// accuracy, not exact.
inline Profile staircase_profile(const PiecewisePower& H, int cells = 4096) {
    double S = 0.0;
    for (const auto& seg : H.segs) S = std::max(S, seg.hi);
    if (!(S > 0.0)) return Profile({}, {}, 1.0);
    const double base = S * 1e-12;
    struct Cell {
        double v, w;
    };
    std::vector<Cell> grid;
    grid.reserve(cells + 1);
    grid.push_back({std::abs(H.eval(base * 0.5)), base});
    const double step = std::pow(S / base, 1.0 / cells);
    double lo = base;
    for (int i = 0; i < cells; ++i) {
        const double hi = i + 1 == cells ? S : lo * step;
        grid.push_back({std::abs(H.eval(std::sqrt(lo * hi))), hi - lo});
        lo = hi;
    }
    std::sort(grid.begin(), grid.end(), [](const Cell& a, const Cell& b) { return a.v > b.v; });
    std::vector<double> edges(grid.size()), values(grid.size());
    double pos = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        pos += grid[i].w;
        edges[i] = pos;
        values[i] = grid[i].v;
    }
    const double total = std::max(S, pos); // guard against summation round-off
    return Profile(std::move(edges), std::move(values), total);
}

} // namespace ripot::detail

/// Weighted Hardy inequality over a profile family: the tail average
/// H f(s) = int_s^inf r^(alpha/n - 1) f(r) dr (or its dual, the weighted head
/// average) measured in Y against f in X.  For Y = Lorentz(p,1) the forward
/// ratio is an exact constant n/(n - alpha) when X = L1.
inline InequalityReport check_hardy_pair(const SpaceSpec& X, const SpaceSpec& Y,
                                         const std::vector<Profile>& family, int n, double alpha,
                                         bool dual = false) {
    InequalityReport rep;
    rep.inequality = std::string(dual ? "hardy-dual " : "hardy ") + X.label + " -> " + Y.label;
    rep.rows.resize(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
        const Profile& f = family[i];
        const PiecewisePower H = dual ? hardy_dual(f, n, alpha) : hardy(f, n, alpha);
        double ny = 0.0;
        if (!dual && Y.q == 1.0 && Y.family == SpaceSpec::Family::lorentz_star) {
            ny = H.weighted_l1(1.0 / Y.p);
        } else if (!dual && Y.q == 1.0 && Y.family == SpaceSpec::Family::lorentz_zygmund_star) {
            ny = detail::lz_q1_norm_piecewise(H, Y.p, Y.r);
        } else {
            ny = norm(Y, detail::staircase_profile(H));
        }
        const double nx = norm(X, f);
        rep.rows[i] = {"member " + std::to_string(i + 1), double(i + 1), nx, ny,
                       nx > 0.0 ? ny / nx : 0.0};
    });
    finalize_report(rep);
    return rep;
}

/// Potential estimate over a concentrating family: ratio of the Y norm of
/// the order-alpha potential to the X norm of the input, per level.  The
/// constrained family is divergence-free, the unconstrained one is scalar.
inline InequalityReport check_constrained_riesz(const SpaceSpec& X, const SpaceSpec& Y,
                                                bool constrained, int n, double alpha,
                                                const std::vector<double>& levels, int M = 256,
                                                double box = 1.0) {
    InequalityReport rep;
    rep.inequality = std::string(constrained ? "constrained " : "unconstrained ") + "riesz " +
                     X.label + " -> " + Y.label;
    const auto family = constrained ? make_divfree_family(levels, n, M, box)
                                    : make_unconstrained_family(levels, n, M, box);
    RieszSpec rs;
    rs.alpha = alpha;
    rs.enforce_support = false; // spectral tails outside the bump are harmless here
    rep.rows.resize(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
        const GriddedField G = riesz(family[i], rs);
        const double nx = norm(X, decreasing_rearrangement(family[i]));
        const double ny = norm(Y, decreasing_rearrangement(G));
        rep.rows[i] = {"level " + detail::fmt_g(levels[i]), levels[i], nx, ny,
                       nx > 0.0 ? ny / nx : 0.0};
    });
    finalize_report(rep);
    return rep;
}

/// Rearrangement estimate for a single divergence-free field: compares
/// int_0^t s^(-alpha/n) (potential)*(s) ds against the same weighted partial
/// of the tail average of F*, over a grid of t values.
inline InequalityReport check_rearrangement_estimate(const GriddedField& F, int n, double alpha,
                                                     const std::vector<double>& t_grid) {
    const double sup = F.sup_norm();
    InequalityReport rep;
    rep.inequality = "rearrangement estimate";
    rep.rows.resize(t_grid.size());
    if (sup == 0.0) { // trivially solenoidal, skip the component-count gate
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            rep.rows[i] = {"t = " + detail::fmt_g(t_grid[i]), t_grid[i], 0.0, 0.0, 0.0};
        finalize_report(rep);
        return rep;
    }
    if (div_k(F, 1).sup_norm() > 1e-10 * std::max(1.0, sup) * F.M / F.box)
        throw std::domain_error("check_rearrangement_estimate: field is not divergence-free");

    RieszSpec rs;
    rs.alpha = alpha;
    rs.enforce_support = false;
    const Profile g = decreasing_rearrangement(riesz(F, rs));
    const Profile f = decreasing_rearrangement(F);
    const PiecewisePower H = hardy(f, n, alpha);
    const double beta = alpha / n;

    std::vector<InequalityReport::Row>& rows = rep.rows;
    parallel_for(t_grid.size(), [&](std::size_t i) {
        const double t = t_grid[i];
        const double lhs = detail::weighted_partial_step(g, -beta, t);
        const double rhs = detail::weighted_partial_piecewise(H, -beta, t);
        rows[i] = {"t = " + detail::fmt_g(t), t, rhs, lhs, rhs > 0.0 ? lhs / rhs : 0.0};
    });
    finalize_report(rep);
    // t is a sweep coordinate, not a refinement level: once t passes the
    // field's support measure both sides are constant, so the ratio always
    // saturates toward its supremum and monotone approach must not read as
    // divergence.  The window check alone decides.
    if (rep.trend == InequalityReport::Trend::divergent) {
        double lo = inf, hi = 0.0;
        for (const auto& row : rep.rows) {
            if (row.ratio <= 0.0) continue;
            lo = std::min(lo, row.ratio);
            hi = std::max(hi, row.ratio);
        }
        rep.trend = (hi == 0.0 || hi <= 3.0 * lo) ? InequalityReport::Trend::bounded
                                                  : InequalityReport::Trend::inconclusive;
    }
    return rep;
}

/// Truncated blow-up family for the log-refined Lorentz target.  Both sides
/// are integrals over (eps, 1) of explicit power-log expressions; the log
/// factors are frozen at their s = 1/2 values on (1/2, 1) so both ends stay
/// integrable.  LHS carries one more log power than RHS and diverges inside
/// the admissible gamma window while RHS converges.
inline InequalityReport run_counterexample_LZ(int n, double alpha, double q, double r, double gamma,
                                              const std::vector<double>& eps_list,
                                              int steps = 4096) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("run_counterexample_LZ: need q in [1, inf)");
    if (!(gamma > 1.0 + r + 1.0 / q && gamma < 2.0 + r + 1.0 / q))
        throw std::invalid_argument(
            "run_counterexample_LZ: gamma must lie in (1 + r + 1/q, 2 + r + 1/q)");
    if (!(alpha > 0.0 && alpha < n))
        throw std::invalid_argument("run_counterexample_LZ: need 0 < alpha < n");

    const double u0 = std::log(2.0); // freeze point, s0 = 1/2
    const double lg2 = std::log(2.0);
    const double cnorm = std::pow(gamma - 1.0, -q);

    // composite Simpson on (a, b); integrands are smooth between the kinks
    auto simpson = [&](auto&& g, double a, double b, int m) {
        if (!(b > a)) return 0.0;
        if (m % 2) ++m;
        const double h = (b - a) / m;
        double acc = g(a) + g(b);
        for (int i = 1; i < m; ++i) acc += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    const double lmid = (1.0 - gamma) * q; // power of the frozen log factor
    auto lhs_integrand = [&](double u) {
        const double ue = std::max(u, u0);
        return std::pow(u + lg2, (r + 1.0) * q) * std::pow(ue, lmid);
    };
    auto rhs_integrand = [&](double u) {
        const double ue = std::max(u, u0);
        return std::exp(-(q * alpha / n) * u) * std::pow(u + lg2, r * q) * std::pow(ue, lmid);
    };
    auto truncated = [&](auto&& g, double U) {
        const double head = simpson(g, 0.0, std::min(U, u0), 64);
        return cnorm * (head + simpson(g, u0, U, steps));
    };

    InequalityReport rep;
    rep.inequality = "log-refined Lorentz target blow-up";
    std::vector<double> eps = eps_list;
    std::sort(eps.begin(), eps.end(), std::greater<double>());
    for (double e : eps) {
        if (!(e > 0.0 && e < 0.5))
            throw std::invalid_argument("run_counterexample_LZ: eps must lie in (0, 1/2)");
        const double U = std::log(1.0 / e);
        const double lhs = truncated(lhs_integrand, U);
        const double rhs = truncated(rhs_integrand, U);
        rep.rows.push_back({"eps = " + detail::fmt_g(e), U, rhs, lhs, lhs / rhs});
    }
    finalize_report(rep);
    return rep;
}

/// Orlicz-target potential estimate over the divergence-free family.  The
/// target is built from the source Young function: its order-alpha conjugate,
/// the refined Orlicz-Lorentz target, or the plain sup norm when the
/// conjugate gate integral converges at infinity.
enum class OrliczVariant { conjugate_target, hat_lorentz_target, sup_target };

inline InequalityReport check_orlicz_theorem(const YoungFunction& A, int n, double alpha,
                                             bool finite_measure = false,
                                             OrliczVariant variant = OrliczVariant::conjugate_target,
                                             const std::vector<double>& levels = {1.0, 2.0, 4.0,
                                                                                  8.0},
                                             int M = 256) {
    InequalityReport rep;
    const double L = finite_measure ? 1.0 : inf;
    const SpaceSpec X = SpaceSpec::orlicz_space(A, L);

    SpaceSpec Y = SpaceSpec::lebesgue_space(inf, L);
    switch (variant) {
        case OrliczVariant::conjugate_target:
            Y = SpaceSpec::orlicz_space(sobolev_conjugate(A, n, alpha), L);
            break;
        case OrliczVariant::hat_lorentz_target:
            Y = SpaceSpec::orlicz_lorentz(hat_construction(A, n, alpha), double(n) / alpha, L);
            break;
        case OrliczVariant::sup_target:
            break;
    }
    rep.inequality = "orlicz potential " + X.label + " -> " + Y.label;

    const auto family = make_divfree_family(levels, n, M);
    RieszSpec rs;
    rs.alpha = alpha;
    rs.enforce_support = false;
    rep.rows.resize(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
        const GriddedField G = riesz(family[i], rs);
        const double nx = norm(X, decreasing_rearrangement(family[i]));
        const double ny = norm(Y, decreasing_rearrangement(G));
        rep.rows[i] = {"level " + detail::fmt_g(levels[i]), levels[i], nx, ny,
                       nx > 0.0 ? ny / nx : 0.0};
    });
    finalize_report(rep);
    return rep;
}

} // namespace ripot

#pragma once

// K-functionals over the three supported couples, the closed-form Holmstedt
// functional, and the constructive dyadic decomposition that splits a
// divergence-free field into an integrable piece and a Lorentz-bounded piece
// at matched cost.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "numeric.hpp"
#include "operators.hpp"
#include "profile.hpp"
#include "rearrange.hpp"
#include "spaces.hpp"

namespace ripot {

struct KQuery {
    enum class Couple {
        l1_linf,       // (L^1, L^inf)
        l1_lorentz,    // (L^1, L^{p,q})
        lorentz1_linf, // (L^{p,1}, L^inf)
    };
    Couple couple = Couple::l1_linf;
    double t = 1.0;
    double p = 2.0;
    double q = 1.0;
};

namespace detail {

// candidate truncation levels: distinct profile values, geometric midpoints,
// and a short ladder below the smallest positive value
inline std::vector<double> truncation_levels(const Profile& f) {
    std::vector<double> vs = f.distinct_values();
    std::vector<double> grid{0.0};
    for (std::size_t i = 0; i < vs.size(); ++i) {
        grid.push_back(vs[i]);
        if (i + 1 < vs.size() && vs[i + 1] > 0.0) grid.push_back(std::sqrt(vs[i] * vs[i + 1]));
    }
    if (!vs.empty() && vs.back() > 0.0)
        for (int j = 1; j <= 6; ++j) grid.push_back(vs.back() * std::pow(0.5, j));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// exact Lorentz(p,1) norm of the part above level lambda
inline double lorentz1_excess(const Profile& f, double p, double lambda) {
    double acc = 0.0;
    for (const auto& seg : f.segments()) {
        if (!(seg.v > lambda)) break;
        acc += (seg.v - lambda) * power_log_integral(1.0 / p - 1.0, 0.0, 0.0, seg.lo, seg.hi);
    }
    return acc;
}

inline Profile truncate_above(const Profile& f, double lambda) {
    std::vector<double> edges(f.edges().begin() + 1, f.edges().end());
    std::vector<double> values = f.values();
    for (double& v : values) v = std::min(v, lambda);
    return Profile(std::move(edges), std::move(values), f.domain_length());
}

} // namespace ripot::detail

/// Best decomposition cost over the truncation family f = (f - min(f, l)) +
/// min(f, l).  Exactly optimal for the (L^1, L^inf) and (L^{p,1}, L^inf)
/// couples, where the objective is piecewise linear in the level; an upper
/// bound for (L^1, L^{p,q}).
inline double k_functional_bruteforce(const Profile& f, const KQuery& qr) {
    if (!(qr.t > 0.0)) throw std::invalid_argument("k_functional_bruteforce: t must be positive");
    if (f.head().present())
        throw std::invalid_argument("k_functional_bruteforce: step profiles only");
    const auto levels = detail::truncation_levels(f);
    double best = inf;
    for (double lambda : levels) {
        double cost = 0.0;
        switch (qr.couple) {
            case KQuery::Couple::l1_linf:
                cost = f.excess(lambda) + qr.t * lambda;
                break;
            case KQuery::Couple::lorentz1_linf:
                cost = detail::lorentz1_excess(f, qr.p, lambda) + qr.t * lambda;
                break;
            case KQuery::Couple::l1_lorentz: {
                const Profile low = detail::truncate_above(f, lambda);
                cost = f.excess(lambda) + qr.t * norm(SpaceSpec::lorentz(qr.p, qr.q), low);
                break;
            }
        }
        best = std::min(best, cost);
    }
    return best;
}

/// Closed-form two-piece functional: int_0^tau f* + t (int_tau^inf
/// s^(q/p - 1) f*(s)^q ds)^(1/q) with tau = t^(p'), exact on step profiles.
inline double holmstedt(const Profile& f, double p, double q, double t) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("holmstedt: p outside (1, inf)");
    if (!(q >= 1.0)) throw std::invalid_argument("holmstedt: q below 1");
    if (!(t > 0.0)) throw std::invalid_argument("holmstedt: t must be positive");
    if (f.head().present()) throw std::invalid_argument("holmstedt: step profiles only");

    const double pp = p / (p - 1.0);
    const double tau = std::pow(t, pp);
    double value = f.integral_to(tau);

    if (std::isinf(q)) {
        double sup = 0.0;
        for (const auto& seg : f.segments())
            if (seg.hi > tau) sup = std::max(sup, seg.v * std::pow(seg.hi, 1.0 / p));
        return value + t * sup;
    }
    double tail = 0.0;
    for (const auto& seg : f.segments()) {
        const double lo = std::max(seg.lo, tau);
        if (!(lo < seg.hi) || seg.v == 0.0) continue;
        tail += std::pow(seg.v, q) * power_log_integral(q / p - 1.0, 0.0, 0.0, lo, seg.hi);
    }
    return value + t * std::pow(tail, 1.0 / q);
}

/// Dyadic stopping-time decomposition at level lambda: the good part is
/// bounded by 2^n lambda (the parent-cube mean bound), the bad parts are
/// mean-zero on disjoint dyadic cubes of total measure at most |F|_1/lambda.
struct CZDecomposition {
    double lambda = 0.0;
    GriddedField good;
    struct BadPart {
        std::array<int, 3> anchor{0, 0, 0}; // cell coordinates of the cube corner
        int side = 0;                       // cells per axis
        std::vector<double> data;           // component-major within the cube
    };
    std::vector<BadPart> bad_parts;
    double total_bad_measure = 0.0;
    double c_cz = 0.0; // the dimensional constant 2^n

    /// Scatter one bad part back onto a full grid (accumulating).
    static void add_part(const BadPart& b, GriddedField& out) {
        const int s = b.side;
        const int span = out.n == 2 ? s * s : s * s * s;
        for (int c = 0; c < out.m; ++c)
            for (int local = 0; local < span; ++local) {
                int i = b.anchor[0], j = b.anchor[1], k = b.anchor[2];
                if (out.n == 2) {
                    i += local / s;
                    j += local % s;
                    out.at(c, static_cast<std::size_t>(i) * out.M + j) +=
                        b.data[static_cast<std::size_t>(c) * span + local];
                } else {
                    i += local / (s * s);
                    j += (local / s) % s;
                    k += local % s;
                    out.at(c, (static_cast<std::size_t>(i) * out.M + j) * out.M + k) +=
                        b.data[static_cast<std::size_t>(c) * span + local];
                }
            }
    }
};

inline CZDecomposition cz_decompose(const GriddedField& F, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("cz_decompose: level must be positive");
    if ((F.M & (F.M - 1)) != 0)
        throw std::invalid_argument("cz_decompose: grid side must be a power of two");

    CZDecomposition out;
    out.lambda = lambda;
    out.c_cz = std::pow(2.0, F.n);
    out.good = F;

    auto cell_index = [&](int i, int j, int k) {
        return F.n == 2 ? static_cast<std::size_t>(i) * F.M + j
                        : (static_cast<std::size_t>(i) * F.M + j) * F.M + k;
    };
    auto cube_mean = [&](const std::array<int, 3>& a, int side) {
        double acc = 0.0;
        const int kmax = F.n == 2 ? 1 : side;
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j)
                for (int k = 0; k < kmax; ++k)
                    acc += F.cell_norm(cell_index(a[0] + i, a[1] + j, a[2] + k));
        const double cells = F.n == 2 ? side * side : side * side * side;
        return acc / cells;
    };

    auto select = [&](const std::array<int, 3>& a, int side) {
        CZDecomposition::BadPart b;
        b.anchor = a;
        b.side = side;
        const int span = F.n == 2 ? side * side : side * side * side;
        b.data.resize(static_cast<std::size_t>(F.m) * span);
        const int kmax = F.n == 2 ? 1 : side;
        for (int c = 0; c < F.m; ++c) {
            double avg = 0.0;
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j)
                    for (int k = 0; k < kmax; ++k)
                        avg += F.at(c, cell_index(a[0] + i, a[1] + j, a[2] + k));
            avg /= span;
            int local = 0;
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j)
                    for (int k = 0; k < kmax; ++k, ++local) {
                        const std::size_t idx = cell_index(a[0] + i, a[1] + j, a[2] + k);
                        b.data[static_cast<std::size_t>(c) * span + local] = F.at(c, idx) - avg;
                        out.good.at(c, idx) = avg;
                    }
        }
        out.total_bad_measure +=
            (F.n == 2 ? side * side : side * side * side) * F.cell_measure();
        out.bad_parts.push_back(std::move(b));
    };

    // stopping-time recursion: select a cube as soon as its mean exceeds the
    // level, otherwise subdivide
    std::vector<std::pair<std::array<int, 3>, int>> stack;
    if (cube_mean({0, 0, 0}, F.M) > lambda) {
        select({0, 0, 0}, F.M);
    } else {
        stack.push_back({{0, 0, 0}, F.M});
    }
    while (!stack.empty()) {
        auto [a, side] = stack.back();
        stack.pop_back();
        if (side == 1) continue;
        const int hs = side / 2;
        const int kmax = F.n == 2 ? 1 : 2;
        for (int di = 0; di < 2; ++di)
            for (int dj = 0; dj < 2; ++dj)
                for (int dk = 0; dk < kmax; ++dk) {
                    const std::array<int, 3> child{a[0] + di * hs, a[1] + dj * hs,
                                                   a[2] + dk * hs};
                    if (cube_mean(child, hs) > lambda)
                        select(child, hs);
                    else
                        stack.push_back({child, hs});
                }
    }
    return out;
}

/// Splits a divergence-free field as F = F0 + F1 with both parts again
/// divergence-free: dyadic decomposition at level t^(-p'), then projection of
/// the two halves.  cost = |F0|_1 + t |F1|_{p,q}.
struct DivfreeSplit {
    GriddedField F0, F1;
    double cost = 0.0;
    double lambda = 0.0;
};

inline DivfreeSplit divfree_decompose(const GriddedField& F, double t, double p, double q) {
    if (!(t > 0.0)) throw std::invalid_argument("divfree_decompose: t must be positive");
    const double sup = F.sup_norm();
    const double divscale = std::max(1.0, sup) * F.M / F.box;
    if (div_k(F, 1).sup_norm() > 1e-10 * divscale)
        throw std::domain_error("divfree_decompose: field is not divergence-free");
    for (int c = 0; c < F.m; ++c)
        if (std::abs(F.component_mean(c)) > 1e-10 * std::max(1.0, sup))
            throw std::domain_error("divfree_decompose: field must have zero mean");

    DivfreeSplit out;
    const double pp = p / (p - 1.0);
    out.lambda = std::pow(t, -pp);

    const CZDecomposition cz = cz_decompose(F, out.lambda);
    if (cz.bad_parts.empty()) {
        out.F0 = GriddedField(F.n, F.M, F.m, F.box);
        out.F1 = project(F);
    } else {
        GriddedField K(F.n, F.M, F.m, F.box);
        for (const auto& b : cz.bad_parts) CZDecomposition::add_part(b, K);
        out.F0 = project(K);
        out.F1 = project(cz.good);
    }
    out.cost = out.F0.l1_norm() +
               t * norm(SpaceSpec::lorentz(p, q), decreasing_rearrangement(out.F1));
    return out;
}

} // namespace ripot

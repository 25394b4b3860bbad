#pragma once

// Decreasing rearrangement of sampled fields, and averaged-majorization
// comparison of profiles through their running averages.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "profile.hpp"

namespace ripot {

/// Decreasing rearrangement of the pointwise Euclidean magnitude |F|.  Cells
/// with equal magnitude merge into one step, so widths are exact multiples of
/// the cell measure and sums over the field equal integrals of the profile.
inline Profile decreasing_rearrangement(const GriddedField& F) {
    std::vector<double> mags(F.cells());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = F.cell_norm(i);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    const double w = F.cell_measure();
    std::vector<double> edges, values;
    std::size_t i = 0;
    while (i < mags.size() && mags[i] > 0.0) {
        std::size_t j = i;
        while (j < mags.size() && mags[j] == mags[i]) ++j;
        edges.push_back(static_cast<double>(j) * w);
        values.push_back(mags[i]);
        i = j;
    }
    return Profile(std::move(edges), std::move(values), static_cast<double>(F.cells()) * w);
}

struct MajorizationReport {
    bool ok = true;
    double worst_s = 0.0; // point with the largest ratio of running averages
    double lhs = 0.0;     // f**(worst_s)
    double rhs = 0.0;     // g**(worst_s)
};

/// Checks f**(s) <= g**(s) (1 + 1e-12) over the merged breakpoints of both
/// profiles.  Between breakpoints of step profiles the difference of running
/// averages is monotone, so the breakpoint check together with the sup
/// comparison at s -> 0 decides the ordering exactly; head regions get a
/// geometric ladder of extra sample points.
inline MajorizationReport hardy_majorization_check(const Profile& f, const Profile& g) {
    const double L = f.domain_length();
    if (std::abs(L - g.domain_length()) > 1e-12 * std::max(1.0, L))
        throw std::invalid_argument("hardy_majorization_check: domain mismatch");

    std::vector<double> pts;
    for (double e : f.edges())
        if (e > 0.0) pts.push_back(e);
    for (double e : g.edges())
        if (e > 0.0) pts.push_back(e);
    pts.push_back(L);
    for (const Profile* p : {&f, &g}) {
        if (p->head().present()) {
            double s = p->head().cut;
            for (int t = 0; t < 60 && s > 1e-300; ++t) {
                s *= 0.5;
                pts.push_back(s);
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    MajorizationReport rep;
    rep.worst_s = 0.0;
    rep.lhs = f.sup();
    rep.rhs = g.sup();
    double worst = rep.rhs == 0.0 ? (rep.lhs > 0.0 ? inf : 1.0)
                                  : (rep.lhs == rep.rhs ? 1.0 : rep.lhs / rep.rhs);
    for (double s : pts) {
        const double a = f.double_star(s);
        const double b = g.double_star(s);
        const double ratio = b == 0.0 ? (a > 0.0 ? inf : 1.0) : a / b;
        if (ratio > worst) {
            worst = ratio;
            rep.worst_s = s;
            rep.lhs = a;
            rep.rhs = b;
        }
    }
    rep.ok = worst <= 1.0 + 1e-12;
    return rep;
}

} // namespace ripot

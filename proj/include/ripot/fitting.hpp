#pragma once

// Small least-squares helpers for measuring power-law exponents with
// logarithmic corrections from tabulated functions.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ripot {

struct PowerLogFit {
    double p = 0.0; // coefficient of x (the power)
    double r = 0.0; // coefficient of z (the log correction)
    double c = 0.0; // intercept
};

/// Least squares for y ~ c + p x + r z.
inline PowerLogFit fit_power_log(const std::vector<double>& x, const std::vector<double>& z,
                                 const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || z.size() != n || y.size() != n)
        throw std::invalid_argument("fit_power_log: need >= 3 aligned samples");
    Eigen::MatrixXd M(n, 3);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) {
        M(i, 0) = 1.0;
        M(i, 1) = x[i];
        M(i, 2) = z[i];
        b(i) = y[i];
    }
    const Eigen::Vector3d sol = M.colPivHouseholderQr().solve(b);
    return {sol(1), sol(2), sol(0)};
}

struct ShiftedPowerLogFit {
    double p = 0.0;
    double r = 0.0;
    double c0 = 0.0; // profiled shift inside the log factor
    double rss = 0.0;
    double g = 0.0; // profiled weight of the iterated inner log, if any
};

namespace detail {
/// candidate shifts for the log-factor argument: a two-sided geometric
/// ladder plus zero, since constructed laws can carry shifts of either sign
inline std::vector<double> shift_grid() {
    std::vector<double> c{0.0};
    for (int k = -12; k <= 14; ++k) {
        c.push_back(std::pow(2.0, 0.5 * k));
        c.push_back(-std::pow(2.0, 0.5 * k));
    }
    return c;
}
} // namespace detail

/// Least squares for y ~ c + p x + r log(c0 + u), u = x (near infinity,
/// x = log t > 0) or u = -x (near zero), with the nuisance shift c0
/// profiled over a geometric grid.  Power-log asymptotics hold only up to
/// dilations, which shift the log factor by a constant; profiling c0
/// removes that nuisance from the exponent estimates.
inline ShiftedPowerLogFit fit_power_log_shifted(const std::vector<double>& x,
                                                const std::vector<double>& y, bool near_zero) {
    ShiftedPowerLogFit best;
    bool have = false;
    for (double c0 : detail::shift_grid()) {
        std::vector<double> z(x.size());
        bool ok = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = near_zero ? -x[i] : x[i];
            if (c0 + u < 0.05) {
                ok = false;
                break;
            }
            z[i] = std::log(c0 + u);
        }
        if (!ok) continue;
        const auto f = fit_power_log(x, z, y);
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - (f.c + f.p * x[i] + f.r * z[i]);
            rss += e * e;
        }
        if (!have || rss < best.rss) {
            best = {f.p, f.r, c0, rss};
            have = true;
        }
    }
    if (!have) throw std::invalid_argument("fit_power_log_shifted: no admissible shift");
    return best;
}

/// Least squares for y ~ c + p x (plain log-log slope).
inline PowerLogFit fit_power(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_power: need >= 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double d = n * sxx - sx * sx;
    const double p = (n * sxy - sx * sy) / d;
    return {p, 0.0, (sy - p * sx) / n};
}

/// Like fit_power_log_shifted but with an iterated inner correction:
///   z = log(c0 + u + g log(c0 + u)),   u = x or -x,
/// profiling c0 and, unless a fixed value is supplied, the inner weight g.
/// Compositions of power-log laws (conjugation, inversion of a
/// parametrised curve) yield log factors whose argument carries its own
/// log-sized shift; with the plain shifted basis that residual drift leaks
/// into r, while the g term absorbs it.  Conjugation in particular gives
/// g = 1 exactly, which callers should pin to avoid ridge ambiguity.
inline ShiftedPowerLogFit fit_power_log_iterated(
    const std::vector<double>& x, const std::vector<double>& y, bool near_zero,
    double fixed_g = std::numeric_limits<double>::quiet_NaN()) {
    ShiftedPowerLogFit best;
    bool have = false;
    std::vector<double> z(x.size());
    for (double c0 : detail::shift_grid()) {
        for (int j = -16; j <= 16; ++j) {
            const double g = std::isnan(fixed_g) ? 0.25 * j : fixed_g;
            if (!std::isnan(fixed_g) && j != 0) continue;
            bool ok = true;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double u = near_zero ? -x[i] : x[i];
                if (c0 + u < 0.05) {
                    ok = false;
                    break;
                }
                const double arg = c0 + u + g * std::log(c0 + u);
                if (arg < 0.05) {
                    ok = false;
                    break;
                }
                z[i] = std::log(arg);
            }
            if (!ok) continue;
            const auto f = fit_power_log(x, z, y);
            double rss = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double e = y[i] - (f.c + f.p * x[i] + f.r * z[i]);
                rss += e * e;
            }
            if (!have || rss < best.rss) {
                best = {f.p, f.r, c0, rss, g};
                have = true;
            }
        }
    }
    if (!have) throw std::invalid_argument("fit_power_log_iterated: no admissible shift");
    return best;
}

/// fit_power_log_iterated with the power pinned to a known value P:
///   y - P x ~ c + r z,   z = log(c0 + u + g log(c0 + u)).
/// When theory fixes the power and only the log correction is in question,
/// pinning removes the near-collinearity between x and z that otherwise
/// lets error drift between p and r.
inline ShiftedPowerLogFit fit_power_log_pinned(
    const std::vector<double>& x, const std::vector<double>& y, double P, bool near_zero,
    double fixed_g = std::numeric_limits<double>::quiet_NaN()) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n)
        throw std::invalid_argument("fit_power_log_pinned: need >= 3 aligned samples");
    ShiftedPowerLogFit best;
    bool have = false;
    std::vector<double> z(n);
    for (double c0 : detail::shift_grid()) {
        for (int j = -16; j <= 16; ++j) {
            const double g = std::isnan(fixed_g) ? 0.25 * j : fixed_g;
            if (!std::isnan(fixed_g) && j != 0) continue;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                const double u = near_zero ? -x[i] : x[i];
                if (c0 + u < 0.05) {
                    ok = false;
                    break;
                }
                const double arg = c0 + u + g * std::log(c0 + u);
                if (arg < 0.05) {
                    ok = false;
                    break;
                }
                z[i] = std::log(arg);
            }
            if (!ok) continue;
            double sz = 0, szz = 0, sw = 0, szw = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = y[i] - P * x[i];
                sz += z[i];
                szz += z[i] * z[i];
                sw += w;
                szw += z[i] * w;
            }
            const double den = n * szz - sz * sz;
            if (!(std::abs(den) > 0)) continue;
            const double r = (n * szw - sz * sw) / den;
            const double c = (sw - r * sz) / n;
            double rss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = y[i] - P * x[i] - c - r * z[i];
                rss += e * e;
            }
            if (!have || rss < best.rss) {
                best = {P, r, c0, rss, g};
                have = true;
            }
        }
    }
    if (!have) throw std::invalid_argument("fit_power_log_pinned: no admissible shift");
    return best;
}

/// Rate estimator for doubly exponential decay with a slowly varying
/// factor.  When -log A(t) = q L - r0 log L + const along L = c2 t^-m,
/// the observable y(x) = -log A(e^x) obeys
///   y(x) = q c2 exp(-m x) + r0 m x + const
/// with c2 and the constant unknown.  m is scanned geometrically around the
/// raw log-log slope of y, the linear pair profiled at each m, and the
/// residual minimum refined by one parabolic step.
inline double fit_stretched_exponent(const std::vector<double>& x, const std::vector<double>& y,
                                     double q, double r0) {
    const std::size_t n = x.size();
    if (n < 4 || y.size() != n)
        throw std::invalid_argument("fit_stretched_exponent: need >= 4 aligned samples");
    std::vector<double> ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(y[i] > 0.0))
            throw std::invalid_argument("fit_stretched_exponent: y must stay positive");
        ly[i] = std::log(y[i]);
    }
    const double m_raw = -fit_power(x, ly).p;
    if (!(m_raw > 0.0))
        throw std::invalid_argument("fit_stretched_exponent: y does not decay in x");
    auto rss_at = [&](double m) {
        double s11 = 0, s12 = 0, b1 = 0, b2 = 0;
        const double s22 = static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = q * std::exp(-m * x[i]);
            const double w = y[i] - r0 * m * x[i];
            s11 += e * e;
            s12 += e;
            b1 += e * w;
            b2 += w;
        }
        const double det = s11 * s22 - s12 * s12;
        const double c2 = (b1 * s22 - b2 * s12) / det;
        const double cc = (s11 * b2 - s12 * b1) / det;
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - r0 * m * x[i] - c2 * q * std::exp(-m * x[i]) - cc;
            rss += r * r;
        }
        return rss;
    };
    const int half = 60; // covers [m_raw/2, 2 m_raw] at ~1.2% resolution
    int jb = -half - 1;
    double rb = 0.0;
    std::vector<double> rss(2 * half + 1);
    for (int j = -half; j <= half; ++j) {
        rss[j + half] = rss_at(m_raw * std::pow(2.0, j / static_cast<double>(half)));
        if (jb < -half || rss[j + half] < rb) {
            rb = rss[j + half];
            jb = j;
        }
    }
    double jf = jb;
    if (jb > -half && jb < half) {
        const double rm = rss[jb - 1 + half], r0v = rss[jb + half], rp = rss[jb + 1 + half];
        const double den = rm - 2 * r0v + rp;
        if (den > 0) jf = jb + 0.5 * (rm - rp) / den;
    }
    return m_raw * std::pow(2.0, jf / static_cast<double>(half));
}

} // namespace ripot

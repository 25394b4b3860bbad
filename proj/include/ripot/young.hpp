#pragma once

// Young-function calculus: evaluation, density, inversion, the rearranged
// Sobolev conjugate, the hat transform built from the density, and the
// two-sided dilation equivalence test.
//
// Every constructed function lives on a log-spaced table with analytic
// extrapolation by the endpoint slopes, so pure powers stay exact under
// tabulation and regime fits can use the outer decades.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace ripot {

/// Evaluation grid shared by all tabulated constructions: log-spaced,
/// 400 points per decade pair.
inline std::vector<double> log_grid(double lo, double hi, int per_decade_pair = 400) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: bad range");
    const double decades = std::log10(hi / lo);
    const int n = std::max(8, static_cast<int>(std::lround(decades * per_decade_pair / 2.0)));
    std::vector<double> g(n + 1);
    const double step = std::log(hi / lo) / n;
    for (int i = 0; i <= n; ++i) g[i] = lo * std::exp(step * i);
    g.back() = hi;
    return g;
}

/// Signals a divergent gate or tail integral in the conjugate/hat
/// constructions; carries the measured local exponent of the offender.
struct DivergentIntegral : std::runtime_error {
    DivergentIntegral(const std::string& what, double exponent)
        : std::runtime_error(what + " (local exponent " + std::to_string(exponent) + ")"),
          local_exponent(exponent) {}
    double local_exponent;
};

/// Power-law asymptote marker A(t) ~ const * t^p * (log t or log 1/t)^r in
/// one regime; used to integrate symbolic heads and tails exactly.
struct Asymptote {
    bool known = false;
    double p = 0.0;
    double r = 0.0;
};

/// A convex Young function A with A(0) = 0, evaluated through log A to keep
/// doubly-exponential regimes representable.  Either analytic (closure for
/// log A and the density a) or tabulated on a log grid.
class YoungFunction {
public:
    YoungFunction() = default;

    /// Analytic form: log_A(t) for t > 0, density a(t) (may be empty).
    static YoungFunction analytic(std::function<double(double)> log_A,
                                  std::function<double(double)> density, std::string label,
                                  Asymptote near_zero = {}, Asymptote near_inf = {}) {
        YoungFunction y;
        y.log_A_ = std::move(log_A);
        y.density_ = std::move(density);
        y.label_ = std::move(label);
        y.near_zero_ = near_zero;
        y.near_inf_ = near_inf;
        return y;
    }

    /// Tabulated form from strictly increasing t values and finite log A
    /// values; finite_until marks a jump to +inf beyond it (inf if none).
    static YoungFunction tabulated(const std::vector<double>& t, const std::vector<double>& log_A,
                                   std::string label, double finite_until = inf) {
        YoungFunction y;
        std::vector<double> x(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(t[i]);
        auto table = std::make_shared<Pchip>(std::move(x), log_A);
        y.log_A_ = [table](double tt) { return (*table)(std::log(tt)); };
        y.label_ = std::move(label);
        y.finite_until_ = finite_until;
        y.table_min_ = t.front();
        y.table_max_ = t.back();
        return y;
    }

    const std::string& label() const { return label_; }

    /// A(t); +inf beyond finite_until, 0 at t <= 0.
    double value(double t) const {
        if (!(t > 0.0)) return 0.0;
        if (t > finite_until_) return inf;
        return std::exp(log_A_(t));
    }

    /// log A(t); -inf at t <= 0, +inf beyond the jump.
    double log_value(double t) const {
        if (!(t > 0.0)) return -inf;
        if (t > finite_until_) return inf;
        return log_A_(t);
    }

    /// Density a(t): analytic when provided, otherwise a centered

    /// finite-difference of the tabulated values.
    double density(double t) const {
        if (!(t > 0.0)) return 0.0;
        if (density_) return density_(t);
        const double h = 5e-6;
        const double up = value(t * (1 + h)), dn = value(t * (1 - h));
        return (up - dn) / (2 * t * h);
    }

    bool has_analytic_density() const { return static_cast<bool>(density_); }

    /// t with A(t) = y, by monotone bisection to 1e-12 relative accuracy.
    /// y above the essential sup of A reports the jump point.
    double inverse(double y) const {
        if (!(y >= 0.0)) throw std::domain_error("YoungFunction::inverse: negative target");
        if (y == 0.0) return 0.0;
        const double ly = std::log(y);
        double lo = 1.0, hi = 1.0;
        int guard = 0;
        while (log_value(lo) > ly && guard++ < 4000) lo *= 0.5;
        guard = 0;
        while (log_value(hi) < ly && guard++ < 4000) {
            hi *= 2.0;
            if (hi > finite_until_) {
                if (log_value(finite_until_) < ly)
                    throw std::domain_error("YoungFunction::inverse: target above the jump at t = " +
                                            std::to_string(finite_until_));
                hi = finite_until_;
                break;
            }
        }
        const double lx = bisect([&](double x) { return log_value(std::exp(x)) - ly; },
                                 std::log(lo), std::log(hi), 1e-13);
        return std::exp(lx);
    }

    double finite_until() const { return finite_until_; }
    void set_finite_until(double t) { finite_until_ = t; }

    const Asymptote& near_zero() const { return near_zero_; }
    const Asymptote& near_inf() const { return near_inf_; }
    void set_asymptotes(Asymptote zero, Asymptote infty) {
        near_zero_ = zero;
        near_inf_ = infty;
    }

    /// Table coverage of tabulated instances (0/inf for analytic ones).
    double table_min() const { return table_min_; }
    double table_max() const { return table_max_; }

private:
    std::function<double(double)> log_A_;
    std::function<double(double)> density_;
    std::string label_;
    double finite_until_ = inf;
    double table_min_ = 0.0;
    double table_max_ = inf;
    Asymptote near_zero_, near_inf_;
};

/// A(t) = t^p, p >= 1.
inline YoungFunction young_power(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("young_power: p < 1");
    return YoungFunction::analytic(
        [p](double t) { return p * std::log(t); }, [p](double t) { return p * std::pow(t, p - 1.0); },
        "t^" + std::to_string(p), Asymptote{true, p, 0.0}, Asymptote{true, p, 0.0});
}

/// A(t) = t^p (log(b+t))^r (log(b + log(b+t)))^rho.  The shift b must be
/// large enough that the density is non-decreasing; this is validated on a
/// sample grid at construction.
inline YoungFunction young_power_log_loglog(double p, double r, double rho, double b) {
    if (!(p >= 1.0)) throw std::invalid_argument("young_power_log_loglog: p < 1");
    if (!(b > 1.0)) throw std::invalid_argument("young_power_log_loglog: need b > 1");
    auto logA = [p, r, rho, b](double t) {
        const double L = std::log(b + t);
        const double M = std::log(b + L);
        return p * std::log(t) + r * std::log(L) + rho * std::log(M);
    };
    auto dens = [p, r, rho, b](double t) {
        const double L = std::log(b + t);
        const double M = std::log(b + L);
        const double core = std::pow(t, p - 1.0) * std::pow(L, r - 1.0) * std::pow(M, rho - 1.0);
        return core * (p * L * M + r * t * M / (b + t) + rho * t * L / ((b + t) * (b + L)));
    };
    auto y = YoungFunction::analytic(logA, dens,
                                     "t^" + std::to_string(p) + " log^" + std::to_string(r) +
                                         " loglog^" + std::to_string(rho),
                                     Asymptote{true, p, 0.0}, Asymptote{true, p, r});
    double prev = 0.0;
    for (double t : log_grid(1e-8, 1e8, 40)) {
        const double a = y.density(t);
        if (a < prev * (1 - 1e-10))
            throw std::invalid_argument("young_power_log_loglog: density decreases; increase b");
        prev = std::max(prev, a);
    }
    return y;
}

/// Young function with prescribed power-log behaviour in both regimes,
/// built from the density
///   a(t) = t^{p0-1} (1 + b0 log(1/t))^{r0}   for t <= 1,
///   a(t) = t^{p-1}  (1 + bi log t)^{r}       for t >= 1,
/// so that A ~ t^{p0} (log 1/t)^{r0} near zero and ~ t^p (log t)^r near
/// infinity up to constants.  Admissible: p0 > 1, or p0 = 1 with r0 <= 0;
/// p > 1, or p = 1 with r >= 0.  The slopes b0, bi are chosen small enough
/// to keep the density non-decreasing.
inline YoungFunction young_two_regime(double p0, double r0, double p, double r) {
    const bool zero_ok = p0 > 1.0 || (p0 == 1.0 && r0 <= 0.0);
    const bool inf_ok = p > 1.0 || (p == 1.0 && r >= 0.0);
    if (!zero_ok || !inf_ok) throw std::invalid_argument("young_two_regime: inadmissible exponents");
    const double b0 = r0 > 0.0 ? std::min(1.0, 0.5 * (p0 - 1.0) / r0) : 1.0;
    const double bi = r < 0.0 ? std::min(1.0, 0.5 * (p - 1.0) / (-r)) : 1.0;

    auto dens = [=](double t) {
        if (t <= 1.0) return std::pow(t, p0 - 1.0) * std::pow(1.0 + b0 * std::log(1.0 / t), r0);
        return std::pow(t, p - 1.0) * std::pow(1.0 + bi * std::log(t), r);
    };
    // A below 1 in closed form through the incomplete gamma; above 1 via a
    // cumulative Gauss table in v = log t (extended on demand).
    const double A1 = std::pow(b0, r0) * power_log_integral(p0 - 1.0, 1.0 / b0, r0, 0.0, 1.0);
    struct Upper {
        double p, r, bi, A1;
        std::vector<double> v, cum; // nodes in v = log t and cumulative A

        Upper(double p_, double r_, double bi_, double A1_) : p(p_), r(r_), bi(bi_), A1(A1_) {
            v.push_back(0.0);
            cum.push_back(A1);
            const double step = 0.25;
            while (v.back() < 85.0) { // covers t up to ~8e36
                const double lo = v.back();
                cum.push_back(cum.back() +
                              gauss16([&](double w) { return std::exp(p * w) *
                                                             std::pow(1.0 + bi * w, r); },
                                      lo, lo + step));
                v.push_back(lo + step);
            }
        }

        double at(double t) const {
            const double vt = std::log(t);
            if (vt >= v.back()) throw std::domain_error("young_two_regime: argument too large");
            const auto it = std::upper_bound(v.begin(), v.end(), vt);
            std::size_t i = static_cast<std::size_t>(it - v.begin());
            if (i == 0) return A1;
            --i;
            double acc = cum[i];
            if (vt > v[i])
                acc += gauss16([&](double w) { return std::exp(p * w) *
                                                          std::pow(1.0 + bi * w, r); },
                               v[i], vt);
            return acc;
        }
    };
    auto upper = std::make_shared<const Upper>(p, r, bi, A1);

    auto logA = [=](double t) {
        if (t <= 1.0)
            return std::log(std::pow(b0, r0) * power_log_integral(p0 - 1.0, 1.0 / b0, r0, 0.0, t));
        return std::log(upper->at(t));
    };
    auto y = YoungFunction::analytic(logA, dens, "two_regime", Asymptote{true, p0, r0},
                                     Asymptote{true, p, r});
    return y;
}

/// Sampled convexity defect: most negative increase of difference quotients
/// of A along the grid.  Non-negative (within slack) for convex A.
inline double convexity_defect(const YoungFunction& A, const std::vector<double>& grid) {
    double worst = 0.0;
    double prev_q = 0.0;
    bool have_prev = false;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v0 = A.value(grid[i - 1]);
        const double v1 = A.value(grid[i]);
        if (!std::isfinite(v0) || !std::isfinite(v1)) break;
        const double q = (v1 - v0) / (grid[i] - grid[i - 1]);
        if (have_prev) {
            const double scale = std::max({1.0, std::abs(prev_q), std::abs(q)});
            worst = std::min(worst, (q - prev_q) / scale);
        }
        prev_q = q;
        have_prev = true;
    }
    return worst;
}

namespace detail {

// Local log-log slope of g measured between t and factor * t.
inline double local_exponent(const std::function<double(double)>& g, double t, double factor) {
    return std::log(g(t * factor) / g(t)) / std::log(factor);
}

// Log-linear interpolation of tabulated positive samples.
inline double eta_at(double t, const std::vector<double>& s, const std::vector<double>& eta) {
    const auto it = std::upper_bound(s.begin(), s.end(), t);
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    if (i == 0) return eta.front();
    if (i >= s.size()) return eta.back();
    const double w = std::log(t / s[i - 1]) / std::log(s[i] / s[i - 1]);
    return std::exp((1 - w) * std::log(eta[i - 1]) + w * std::log(eta[i]));
}

// Integral of phi over (0, t_lo], where phi ~ C t^p (c0 + log(1/t))^q with
// exponents (p, q) given and the constant C and log shift c0 calibrated
// from log phi at t_lo and one point below.  Exact for the matched shifted
// power-log model; divergent cases return +inf.
template <class LogPhi>
inline double head_integral(LogPhi&& log_phi, double t_lo, double p, double q) {
    if (!power_log_integrable_at_zero(p, q)) return inf;
    const double u0 = std::log(1.0 / t_lo);
    double c0 = 0.0;
    if (std::abs(q) > 1e-12) {
        const double u1 = u0 + 2.0;
        const double lr = log_phi(t_lo * std::exp(-2.0)) - log_phi(t_lo) + 2.0 * p;
        const double rho = std::exp(lr / q); // (c0 + u1) / (c0 + u0)
        if (std::isfinite(rho) && rho > 1.0 + 1e-9) {
            const double c = (u1 - rho * u0) / (rho - 1.0);
            if (std::isfinite(c) && c + u0 > 0.05) c0 = c;
        }
    }
    const double lcoef = log_phi(t_lo) - p * std::log(t_lo) - q * std::log(c0 + u0);
    return std::exp(lcoef) * power_log_integral(p, c0, q, 0.0, t_lo);
}

} // namespace detail

/// True when the near-zero gate integral of (t/A(t))^{alpha/(n-alpha)}
/// converges; decided from the near-zero asymptote when known, else from the
/// measured local exponent at the bottom of the standard grid.
inline bool conjugate_gate(const YoungFunction& A, int n, double alpha, double* head_exp = nullptr) {
    const double kappa = alpha / (n - alpha);
    if (A.near_zero().known) {
        const double p0 = A.near_zero().p, r0 = A.near_zero().r;
        const double e = (1.0 - p0) * kappa;         // power of the gate integrand
        const double q = -r0 * kappa;                // log(1/t) power
        if (head_exp) *head_exp = e;
        return power_log_integrable_at_zero(e, q);
    }
    const double t0 = 1e-8;
    const double slope = (A.log_value(4 * t0) - A.log_value(t0)) / std::log(4.0);
    const double e = kappa * (1.0 - slope);
    if (head_exp) *head_exp = e;
    return e > -1.0 + 1e-9;
}

/// The conjugate construction A_{n/alpha}(t) = A(H^{-1}(t)) with
/// H(t) = (int_0^t (tau/A(tau))^{alpha/(n-alpha)} dtau)^{(n-alpha)/n}.
/// Result is tabulated over the image of H and is +inf beyond H(inf) when
/// the full integral converges.
inline YoungFunction sobolev_conjugate(const YoungFunction& A, int n, double alpha,
                                       int per_decade_pair = 100) {
    if (!(n == 2 || n == 3) || !(alpha > 0 && alpha < n))
        throw std::invalid_argument("sobolev_conjugate: need 0 < alpha < n");
    const double kappa = alpha / (n - alpha);
    double head_exp = 0.0;
    if (!conjugate_gate(A, n, alpha, &head_exp))
        throw DivergentIntegral("sobolev_conjugate: gate integral diverges near zero", head_exp);

    auto log_phi = [&](double t) { return kappa * (std::log(t) - A.log_value(t)); };
    auto phi = [&](double t) { return std::exp(log_phi(t)); };

    // internal grid in the source variable; deep on the zero side because
    // critical families approach their near-zero law only doubly
    // logarithmically in s
    const double s_lo = 1e-30, s_hi = 1e32;
    const auto s = log_grid(s_lo, s_hi, per_decade_pair);

    // head of the gate integral below s_lo, matched to the asymptote
    double hp = (A.near_zero().known
                     ? (1.0 - A.near_zero().p) * kappa
                     : (log_phi(4 * s_lo) - log_phi(s_lo)) / std::log(4.0));
    double hq = A.near_zero().known ? -A.near_zero().r * kappa : 0.0;
    double G = detail::head_integral(log_phi, s_lo, hp, hq);
    if (std::isinf(G))
        throw DivergentIntegral("sobolev_conjugate: gate head diverges", hp);

    std::vector<double> t_img, logA_img;
    t_img.reserve(s.size());
    const double outer = (n - alpha) / n;
    {
        double prev_t = -inf;
        double Gcur = G;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i > 0)
                Gcur += gauss16([&](double x) { return phi(std::exp(x)) * std::exp(x); },
                                std::log(s[i - 1]), std::log(s[i]));
            const double H = std::pow(Gcur, outer);
            const double la = A.log_value(s[i]);
            if (!std::isfinite(la) || !std::isfinite(H)) break;
            if (H > prev_t * (1 + 1e-14)) {
                t_img.push_back(H);
                logA_img.push_back(la);
                prev_t = H;
            }
        }
        G = Gcur;
    }
    if (t_img.size() < 8) throw std::runtime_error("sobolev_conjugate: degenerate image");

    // does the gate integral converge at infinity?  then A_{n/alpha} jumps
    // to +inf at H(inf)
    double jump = inf;
    const double e_top = (log_phi(s_hi) - log_phi(s_hi / 4.0)) / std::log(4.0);
    if (std::isfinite(e_top) && e_top < -1.0 - 1e-9) {
        const double tail = phi(s_hi) * s_hi / (-1.0 - e_top);
        jump = std::pow(G + tail, outer);
    }

    auto out = YoungFunction::tabulated(t_img, logA_img,
                                        "conjugate(" + A.label() + ")", jump);
    return out;
}

/// The hat transform built from the density a of A:
///   hat_a^{-1}(r) = ( int_{a^{-1}(r)}^inf Phi(t)^{-n/alpha} a(t)^{-n/(n-alpha)} dt )^{alpha/(alpha-n)},
///   Phi(t) = int_0^t a(rho)^{-alpha/(n-alpha)} drho,
/// with hat_A the primitive of hat_a.  a^{-1} is the left-continuous
/// generalized inverse.  Tabulated like sobolev_conjugate.
inline YoungFunction hat_construction(const YoungFunction& A, int n, double alpha,
                                      int per_decade_pair = 100) {
    if (!(alpha > 0 && alpha < n)) throw std::invalid_argument("hat_construction: need 0 < alpha < n");
    const double kappa = alpha / (n - alpha);
    double head_exp = 0.0;
    if (!conjugate_gate(A, n, alpha, &head_exp))
        throw DivergentIntegral("hat_construction: gate integral diverges near zero", head_exp);

    auto a = [&](double t) { return A.density(t); };
    const double s_lo = 1e-8, s_hi = 1e32;
    const auto s = log_grid(s_lo, s_hi, per_decade_pair);

    // Phi cumulative with an asymptote-matched head
    auto phi_int = [&](double t) { return std::pow(a(t), -kappa); };
    auto log_phi_int = [&](double t) { return -kappa * std::log(a(t)); };
    double hp = A.near_zero().known ? (1.0 - A.near_zero().p) * kappa
                                    : detail::local_exponent(phi_int, s_lo, 4.0);
    double hq = A.near_zero().known ? -A.near_zero().r * kappa : 0.0;
    std::vector<double> Phi(s.size());
    Phi[0] = detail::head_integral(log_phi_int, s_lo, hp, hq);
    if (std::isinf(Phi[0])) throw DivergentIntegral("hat_construction: Phi head diverges", hp);
    for (std::size_t i = 1; i < s.size(); ++i)
        Phi[i] = Phi[i - 1] + gauss16([&](double x) { return phi_int(std::exp(x)) * std::exp(x); },
                                      std::log(s[i - 1]), std::log(s[i]));

    // outer integrand and its cumulative from the top, with a power tail
    const double no = static_cast<double>(n) / alpha;
    std::vector<double> eta(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        eta[i] = std::pow(Phi[i], -no) * std::pow(a(s[i]), -static_cast<double>(n) / (n - alpha));
    const double e_tail = std::log(eta[s.size() - 1] / eta[s.size() - 9]) /
                          std::log(s[s.size() - 1] / s[s.size() - 9]);
    if (!(e_tail < -1.0 - 1e-9))
        throw DivergentIntegral("hat_construction: outer tail integral diverges", e_tail);
    std::vector<double> T(s.size());
    T.back() = eta.back() * s.back() / (-1.0 - e_tail);
    for (std::size_t i = s.size() - 1; i-- > 0;)
        T[i] = T[i + 1] +
               gauss16([&](double x) { return detail::eta_at(std::exp(x), s, eta) * std::exp(x); },
                       std::log(s[i]), std::log(s[i + 1]));

    // hat density parametrised by r = a(s): sigma(r) = T(a^{-1}(r))^{alpha/(alpha-n)}
    const double expo = alpha / (alpha - static_cast<double>(n));
    std::vector<double> sigma, rv;
    sigma.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = a(s[i]);
        const double sg = std::pow(T[i], expo);
        if (!std::isfinite(r) || !std::isfinite(sg) || r <= 0.0) continue;
        if (!sigma.empty() && !(sg > sigma.back() * (1 + 1e-12) && r >= rv.back())) continue;
        sigma.push_back(sg);
        rv.push_back(r);
    }
    if (sigma.size() < 8) throw std::runtime_error("hat_construction: degenerate hat table");

    // cumulative of the hat density over the standard output range
    std::vector<double> lsig(sigma.size()), lr(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        lsig[i] = std::log(sigma[i]);
        lr[i] = std::log(rv[i]);
    }
    Pchip hat_dens(lsig, lr); // log hat_a as a function of log sigma
    auto hat_a = [&](double t) { return std::exp(hat_dens(std::log(t))); };

    const auto tg =
        log_grid(std::max(1e-12, sigma.front()), std::min(1e16, sigma.back()), 100);
    const double e0 = detail::local_exponent(hat_a, tg.front(), 2.0);
    std::vector<double> hatA(tg.size());
    hatA[0] = e0 > -1.0 ? hat_a(tg.front()) * tg.front() / (e0 + 1.0) : inf;
    if (std::isinf(hatA[0])) throw DivergentIntegral("hat_construction: hat head diverges", e0);
    for (std::size_t i = 1; i < tg.size(); ++i)
        hatA[i] = hatA[i - 1] + gauss16([&](double x) { return hat_a(std::exp(x)) * std::exp(x); },
                                        std::log(tg[i - 1]), std::log(tg[i]));
    std::vector<double> lA(tg.size());
    for (std::size_t i = 0; i < tg.size(); ++i) lA[i] = std::log(hatA[i]);
    return YoungFunction::tabulated(tg, lA, "hat(" + A.label() + ")");
}

enum class Regime { near_zero, near_infinity, global };

struct EquivalenceResult {
    bool equivalent = false;
    double c = 0.0;
};

/// Two-sided dilation comparison A(t/c) <= B(t) <= A(ct) over the regime's
/// evaluation grid, with c searched on a geometric grid in [1, 2^20].
/// The zero/infinity split sits at t = 1.  Functions whose log-log slopes
/// already disagree at the regime's far end cannot be equivalent (the ratio
/// escapes every dilation), so that is rejected up front; it also catches
/// pairs like t^2 vs t^3 that a bounded grid with bounded c cannot separate.
inline EquivalenceResult equivalent(const YoungFunction& A, const YoungFunction& B, Regime regime) {
    std::vector<double> grid;
    switch (regime) {
        case Regime::near_zero: grid = log_grid(1e-8, 1.0); break;
        case Regime::near_infinity: grid = log_grid(1.0, 1e8); break;
        case Regime::global: grid = log_grid(1e-8, 1e8); break;
    }
    auto slope = [](const YoungFunction& Y, double t) {
        return (Y.log_value(2 * t) - Y.log_value(t / 2)) / std::log(4.0);
    };
    auto slopes_differ = [&](double t) {
        const double sa = slope(A, t), sb = slope(B, t);
        if (!std::isfinite(sa) || !std::isfinite(sb)) return false; // leave to the sandwich
        return std::abs(sa - sb) > 0.05 * std::max({1.0, std::abs(sa), std::abs(sb)});
    };
    if ((regime != Regime::near_infinity && slopes_differ(2e-8)) ||
        (regime != Regime::near_zero && slopes_differ(5e7)))
        return {false, 0.0};
    for (int k = 0; k <= 80; ++k) {
        const double c = std::pow(2.0, k / 4.0);
        bool ok = true;
        for (double t : grid) {
            const double b = B.log_value(t);
            const double lo = A.log_value(t / c);
            const double hi = A.log_value(c * t);
            // sandwich in log coordinates with a hair of slack
            if (!(lo <= b + 1e-9) || !(b <= hi + 1e-9)) {
                ok = false;
                break;
            }
        }
        if (ok) return {true, c};
    }
    return {false, 0.0};
}

} // namespace ripot

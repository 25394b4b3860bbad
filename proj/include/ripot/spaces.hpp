#pragma once

// Rearrangement-invariant norms evaluated on profiles: Lebesgue, Lorentz
// (star f* and maximal f** variants), Lorentz-Zygmund with an optional
// iterated-log weight, Orlicz via the Luxemburg functional, Orlicz-Lorentz,
// intersections, the L1+Linf sum norm, and duality-defined target spaces.
// Step profiles evaluate in closed form wherever the integrand is a power
// times a single shifted log factor; symbolic heads and iterated-log
// weights fall back to quadrature in u = log(1/s).

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "profile.hpp"
#include "young.hpp"

namespace ripot {

struct SpaceSpec {
    enum class Family {
        lebesgue,
        lorentz_star,
        lorentz_maximal,
        lorentz_zygmund_star,
        lorentz_zygmund_maximal,
        generalized_lz,
        orlicz,
        orlicz_lorentz,
        intersection,
        sum_l1_linf,
        target_dual,
    };

    Family family = Family::lebesgue;
    double p = 1.0;
    double q = 0.0;   // secondary exponent; 0 = unused, inf = sup variant
    double r = 0.0;   // log weight power
    double rho = 0.0; // iterated log weight power
    double L = inf;   // interval length
    std::shared_ptr<const YoungFunction> A;
    std::vector<SpaceSpec> members;              // intersection
    std::shared_ptr<const SpaceSpec> inner;      // target_dual: the source space X
    std::shared_ptr<const SpaceSpec> equivalent; // target_dual: classical override, if known
    int dim = 0;                                 // target_dual: ambient n
    double alpha = 0.0;                          // target_dual: potential order
    std::string label;

    static SpaceSpec lebesgue_space(double p, double L = inf) {
        if (!(p >= 1.0)) throw std::invalid_argument("lebesgue: need p >= 1");
        SpaceSpec X;
        X.family = Family::lebesgue;
        X.p = p;
        X.L = L;
        X.label = std::isinf(p) ? "L^inf" : "L^" + std::to_string(p);
        return X;
    }

    static SpaceSpec lorentz(double p, double q, double L = inf) {
        if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("lorentz: need p, q > 0");
        SpaceSpec X;
        X.family = Family::lorentz_star;
        X.p = p;
        X.q = q;
        X.L = L;
        X.label = "L^{" + std::to_string(p) + "," + std::to_string(q) + "}";
        return X;
    }

    static SpaceSpec lorentz_maximal(double p, double q, double L = inf) {
        SpaceSpec X = lorentz(p, q, L);
        X.family = Family::lorentz_maximal;
        X.label = "L^{(" + std::to_string(p) + "," + std::to_string(q) + ")}";
        return X;
    }

    static SpaceSpec lorentz_zygmund(double p, double q, double r, bool maximal = false,
                                     double L = inf) {
        SpaceSpec X = lorentz(p, q, L);
        X.family = maximal ? Family::lorentz_zygmund_maximal : Family::lorentz_zygmund_star;
        X.r = r;
        X.label = "L^{" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) +
                  (maximal ? "} max" : "}");
        return X;
    }

    static SpaceSpec generalized_lorentz_zygmund(double p, double q, double r, double rho,
                                                 double L = inf) {
        SpaceSpec X = lorentz(p, q, L);
        X.family = Family::generalized_lz;
        X.r = r;
        X.rho = rho;
        X.label = "GLZ(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) +
                  "," + std::to_string(rho) + ")";
        return X;
    }

    static SpaceSpec orlicz_space(YoungFunction A, double L = inf) {
        SpaceSpec X;
        X.family = Family::orlicz;
        X.L = L;
        X.label = "L^{" + A.label() + "}";
        X.A = std::make_shared<YoungFunction>(std::move(A));
        return X;
    }

    static SpaceSpec orlicz_lorentz(YoungFunction A, double q, double L = inf);

    static SpaceSpec intersect(std::vector<SpaceSpec> spaces) {
        if (spaces.empty()) throw std::invalid_argument("intersect: empty list");
        SpaceSpec X;
        X.family = Family::intersection;
        X.L = spaces.front().L;
        X.label = "intersection";
        X.members = std::move(spaces);
        return X;
    }

    static SpaceSpec sum_l1_linf_space(double L = inf) {
        SpaceSpec X;
        X.family = Family::sum_l1_linf;
        X.L = L;
        X.label = "L^1 + L^inf";
        return X;
    }

    bool has_associate() const;
    SpaceSpec associate() const;
};

namespace detail {

// conjugate exponent, with the 1 <-> inf convention
inline double conj_exp(double p) {
    if (p == 1.0) return inf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

inline double plain_power_integral(double e, double a, double b) {
    if (!(b > a)) return 0.0;
    if (a <= 0.0 && e <= -1.0) return inf;
    if (e == -1.0) return std::log(b / a);
    const double k = e + 1.0;
    return (std::pow(b, k) - (a > 0.0 ? std::pow(a, k) : 0.0)) / k;
}

// integral over (a, b) of s^A (1+log+ 1/s)^B (1+log(1+log+ 1/s))^C ds,
// 0 <= a < b; exact when C = 0, quadrature in u = log(1/s) otherwise
inline double weight_integral(double A, double B, double C, double a, double b) {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    if (b > 1.0) { // log factors are 1 above s = 1
        total += plain_power_integral(A, std::max(a, 1.0), b);
        b = 1.0;
        if (!(b > a)) return total;
    }
    // divergence at zero: power first, then the log powers
    if (a == 0.0) {
        const bool ok = A > -1.0 || (A == -1.0 && (B < -1.0 || (B == -1.0 && C < -1.0)));
        if (!ok) return inf;
    }
    if (C == 0.0) return total + power_log_integral(A, 1.0, B, a, b);
    const double u_hi = a > 0.0 ? std::log(1.0 / a) : inf;
    const double u_lo = std::log(1.0 / b);
    const double k = A + 1.0;
    auto g = [&](double u) {
        return std::exp(-k * u + B * std::log1p(u) + C * std::log1p(std::log1p(u)));
    };
    if (std::isinf(u_hi)) return total + adaptive_integrate_upper(g, u_lo);
    return total + adaptive_integrate(g, u_lo, u_hi);
}

// integral over (0, b) of (s^W * head(s))^q weighted by (1+u)^B (1+loglog)^C,
// where head(s) = coef s^pow u^lp; exact when B = C = 0
inline double head_weight_integral(const PowerLogHead& head, double q, double W, double B, double C,
                                   double b) {
    if (!(b > 0.0) || !head.present()) return 0.0;
    b = std::min(b, head.cut);
    const double E = q * (head.pow + W); // net s power
    const double G = q * head.logpow;    // net plain-log power
    const double k = E + 1.0;
    const bool ok = k > 0.0 || (k == 0.0 && (G + B < -1.0 || (G + B == -1.0 && C < -1.0)));
    if (!ok) return inf;
    const double cq = std::pow(std::abs(head.coef), q);
    if (B == 0.0 && C == 0.0) return cq * power_log_integral(E, 0.0, G, 0.0, b);
    const double u_lo = std::log(1.0 / b);
    auto g = [&](double u) {
        return std::exp(-k * u + G * std::log(u) + B * std::log1p(u) +
                        C * std::log1p(std::log1p(u)));
    };
    return cq * adaptive_integrate_upper(g, u_lo);
}

// sup over [a, b] of exp(h(u)), h smooth, via coarse scan plus golden
// refinement; inputs in u = log(1/s)
template <class H>
double log_scan_max(H&& h, double u_lo, double u_hi) {
    if (!(u_hi > u_lo)) return h(u_lo);
    const int N = 64;
    double best = -inf;
    int jb = 0;
    for (int j = 0; j <= N; ++j) {
        const double u = u_lo + (u_hi - u_lo) * j / N;
        const double v = h(u);
        if (v > best) {
            best = v;
            jb = j;
        }
    }
    double lo = u_lo + (u_hi - u_lo) * std::max(jb - 1, 0) / N;
    double hi = u_lo + (u_hi - u_lo) * std::min(jb + 1, N) / N;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = h(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

} // namespace detail

/// Integral of the pointwise product over (0, min of supports): exact for
/// step-step, step-head and head-head pieces (head products stay in the
/// power-log family).
inline double pairing(const Profile& f, const Profile& g) {
    double total = 0.0;
    const auto fs = f.segments();
    const auto gs = g.segments();
    std::size_t i = 0, j = 0;
    while (i < fs.size() && j < gs.size()) {
        const double lo = std::max(fs[i].lo, gs[j].lo);
        const double hi = std::min(fs[i].hi, gs[j].hi);
        if (hi > lo) {
            const bool fh = fs[i].is_head, gh = gs[j].is_head;
            if (!fh && !gh) {
                total += fs[i].v * gs[j].v * (hi - lo);
            } else if (fh && gh) {
                const auto& a = f.head();
                const auto& b = g.head();
                total += a.coef * b.coef *
                         power_log_integral(a.pow + b.pow, 0.0, a.logpow + b.logpow, lo, hi);
            } else {
                const auto& h = fh ? f.head() : g.head();
                const double v = fh ? gs[j].v : fs[i].v;
                total += v * h.integral(lo, hi);
            }
            if (std::isinf(total)) return inf;
        }
        if (fs[i].hi <= gs[j].hi)
            ++i;
        else
            ++j;
    }
    return total;
}

namespace detail {

// ess sup of w(s) f(s) with w(s) = s^W (1+log+ 1/s)^B (1+loglog+)^C
inline double weighted_sup(const Profile& f, double W, double B, double C, double L) {
    auto log_w = [&](double u) { // u = log(1/s), valid for u >= 0
        return -W * u + B * std::log1p(std::max(u, 0.0)) +
               C * std::log1p(std::log1p(std::max(u, 0.0)));
    };
    double best = 0.0;
    for (const auto& seg : f.segments()) {
        const double lo = seg.lo, hi = std::min(seg.hi, L);
        if (!(hi > lo)) continue;
        if (seg.is_head) {
            const auto& h = f.head();
            if (h.pow + W < 0.0) return inf;
            auto val = [&](double u) {
                return log_w(u) - h.pow * u + h.logpow * std::log(u) + std::log(std::abs(h.coef));
            };
            const double u_lo = std::log(1.0 / hi);
            if (h.pow + W == 0.0 && h.logpow + B > 0.0) return inf;
            // decays for large u once the net power is positive; cap the scan
            const double u_hi = (h.pow + W > 0.0) ? u_lo + 2000.0 : u_lo + 1e4;
            best = std::max(best, std::exp(log_scan_max(val, std::max(u_lo, 1e-14), u_hi)));
        } else if (seg.v > 0.0) {
            if (B == 0.0 && C == 0.0 && W >= 0.0) {
                // monotone weight: sup at the right end
                best = std::max(best, std::pow(hi, W) * seg.v);
            } else {
                const double u_lo = hi >= 1.0 ? 0.0 : std::log(1.0 / hi);
                const double u_hi = lo > 0.0 ? std::log(1.0 / lo) : u_lo + 2000.0;
                double m = log_scan_max(log_w, u_lo, std::max(u_hi, u_lo));
                if (hi > 1.0) m = std::max(m, std::max(-W * 0.0, -W * std::log(1.0 / hi)));
                best = std::max(best, std::exp(m) * seg.v);
            }
        }
    }
    return best;
}

// the q-th power of the weighted star norm: int (w f*)^q over (0, L)
inline double star_norm_pow(const Profile& f, double P, double q, double B, double C, double L) {
    const double W = 1.0 / P - 1.0 / q;
    double total = 0.0;
    for (const auto& seg : f.segments()) {
        const double lo = seg.lo, hi = std::min(seg.hi, L);
        if (!(hi > lo)) continue;
        if (seg.is_head) {
            total += head_weight_integral(f.head(), q, W, B, C, hi);
        } else if (seg.v > 0.0) {
            total += std::pow(seg.v, q) * weight_integral(q * W, B, C, lo, hi);
        }
        if (std::isinf(total)) return inf;
    }
    return total;
}

// maximal variant: int (w f**)^q over (0, L); closed form for integer q via
// the binomial expansion of (I0/s + v)^q, quadrature otherwise
inline double maximal_norm_pow(const Profile& f, double P, double q, double B, double C, double L) {
    const double W = 1.0 / P - 1.0 / q;
    const double A = q * W;
    const bool integer_q = q == std::floor(q) && q <= 8.0;
    double total = 0.0;
    auto glz_weight = [&](double s) {
        if (s >= 1.0) return 1.0;
        const double u = std::log(1.0 / s);
        return std::exp(B * std::log1p(u) + C * std::log1p(std::log1p(u)));
    };
    for (const auto& seg : f.segments()) {
        const double lo = seg.lo, hi = std::min(seg.hi, L);
        if (!(hi > lo)) continue;
        if (seg.is_head) {
            if (!f.head().integrable()) return inf;
            // f** on the head is a power-log shape shifted by integration;
            // quadrature in u with a divergence pre-check on its exponents
            const auto& h = f.head();
            const double pe = h.pow > -1.0 ? h.pow : -1.0;
            const double le = h.pow > -1.0 ? h.logpow : h.logpow + 1.0;
            const double k = q * (pe + W) + 1.0;
            if (!(k > 0.0 || (k == 0.0 && q * le + B < -1.0))) return inf;
            const double u_lo = std::log(1.0 / hi);
            auto g = [&](double u) {
                const double s = std::exp(-u);
                const double fss = f.integral_to(s) / s;
                return std::pow(std::pow(s, W) * fss, q) * glz_weight(s) * s;
            };
            total += adaptive_integrate_upper(g, u_lo);
        } else {
            const double I0 = f.integral_to(lo) - seg.v * lo; // f**(s) = I0/s + v
            if (I0 == 0.0 && seg.v == 0.0) continue;
            if (integer_q) {
                const int qi = static_cast<int>(q);
                double binom = 1.0;
                for (int k = 0; k <= qi; ++k) {
                    if (k > 0) binom = binom * (qi - k + 1) / k;
                    const double coef = binom * std::pow(I0, k) * std::pow(seg.v, qi - k);
                    if (coef != 0.0) total += coef * weight_integral(A - k, B, C, lo, hi);
                }
            } else {
                total += adaptive_integrate(
                    [&](double s) {
                        return std::pow(std::pow(s, W) * (I0 / s + seg.v), q) * glz_weight(s);
                    },
                    lo, hi);
            }
        }
        if (std::isinf(total)) return inf;
    }
    // beyond the support f** = I/s up to L
    const double sJ = f.segments().empty() ? 0.0 : f.segments().back().hi;
    if (L > sJ && f.integral() > 0.0) {
        const double I = f.integral();
        total += std::pow(I, q) * weight_integral(A - q, B, C, std::max(sJ, 1e-300), L);
    }
    return total;
}

inline double weighted_sup_maximal(const Profile& f, double P, double B, double C, double L) {
    const double W = 1.0 / P;
    auto log_w = [&](double u) {
        return -W * u + B * std::log1p(std::max(u, 0.0)) +
               C * std::log1p(std::log1p(std::max(u, 0.0)));
    };
    double best = 0.0;
    auto scan = [&](double lo, double hi) {
        auto val = [&](double u) {
            const double s = std::exp(-u);
            return log_w(u) + std::log(f.double_star(s));
        };
        const double u_lo = -std::log(hi);
        const double u_hi = lo > 0.0 ? -std::log(lo) : u_lo + 2000.0;
        best = std::max(best, std::exp(log_scan_max(val, u_lo, std::max(u_hi, u_lo))));
    };
    if (!f.head().present() && B == 0.0 && C == 0.0) {
        // endpoint evaluation is exact: on each segment w f** is a sum of a
        // decreasing and an increasing power, so the max sits at an edge
        for (const auto& seg : f.segments()) {
            const double lo = std::max(seg.lo, 1e-300), hi = std::min(seg.hi, L);
            if (!(hi > lo)) continue;
            best = std::max(best, std::pow(lo, W) * f.double_star(lo));
            best = std::max(best, std::pow(hi, W) * f.double_star(hi));
        }
        const double sJ = f.segments().empty() ? 0.0 : f.segments().back().hi;
        if (L > sJ && sJ > 0.0) {
            best = std::max(best, std::pow(sJ, W) * f.double_star(sJ));
            if (std::isfinite(L)) best = std::max(best, std::pow(L, W) * f.double_star(L));
        }
        if (!f.segments().empty() && f.segments().front().lo == 0.0 && W == 0.0)
            best = std::max(best, f.sup());
        return best;
    }
    for (const auto& seg : f.segments()) {
        const double lo = seg.lo, hi = std::min(seg.hi, L);
        if (!(hi > lo)) continue;
        if (seg.is_head && !f.head().integrable()) return inf;
        if (seg.is_head && f.head().pow + W < 0.0) return inf;
        scan(std::max(lo, 1e-280), hi);
    }
    const double sJ = f.segments().empty() ? 0.0 : f.segments().back().hi;
    if (L > sJ && sJ > 0.0) scan(sJ, std::isfinite(L) ? L : sJ * 1e30);
    return best;
}

// growth exponents of A at infinity: A(t) ~ t^P (log t)^R, from the stored
// asymptote when known, else probed from the top of the table
inline void growth_at_inf(const YoungFunction& A, double& P, double& R) {
    if (A.near_inf().known) {
        P = A.near_inf().p;
        R = A.near_inf().r;
        return;
    }
    const double t2 = std::isfinite(A.table_max()) && A.table_max() > 100.0 ? A.table_max() : 1e8;
    const double t1 = t2 / 100.0;
    P = (A.log_value(t2) - A.log_value(t1)) / std::log(t2 / t1);
    R = 0.0;
}

// log A(e^{lt}) for arguments far beyond double range, extrapolated with the
// growth exponents
inline double log_A_of_exp(const YoungFunction& A, double P, double R, double lt) {
    if (lt < 690.0) return A.log_value(std::exp(lt));
    const double base = A.log_value(std::exp(690.0));
    return base + P * (lt - 690.0) + R * (std::log(lt) - std::log(690.0));
}

// Luxemburg functional: the modular int A((r^extra f*(r)) / lambda) dr.
// Exact sums for steps when extra == 0; quadrature otherwise, with explicit
// handling of arguments beyond a jump of A.
inline double orlicz_modular(const YoungFunction& A, const Profile& f, double lambda, double extra,
                             double L) {
    const double T = A.finite_until();
    double total = 0.0;
    for (const auto& seg : f.segments()) {
        const double lo = seg.lo, hi = std::min(seg.hi, L);
        if (!(hi > lo)) continue;
        if (seg.is_head) {
            const auto& h = f.head();
            const double ex = -(h.pow + extra); // argument ~ s^{-ex} u^{logpow}
            const bool unbounded = ex > 0.0 || (ex == 0.0 && h.logpow > 0.0);
            if (unbounded && T < inf) return inf; // jump of A is crossed near 0
            double P = 0.0, R = 0.0;
            growth_at_inf(A, P, R);
            if (unbounded) {
                // decide convergence from the growth of A(arg(u)) e^{-u}
                const double k = P * ex - 1.0;
                if (k > 1e-12) return inf;
                if (k > -1e-12 && P * h.logpow + R >= -1.0) return inf;
            }
            const double u_lo = std::log(1.0 / hi);
            total += adaptive_integrate_upper(
                [&](double u) {
                    const double larg = std::log(std::abs(h.coef)) + ex * u +
                                        h.logpow * std::log(u) - std::log(lambda);
                    if (T < inf && larg > std::log(T)) return 1e300;
                    const double la = log_A_of_exp(A, P, R, larg);
                    const double le = la - u;
                    return le > 690.0 ? 1e300 : std::exp(le);
                },
                u_lo, 1e-10);
        } else if (seg.v > 0.0) {
            if (extra == 0.0) {
                const double a = A.value(seg.v / lambda);
                if (std::isinf(a)) return inf;
                total += a * (hi - lo);
            } else {
                // argument is maximal at the left end; beyond a jump of A the
                // modular is infinite on a set of positive measure
                const double arg_lo = seg.v * std::pow(lo, extra) / lambda;
                if (lo == 0.0 || (T < inf && arg_lo > T)) {
                    if (T < inf && seg.v > 0.0) {
                        const double rstar = std::pow(lambda * T / seg.v, 1.0 / extra);
                        if (rstar > lo) return inf;
                    }
                }
                total += adaptive_integrate(
                    [&](double rr) { return A.value(seg.v * std::pow(rr, extra) / lambda); },
                    lo, hi, 1e-11);
            }
        }
        if (std::isinf(total)) return inf;
    }
    return total;
}

inline double luxemburg(const YoungFunction& A, const Profile& f, double extra, double L) {
    // scale anchor keeps the norm exactly 1-homogeneous in f
    double anchor = f.sup();
    if (!std::isfinite(anchor)) anchor = f.double_star(std::min(1.0, L));
    if (!(anchor > 0.0)) return 0.0;
    auto modular = [&](double mu) { return orlicz_modular(A, f, mu * anchor, extra, L); };
    double mu_hi = 1.0;
    int it = 0;
    while (modular(mu_hi) > 1.0 && it++ < 2100) mu_hi *= 2.0;
    if (it >= 2100) return inf;
    double mu_lo = mu_hi;
    it = 0;
    while (modular(mu_lo) <= 1.0 && mu_lo > 1e-300 && it++ < 2100) mu_lo *= 0.5;
    if (mu_lo <= 1e-300) return 0.0;
    for (int k = 0; k < 220 && mu_hi - mu_lo > 1e-13 * mu_hi; ++k) {
        const double mid = std::sqrt(mu_lo * mu_hi);
        (modular(mid) <= 1.0 ? mu_hi : mu_lo) = mid;
    }
    return mu_hi * anchor;
}

} // namespace detail

inline double target_norm(const SpaceSpec& T, const Profile& f);

/// The norm of the profile f in the space X.  +inf is a legal value.
inline double norm(const SpaceSpec& X, const Profile& f) {
    using F = SpaceSpec::Family;
    if (std::isfinite(X.L) && f.domain_length() > X.L * (1.0 + 1e-12) &&
        f.integral_to(f.domain_length()) > f.integral_to(X.L) * (1.0 + 1e-12))
        throw std::invalid_argument("norm: profile carries mass beyond the interval length");
    switch (X.family) {
        case F::lebesgue:
            if (std::isinf(X.p)) return f.sup();
            if (X.p == 1.0) return f.integral_to(X.L);
            return std::pow(detail::star_norm_pow(f, X.p, X.p, 0.0, 0.0, X.L), 1.0 / X.p);
        case F::lorentz_star:
        case F::lorentz_zygmund_star:
        case F::generalized_lz: {
            const double B = X.q == inf ? X.r : X.q * X.r;
            const double C = X.q == inf ? X.rho : X.q * X.rho;
            if (std::isinf(X.q)) return detail::weighted_sup(f, 1.0 / X.p, B, C, X.L);
            const double t = detail::star_norm_pow(f, X.p, X.q, B, C, X.L);
            return std::isinf(t) ? inf : std::pow(t, 1.0 / X.q);
        }
        case F::lorentz_maximal:
        case F::lorentz_zygmund_maximal: {
            const double B = X.q == inf ? X.r : X.q * X.r;
            if (std::isinf(X.q)) return detail::weighted_sup_maximal(f, X.p, B, 0.0, X.L);
            const double t = detail::maximal_norm_pow(f, X.p, X.q, B, 0.0, X.L);
            return std::isinf(t) ? inf : std::pow(t, 1.0 / X.q);
        }
        case F::orlicz:
            return detail::luxemburg(*X.A, f, 0.0, X.L);
        case F::orlicz_lorentz:
            return detail::luxemburg(*X.A, f, -1.0 / X.q, X.L);
        case F::intersection: {
            double m = 0.0;
            for (const auto& Y : X.members) m = std::max(m, norm(Y, f));
            return m;
        }
        case F::sum_l1_linf:
            return f.integral_to(std::min(1.0, X.L));
        case F::target_dual:
            return target_norm(X, f);
    }
    throw std::logic_error("norm: unhandled family");
}

inline bool SpaceSpec::has_associate() const {
    switch (family) {
        case Family::lebesgue:
        case Family::sum_l1_linf:
            return true;
        case Family::lorentz_star:
        case Family::lorentz_maximal:
        case Family::lorentz_zygmund_star:
        case Family::lorentz_zygmund_maximal:
        case Family::generalized_lz:
            return p > 1.0 && std::isfinite(p);
        default:
            return false;
    }
}

/// Analytic Holder partner: a space Y with pairing(f, g) <= norm(X, f) *
/// norm(Y, g) at constant one.  For the weighted families this is the
/// conjugate-exponent star space with negated log powers (the weights
/// multiply to one); for Lebesgue it is the exact associate.
inline SpaceSpec SpaceSpec::associate() const {
    using F = Family;
    switch (family) {
        case F::lebesgue:
            return lebesgue_space(detail::conj_exp(p), L);
        case F::sum_l1_linf:
            return intersect({lebesgue_space(1.0, L), lebesgue_space(inf, L)});
        case F::lorentz_star:
        case F::lorentz_maximal:
            if (!(p > 1.0) || !std::isfinite(p))
                throw std::invalid_argument("associate: need p in (1, inf)");
            return lorentz(detail::conj_exp(p), detail::conj_exp(q), L);
        case F::lorentz_zygmund_star:
        case F::lorentz_zygmund_maximal:
            if (!(p > 1.0) || !std::isfinite(p))
                throw std::invalid_argument("associate: need p in (1, inf)");
            return lorentz_zygmund(detail::conj_exp(p), detail::conj_exp(q), -r, false, L);
        case F::generalized_lz:
            if (!(p > 1.0) || !std::isfinite(p))
                throw std::invalid_argument("associate: need p in (1, inf)");
            return generalized_lorentz_zygmund(detail::conj_exp(p), detail::conj_exp(q), -r, -rho,
                                               L);
        default:
            throw std::invalid_argument("associate: no analytic associate for " + label);
    }
}

inline SpaceSpec SpaceSpec::orlicz_lorentz(YoungFunction A, double q, double L) {
    if (!(q > 1.0)) throw std::invalid_argument("orlicz_lorentz: need q > 1");
    // the defining weight is integrable against A only under a tail gate on
    // A(t) / t^{1+q}; decided from the asymptote when known, else sampled
    bool ok = false;
    if (A.near_inf().known) {
        ok = A.near_inf().p < q || (A.near_inf().p == q && A.near_inf().r < -1.0);
    } else {
        double prev = inf;
        int shrinking = 0;
        double T = std::max(4.0, A.table_min());
        for (int i = 0; i < 40 && T < 1e28; ++i, T *= 4.0) {
            const double part =
                adaptive_integrate([&](double x) { return std::exp(A.log_value(std::exp(x)) -
                                                                   q * x); },
                                   std::log(T), std::log(4.0 * T), 1e-9);
            if (part < 0.8 * prev) ++shrinking;
            else shrinking = 0;
            prev = part;
            if (shrinking >= 6) {
                ok = true;
                break;
            }
        }
    }
    if (!ok)
        throw std::invalid_argument("orlicz_lorentz: tail integral of A(t)/t^{1+q} diverges");
    SpaceSpec X;
    X.family = Family::orlicz_lorentz;
    X.q = q;
    X.L = L;
    X.label = "L(" + A.label() + "," + std::to_string(q) + ")";
    X.A = std::make_shared<YoungFunction>(std::move(A));
    return X;
}

struct HolderResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Checks pairing(f, g) <= norm(X, f) * norm(X', g) through the analytic
/// associate.  f and g are profiles, so the pairing is already the extremal
/// (equimeasurable) arrangement of the product integral.
inline HolderResult holder_check(const SpaceSpec& X, const Profile& f, const Profile& g) {
    HolderResult res;
    res.lhs = pairing(f, g);
    res.rhs = norm(X, f) * norm(X.associate(), g);
    res.pass = res.lhs <= res.rhs * (1.0 + 1e-9);
    return res;
}

/// Certified lower bound on sup { pairing(f, g) : norm(X, g) <= 1 } over
/// non-increasing step g, by coordinate ascent on the increment heights of
/// g = sum_j d_j chi_{(0, e_j)}.  Any feasible g certifies its own ratio.
inline double associate_norm_numeric(const SpaceSpec& X, const Profile& f, int sweeps = 4) {
    // candidate edges: the profile's own breakpoints, thinned to a budget,
    // padded with a geometric ladder when f has few steps
    std::vector<double> edges;
    for (const auto& seg : f.segments())
        if (!seg.is_head && seg.hi > 0.0 && std::isfinite(seg.hi)) edges.push_back(seg.hi);
    if (f.head().present()) edges.push_back(f.head().cut);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    while (edges.size() > 24) {
        std::vector<double> thin;
        for (std::size_t i = 0; i < edges.size(); i += 2) thin.push_back(edges[i]);
        if (!edges.empty() && (thin.empty() || thin.back() != edges.back()))
            thin.push_back(edges.back());
        edges.swap(thin);
    }
    if (edges.empty()) return 0.0;
    if (edges.size() < 8) {
        const double base = edges.front();
        for (double c : {0.25, 0.5, 2.0, 4.0})
            if (c * base > 0.0 && (!std::isfinite(f.domain_length()) ||
                                   c * base <= f.domain_length()))
                edges.push_back(c * base);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    const std::size_t J = edges.size();
    std::vector<double> I(J); // pairing of chi_{(0,e_j)} with f
    for (std::size_t j = 0; j < J; ++j) I[j] = f.integral_to(edges[j]);

    auto build = [&](const std::vector<double>& d) {
        std::vector<double> vals(J, 0.0);
        double acc = 0.0;
        for (std::size_t j = J; j-- > 0;) {
            acc += d[j];
            vals[j] = acc;
        }
        // strictly non-increasing by construction; drop trailing zeros
        std::vector<double> e2, v2;
        for (std::size_t j = 0; j < J; ++j) {
            e2.push_back(edges[j]);
            v2.push_back(vals[j]);
        }
        return Profile(e2, v2, f.domain_length());
    };
    auto ratio = [&](const std::vector<double>& d) {
        double num = 0.0, any = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            num += d[j] * I[j];
            any += d[j];
        }
        if (!(any > 0.0)) return 0.0;
        const double den = norm(X, build(d));
        return den > 0.0 && std::isfinite(den) ? num / den : 0.0;
    };

    // start from f's own increments (optimal for the self-associate case)
    std::vector<double> d(J, 0.0);
    {
        std::vector<double> vals(J);
        for (std::size_t j = 0; j < J; ++j) {
            const double mid = 0.5 * (edges[j] + (j > 0 ? edges[j - 1] : 0.0));
            vals[j] = f.value(mid);
        }
        for (std::size_t j = 0; j < J; ++j)
            d[j] = std::max(vals[j] - (j + 1 < J ? vals[j + 1] : 0.0), 0.0);
    }
    double best = ratio(d);
    if (!(best > 0.0)) {
        std::fill(d.begin(), d.end(), 0.0);
        d[0] = 1.0;
        best = ratio(d);
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t j = 0; j < J; ++j) {
            // golden-section on the j-th increment
            double lo = 0.0, hi = std::max(4.0 * (d[j] > 0 ? d[j] : best / (I[j] + 1e-300)), 1e-12);
            auto at = [&](double x) {
                const double keep = d[j];
                d[j] = x;
                const double v = ratio(d);
                d[j] = keep;
                return v;
            };
            for (int grow = 0; grow < 40 && at(hi) > at(0.6 * hi); ++grow) hi *= 2.0;
            double x1 = hi - gr * hi, x2 = gr * hi;
            double f1 = at(x1), f2 = at(x2);
            for (int it = 0; it < 48 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = at(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = at(x1);
                }
            }
            const double xb = f1 > f2 ? x1 : x2;
            if (at(xb) > ratio(d)) d[j] = xb;
        }
        best = std::max(best, ratio(d));
    }
    return best;
}

/// Associate norm of f: analytic when the family has an exact partner,
/// otherwise the numeric lower bound.
inline double associate_norm(const SpaceSpec& X, const Profile& f) {
    if (X.has_associate()) return norm(X.associate(), f);
    return associate_norm_numeric(X, f);
}

namespace detail {

// ‖ s^{alpha/n} g**(s) ‖ in the Lebesgue space of exponent pp over (0, inf);
// the dual-ball norm of the duality-defined target.  g must be a step
// profile (the ascent only produces those).
inline double weighted_maximal_lebesgue(const Profile& g, double beta, double pp) {
    if (std::isinf(pp)) {
        double best = 0.0;
        for (const auto& seg : g.segments()) {
            if (seg.is_head) throw std::invalid_argument("target norm: head profiles unsupported");
            for (double s : {std::max(seg.lo, 1e-300), seg.hi})
                best = std::max(best, std::pow(s, beta) * g.double_star(s));
        }
        const double sJ = g.segments().empty() ? 0.0 : g.segments().back().hi;
        if (sJ > 0.0) best = std::max(best, std::pow(sJ, beta) * g.double_star(sJ));
        return best;
    }
    double total = 0.0;
    for (const auto& seg : g.segments()) {
        if (seg.is_head) throw std::invalid_argument("target norm: head profiles unsupported");
        if (!(seg.hi > seg.lo)) continue;
        const double I0 = g.integral_to(seg.lo) - seg.v * seg.lo;
        total += adaptive_integrate(
            [&](double s) { return std::pow(std::pow(s, beta) * (I0 / s + seg.v), pp); },
            seg.lo, seg.hi, 1e-11);
    }
    const double sJ = g.segments().empty() ? 0.0 : g.segments().back().hi;
    const double I = g.integral();
    if (I > 0.0 && sJ > 0.0) {
        const double e = (beta - 1.0) * pp;
        if (e >= -1.0) return inf;
        total += std::pow(I, pp) * std::pow(sJ, e + 1.0) / (-e - 1.0);
    }
    return std::pow(total, 1.0 / pp);
}

} // namespace detail

/// The duality-defined optimal target for the source space X and potential
/// order alpha in dimension n: the returned spec's norm is
///   sup { pairing(f, g) : ‖ s^{alpha/n} g**(s) ‖_{X'} <= 1 },
/// a certified lower bound computed by the same ascent as
/// associate_norm_numeric.  `equivalent` carries the classical space the
/// construction is known to match, when one is known.
inline SpaceSpec target_space(const SpaceSpec& X, int n, double alpha) {
    if (!(alpha > 0.0) || !(alpha < n)) throw std::invalid_argument("target_space: need 0<alpha<n");
    if (X.family != SpaceSpec::Family::lebesgue)
        throw std::invalid_argument("target_space: implemented for Lebesgue sources");
    const double beta = alpha / n;
    // existence gate: the dual-ball weight must be summable against X',
    // which for a Lebesgue source means (1 - alpha/n) p' > 1, i.e. p < n/alpha
    const double pp = detail::conj_exp(X.p);
    if (std::isfinite(pp) && !((1.0 - beta) * pp > 1.0))
        throw std::domain_error("target_space: no rearrangement-invariant target exists");
    SpaceSpec T;
    T.family = SpaceSpec::Family::target_dual;
    T.inner = std::make_shared<SpaceSpec>(X);
    T.dim = n;
    T.alpha = alpha;
    T.label = "target(" + X.label + ")";
    if (X.p == 1.0) {
        T.equivalent = std::make_shared<SpaceSpec>(
            SpaceSpec::lorentz(static_cast<double>(n) / (n - alpha), 1.0, X.L));
    } else if (std::isfinite(X.p) && X.p < static_cast<double>(n) / alpha) {
        T.equivalent = std::make_shared<SpaceSpec>(SpaceSpec::lorentz(
            static_cast<double>(n) * X.p / (n - alpha * X.p), X.p, X.L));
    }
    return T;
}

/// Norm in a duality-defined target space (lower bound by dual-ball ascent).
inline double target_norm(const SpaceSpec& T, const Profile& f) {
    if (T.family != SpaceSpec::Family::target_dual)
        throw std::invalid_argument("target_norm: not a target space");
    const double beta = T.alpha / T.dim;
    const double pp = detail::conj_exp(T.inner->p);

    std::vector<double> edges;
    for (const auto& seg : f.segments())
        if (seg.hi > 0.0 && std::isfinite(seg.hi)) edges.push_back(seg.hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    while (edges.size() > 20) {
        std::vector<double> thin;
        for (std::size_t i = 0; i < edges.size(); i += 2) thin.push_back(edges[i]);
        if (thin.back() != edges.back()) thin.push_back(edges.back());
        edges.swap(thin);
    }
    if (edges.empty()) return 0.0;
    if (edges.size() < 6) {
        const double base = edges.front();
        for (double c : {0.125, 0.25, 0.5, 2.0, 4.0, 8.0}) edges.push_back(c * base);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    const std::size_t J = edges.size();
    std::vector<double> I(J);
    for (std::size_t j = 0; j < J; ++j) I[j] = f.integral_to(edges[j]);
    auto ratio = [&](const std::vector<double>& d) {
        double num = 0.0, any = 0.0;
        std::vector<double> vals(J, 0.0);
        double acc = 0.0;
        for (std::size_t j = J; j-- > 0;) {
            acc += d[j];
            vals[j] = acc;
        }
        for (std::size_t j = 0; j < J; ++j) {
            num += d[j] * I[j];
            any += d[j];
        }
        if (!(any > 0.0)) return 0.0;
        const Profile g(edges, vals, inf);
        const double den = detail::weighted_maximal_lebesgue(g, beta, pp);
        return den > 0.0 && std::isfinite(den) ? num / den : 0.0;
    };
    std::vector<double> d(J, 0.0);
    d[0] = 1.0;
    double best = ratio(d);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int sweep = 0; sweep < 4; ++sweep) {
        for (std::size_t j = 0; j < J; ++j) {
            auto at = [&](double x) {
                const double keep = d[j];
                d[j] = x;
                const double v = ratio(d);
                d[j] = keep;
                return v;
            };
            double lo = 0.0, hi = std::max(d[j] * 4.0, 1.0);
            for (int grow = 0; grow < 40 && at(hi) > at(0.6 * hi); ++grow) hi *= 2.0;
            double x1 = hi - gr * hi, x2 = gr * hi;
            double f1 = at(x1), f2 = at(x2);
            for (int it = 0; it < 48 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = at(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = at(x1);
                }
            }
            const double xb = f1 > f2 ? x1 : x2;
            if (at(xb) > ratio(d)) d[j] = xb;
        }
        best = std::max(best, ratio(d));
    }
    return best;
}

} // namespace ripot

#pragma once

// Scalar quadrature and interpolation primitives shared by the whole library.
// Everything here is deterministic: closed forms via the incomplete gamma
// function where the integrand allows it, adaptive quadrature otherwise.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

namespace ripot {

inline constexpr double inf = std::numeric_limits<double>::infinity();

namespace detail {

inline void disable_gsl_abort() {
    static const auto once = [] {
        gsl_set_error_handler_off();
        return 0;
    }();
    (void)once;
}

} // namespace detail

/// Number of worker threads, controlled by the RIPOT_THREADS environment
/// variable. Defaults to the hardware concurrency, with a floor of one.
inline unsigned thread_count() {
    static const unsigned n = [] {
        if (const char* s = std::getenv("RIPOT_THREADS")) {
            const long v = std::strtol(s, nullptr, 10);
            if (v >= 1) return static_cast<unsigned>(v);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1u;
    }();
    return n;
}

/// Runs body(i) for i in [0, n) on up to thread_count() threads.
/// The body must be safe to run concurrently for distinct indices.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Upper incomplete gamma function Gamma(a, x), unnormalised, for x >= 0
/// and any real a (a > 0 required when x == 0).
inline double gamma_upper(double a, double x) {
    detail::disable_gsl_abort();
    if (x < 0) throw std::domain_error("gamma_upper: x < 0");
    if (x == 0.0) {
        if (a <= 0) return inf;
        return gsl_sf_gamma(a);
    }
    gsl_sf_result r;
    const int status = gsl_sf_gamma_inc_e(a, x, &r);
    if (status == GSL_EUNDRFLW) return 0.0;
    if (status != 0)
        throw std::runtime_error(std::string("gamma_upper: gsl error ") + gsl_strerror(status));
    return r.val;
}

/// Adaptive quadrature of f over the finite interval [lo, hi].
/// Thin wrapper over the GSL QAGS rule; rel_tol is the requested relative
/// accuracy (an absolute floor of 1e-300 avoids spurious failures on
/// integrals that are exactly zero).
inline double adaptive_integrate(const std::function<double(double)>& f, double lo, double hi,
                                 double rel_tol = 1e-12) {
    detail::disable_gsl_abort();
    if (!(lo < hi)) return 0.0;
    struct Hook {
        const std::function<double(double)>* f;
    } hook{&f};
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<Hook*>(p)->f)(x); };
    gf.params = &hook;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qags(&gf, lo, hi, 1e-300, rel_tol, 4096, ws, &result, &abserr);
    if (status == GSL_EROUND || status == GSL_EMAXITER) {
        // Accept a slightly degraded answer on hard integrands; the callers
        // that need certified accuracy use closed forms instead.
        status = 0;
    }
    gsl_integration_workspace_free(ws);
    if (status != 0)
        throw std::runtime_error(std::string("adaptive_integrate: gsl error ") + gsl_strerror(status));
    return result;
}

/// Adaptive quadrature of f over [lo, +inf) via the GSL QAGIU rule.
inline double adaptive_integrate_upper(const std::function<double(double)>& f, double lo,
                                       double rel_tol = 1e-12) {
    detail::disable_gsl_abort();
    struct Hook {
        const std::function<double(double)>* f;
    } hook{&f};
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<Hook*>(p)->f)(x); };
    gf.params = &hook;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qagiu(&gf, lo, 1e-300, rel_tol, 4096, ws, &result, &abserr);
    if (status == GSL_EROUND || status == GSL_EMAXITER) status = 0;
    gsl_integration_workspace_free(ws);
    if (status != 0)
        throw std::runtime_error(std::string("adaptive_integrate_upper: gsl error ") +
                                 gsl_strerror(status));
    return result;
}

/// Integral of s^a * (c + log(1/s))^b over (s0, s1), with 0 <= s0 < s1 and
/// c + log(1/s1) >= 0 so the log factor stays nonnegative.  Uses the
/// substitution t = c + log(1/s): the integral becomes
///     e^{kc} * Int_{t1}^{t0} t^b e^{-kt} dt,   k = a + 1,
/// which is a difference of upper incomplete gamma values when k > 0, a pure
/// power of t when k == 0, and is handled by adaptive quadrature when k < 0
/// (growing exponential, only reachable with s0 > 0).  Returns +inf when the
/// improper integral diverges at s0 == 0.
inline double power_log_integral(double a, double c, double b, double s0, double s1) {
    if (!(s0 >= 0) || !(s1 > s0)) return 0.0;
    const double k = a + 1.0;
    if (b == 0.0) {
        // plain power rule
        if (k > 0) return (std::pow(s1, k) - std::pow(s0, k)) / k;
        if (k == 0) return s0 == 0.0 ? inf : std::log(s1 / s0);
        return s0 == 0.0 ? inf : (std::pow(s1, k) - std::pow(s0, k)) / k;
    }
    const double t1 = c + std::log(1.0 / s1);
    if (t1 < -1e-14) throw std::domain_error("power_log_integral: log factor negative on interval");
    const double t0 = s0 == 0.0 ? inf : c + std::log(1.0 / s0);
    if (k == 0.0) {
        if (s0 == 0.0) return b < -1.0 ? std::pow(t1, b + 1.0) / (-(b + 1.0)) : inf;
        if (b == -1.0) return std::log(t0 / t1);
        return (std::pow(t0, b + 1.0) - std::pow(t1, b + 1.0)) / (b + 1.0);
    }
    if (k > 0.0) {
        const double g1 = gamma_upper(b + 1.0, k * std::max(t1, 0.0));
        const double g0 = s0 == 0.0 ? 0.0 : gamma_upper(b + 1.0, k * t0);
        if (std::isinf(g1)) return inf;
        return std::exp(k * c) * std::pow(k, -(b + 1.0)) * (g1 - g0);
    }
    if (s0 == 0.0) return inf;
    // k < 0 with a log factor: integrate e^{-k(t-c)} t^b over [t1, t0].
    const double m = -k;
    return adaptive_integrate([&](double t) { return std::exp(m * (t - c)) * std::pow(t, b); },
                              t1, t0, 1e-12);
}

/// True when the improper integral of s^a (c+log 1/s)^b over (0, s1) is finite.
inline bool power_log_integrable_at_zero(double a, double b) {
    if (a > -1.0) return true;
    if (a < -1.0) return false;
    return b < -1.0;
}

namespace detail {

// 16 point Gauss-Legendre rule on [-1, 1]; positive half listed, rule is
// symmetric.
inline constexpr double gl16_x[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr double gl16_w[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

} // namespace detail

/// Fixed 16 point Gauss-Legendre quadrature of f over [lo, hi].
template <typename F>
double gauss16(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * detail::gl16_x[i];
        acc += detail::gl16_w[i] * (f(mid - dx) + f(mid + dx));
    }
    return acc * half;
}

/// Bisection on [lo, hi] for a continuous f with f(lo), f(hi) of opposite
/// sign; stops when the bracket is shorter than tol (absolute).
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: no sign change");
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson limited slopes).
/// Extrapolates linearly with the endpoint slopes, which is the right thing
/// for data that is linear in these coordinates far out (log-log tables of
/// power-law functions).
class Pchip {
public:
    Pchip() = default;

    Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw std::invalid_argument("Pchip: need >= 2 nodes");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("Pchip: x not increasing");
        d_.resize(n);
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        d_[0] = delta[0];
        d_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2 * (x_[i] - x_[i - 1]);
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
        if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

private:
    std::vector<double> x_, y_, d_;
};

} // namespace ripot

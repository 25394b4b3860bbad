#pragma once

// Vector fields sampled at the cell centers of a periodic box, with spectral
// differential structure.  Derivatives are Fourier multipliers, so curls are
// divergence-free to rounding rather than to truncation; test families are
// built from compactly supported polynomial bumps whose radial integrals give
// the normalization constants in closed 1-d quadrature form.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "numeric.hpp"

namespace ripot {

inline constexpr double pi = std::numbers::pi;

struct GriddedField {
    int n = 2;        // ambient dimension, 2 or 3
    int M = 0;        // cells per axis
    int m = 1;        // components per cell
    double box = 1.0; // physical side length

    // component-major storage; cells are row-major over the axes
    std::vector<double> data;

    GriddedField() = default;
    GriddedField(int n_, int M_, int m_, double box_) : n(n_), M(M_), m(m_), box(box_) {
        if (n != 2 && n != 3) throw std::invalid_argument("GriddedField: n must be 2 or 3");
        if (M <= 0 || m <= 0) throw std::invalid_argument("GriddedField: bad sizes");
        if (!(box > 0.0)) throw std::invalid_argument("GriddedField: bad box length");
        data.assign(cells() * static_cast<std::size_t>(m), 0.0);
    }

    std::size_t cells() const {
        std::size_t c = 1;
        for (int a = 0; a < n; ++a) c *= static_cast<std::size_t>(M);
        return c;
    }
    double h() const { return box / M; }
    double cell_measure() const { return std::pow(h(), n); }

    double& at(int c, std::size_t idx) { return data[static_cast<std::size_t>(c) * cells() + idx]; }
    double at(int c, std::size_t idx) const {
        return data[static_cast<std::size_t>(c) * cells() + idx];
    }

    /// Euclidean length of the m-vector stored in one cell.
    double cell_norm(std::size_t idx) const {
        double acc = 0.0;
        for (int c = 0; c < m; ++c) acc += at(c, idx) * at(c, idx);
        return std::sqrt(acc);
    }

    double sup_norm() const {
        double best = 0.0;
        for (std::size_t i = 0; i < cells(); ++i) best = std::max(best, cell_norm(i));
        return best;
    }
    double l1_norm() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < cells(); ++i) acc += cell_norm(i);
        return acc * cell_measure();
    }
    double component_mean(int c) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < cells(); ++i) acc += at(c, i);
        return acc / cells();
    }
    double integral(int c) const { return component_mean(c) * cells() * cell_measure(); }

    bool same_grid(const GriddedField& o) const { return n == o.n && M == o.M && box == o.box; }

    /// Physical coordinates of the center of a cell.
    std::array<double, 3> center(std::size_t idx) const {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        std::size_t rest = idx;
        for (int a = n - 1; a >= 0; --a) {
            x[a] = (static_cast<double>(rest % M) + 0.5) * h();
            rest /= M;
        }
        return x;
    }
};

namespace detail {

inline std::mutex& fftw_planning_mutex() {
    static std::mutex mu;
    return mu;
}

using cvec = std::vector<std::complex<double>>;

// complex DFT of one scalar component; sign -1 forward, +1 backward (the
// backward pass divides by the cell count)
inline cvec fft(cvec buf, int n, int M, int sign) {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planning_mutex());
        plan = n == 2 ? fftw_plan_dft_2d(M, M, p, p, sign, FFTW_ESTIMATE)
                      : fftw_plan_dft_3d(M, M, M, p, p, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planning_mutex());
        fftw_destroy_plan(plan);
    }
    if (sign == FFTW_BACKWARD)
        for (auto& z : buf) z /= static_cast<double>(buf.size());
    return buf;
}

inline cvec fft_component(const GriddedField& F, int c, int sign) {
    cvec buf(F.cells());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = F.at(c, i);
    return fft(std::move(buf), F.n, F.M, sign);
}

// signed frequency of index j, with the Nyquist mode dropped so odd
// derivative multipliers keep real fields real
inline double frequency(int j, int M, double box) {
    int f = j <= M / 2 ? j : j - M;
    if (2 * j == M) f = 0;
    return 2.0 * pi * f / box;
}

// iterate the spectral grid, handing the wave vector to fn(idx, xi)
template <class Fn>
void for_each_mode(int n, int M, double box, Fn&& fn) {
    if (n == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j, ++idx)
                fn(idx, std::array<double, 3>{frequency(i, M, box), frequency(j, M, box), 0.0});
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                for (int k = 0; k < M; ++k, ++idx)
                    fn(idx, std::array<double, 3>{frequency(i, M, box), frequency(j, M, box),
                                                  frequency(k, M, box)});
    }
}

// compactly supported bump profile on [0, 1).  A polynomial in t^2 keeps the
// sampled field band-limited in practice: the Fourier tail decays like
// |xi|^(-13.5), far below the stretched-exponential tail of the classical
// exp(-1/(1-t^2)) bump at realistic resolutions, so spectral derivatives ring
// at rounding level instead of at the percent level.
inline double bump(double t) {
    if (!(t < 1.0)) return 0.0;
    const double q = 1.0 - t * t;
    const double q2 = q * q;
    const double q4 = q2 * q2;
    return q4 * q4 * q4;
}

} // namespace ripot::detail

/// Multi-indices of a fixed order: all beta in N^n with |beta| = k, in
/// lexicographically decreasing order of the first axes.
struct TensorIndexSet {
    int n = 2;
    int k = 1;
    std::vector<std::array<int, 3>> multi_indices;

    static TensorIndexSet make(int n, int k) {
        if (n != 2 && n != 3) throw std::invalid_argument("TensorIndexSet: n must be 2 or 3");
        if (k < 1) throw std::invalid_argument("TensorIndexSet: order must be positive");
        TensorIndexSet t;
        t.n = n;
        t.k = k;
        if (n == 2) {
            for (int a = k; a >= 0; --a) t.multi_indices.push_back({a, k - a, 0});
        } else {
            for (int a = k; a >= 0; --a)
                for (int b = k - a; b >= 0; --b) t.multi_indices.push_back({a, b, k - a - b});
        }
        return t;
    }

    std::size_t size() const { return multi_indices.size(); }
};

/// Descriptors of the built-in analytic families.  `radius` is the bump
/// support radius (or the Gaussian sigma), `scale` the concentration factor
/// lambda of x -> lambda^n g(lambda x) families, `center` in box units.
struct FieldSpec {
    enum class Kind {
        zero,
        gaussian,     // scalar: amplitude exp(-|x-c|^2 / (2 radius^2))
        bump,         // scalar: amplitude lambda^n g(lambda (x-c)), int g = 1
        stream_curl,  // vector: curl of a concentrating bump potential
        gradient,     // vector: gradient of a bump potential
        radial_power, // scalar: amplitude r^power (1+log+ 1/r)^logpow, r = scale|x-c|
    };
    Kind kind = Kind::zero;
    double amplitude = 1.0;
    double radius = 0.125;
    double scale = 1.0;
    double power = 0.0;
    double logpow = 0.0;
    std::array<double, 3> center = {0.5, 0.5, 0.5};
};

namespace detail {

// L^1 norm of the normalized bump profile bits; 1-d radial quadrature
inline double bump_mass(int n, double R) {
    // int over R^n of bump(|x|/R): n=2 -> 2 pi int r bump, n=3 -> 4 pi int r^2 bump
    const double c = n == 2 ? 2.0 * pi : 4.0 * pi;
    return c * adaptive_integrate(
                   [&](double r) { return std::pow(r, n - 1) * bump(r / R); }, 0.0, R, 1e-13);
}

// L^1 norm of the curl of the bump potential (integration by parts gives a
// plain radial integral of the potential itself)
inline double bump_curl_mass(int n, double R) {
    if (n == 2) // 2 pi int_0^R bump(r/R) dr
        return 2.0 * pi * adaptive_integrate([&](double r) { return bump(r / R); }, 0.0, R, 1e-13);
    // n = 3, potential (0,0,psi): 2 pi^2 int_0^R r bump(r/R) dr
    return 2.0 * pi * pi *
           adaptive_integrate([&](double r) { return r * bump(r / R); }, 0.0, R, 1e-13);
}

// minimal-image displacement from the center, in physical units
inline std::array<double, 3> displacement(const GriddedField& G, std::size_t idx,
                                          const std::array<double, 3>& c) {
    auto x = G.center(idx);
    for (int a = 0; a < G.n; ++a) {
        double d = x[a] - c[a] * G.box;
        d -= G.box * std::round(d / G.box);
        x[a] = d;
    }
    return x;
}

inline double radius_of(const std::array<double, 3>& d, int n) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += d[a] * d[a];
    return std::sqrt(acc);
}

// spectral first derivative along one axis
inline GriddedField spectral_gradient_component(const GriddedField& psi, int axis) {
    GriddedField out(psi.n, psi.M, 1, psi.box);
    auto spec = fft_component(psi, 0, FFTW_FORWARD);
    for_each_mode(psi.n, psi.M, psi.box, [&](std::size_t idx, const std::array<double, 3>& xi) {
        spec[idx] *= std::complex<double>(0.0, xi[axis]);
    });
    auto back = fft(std::move(spec), psi.n, psi.M, FFTW_BACKWARD);
    for (std::size_t i = 0; i < out.cells(); ++i) out.at(0, i) = back[i].real();
    return out;
}

} // namespace ripot::detail

/// Samples one of the built-in analytic families at cell centers.
inline GriddedField make_field(const FieldSpec& spec, int n, int M, double box = 1.0) {
    using K = FieldSpec::Kind;
    if (spec.kind == K::stream_curl || spec.kind == K::gradient) {
        // sample the scalar potential, then differentiate spectrally so the
        // discrete divergence identities hold to rounding
        GriddedField psi(n, M, 1, box);
        const double R = spec.radius * box;
        const double lam = spec.scale;
        for (std::size_t i = 0; i < psi.cells(); ++i) {
            const double r = detail::radius_of(detail::displacement(psi, i, spec.center), n);
            psi.at(0, i) =
                spec.amplitude * std::pow(lam, n - 1) * detail::bump(lam * r / R);
        }
        GriddedField F(n, M, n, box);
        if (spec.kind == K::gradient) {
            for (int a = 0; a < n; ++a) {
                const GriddedField g = detail::spectral_gradient_component(psi, a);
                for (std::size_t i = 0; i < F.cells(); ++i) F.at(a, i) = g.at(0, i);
            }
        } else if (n == 2) { // (-d2 psi, d1 psi)
            const GriddedField g0 = detail::spectral_gradient_component(psi, 1);
            const GriddedField g1 = detail::spectral_gradient_component(psi, 0);
            for (std::size_t i = 0; i < F.cells(); ++i) {
                F.at(0, i) = -g0.at(0, i);
                F.at(1, i) = g1.at(0, i);
            }
        } else { // curl of (0, 0, psi): (d2 psi, -d1 psi, 0)
            const GriddedField g0 = detail::spectral_gradient_component(psi, 1);
            const GriddedField g1 = detail::spectral_gradient_component(psi, 0);
            for (std::size_t i = 0; i < F.cells(); ++i) {
                F.at(0, i) = g0.at(0, i);
                F.at(1, i) = -g1.at(0, i);
                F.at(2, i) = 0.0;
            }
        }
        return F;
    }

    GriddedField F(n, M, 1, box);
    const double R = spec.radius * box;
    switch (spec.kind) {
        case K::zero:
            break;
        case K::gaussian:
            for (std::size_t i = 0; i < F.cells(); ++i) {
                const double r = detail::radius_of(detail::displacement(F, i, spec.center), n);
                F.at(0, i) = spec.amplitude * std::exp(-0.5 * r * r / (R * R));
            }
            break;
        case K::bump: {
            const double mass = detail::bump_mass(n, R);
            const double lam = spec.scale;
            for (std::size_t i = 0; i < F.cells(); ++i) {
                const double r = detail::radius_of(detail::displacement(F, i, spec.center), n);
                F.at(0, i) =
                    spec.amplitude * std::pow(lam, n) * detail::bump(lam * r / R) / mass;
            }
            break;
        }
        case K::radial_power:
            for (std::size_t i = 0; i < F.cells(); ++i) {
                const double raw =
                    detail::radius_of(detail::displacement(F, i, spec.center), n) * spec.scale;
                // regularized at the cell scale so values stay finite
                const double r = std::max(raw, 0.25 * F.h());
                const double u = std::max(std::log(1.0 / r), 0.0);
                F.at(0, i) = spec.amplitude * std::pow(r, spec.power) * std::pow(1.0 + u, spec.logpow);
            }
            break;
        default:
            throw std::invalid_argument("make_field: unknown descriptor");
    }
    return F;
}

/// k-th order divergence of a field indexed by TensorIndexSet(n, k): the sum
/// over |beta| = k of the beta-th spectral derivative of component beta.
inline GriddedField div_k(const GriddedField& F, int k) {
    const TensorIndexSet idxset = TensorIndexSet::make(F.n, k);
    if (static_cast<std::size_t>(F.m) != idxset.size())
        throw std::invalid_argument("div_k: component count does not match the index set");
    detail::cvec acc(F.cells(), {0.0, 0.0});
    for (std::size_t b = 0; b < idxset.size(); ++b) {
        auto spec = detail::fft_component(F, static_cast<int>(b), FFTW_FORWARD);
        const auto& beta = idxset.multi_indices[b];
        detail::for_each_mode(F.n, F.M, F.box,
                              [&](std::size_t i, const std::array<double, 3>& xi) {
                                  std::complex<double> mult{1.0, 0.0};
                                  for (int a = 0; a < F.n; ++a)
                                      for (int rep = 0; rep < beta[a]; ++rep)
                                          mult *= std::complex<double>(0.0, xi[a]);
                                  acc[i] += mult * spec[i];
                              });
    }
    auto back = detail::fft(std::move(acc), F.n, F.M, FFTW_BACKWARD);
    GriddedField out(F.n, F.M, 1, F.box);
    for (std::size_t i = 0; i < out.cells(); ++i) out.at(0, i) = back[i].real();
    return out;
}

/// Nonnegative unit-mass kernel supported in the ball of radius 1/h around
/// the origin cell (wrap-around storage for circular convolution).
struct Mollifier {
    int h = 4;
    GriddedField kernel;
};

inline Mollifier make_mollifier(int h, int n, int M, double box = 1.0) {
    if (h < 1) throw std::invalid_argument("make_mollifier: h must be positive");
    const double R = 1.0 / h;
    if (!(R <= 0.5 * box)) throw std::invalid_argument("make_mollifier: support exceeds half box");
    Mollifier rho;
    rho.h = h;
    rho.kernel = GriddedField(n, M, 1, box);
    auto& ker = rho.kernel;
    const std::array<double, 3> origin{0.0, 0.0, 0.0};
    double sum = 0.0;
    for (std::size_t i = 0; i < ker.cells(); ++i) {
        const double r = detail::radius_of(detail::displacement(ker, i, origin), n);
        const double v = detail::bump(r / R);
        ker.at(0, i) = v;
        sum += v;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("make_mollifier: grid too coarse for 1/h");
    const double scale = 1.0 / (sum * ker.cell_measure());
    for (double& v : ker.data) v *= scale; // discrete integral is exactly one
    return rho;
}

/// Circular convolution with the mollifier kernel.
inline GriddedField mollify(const GriddedField& F, const Mollifier& rho) {
    if (!F.same_grid(rho.kernel)) throw std::invalid_argument("mollify: grid mismatch");
    auto kspec = detail::fft_component(rho.kernel, 0, FFTW_FORWARD);
    GriddedField out(F.n, F.M, F.m, F.box);
    for (int c = 0; c < F.m; ++c) {
        auto spec = detail::fft_component(F, c, FFTW_FORWARD);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= kspec[i] * F.cell_measure();
        auto back = detail::fft(std::move(spec), F.n, F.M, FFTW_BACKWARD);
        for (std::size_t i = 0; i < out.cells(); ++i) out.at(c, i) = back[i].real();
    }
    return out;
}

/// Divergence-free concentrating family: spectral curls of L^1-normalized
/// bump potentials, one field per scale level.
inline std::vector<GriddedField> make_divfree_family(const std::vector<double>& scale_levels,
                                                     int n, int M, double box = 1.0,
                                                     double radius = 0.125) {
    for (std::size_t i = 0; i + 1 < scale_levels.size(); ++i)
        if (!(scale_levels[i] < scale_levels[i + 1]))
            throw std::invalid_argument("make_divfree_family: levels must increase");
    std::vector<GriddedField> out(scale_levels.size());
    parallel_for(scale_levels.size(), [&](std::size_t i) {
        FieldSpec spec;
        spec.kind = FieldSpec::Kind::stream_curl;
        spec.radius = radius;
        spec.scale = scale_levels[i];
        spec.amplitude = 1.0 / detail::bump_curl_mass(n, radius * box);
        out[i] = make_field(spec, n, M, box);
    });
    return out;
}

/// Unconstrained concentrating family: L^1-normalized scalar bumps.
inline std::vector<GriddedField> make_unconstrained_family(const std::vector<double>& scale_levels,
                                                           int n, int M, double box = 1.0,
                                                           double radius = 0.125) {
    for (std::size_t i = 0; i + 1 < scale_levels.size(); ++i)
        if (!(scale_levels[i] < scale_levels[i + 1]))
            throw std::invalid_argument("make_unconstrained_family: levels must increase");
    std::vector<GriddedField> out(scale_levels.size());
    parallel_for(scale_levels.size(), [&](std::size_t i) {
        FieldSpec spec;
        spec.kind = FieldSpec::Kind::bump;
        spec.radius = radius;
        spec.scale = scale_levels[i];
        out[i] = make_field(spec, n, M, box);
    });
    return out;
}

} // namespace ripot

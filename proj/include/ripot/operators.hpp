#pragma once

// The integral and projection operators: the fractional integral of order
// alpha realized as a free-space convolution on a zero-padded doubled grid,
// the exact piecewise Hardy pair on profiles, spectral projections onto
// fields with vanishing k-th order divergence, and the kernel-intersection
// test for first-order symbol maps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "grid.hpp"
#include "numeric.hpp"
#include "profile.hpp"

namespace ripot {

struct RieszSpec {
    enum class Mode { spectral, direct };
    double alpha = 1.0;
    Mode mode = Mode::spectral;
    /// require the input to live in the central quarter of the box, so the
    /// free-space convolution sees no wrap-around
    bool enforce_support = true;
};

/// Normalization making the continuum Fourier symbol |xi|^(-alpha).
inline double riesz_gamma(int n, double alpha) {
    return std::pow(pi, 0.5 * n) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha) /
           std::tgamma(0.5 * (n - alpha));
}

namespace detail {

// average of |x|^(alpha - n) over the cell centered at the origin
inline double singular_cell_average(int n, double h, double alpha) {
    const double a = 0.5 * h;
    if (n == 2) {
        // polar reduction over one octant: (8 a^alpha / alpha) int sec^alpha
        const double ang = adaptive_integrate(
            [&](double t) { return std::pow(std::cos(t), -alpha); }, 0.0, 0.25 * pi, 1e-13);
        return 8.0 * std::pow(a, alpha) / alpha * ang / (4.0 * a * a);
    }
    // radial reduction onto the six faces: (6a/alpha) int (u^2+v^2+a^2)^((alpha-3)/2)
    const double face = 4.0 * gauss16(
                            [&](double u) {
                                return gauss16(
                                    [&](double v) {
                                        return std::pow(u * u + v * v + a * a,
                                                        0.5 * (alpha - 3.0));
                                    },
                                    0.0, a);
                            },
                            0.0, a);
    return 6.0 * a / alpha * face / (8.0 * a * a * a);
}

// cell average of |z|^(alpha - n) over the cell centered at z0 (not origin)
inline double near_cell_average(int n, double h, double alpha,
                                const std::array<double, 3>& z0) {
    const double a = 0.5 * h;
    if (n == 2) {
        const double v = gauss16(
            [&](double x) {
                return gauss16(
                    [&](double y) {
                        return std::pow(x * x + y * y, 0.5 * (alpha - 2.0));
                    },
                    z0[1] - a, z0[1] + a);
            },
            z0[0] - a, z0[0] + a);
        return v / (h * h);
    }
    const double v = gauss16(
        [&](double x) {
            return gauss16(
                [&](double y) {
                    return gauss16(
                        [&](double z) {
                            return std::pow(x * x + y * y + z * z, 0.5 * (alpha - 3.0));
                        },
                        z0[2] - a, z0[2] + a);
                },
                z0[1] - a, z0[1] + a);
        },
        z0[0] - a, z0[0] + a);
    return v / (h * h * h);
}

// kernel |z|^(alpha-n) tabulated on the doubled grid in wrap order.  Cells
// within 4h of the singularity store exact cell averages: pointwise samples
// there would contribute a non-cancelling O(h) quadrature error, while in the
// far field the midpoint error telescopes to O(h^2).
inline std::vector<double> riesz_kernel_table(int n, int M2, double h, double alpha) {
    std::vector<double> table(n == 2 ? static_cast<std::size_t>(M2) * M2
                                     : static_cast<std::size_t>(M2) * M2 * M2);
    const double near = 4.0 * h + 1e-12 * h;
    auto fill = [&](std::size_t idx, const std::array<int, 3>& d) {
        std::array<double, 3> z{d[0] * h, d[1] * h, d[2] * h};
        const double r = radius_of(z, n);
        if (r == 0.0)
            table[idx] = singular_cell_average(n, h, alpha);
        else if (r <= near)
            table[idx] = near_cell_average(n, h, alpha, z);
        else
            table[idx] = std::pow(r, alpha - n);
    };
    auto wrap = [&](int i) { return i <= M2 / 2 ? i : i - M2; };
    if (n == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < M2; ++i)
            for (int j = 0; j < M2; ++j, ++idx) fill(idx, {wrap(i), wrap(j), 0});
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < M2; ++i)
            for (int j = 0; j < M2; ++j)
                for (int k = 0; k < M2; ++k, ++idx) fill(idx, {wrap(i), wrap(j), wrap(k)});
    }
    return table;
}

} // namespace ripot::detail

/// Fractional integral of order alpha applied componentwise.  The input is
/// zero-padded onto a doubled grid and convolved with the tabulated kernel,
/// either through the FFT or by a literal double sum; the two modes evaluate
/// the same Riemann sum and agree to rounding.
inline GriddedField riesz(const GriddedField& F, const RieszSpec& spec) {
    if (!(spec.alpha > 0.0) || !(spec.alpha < F.n))
        throw std::invalid_argument("riesz: alpha must lie in (0, n)");

    GriddedField src = F;
    if (spec.enforce_support) {
        const double sup = F.sup_norm();
        const double lo = 0.375 * F.box, hi = 0.625 * F.box;
        for (std::size_t i = 0; i < F.cells(); ++i) {
            const auto x = F.center(i);
            bool inside = true;
            for (int a = 0; a < F.n; ++a) inside = inside && x[a] >= lo && x[a] <= hi;
            if (inside) continue;
            if (F.cell_norm(i) > 1e-6 * sup)
                throw std::invalid_argument("riesz: field is not supported in the central quarter");
            for (int c = 0; c < F.m; ++c) src.at(c, i) = 0.0;
        }
    }

    const int M2 = 2 * F.M;
    const double h = F.h();
    const auto table = detail::riesz_kernel_table(F.n, M2, h, spec.alpha);
    const double scale = F.cell_measure() / riesz_gamma(F.n, spec.alpha);
    GriddedField out(F.n, F.M, F.m, F.box);

    auto pad_index = [&](std::size_t idx) {
        // original row-major index -> doubled-grid row-major index
        if (F.n == 2) {
            const std::size_t i = idx / F.M, j = idx % F.M;
            return i * M2 + j;
        }
        const std::size_t k = idx % F.M, j = (idx / F.M) % F.M, i = idx / (F.M * F.M);
        return (i * M2 + j) * M2 + k;
    };

    if (spec.mode == RieszSpec::Mode::direct) {
        auto wrap_diff = [&](int a, int b) { return ((a - b) % M2 + M2) % M2; };
        for (int c = 0; c < F.m; ++c) {
            parallel_for(out.cells(), [&](std::size_t ix) {
                double acc = 0.0;
                for (std::size_t iy = 0; iy < F.cells(); ++iy) {
                    const double v = src.at(c, iy);
                    if (v == 0.0) continue;
                    std::size_t kidx;
                    if (F.n == 2) {
                        kidx = static_cast<std::size_t>(
                                   wrap_diff(static_cast<int>(ix / F.M),
                                             static_cast<int>(iy / F.M))) *
                                   M2 +
                               wrap_diff(static_cast<int>(ix % F.M), static_cast<int>(iy % F.M));
                    } else {
                        const int xi = static_cast<int>(ix / (F.M * F.M));
                        const int xj = static_cast<int>((ix / F.M) % F.M);
                        const int xk = static_cast<int>(ix % F.M);
                        const int yi = static_cast<int>(iy / (F.M * F.M));
                        const int yj = static_cast<int>((iy / F.M) % F.M);
                        const int yk = static_cast<int>(iy % F.M);
                        kidx = (static_cast<std::size_t>(wrap_diff(xi, yi)) * M2 +
                                wrap_diff(xj, yj)) *
                                   M2 +
                               wrap_diff(xk, yk);
                    }
                    acc += table[kidx] * v;
                }
                out.at(c, ix) = acc * scale;
            });
        }
        return out;
    }

    detail::cvec kspec(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) kspec[i] = table[i];
    kspec = detail::fft(std::move(kspec), F.n, M2, FFTW_FORWARD);
    for (int c = 0; c < F.m; ++c) {
        detail::cvec buf(table.size(), {0.0, 0.0});
        for (std::size_t i = 0; i < F.cells(); ++i) buf[pad_index(i)] = src.at(c, i);
        buf = detail::fft(std::move(buf), F.n, M2, FFTW_FORWARD);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= kspec[i];
        buf = detail::fft(std::move(buf), F.n, M2, FFTW_BACKWARD);
        for (std::size_t i = 0; i < F.cells(); ++i) out.at(c, i) = buf[pad_index(i)].real() * scale;
    }
    return out;
}

/// Piecewise sum of pure power terms, the closed-form image of step profiles
/// under the Hardy pair.  Zero beyond the last segment unless a tail segment
/// is present.
struct PiecewisePower {
    struct Term {
        double c, e;
    };
    struct Seg {
        double lo, hi;
        std::vector<Term> terms;
    };
    std::vector<Seg> segs;

    double eval(double s) const {
        for (const auto& seg : segs) {
            if (s >= seg.lo && s < seg.hi) {
                double acc = 0.0;
                for (const auto& t : seg.terms) acc += t.c * std::pow(s, t.e);
                return acc;
            }
        }
        return 0.0;
    }

    /// Exact integral of s^(w-1) * value(s) over the whole domain.
    double weighted_l1(double w) const {
        double acc = 0.0;
        for (const auto& seg : segs)
            for (const auto& t : seg.terms)
                acc += t.c * power_log_integral(w - 1.0 + t.e, 0.0, 0.0, seg.lo, seg.hi);
        return acc;
    }

    /// Exact integral of value(s) * g(s) for a step profile g.
    double pairing_with(const Profile& g) const {
        if (g.head().present())
            throw std::invalid_argument("PiecewisePower: step profiles only");
        double acc = 0.0;
        for (const auto& gs : g.segments()) {
            if (gs.v == 0.0) continue;
            for (const auto& seg : segs) {
                const double lo = std::max(seg.lo, gs.lo);
                const double hi = std::min(seg.hi, gs.hi);
                if (!(lo < hi)) continue;
                for (const auto& t : seg.terms)
                    acc += gs.v * t.c * power_log_integral(t.e, 0.0, 0.0, lo, hi);
            }
        }
        return acc;
    }
};

/// Tail-weighted Hardy transform: (s |-> int_s^L r^(alpha/n - 1) f(r) dr),
/// exact on step profiles, itself non-increasing.
inline PiecewisePower hardy(const Profile& f, int n, double alpha) {
    if (!(alpha > 0.0) || !(alpha < n)) throw std::invalid_argument("hardy: alpha outside (0, n)");
    if (f.head().present())
        throw std::invalid_argument("hardy: step profiles only, sample symbolic heads first");
    const double a = alpha / n;
    const auto segs = f.segments();
    PiecewisePower out;
    // suffix integrals, innermost segment last
    double suffix = 0.0;
    std::vector<double> tail(segs.size() + 1, 0.0);
    for (std::size_t j = segs.size(); j-- > 0;) {
        suffix += segs[j].v * (std::pow(segs[j].hi, a) - std::pow(segs[j].lo, a)) / a;
        tail[j] = suffix;
    }
    for (std::size_t j = 0; j < segs.size(); ++j) {
        PiecewisePower::Seg s;
        s.lo = segs[j].lo;
        s.hi = segs[j].hi;
        // H(s) = tail[j+1] + v (hi^a - s^a)/a on [lo, hi)
        s.terms.push_back({tail[j + 1] + segs[j].v * std::pow(segs[j].hi, a) / a, 0.0});
        s.terms.push_back({-segs[j].v / a, a});
        out.segs.push_back(std::move(s));
    }
    return out;
}

/// Head-weighted dual transform: (s |-> s^(alpha/n - 1) int_0^s f), exact on
/// step profiles; carries a tail segment out to the domain end.
inline PiecewisePower hardy_dual(const Profile& f, int n, double alpha) {
    if (!(alpha > 0.0) || !(alpha < n))
        throw std::invalid_argument("hardy_dual: alpha outside (0, n)");
    if (f.head().present())
        throw std::invalid_argument("hardy_dual: step profiles only, sample symbolic heads first");
    const double a = alpha / n;
    PiecewisePower out;
    const auto segs = f.segments();
    double prefix = 0.0;
    for (const auto& sg : segs) {
        PiecewisePower::Seg s;
        s.lo = sg.lo;
        s.hi = sg.hi;
        // D(s) = s^(a-1) (prefix + v (s - lo))
        s.terms.push_back({prefix - sg.v * sg.lo, a - 1.0});
        s.terms.push_back({sg.v, a});
        out.segs.push_back(std::move(s));
        prefix += sg.v * (sg.hi - sg.lo);
    }
    const double last = segs.empty() ? 0.0 : segs.back().hi;
    if (prefix > 0.0 && f.domain_length() > last) {
        PiecewisePower::Seg s;
        s.lo = last;
        s.hi = f.domain_length();
        s.terms.push_back({prefix, a - 1.0});
        out.segs.push_back(std::move(s));
    }
    return out;
}

/// Spectral projection complement: the multiplier -w (w . Fhat) / |w|^2 with
/// w_beta(xi) = xi^beta over the order-k index set.  For k = 1 this is
/// grad div (-Laplace)^(-1).
inline GriddedField helmholtz_k(const GriddedField& F, int k) {
    const TensorIndexSet idxset = TensorIndexSet::make(F.n, k);
    if (static_cast<std::size_t>(F.m) != idxset.size())
        throw std::invalid_argument("helmholtz_k: component count does not match the index set");
    const double sup = F.sup_norm();
    for (int c = 0; c < F.m; ++c)
        if (std::abs(F.component_mean(c)) > 1e-10 * std::max(1.0, sup))
            throw std::domain_error("helmholtz_k: field must have zero mean per component");

    std::vector<detail::cvec> spec(F.m);
    for (int c = 0; c < F.m; ++c) spec[c] = detail::fft_component(F, c, FFTW_FORWARD);

    GriddedField out(F.n, F.M, F.m, F.box);
    std::vector<detail::cvec> proj(F.m, detail::cvec(F.cells(), {0.0, 0.0}));
    detail::for_each_mode(F.n, F.M, F.box, [&](std::size_t i, const std::array<double, 3>& xi) {
        double w2 = 0.0;
        std::array<double, 32> w{};
        for (std::size_t b = 0; b < idxset.size(); ++b) {
            double prod = 1.0;
            for (int a = 0; a < F.n; ++a)
                for (int rep = 0; rep < idxset.multi_indices[b][a]; ++rep) prod *= xi[a];
            w[b] = prod;
            w2 += prod * prod;
        }
        if (w2 == 0.0) return; // no derivative content at this mode
        std::complex<double> dot{0.0, 0.0};
        for (std::size_t b = 0; b < idxset.size(); ++b) dot += w[b] * spec[b][i];
        for (std::size_t b = 0; b < idxset.size(); ++b) proj[b][i] = -w[b] * dot / w2;
    });
    for (int c = 0; c < F.m; ++c) {
        auto back = detail::fft(std::move(proj[c]), F.n, F.M, FFTW_BACKWARD);
        for (std::size_t i = 0; i < out.cells(); ++i) out.at(c, i) = back[i].real();
    }
    return out;
}

inline GriddedField helmholtz(const GriddedField& F) { return helmholtz_k(F, 1); }

/// Projection onto fields with vanishing k-th order divergence: P = I + H.
inline GriddedField project_k(const GriddedField& F, int k) {
    GriddedField H = helmholtz_k(F, k);
    for (std::size_t i = 0; i < H.data.size(); ++i) H.data[i] += F.data[i];
    return H;
}

inline GriddedField project(const GriddedField& F) { return project_k(F, 1); }

/// First-order symbol map L(xi) = sum_beta xi^beta L_beta, homogeneous of
/// order k, acting from R^m to R^l.
struct SymbolMap {
    int n = 2, m = 1, l = 1, k = 1;
    struct Coeff {
        std::array<int, 3> beta{0, 0, 0};
        std::vector<double> entries; // l x m, row-major
    };
    std::vector<Coeff> coeffs;

    Eigen::MatrixXd operator()(const std::array<double, 3>& xi) const {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(l, m);
        for (const auto& c : coeffs) {
            double w = 1.0;
            for (int a = 0; a < n; ++a)
                for (int rep = 0; rep < c.beta[a]; ++rep) w *= xi[a];
            for (int r = 0; r < l; ++r)
                for (int s = 0; s < m; ++s) L(r, s) += w * c.entries[r * m + s];
        }
        return L;
    }

    /// The k-th order divergence symbol: L(xi) eta = xi . eta.
    static SymbolMap divergence(int n) {
        SymbolMap S;
        S.n = n;
        S.m = n;
        S.l = 1;
        S.k = 1;
        for (int a = 0; a < n; ++a) {
            Coeff c;
            c.beta = {a == 0, a == 1, a == 2};
            c.entries.assign(n, 0.0);
            c.entries[a] = 1.0;
            S.coeffs.push_back(std::move(c));
        }
        return S;
    }
};

struct CocancelingReport {
    enum class Verdict { cocanceling, not_cocanceling, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> witness;             // nonzero common kernel vector, if any
    Eigen::MatrixXd stacked;                 // T = rows L(xi_i)
    Eigen::MatrixXd left_inverse;            // (T^T T)^(-1) T^T when injective
};

/// Samples quasi-random unit frequencies, stacks the symbol values, and
/// decides whether the kernels intersect trivially by the singular values of
/// the stack.  Rank decisions inside (1e-12, 1e-8) are declared inconclusive.
inline CocancelingReport cocanceling_check(const SymbolMap& L, int samples) {
    if (samples < 2 * L.n) throw std::invalid_argument("cocanceling_check: too few samples");

    // deterministic low-discrepancy directions
    std::vector<std::array<double, 3>> dirs;
    const double golden = 0.6180339887498949;
    for (int i = 0; i < samples; ++i) {
        if (L.n == 2) {
            const double t = 2.0 * pi * std::fmod((i + 1) * golden, 1.0);
            dirs.push_back({std::cos(t), std::sin(t), 0.0});
        } else {
            const double z = 1.0 - 2.0 * (i + 0.5) / samples;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double t = 2.0 * pi * std::fmod((i + 1) * golden, 1.0);
            dirs.push_back({r * std::cos(t), r * std::sin(t), z});
        }
    }

    // homogeneity precheck: L(c xi) = c^k L(xi)
    for (int i = 0; i < std::min(samples, 6); ++i) {
        const double c = 1.7;
        std::array<double, 3> scaled{c * dirs[i][0], c * dirs[i][1], c * dirs[i][2]};
        const Eigen::MatrixXd a = L(scaled);
        const Eigen::MatrixXd b = std::pow(c, L.k) * L(dirs[i]);
        const double ref = std::max(1.0, b.norm());
        if ((a - b).norm() > 1e-10 * ref)
            throw std::invalid_argument("cocanceling_check: symbol is not homogeneous of order k");
    }

    CocancelingReport rep;
    rep.stacked = Eigen::MatrixXd(samples * L.l, L.m);
    for (int i = 0; i < samples; ++i) rep.stacked.middleRows(i * L.l, L.l) = L(dirs[i]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep.stacked, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double rel = smax > 0.0 ? smin / smax : 0.0;

    if (rel >= 1e-8) {
        rep.verdict = CocancelingReport::Verdict::cocanceling;
        rep.left_inverse = (rep.stacked.transpose() * rep.stacked)
                               .ldlt()
                               .solve(rep.stacked.transpose());
        return rep;
    }
    if (rel > 1e-12) {
        rep.verdict = CocancelingReport::Verdict::inconclusive;
        return rep;
    }
    rep.verdict = CocancelingReport::Verdict::not_cocanceling;
    Eigen::VectorXd w = svd.matrixV().col(sv.size() - 1);
    int big = 0;
    for (int i = 1; i < w.size(); ++i)
        if (std::abs(w(i)) > std::abs(w(big))) big = i;
    if (w(big) < 0.0) w = -w;
    rep.witness.assign(w.data(), w.data() + w.size());
    return rep;
}

} // namespace ripot

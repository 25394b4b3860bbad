#pragma once

// Non-increasing profiles on (0, L): the scalar objects produced by
// rearrangement.  A profile is a right-continuous step function given by
// breakpoints and values, optionally preceded by a symbolic head
// coef * s^pow * log(1/s)^logpow on (0, cut) so that unbounded examples keep
// exact integrals all the way down to s = 0.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"

namespace ripot {

/// Analytic description of a profile near zero: value(s) = coef * s^pow *
/// (log 1/s)^logpow on (0, cut).  cut == 0 means no head.  A valid head is
/// non-increasing, which forces pow <= 0 and pow*log(1/cut) <= logpow.
struct PowerLogHead {
    double coef = 0.0;
    double pow = 0.0;
    double logpow = 0.0;
    double cut = 0.0;

    bool present() const { return cut > 0.0 && coef != 0.0; }

    double value(double s) const {
        return coef * std::pow(s, pow) * std::pow(std::log(1.0 / s), logpow);
    }

    /// Exact integral over (s0, s1), 0 <= s0 < s1 <= cut.  +inf when the
    /// improper integral at zero diverges.
    double integral(double s0, double s1) const {
        if (!(s1 > s0)) return 0.0;
        return coef * power_log_integral(pow, 0.0, logpow, s0, s1);
    }

    bool integrable() const { return power_log_integrable_at_zero(pow, logpow); }

    /// Whether value(s) stays bounded as s -> 0+.
    bool bounded() const { return !(pow < 0.0 || (pow == 0.0 && logpow > 0.0)); }

    bool non_increasing() const {
        if (!present()) return true;
        if (cut >= 1.0) return false; // the log factor must stay positive
        if (pow > 0.0) return false;
        // d/ds has the sign of pow*log(1/s) - logpow, maximal at s = cut.
        return pow * std::log(1.0 / cut) - logpow <= 1e-12;
    }
};

/// A non-increasing function on (0, domain_length): symbolic head on
/// (0, start), step values on [start, e_J), zero beyond e_J.  All integral
/// queries are exact (incomplete-gamma closed forms on the head, arithmetic
/// on the steps).
class Profile {
public:
    Profile() = default;

    /// edges: strictly increasing breakpoints e_1 < ... < e_J; values: v_j
    /// taken on [e_{j-1}, e_j) with e_0 = head.cut (or 0).  Values must be
    /// nonnegative and non-increasing, and the head must dominate v_1.
    Profile(std::vector<double> edges, std::vector<double> values, double domain_length,
            PowerLogHead head = {})
        : head_(head), L_(domain_length) {
        if (edges.size() != values.size())
            throw std::invalid_argument("Profile: edges/values size mismatch");
        const double start = head_.present() ? head_.cut : 0.0;
        edge_.clear();
        edge_.reserve(edges.size() + 1);
        edge_.push_back(start);
        double prev = start;
        for (double e : edges) {
            if (!(e > prev)) throw std::invalid_argument("Profile: edges not increasing");
            edge_.push_back(e);
            prev = e;
        }
        val_ = std::move(values);
        double vprev = inf;
        for (double v : val_) {
            if (!(v >= 0.0) || v > vprev + 1e-15 * std::max(1.0, vprev))
                throw std::invalid_argument("Profile: values not non-increasing");
            vprev = std::min(v, vprev);
        }
        if (!(L_ > 0.0)) throw std::invalid_argument("Profile: domain length must be positive");
        if (!edge_.empty() && edge_.back() > L_ * (1 + 1e-12))
            throw std::invalid_argument("Profile: breakpoints exceed domain");
        if (head_.present()) {
            if (!head_.non_increasing())
                throw std::invalid_argument("Profile: head is not non-increasing");
            if (!val_.empty() && head_.value(head_.cut) < val_.front() * (1 - 1e-12))
                throw std::invalid_argument("Profile: head does not dominate first step");
        }
        prefix_.resize(edge_.size());
        prefix_[0] = head_.present() ? head_.integral(0.0, head_.cut) : 0.0;
        for (std::size_t j = 0; j + 1 < edge_.size(); ++j)
            prefix_[j + 1] = prefix_[j] + val_[j] * (edge_[j + 1] - edge_[j]);
    }

    /// Pure head profile: f = head on (0, cut), zero beyond.
    static Profile pure_head(PowerLogHead head, double domain_length) {
        Profile p;
        p.head_ = head;
        p.L_ = domain_length;
        p.edge_ = {head.cut};
        p.prefix_ = {head.integral(0.0, head.cut)};
        if (!head.non_increasing()) throw std::invalid_argument("Profile: head is not non-increasing");
        return p;
    }

    double domain_length() const { return L_; }
    const PowerLogHead& head() const { return head_; }
    const std::vector<double>& edges() const { return edge_; }
    const std::vector<double>& values() const { return val_; }

    /// Point value; zero outside (0, e_J).
    double value(double s) const {
        if (!(s > 0.0)) return sup();
        if (head_.present() && s < head_.cut) return head_.value(s);
        if (s >= edge_.back()) return 0.0;
        const auto it = std::upper_bound(edge_.begin(), edge_.end(), s);
        const std::size_t j = static_cast<std::size_t>(it - edge_.begin()) - 1;
        return val_[j];
    }

    /// Essential supremum; +inf when the head is unbounded.
    double sup() const {
        if (head_.present()) {
            if (!head_.bounded()) return inf;
            return head_.coef; // a bounded non-increasing head is constant
        }
        return val_.empty() ? 0.0 : val_.front();
    }

    /// Exact integral over (0, s).
    double integral_to(double s) const {
        if (!(s > 0.0)) return 0.0;
        if (head_.present() && s <= head_.cut) return head_.integral(0.0, s);
        if (s >= edge_.back()) return prefix_.back();
        const auto it = std::upper_bound(edge_.begin(), edge_.end(), s);
        const std::size_t j = static_cast<std::size_t>(it - edge_.begin()) - 1;
        return prefix_[j] + val_[j] * (s - edge_[j]);
    }

    double integral() const { return prefix_.back(); }

    /// Averaged maximal value (1/s) * integral_to(s).
    double double_star(double s) const {
        if (!(s > 0.0)) return sup();
        return integral_to(std::min(s, L_)) / s;
    }

    /// Measure of {f > lambda} for lambda >= 0.
    double distribution(double lambda) const {
        if (lambda < 0.0) lambda = 0.0;
        if (lambda >= sup()) return 0.0;
        // step region first: rightmost edge whose value still exceeds lambda
        for (std::size_t j = val_.size(); j-- > 0;) {
            if (val_[j] > lambda) return edge_[j + 1];
        }
        // all steps are <= lambda < sup, so the level is crossed in the head
        if (head_.value(head_.cut) > lambda) return head_.cut;
        const double a = std::log(head_.cut);
        double b = a;
        while (b > -690.0 && head_.value(std::exp(b)) <= lambda) b -= 2.0;
        if (b <= -690.0) return 0.0;
        const double x = bisect([&](double t) { return head_.value(std::exp(t)) - lambda; }, b, a, 1e-14);
        return std::exp(x);
    }

    /// Exact integral of (f - lambda)_+ over the domain, lambda >= 0.
    double excess(double lambda) const {
        if (lambda <= 0.0) return integral();
        const double d = distribution(lambda);
        if (d == 0.0) return 0.0;
        return integral_to(d) - lambda * d;
    }

    /// Distinct step values, descending, without the head range.
    std::vector<double> distinct_values() const {
        std::vector<double> out;
        for (double v : val_)
            if (out.empty() || v < out.back()) out.push_back(v);
        return out;
    }

    Profile scaled(double c) const {
        if (!(c >= 0.0)) throw std::invalid_argument("Profile: negative scale");
        Profile p = *this;
        p.head_.coef *= c;
        for (double& v : p.val_) v *= c;
        for (double& q : p.prefix_) q *= c;
        return p;
    }

    /// One integration segment: either the head piece or a constant step.
    struct Segment {
        double lo, hi;
        bool is_head;
        double v; // step value; unused for the head
    };

    std::vector<Segment> segments() const {
        std::vector<Segment> out;
        if (head_.present()) out.push_back({0.0, head_.cut, true, 0.0});
        for (std::size_t j = 0; j < val_.size(); ++j)
            out.push_back({edge_[j], edge_[j + 1], false, val_[j]});
        return out;
    }

private:
    PowerLogHead head_;
    std::vector<double> edge_{0.0};
    std::vector<double> val_;
    std::vector<double> prefix_{0.0};
    double L_ = inf;
};

} // namespace ripot

#pragma once

// JSON experiment configs in, reports and plot curves out.  Descriptors for
// fields, profiles, Young functions and spaces are parsed here so the command
// line front end stays a thin dispatcher.

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grid.hpp"
#include "profile.hpp"
#include "spaces.hpp"
#include "verify.hpp"
#include "young.hpp"

namespace ripot {

using json = nlohmann::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

namespace detail {

/// Reads a number that may be the string "inf".
inline double finite_or_inf(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return inf;
        throw std::invalid_argument(std::string(key) + ": expected a number or \"inf\"");
    }
    return v.get<double>();
}

} // namespace ripot::detail

inline FieldSpec field_from_json(const json& j) {
    FieldSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero")
        spec.kind = FieldSpec::Kind::zero;
    else if (kind == "gaussian")
        spec.kind = FieldSpec::Kind::gaussian;
    else if (kind == "bump")
        spec.kind = FieldSpec::Kind::bump;
    else if (kind == "stream_curl")
        spec.kind = FieldSpec::Kind::stream_curl;
    else if (kind == "gradient")
        spec.kind = FieldSpec::Kind::gradient;
    else if (kind == "radial_power")
        spec.kind = FieldSpec::Kind::radial_power;
    else
        throw std::invalid_argument("unknown field kind: " + kind);
    spec.amplitude = j.value("amplitude", 1.0);
    spec.radius = j.value("radius", 0.125);
    spec.scale = j.value("scale", 1.0);
    spec.power = j.value("power", 0.0);
    spec.logpow = j.value("logpow", 0.0);
    if (j.contains("center")) {
        const auto c = j.at("center").get<std::vector<double>>();
        if (c.empty() || c.size() > 3)
            throw std::invalid_argument("field center: expected 1 to 3 coordinates");
        for (std::size_t a = 0; a < c.size(); ++a) spec.center[a] = c[a];
    }
    return spec;
}

inline Profile profile_from_json(const json& j) {
    auto edges = j.at("edges").get<std::vector<double>>();
    auto values = j.at("values").get<std::vector<double>>();
    PowerLogHead head;
    if (j.contains("head")) {
        const json& h = j.at("head");
        head.coef = h.at("coef").get<double>();
        head.pow = h.value("pow", 0.0);
        head.logpow = h.value("logpow", 0.0);
        head.cut = h.at("cut").get<double>();
    }
    const double fallback = edges.empty() ? (head.present() ? head.cut : 1.0) : edges.back();
    const double L = detail::finite_or_inf(j, "length", fallback);
    if (edges.empty() && head.present()) return Profile::pure_head(head, L);
    return Profile(std::move(edges), std::move(values), L, head);
}

inline YoungFunction young_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return young_power(j.at("p").get<double>());
    if (kind == "power_log_loglog")
        return young_power_log_loglog(j.at("p").get<double>(), j.value("r", 0.0),
                                      j.value("rho", 0.0), j.value("b", std::exp(1.0)));
    if (kind == "two_regime")
        return young_two_regime(j.at("p0").get<double>(), j.value("r0", 0.0),
                                j.at("p").get<double>(), j.value("r", 0.0));
    throw std::invalid_argument("unknown young kind: " + kind);
}

inline SpaceSpec space_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const double L = detail::finite_or_inf(j, "length", inf);
    auto p = [&] { return j.at("p").get<double>(); };
    auto q = [&] { return detail::finite_or_inf(j, "q", inf); };
    if (family == "lebesgue") return SpaceSpec::lebesgue_space(detail::finite_or_inf(j, "p", 1.0), L);
    if (family == "lorentz") return SpaceSpec::lorentz(p(), q(), L);
    if (family == "lorentz_maximal") return SpaceSpec::lorentz_maximal(p(), q(), L);
    if (family == "lorentz_zygmund")
        return SpaceSpec::lorentz_zygmund(p(), q(), j.at("r").get<double>(),
                                          j.value("maximal", false), L);
    if (family == "generalized_lorentz_zygmund")
        return SpaceSpec::generalized_lorentz_zygmund(p(), q(), j.at("r").get<double>(),
                                                      j.at("rho").get<double>(), L);
    if (family == "orlicz") return SpaceSpec::orlicz_space(young_from_json(j.at("young")), L);
    if (family == "orlicz_lorentz")
        return SpaceSpec::orlicz_lorentz(young_from_json(j.at("young")), q(), L);
    if (family == "sum_l1_linf") return SpaceSpec::sum_l1_linf_space(L);
    if (family == "intersection") {
        std::vector<SpaceSpec> members;
        for (const json& m : j.at("members")) members.push_back(space_from_json(m));
        return SpaceSpec::intersect(std::move(members));
    }
    throw std::invalid_argument("unknown space family: " + family);
}

inline InequalityReport::Trend trend_from_name(const std::string& name) {
    if (name == "bounded") return InequalityReport::Trend::bounded;
    if (name == "divergent") return InequalityReport::Trend::divergent;
    if (name == "inconclusive") return InequalityReport::Trend::inconclusive;
    throw std::invalid_argument("unknown trend: " + name);
}

inline json report_to_json(const InequalityReport& rep) {
    json rows = json::array();
    for (const auto& row : rep.rows)
        rows.push_back({{"label", row.label},
                        {"level", row.level},
                        {"norm_x", row.norm_x},
                        {"norm_y", row.norm_y},
                        {"ratio", row.ratio}});
    return {{"inequality", rep.inequality}, {"trend", trend_name(rep.trend)},
            {"slope", rep.slope},           {"constant", rep.constant},
            {"rows", rows}};
}

/// Two-column step curve of a profile, ready for gnuplot.  Symbolic heads are
/// sampled on a geometric grid.
inline std::string profile_curve_csv(const Profile& f) {
    std::ostringstream out;
    out.precision(15);
    out << "s (measure),value (dimensionless)\n";
    for (const auto& seg : f.segments()) {
        if (seg.is_head) {
            const double lo = std::max(seg.lo, seg.hi * 1e-9);
            const double step = std::pow(seg.hi / lo, 1.0 / 32);
            for (double s = lo; s < seg.hi * (1 - 1e-12); s *= step)
                out << s << ',' << f.value(s) << '\n';
            continue;
        }
        out << seg.lo << ',' << seg.v << '\n' << seg.hi << ',' << seg.v << '\n';
    }
    return out.str();
}

/// One (level, ratio) point per report row.
inline std::string report_plot_csv(const InequalityReport& rep) {
    std::ostringstream out;
    out.precision(15);
    out << "level,ratio (dimensionless)\n";
    for (const auto& row : rep.rows) out << row.level << ',' << row.ratio << '\n';
    return out.str();
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("short write to " + path);
}

/// Seeded step-profile family used by the 1-d inequality checks: random
/// widths and value drops, uniform in [0.1, 1), reproducible per seed.
inline std::vector<Profile> random_profile_family(int count, unsigned seed, int segments = 8,
                                                  double span = 4.0) {
    if (count <= 0 || segments <= 0)
        throw std::invalid_argument("random_profile_family: count and segments must be positive");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Profile> family;
    family.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::vector<double> widths(segments), drops(segments);
        double val = 0.0;
        for (int s = 0; s < segments; ++s) {
            widths[s] = u(rng) * span / segments;
            drops[s] = u(rng);
            val += drops[s];
        }
        std::vector<double> edges(segments), values(segments);
        double pos = 0.0;
        for (int s = 0; s < segments; ++s) {
            pos += widths[s];
            edges[s] = pos;
            values[s] = val;
            val -= drops[s];
        }
        family.emplace_back(std::move(edges), std::move(values), pos * 2.0);
    }
    return family;
}

/// Resolves the profile family of a 1-d check config: an explicit "profiles"
/// array wins, otherwise "family" {count, seed, segments, span} draws a
/// seeded random family.
inline std::vector<Profile> profile_family_from_json(const json& cfg) {
    if (cfg.contains("profiles")) {
        std::vector<Profile> family;
        for (const json& p : cfg.at("profiles")) family.push_back(profile_from_json(p));
        if (family.empty()) throw std::invalid_argument("profiles: empty list");
        return family;
    }
    if (!cfg.contains("family"))
        throw std::invalid_argument("expected \"profiles\" or \"family\" in config");
    const json& fam = cfg.at("family");
    return random_profile_family(fam.at("count").get<int>(),
                                 fam.value("seed", cfg.value("seed", 0u)),
                                 fam.value("segments", 8), fam.value("span", 4.0));
}

} // namespace ripot

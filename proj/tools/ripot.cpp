// Command line front end: loads a JSON experiment config, runs the requested
// computation, writes CSV/JSON reports plus gnuplot-ready curves.  Exit codes:
// 0 success, 1 input or runtime error, 2 measured trend contradicts the
// config's expected_trend.  RIPOT_THREADS caps worker threads.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ripot/interpolation.hpp>
#include <ripot/io.hpp>
#include <ripot/operators.hpp>
#include <ripot/rearrange.hpp>

namespace fs = std::filesystem;
using namespace ripot;

namespace {

struct Ctx {
    std::string config_path;
    std::string out_dir;
};

fs::path resolve_out(const Ctx& ctx, const json& cfg) {
    fs::path out = !ctx.out_dir.empty() ? fs::path(ctx.out_dir)
                                        : fs::path(cfg.value("out", std::string(".")));
    fs::create_directories(out);
    return out;
}

GriddedField field_from_config(const json& cfg) {
    return make_field(field_from_json(cfg.at("field")), cfg.at("n").get<int>(),
                      cfg.at("M").get<int>(), cfg.value("box", 1.0));
}

/// Writes the three report artifacts and applies the expected-trend gate.
int emit_report(const InequalityReport& rep, const json& cfg, const fs::path& out) {
    write_text((out / "report.csv").string(), to_csv(rep));
    write_text((out / "report.json").string(), report_to_json(rep).dump(2) + "\n");
    write_text((out / "plot.csv").string(), report_plot_csv(rep));
    std::printf("%s: trend %s, constant %.6g, slope %.3f\n", rep.inequality.c_str(),
                trend_name(rep.trend), rep.constant, rep.slope);
    if (cfg.contains("expected_trend") &&
        trend_from_name(cfg.at("expected_trend").get<std::string>()) != rep.trend) {
        std::fprintf(stderr, "expected trend %s but measured %s\n",
                     cfg.at("expected_trend").get<std::string>().c_str(), trend_name(rep.trend));
        return 2;
    }
    return 0;
}

int run_rearrange(const Ctx& ctx) {
    const json cfg = load_json(ctx.config_path);
    const fs::path out = resolve_out(ctx, cfg);
    const GriddedField F = field_from_config(cfg);
    const Profile f = decreasing_rearrangement(F);
    write_text((out / "rearrange.csv").string(), profile_curve_csv(f));
    const json meta = {{"sup", f.sup()},
                       {"mass", f.integral_to(f.domain_length())},
                       {"domain_length", f.domain_length()}};
    write_text((out / "rearrange.json").string(), meta.dump(2) + "\n");
    return 0;
}

int run_norm(const Ctx& ctx) {
    const json cfg = load_json(ctx.config_path);
    const fs::path out = resolve_out(ctx, cfg);
    const Profile f = cfg.contains("profile") ? profile_from_json(cfg.at("profile"))
                                              : decreasing_rearrangement(field_from_config(cfg));
    std::ostringstream csv;
    csv.precision(15);
    csv << "space,norm (dimensionless)\n";
    json values = json::object();
    for (const json& sj : cfg.at("spaces")) {
        const SpaceSpec X = space_from_json(sj);
        const double v = norm(X, f);
        csv << '"' << X.label << "\"," << v << '\n';
        values[X.label] = v;
    }
    write_text((out / "norms.csv").string(), csv.str());
    write_text((out / "norms.json").string(), values.dump(2) + "\n");
    return 0;
}

/// Samples log A on a geometric grid; columns stay finite by clamping to the
/// tabulated range of the constructed function.
std::string young_curve_csv(const YoungFunction& A, const YoungFunction& B) {
    std::ostringstream out;
    out.precision(15);
    out << "t (dimensionless),log source (dimensionless),log target (dimensionless)\n";
    for (double t = 1e-6; t <= 1e6 * (1 + 1e-9); t *= std::pow(10.0, 0.25))
        out << t << ',' << A.log_value(t) << ',' << B.log_value(t) << '\n';
    return out.str();
}

int run_young(const Ctx& ctx, const std::string& mode) {
    const json cfg = load_json(ctx.config_path);
    const fs::path out = resolve_out(ctx, cfg);
    const YoungFunction A = young_from_json(cfg.at("young"));
    if (mode == "equiv") {
        const YoungFunction B = young_from_json(cfg.at("young_b"));
        const std::string rg = cfg.value("regime", std::string("global"));
        Regime regime = Regime::global;
        if (rg == "zero")
            regime = Regime::near_zero;
        else if (rg == "infinity")
            regime = Regime::near_infinity;
        else if (rg != "global")
            throw std::invalid_argument("unknown regime: " + rg);
        const EquivalenceResult res = equivalent(A, B, regime);
        const json meta = {{"equivalent", res.equivalent}, {"dilation", res.c}, {"regime", rg}};
        write_text((out / "equiv.json").string(), meta.dump(2) + "\n");
        write_text((out / "equiv.csv").string(), young_curve_csv(A, B));
        std::printf("equivalent: %s\n", res.equivalent ? "yes" : "no");
        return 0;
    }
    const int n = cfg.at("n").get<int>();
    const double alpha = cfg.at("alpha").get<double>();
    const YoungFunction T =
        mode == "conj" ? sobolev_conjugate(A, n, alpha) : hat_construction(A, n, alpha);
    write_text((out / "young.csv").string(), young_curve_csv(A, T));
    const json meta = {{"source", A.label()}, {"target", T.label()}};
    write_text((out / "young.json").string(), meta.dump(2) + "\n");
    return 0;
}

int run_riesz(const Ctx& ctx) {
    const json cfg = load_json(ctx.config_path);
    const fs::path out = resolve_out(ctx, cfg);
    const GriddedField F = field_from_config(cfg);
    RieszSpec spec;
    spec.alpha = cfg.at("alpha").get<double>();
    spec.enforce_support = cfg.value("enforce_support", true);
    const std::string mode = cfg.value("mode", std::string("spectral"));
    if (mode == "direct")
        spec.mode = RieszSpec::Mode::direct;
    else if (mode != "spectral")
        throw std::invalid_argument("unknown riesz mode: " + mode);
    const GriddedField G = riesz(F, spec);
    const Profile g = decreasing_rearrangement(G);
    write_text((out / "riesz.csv").string(), profile_curve_csv(g));
    const json meta = {{"sup", G.sup_norm()}, {"l1", G.l1_norm()}, {"alpha", spec.alpha}};
    write_text((out / "riesz.json").string(), meta.dump(2) + "\n");
    return 0;
}

int run_kfunc(const Ctx& ctx) {
    const json cfg = load_json(ctx.config_path);
    const fs::path out = resolve_out(ctx, cfg);
    const Profile f = profile_from_json(cfg.at("profile"));
    KQuery query;
    const std::string couple = cfg.value("couple", std::string("l1_linf"));
    if (couple == "l1_linf")
        query.couple = KQuery::Couple::l1_linf;
    else if (couple == "l1_lorentz")
        query.couple = KQuery::Couple::l1_lorentz;
    else if (couple == "lorentz1_linf")
        query.couple = KQuery::Couple::lorentz1_linf;
    else
        throw std::invalid_argument("unknown couple: " + couple);
    query.p = cfg.value("p", 2.0);
    query.q = cfg.value("q", 1.0);
    const auto ts = cfg.at("t_values").get<std::vector<double>>();
    const bool with_upper = query.couple == KQuery::Couple::l1_lorentz;
    std::ostringstream csv;
    csv.precision(15);
    csv << "t (dimensionless),K (dimensionless)";
    if (with_upper) csv << ",holmstedt bound (dimensionless)";
    csv << '\n';
    for (double t : ts) {
        query.t = t;
        csv << t << ',' << k_functional_bruteforce(f, query);
        if (with_upper) csv << ',' << holmstedt(f, query.p, query.q, t);
        csv << '\n';
    }
    write_text((out / "kfunc.csv").string(), csv.str());
    return 0;
}

int run_verify(const Ctx& ctx, const std::string& what) {
    const json cfg = load_json(ctx.config_path);
    const fs::path out = resolve_out(ctx, cfg);
    InequalityReport rep;
    if (what == "hardy") {
        rep = check_hardy_pair(space_from_json(cfg.at("space_x")),
                               space_from_json(cfg.at("space_y")), profile_family_from_json(cfg),
                               cfg.at("n").get<int>(), cfg.at("alpha").get<double>(),
                               cfg.value("dual", false));
    } else if (what == "riesz") {
        rep = check_constrained_riesz(
            space_from_json(cfg.at("space_x")), space_from_json(cfg.at("space_y")),
            cfg.at("constrained").get<bool>(), cfg.at("n").get<int>(),
            cfg.at("alpha").get<double>(),
            cfg.value("levels", std::vector<double>{1.0, 2.0, 4.0, 8.0}), cfg.value("M", 256),
            cfg.value("box", 1.0));
    } else if (what == "rearr-est") {
        rep = check_rearrangement_estimate(field_from_config(cfg), cfg.at("n").get<int>(),
                                           cfg.at("alpha").get<double>(),
                                           cfg.at("t_values").get<std::vector<double>>());
    } else if (what == "counterexample") {
        rep = run_counterexample_LZ(cfg.at("n").get<int>(), cfg.at("alpha").get<double>(),
                                    cfg.at("q").get<double>(), cfg.at("r").get<double>(),
                                    cfg.at("gamma").get<double>(),
                                    cfg.value("eps", std::vector<double>{1e-2, 1e-4, 1e-8}),
                                    cfg.value("steps", 4096));
    } else if (what == "orlicz") {
        const std::string variant = cfg.value("variant", std::string("conjugate"));
        OrliczVariant v = OrliczVariant::conjugate_target;
        if (variant == "hat_lorentz")
            v = OrliczVariant::hat_lorentz_target;
        else if (variant == "sup")
            v = OrliczVariant::sup_target;
        else if (variant != "conjugate")
            throw std::invalid_argument("unknown orlicz variant: " + variant);
        rep = check_orlicz_theorem(young_from_json(cfg.at("young")), cfg.at("n").get<int>(),
                                   cfg.at("alpha").get<double>(),
                                   cfg.value("finite_measure", false), v,
                                   cfg.value("levels", std::vector<double>{1.0, 2.0, 4.0, 8.0}),
                                   cfg.value("M", 256));
    }
    return emit_report(rep, cfg, out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rearrangement-invariant function space toolkit"};
    app.require_subcommand(1);
    app.footer("Set RIPOT_THREADS to cap worker threads.");

    Ctx ctx;
    std::function<int()> job;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                    std::function<int()> runner) {
        CLI::App* cmd = parent->add_subcommand(name, desc);
        cmd->add_option("--config", ctx.config_path, "JSON experiment config")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", ctx.out_dir, "output directory (default: config \"out\" or .)");
        cmd->callback([&job, runner] { job = runner; });
        return cmd;
    };

    leaf(&app, "rearrange", "decreasing rearrangement of a field",
         [&] { return run_rearrange(ctx); });
    leaf(&app, "norm", "space norms of a profile or field", [&] { return run_norm(ctx); });

    CLI::App* young = app.add_subcommand("young", "Young function constructions");
    young->require_subcommand(1);
    leaf(young, "conj", "target Young function of the conjugate construction",
         [&] { return run_young(ctx, "conj"); });
    leaf(young, "hat", "target Young function of the hat construction",
         [&] { return run_young(ctx, "hat"); });
    leaf(young, "equiv", "dilation equivalence of two Young functions",
         [&] { return run_young(ctx, "equiv"); });

    leaf(&app, "riesz", "fractional integral of a field", [&] { return run_riesz(ctx); });
    leaf(&app, "kfunc", "K-functional of a profile over a couple",
         [&] { return run_kfunc(ctx); });

    CLI::App* verify = app.add_subcommand("verify", "inequality reports with trend verdicts");
    verify->require_subcommand(1);
    leaf(verify, "hardy", "1-d weighted tail/head average inequality",
         [&] { return run_verify(ctx, "hardy"); });
    leaf(verify, "riesz", "potential inequality over a concentrating family",
         [&] { return run_verify(ctx, "riesz"); });
    leaf(verify, "rearr-est", "pointwise rearrangement estimate for one field",
         [&] { return run_verify(ctx, "rearr-est"); });
    leaf(verify, "counterexample", "truncated blow-up family for the log-refined target",
         [&] { return run_verify(ctx, "counterexample"); });
    leaf(verify, "orlicz", "potential inequality into Orlicz-derived targets",
         [&] { return run_verify(ctx, "orlicz"); });

    CLI11_PARSE(app, argc, argv);
    if (!job) {
        std::fprintf(stderr, "ripot: no subcommand selected\n");
        return 1;
    }
    try {
        return job();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ripot: %s\n", e.what());
        return 1;
    }
}

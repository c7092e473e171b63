// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"
#include "worm/constants.hpp"
#include "worm/dangelo.hpp"
#include "worm/levi.hpp"
#include "worm/spec_io.hpp"

using namespace worm;
using namespace worm::testing;

namespace {

namespace tol {
constexpr double period_expected = 1e-5;
constexpr double period_oracle = 1e-8;
constexpr double period_seconds = 5.0;
constexpr double linearity = 1e-7;
constexpr double trivial_period = 1e-7;
constexpr std::size_t min_samples = 10000;
constexpr double psc = 1e-9;
constexpr double strong_margin = 1e-6;
constexpr double certify_seconds = 120.0;
constexpr int lemma1_grid = 64;
constexpr std::size_t lemma1_samples = 10000;
constexpr double w_min = 1e-3;
constexpr double w_max = 10.0;
constexpr double lemma2_floor = -1e-10;
constexpr int lemma2_grid = 256;
constexpr int jet_expressions = 50;
constexpr double jet_rel = 1e-6;
constexpr std::size_t invariance_samples = 1000;
constexpr double invariance_rel = 1e-9;
constexpr int max_attempts = 20;
constexpr double critical_k = 143.89753410257674;
} // namespace tol

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

LoopSpec unit_circle(int segments)
{
    LoopSpec l;
    l.name = "unit_circle";
    l.z = {"exp(i*s)"};
    l.segments = segments;
    return l;
}

Outcome df_period()
{
    const auto t0 = Clock::now();
    const WormDomain df = build_df_worm(load_spec(spec_path("df_worm.json")));
    const PeriodReport p = period(df, unit_circle(512));
    const double secs = seconds_since(t0);
    const double err = std::abs(p.integrated + 8.0 * kPi);
    const bool ok = err <= tol::period_expected && p.oracle_discrepancy <= tol::period_oracle &&
                    secs < tol::period_seconds;
    return {ok, fmt("period %.12f, |+8pi| %.2e, oracle %.2e, %.2fs", p.integrated, err, p.oracle_discrepancy,
                    secs)};
}

Outcome linearity()
{
    const WormSpec spec = load_spec(spec_path("df_worm.json"));
    double p1 = 0.0;
    double worst = 0.0;
    std::string vals;
    for (double t : {1.0, 0.5, 2.0}) {
        WormSpec s = spec;
        s.t = t;
        const double p = period(build_df_worm(s), unit_circle(512)).integrated;
        if (t == 1.0)
            p1 = p;
        worst = std::max(worst, std::abs(p - t * p1) / std::abs(t * p1));
        vals += fmt(" t=%g:%.9f", t, p);
    }
    return {worst <= tol::linearity, fmt("max rel deviation %.2e;", worst) + vals};
}

Outcome trivial_class()
{
    const WormSpec spec = load_spec(spec_path("ball_trivial.json"));
    const ResolvedWorm rw = build_worm(spec);
    double worst = 0.0;
    for (const LoopSpec& l : spec.loops)
        worst = std::max(worst, std::abs(period(rw.domain, l).integrated));
    return {worst < tol::trivial_period && !spec.loops.empty(),
            fmt("%zu loops, max |period| %.2e", spec.loops.size(), worst)};
}

Outcome certification()
{
    const auto t0 = Clock::now();
    const WormSpec spec = load_spec(spec_path("worm_annulus_codim2.json"));
    const ResolvedWorm rw = build_worm(spec);
    const auto grid = spec.base_domain.grid(spec.n);
    const SampleSet set = sample_boundary(rw.domain, grid, spec.sampling.sphere);
    Tolerances t = spec.tolerances;
    t.tol_psc = tol::psc;
    t.strong_margin = tol::strong_margin;
    const LeviReport rep = certify(rw.domain, set.samples, t);
    const double secs = seconds_since(t0);
    bool zero_pattern = rep.on_core > 0;
    for (const auto& v : rep.samples)
        if (v.cls == SampleClass::OnCore)
            zero_pattern = zero_pattern && v.zero_count == 1 && v.eigenvalues.size() == 2 &&
                           v.eigenvalues[1] > t.zero_tol;
    const bool ok = rep.analysed >= tol::min_samples && rep.near_cap == 0 && rep.min_eigenvalue >= -tol::psc &&
                    rep.min_off_core >= tol::strong_margin && zero_pattern && rep.pass &&
                    secs < tol::certify_seconds;
    return {ok, fmt("K %.6g, %zu samples (%zu on core), min %.3e, off-core min %.3e, on-core positive min %.3e, "
                    "%.1fs",
                    rw.domain.K, rep.analysed, rep.on_core, rep.min_eigenvalue, rep.min_off_core,
                    rep.min_on_core_positive, secs)};
}

Outcome lemma1()
{
    const Variables v{1, 0, false};
    const FieldExpr sigma = parse("10*re(z1) + 0.1*abs2(z1) + 30", v);
    const FieldExpr G = parse("exp(-1.5*i*z1)", v);
    BaseDomain box;
    box.lo = {-1.0, -1.0};
    box.hi = {1.0, 1.0};
    box.points = tol::lemma1_grid;
    const Lemma1Constants k = lemma1_constants(sigma, box.grid(1));
    const double KL = k_threshold(k.c, k.C);

    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> lw(std::log(tol::w_min), std::log(tol::w_max));
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::vector<CVec> pts;
    for (std::size_t j = 0; j < tol::lemma1_samples; ++j) {
        CVec p(2);
        p << cplx(coord(rng), coord(rng)), std::polar(std::exp(lw(rng)), ang(rng));
        pts.push_back(p);
    }
    const OracleResult above = lemma1_oracle(sigma, G, KL, 1, pts);
    const OracleResult below = lemma1_oracle(sigma, G, k.C, 1, pts);
    return {above.min_eigenvalue > 0.0 && below.min_eigenvalue < 0.0,
            fmt("c %.4g, C %.4g, K_L %.6g: min %.3e; K = C: min %.3e", k.c, k.C, KL, above.min_eigenvalue,
                below.min_eigenvalue)};
}

Outcome lemma2()
{
    const WormSpec spec = load_spec(spec_path("worm_annulus_codim2.json"));
    const GeneralFields f = parse_general_fields(spec);
    const Bindings b = spec.bindings();
    const auto coarse = spec.base_domain.with_resolution(spec.constants.grid_points).grid(spec.n);
    const Lemma2Constants k = lemma2_constant(f.d_def, f.u, coarse, b);
    const auto fine = spec.base_domain.with_resolution(tol::lemma2_grid).grid(spec.n);
    const Lemma2OracleResult r = lemma2_oracle(f.u, f.d_def, fine, k.eps0, b);

    const Variables v{1, 0, false};
    BaseDomain box;
    box.lo = {-1.2, -1.2};
    box.hi = {1.2, 1.2};
    box.points = 41;
    const Lemma2Constants unit = lemma2_constant(parse("abs2(z1) - 1", v), parse("0", v), box.grid(1));
    const bool ok = r.points > 0 && r.min_eigenvalue >= tol::lemma2_floor && r.min_normalized >= tol::lemma2_floor &&
                    k.eps0 == std::min(0.25, std::sqrt(k.c)) && unit.eps0 == 0.25;
    return {ok, fmt("c %.4g, eps0 %.4g, %zu points, min %.3e (normalized %.3e); c=1 case eps0 %.17g", k.c, k.eps0,
                    r.points, r.min_eigenvalue, r.min_normalized, unit.eps0)};
}

Outcome jets()
{
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int k = 0; k < tol::jet_expressions; ++k) {
        const std::string src = random_expression(rng, 2, 1, 4);
        const FieldExpr e = parse(src, Variables{2, 1, false});
        const CVec p = random_point(rng, 3);
        const Jet2 j = eval_jet(e, p);
        const FiniteDifferenceJet fd = finite_difference(e, p);
        worst = std::max({worst, relative_error(j.del, fd.del), relative_error(j.delbar, fd.delbar),
                          relative_error(j.mixed, fd.mixed)});
    }
    return {worst < tol::jet_rel, fmt("%d expressions, max relative error %.2e", tol::jet_expressions, worst)};
}

Outcome invariance()
{
    const WormSpec spec = load_spec(spec_path("worm_annulus_codim2.json"));
    const WormDomain dom = build_general_worm(spec, 60.0);
    const auto grid = spec.base_domain.with_resolution(16).grid(spec.n);
    SampleSet set = sample_boundary(dom, grid, 8);
    set.samples.resize(std::min(set.samples.size(), tol::invariance_samples));
    const FieldExpr h = parse("0.4*z1 - 0.3*i*w1 + 0.2*w1*w2", dom.r.vars());
    const InvarianceResult r = defining_function_invariance_check(dom, h, set.samples, spec.tolerances.zero_tol);
    const bool ok = r.checked >= tol::invariance_samples && r.max_matrix_discrepancy <= tol::invariance_rel &&
                    r.max_spectrum_discrepancy <= tol::invariance_rel && r.sign_mismatches == 0;
    return {ok, fmt("%zu samples, matrix %.2e, spectrum %.2e, sign mismatches %zu", r.checked,
                    r.max_matrix_discrepancy, r.max_spectrum_discrepancy, r.sign_mismatches)};
}

Outcome regular_value()
{
    WormSpec spec = load_spec(data_path("critical_k.json"));
    spec.constants.max_attempts = tol::max_attempts;
    const ConstantBudget b = select_K(spec);
    const bool first_fails = !b.attempts.empty() && std::abs(b.attempts[0].K - tol::critical_k) < 1e-9 &&
                             !b.attempts[0].pass;
    const bool ok = first_fails && b.found && static_cast<int>(b.attempts.size()) <= tol::max_attempts;
    return {ok, fmt("K_c %.10g margin %.2e; selected K %.6g after %zu attempts, margin %.2e", b.attempts[0].K,
                    b.attempts[0].margin, b.K_selected, b.attempts.size(), b.regular_value_margin)};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism()
{
    const auto root = std::filesystem::temp_directory_path() / "worm_acceptance";
    std::filesystem::remove_all(root);
    int codes[2];
    for (int k = 0; k < 2; ++k) {
        const std::string cmd = std::string("\"") + WORM_CLI + "\" all --dump-csv --spec \"" +
                                spec_path("worm_annulus_codim2.json") + "\" --out \"" +
                                (root / std::to_string(k)).string() + "\" > /dev/null 2>&1";
        codes[k] = std::system(cmd.c_str());
    }
    bool same = codes[0] == 0 && codes[1] == 0;
    std::size_t bytes = 0;
    for (const char* f : {"report.json", "periods.json", "samples.csv"}) {
        const std::string a = slurp(root / "0" / f);
        const std::string b = slurp(root / "1" / f);
        same = same && !a.empty() && a == b;
        bytes += a.size();
    }
    return {same, fmt("exit codes %d/%d, %zu bytes compared", codes[0], codes[1], bytes)};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"DF worm period recovery", df_period},
        {"class linearity in t", linearity},
        {"trivial class for pluriharmonic u = Re z1", trivial_class},
        {"codim-2 worm certification", certification},
        {"lemma 1 oracle", lemma1},
        {"lemma 2 oracle", lemma2},
        {"jet correctness", jets},
        {"defining-function invariance", invariance},
        {"regular-value K search", regular_value},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index++ << "] " << name << ": " << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}

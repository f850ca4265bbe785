// Acceptance checks, one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "quadlin/colehopf.hpp"
#include "quadlin/entropy.hpp"
#include "quadlin/linearize.hpp"
#include "quadlin/report.hpp"
#include "quadlin/transform.hpp"

using namespace quadlin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

Verdict exp_family() {
    Verdict v;
    const std::array<std::array<double, 3>, 2> weights{{{1, 1, 1}, {2, 1, 3}}};
    for (const auto& w : weights) {
        const auto t0 = Clock::now();
        const QuadEquation eq = QuadEquation::parse("log(alpha*exp(u00)+beta*exp(u10)+gamma*exp(u01)+k)",
                                                    {{"alpha", w[0]}, {"beta", w[1]}, {"gamma", w[2]}, {"k", 0}});
        const auto report = check_conditions(eq);
        double worst = 0.0;
        for (double r : report.residuals) worst = std::max(worst, r);
        const PointTransform psi = build_psi(recover_alpha(eq, report));
        const LinearModel model = fit_linear_model(eq, psi);
        const Roundtrip rt = roundtrip_verify(eq, psi, model, 30, 30, 7);
        const double elapsed = seconds_since(t0);
        const double dq = rel(model.q / model.p, w[1] / w[0]);
        const double dr = rel(model.r / model.p, w[2] / w[0]);
        v.detail << " (" << w[0] << "," << w[1] << "," << w[2] << "): residual " << worst << ", ratio err "
                 << std::max(dq, dr) << ", roundtrip " << rt.discrepancy << ", " << elapsed << " s;";
        v.require(report.passed && worst <= 1e-8, "conditions");
        v.require(dq <= 1e-6 && dr <= 1e-6, "proportional coefficients");
        v.require(model.certified, "certified");
        v.require(rt.discrepancy <= 1e-6, "roundtrip");
        v.require(elapsed < 2.0, "runtime");
    }
    return v;
}

Verdict harmonic() {
    Verdict v;
    const QuadEquation eq = QuadEquation::parse("1/(1/u00+1/u10+1/u01)");
    const auto report = check_conditions(eq);
    const PointTransform psi = build_psi(recover_alpha(eq, report));
    const LinearModel model = fit_linear_model(eq, psi);
    const Roundtrip rt = roundtrip_verify(eq, psi, model, 20, 20, 7);

    // Least squares of the knot values against [1/x, 1].
    const auto& xs = psi.table().x;
    const auto ys = psi.knot_values();
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double t = 1.0 / xs[i];
        st += t, sy += ys[i], stt += t * t, sty += t * ys[i];
    }
    const double c1 = (n * sty - st * sy) / (n * stt - st * st);
    const double c0 = (sy - c1 * st) / n;
    double dev = 0, scale = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        dev = std::max(dev, std::abs(ys[i] - (c1 / xs[i] + c0)));
        scale = std::max(scale, std::abs(ys[i]));
    }
    v.detail << " certified " << model.certified << ", roundtrip 20x20 " << rt.discrepancy
             << ", deviation from affine 1/x " << dev / scale;
    v.require(model.certified, "certified");
    v.require(rt.discrepancy <= 1e-6, "roundtrip");
    v.require(dev / scale <= 1e-6, "affine image of 1/x");
    return v;
}

Verdict negative_control() {
    Verdict v;
    const QuadEquation eq = QuadEquation::parse("u00*u10 + u01");
    std::optional<int> first;
    double min_fit = 1e300;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto report = check_conditions(eq, {200, seed, 1e-7});
        v.require(!report.passed && report.failing_condition, "fails conditions");
        if (!report.failing_condition) continue;
        const int fc = *report.failing_condition;
        if (!first) first = fc;
        v.require(fc == 2 || fc == 5, "failing condition in {2,5}");
        v.require(fc == *first, "stable failing condition");
        AlphaOptions forced;
        forced.force = true;
        const PointTransform psi = build_psi(recover_alpha(eq, report, forced));
        min_fit = std::min(min_fit, fit_linear_model(eq, psi, {400, seed, 1e-6}).fit_residual);
    }
    v.detail << " failing condition " << (first ? *first : 0) << " for seeds 1..10, smallest forced fit residual "
             << min_fit;
    v.require(min_fit > 1e-2, "forced fit residual");
    return v;
}

Verdict affine() {
    Verdict v;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    double worst_coef = 0, worst_ratio = 0;
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        double a, b, c;
        do {
            a = coef(rng), b = coef(rng), c = coef(rng);
        } while (std::abs(a) < 0.1 || std::abs(b) < 0.1 || std::abs(c) < 0.1);
        const double d = coef(rng);
        const QuadEquation eq = QuadEquation::parse(format_number(a) + "*u00 + " + format_number(b) + "*u10 + " +
                                                    format_number(c) + "*u01 + " + format_number(d));
        const auto found = detect_affine_linear(eq);
        const auto report = check_conditions(eq);
        if (!found || !report.passed) {
            ++failures;
            continue;
        }
        for (auto [x, y] : {std::pair{found->a, a}, {found->b, b}, {found->c, c}, {found->d, d}})
            worst_coef = std::max(worst_coef, std::abs(x - y));
        worst_ratio = std::max({worst_ratio, rel(report.A, a / b), rel(report.B, a / c), rel(report.C, c / b)});
    }
    v.detail << " 50 equations, " << failures << " missed, coefficient err " << worst_coef << ", ratio err "
             << worst_ratio;
    v.require(failures == 0, "all detected and passing");
    v.require(worst_coef <= 1e-8, "coefficients");
    v.require(worst_ratio <= 1e-8, "ratios");
    return v;
}

Verdict cole_hopf() {
    Verdict v;
    const auto t0 = Clock::now();
    double worst = 0;
    for (double p : {1.0, 0.5, -2.0})
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const Grid u = cole_hopf_map(evolve_linear_burgers(p, log_uniform_staircase(20, 21, seed)));
            worst = std::max(worst, verify_burgers(u, BurgersFamily::classical(p)));
        }
    double least_random = 1e300;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        Grid g(20, 20);
        for (std::size_t m = 0; m <= 20; ++m)
            for (std::size_t n = 0; n <= 20; ++n) g.set(n, m, d(rng), CellKind::initial);
        least_random = std::min(least_random, verify_burgers(g, BurgersFamily::classical(1.0)));
    }
    const double elapsed = seconds_since(t0);
    v.detail << " 300 runs, max residual " << worst << ", smallest random residual " << least_random << ", "
             << elapsed << " s";
    v.require(worst <= 1e-10, "soundness");
    v.require(least_random > 1e-2, "negative controls");
    v.require(elapsed < 1.0, "runtime");
    return v;
}

const HietarintaParams kRosa{2, 0, 3, 1};

Grid rosa_grid(std::uint64_t seed) {
    return oracle::fill(make_staircase(10, 10, SeededStaircase{seed, 0.5, 2.0}),
                        [](double a, double b, double c) { return oracle::rosa_u11(a, b, c, 2, 0, 3, 1); });
}

Verdict hietarinta() {
    Verdict v;
    const HietarintaResult probe = hietarinta_transform(kRosa, 1, rosa_grid(1));
    const mpq_class product = probe.kappa2 * probe.kappa0;
    v.detail << " cross ratio " << cross_ratio(kRosa).get_str() << ", kappa2*kappa0 " << product.get_str();
    v.require(product == mpq_class(-3, 4), "exact constraint");

    double forward = 0, backward = 0;
    const double k0 = probe.family.kappa0, k1 = probe.family.kappa1, k2 = probe.family.kappa2;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Grid ut = rosa_grid(seed);
        const HietarintaResult r = hietarinta_transform(kRosa, 1, ut);
        forward = std::max(forward, verify_burgers(r.u, r.family));
        const Grid u = oracle::fill(make_staircase(10, 10, SeededStaircase{seed, 1.5, 3.0}),
                                    [&](double a, double b, double c) { return oracle::burgers_u11(a, b, c, k0, k1, k2); });
        backward = std::max(backward, rosa_residual(inverse_hietarinta(kRosa, 1, u), kRosa));
    }
    v.detail << ", Rosa -> g23 residual " << forward << ", g23 -> Rosa residual " << backward;
    v.require(forward <= 1e-8, "forward map");
    v.require(backward <= 1e-8, "inverse map");
    return v;
}

Verdict potential() {
    Verdict v;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> d(0.5, 2.0);
    int agree = 0, solutions = 0, randoms = 0, random_ok = 0, exceptions = 0;
    double worst_solution = 0;
    const HietarintaResult fam = hietarinta_transform(kRosa, 1, rosa_grid(1));
    for (int trial = 0; trial < 50; ++trial) {
        try {
            Grid u;
            BurgersFamily family;
            const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(trial);
            const bool random = trial % 5 >= 3;
            switch (trial % 5) {
                case 0:
                    family = BurgersFamily::classical(1.0);
                    u = cole_hopf_map(evolve_linear_burgers(1.0, log_uniform_staircase(20, 21, seed)));
                    break;
                case 1:
                    family = BurgersFamily::classical(0.5);
                    u = cole_hopf_map(evolve_linear_burgers(0.5, log_uniform_staircase(20, 21, seed)));
                    break;
                case 2: {
                    const HietarintaResult r = hietarinta_transform(kRosa, 1, rosa_grid(seed));
                    family = r.family;
                    u = r.u;
                    break;
                }
                default:
                    family = trial % 5 == 3 ? BurgersFamily::classical(1.0) : fam.family;
                    u = Grid(20, 20);
                    for (std::size_t m = 0; m <= 20; ++m)
                        for (std::size_t n = 0; n <= 20; ++n) u.set(n, m, d(rng), CellKind::initial);
            }
            const double g = verify_burgers(u, family);
            const double pot = verify_potential_compatibility(u, family);
            if ((g <= 1e-10) == (pot <= 1e-10)) ++agree;
            if (random) {
                ++randoms;
                if (pot > 1e-2) ++random_ok;
            } else {
                ++solutions;
                worst_solution = std::max(worst_solution, pot);
            }
        } catch (const std::exception& e) {
            ++exceptions;
            v.detail << " exception: " << e.what() << ";";
        }
    }
    v.detail << " 50 trials, " << agree << " co-occurrences, " << exceptions << " exceptions, worst solution mismatch "
             << worst_solution << ", " << random_ok << "/" << randoms << " random grids above 1e-2";
    v.require(agree == 50, "co-occurrence");
    v.require(exceptions == 0, "no exceptions");
    v.require(random_ok == randoms, "random grids");
    return v;
}

Verdict entropy() {
    Verdict v;
    struct Case {
        const char* rhs;
        Growth expected;
    };
    const Case cases[] = {{"u00+u10+u01", Growth::constant},
                          {"1/(1/u00+1/u10+1/u01)", Growth::linear},
                          {"u00+u10*u01", Growth::exponential}};
    for (const Case& c : cases) {
        const Expression e = parse(c.rhs);
        std::vector<DegreeSequence> runs;
        double slowest = 0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto t0 = Clock::now();
            runs.push_back(degree_sequence(e, 8, seed));
            slowest = std::max(slowest, seconds_since(t0));
        }
        v.detail << " " << c.rhs << ": " << growth_name(runs[0].growth) << " [";
        for (long dk : runs[0].degrees) v.detail << " " << dk;
        v.detail << " ] " << slowest << " s;";
        v.require(runs[0].degrees == runs[1].degrees && runs[0].degrees == runs[2].degrees, "seed stability");
        v.require(runs[0].growth == c.expected, "classification");
        v.require(slowest < 10.0, "runtime");

        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const DegreeSequence s = degree_sequence(e, 4, seed);
            std::vector<LinearSeed> row, col;
            draw_linear_seeds(s.seed, 4, row, col);
            std::vector<std::array<long, 2>> r, cl;
            for (const auto& x : row) r.push_back({x.a, x.b});
            for (const auto& x : col) cl.push_back({x.a, x.b});
            v.require(oracle::brute_force_degrees(e, r, cl) == s.degrees, "K<=4 oracle");
        }
    }
    return v;
}

Verdict derivatives() {
    Verdict v;
    const auto sweep = oracle::derivative_sweep(9, 1000);
    int typed = 0;
    const char* bad[] = {"log(u00-u00)", "(u00-2)^(1/2)", "(u00-u00)/(u10-u10)", "exp(1000*u00)", "u00/(u10-u10)",
                         "(u00-u00)^(-1)", "log(-u00)"};
    for (const char* text : bad) {
        try {
            eval_with_partials(parse(text), {1.0, 1.0, 1.0});
        } catch (const DomainError&) {
            ++typed;
        }
    }
    v.detail << " " << sweep.accepted << " pairs, worst relative error " << sweep.worst << ", " << sweep.mismatches
             << " mismatches, " << sweep.nan_escapes << " NaN escapes, " << sweep.domain_errors
             << " domain errors raised, " << typed << "/7 probes typed";
    v.require(sweep.accepted == 1000 && sweep.mismatches == 0, "partials");
    v.require(sweep.nan_escapes == 0 && typed == 7, "no NaN escapes");
    return v;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"exp family certification", exp_family},
        {"harmonic equation certification", harmonic},
        {"non-linearizable control", negative_control},
        {"affine detection", affine},
        {"Cole-Hopf soundness", cole_hopf},
        {"Moebius equivalence", hietarinta},
        {"potential compatibility", potential},
        {"degree growth screen", entropy},
        {"derivative engine", derivatives},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " exception: " << e.what();
        }
        if (!v.pass) ++failed;
        std::printf("criterion %d (%s): %s -%s\n", index, name, v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

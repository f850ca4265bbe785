#include "quadlin/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace quadlin {

namespace {

constexpr std::size_t kSpreadPoints = 5;
constexpr double kTiny = 1e-300;

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lower);
    }
    return m;
}

double max_relative_deviation(const std::vector<double>& v, double center) {
    double worst = 0.0;
    const double scale = std::max(std::abs(center), kTiny);
    for (double x : v) worst = std::max(worst, std::abs(x - center) / scale);
    return worst;
}

double pairwise_spread(const std::array<double, kSpreadPoints>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            const double scale = std::max({std::abs(v[i]), std::abs(v[j]), kTiny});
            worst = std::max(worst, std::abs(v[i] - v[j]) / scale);
        }
    return worst;
}

bool degenerate(const Dual& f) {
    return std::abs(f.d[0]) < QuadEquation::kGuard || std::abs(f.d[1]) < QuadEquation::kGuard ||
           std::abs(f.d[2]) < QuadEquation::kGuard;
}

// Index pairs into Dual::d for the three ratios.
constexpr std::array<std::array<std::size_t, 2>, 3> kRatio{{{0, 1}, {0, 2}, {2, 1}}};

double ratio(const Dual& f, std::size_t which) {
    return f.d[kRatio[which][0]] / f.d[kRatio[which][1]];
}

}  // namespace

LinearizabilityReport check_conditions(const QuadEquation& eq, const CheckOptions& options) {
    if (options.n_samples < 50) throw InputError("check_conditions needs at least 50 samples");
    if (!(options.tol > 0.0)) throw InputError("tolerance must be positive");

    const Interval box = eq.box();
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(box.lo, box.hi);

    std::array<double, kSpreadPoints> probes{};
    for (std::size_t j = 0; j < kSpreadPoints; ++j)
        probes[j] = box.lo + box.width() * (static_cast<double>(j) + 0.5) / kSpreadPoints;

    std::array<std::vector<double>, 3> diagonal;  // A, B, C samples
    std::array<double, 3> spread{0.0, 0.0, 0.0};
    std::size_t used = 0;
    std::size_t skipped = 0;

    for (std::size_t k = 0; k < options.n_samples; ++k) {
        const double x = dist(rng);
        const double y = dist(rng);
        const double z = dist(rng);

        // Conditions 1-3 on the diagonals, 4-6 across the excluded variable.
        const std::array<Dual, 3> diag{eq.partials(x, x, z), eq.partials(x, y, x),
                                       eq.partials(y, x, x)};
        std::array<std::array<Dual, kSpreadPoints>, 3> across;
        for (std::size_t j = 0; j < kSpreadPoints; ++j) {
            across[0][j] = eq.partials(x, y, probes[j]);
            across[1][j] = eq.partials(x, probes[j], z);
            across[2][j] = eq.partials(probes[j], y, z);
        }

        bool bad = degenerate(eq.partials(x, y, z));
        for (const Dual& f : diag) bad = bad || degenerate(f);
        for (const auto& row : across)
            for (const Dual& f : row) bad = bad || degenerate(f);
        if (bad) {
            ++skipped;
            continue;
        }

        ++used;
        for (std::size_t c = 0; c < 3; ++c) {
            diagonal[c].push_back(ratio(diag[c], c));
            std::array<double, kSpreadPoints> values{};
            for (std::size_t j = 0; j < kSpreadPoints; ++j) values[j] = ratio(across[c][j], c);
            spread[c] = std::max(spread[c], pairwise_spread(values));
        }
    }

    if (skipped * 10 > options.n_samples)
        throw DegenerateDerivative("a first partial of F vanishes on " + std::to_string(skipped) +
                                   " of " + std::to_string(options.n_samples) + " samples");

    LinearizabilityReport report;
    report.tol = options.tol;
    report.samples_used = used;
    std::array<double, 3> centers{};
    for (std::size_t c = 0; c < 3; ++c) {
        centers[c] = median(diagonal[c]);
        report.residuals[c] = max_relative_deviation(diagonal[c], centers[c]);
        report.residuals[c + 3] = spread[c];
    }
    report.A = centers[0];
    report.B = centers[1];
    report.C = centers[2];
    report.consistency = std::abs(report.A - report.B * report.C);

    for (std::size_t i = 0; i < 6; ++i)
        if (!(report.residuals[i] <= options.tol)) {
            report.failing_condition = static_cast<int>(i) + 1;
            break;
        }
    if (!report.failing_condition && !(report.consistency <= options.tol * (1.0 + std::abs(report.A))))
        report.failing_condition = 7;
    report.passed = !report.failing_condition;
    return report;
}

nlohmann::ordered_json to_json(const LinearizabilityReport& report) {
    nlohmann::ordered_json j;
    j["passed"] = report.passed;
    j["A"] = report.A;
    j["B"] = report.B;
    j["C"] = report.C;
    j["residuals"] = report.residuals;
    j["consistency"] = report.consistency;
    if (report.failing_condition)
        j["failing_condition"] = *report.failing_condition;
    else
        j["failing_condition"] = nullptr;
    j["samples_used"] = report.samples_used;
    j["mode"] = "necessary-conditions";
    return j;
}

// ---------------------------------------------------------------------------

namespace {

double scaled_second_difference(const QuadEquation& eq, const std::array<double, 3>& p, double h) {
    const double f0 = eq(p[0], p[1], p[2]);
    const double scale = 1.0 + std::abs(f0);
    auto at = [&](int i, double di, int j, double dj) {
        std::array<double, 3> q = p;
        q[static_cast<std::size_t>(i)] += di;
        q[static_cast<std::size_t>(j)] += dj;
        return eq(q[0], q[1], q[2]);
    };
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double pure = at(i, h, i, 0.0) - 2.0 * f0 + at(i, -h, i, 0.0);
        worst = std::max(worst, std::abs(pure) / scale);
        for (int j = i + 1; j < 3; ++j) {
            const double mixed = at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h);
            worst = std::max(worst, std::abs(mixed) / scale);
        }
    }
    return worst;
}

}  // namespace

double max_second_difference(const QuadEquation& eq, const AffineOptions& options) {
    const Interval box = eq.box();
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(box.lo, box.hi);
    double worst = 0.0;
    for (std::size_t k = 0; k < options.n_points; ++k) {
        const std::array<double, 3> p{dist(rng), dist(rng), dist(rng)};
        worst = std::max(worst, scaled_second_difference(eq, p, options.h));
    }
    return worst;
}

std::optional<AffineCoefficients> detect_affine_linear(const QuadEquation& eq,
                                                       const AffineOptions& options) {
    if (max_second_difference(eq, options) > options.tol) return std::nullopt;

    const double m = eq.box().mid();
    const double f0 = eq(m, m, m);
    AffineCoefficients k;
    k.a = eq(m + 1.0, m, m) - f0;
    k.b = eq(m, m + 1.0, m) - f0;
    k.c = eq(m, m, m + 1.0) - f0;
    k.d = f0 - (k.a + k.b + k.c) * m;
    return k;
}

}  // namespace quadlin

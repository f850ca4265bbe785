#include "quadlin/entropy.hpp"

#include <array>
#include <cmath>
#include <random>

namespace quadlin {

std::string_view growth_name(Growth g) {
    switch (g) {
        case Growth::constant:
            return "constant";
        case Growth::linear:
            return "linear";
        case Growth::polynomial:
            return "polynomial";
        case Growth::exponential:
            return "exponential";
    }
    return "unknown";
}

GrowthClass classify_growth(const std::vector<long>& d) {
    if (d.size() < 4) throw TooShort("growth classification needs at least 4 degrees");
    const std::size_t k = d.size() - 1;

    if (d[k] == d[k - 1] && d[k - 1] == d[k - 2]) return {Growth::constant, 0.0};

    const long step = d[k] - d[k - 1];
    if (step >= 1 && d[k - 1] - d[k - 2] == step && d[k - 2] - d[k - 3] == step)
        return {Growth::linear, 0.0};

    bool exponential = true;
    for (std::size_t i = k - 2; i <= k; ++i)
        exponential = exponential && d[i - 1] > 0 &&
                      static_cast<double>(d[i]) >= 1.25 * static_cast<double>(d[i - 1]);
    if (exponential)
        return {Growth::exponential,
                std::log(static_cast<double>(d[k]) / static_cast<double>(d[k - 1]))};

    return {Growth::polynomial, 0.0};
}

namespace {

RationalFunction1D linear_poly(const LinearSeed& s) {
    return RationalFunction1D(BigPoly(std::vector<mpz_class>{s.b, s.a}));
}

}  // namespace

std::vector<std::vector<RationalFunction1D>> evolve_exact(const Expression& rhs,
                                                          const std::vector<LinearSeed>& row,
                                                          const std::vector<LinearSeed>& col) {
    if (row.empty() || col.empty()) throw DimensionError("exact evolution needs a staircase");
    if (row[0].a != col[0].a || row[0].b != col[0].b)
        throw ConflictError("staircase row and column disagree at the corner");
    const std::size_t n = row.size() - 1;
    const std::size_t m = col.size() - 1;
    std::vector<std::vector<RationalFunction1D>> u(n + 1, std::vector<RationalFunction1D>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) u[i][0] = linear_poly(row[i]);
    for (std::size_t j = 0; j <= m; ++j) u[0][j] = linear_poly(col[j]);
    for (std::size_t j = 1; j <= m; ++j)
        for (std::size_t i = 1; i <= n; ++i) {
            const std::array<RationalFunction1D, 3> sites{u[i - 1][j - 1], u[i][j - 1], u[i - 1][j]};
            u[i][j] = evaluate<RationalFunction1D>(rhs, sites);
        }
    return u;
}

void draw_linear_seeds(std::uint64_t seed, int depth, std::vector<LinearSeed>& row,
                       std::vector<LinearSeed>& col) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(1, 10);
    auto draw_int = [&] {
        const long v = dist(rng);
        return v <= 5 ? v - 6 : v - 5;  // [-5, -1] or [1, 5]
    };
    // Proportional values a z + b share their root; the range holds 38
    // distinct roots, beyond which repeats are allowed.
    constexpr std::size_t kDistinctRoots = 38;
    std::vector<LinearSeed> taken;
    auto draw = [&] {
        while (true) {
            const LinearSeed s{draw_int(), draw_int()};
            bool clash = false;
            for (const auto& t : taken) clash = clash || s.b * t.a == t.b * s.a;
            if (!clash || taken.size() >= kDistinctRoots) {
                taken.push_back(s);
                return s;
            }
        }
    };
    const auto size = static_cast<std::size_t>(depth) + 1;
    row.assign(size, {});
    col.assign(size, {});
    for (auto& s : row) s = draw();
    col[0] = row[0];
    for (std::size_t j = 1; j < size; ++j) col[j] = draw();
}

DegreeSequence degree_sequence(const Expression& rhs, int depth, std::uint64_t seed) {
    if (classify_rational(rhs) != Rationality::rational)
        throw NonRationalEquation("right-hand side is not a rational function of the sites");
    if (depth < 4) throw TooShort("depth must be at least 4");

    constexpr int kAttempts = 5;
    std::string last_reason;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
        std::vector<LinearSeed> row, col;
        draw_linear_seeds(s, depth, row, col);
        std::vector<std::vector<RationalFunction1D>> u;
        try {
            u = evolve_exact(rhs, row, col);
        } catch (const DomainError& e) {
            last_reason = e.what();
            continue;
        } catch (const DivisionByZeroFunction& e) {
            last_reason = e.what();
            continue;
        }
        DegreeSequence out;
        for (int k = 1; k <= depth; ++k)
            out.degrees.push_back(u[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)].degree());
        bool zero = false;
        for (long d : out.degrees) zero = zero || d == 0;
        if (zero) {
            last_reason = "a diagonal iterate has degree 0";
            continue;
        }
        const GrowthClass g = classify_growth(out.degrees);
        out.growth = g.growth;
        out.entropy = g.entropy;
        out.seed = s;
        out.attempts = attempt + 1;
        return out;
    }
    throw DegenerateTrajectory("no usable trajectory after " + std::to_string(kAttempts) +
                               " attempts: " + last_reason);
}

nlohmann::ordered_json to_json(const DegreeSequence& seq) {
    nlohmann::ordered_json j;
    j["degrees"] = seq.degrees;
    j["classification"] = growth_name(seq.growth);
    j["entropy"] = seq.entropy;
    j["seed_used"] = seq.seed;
    j["attempts"] = seq.attempts;
    j["mode"] = "heuristic-prescreen";
    return j;
}

std::string to_csv(const DegreeSequence& seq) {
    std::string out = "k,degree\n";
    for (std::size_t i = 0; i < seq.degrees.size(); ++i)
        out += std::to_string(i + 1) + "," + std::to_string(seq.degrees[i]) + "\n";
    return out;
}

}  // namespace quadlin

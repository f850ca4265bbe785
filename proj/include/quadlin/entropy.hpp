#pragma once

// Degree-growth pre-screen. A rational quad equation is iterated exactly on
// staircase data a_i z + b_i and the degrees in z along the diagonal are
// classified. The thresholds are heuristics; reports label the result as a
// pre-screen.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quadlin/bigpoly.hpp"
#include "quadlin/equation.hpp"

namespace quadlin {

enum class Growth { constant, linear, polynomial, exponential };

std::string_view growth_name(Growth g);

struct GrowthClass {
    Growth growth = Growth::constant;
    double entropy = 0.0;
};

/// Throws TooShort for fewer than 4 degrees.
GrowthClass classify_growth(const std::vector<long>& degrees);

struct DegreeSequence {
    std::vector<long> degrees;  // d_1 .. d_K
    Growth growth = Growth::constant;
    double entropy = 0.0;
    std::uint64_t seed = 0;  // seed of the accepted attempt
    int attempts = 0;
};

/// Iterates on a (K+1) x (K+1) corner; d_k = degree at cell (k, k).
/// Throws NonRationalEquation, TooShort for K < 4 and DegenerateTrajectory
/// when five attempts in a row hit a zero denominator or d_k = 0.
DegreeSequence degree_sequence(const Expression& rhs, int depth, std::uint64_t seed);
inline DegreeSequence degree_sequence(const QuadEquation& eq, int depth, std::uint64_t seed) {
    return degree_sequence(eq.rhs(), depth, seed);
}

/// Exact values on the whole corner, for callers that need more than the
/// diagonal degrees. Staircase values are a z + b with the given integers.
struct LinearSeed {
    long a;
    long b;
};
std::vector<std::vector<RationalFunction1D>> evolve_exact(const Expression& rhs,
                                                          const std::vector<LinearSeed>& row,
                                                          const std::vector<LinearSeed>& col);

/// Seeded staircase data of degree one with nonzero a, b in [-5, 5], pairwise
/// non-proportional while the range allows it.
void draw_linear_seeds(std::uint64_t seed, int depth, std::vector<LinearSeed>& row,
                       std::vector<LinearSeed>& col);

nlohmann::ordered_json to_json(const DegreeSequence& seq);
std::string to_csv(const DegreeSequence& seq);

}  // namespace quadlin

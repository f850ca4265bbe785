#pragma once

// Sampling tests of the necessary conditions for linearizability of
// u11 = F(u00, u10, u01) by a point transformation, and detection of
// equations that are already affine.
//
// With a, b, c the coefficients of the target linear equation
// a phi00 + b phi10 + c phi01 + d phi11 = 0, a linearizable F satisfies
//
//   (1) F,u00 / F,u10 at u00 = u10 = x       is the constant a/b
//   (2) F,u00 / F,u01 at u00 = u01 = x       is the constant a/c
//   (3) F,u01 / F,u10 at u10 = u01 = x       is the constant c/b
//   (4) F,u00 / F,u10 does not depend on u01
//   (5) F,u00 / F,u01 does not depend on u10
//   (6) F,u01 / F,u10 does not depend on u00
//
// The conditions are necessary only; sufficiency is certified separately by
// fitting the transformed linear model (see transform.hpp).

#include <array>
#include <cstdint>
#include <optional>

#include <json.hpp>

#include "quadlin/equation.hpp"

namespace quadlin {

struct CheckOptions {
    std::size_t n_samples = 200;
    std::uint64_t seed = 1;
    double tol = 1e-7;
};

/// failing_condition is the first violated condition (1..6), or 7 when all
/// six hold but the consistency A = B * C does not.
struct LinearizabilityReport {
    bool passed = false;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    std::array<double, 6> residuals{};
    double consistency = 0.0;
    std::optional<int> failing_condition;
    std::size_t samples_used = 0;
    double tol = 0.0;
};

LinearizabilityReport check_conditions(const QuadEquation& eq, const CheckOptions& options = {});

nlohmann::ordered_json to_json(const LinearizabilityReport& report);

/// u11 = a u00 + b u10 + c u01 + d.
struct AffineCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

struct AffineOptions {
    double tol = 1e-9;
    double h = 1e-3;
    std::size_t n_points = 200;
    std::uint64_t seed = 7;
};

/// Affine iff every pure and mixed symmetric second difference of F, scaled
/// by 1 + |F|, stays below tol at all sampled points.
std::optional<AffineCoefficients> detect_affine_linear(const QuadEquation& eq,
                                                       const AffineOptions& options = {});

/// Largest scaled second difference seen by detect_affine_linear.
double max_second_difference(const QuadEquation& eq, const AffineOptions& options = {});

}  // namespace quadlin

#pragma once

#include <cstddef>
#include <functional>

namespace quadlin {

struct QuadratureTolerance {
    /// Absolute target for the whole interval; halves with each bisection.
    double abs = 1e-10;
    /// Relative floor against the local Simpson estimate.
    double rel = 1e-12;
    std::size_t max_subdivisions = std::size_t{1} << 20;
};

/// Adaptive Simpson integration of f over [a, b] (a > b gives the negated
/// integral). Throws QuadratureFailure once the subdivision budget is spent.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureTolerance& tol = {});

}  // namespace quadlin

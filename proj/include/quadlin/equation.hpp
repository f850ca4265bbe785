#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "quadlin/expr.hpp"

namespace quadlin {

struct Interval {
    double lo = 0.2;
    double hi = 1.7;

    double mid() const noexcept { return 0.5 * (lo + hi); }
    double width() const noexcept { return hi - lo; }
};

inline constexpr Interval kDefaultBox{0.2, 1.7};

/// Explicit quad equation u11 = F(u00, u10, u01) with its sampling box.
class QuadEquation {
public:
    /// Throws InputError unless the rhs uses a site, lo < hi and F is
    /// evaluable on at least 90% of a fixed uniform sample of box^3.
    QuadEquation(Expression rhs, Interval box = kDefaultBox);

    static QuadEquation parse(std::string_view text, const ParamMap& params = {},
                              Interval box = kDefaultBox);

    /// Reads the equation file format {"rhs", "params", "sample_box"}.
    static QuadEquation from_json_text(std::string_view json_text);

    const Expression& rhs() const noexcept { return rhs_; }
    const Interval& box() const noexcept { return box_; }

    /// Minimum |derivative| treated as nonzero.
    static constexpr double kGuard = 1e-8;

    double operator()(double u00, double u10, double u01) const {
        return evaluate(rhs_, {u00, u10, u01});
    }
    Dual partials(double u00, double u10, double u01) const {
        return eval_with_partials(rhs_, {u00, u10, u01});
    }

private:
    Expression rhs_;
    Interval box_;
};

}  // namespace quadlin

#pragma once

// Numerical reconstruction of a linearizing point transformation.
//
// For a linearizable u11 = F(u00, u10, u01) there is a Psi with
// Psi(u11) = p Psi(u00) + q Psi(u10) + r Psi(u01) + s. Psi is obtained from
// alpha(x), the coefficient of its symmetry generator, through
// alpha Psi' = 1. alpha is read off the first partials of F:
//
//   alpha(x) ~ F,u10(x, r, s) / F,u00(x, r, s)      (u10 relation)
//   alpha(x) ~ F,u01(x, r, s) / F,u00(x, r, s)      (u01 relation, cross-check)
//
// with (r, s) frozen. The gauge is Psi(x_ref) = 0, Psi'(x_ref) = 1.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "quadlin/equation.hpp"
#include "quadlin/lattice.hpp"
#include "quadlin/linearize.hpp"
#include "quadlin/quadrature.hpp"

namespace quadlin {

enum class AlphaRelation { u10, u01 };

struct AlphaOptions {
    std::size_t knots = 201;
    /// Frozen (u10, u01); the box midpoint when unset.
    std::optional<std::array<double, 2>> frozen;
    AlphaRelation relation = AlphaRelation::u10;
    /// Skip the report.passed precondition (used to probe non-linearizable F).
    bool force = false;
};

struct AlphaTable {
    double x_ref = 0.0;
    std::vector<double> x;
    std::vector<double> alpha;
    /// alpha evaluated directly from F off the table; may be empty.
    std::function<double(double)> extend;
};

AlphaTable recover_alpha(const QuadEquation& eq, const LinearizabilityReport& report,
                         const AlphaOptions& options = {});

class PointTransform {
public:
    /// Throws SignChange unless alpha is single-signed, QuadratureFailure when
    /// a knot interval cannot be integrated.
    explicit PointTransform(AlphaTable table, QuadratureTolerance tol = {});

    double x_ref() const noexcept { return table_.x_ref; }
    const AlphaTable& table() const noexcept { return table_; }
    bool monotone() const noexcept { return monotone_; }

    /// Psi at the knots, in table order.
    std::vector<double> knot_values() const;

    /// alpha at x: cubic interpolation inside the table, direct outside.
    double alpha(double x) const;

    double operator()(double x) const;
    /// Batch form; integrates between neighbouring sorted points only once.
    std::vector<double> operator()(std::span<const double> xs) const;

    /// lambda Psi + mu.
    PointTransform gauge(double lambda, double mu) const;

    double scale() const noexcept { return scale_; }
    double shift() const noexcept { return shift_; }

private:
    double interpolated_alpha(double x) const;
    double extended_alpha(double x) const;
    double raw_inside(double x) const;
    double integrate(double a, double b, bool inside) const;

    AlphaTable table_;
    QuadratureTolerance tol_;
    std::vector<double> cumulative_;  // raw Psi at the knots, Psi(x.front()) = 0
    double offset_ = 0.0;             // raw Psi at x_ref
    double scale_ = 1.0;
    double shift_ = 0.0;
    bool monotone_ = false;
};

PointTransform build_psi(const AlphaTable& table, const QuadratureTolerance& tol = {});

/// Psi(u11) = p Psi(u00) + q Psi(u10) + r Psi(u01) + s.
struct LinearModel {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double s = 0.0;
    double fit_residual = 0.0;
    double tol = 0.0;
    bool certified = false;
    std::size_t samples = 0;
};

struct FitOptions {
    std::size_t n_samples = 400;
    std::uint64_t seed = 11;
    double tol = 1e-6;
};

/// Least squares by column-pivoted Householder QR. Throws RankDeficient for a
/// singular design; an uncertified fit is returned with certified = false.
LinearModel fit_linear_model(const QuadEquation& eq, const PointTransform& psi,
                             const FitOptions& options = {});

/// Throws CertificationFailure when the model is not certified.
void require_certified(const LinearModel& model);

struct Roundtrip {
    double discrepancy = 0.0;
    Grid u;         // nonlinear evolution
    Grid mapped;    // Psi applied to u
    Grid linear;    // affine evolution of Psi(staircase)
};

/// Largest per-cell |mapped - linear| / max(1, |mapped|).
Roundtrip roundtrip_verify(const QuadEquation& eq, const PointTransform& psi,
                           const LinearModel& model, std::size_t n, std::size_t m,
                           std::uint64_t seed);

nlohmann::ordered_json to_json(const PointTransform& psi, const LinearModel& model);

}  // namespace quadlin

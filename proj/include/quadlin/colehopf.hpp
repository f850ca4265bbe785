#pragma once

// Discrete Burgers family and its Cole-Hopf linearization.
//
// Index convention: Grid(n, m) with n along T1 and m along T2. The classical
// equations are usually written with (m, n) order; here they read
//
//   linear:      psi11 = psi00 - p psi10
//   Cole-Hopf:   u(n, m) = psi(n, m+1) / psi(n, m)
//   Burgers:     u10 (p + u11) - u00 (p + u10) = 0
//   generalized: (k0 - u10)(k2 u01 + k1) u00 - (k0 - u11)(k2 u00 + k1) u10 = 0
//
// The classical member is the generalized one with k0 = -p, k1 = 1, k2 = 0.
//
// The potential v obeys v10 = E1(u00, u10) v00 and v01 = u00 v00 with
// E1 = (k2 u00 + k1) / (k0 - u10).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "quadlin/lattice.hpp"

namespace quadlin {

struct BurgersFamily {
    double kappa0 = 0.0;
    double kappa1 = 1.0;
    double kappa2 = 0.0;
    /// Set for the classical member.
    std::optional<double> p;

    static BurgersFamily classical(double p);
    /// Throws DegenerateParams if all kappas vanish or kappa1 is not 0 or 1.
    static BurgersFamily generalized(double kappa0, double kappa1, double kappa2);
};

struct HietarintaParams {
    mpq_class e1, e2, o1, o2;
};

/// Requires nonzero initial data; the recurrence itself cannot fail.
Grid evolve_linear_burgers(double p, const Grid& init);

/// u on the N x (M-1) sub-grid. Throws ZeroDivision when |psi| <= 1e-12.
Grid cole_hopf_map(const Grid& psi);

/// Max plaquette residual, each normalized by the sum of the magnitudes of
/// its monomials. Uses the classical form when family.p is set.
double verify_burgers(const Grid& u, const BurgersFamily& family);

/// (1 + u00) u10 = (1 + u01) u00 on every plaquette, normalized as above.
double verify_canonical_form(const Grid& u);

/// Multiplicative four-factor relation
/// (u00+e2)(u11+o2)(u10+o1)(u01+e1) = (u10+e2)(u01+o2)(u00+e1)(u11+o1).
/// Normalized like verify_burgers: each side contributes the magnitudes of
/// its expanded monomials, prod(|u| + |c|).
double rosa_residual(const Grid& u, const HietarintaParams& params);

/// (o1-e2)(e1-o2) / ((e1-e2)(o1-o2)), exact. Throws DegenerateParams when
/// e1 = e2 or o1 = o2.
mpq_class cross_ratio(const HietarintaParams& params);

struct HietarintaResult {
    Grid u;
    BurgersFamily family;
    mpq_class kappa0;
    mpq_class kappa2;
    mpq_class cross_ratio;
};

/// u = k0 (o1-o2)/(o1-e2) (ut + e2)/(ut + o2), with k1 = 1 and
/// k2 = -cross_ratio / k0. Throws PoleError at ut = -o2, DegenerateParams
/// for degenerate parameters or k0 = 0.
HietarintaResult hietarinta_transform(const HietarintaParams& params, const mpq_class& kappa0,
                                      const Grid& u_tilde);

/// Inverse Moebius map of hietarinta_transform. Throws PoleError where the
/// image would be infinite.
Grid inverse_hietarinta(const HietarintaParams& params, const mpq_class& kappa0, const Grid& u);

/// Max relative mismatch between the two paths around each plaquette of the
/// potential, v0 * E1(u00, u10) * u10 against v0 * u00 * E1(u01, u11).
/// Throws ZeroDivision when k0 - u10 is within 1e-12 of zero.
double verify_potential_compatibility(const Grid& u, const BurgersFamily& family, double v0 = 1.0);

/// Solves the four-factor relation for u11 cell by cell.
Grid evolve_rosa(const HietarintaParams& params, const Grid& init);

/// Solves the generalized Burgers relation for u11 cell by cell.
Grid evolve_generalized_burgers(const BurgersFamily& family, const Grid& init);

/// Solves the canonical relation for u01 row by row from the values u(0..N, 0)
/// and returns the rectangle 0 <= n <= N - m, 0 <= m' <= m.
Grid evolve_canonical(const std::vector<double>& row, std::size_t m);

/// Staircase with psi values log-uniform in [0.5, 2].
Grid log_uniform_staircase(std::size_t n, std::size_t m, std::uint64_t seed);

nlohmann::ordered_json colehopf_verdict(const std::string& family, double max_residual, double tol);

}  // namespace quadlin

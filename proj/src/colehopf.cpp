#include "quadlin/colehopf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadlin/report.hpp"

namespace quadlin {

namespace {

constexpr double kZeroGuard = 1e-12;

std::string cell(std::size_t n, std::size_t m) {
    return "(" + std::to_string(n) + ", " + std::to_string(m) + ")";
}

double normalized(double value, double scale) {
    return scale == 0.0 ? std::abs(value) : std::abs(value) / scale;
}

template <class Relation>
double max_over_plaquettes(const Grid& u, Relation rel) {
    double worst = 0.0;
    for (std::size_t j = 0; j < u.m(); ++j)
        for (std::size_t i = 0; i < u.n(); ++i) {
            const double r = rel(u(i, j), u(i + 1, j), u(i, j + 1), u(i + 1, j + 1));
            worst = std::max(worst, std::isnan(r) ? INFINITY : r);
        }
    return worst;
}

}  // namespace

BurgersFamily BurgersFamily::classical(double p) {
    BurgersFamily f;
    f.kappa0 = -p;
    f.kappa1 = 1.0;
    f.kappa2 = 0.0;
    f.p = p;
    return f;
}

BurgersFamily BurgersFamily::generalized(double kappa0, double kappa1, double kappa2) {
    if (kappa0 == 0.0 && kappa1 == 0.0 && kappa2 == 0.0)
        throw DegenerateParams("kappa0, kappa1 and kappa2 all vanish");
    if (kappa1 != 0.0 && kappa1 != 1.0) throw DegenerateParams("kappa1 must be 0 or 1");
    BurgersFamily f;
    f.kappa0 = kappa0;
    f.kappa1 = kappa1;
    f.kappa2 = kappa2;
    return f;
}

Grid evolve_linear_burgers(double p, const Grid& init) {
    for (std::size_t i = 0; i <= init.n(); ++i)
        if (init.kind(i, 0) != CellKind::empty && init(i, 0) == 0.0)
            throw InputError("linear initial data must be nonzero at " + cell(i, 0));
    for (std::size_t j = 0; j <= init.m(); ++j)
        if (init.kind(0, j) != CellKind::empty && init(0, j) == 0.0)
            throw InputError("linear initial data must be nonzero at " + cell(0, j));
    return evolve([p](double a, double b, double) { return a - p * b; }, init);
}

Grid cole_hopf_map(const Grid& psi) {
    if (psi.m() < 2) throw DimensionError("Cole-Hopf map needs at least 3 rows of psi");
    Grid u(psi.n(), psi.m() - 1);
    for (std::size_t j = 0; j <= u.m(); ++j)
        for (std::size_t i = 0; i <= u.n(); ++i) {
            const double den = psi(i, j);
            if (!(std::abs(den) > kZeroGuard))
                throw ZeroDivision("psi vanishes at cell " + cell(i, j));
            u.set(i, j, psi(i, j + 1) / den,
                  i == 0 || j == 0 ? CellKind::initial : CellKind::computed);
        }
    return u;
}

double verify_burgers(const Grid& u, const BurgersFamily& f) {
    if (f.p) {
        const double p = *f.p;
        return max_over_plaquettes(u, [p](double u00, double u10, double, double u11) {
            const double r = u10 * (p + u11) - u00 * (p + u10);
            const double scale = std::abs(u10) * (std::abs(p) + std::abs(u11)) +
                                 std::abs(u00) * (std::abs(p) + std::abs(u10));
            return normalized(r, scale);
        });
    }
    const double k0 = f.kappa0, k1 = f.kappa1, k2 = f.kappa2;
    return max_over_plaquettes(u, [=](double u00, double u10, double u01, double u11) {
        const double r =
            (k0 - u10) * (k2 * u01 + k1) * u00 - (k0 - u11) * (k2 * u00 + k1) * u10;
        const double scale =
            (std::abs(k0) + std::abs(u10)) * (std::abs(k2 * u01) + std::abs(k1)) * std::abs(u00) +
            (std::abs(k0) + std::abs(u11)) * (std::abs(k2 * u00) + std::abs(k1)) * std::abs(u10);
        return normalized(r, scale);
    });
}

double verify_canonical_form(const Grid& u) {
    return max_over_plaquettes(u, [](double u00, double u10, double u01, double) {
        const double r = (1.0 + u00) * u10 - (1.0 + u01) * u00;
        const double scale = (1.0 + std::abs(u00)) * std::abs(u10) + (1.0 + std::abs(u01)) * std::abs(u00);
        return normalized(r, scale);
    });
}

double rosa_residual(const Grid& u, const HietarintaParams& hp) {
    const double e1 = hp.e1.get_d(), e2 = hp.e2.get_d(), o1 = hp.o1.get_d(), o2 = hp.o2.get_d();
    return max_over_plaquettes(u, [=](double u00, double u10, double u01, double u11) {
        const double lhs = (u00 + e2) * (u11 + o2) * (u10 + o1) * (u01 + e1);
        const double rhs = (u10 + e2) * (u01 + o2) * (u00 + e1) * (u11 + o1);
        auto mag = [](double u, double c) { return std::abs(u) + std::abs(c); };
        const double scale = mag(u00, e2) * mag(u11, o2) * mag(u10, o1) * mag(u01, e1) +
                             mag(u10, e2) * mag(u01, o2) * mag(u00, e1) * mag(u11, o1);
        return normalized(lhs - rhs, scale);
    });
}

namespace {

// GMP comparisons and arithmetic assume canonical operands.
mpq_class canonical(mpq_class q) {
    if (q.get_den() == 0) throw DegenerateParams("rational parameter with zero denominator");
    q.canonicalize();
    return q;
}

HietarintaParams canonical(const HietarintaParams& hp) {
    return {canonical(hp.e1), canonical(hp.e2), canonical(hp.o1), canonical(hp.o2)};
}

}  // namespace

mpq_class cross_ratio(const HietarintaParams& raw) {
    const HietarintaParams hp = canonical(raw);
    if (hp.e1 == hp.e2) throw DegenerateParams("e1 = e2");
    if (hp.o1 == hp.o2) throw DegenerateParams("o1 = o2");
    mpq_class cr = (hp.o1 - hp.e2) * (hp.e1 - hp.o2) / ((hp.e1 - hp.e2) * (hp.o1 - hp.o2));
    cr.canonicalize();
    return cr;
}

namespace {

mpq_class moebius_prefactor(const HietarintaParams& raw, const mpq_class& raw_kappa0) {
    const HietarintaParams hp = canonical(raw);
    const mpq_class kappa0 = canonical(raw_kappa0);
    if (kappa0 == 0) throw DegenerateParams("kappa0 must be nonzero");
    if (hp.o1 == hp.e2) throw DegenerateParams("o1 = e2 makes the map singular");
    if (hp.o1 == hp.o2) throw DegenerateParams("o1 = o2");
    mpq_class k = kappa0 * (hp.o1 - hp.o2) / (hp.o1 - hp.e2);
    k.canonicalize();
    return k;
}

}  // namespace

HietarintaResult hietarinta_transform(const HietarintaParams& hp, const mpq_class& kappa0,
                                      const Grid& u_tilde) {
    HietarintaResult out;
    out.cross_ratio = cross_ratio(hp);
    const double k = moebius_prefactor(hp, kappa0).get_d();
    out.kappa0 = canonical(kappa0);
    out.kappa2 = -out.cross_ratio / out.kappa0;
    out.kappa2.canonicalize();
    out.family = BurgersFamily::generalized(out.kappa0.get_d(), 1.0, out.kappa2.get_d());

    const double e2 = hp.e2.get_d(), o2 = hp.o2.get_d();
    out.u = Grid(u_tilde.n(), u_tilde.m());
    for (std::size_t j = 0; j <= u_tilde.m(); ++j)
        for (std::size_t i = 0; i <= u_tilde.n(); ++i) {
            if (u_tilde.kind(i, j) == CellKind::empty) continue;
            const double t = u_tilde(i, j);
            if (!(std::abs(t + o2) > kZeroGuard))
                throw PoleError("u_tilde hits the pole -o2 at cell " + cell(i, j));
            out.u.set(i, j, k * (t + e2) / (t + o2), u_tilde.kind(i, j));
        }
    return out;
}

Grid inverse_hietarinta(const HietarintaParams& hp, const mpq_class& kappa0, const Grid& u) {
    cross_ratio(hp);
    const double k = moebius_prefactor(hp, kappa0).get_d();
    const double e2 = hp.e2.get_d(), o2 = hp.o2.get_d();
    Grid out(u.n(), u.m());
    for (std::size_t j = 0; j <= u.m(); ++j)
        for (std::size_t i = 0; i <= u.n(); ++i) {
            if (u.kind(i, j) == CellKind::empty) continue;
            const double t = u(i, j) / k;
            if (!(std::abs(t - 1.0) > kZeroGuard))
                throw PoleError("u equals the asymptotic value of the map at cell " + cell(i, j));
            out.set(i, j, (e2 - t * o2) / (t - 1.0), u.kind(i, j));
        }
    return out;
}

double verify_potential_compatibility(const Grid& u, const BurgersFamily& f, double v0) {
    if (v0 == 0.0 || !std::isfinite(v0)) throw InputError("v0 must be finite and nonzero");
    double worst = 0.0;
    for (std::size_t j = 0; j < u.m(); ++j)
        for (std::size_t i = 0; i < u.n(); ++i) {
            const double u00 = u(i, j), u10 = u(i + 1, j), u01 = u(i, j + 1), u11 = u(i + 1, j + 1);
            auto e1 = [&](double a, double b, std::size_t n, std::size_t m) {
                const double den = f.kappa0 - b;
                if (!(std::abs(den) > kZeroGuard))
                    throw ZeroDivision("kappa0 - u10 vanishes at cell " + cell(n, m));
                return (f.kappa2 * a + f.kappa1) / den;
            };
            // v11 reached through v10 and through v01.
            const double through_t1 = v0 * e1(u00, u10, i, j) * u10;
            const double through_t2 = v0 * u00 * e1(u01, u11, i, j + 1);
            const double scale = std::max(std::abs(through_t1), std::abs(through_t2));
            const double mismatch = scale == 0.0 ? 0.0 : std::abs(through_t1 - through_t2) / scale;
            worst = std::max(worst, std::isnan(mismatch) ? INFINITY : mismatch);
        }
    return worst;
}

Grid evolve_rosa(const HietarintaParams& hp, const Grid& init) {
    const double e1 = hp.e1.get_d(), e2 = hp.e2.get_d(), o1 = hp.o1.get_d(), o2 = hp.o2.get_d();
    return evolve(
        [=](double u00, double u10, double u01) {
            const double dens[] = {u10 + o1, u01 + e1, u00 + e2};
            for (double d : dens)
                if (d == 0.0) throw DomainError("division by zero", "rosa", {u00, u10, u01});
            const double l = (u10 + e2) / (u10 + o1) * (u01 + o2) / (u01 + e1) * (u00 + e1) / (u00 + e2);
            if (l == 1.0) throw DomainError("division by zero", "rosa", {u00, u10, u01});
            return (l * o1 - o2) / (1.0 - l);
        },
        init);
}

Grid evolve_generalized_burgers(const BurgersFamily& f, const Grid& init) {
    const double k0 = f.kappa0, k1 = f.kappa1, k2 = f.kappa2;
    return evolve(
        [=](double u00, double u10, double u01) {
            const double den = (k2 * u00 + k1) * u10;
            if (den == 0.0) throw DomainError("division by zero", "burgers", {u00, u10, u01});
            return k0 - (k0 - u10) * (k2 * u01 + k1) * u00 / den;
        },
        init);
}

Grid evolve_canonical(const std::vector<double>& row, std::size_t m) {
    if (m == 0 || row.size() < m + 2)
        throw DimensionError("canonical evolution needs m >= 1 and at least m + 2 initial values");
    const std::size_t n = row.size() - 1 - m;
    std::vector<double> current = row;
    Grid out(n, m);
    for (std::size_t j = 0; j <= m; ++j) {
        for (std::size_t i = 0; i <= n; ++i)
            out.set(i, j, current[i], j == 0 ? CellKind::initial : CellKind::computed);
        if (j == m) break;
        std::vector<double> next(current.size() - 1);
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (current[i] == 0.0)
                throw DomainError("division by zero", "canonical", {current[i], current[i + 1]});
            next[i] = (1.0 + current[i]) * current[i + 1] / current[i] - 1.0;
            if (!std::isfinite(next[i]))
                throw DomainError("non-finite value", "canonical", {current[i], current[i + 1]});
        }
        current = std::move(next);
    }
    return out;
}

Grid log_uniform_staircase(std::size_t n, std::size_t m, std::uint64_t seed) {
    Grid g = make_staircase(n, m, SeededStaircase{seed, std::log(0.5), std::log(2.0)});
    return g.map([](double x) { return std::exp(x); });
}

nlohmann::ordered_json colehopf_verdict(const std::string& family, double max_residual, double tol) {
    nlohmann::ordered_json j;
    j["family"] = family;
    j["max_residual"] = max_residual;
    j["passed"] = max_residual <= tol;
    return j;
}

}  // namespace quadlin

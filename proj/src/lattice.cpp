#include "quadlin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadlin/report.hpp"

namespace quadlin {

Grid::Grid(std::size_t n, std::size_t m)
    : n_(n), m_(m), values_((n + 1) * (m + 1), 0.0), kinds_((n + 1) * (m + 1), CellKind::empty) {}

bool Grid::complete() const {
    return std::none_of(kinds_.begin(), kinds_.end(), [](CellKind k) { return k == CellKind::empty; });
}

std::size_t Grid::count(CellKind k) const {
    return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
}

Grid Grid::sub(std::size_t n0, std::size_t m0, std::size_t n, std::size_t m) const {
    if (n0 + n > n_ || m0 + m > m_) throw DimensionError("sub-grid exceeds grid bounds");
    Grid out(n, m);
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i <= n; ++i) {
            const CellKind k = (i == 0 || j == 0) ? CellKind::initial : kind(n0 + i, m0 + j);
            out.set(i, j, (*this)(n0 + i, m0 + j), k);
        }
    return out;
}

Grid Grid::staircase() const {
    Grid out(n_, m_);
    for (std::size_t i = 0; i <= n_; ++i) out.set(i, 0, (*this)(i, 0), CellKind::initial);
    for (std::size_t j = 0; j <= m_; ++j) out.set(0, j, (*this)(0, j), CellKind::initial);
    return out;
}

Grid Grid::map(const std::function<double(double)>& f) const {
    Grid out(*this);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (kinds_[i] != CellKind::empty) out.values_[i] = f(values_[i]);
    return out;
}

double Grid::max_abs() const {
    double best = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (kinds_[i] != CellKind::empty) best = std::max(best, std::abs(values_[i]));
    return best;
}

Grid make_staircase(std::size_t n, std::size_t m, const SeededStaircase& gen) {
    if (n == 0 || m == 0) throw DimensionError("staircase needs n >= 1 and m >= 1");
    if (!(gen.lo < gen.hi)) throw DimensionError("staircase range needs lo < hi");
    std::mt19937_64 rng(gen.seed);
    std::uniform_real_distribution<double> dist(gen.lo, gen.hi);
    Grid g(n, m);
    for (std::size_t i = 0; i <= n; ++i) g.set(i, 0, dist(rng), CellKind::initial);
    for (std::size_t j = 1; j <= m; ++j) g.set(0, j, dist(rng), CellKind::initial);
    return g;
}

Grid make_staircase(std::size_t n, std::size_t m, const ExplicitStaircase& gen) {
    if (n == 0 || m == 0) throw DimensionError("staircase needs n >= 1 and m >= 1");
    if (gen.row.size() != n + 1 || gen.col.size() != m + 1)
        throw DimensionError("staircase row needs n+1 values and column m+1 values");
    if (gen.row.front() != gen.col.front())
        throw ConflictError("corner mismatch: row starts with " + format_number(gen.row.front()) +
                            ", column starts with " + format_number(gen.col.front()));
    Grid g(n, m);
    for (std::size_t i = 0; i <= n; ++i) g.set(i, 0, gen.row[i], CellKind::initial);
    for (std::size_t j = 1; j <= m; ++j) g.set(0, j, gen.col[j], CellKind::initial);
    return g;
}

Grid evolve(const QuadMap& rhs, const Grid& init) {
    for (std::size_t i = 0; i <= init.n(); ++i)
        if (init.kind(i, 0) == CellKind::empty) throw DimensionError("initial row incomplete");
    for (std::size_t j = 0; j <= init.m(); ++j)
        if (init.kind(0, j) == CellKind::empty) throw DimensionError("initial column incomplete");

    Grid g = init.staircase();
    // Cell (i, j) with i, j >= 1 lies on anti-diagonal i + j.
    for (std::size_t diag = 2; diag <= g.n() + g.m(); ++diag) {
        const std::size_t i_lo = diag > g.m() ? diag - g.m() : 1;
        const std::size_t i_hi = std::min(g.n(), diag - 1);
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
            const std::size_t j = diag - i;
            double v = 0.0;
            try {
                v = rhs(g(i - 1, j - 1), g(i, j - 1), g(i - 1, j));
            } catch (const DomainError& e) {
                throw DomainError(e.reason() + " while computing cell (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")",
                                  e.node(), e.point());
            }
            if (!std::isfinite(v))
                throw DomainError("non-finite value while computing cell (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")",
                                  "rhs", {g(i - 1, j - 1), g(i, j - 1), g(i - 1, j)});
            g.set(i, j, v, CellKind::computed);
        }
    }
    return g;
}

Grid evolve_quad(const Expression& rhs, const Grid& init) {
    return evolve([&rhs](double a, double b, double c) { return evaluate(rhs, {a, b, c}); }, init);
}

double residual(const Expression& relation, const Grid& grid) {
    if (!grid.complete()) throw DimensionError("residual needs a fully evolved grid");
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.m(); ++j)
        for (std::size_t i = 0; i < grid.n(); ++i) {
            const std::array<double, 4> pt{grid(i, j), grid(i + 1, j), grid(i, j + 1),
                                           grid(i + 1, j + 1)};
            double r = 0.0;
            try {
                r = evaluate_relation(relation, pt);
            } catch (const DomainError& e) {
                throw DomainError(e.reason() + " in plaquette (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")",
                                  e.node(), e.point());
            }
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

nlohmann::ordered_json grid_to_json(const Grid& grid) {
    nlohmann::ordered_json j;
    j["n"] = grid.n();
    j["m"] = grid.m();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m <= grid.m(); ++m) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t n = 0; n <= grid.n(); ++n) row.push_back(grid(n, m));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return j;
}

std::string grid_to_csv(const Grid& grid) {
    std::string out = "n,m,value\n";
    for (std::size_t m = 0; m <= grid.m(); ++m)
        for (std::size_t n = 0; n <= grid.n(); ++n)
            out += std::to_string(n) + "," + std::to_string(m) + "," + format_number(grid(n, m)) +
                   "\n";
    return out;
}

}  // namespace quadlin

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadlin/expr.hpp"

namespace quadlin {

enum class CellKind : std::uint8_t { empty, initial, computed };

/// Values u(n, m) on the rectangle 0 <= n <= N, 0 <= m <= M. n runs along the
/// first lattice direction (shift T1), m along the second (shift T2).
class Grid {
public:
    Grid() = default;
    Grid(std::size_t n, std::size_t m);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    std::size_t width() const noexcept { return n_ + 1; }
    std::size_t height() const noexcept { return m_ + 1; }

    double operator()(std::size_t n, std::size_t m) const { return values_[index(n, m)]; }
    double& operator()(std::size_t n, std::size_t m) { return values_[index(n, m)]; }

    CellKind kind(std::size_t n, std::size_t m) const { return kinds_[index(n, m)]; }
    void set(std::size_t n, std::size_t m, double v, CellKind k) {
        values_[index(n, m)] = v;
        kinds_[index(n, m)] = k;
    }

    bool complete() const;
    std::size_t count(CellKind k) const;

    /// Grid restricted to [n0, n0+n] x [m0, m0+m].
    Grid sub(std::size_t n0, std::size_t m0, std::size_t n, std::size_t m) const;

    /// Only the initial row and column, as a fresh staircase.
    Grid staircase() const;

    /// Same shape and provenance, values mapped through f.
    Grid map(const std::function<double(double)>& f) const;

    double max_abs() const;

    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t index(std::size_t n, std::size_t m) const { return m * (n_ + 1) + n; }

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> values_;
    std::vector<CellKind> kinds_;
};

struct SeededStaircase {
    std::uint64_t seed = 0;
    double lo = 0.2;
    double hi = 1.7;
};

struct ExplicitStaircase {
    std::vector<double> row;  // u(0..N, 0)
    std::vector<double> col;  // u(0, 0..M)
};

Grid make_staircase(std::size_t n, std::size_t m, const SeededStaircase& gen);
Grid make_staircase(std::size_t n, std::size_t m, const ExplicitStaircase& gen);

using QuadMap = std::function<double(double u00, double u10, double u01)>;

/// Fills u(n+1, m+1) = F(u(n,m), u(n+1,m), u(n,m+1)) anti-diagonal by
/// anti-diagonal. A DomainError from F is rethrown carrying the cell index.
Grid evolve(const QuadMap& rhs, const Grid& init);
Grid evolve_quad(const Expression& rhs, const Grid& init);

/// Max over all plaquettes of |relation(u00, u10, u01, u11)|.
double residual(const Expression& relation, const Grid& grid);

nlohmann::ordered_json grid_to_json(const Grid& grid);
std::string grid_to_csv(const Grid& grid);

}  // namespace quadlin

#pragma once

// Equation DSL: parser, printer and a generic evaluator.
//
// Grammar (whitespace is ignored):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' exponent)?
//   atom   := number | site | param | ('exp' | 'log') '(' expr ')'
//           | '(' expr ')' | '-' atom
//   exponent := '-'? integer | '(' '-'? integer ('/' integer)? ')'
//   site   := 'u00' | 'u10' | 'u01'        ('u11' only in relations)
//
// A '-' directly followed by a number literal folds into a negative constant.
// Parameters are substituted at parse time, so a parsed Expression only ever
// holds sites and exact rational constants.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "quadlin/errors.hpp"

namespace quadlin {

enum class Site : std::uint8_t { u00 = 0, u10 = 1, u01 = 2, u11 = 3 };

std::string_view site_name(Site s);

enum class NodeKind : std::uint8_t { Variable, Constant, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };

struct Node {
    NodeKind kind = NodeKind::Constant;
    Site site = Site::u00;
    int lhs = -1;
    int rhs = -1;
    // Constant value, or the exponent of a Pow node.
    mpq_class exact;
    double approx = 0.0;
};

class Expression {
public:
    static Expression variable(Site s);
    static Expression constant(const mpq_class& value);
    static Expression binary(NodeKind kind, const Expression& lhs, const Expression& rhs);
    static Expression unary(NodeKind kind, const Expression& operand);
    static Expression power(const Expression& base, const mpq_class& exponent);

    int root() const noexcept { return root_; }
    const Node& node(int index) const { return (*nodes_)[static_cast<std::size_t>(index)]; }
    std::size_t size() const noexcept { return nodes_->size(); }

    /// Number of nodes that are neither sites nor constants.
    std::size_t interior_count() const;
    bool uses(Site s) const;
    bool uses_any_site() const;

    /// Fully parenthesized form; parse(to_string()) reproduces the tree.
    std::string to_string() const;
    std::string to_string(int index) const;

    bool structurally_equal(const Expression& other) const;

private:
    Expression(std::shared_ptr<const std::vector<Node>> nodes, int root)
        : nodes_(std::move(nodes)), root_(root) {}

    friend class Parser;
    friend Expression make_expression(std::vector<Node> nodes, int root);

    std::shared_ptr<const std::vector<Node>> nodes_;
    int root_ = 0;
};

struct ParseOptions {
    /// Accept u11 as a site (implicit relations over all four corners).
    bool allow_u11 = false;
};

/// Parameter values; a non-finite value marks the parameter as unbound.
using ParamMap = std::map<std::string, double>;

Expression parse(std::string_view text, const ParamMap& params = {}, ParseOptions options = {});

enum class Rationality { rational, non_rational };

Rationality classify_rational(const Expression& e);

std::string format_decimal(const mpq_class& value);

// ---------------------------------------------------------------------------
// Forward-mode derivative carrier over the three right-hand-side sites.

struct Dual {
    double value = 0.0;
    std::array<double, 3> d{0.0, 0.0, 0.0};

    static Dual constant(double v) { return Dual{v, {0.0, 0.0, 0.0}}; }
    static Dual seed(double v, int which) {
        Dual r{v, {0.0, 0.0, 0.0}};
        r.d[static_cast<std::size_t>(which)] = 1.0;
        return r;
    }

    friend Dual operator+(const Dual& a, const Dual& b) {
        return {a.value + b.value, {a.d[0] + b.d[0], a.d[1] + b.d[1], a.d[2] + b.d[2]}};
    }
    friend Dual operator-(const Dual& a, const Dual& b) {
        return {a.value - b.value, {a.d[0] - b.d[0], a.d[1] - b.d[1], a.d[2] - b.d[2]}};
    }
    friend Dual operator-(const Dual& a) { return {-a.value, {-a.d[0], -a.d[1], -a.d[2]}}; }
    friend Dual operator*(const Dual& a, const Dual& b) {
        Dual r;
        r.value = a.value * b.value;
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.d[i] * b.value + a.value * b.d[i];
        return r;
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        Dual r;
        r.value = a.value / b.value;
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = (a.d[i] - r.value * b.d[i]) / b.value;
        return r;
    }
};

// ---------------------------------------------------------------------------
// Scalar backends. A backend provides constants, the partial operations, a
// finiteness check and a way to report the evaluation point.

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static double constant(const Node& n) { return n.approx; }
    static bool finite(double v) { return std::isfinite(v); }
    static const char* check_divisor(double v) { return v == 0.0 ? "division by zero" : nullptr; }
    static double divide(double a, double b) { return a / b; }
    static const char* check_log(double v) {
        return v > 0.0 ? nullptr : "log of non-positive value";
    }
    static double log(double v) { return std::log(v); }
    static double exp(double v) { return std::exp(v); }
    static const char* check_pow(double base, const mpq_class& e);
    static double pow(double base, const Node& n) { return std::pow(base, n.approx); }
    static double point_value(double v) { return v; }
};

template <>
struct ScalarTraits<Dual> {
    static Dual constant(const Node& n) { return Dual::constant(n.approx); }
    static bool finite(const Dual& v) {
        return std::isfinite(v.value) && std::isfinite(v.d[0]) && std::isfinite(v.d[1]) &&
               std::isfinite(v.d[2]);
    }
    static const char* check_divisor(const Dual& v) {
        return v.value == 0.0 ? "division by zero" : nullptr;
    }
    static Dual divide(const Dual& a, const Dual& b) { return a / b; }
    static const char* check_log(const Dual& v) {
        return v.value > 0.0 ? nullptr : "log of non-positive value";
    }
    static Dual log(const Dual& v) {
        Dual r;
        r.value = std::log(v.value);
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = v.d[i] / v.value;
        return r;
    }
    static Dual exp(const Dual& v) {
        Dual r;
        r.value = std::exp(v.value);
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = v.d[i] * r.value;
        return r;
    }
    static const char* check_pow(const Dual& base, const mpq_class& e) {
        return ScalarTraits<double>::check_pow(base.value, e);
    }
    static Dual pow(const Dual& base, const Node& n) {
        Dual r;
        r.value = std::pow(base.value, n.approx);
        const double slope = n.approx * std::pow(base.value, n.approx - 1.0);
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = slope * base.d[i];
        return r;
    }
    static double point_value(const Dual& v) { return v.value; }
};

namespace detail {

template <class T>
[[noreturn]] void throw_domain(const Expression& e, int index, std::span<const T> sites,
                               const char* what) {
    std::vector<double> point;
    if constexpr (requires(const T& v) { ScalarTraits<T>::point_value(v); }) {
        for (const T& s : sites) point.push_back(ScalarTraits<T>::point_value(s));
    }
    throw DomainError(what, e.to_string(index), std::move(point));
}

template <class T>
T eval_node(const Expression& e, int index, std::span<const T> sites) {
    using Tr = ScalarTraits<T>;
    const Node& n = e.node(index);
    T out{};
    switch (n.kind) {
        case NodeKind::Variable: {
            const auto slot = static_cast<std::size_t>(n.site);
            if (slot >= sites.size()) throw_domain(e, index, sites, "site not supplied");
            return sites[slot];
        }
        case NodeKind::Constant:
            return Tr::constant(n);
        case NodeKind::Add:
            out = eval_node(e, n.lhs, sites) + eval_node(e, n.rhs, sites);
            break;
        case NodeKind::Sub:
            out = eval_node(e, n.lhs, sites) - eval_node(e, n.rhs, sites);
            break;
        case NodeKind::Mul:
            out = eval_node(e, n.lhs, sites) * eval_node(e, n.rhs, sites);
            break;
        case NodeKind::Div: {
            T num = eval_node(e, n.lhs, sites);
            T den = eval_node(e, n.rhs, sites);
            if (const char* err = Tr::check_divisor(den)) throw_domain(e, index, sites, err);
            out = Tr::divide(num, den);
            break;
        }
        case NodeKind::Neg:
            out = -eval_node(e, n.lhs, sites);
            break;
        case NodeKind::Pow: {
            T base = eval_node(e, n.lhs, sites);
            if (const char* err = Tr::check_pow(base, n.exact)) throw_domain(e, index, sites, err);
            out = Tr::pow(base, n);
            break;
        }
        case NodeKind::Exp:
            out = Tr::exp(eval_node(e, n.lhs, sites));
            break;
        case NodeKind::Log: {
            T arg = eval_node(e, n.lhs, sites);
            if (const char* err = Tr::check_log(arg)) throw_domain(e, index, sites, err);
            out = Tr::log(arg);
            break;
        }
    }
    if (!Tr::finite(out)) throw_domain(e, index, sites, "non-finite result");
    return out;
}

}  // namespace detail

/// Evaluate over any scalar backend. `sites` is indexed by Site (u00, u10,
/// u01 and optionally u11).
template <class T>
T evaluate(const Expression& e, std::span<const T> sites) {
    return detail::eval_node<T>(e, e.root(), sites);
}

double evaluate(const Expression& e, const std::array<double, 3>& point);
/// Relation over all four corners (u00, u10, u01, u11).
double evaluate_relation(const Expression& e, const std::array<double, 4>& point);

/// Value and exact first partials with respect to (u00, u10, u01).
Dual eval_with_partials(const Expression& e, const std::array<double, 3>& point);

}  // namespace quadlin

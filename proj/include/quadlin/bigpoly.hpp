#pragma once

// Exact univariate polynomials over Z and reduced rational functions over Q,
// in the auxiliary variable z.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "quadlin/expr.hpp"

namespace quadlin {

class BigPoly {
public:
    BigPoly() = default;
    /// c[i] is the coefficient of z^i; trailing zeros are dropped.
    explicit BigPoly(std::vector<mpz_class> c);
    static BigPoly constant(const mpz_class& c);
    static BigPoly z();

    bool is_zero() const noexcept { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    const mpz_class& lead() const { return c_.back(); }
    const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }

    friend BigPoly operator+(const BigPoly& a, const BigPoly& b);
    friend BigPoly operator-(const BigPoly& a, const BigPoly& b);
    friend BigPoly operator-(const BigPoly& a);
    friend BigPoly operator*(const BigPoly& a, const BigPoly& b);
    friend BigPoly operator*(const BigPoly& a, const mpz_class& k);
    friend bool operator==(const BigPoly& a, const BigPoly& b) { return a.c_ == b.c_; }

    /// gcd of the coefficients, positive; 0 for the zero polynomial.
    mpz_class content() const;
    BigPoly primitive_part() const;
    /// Every coefficient divided exactly by k.
    BigPoly divexact(const mpz_class& k) const;
    /// Exact quotient a / b; the caller guarantees b divides a.
    static BigPoly divexact(const BigPoly& a, const BigPoly& b);
    /// lc(b)^(deg a - deg b + 1) a mod b.
    static BigPoly pseudo_remainder(const BigPoly& a, const BigPoly& b);

    mpq_class evaluate(const mpq_class& z) const;
    std::string to_string() const;

private:
    void trim();
    std::vector<mpz_class> c_;
};

/// gcd over Z[z] by the subresultant remainder sequence; leading coefficient
/// positive, gcd(0, 0) = 0.
BigPoly gcd(const BigPoly& a, const BigPoly& b);

/// Schoolbook product, exposed for cross-checking the packed product.
BigPoly multiply_schoolbook(const BigPoly& a, const BigPoly& b);
/// Product through one big-integer multiplication (Kronecker substitution).
BigPoly multiply_kronecker(const BigPoly& a, const BigPoly& b);

/// num / den in lowest terms over Z[z] with lc(den) > 0.
class RationalFunction1D {
public:
    RationalFunction1D() : den_(BigPoly::constant(1)) {}
    explicit RationalFunction1D(BigPoly num) : num_(std::move(num)), den_(BigPoly::constant(1)) {}
    /// Throws DivisionByZeroFunction for a zero denominator.
    RationalFunction1D(BigPoly num, BigPoly den);
    static RationalFunction1D constant(const mpq_class& q);

    const BigPoly& num() const noexcept { return num_; }
    const BigPoly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    /// max(deg num, deg den), with 0 for constants.
    long degree() const noexcept;

    friend RationalFunction1D operator+(const RationalFunction1D& a, const RationalFunction1D& b);
    friend RationalFunction1D operator-(const RationalFunction1D& a, const RationalFunction1D& b);
    friend RationalFunction1D operator-(const RationalFunction1D& a);
    friend RationalFunction1D operator*(const RationalFunction1D& a, const RationalFunction1D& b);
    friend RationalFunction1D operator/(const RationalFunction1D& a, const RationalFunction1D& b);
    friend bool operator==(const RationalFunction1D& a, const RationalFunction1D& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    /// Throws DivisionByZeroFunction when z is a root of den.
    mpq_class evaluate(const mpq_class& z) const;
    std::string to_string() const;

private:
    struct Reduced {};
    RationalFunction1D(BigPoly num, BigPoly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
    void canonicalize();

    BigPoly num_;
    BigPoly den_;
};

enum class ArithOp { add, sub, mul, div };

RationalFunction1D rf_arith(const RationalFunction1D& a, const RationalFunction1D& b, ArithOp op);

/// Evaluator backend: +, -, *, / and integer powers are exact; log, exp and
/// fractional powers raise NonRationalEquation.
template <>
struct ScalarTraits<RationalFunction1D> {
    static RationalFunction1D constant(const Node& n) { return RationalFunction1D::constant(n.exact); }
    static bool finite(const RationalFunction1D&) { return true; }
    static const char* check_divisor(const RationalFunction1D& v) {
        return v.is_zero() ? "division by the zero function" : nullptr;
    }
    static RationalFunction1D divide(const RationalFunction1D& a, const RationalFunction1D& b) {
        return a / b;
    }
    static const char* check_log(const RationalFunction1D&);
    static RationalFunction1D log(const RationalFunction1D&);
    static RationalFunction1D exp(const RationalFunction1D&);
    static const char* check_pow(const RationalFunction1D& base, const mpq_class& e);
    static RationalFunction1D pow(const RationalFunction1D& base, const Node& n);
};

}  // namespace quadlin

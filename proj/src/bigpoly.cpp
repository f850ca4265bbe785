#include "quadlin/bigpoly.hpp"

#include <algorithm>
#include <cstdint>

namespace quadlin {

namespace {

// Below this length on either side the schoolbook product is faster.
constexpr std::size_t kKroneckerThreshold = 24;

std::size_t bit_length(const std::vector<mpz_class>& c) {
    std::size_t bits = 0;
    for (const auto& v : c)
        if (v != 0) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
    return bits;
}

// Packs the coefficients into limb-aligned slots of `limbs` words each,
// returning sum c_i 2^(64 limbs i).
mpz_class pack(const std::vector<mpz_class>& c, std::size_t limbs) {
    std::vector<std::uint64_t> pos(c.size() * limbs, 0);
    std::vector<std::uint64_t> neg(c.size() * limbs, 0);
    bool any_neg = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int s = sgn(c[i]);
        if (s == 0) continue;
        auto& buf = s > 0 ? pos : neg;
        any_neg = any_neg || s < 0;
        mpz_export(&buf[i * limbs], nullptr, -1, sizeof(std::uint64_t), 0, 0, c[i].get_mpz_t());
    }
    mpz_class x, y;
    mpz_import(x.get_mpz_t(), pos.size(), -1, sizeof(std::uint64_t), 0, 0, pos.data());
    if (any_neg) {
        mpz_import(y.get_mpz_t(), neg.size(), -1, sizeof(std::uint64_t), 0, 0, neg.data());
        x -= y;
    }
    return x;
}

}  // namespace

BigPoly::BigPoly(std::vector<mpz_class> c) : c_(std::move(c)) { trim(); }

BigPoly BigPoly::constant(const mpz_class& c) { return BigPoly(std::vector<mpz_class>{c}); }

BigPoly BigPoly::z() { return BigPoly(std::vector<mpz_class>{0, 1}); }

void BigPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigPoly operator+(const BigPoly& a, const BigPoly& b) {
    const auto& big = a.c_.size() >= b.c_.size() ? a.c_ : b.c_;
    const auto& small = a.c_.size() >= b.c_.size() ? b.c_ : a.c_;
    std::vector<mpz_class> r = big;
    for (std::size_t i = 0; i < small.size(); ++i) r[i] += small[i];
    return BigPoly(std::move(r));
}

BigPoly operator-(const BigPoly& a) {
    std::vector<mpz_class> r = a.c_;
    for (auto& v : r) v = -v;
    return BigPoly(std::move(r));
}

BigPoly operator-(const BigPoly& a, const BigPoly& b) {
    std::vector<mpz_class> r = a.c_;
    if (r.size() < b.c_.size()) r.resize(b.c_.size());
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return BigPoly(std::move(r));
}

BigPoly operator*(const BigPoly& a, const mpz_class& k) {
    if (k == 0) return {};
    std::vector<mpz_class> r = a.c_;
    for (auto& v : r) v *= k;
    return BigPoly(std::move(r));
}

BigPoly multiply_schoolbook(const BigPoly& a, const BigPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto& x = a.coefficients();
    const auto& y = b.coefficients();
    std::vector<mpz_class> r(x.size() + y.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            mpz_addmul(r[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
    }
    return BigPoly(std::move(r));
}

BigPoly multiply_kronecker(const BigPoly& a, const BigPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto& x = a.coefficients();
    const auto& y = b.coefficients();
    const std::size_t terms = std::min(x.size(), y.size());
    std::size_t bound = bit_length(x) + bit_length(y) + 2;
    while ((std::size_t{1} << (bound - bit_length(x) - bit_length(y) - 2)) < terms) ++bound;
    const std::size_t limbs = (bound + 63) / 64;
    const std::size_t slot_bits = 64 * limbs;

    mpz_class prod = pack(x, limbs) * pack(y, limbs);
    const int sign = sgn(prod);
    prod = abs(prod);

    const std::size_t n = x.size() + y.size() - 1;
    std::vector<std::uint64_t> buf(n * limbs + 1, 0);
    std::size_t written = 0;
    mpz_export(buf.data(), &written, -1, sizeof(std::uint64_t), 0, 0, prod.get_mpz_t());

    // Balanced digits: a slot at or above 2^(slot_bits-1) is negative and
    // borrows one from the next slot.
    mpz_class half, full;
    mpz_ui_pow_ui(full.get_mpz_t(), 2, slot_bits);
    half = full / 2;
    std::vector<mpz_class> r(n);
    int carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class v;
        mpz_import(v.get_mpz_t(), limbs, -1, sizeof(std::uint64_t), 0, 0, &buf[i * limbs]);
        v += carry;
        if (v >= half) {
            v -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        r[i] = sign < 0 ? mpz_class(-v) : v;
    }
    return BigPoly(std::move(r));
}

BigPoly operator*(const BigPoly& a, const BigPoly& b) {
    if (std::min(a.c_.size(), b.c_.size()) < kKroneckerThreshold) return multiply_schoolbook(a, b);
    return multiply_kronecker(a, b);
}

mpz_class BigPoly::content() const {
    mpz_class g = 0;
    for (const auto& v : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

BigPoly BigPoly::divexact(const mpz_class& k) const {
    if (k == 1) return *this;
    std::vector<mpz_class> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i)
        mpz_divexact(r[i].get_mpz_t(), c_[i].get_mpz_t(), k.get_mpz_t());
    return BigPoly(std::move(r));
}

BigPoly BigPoly::primitive_part() const {
    if (is_zero()) return {};
    mpz_class g = content();
    if (lead() < 0) g = -g;
    return divexact(g);
}

BigPoly BigPoly::divexact(const BigPoly& a, const BigPoly& b) {
    if (b.is_zero()) throw DivisionByZeroFunction("polynomial division by zero");
    if (b.degree() == 0) return a.divexact(b.lead());
    if (a.degree() < b.degree()) return {};
    std::vector<mpz_class> rem = a.c_;
    const auto db = static_cast<std::size_t>(b.degree());
    std::vector<mpz_class> q(rem.size() - db);
    for (std::size_t k = q.size(); k-- > 0;) {
        mpz_class& top = rem[k + db];
        if (top == 0) continue;
        mpz_divexact(q[k].get_mpz_t(), top.get_mpz_t(), b.lead().get_mpz_t());
        for (std::size_t j = 0; j <= db; ++j)
            mpz_submul(rem[k + j].get_mpz_t(), q[k].get_mpz_t(), b.c_[j].get_mpz_t());
    }
    return BigPoly(std::move(q));
}

BigPoly BigPoly::pseudo_remainder(const BigPoly& a, const BigPoly& b) {
    if (b.is_zero()) throw DivisionByZeroFunction("pseudo-remainder by zero");
    if (a.degree() < b.degree()) return a;
    const auto db = static_cast<std::size_t>(b.degree());
    const mpz_class& lc = b.lead();
    std::vector<mpz_class> r = a.c_;
    long steps = a.degree() - b.degree() + 1;
    while (r.size() > db && !r.empty()) {
        const mpz_class top = r.back();
        const std::size_t shift = r.size() - 1 - db;
        for (auto& v : r) v *= lc;
        for (std::size_t j = 0; j <= db; ++j)
            mpz_submul(r[shift + j].get_mpz_t(), top.get_mpz_t(), b.c_[j].get_mpz_t());
        --steps;
        while (!r.empty() && r.back() == 0) r.pop_back();
    }
    if (steps > 0) {
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), lc.get_mpz_t(), static_cast<unsigned long>(steps));
        for (auto& v : r) v *= scale;
    }
    return BigPoly(std::move(r));
}

mpq_class BigPoly::evaluate(const mpq_class& z) const {
    mpq_class acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
    return acc;
}

std::string BigPoly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        mpz_class mag = abs(c_[i]);
        if (out.empty())
            out += c_[i] < 0 ? "-" : "";
        else
            out += c_[i] < 0 ? " - " : " + ";
        if (mag != 1 || i == 0) out += mag.get_str();
        if (i > 0) {
            if (mag != 1) out += "*";
            out += "z";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

BigPoly gcd(const BigPoly& a, const BigPoly& b) {
    if (a.is_zero() && b.is_zero()) return {};
    if (a.is_zero()) return b.primitive_part() * b.content();
    if (b.is_zero()) return a.primitive_part() * a.content();

    const mpz_class ca = a.content();
    const mpz_class cb = b.content();
    mpz_class d;
    mpz_gcd(d.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());

    BigPoly x = a.divexact(ca);
    BigPoly y = b.divexact(cb);
    if (x.degree() < y.degree()) std::swap(x, y);

    mpz_class g = 1;
    mpz_class h = 1;
    while (true) {
        const long delta = x.degree() - y.degree();
        BigPoly r = BigPoly::pseudo_remainder(x, y);
        if (r.is_zero()) break;
        if (r.degree() == 0) {
            y = BigPoly::constant(1);
            break;
        }
        mpz_class hd;
        mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
        x = std::move(y);
        y = r.divexact(g * hd);
        g = x.lead();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            mpz_class gd, hd1;
            mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
            mpz_pow_ui(hd1.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), gd.get_mpz_t(), hd1.get_mpz_t());
        }
    }
    return y.primitive_part() * d;
}

// ---------------------------------------------------------------------------

RationalFunction1D::RationalFunction1D(BigPoly num, BigPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
}

RationalFunction1D RationalFunction1D::constant(const mpq_class& q) {
    if (q == 0) return RationalFunction1D();
    return RationalFunction1D(BigPoly::constant(q.get_num()), BigPoly::constant(q.get_den()),
                              Reduced{});
}

void RationalFunction1D::canonicalize() {
    if (den_.is_zero()) throw DivisionByZeroFunction("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = BigPoly::constant(1);
        return;
    }
    const BigPoly g = gcd(num_, den_);
    if (!g.is_one()) {
        num_ = BigPoly::divexact(num_, g);
        den_ = BigPoly::divexact(den_, g);
    }
    if (den_.lead() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

long RationalFunction1D::degree() const noexcept {
    return std::max({num_.degree(), den_.degree(), 0L});
}

RationalFunction1D operator+(const RationalFunction1D& a, const RationalFunction1D& b) {
    if (a.den_ == b.den_) {
        if (a.den_.is_one()) return RationalFunction1D(a.num_ + b.num_, a.den_, RationalFunction1D::Reduced{});
        return RationalFunction1D(a.num_ + b.num_, a.den_);
    }
    const BigPoly g = gcd(a.den_, b.den_);
    const BigPoly bd = BigPoly::divexact(b.den_, g);
    const BigPoly ad = BigPoly::divexact(a.den_, g);
    return RationalFunction1D(a.num_ * bd + b.num_ * ad, a.den_ * bd);
}

RationalFunction1D operator-(const RationalFunction1D& a) {
    return RationalFunction1D(-a.num_, a.den_, RationalFunction1D::Reduced{});
}

RationalFunction1D operator-(const RationalFunction1D& a, const RationalFunction1D& b) {
    return a + (-b);
}

RationalFunction1D operator*(const RationalFunction1D& a, const RationalFunction1D& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction1D();
    if (a.den_.is_one() && b.den_.is_one())
        return RationalFunction1D(a.num_ * b.num_, a.den_, RationalFunction1D::Reduced{});
    // Cross cancellation keeps the result in lowest terms.
    const BigPoly g1 = b.den_.is_one() ? BigPoly::constant(1) : gcd(a.num_, b.den_);
    const BigPoly g2 = a.den_.is_one() ? BigPoly::constant(1) : gcd(b.num_, a.den_);
    BigPoly num = BigPoly::divexact(a.num_, g1) * BigPoly::divexact(b.num_, g2);
    BigPoly den = BigPoly::divexact(a.den_, g2) * BigPoly::divexact(b.den_, g1);
    if (den.lead() < 0) {
        num = -num;
        den = -den;
    }
    return RationalFunction1D(std::move(num), std::move(den), RationalFunction1D::Reduced{});
}

RationalFunction1D operator/(const RationalFunction1D& a, const RationalFunction1D& b) {
    if (b.is_zero()) throw DivisionByZeroFunction("division by the zero function");
    BigPoly num = b.den_;
    BigPoly den = b.num_;
    if (den.lead() < 0) {
        num = -num;
        den = -den;
    }
    return a * RationalFunction1D(std::move(num), std::move(den), RationalFunction1D::Reduced{});
}

mpq_class RationalFunction1D::evaluate(const mpq_class& z) const {
    const mpq_class d = den_.evaluate(z);
    if (d == 0) throw DivisionByZeroFunction("denominator vanishes at z = " + z.get_str());
    mpq_class v = num_.evaluate(z) / d;
    v.canonicalize();
    return v;
}

std::string RationalFunction1D::to_string() const {
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalFunction1D rf_arith(const RationalFunction1D& a, const RationalFunction1D& b, ArithOp op) {
    switch (op) {
        case ArithOp::add:
            return a + b;
        case ArithOp::sub:
            return a - b;
        case ArithOp::mul:
            return a * b;
        case ArithOp::div:
            return a / b;
    }
    return {};
}

// ---------------------------------------------------------------------------

const char* ScalarTraits<RationalFunction1D>::check_log(const RationalFunction1D&) {
    throw NonRationalEquation("log is not a rational operation");
}

RationalFunction1D ScalarTraits<RationalFunction1D>::log(const RationalFunction1D&) {
    throw NonRationalEquation("log is not a rational operation");
}

RationalFunction1D ScalarTraits<RationalFunction1D>::exp(const RationalFunction1D&) {
    throw NonRationalEquation("exp is not a rational operation");
}

const char* ScalarTraits<RationalFunction1D>::check_pow(const RationalFunction1D& base,
                                                        const mpq_class& e) {
    if (e.get_den() != 1) throw NonRationalEquation("fractional power is not a rational operation");
    if (e < 0 && base.is_zero()) return "zero raised to a negative power";
    return nullptr;
}

RationalFunction1D ScalarTraits<RationalFunction1D>::pow(const RationalFunction1D& base,
                                                         const Node& n) {
    if (n.exact.get_den() != 1) throw NonRationalEquation("fractional power is not a rational operation");
    mpz_class e = abs(n.exact.get_num());
    RationalFunction1D result = RationalFunction1D::constant(1);
    RationalFunction1D square = base;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = result * square;
        e >>= 1;
        if (e > 0) square = square * square;
    }
    if (n.exact < 0) result = RationalFunction1D::constant(1) / result;
    return result;
}

}  // namespace quadlin

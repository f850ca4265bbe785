#include "quadlin/expr.hpp"

#include <cctype>
#include <sstream>

namespace quadlin {

std::string DomainError::format(const std::string& what, const std::string& node,
                                const std::vector<double>& point) {
    std::ostringstream os;
    os.precision(17);
    os << "domain error: " << what << " at node " << node;
    if (!point.empty()) {
        os << " at point (";
        for (std::size_t i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
        os << ")";
    }
    return os.str();
}

std::string_view site_name(Site s) {
    switch (s) {
        case Site::u00: return "u00";
        case Site::u10: return "u10";
        case Site::u01: return "u01";
        case Site::u11: return "u11";
    }
    return "?";
}

Expression make_expression(std::vector<Node> nodes, int root) {
    return Expression(std::make_shared<const std::vector<Node>>(std::move(nodes)), root);
}

namespace {

Node constant_node(const mpq_class& v) {
    Node n;
    n.kind = NodeKind::Constant;
    n.exact = v;
    n.exact.canonicalize();
    n.approx = n.exact.get_d();
    return n;
}

// Appends the nodes of `e` to `out`, returning the new index of its root.
int splice(std::vector<Node>& out, const Expression& e) {
    const int offset = static_cast<int>(out.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        Node n = e.node(static_cast<int>(i));
        if (n.lhs >= 0) n.lhs += offset;
        if (n.rhs >= 0) n.rhs += offset;
        out.push_back(std::move(n));
    }
    return e.root() + offset;
}

bool is_binary(NodeKind k) {
    return k == NodeKind::Add || k == NodeKind::Sub || k == NodeKind::Mul || k == NodeKind::Div;
}

bool is_unary(NodeKind k) {
    return k == NodeKind::Neg || k == NodeKind::Exp || k == NodeKind::Log;
}

}  // namespace

Expression Expression::variable(Site s) {
    Node n;
    n.kind = NodeKind::Variable;
    n.site = s;
    return make_expression({n}, 0);
}

Expression Expression::constant(const mpq_class& value) {
    return make_expression({constant_node(value)}, 0);
}

Expression Expression::binary(NodeKind kind, const Expression& lhs, const Expression& rhs) {
    if (!is_binary(kind)) throw std::invalid_argument("Expression::binary: not a binary kind");
    std::vector<Node> nodes;
    nodes.reserve(lhs.size() + rhs.size() + 1);
    Node n;
    n.kind = kind;
    n.lhs = splice(nodes, lhs);
    n.rhs = splice(nodes, rhs);
    nodes.push_back(n);
    const int root = static_cast<int>(nodes.size()) - 1;
    return make_expression(std::move(nodes), root);
}

Expression Expression::unary(NodeKind kind, const Expression& operand) {
    if (!is_unary(kind)) throw std::invalid_argument("Expression::unary: not a unary kind");
    std::vector<Node> nodes;
    nodes.reserve(operand.size() + 1);
    Node n;
    n.kind = kind;
    n.lhs = splice(nodes, operand);
    nodes.push_back(n);
    const int root = static_cast<int>(nodes.size()) - 1;
    return make_expression(std::move(nodes), root);
}

Expression Expression::power(const Expression& base, const mpq_class& exponent) {
    std::vector<Node> nodes;
    nodes.reserve(base.size() + 1);
    Node n = constant_node(exponent);
    n.kind = NodeKind::Pow;
    n.lhs = splice(nodes, base);
    nodes.push_back(n);
    const int root = static_cast<int>(nodes.size()) - 1;
    return make_expression(std::move(nodes), root);
}

std::size_t Expression::interior_count() const {
    std::size_t count = 0;
    for (const Node& n : *nodes_)
        if (n.kind != NodeKind::Variable && n.kind != NodeKind::Constant) ++count;
    return count;
}

bool Expression::uses(Site s) const {
    for (const Node& n : *nodes_)
        if (n.kind == NodeKind::Variable && n.site == s) return true;
    return false;
}

bool Expression::uses_any_site() const {
    for (const Node& n : *nodes_)
        if (n.kind == NodeKind::Variable) return true;
    return false;
}

bool Expression::structurally_equal(const Expression& other) const {
    // Compare by simultaneous traversal; node numbering may differ.
    struct Walker {
        const Expression& a;
        const Expression& b;
        bool same(int i, int j) const {
            const Node& x = a.node(i);
            const Node& y = b.node(j);
            if (x.kind != y.kind) return false;
            switch (x.kind) {
                case NodeKind::Variable: return x.site == y.site;
                case NodeKind::Constant: return x.exact == y.exact;
                case NodeKind::Pow: return x.exact == y.exact && same(x.lhs, y.lhs);
                case NodeKind::Neg:
                case NodeKind::Exp:
                case NodeKind::Log: return same(x.lhs, y.lhs);
                default: return same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
            }
        }
    };
    return Walker{*this, other}.same(root_, other.root_);
}

std::string format_decimal(const mpq_class& value) {
    mpz_class den = value.get_den();
    unsigned twos = 0;
    unsigned fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return "(" + value.get_num().get_str() + "/" + value.get_den().get_str() + ")";

    const unsigned digits = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class scaled = value.get_num() * scale / value.get_den();
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string s = scaled.get_str();
    if (digits > 0) {
        if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
        s.insert(s.size() - digits, ".");
    }
    return negative ? "-" + s : s;
}

namespace {

std::string exponent_string(const mpq_class& e) {
    if (e.get_den() == 1) {
        if (e >= 0) return e.get_num().get_str();
        return "(" + e.get_num().get_str() + ")";
    }
    return "(" + e.get_num().get_str() + "/" + e.get_den().get_str() + ")";
}

}  // namespace

std::string Expression::to_string(int index) const {
    const Node& n = node(index);
    switch (n.kind) {
        case NodeKind::Variable: return std::string(site_name(n.site));
        case NodeKind::Constant: {
            std::string s = format_decimal(n.exact);
            return n.exact < 0 ? "(" + s + ")" : s;
        }
        case NodeKind::Add: return "(" + to_string(n.lhs) + " + " + to_string(n.rhs) + ")";
        case NodeKind::Sub: return "(" + to_string(n.lhs) + " - " + to_string(n.rhs) + ")";
        case NodeKind::Mul: return "(" + to_string(n.lhs) + " * " + to_string(n.rhs) + ")";
        case NodeKind::Div: return "(" + to_string(n.lhs) + " / " + to_string(n.rhs) + ")";
        case NodeKind::Neg: {
            // A bare literal after '-' would fold into a negative constant.
            std::string child = to_string(n.lhs);
            if (node(n.lhs).kind == NodeKind::Constant && node(n.lhs).exact >= 0)
                child = "(" + child + ")";
            return "(-" + child + ")";
        }
        case NodeKind::Pow: return "(" + to_string(n.lhs) + "^" + exponent_string(n.exact) + ")";
        case NodeKind::Exp: return "exp(" + to_string(n.lhs) + ")";
        case NodeKind::Log: return "log(" + to_string(n.lhs) + ")";
    }
    return "?";
}

std::string Expression::to_string() const { return to_string(root_); }

// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(std::string_view text, const ParamMap& params, ParseOptions options)
        : text_(text), params_(params), options_(options) {}

    Expression run() {
        const int root = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input");
        return make_expression(std::move(nodes_), root);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw SyntaxError(pos_, std::string("'") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    int push(Node n) {
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    int push_binary(NodeKind kind, int lhs, int rhs) {
        Node n;
        n.kind = kind;
        n.lhs = lhs;
        n.rhs = rhs;
        return push(n);
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = push_binary(NodeKind::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = push_binary(NodeKind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = push_binary(NodeKind::Mul, lhs, parse_factor());
            else if (accept('/'))
                lhs = push_binary(NodeKind::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    int parse_factor() {
        const int base = parse_atom();
        if (!accept('^')) return base;
        Node n = constant_node(parse_exponent());
        n.kind = NodeKind::Pow;
        n.lhs = base;
        return push(n);
    }

    mpz_class parse_integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw SyntaxError(pos_, "integer");
        return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
    }

    mpq_class parse_exponent() {
        if (accept('(')) {
            const bool negative = accept('-');
            mpz_class num = parse_integer();
            mpz_class den = 1;
            if (accept('/')) {
                const std::size_t at = pos_;
                den = parse_integer();
                if (den == 0) throw SyntaxError(at, "nonzero denominator");
            }
            expect(')');
            mpq_class q(negative ? mpz_class(-num) : num, den);
            q.canonicalize();
            return q;
        }
        const bool negative = accept('-');
        mpz_class num = parse_integer();
        return mpq_class(negative ? mpz_class(-num) : num);
    }

    mpq_class parse_number() {
        // digits ('.' digits)? ([eE] [+-]? digits)?
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            return std::string(text_.substr(s, pos_ - s));
        };
        std::string whole = digits();
        std::string frac;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            frac = digits();
            if (frac.empty()) throw SyntaxError(pos_, "digit");
        }
        long exponent = 0;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            bool negative = false;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                negative = text_[pos_++] == '-';
            const std::string e = digits();
            if (e.empty() || e.size() > 6) throw SyntaxError(pos_, "exponent digits");
            exponent = std::stol(e) * (negative ? -1 : 1);
        }
        if (whole.empty()) throw SyntaxError(start, "number");
        mpz_class mantissa(whole + frac, 10);
        exponent -= static_cast<long>(frac.size());
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
        mpq_class q = exponent >= 0 ? mpq_class(mantissa * scale) : mpq_class(mantissa, scale);
        q.canonicalize();
        return q;
    }

    int parse_atom() {
        const char c = peek();
        if (c == '\0') throw SyntaxError(pos_, "operand");
        if (std::isdigit(static_cast<unsigned char>(c))) return push(constant_node(parse_number()));
        if (c == '(') {
            ++pos_;
            const int inner = parse_expr();
            expect(')');
            return inner;
        }
        if (c == '-') {
            ++pos_;
            if (std::isdigit(static_cast<unsigned char>(peek())))
                return push(constant_node(-parse_number()));
            Node n;
            n.kind = NodeKind::Neg;
            n.lhs = parse_atom();
            return push(n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw SyntaxError(pos_, "operand");
    }

    int parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        if (name == "exp" || name == "log") {
            expect('(');
            Node n;
            n.kind = name == "exp" ? NodeKind::Exp : NodeKind::Log;
            n.lhs = parse_expr();
            expect(')');
            return push(n);
        }
        for (Site s : {Site::u00, Site::u10, Site::u01, Site::u11}) {
            if (name != site_name(s)) continue;
            if (s == Site::u11 && !options_.allow_u11) throw UnknownIdentifier(name);
            Node n;
            n.kind = NodeKind::Variable;
            n.site = s;
            return push(n);
        }
        const auto it = params_.find(name);
        if (it == params_.end()) throw UnknownIdentifier(name);
        if (!std::isfinite(it->second)) throw UnboundParam(name);
        return push(constant_node(mpq_class(it->second)));
    }

    std::string_view text_;
    const ParamMap& params_;
    ParseOptions options_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;
};

Expression parse(std::string_view text, const ParamMap& params, ParseOptions options) {
    for (std::size_t i = 0; i < text.size(); ++i)
        if (static_cast<unsigned char>(text[i]) > 127) throw SyntaxError(i, "ASCII character");
    return Parser(text, params, options).run();
}

Rationality classify_rational(const Expression& e) {
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Node& n = e.node(static_cast<int>(i));
        if (n.kind == NodeKind::Exp || n.kind == NodeKind::Log) return Rationality::non_rational;
        if (n.kind == NodeKind::Pow && n.exact.get_den() != 1) return Rationality::non_rational;
    }
    return Rationality::rational;
}

const char* ScalarTraits<double>::check_pow(double base, const mpq_class& e) {
    if (base == 0.0 && e < 0) return "zero raised to a negative power";
    if (e.get_den() != 1 && base < 0.0) return "negative base with fractional exponent";
    return nullptr;
}

double evaluate(const Expression& e, const std::array<double, 3>& point) {
    return evaluate<double>(e, std::span<const double>(point));
}

double evaluate_relation(const Expression& e, const std::array<double, 4>& point) {
    return evaluate<double>(e, std::span<const double>(point));
}

Dual eval_with_partials(const Expression& e, const std::array<double, 3>& point) {
    const std::array<Dual, 3> seeded{Dual::seed(point[0], 0), Dual::seed(point[1], 1),
                                     Dual::seed(point[2], 2)};
    return evaluate<Dual>(e, std::span<const Dual>(seeded));
}

}  // namespace quadlin

#include "nambu/parse.hpp"

#include <cctype>
#include <memory>
#include <optional>

namespace nambu {

namespace {

enum class Tok { number, coordinate, covector, vector, plus, minus, star, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    SourcePos pos;
    Rational value;   // number
    int index = 0;    // 1-based coordinate/basis index
    bool integral = false;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            SourcePos pos{line_, col_};
            if (eof()) {
                out.push_back({Tok::end, pos, Rational(0), 0, false});
                return out;
            }
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(lex_number(pos));
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                out.push_back(lex_ident(pos));
            } else {
                advance();
                switch (c) {
                    case '+': out.push_back({Tok::plus, pos, Rational(0), 0, false}); break;
                    case '-': out.push_back({Tok::minus, pos, Rational(0), 0, false}); break;
                    case '*': out.push_back({Tok::star, pos, Rational(0), 0, false}); break;
                    case '^': out.push_back({Tok::caret, pos, Rational(0), 0, false}); break;
                    case '(': out.push_back({Tok::lparen, pos, Rational(0), 0, false}); break;
                    case ')': out.push_back({Tok::rparen, pos, Rational(0), 0, false}); break;
                    default:
                        throw ParseError(std::string("unexpected character '") + c + "'", pos);
                }
            }
        }
    }

private:
    bool eof() const { return i_ >= s_.size(); }
    char peek(size_t ahead = 0) const { return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0'; }
    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    std::string digits() {
        std::string d;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            d += peek();
            advance();
        }
        return d;
    }

    Token lex_number(SourcePos pos) {
        std::string num = digits();
        // Rational literal: optional "/ digits" (the only use of '/').
        size_t save_i = i_;
        int save_line = line_, save_col = col_;
        skip_ws();
        if (!eof() && peek() == '/') {
            advance();
            skip_ws();
            if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("expected digits after '/' in rational literal",
                                 SourcePos{line_, col_});
            std::string den = digits();
            Rational v = Rational::from_string(num + "/" + den);
            return {Tok::number, pos, v, 0, v.denominator() == 1};
        }
        i_ = save_i;
        line_ = save_line;
        col_ = save_col;
        return {Tok::number, pos, Rational::from_string(num), 0, true};
    }

    Token lex_ident(SourcePos pos) {
        std::string word;
        while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) {
            word += peek();
            advance();
        }
        std::string idx = digits();
        if (idx.empty())
            throw ParseError("unknown symbol '" + word + "' (expected x<i>, dx<i> or e<i>)", pos);
        int index = 0;
        try {
            index = std::stoi(idx);
        } catch (...) {
            throw ParseError("index too large in '" + word + idx + "'", pos);
        }
        if (index < 1) throw ParseError("indices are 1-based in '" + word + idx + "'", pos);
        Tok kind;
        if (word == "x")
            kind = Tok::coordinate;
        else if (word == "dx")
            kind = Tok::covector;
        else if (word == "e")
            kind = Tok::vector;
        else
            throw ParseError("unknown symbol '" + word + idx + "' (expected x<i>, dx<i> or e<i>)",
                             pos);
        return {kind, pos, Rational(0), index, false};
    }

    const std::string& s_;
    size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

// AST per the grammar; elaboration happens in a second pass.
struct Expr {
    enum class Op { number, coordinate, covector, vector, neg, add, sub, mul, wedge, pow };
    Op op;
    SourcePos pos;
    Rational value;       // number
    int index = 0;        // 1-based basis index
    unsigned exponent = 0;
    std::unique_ptr<Expr> lhs, rhs;
};
using ExprPtr = std::unique_ptr<Expr>;

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ExprPtr run() {
        ExprPtr e = expr();
        if (cur().kind != Tok::end) throw ParseError("unexpected trailing input", cur().pos);
        return e;
    }

private:
    const Token& cur() const { return toks_[i_]; }
    const Token& ahead() const { return toks_[std::min(i_ + 1, toks_.size() - 1)]; }
    Token eat() { return toks_[i_++]; }

    static ExprPtr make(Expr::Op op, SourcePos pos) {
        auto e = std::make_unique<Expr>();
        e->op = op;
        e->pos = pos;
        return e;
    }

    ExprPtr expr() {
        ExprPtr lhs = wedge_level();
        while (cur().kind == Tok::plus || cur().kind == Tok::minus) {
            Token t = eat();
            ExprPtr rhs = wedge_level();
            ExprPtr node = make(t.kind == Tok::plus ? Expr::Op::add : Expr::Op::sub, t.pos);
            node->lhs = std::move(lhs);
            node->rhs = std::move(rhs);
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprPtr wedge_level() {
        ExprPtr lhs = mul_level();
        while (cur().kind == Tok::caret) {
            Token t = eat();
            ExprPtr rhs = mul_level();
            ExprPtr node = make(Expr::Op::wedge, t.pos);
            node->lhs = std::move(lhs);
            node->rhs = std::move(rhs);
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprPtr mul_level() {
        ExprPtr lhs = unary();
        while (cur().kind == Tok::star) {
            Token t = eat();
            ExprPtr rhs = unary();
            ExprPtr node = make(Expr::Op::mul, t.pos);
            node->lhs = std::move(lhs);
            node->rhs = std::move(rhs);
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (cur().kind == Tok::minus) {
            Token t = eat();
            ExprPtr node = make(Expr::Op::neg, t.pos);
            node->lhs = unary();
            return node;
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        // A caret followed by an integer literal is a scalar power; any other
        // caret belongs to the wedge level.
        if (cur().kind == Tok::caret && ahead().kind == Tok::number) {
            Token t = eat();
            Token expo = eat();
            if (!expo.integral || expo.value.sign() < 0)
                throw ParseError("exponent must be a nonnegative integer", expo.pos);
            ExprPtr node = make(Expr::Op::pow, t.pos);
            node->lhs = std::move(base);
            node->exponent = static_cast<unsigned>(expo.value.numerator().get_ui());
            return node;
        }
        return base;
    }

    ExprPtr atom() {
        Token t = eat();
        switch (t.kind) {
            case Tok::number: {
                ExprPtr e = make(Expr::Op::number, t.pos);
                e->value = t.value;
                return e;
            }
            case Tok::coordinate:
            case Tok::covector:
            case Tok::vector: {
                Expr::Op op = t.kind == Tok::coordinate ? Expr::Op::coordinate
                              : t.kind == Tok::covector ? Expr::Op::covector
                                                        : Expr::Op::vector;
                ExprPtr e = make(op, t.pos);
                e->index = t.index;
                return e;
            }
            case Tok::lparen: {
                ExprPtr e = expr();
                if (cur().kind != Tok::rparen) throw ParseError("expected ')'", cur().pos);
                eat();
                return e;
            }
            case Tok::end:
                throw ParseError("unexpected end of input", t.pos);
            default:
                throw ParseError("unexpected token", t.pos);
        }
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
};

// ---- elaboration ----------------------------------------------------------

int value_degree(const Value& v) {
    if (std::holds_alternative<Poly>(v)) return 0;
    if (std::holds_alternative<DiffForm>(v)) return std::get<DiffForm>(v).degree();
    return std::get<MultiVector>(v).degree();
}

bool value_is_zero(const Value& v) {
    if (std::holds_alternative<Poly>(v)) return std::get<Poly>(v).is_zero();
    if (std::holds_alternative<DiffForm>(v)) return std::get<DiffForm>(v).is_zero();
    return std::get<MultiVector>(v).is_zero();
}

std::string degree_label(const Value& v) {
    if (std::holds_alternative<Poly>(v)) return "scalar";
    if (std::holds_alternative<DiffForm>(v))
        return std::to_string(value_degree(v)) + "-form";
    return std::to_string(value_degree(v)) + "-vector";
}

class Elaborator {
public:
    Elaborator(int dim) : n_(dim) {
        if (dim < 1) throw std::invalid_argument("parse: dimension must be positive");
    }

    Value eval(const Expr& e) {
        switch (e.op) {
            case Expr::Op::number:
                return Poly::constant(n_, e.value);
            case Expr::Op::coordinate:
                check_index(e);
                return Poly::variable(n_, e.index - 1);
            case Expr::Op::covector: {
                check_index(e);
                return DiffForm::basis(n_, {e.index - 1});
            }
            case Expr::Op::vector: {
                check_index(e);
                return MultiVector::basis(n_, {e.index - 1});
            }
            case Expr::Op::neg:
                return negate(eval(*e.lhs));
            case Expr::Op::add:
            case Expr::Op::sub:
                return add_sub(e);
            case Expr::Op::mul:
                return multiply(e);
            case Expr::Op::wedge:
                return wedge_values(e);
            case Expr::Op::pow: {
                Value b = eval(*e.lhs);
                if (!std::holds_alternative<Poly>(b))
                    throw ParseError("power base must be a scalar, got a " + degree_label(b),
                                     e.pos);
                return std::get<Poly>(b).pow(e.exponent);
            }
        }
        throw ParseError("internal: unhandled node", e.pos);
    }

private:
    void check_index(const Expr& e) const {
        if (e.index > n_)
            throw ParseError("index " + std::to_string(e.index) +
                                 " exceeds the declared dimension " + std::to_string(n_),
                             e.pos);
    }

    static Value negate(Value v) {
        if (std::holds_alternative<Poly>(v)) return -std::get<Poly>(v);
        if (std::holds_alternative<DiffForm>(v)) return -std::get<DiffForm>(v);
        return -std::get<MultiVector>(v);
    }

    Value add_sub(const Expr& e) {
        Value a = eval(*e.lhs);
        Value b = eval(*e.rhs);
        bool sub = e.op == Expr::Op::sub;
        // Zero absorbs into anything; scalars promote to degree-0 values.
        if (value_is_zero(a) && !std::holds_alternative<Poly>(b))
            return sub ? negate(std::move(b)) : b;
        if (value_is_zero(b)) return a;
        if (std::holds_alternative<Poly>(a) && std::holds_alternative<Poly>(b))
            return sub ? std::get<Poly>(a) - std::get<Poly>(b)
                       : std::get<Poly>(a) + std::get<Poly>(b);
        if (a.index() != b.index())
            throw ParseError("cannot add a " + degree_label(a) + " and a " + degree_label(b),
                             e.pos);
        if (value_degree(a) != value_degree(b))
            throw ParseError("degree-inhomogeneous sum: a " + degree_label(a) + " plus a " +
                                 degree_label(b),
                             e.pos);
        if (std::holds_alternative<DiffForm>(a))
            return sub ? std::get<DiffForm>(a) - std::get<DiffForm>(b)
                       : std::get<DiffForm>(a) + std::get<DiffForm>(b);
        return sub ? std::get<MultiVector>(a) - std::get<MultiVector>(b)
                   : std::get<MultiVector>(a) + std::get<MultiVector>(b);
    }

    Value multiply(const Expr& e) {
        Value a = eval(*e.lhs);
        Value b = eval(*e.rhs);
        if (std::holds_alternative<Poly>(a) && std::holds_alternative<Poly>(b))
            return std::get<Poly>(a) * std::get<Poly>(b);
        if (std::holds_alternative<Poly>(a)) return scale(std::move(b), std::get<Poly>(a));
        if (std::holds_alternative<Poly>(b)) return scale(std::move(a), std::get<Poly>(b));
        throw ParseError("'*' needs at least one scalar factor; use '^' for the wedge product",
                         e.pos);
    }

    static Value scale(Value v, const Poly& g) {
        if (std::holds_alternative<DiffForm>(v)) return std::get<DiffForm>(v).scaled(g);
        return std::get<MultiVector>(v).scaled(g);
    }

    Value wedge_values(const Expr& e) {
        Value a = eval(*e.lhs);
        Value b = eval(*e.rhs);
        // Degree-0 factors act by multiplication.
        if (std::holds_alternative<Poly>(a) && std::holds_alternative<Poly>(b))
            return std::get<Poly>(a) * std::get<Poly>(b);
        if (std::holds_alternative<Poly>(a)) return scale(std::move(b), std::get<Poly>(a));
        if (std::holds_alternative<Poly>(b)) return scale(std::move(a), std::get<Poly>(b));
        if (a.index() != b.index())
            throw ParseError("cannot wedge a " + degree_label(a) + " with a " + degree_label(b),
                             e.pos);
        if (std::holds_alternative<DiffForm>(a))
            return wedge(std::get<DiffForm>(a), std::get<DiffForm>(b));
        return wedge(std::get<MultiVector>(a), std::get<MultiVector>(b));
    }

    int n_;
};

}  // namespace

Value parse_expression(const std::string& text, int dim, ValueKind expected) {
    Lexer lex(text);
    Parser parser(lex.run());
    ExprPtr ast = parser.run();
    Elaborator el(dim);
    Value v = el.eval(*ast);

    switch (expected) {
        case ValueKind::scalar:
            if (!std::holds_alternative<Poly>(v))
                throw ParseError("expected a scalar expression, got a " + degree_label(v),
                                 SourcePos{1, 1});
            return v;
        case ValueKind::form:
            if (std::holds_alternative<Poly>(v)) {
                DiffForm w(dim, 0);
                const Poly& p = std::get<Poly>(v);
                if (!p.is_zero()) w.add_term({}, p);
                return w;
            }
            if (!std::holds_alternative<DiffForm>(v))
                throw ParseError("expected a differential form, got a " + degree_label(v),
                                 SourcePos{1, 1});
            return v;
        case ValueKind::multivector:
            if (std::holds_alternative<Poly>(v)) {
                MultiVector w(dim, 0);
                const Poly& p = std::get<Poly>(v);
                if (!p.is_zero()) w.add_term({}, p);
                return w;
            }
            if (!std::holds_alternative<MultiVector>(v))
                throw ParseError("expected a multivector, got a " + degree_label(v),
                                 SourcePos{1, 1});
            return v;
    }
    throw std::logic_error("parse_expression: bad kind");
}

Poly parse_poly(const std::string& text, int dim) {
    return std::get<Poly>(parse_expression(text, dim, ValueKind::scalar));
}
DiffForm parse_form(const std::string& text, int dim) {
    return std::get<DiffForm>(parse_expression(text, dim, ValueKind::form));
}
MultiVector parse_multivector(const std::string& text, int dim) {
    return std::get<MultiVector>(parse_expression(text, dim, ValueKind::multivector));
}

// ---- serialization --------------------------------------------------------

namespace {

// Renders |coeff| * monomial; the sign is reported separately for joining.
std::string monomial_body(const Exponents& e, const Rational& c) {
    std::string body;
    Rational a = c.abs();
    bool unit = (a == Rational(1));
    bool any_var = false;
    for (unsigned x : e) any_var |= (x > 0);
    if (!unit || !any_var) body = a.str();
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!body.empty()) body += "*";
        body += "x" + std::to_string(i + 1);
        if (e[i] > 1) body += "^" + std::to_string(e[i]);
    }
    return body;
}

std::string join_signed(const std::vector<std::pair<int, std::string>>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i == 0) {
            if (parts[i].first < 0) out += "-";
        } else {
            out += parts[i].first < 0 ? " - " : " + ";
        }
        out += parts[i].second;
    }
    return out;
}

std::vector<std::pair<int, std::string>> poly_parts(const Poly& p) {
    // Graded-lex descending: leading term first.
    std::vector<std::pair<int, std::string>> parts;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
        parts.push_back({it->second.sign(), monomial_body(it->first, it->second)});
    return parts;
}

template <class Kind>
std::string serialize_exterior(const Alternating<Kind>& v, const char* basis_symbol) {
    if (v.is_zero()) return "0";
    std::vector<std::pair<int, std::string>> parts;
    for (const auto& [idx, coeff] : v.comps()) {
        std::string basis;
        for (size_t k = 0; k < idx.size(); ++k) {
            if (k > 0) basis += "^";
            basis += std::string(basis_symbol) + std::to_string(idx[k] + 1);
        }
        if (coeff.terms().size() == 1) {
            const auto& [e, c] = *coeff.terms().begin();
            std::string mono = monomial_body(e, c);
            std::string body;
            if (basis.empty()) {
                body = mono;
            } else if (mono == "1") {
                body = basis;
            } else {
                body = mono + "*" + basis;
            }
            parts.push_back({c.sign(), body});
        } else {
            std::string body = "(" + serialize(coeff) + ")";
            if (!basis.empty()) body += "*" + basis;
            parts.push_back({1, body});
        }
    }
    return join_signed(parts);
}

}  // namespace

std::string serialize(const Poly& p) {
    if (p.is_zero()) return "0";
    return join_signed(poly_parts(p));
}

std::string serialize(const DiffForm& w) { return serialize_exterior(w, "dx"); }
std::string serialize(const MultiVector& p) { return serialize_exterior(p, "e"); }

std::string serialize(const Value& v) {
    if (std::holds_alternative<Poly>(v)) return serialize(std::get<Poly>(v));
    if (std::holds_alternative<DiffForm>(v)) return serialize(std::get<DiffForm>(v));
    return serialize(std::get<MultiVector>(v));
}

}  // namespace nambu

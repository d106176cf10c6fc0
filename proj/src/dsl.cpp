#include "fracwin/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "fracwin/numeric.hpp"

namespace fracwin::dsl {

namespace detail {

enum class Kind { Literal, Var, Time, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Exp, Abs };

struct Node {
    Kind kind = Kind::Literal;
    double literal = 0.0;   // Literal value; for Pow, the (literal) exponent
    int var = 0;            // Var component, 0-based
    Func func = Func::Sin;
    std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Node>;

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Abs: return "abs";
    }
    return "?";
}

}  // namespace detail

using detail::Func;
using detail::Kind;
using detail::Node;
using detail::NodePtr;

struct ExprAccess {
    static Expr make(NodePtr root, int dim) {
        Expr e;
        e.root_ = std::move(root);
        e.dim_ = dim;
        return e;
    }
};

std::string Diagnostic::render() const {
    std::ostringstream os;
    os << "line " << pos.line << ", col " << pos.column << ": " << message;
    if (!expected.empty()) {
        os << " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) os << ", ";
            os << expected[i];
        }
        os << ")";
    }
    return os.str();
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Error };

struct Token {
    Tok kind = Tok::End;
    double number = 0.0;
    std::string text;
    SourcePos pos;
};

struct Lexer {
    std::string_view src;
    std::size_t i = 0;
    SourcePos pos;          // position of the NEXT unread character
    Diagnostic error;
    bool failed = false;

    explicit Lexer(std::string_view s, SourcePos start = {1, 1}) : src(s), pos(start) {}

    void advance() {
        if (src[i] == '\n') {
            ++pos.line;
            pos.column = 1;
        } else {
            ++pos.column;
        }
        ++i;
    }

    Token fail(SourcePos at, std::string message) {
        failed = true;
        error = Diagnostic{at, std::move(message), {}};
        return Token{Tok::Error, 0.0, "", at};
    }

    Token next() {
        while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) advance();
        const SourcePos at = pos;
        if (i >= src.size()) return Token{Tok::End, 0.0, "", at};

        const char c = src[i];
        switch (c) {
            case '+': advance(); return Token{Tok::Plus, 0.0, "+", at};
            case '-': advance(); return Token{Tok::Minus, 0.0, "-", at};
            case '*': advance(); return Token{Tok::Star, 0.0, "*", at};
            case '/': advance(); return Token{Tok::Slash, 0.0, "/", at};
            case '^': advance(); return Token{Tok::Caret, 0.0, "^", at};
            case '(': advance(); return Token{Tok::LParen, 0.0, "(", at};
            case ')': advance(); return Token{Tok::RParen, 0.0, ")", at};
            default: break;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            return lex_number(at);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string text;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                text += src[i];
                advance();
            }
            return Token{Tok::Ident, 0.0, std::move(text), at};
        }
        return fail(at, std::string("unexpected character '") + c + "'");
    }

    Token lex_number(SourcePos at) {
        const std::size_t start = i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
        if (i < src.size() && src[i] == '.') {
            advance();
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
        }
        if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
            const std::size_t mark = i;
            const SourcePos mark_pos = pos;
            advance();
            if (i < src.size() && (src[i] == '+' || src[i] == '-')) advance();
            if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i]))) {
                i = mark;       // bare 'e' is not part of the number
                pos = mark_pos;
            } else {
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
            }
        }
        // no implicit multiplication: "2x1" is rejected at the lexical level
        if (i < src.size() &&
            (std::isalpha(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
            return fail(pos, "identifier immediately follows a number (implicit "
                             "multiplication is not supported; write '*' explicitly)");
        }
        const std::string text(src.substr(start, i - start));
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || !std::isfinite(v))
            return fail(at, "number literal '" + text + "' is out of range");
        return Token{Tok::Number, v, text, at};
    }
};

constexpr int kMaxDepth = 256;

struct ExprParser {
    Lexer lex;
    Token tok;
    Diagnostic diag;
    bool failed = false;
    int dim = 0;
    int depth = 0;

    ExprParser(std::string_view src, int dim_, SourcePos start) : lex(src, start), dim(dim_) {
        bump();
    }

    void bump() {
        tok = lex.next();
        if (lex.failed && !failed) {
            failed = true;
            diag = lex.error;
        }
    }

    NodePtr fail(std::string message, std::vector<std::string> expected = {}) {
        if (!failed) {
            failed = true;
            diag = Diagnostic{tok.pos, std::move(message), std::move(expected)};
        }
        return nullptr;
    }

    static NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    struct DepthGuard {
        ExprParser* p;
        bool ok;
        explicit DepthGuard(ExprParser* parser) : p(parser), ok(++p->depth <= kMaxDepth) {}
        ~DepthGuard() { --p->depth; }
    };

    NodePtr parse_expr() {
        DepthGuard guard(this);
        if (!guard.ok) return fail("expression too deeply nested");
        NodePtr lhs = parse_term();
        if (!lhs) return nullptr;
        while (tok.kind == Tok::Plus || tok.kind == Tok::Minus) {
            const Kind k = (tok.kind == Tok::Plus) ? Kind::Add : Kind::Sub;
            bump();
            NodePtr rhs = parse_term();
            if (!rhs) return nullptr;
            lhs = make(k, lhs, rhs);
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        if (!lhs) return nullptr;
        while (tok.kind == Tok::Star || tok.kind == Tok::Slash) {
            const Kind k = (tok.kind == Tok::Star) ? Kind::Mul : Kind::Div;
            bump();
            NodePtr rhs = parse_unary();
            if (!rhs) return nullptr;
            lhs = make(k, lhs, rhs);
        }
        return lhs;
    }

    // unary minus binds looser than '^': -x^2 is -(x^2)
    NodePtr parse_unary() {
        DepthGuard guard(this);
        if (!guard.ok) return fail("expression too deeply nested");
        if (tok.kind == Tok::Minus) {
            bump();
            NodePtr inner = parse_unary();
            if (!inner) return nullptr;
            return make(Kind::Neg, inner);
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!base) return nullptr;
        if (tok.kind != Tok::Caret) return base;
        bump();
        double exponent = 0.0;
        if (!parse_exponent(exponent)) return nullptr;
        auto n = std::make_shared<Node>();
        n->kind = Kind::Pow;
        n->a = base;
        n->literal = exponent;
        return n;
    }

    // exponents are literal chains, right-associative: x^2^3 is x^(2^3)
    bool parse_exponent(double& out) {
        bool negate = false;
        while (tok.kind == Tok::Minus) {
            negate = !negate;
            bump();
        }
        if (tok.kind != Tok::Number) {
            fail("exponent must be a numeric literal", {"number"});
            return false;
        }
        double v = tok.number;
        bump();
        if (tok.kind == Tok::Caret) {
            bump();
            double sub = 0.0;
            if (!parse_exponent(sub)) return false;
            v = std::pow(v, sub);
        }
        if (negate) v = -v;
        if (!std::isfinite(v)) {
            fail("exponent overflows");
            return false;
        }
        out = v;
        return true;
    }

    NodePtr parse_atom() {
        DepthGuard guard(this);
        if (!guard.ok) return fail("expression too deeply nested");
        switch (tok.kind) {
            case Tok::Number: {
                auto n = std::make_shared<Node>();
                n->kind = Kind::Literal;
                n->literal = tok.number;
                bump();
                return n;
            }
            case Tok::LParen: {
                bump();
                NodePtr inner = parse_expr();
                if (!inner) return nullptr;
                if (tok.kind != Tok::RParen) return fail("unbalanced parenthesis", {")"});
                bump();
                return inner;
            }
            case Tok::Ident:
                return parse_ident();
            case Tok::End:
                return fail("unexpected end of expression",
                            {"number", "variable", "function", "'('"});
            default:
                return fail("unexpected token '" + tok.text + "'",
                            {"number", "variable", "function", "'('"});
        }
    }

    NodePtr parse_ident() {
        const Token ident = tok;
        if (ident.text == "t") {
            bump();
            return make(Kind::Time);
        }
        if (ident.text.size() >= 2 && ident.text[0] == 'x' &&
            std::all_of(ident.text.begin() + 1, ident.text.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            const long idx = std::strtol(ident.text.c_str() + 1, nullptr, 10);
            if (idx < 1 || idx > dim)
                return fail("variable " + ident.text + " out of range for dimension " +
                            std::to_string(dim));
            bump();
            auto n = std::make_shared<Node>();
            n->kind = Kind::Var;
            n->var = static_cast<int>(idx - 1);
            return n;
        }
        Func f;
        if (ident.text == "sin") f = Func::Sin;
        else if (ident.text == "cos") f = Func::Cos;
        else if (ident.text == "exp") f = Func::Exp;
        else if (ident.text == "abs") f = Func::Abs;
        else
            return fail("unknown identifier '" + ident.text + "'",
                        {"t", "x1..x" + std::to_string(dim), "sin", "cos", "exp", "abs"});
        bump();
        if (tok.kind != Tok::LParen)
            return fail(std::string("function '") + detail::func_name(f) +
                        "' requires a parenthesized argument", {"("});
        bump();
        NodePtr arg = parse_expr();
        if (!arg) return nullptr;
        if (tok.kind != Tok::RParen) return fail("unbalanced parenthesis", {")"});
        bump();
        auto n = std::make_shared<Node>();
        n->kind = Kind::Call;
        n->func = f;
        n->a = arg;
        return n;
    }
};

// precedence levels for printing: + - (1), * / (2), unary - (3), ^ (4), atoms (5)
int print_level(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const Node& n, int min_level, std::string& out) {
    const int level = print_level(n);
    const bool parens = level < min_level;
    if (parens) out += '(';
    switch (n.kind) {
        case Kind::Literal:
            out += format_double(n.literal);
            break;
        case Kind::Var:
            out += 'x';
            out += std::to_string(n.var + 1);
            break;
        case Kind::Time:
            out += 't';
            break;
        case Kind::Neg:
            out += '-';
            print_node(*n.a, 3, out);
            break;
        case Kind::Add:
            print_node(*n.a, 1, out);
            out += " + ";
            print_node(*n.b, 2, out);
            break;
        case Kind::Sub:
            print_node(*n.a, 1, out);
            out += " - ";
            print_node(*n.b, 2, out);
            break;
        case Kind::Mul:
            print_node(*n.a, 2, out);
            out += '*';
            print_node(*n.b, 3, out);
            break;
        case Kind::Div:
            print_node(*n.a, 2, out);
            out += '/';
            print_node(*n.b, 3, out);
            break;
        case Kind::Pow:
            print_node(*n.a, 5, out);
            out += '^';
            out += format_double(n.literal);
            break;
        case Kind::Call:
            out += detail::func_name(n.func);
            out += '(';
            print_node(*n.a, 1, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

std::string pretty_node(const NodePtr& n) {
    std::string out;
    if (n) print_node(*n, 1, out);
    return out;
}

double eval_node(const Node& n, std::span<const double> x, double t);

double checked(double v, const Node& n) {
    if (!std::isfinite(v))
        throw EvalError("non-finite result", pretty_node(std::make_shared<Node>(n)));
    return v;
}

double eval_node(const Node& n, std::span<const double> x, double t) {
    switch (n.kind) {
        case Kind::Literal: return n.literal;
        case Kind::Var: return x[static_cast<std::size_t>(n.var)];
        case Kind::Time: return t;
        case Kind::Neg: return -eval_node(*n.a, x, t);
        case Kind::Add: return checked(eval_node(*n.a, x, t) + eval_node(*n.b, x, t), n);
        case Kind::Sub: return checked(eval_node(*n.a, x, t) - eval_node(*n.b, x, t), n);
        case Kind::Mul: return checked(eval_node(*n.a, x, t) * eval_node(*n.b, x, t), n);
        case Kind::Div: {
            const double den = eval_node(*n.b, x, t);
            if (den == 0.0) throw EvalError("division by zero", pretty_node(n.b));
            return checked(eval_node(*n.a, x, t) / den, n);
        }
        case Kind::Pow: {
            const double base = eval_node(*n.a, x, t);
            const double e = n.literal;
            double v;
            if (e == std::rint(e) && std::abs(e) <= 16.0)
                v = pow_int(base, static_cast<int>(e));
            else
                v = std::pow(base, e);
            return checked(v, n);
        }
        case Kind::Call: {
            const double arg = eval_node(*n.a, x, t);
            double v = 0.0;
            switch (n.func) {
                case Func::Sin: v = std::sin(arg); break;
                case Func::Cos: v = std::cos(arg); break;
                case Func::Exp: v = std::exp(arg); break;
                case Func::Abs: v = std::abs(arg); break;
            }
            return checked(v, n);
        }
    }
    return 0.0;
}

}  // namespace

double Expr::evaluate(std::span<const double> x, double t) const {
    if (!root_) throw EvalError("empty expression", "");
    if (static_cast<int>(x.size()) < dim_)
        throw EvalError("state vector shorter than declared dimension", pretty());
    return eval_node(*root_, x, t);
}

std::string Expr::pretty() const { return pretty_node(root_); }

ParseResult<Expr> parse_expression(std::string_view source, int dim) {
    return [&]() -> ParseResult<Expr> {
        ExprParser p(source, dim, SourcePos{1, 1});
        NodePtr root = p.parse_expr();
        if (root && p.tok.kind != Tok::End && !p.failed)
            p.fail("unexpected trailing input '" + p.tok.text + "'", {"operator", "end of input"});
        if (p.failed || !root) return ParseResult<Expr>{std::nullopt, p.diag};
        return ParseResult<Expr>{ExprAccess::make(std::move(root), dim), {}};
    }();
}

namespace {

// Re-parses an expression value at its document position so diagnostics
// point into the enclosing file.
ParseResult<Expr> parse_at(const KeyValue& kv, int dim) {
    ExprParser p(kv.value, dim, kv.pos);
    NodePtr root = p.parse_expr();
    if (root && p.tok.kind != Tok::End && !p.failed)
        p.fail("unexpected trailing input '" + p.tok.text + "'", {"operator", "end of input"});
    if (p.failed || !root) return ParseResult<Expr>{std::nullopt, p.diag};
    return ParseResult<Expr>{ExprAccess::make(std::move(root), dim), {}};
}

bool parse_number_value(const std::string& text, double& out) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || !std::isfinite(v)) return false;
    out = v;
    return true;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

}  // namespace

ParseResult<ParsedSystem> parse_system(std::string_view source) {
    const auto fail = [](SourcePos pos, std::string message,
                         std::vector<std::string> expected = {}) {
        return ParseResult<ParsedSystem>{std::nullopt,
                                         Diagnostic{pos, std::move(message), std::move(expected)}};
    };

    std::vector<KeyValue> entries;
    {
        int line_no = 0;
        std::size_t start = 0;
        while (start <= source.size()) {
            std::size_t end = source.find('\n', start);
            if (end == std::string_view::npos) end = source.size();
            std::string line(source.substr(start, end - start));
            ++line_no;
            start = end + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            if (trim(line).empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                return fail({line_no, 1}, "expected 'key = value'", {"="});
            KeyValue kv;
            kv.key = trim(line.substr(0, eq));
            kv.value = trim(line.substr(eq + 1));
            std::size_t vstart = eq + 1;
            while (vstart < line.size() && std::isspace(static_cast<unsigned char>(line[vstart])))
                ++vstart;
            kv.pos = SourcePos{line_no, static_cast<int>(vstart) + 1};
            if (kv.key.empty()) return fail({line_no, 1}, "empty key before '='");
            if (kv.value.empty())
                return fail(kv.pos, "empty value for key '" + kv.key + "'");
            entries.push_back(std::move(kv));
        }
    }

    ParsedSystem sys;
    sys.t0 = 0.0;
    sys.horizon = 50.0;
    std::map<std::string, KeyValue> fields;       // field.N -> kv
    std::optional<KeyValue> lyapunov_kv;
    std::map<std::string, bool> seen;

    for (auto& kv : entries) {
        if (seen.count(kv.key))
            return fail(kv.pos, "duplicate key '" + kv.key + "'");
        seen[kv.key] = true;

        const auto number = [&](double& out) -> bool { return parse_number_value(kv.value, out); };
        if (kv.key == "name") {
            sys.name = kv.value;
        } else if (kv.key == "alpha") {
            if (!number(sys.alpha)) return fail(kv.pos, "alpha: expected a number");
        } else if (kv.key == "omega") {
            if (!number(sys.omega)) return fail(kv.pos, "omega: expected a number");
        } else if (kv.key == "t0") {
            if (!number(sys.t0)) return fail(kv.pos, "t0: expected a number");
        } else if (kv.key == "t_end") {
            if (!number(sys.horizon)) return fail(kv.pos, "t_end: expected a number");
        } else if (kv.key == "x0") {
            for (const auto& part : split_commas(kv.value)) {
                double v = 0.0;
                if (!parse_number_value(trim(part), v))
                    return fail(kv.pos, "x0: expected a comma-separated list of numbers");
                sys.x0.push_back(v);
            }
        } else if (kv.key.rfind("field.", 0) == 0) {
            fields[kv.key] = kv;
        } else if (kv.key == "lyapunov.v") {
            lyapunov_kv = kv;
        } else {
            sys.extras.push_back(kv);
        }
    }

    if (!seen.count("alpha")) return fail({1, 1}, "missing required key 'alpha'");
    if (!seen.count("omega")) return fail({1, 1}, "missing required key 'omega'");
    if (sys.x0.empty()) return fail({1, 1}, "missing required key 'x0'");
    if (fields.empty()) return fail({1, 1}, "missing field.1 (at least one component required)");

    sys.dim = static_cast<int>(fields.size());
    for (int i = 1; i <= sys.dim; ++i) {
        const std::string key = "field." + std::to_string(i);
        auto it = fields.find(key);
        if (it == fields.end())
            return fail({1, 1}, "field components must be contiguous: missing '" + key + "'");
        auto parsed = parse_at(it->second, sys.dim);
        if (!parsed.ok()) return ParseResult<ParsedSystem>{std::nullopt, parsed.error};
        sys.components.push_back(*parsed.value);
    }
    if (static_cast<int>(fields.size()) != sys.dim)
        return fail({1, 1}, "field components must be named field.1 .. field.n");
    if (static_cast<int>(sys.x0.size()) != sys.dim)
        return fail({1, 1}, "x0 has " + std::to_string(sys.x0.size()) + " entries but the field has " +
                             std::to_string(sys.dim) + " components");

    if (lyapunov_kv) {
        auto parsed = parse_at(*lyapunov_kv, sys.dim);
        if (!parsed.ok()) return ParseResult<ParsedSystem>{std::nullopt, parsed.error};
        sys.lyapunov = *parsed.value;
    }
    return ParseResult<ParsedSystem>{std::move(sys), {}};
}

}  // namespace fracwin::dsl

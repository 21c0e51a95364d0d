#include "modlab/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace modlab {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      reason_(message),
      line_(line),
      column_(column) {}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return std::to_string(value);
    return std::string(buf.data(), end);
}

// ---------------------------------------------------------------------------
// Lexer

Lexer::Lexer(std::string_view text) : text_(text) { current_ = scan(); }

Token Lexer::next() {
    Token t = current_;
    current_ = scan();
    return t;
}

bool Lexer::at_punct(char c) const noexcept {
    return current_.kind == Token::Kind::punct && current_.text.size() == 1 && current_.text[0] == c;
}

bool Lexer::at_identifier(std::string_view name) const noexcept {
    return current_.kind == Token::Kind::identifier && current_.text == name;
}

Token Lexer::expect_punct(char c, std::string_view what) {
    if (!at_punct(c)) {
        std::string got = current_.kind == Token::Kind::end ? "end of input" : "'" + current_.text + "'";
        fail("expected " + std::string(what) + " but found " + got);
    }
    return next();
}

void Lexer::fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.column);
}

Token Lexer::scan() {
    auto advance = [this]() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    };
    for (;;) {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
        if (pos_ < text_.size() && text_[pos_] == '#') {
            while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            continue;
        }
        break;
    }

    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
        t.kind = Token::Kind::end;
        return t;
    }

    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            advance();
        // exponent only when digits follow, so "2e" stays number + identifier
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                while (pos_ < look) advance();
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    advance();
            }
        }
        t.kind = Token::Kind::number;
        t.text = std::string(text_.substr(start, pos_ - start));
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
            throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
        return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            advance();
        t.kind = Token::Kind::identifier;
        t.text = std::string(text_.substr(start, pos_ - start));
        return t;
    }
    static constexpr std::string_view punct = "+-*/^(),;:[]";
    if (punct.find(c) != std::string_view::npos) {
        advance();
        t.kind = Token::Kind::punct;
        t.text = std::string(1, c);
        return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
}

// ---------------------------------------------------------------------------
// AST

enum class NodeOp {
    number, var_x, var_l, pi, e,
    neg, add, sub, mul, div, pow,
    exp, sin, cos, abs, log, sqrt, chi
};

struct ExpressionNode {
    NodeOp op = NodeOp::number;
    double value = 0.0;
    Variable chi_variable = Variable::x;
    std::vector<std::shared_ptr<const ExpressionNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExpressionNode>;

NodePtr make_node(NodeOp op, std::vector<NodePtr> args = {}, double value = 0.0) {
    auto n = std::make_shared<ExpressionNode>();
    n->op = op;
    n->value = value;
    n->args = std::move(args);
    return n;
}

struct FunctionInfo {
    std::string_view name;
    NodeOp op;
};

constexpr std::array<FunctionInfo, 7> kFunctions{{
    {"exp", NodeOp::exp},
    {"sin", NodeOp::sin},
    {"cos", NodeOp::cos},
    {"abs", NodeOp::abs},
    {"log", NodeOp::log},
    {"sqrt", NodeOp::sqrt},
    {"chi", NodeOp::chi},
}};

class Parser {
public:
    Parser(Lexer& lexer, Expression::Context ctx) : lex_(lexer), ctx_(ctx) {}

    NodePtr expression() {
        NodePtr lhs = term();
        while (lex_.at_punct('+') || lex_.at_punct('-')) {
            const NodeOp op = lex_.next().text[0] == '+' ? NodeOp::add : NodeOp::sub;
            lhs = make_node(op, {lhs, term()});
        }
        return lhs;
    }

private:
    NodePtr term() {
        NodePtr lhs = unary();
        while (lex_.at_punct('*') || lex_.at_punct('/')) {
            const NodeOp op = lex_.next().text[0] == '*' ? NodeOp::mul : NodeOp::div;
            lhs = make_node(op, {lhs, unary()});
        }
        return lhs;
    }

    NodePtr unary() {
        if (lex_.at_punct('-')) {
            lex_.next();
            return make_node(NodeOp::neg, {unary()});
        }
        if (lex_.at_punct('+')) {
            lex_.next();
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (lex_.at_punct('^')) {
            lex_.next();
            return make_node(NodeOp::pow, {base, unary()});
        }
        return base;
    }

    NodePtr atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::number: {
                const double v = lex_.next().number;
                return make_node(NodeOp::number, {}, v);
            }
            case Token::Kind::identifier:
                return identifier();
            case Token::Kind::punct:
                if (t.text == "(") {
                    lex_.next();
                    NodePtr inner = expression();
                    lex_.expect_punct(')', "')'");
                    return inner;
                }
                lex_.fail("unexpected '" + t.text + "' where an operand was expected");
            case Token::Kind::end:
                lex_.fail("unexpected end of input where an operand was expected");
        }
        lex_.fail("unreachable");
    }

    NodePtr identifier() {
        const Token t = lex_.peek();
        if (t.text == "x") {
            if (!ctx_.allow_x) lex_.fail("variable 'x' is not allowed here");
            lex_.next();
            return make_node(NodeOp::var_x);
        }
        if (t.text == "l") {
            if (!ctx_.allow_lambda) lex_.fail("variable 'l' is not allowed here");
            lex_.next();
            return make_node(NodeOp::var_l);
        }
        if (t.text == "pi") {
            lex_.next();
            return make_node(NodeOp::pi);
        }
        if (t.text == "e") {
            lex_.next();
            return make_node(NodeOp::e);
        }
        for (const auto& f : kFunctions) {
            if (f.name != t.text) continue;
            lex_.next();
            lex_.expect_punct('(', "'(' after " + std::string(f.name));
            std::vector<NodePtr> args{expression()};
            while (lex_.at_punct(',')) {
                lex_.next();
                args.push_back(expression());
            }
            const std::size_t want_min = f.op == NodeOp::chi ? 2 : 1;
            const std::size_t want_max = f.op == NodeOp::chi ? 3 : 1;
            if (args.size() < want_min || args.size() > want_max) {
                throw ParseError(std::string(f.name) + " takes " +
                                     (want_min == want_max ? std::to_string(want_min)
                                                           : "2 or 3") +
                                     " argument(s), got " + std::to_string(args.size()),
                                 t.line, t.column);
            }
            lex_.expect_punct(')', "')'");
            auto node = std::make_shared<ExpressionNode>();
            node->op = f.op;
            node->args = std::move(args);
            node->chi_variable = ctx_.primary;
            if (f.op == NodeOp::chi && node->args.size() == 2) {
                if (ctx_.primary == Variable::x && !ctx_.allow_x)
                    throw ParseError("chi needs an explicit argument here", t.line, t.column);
                if (ctx_.primary == Variable::lambda && !ctx_.allow_lambda)
                    throw ParseError("chi needs an explicit argument here", t.line, t.column);
            }
            return node;
        }
        lex_.fail("unknown identifier '" + t.text + "'");
    }

    Lexer& lex_;
    Expression::Context ctx_;
};

double eval(const ExpressionNode& n, double x, double l) {
    auto arg = [&](std::size_t i) { return eval(*n.args[i], x, l); };
    switch (n.op) {
        case NodeOp::number: return n.value;
        case NodeOp::var_x: return x;
        case NodeOp::var_l: return l;
        case NodeOp::pi: return std::numbers::pi;
        case NodeOp::e: return std::numbers::e;
        case NodeOp::neg: return -arg(0);
        case NodeOp::add: return arg(0) + arg(1);
        case NodeOp::sub: return arg(0) - arg(1);
        case NodeOp::mul: return arg(0) * arg(1);
        case NodeOp::div: return arg(0) / arg(1);
        case NodeOp::pow: return std::pow(arg(0), arg(1));
        case NodeOp::exp: return std::exp(arg(0));
        case NodeOp::sin: return std::sin(arg(0));
        case NodeOp::cos: return std::cos(arg(0));
        case NodeOp::abs: return std::abs(arg(0));
        case NodeOp::log: return std::log(arg(0));
        case NodeOp::sqrt: return std::sqrt(arg(0));
        case NodeOp::chi: {
            const double t = n.args.size() == 3 ? arg(2) : (n.chi_variable == Variable::x ? x : l);
            return (t >= arg(0) && t <= arg(1)) ? 1.0 : 0.0;
        }
    }
    return 0.0;
}

void scan_usage(const ExpressionNode& n, bool& ux, bool& ul) {
    if (n.op == NodeOp::var_x) ux = true;
    if (n.op == NodeOp::var_l) ul = true;
    if (n.op == NodeOp::chi && n.args.size() == 2) (n.chi_variable == Variable::x ? ux : ul) = true;
    for (const auto& a : n.args) scan_usage(*a, ux, ul);
}

std::string_view op_symbol(NodeOp op) {
    switch (op) {
        case NodeOp::add: return " + ";
        case NodeOp::sub: return " - ";
        case NodeOp::mul: return " * ";
        case NodeOp::div: return " / ";
        case NodeOp::pow: return "^";
        default: return "";
    }
}

// Binding strength in the grammar: sums 1, products 2, unary minus 3, powers 4, atoms 5.
int precedence(const ExpressionNode& n) {
    switch (n.op) {
        case NodeOp::add:
        case NodeOp::sub: return 1;
        case NodeOp::mul:
        case NodeOp::div: return 2;
        case NodeOp::neg: return 3;
        case NodeOp::pow: return 4;
        case NodeOp::number: return n.value < 0 || std::signbit(n.value) ? 3 : 5;
        default: return 5;
    }
}

void print(const ExpressionNode& n, std::string& out, int min_prec = 0) {
    const bool wrap = precedence(n) < min_prec;
    if (wrap) out += "(";
    switch (n.op) {
        case NodeOp::number:
            if (n.value < 0 || std::signbit(n.value)) {
                out += "-" + format_number(-n.value);
            } else {
                out += format_number(n.value);
            }
            break;
        case NodeOp::var_x: out += "x"; break;
        case NodeOp::var_l: out += "l"; break;
        case NodeOp::pi: out += "pi"; break;
        case NodeOp::e: out += "e"; break;
        case NodeOp::neg:
            out += "-";
            print(*n.args[0], out, 3);
            break;
        case NodeOp::add:
        case NodeOp::sub:
        case NodeOp::mul:
        case NodeOp::div: {
            const int p = precedence(n);
            print(*n.args[0], out, p);
            out += op_symbol(n.op);
            print(*n.args[1], out, p + 1);
            break;
        }
        case NodeOp::pow:
            print(*n.args[0], out, 5);
            out += op_symbol(n.op);
            print(*n.args[1], out, 3);
            break;
        default:
            for (const auto& f : kFunctions) {
                if (f.op != n.op) continue;
                out += f.name;
                out += "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    print(*n.args[i], out);
                }
                out += ")";
                break;
            }
            break;
    }
    if (wrap) out += ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression

Expression::Expression() : Expression(make_node(NodeOp::number, {}, 0.0)) {}

Expression::Expression(std::shared_ptr<const ExpressionNode> root) : root_(std::move(root)) {
    scan_usage(*root_, uses_x_, uses_lambda_);
}

Expression Expression::constant(double value) { return Expression(make_node(NodeOp::number, {}, value)); }

Expression Expression::parse(Lexer& lexer, Context ctx) {
    Parser p(lexer, ctx);
    return Expression(p.expression());
}

Expression Expression::parse(std::string_view text, Context ctx) {
    Lexer lexer(text);
    Expression e = parse(lexer, ctx);
    if (lexer.peek().kind != Token::Kind::end) lexer.fail("unexpected '" + lexer.peek().text + "' after expression");
    return e;
}

double Expression::operator()(double x, double l) const {
    const double v = eval(*root_, x, l);
    if (!std::isfinite(v)) {
        throw EvalError("expression " + to_string() + " is not finite at x = " + format_number(x) +
                        ", l = " + format_number(l));
    }
    return v;
}

bool Expression::uses(Variable v) const noexcept { return v == Variable::x ? uses_x_ : uses_lambda_; }

std::string Expression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

}  // namespace modlab

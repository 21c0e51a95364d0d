#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modlab {

/// Syntax or semantic error in expression or symbol text. Line and column
/// are 1-based and point at the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
    std::size_t line_;
    std::size_t column_;
};

/// Raised when an expression evaluates to a non-finite value.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Variable { x, lambda };

struct Token {
    enum class Kind { number, identifier, punct, end };
    Kind kind = Kind::end;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Tokenizer shared by the expression grammar and the symbol DSL.
class Lexer {
public:
    explicit Lexer(std::string_view text);

    const Token& peek() const noexcept { return current_; }
    Token next();
    bool at_punct(char c) const noexcept;
    bool at_identifier(std::string_view name) const noexcept;
    Token expect_punct(char c, std::string_view what);
    [[noreturn]] void fail(const std::string& message) const;

private:
    Token scan();

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    Token current_;
};

struct ExpressionNode;

/// Immutable compiled arithmetic expression over the variables `x` and `l`.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | 'x' | 'l' | 'pi' | 'e' | func '(' args ')' | '(' expr ')'
///   func   := exp | sin | cos | abs | log | sqrt | chi
///
/// `chi(a, b)` is the indicator of the closed interval [a, b] in the
/// context's primary variable; `chi(a, b, t)` takes an explicit argument.
class Expression {
public:
    struct Context {
        bool allow_x = true;
        bool allow_lambda = true;
        Variable primary = Variable::x;
    };

    Expression();

    static Expression parse(std::string_view text, Context ctx);
    static Expression parse(std::string_view text) { return parse(text, Context{}); }
    /// Reads one expression from the lexer, stopping before ';', 'on', or
    /// end of input.
    static Expression parse(Lexer& lexer, Context ctx);
    static Expression constant(double value);

    double operator()(double x, double l = 0.0) const;
    bool uses(Variable v) const noexcept;
    bool is_constant() const noexcept { return !uses(Variable::x) && !uses(Variable::lambda); }
    std::string to_string() const;

private:
    explicit Expression(std::shared_ptr<const ExpressionNode> root);

    std::shared_ptr<const ExpressionNode> root_;
    bool uses_x_ = false;
    bool uses_lambda_ = false;
};

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace modlab

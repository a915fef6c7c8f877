#pragma once
// Expression trees for the analytic data of charts, structures and immersions.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace slantgeo {

enum class Op {
    Const,
    Var,
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Atan,
    Abs,
    Acos,
    Asin,
    Sign,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

struct Node;

class Expr {
public:
    Expr();  // constant 0
    explicit Expr(double c);
    static Expr var(const std::string& name);
    static Expr unary(Op op, const Expr& a);
    static Expr binary(Op op, const Expr& a, const Expr& b);

    Op op() const;
    bool is_const() const;
    bool is_const(double c) const;
    double value() const;  // only for constants
    const std::string& name() const;  // only for variables
    Expr arg(int i) const;
    const Node* node() const { return n_.get(); }

    std::string str() const;

private:
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
    friend struct Node;
};

struct Node {
    Op op;
    double c = 0.0;
    std::string name;
    Expr a{std::shared_ptr<const Node>{}};
    Expr b{std::shared_ptr<const Node>{}};
};

// Folding builders. These are the only way the library creates composite nodes.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
Expr atan(const Expr& a);
Expr abs(const Expr& a);
Expr acos(const Expr& a);
Expr asin(const Expr& a);
Expr sign(const Expr& a);

struct ParseOptions {
    std::vector<std::string> variables;
    std::map<std::string, double> constants;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t offset, std::string expected)
        : std::runtime_error(msg), offset(offset), expected(std::move(expected)) {}
    size_t offset;
    std::string expected;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(const std::string& ident, size_t offset, const std::vector<std::string>& declared);
    std::string ident;
    std::vector<std::string> declared;
};

Expr parse(const std::string& source, const ParseOptions& opts);
Expr parse(const std::string& source, const std::vector<std::string>& variables);

enum class EvalErrorKind { Domain, Kink, Unbound };

class EvalError : public std::runtime_error {
public:
    EvalError(EvalErrorKind kind, const std::string& msg, std::string subexpr)
        : std::runtime_error(msg), kind(kind), subexpr(std::move(subexpr)) {}
    EvalErrorKind kind;
    std::string subexpr;
};

// abs/sign arguments closer than this to zero raise EvalErrorKind::Kink.
inline constexpr double kKinkTol = 1e-9;

double eval(const Expr& e, const std::map<std::string, double>& env);

Expr differentiate(const Expr& e, const std::string& var);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl);
void collect_variables(const Expr& e, std::vector<std::string>& out);

// Several expressions compiled into one register program with shared
// subexpressions. Variables are bound by slot position.
class Program {
public:
    Program() = default;
    Program(const std::vector<Expr>& outputs, const std::vector<std::string>& slots);

    size_t size() const { return outputs_.size(); }
    size_t instructions() const { return code_.size(); }
    // Writes size() values into out. Throws EvalError.
    void run(const double* vars, double* out, bool flag_kinks = true) const;
    std::vector<double> run(const std::vector<double>& vars, bool flag_kinks = true) const;

private:
    struct Ins {
        Op op;
        int a, b;
        double c;
        const Node* src;
    };
    std::vector<Ins> code_;
    std::vector<int> outputs_;
    std::vector<Expr> keep_;
    size_t nslots_ = 0;
};

}  // namespace slantgeo

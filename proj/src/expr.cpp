#include "slantgeo/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <unordered_map>

namespace slantgeo {

namespace {

std::shared_ptr<const Node> make_node(Op op, double c, std::string name, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->c = c;
    n->name = std::move(name);
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Sign; }

const char* fn_name(Op op) {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Tan: return "tan";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Atan: return "atan";
        case Op::Abs: return "abs";
        case Op::Acos: return "acos";
        case Op::Asin: return "asin";
        case Op::Sign: return "sign";
        default: return "?";
    }
}

double apply_unary(Op op, double x) {
    switch (op) {
        case Op::Neg: return -x;
        case Op::Sin: return std::sin(x);
        case Op::Cos: return std::cos(x);
        case Op::Tan: return std::tan(x);
        case Op::Exp: return std::exp(x);
        case Op::Log: return std::log(x);
        case Op::Sqrt: return std::sqrt(x);
        case Op::Atan: return std::atan(x);
        case Op::Abs: return std::fabs(x);
        case Op::Acos: return std::acos(x);
        case Op::Asin: return std::asin(x);
        case Op::Sign: return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
        default: return NAN;
    }
}

double apply_binary(Op op, double x, double y) {
    switch (op) {
        case Op::Add: return x + y;
        case Op::Sub: return x - y;
        case Op::Mul: return x * y;
        case Op::Div: return x / y;
        case Op::Pow: return std::pow(x, y);
        default: return NAN;
    }
}

// Returns a message when the operation is outside its domain.
const char* domain_violation(Op op, double x, double y) {
    switch (op) {
        case Op::Log:
            if (!(x > 0)) return "log of non-positive value";
            break;
        case Op::Sqrt:
            if (x < 0) return "sqrt of negative value";
            break;
        case Op::Acos:
        case Op::Asin:
            if (x < -1 || x > 1) return "inverse trig argument outside [-1,1]";
            break;
        case Op::Div:
            if (y == 0) return "division by zero";
            break;
        case Op::Pow:
            if (x < 0 && y != std::floor(y)) return "negative base with non-integer exponent";
            if (x == 0 && y < 0) return "zero to a negative power";
            break;
        default: break;
    }
    return nullptr;
}

}  // namespace

Expr::Expr() : n_(make_node(Op::Const, 0.0, {}, Expr(nullptr), Expr(nullptr))) {}
Expr::Expr(double c) : n_(make_node(Op::Const, c, {}, Expr(nullptr), Expr(nullptr))) {}

Expr Expr::var(const std::string& name) {
    return Expr(make_node(Op::Var, 0.0, name, Expr(nullptr), Expr(nullptr)));
}
Expr Expr::unary(Op op, const Expr& a) { return Expr(make_node(op, 0.0, {}, a, Expr(nullptr))); }
Expr Expr::binary(Op op, const Expr& a, const Expr& b) { return Expr(make_node(op, 0.0, {}, a, b)); }

Op Expr::op() const { return n_->op; }
bool Expr::is_const() const { return n_->op == Op::Const; }
bool Expr::is_const(double c) const { return n_->op == Op::Const && n_->c == c; }
double Expr::value() const { return n_->c; }
const std::string& Expr::name() const { return n_->name; }
Expr Expr::arg(int i) const { return i == 0 ? n_->a : n_->b; }

// ---------------------------------------------------------------- builders

static Expr fold_unary(Op op, const Expr& a) {
    if (a.is_const()) {
        double v = apply_unary(op, a.value());
        if (std::isfinite(v) && !domain_violation(op, a.value(), 0) && op != Op::Abs && op != Op::Sign)
            return Expr(v);
        if ((op == Op::Abs || op == Op::Sign) && std::fabs(a.value()) >= kKinkTol) return Expr(v);
    }
    return Expr::unary(op, a);
}

Expr operator-(const Expr& a) {
    if (a.is_const()) return Expr(-a.value());
    if (a.op() == Op::Neg) return a.arg(0);
    return Expr::unary(Op::Neg, a);
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr(a.value() + b.value());
    if (a.is_const(0)) return b;
    if (b.is_const(0)) return a;
    return Expr::binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr(a.value() - b.value());
    if (b.is_const(0)) return a;
    if (a.is_const(0)) return -b;
    return Expr::binary(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr(a.value() * b.value());
    if (a.is_const(0) || b.is_const(0)) return Expr(0.0);
    if (a.is_const(1)) return b;
    if (b.is_const(1)) return a;
    if (a.is_const(-1)) return -b;
    if (b.is_const(-1)) return -a;
    return Expr::binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const() && b.value() != 0) return Expr(a.value() / b.value());
    if (a.is_const(0) && !(b.is_const(0))) return Expr(0.0);
    if (b.is_const(1)) return a;
    return Expr::binary(Op::Div, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const() && !domain_violation(Op::Pow, a.value(), b.value()))
        return Expr(std::pow(a.value(), b.value()));
    if (b.is_const(0)) return Expr(1.0);
    if (b.is_const(1)) return a;
    return Expr::binary(Op::Pow, a, b);
}

Expr sin(const Expr& a) { return fold_unary(Op::Sin, a); }
Expr cos(const Expr& a) { return fold_unary(Op::Cos, a); }
Expr tan(const Expr& a) { return fold_unary(Op::Tan, a); }
Expr exp(const Expr& a) { return fold_unary(Op::Exp, a); }
Expr log(const Expr& a) { return fold_unary(Op::Log, a); }
Expr sqrt(const Expr& a) { return fold_unary(Op::Sqrt, a); }
Expr atan(const Expr& a) { return fold_unary(Op::Atan, a); }
Expr abs(const Expr& a) { return fold_unary(Op::Abs, a); }
Expr acos(const Expr& a) { return fold_unary(Op::Acos, a); }
Expr asin(const Expr& a) { return fold_unary(Op::Asin, a); }
Expr sign(const Expr& a) { return fold_unary(Op::Sign, a); }

static Expr rebuild_unary(Op op, const Expr& a) {
    return op == Op::Neg ? -a : fold_unary(op, a);
}

static Expr rebuild_binary(Op op, const Expr& a, const Expr& b) {
    switch (op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        case Op::Div: return a / b;
        default: return pow(a, b);
    }
}

// ---------------------------------------------------------------- printing

namespace {

int prec(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Const: return e.value() < 0 || std::signbit(e.value()) ? 3 : 5;
        default: return 5;
    }
}

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "(1/0)" : "(-1/0)";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const Expr& e, std::string& out) {
    auto wrap = [&](const Expr& c, bool paren) {
        if (paren) out += '(';
        print(c, out);
        if (paren) out += ')';
    };
    switch (e.op()) {
        case Op::Const: out += num(e.value()); return;
        case Op::Var: out += e.name(); return;
        case Op::Neg:
            out += '-';
            wrap(e.arg(0), prec(e.arg(0)) < 4);
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            int p = prec(e);
            wrap(e.arg(0), prec(e.arg(0)) < p);
            out += e.op() == Op::Add ? " + " : e.op() == Op::Sub ? " - " : e.op() == Op::Mul ? "*" : "/";
            wrap(e.arg(1), prec(e.arg(1)) <= p);
            return;
        }
        case Op::Pow:
            wrap(e.arg(0), prec(e.arg(0)) <= 4);
            out += '^';
            wrap(e.arg(1), prec(e.arg(1)) < 4);
            return;
        default:
            out += fn_name(e.op());
            out += '(';
            print(e.arg(0), out);
            out += ')';
    }
}

}  // namespace

std::string Expr::str() const {
    std::string s;
    print(*this, s);
    return s;
}

// ---------------------------------------------------------------- parser

UnknownIdentifier::UnknownIdentifier(const std::string& ident, size_t offset,
                                     const std::vector<std::string>& declared)
    : ParseError(
          [&] {
              std::string m = "unknown identifier '" + ident + "' at offset " + std::to_string(offset) +
                              "; declared names:";
              for (auto& d : declared) m += " " + d;
              return m;
          }(),
          offset, "declared identifier"),
      ident(ident),
      declared(declared) {}

namespace {

const std::map<std::string, Op>& functions() {
    static const std::map<std::string, Op> f = {
        {"sin", Op::Sin},   {"cos", Op::Cos},     {"tan", Op::Tan},       {"exp", Op::Exp},
        {"log", Op::Log},   {"ln", Op::Log},      {"sqrt", Op::Sqrt},     {"atan", Op::Atan},
        {"arctan", Op::Atan}, {"abs", Op::Abs},   {"acos", Op::Acos},     {"arccos", Op::Acos},
        {"asin", Op::Asin}, {"arcsin", Op::Asin}, {"sign", Op::Sign},
    };
    return f;
}

class Parser {
public:
    Parser(const std::string& s, const ParseOptions& o) : s_(s), o_(o) {}

    Expr run() {
        skip();
        if (pos_ >= s_.size()) fail("empty expression", "expression");
        Expr e = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected trailing input", "operator or end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what, const std::string& expected) {
        throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " + what + " (expected " +
                             expected + ")",
                         pos_, expected);
    }

    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
            ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+'))
                e = Expr::binary(Op::Add, e, term());
            else if (eat('-'))
                e = Expr::binary(Op::Sub, e, term());
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*'))
                e = Expr::binary(Op::Mul, e, unary());
            else if (eat('/'))
                e = Expr::binary(Op::Div, e, unary());
            else
                return e;
        }
    }

    Expr unary() {
        if (eat('-')) return Expr::unary(Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (eat('^')) return Expr::binary(Op::Pow, base, unary());
        return base;
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input", "number, identifier or '('");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!eat(')')) fail("unbalanced parenthesis", "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'", "number, identifier or '('");
    }

    Expr number() {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        double v = 0;
        auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (r.ec != std::errc() || r.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number", "number");
        }
        return Expr(v);
    }

    Expr identifier() {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string id = s_.substr(start, pos_ - start);
        auto f = functions().find(id);
        if (f != functions().end()) {
            if (!eat('(')) fail("function '" + id + "' needs an argument", "'('");
            Expr a = expr();
            if (!eat(')')) fail("unbalanced parenthesis", "')'");
            return Expr::unary(f->second, a);
        }
        for (auto& v : o_.variables)
            if (v == id) return Expr::var(id);
        auto k = o_.constants.find(id);
        if (k != o_.constants.end()) return Expr(k->second);
        if (id == "pi") return Expr(std::numbers::pi);
        if (id == "e") return Expr(std::numbers::e);
        throw UnknownIdentifier(id, start, o_.variables);
    }

    const std::string& s_;
    const ParseOptions& o_;
    size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& source, const ParseOptions& opts) { return Parser(source, opts).run(); }

Expr parse(const std::string& source, const std::vector<std::string>& variables) {
    ParseOptions o;
    o.variables = variables;
    return parse(source, o);
}

// ---------------------------------------------------------------- eval

double eval(const Expr& e, const std::map<std::string, double>& env) {
    std::vector<std::string> names;
    collect_variables(e, names);
    std::vector<double> vals;
    for (auto& n : names) {
        auto it = env.find(n);
        if (it == env.end()) throw EvalError(EvalErrorKind::Unbound, "unbound variable '" + n + "'", n);
        vals.push_back(it->second);
    }
    Program p({e}, names);
    double out = 0;
    p.run(vals.data(), &out);
    return out;
}

void collect_variables(const Expr& e, std::vector<std::string>& out) {
    if (e.op() == Op::Var) {
        for (auto& n : out)
            if (n == e.name()) return;
        out.push_back(e.name());
        return;
    }
    if (e.op() == Op::Const) return;
    collect_variables(e.arg(0), out);
    if (!is_unary(e.op())) collect_variables(e.arg(1), out);
}

// ---------------------------------------------------------------- calculus

Expr differentiate(const Expr& e, const std::string& var) {
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> d = [&](const Expr& x) -> Expr {
        auto it = memo.find(x.node());
        if (it != memo.end()) return it->second;
        Expr r;
        const Expr& a = x.op() == Op::Const || x.op() == Op::Var ? x : x.arg(0);
        switch (x.op()) {
            case Op::Const: r = Expr(0.0); break;
            case Op::Var: r = Expr(x.name() == var ? 1.0 : 0.0); break;
            case Op::Neg: r = -d(a); break;
            case Op::Sin: r = cos(a) * d(a); break;
            case Op::Cos: r = -(sin(a) * d(a)); break;
            case Op::Tan: r = d(a) / pow(cos(a), Expr(2.0)); break;
            case Op::Exp: r = x * d(a); break;
            case Op::Log: r = d(a) / a; break;
            case Op::Sqrt: r = d(a) / (Expr(2.0) * x); break;
            case Op::Atan: r = d(a) / (Expr(1.0) + pow(a, Expr(2.0))); break;
            case Op::Abs: r = sign(a) * d(a); break;
            case Op::Acos: r = -(d(a) / sqrt(Expr(1.0) - pow(a, Expr(2.0)))); break;
            case Op::Asin: r = d(a) / sqrt(Expr(1.0) - pow(a, Expr(2.0))); break;
            case Op::Sign: r = Expr(0.0) * sign(a); break;
            case Op::Add: r = d(a) + d(x.arg(1)); break;
            case Op::Sub: r = d(a) - d(x.arg(1)); break;
            case Op::Mul: r = d(a) * x.arg(1) + a * d(x.arg(1)); break;
            case Op::Div: {
                const Expr& b = x.arg(1);
                Expr db = d(b);
                if (db.is_const(0))
                    r = d(a) / b;
                else
                    r = (d(a) * b - a * db) / pow(b, Expr(2.0));
                break;
            }
            case Op::Pow: {
                const Expr& b = x.arg(1);
                Expr db = d(b);
                if (db.is_const(0)) {
                    if (b.is_const())
                        r = b * pow(a, Expr(b.value() - 1.0)) * d(a);
                    else
                        r = b * pow(a, b - Expr(1.0)) * d(a);
                } else {
                    r = x * (db * log(a) + b * d(a) / a);
                }
                break;
            }
        }
        memo.emplace(x.node(), r);
        return r;
    };
    return d(e);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl) {
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> s = [&](const Expr& x) -> Expr {
        if (x.op() == Op::Const) return x;
        if (x.op() == Op::Var) {
            auto it = repl.find(x.name());
            return it == repl.end() ? x : it->second;
        }
        auto it = memo.find(x.node());
        if (it != memo.end()) return it->second;
        Expr r = is_unary(x.op()) ? rebuild_unary(x.op(), s(x.arg(0)))
                                  : rebuild_binary(x.op(), s(x.arg(0)), s(x.arg(1)));
        memo.emplace(x.node(), r);
        return r;
    };
    return s(e);
}

// ---------------------------------------------------------------- program

namespace {

struct Key {
    Op op;
    int a, b;
    double c;
    bool operator==(const Key& o) const {
        return op == o.op && a == o.a && b == o.b && std::memcmp(&c, &o.c, sizeof c) == 0;
    }
};
struct KeyHash {
    size_t operator()(const Key& k) const {
        uint64_t bits;
        std::memcpy(&bits, &k.c, sizeof bits);
        size_t h = static_cast<size_t>(k.op) * 1000003u;
        h ^= std::hash<int>()(k.a) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<int>()(k.b) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<uint64_t>()(bits) + 0x9e3779b9 + (h << 6) + (h >> 2);
        return h;
    }
};

std::string node_text(const Node* n) {
    return (is_unary(n->op) ? Expr::unary(n->op, n->a) : Expr::binary(n->op, n->a, n->b)).str();
}

}  // namespace

Program::Program(const std::vector<Expr>& outputs, const std::vector<std::string>& slots) : keep_(outputs) {
    nslots_ = slots.size();
    std::unordered_map<std::string, int> slot_of;
    for (size_t i = 0; i < slots.size(); ++i) slot_of[slots[i]] = static_cast<int>(i);
    std::unordered_map<const Node*, int> seen;
    std::unordered_map<Key, int, KeyHash> cse;

    std::function<int(const Expr&)> emit = [&](const Expr& x) -> int {
        auto it = seen.find(x.node());
        if (it != seen.end()) return it->second;
        Key k{x.op(), -1, -1, 0.0};
        if (x.op() == Op::Const) {
            k.c = x.value();
        } else if (x.op() == Op::Var) {
            auto s = slot_of.find(x.name());
            if (s == slot_of.end())
                throw EvalError(EvalErrorKind::Unbound, "unbound variable '" + x.name() + "'", x.name());
            k.a = s->second;
        } else {
            k.a = emit(x.arg(0));
            if (!is_unary(x.op())) k.b = emit(x.arg(1));
        }
        int reg;
        auto c = cse.find(k);
        if (c != cse.end()) {
            reg = c->second;
        } else {
            reg = static_cast<int>(code_.size());
            code_.push_back({k.op, k.a, k.b, k.c, x.node()});
            cse.emplace(k, reg);
        }
        seen.emplace(x.node(), reg);
        return reg;
    };
    for (auto& e : outputs) outputs_.push_back(emit(e));
}

void Program::run(const double* vars, double* out, bool flag_kinks) const {
    thread_local std::vector<double> r;
    r.resize(code_.size());
    for (size_t i = 0; i < code_.size(); ++i) {
        const Ins& in = code_[i];
        double v;
        switch (in.op) {
            case Op::Const: v = in.c; break;
            case Op::Var: v = vars[in.a]; break;
            case Op::Add: v = r[in.a] + r[in.b]; break;
            case Op::Sub: v = r[in.a] - r[in.b]; break;
            case Op::Mul: v = r[in.a] * r[in.b]; break;
            default: {
                double x = r[in.a];
                double y = in.b >= 0 ? r[in.b] : 0.0;
                if (const char* msg = domain_violation(in.op, x, y)) {
                    std::string sub = node_text(in.src);
                    throw EvalError(EvalErrorKind::Domain, std::string(msg) + " in '" + sub + "'", sub);
                }
                if (flag_kinks && (in.op == Op::Abs || in.op == Op::Sign) && std::fabs(x) < kKinkTol) {
                    std::string sub = node_text(in.src);
                    throw EvalError(EvalErrorKind::Kink, "evaluation within 1e-9 of the kink of '" + sub + "'", sub);
                }
                v = is_unary(in.op) ? apply_unary(in.op, x) : apply_binary(in.op, x, y);
            }
        }
        r[i] = v;
    }
    for (size_t k = 0; k < outputs_.size(); ++k) out[k] = r[outputs_[k]];
}

std::vector<double> Program::run(const std::vector<double>& vars, bool flag_kinks) const {
    if (vars.size() < nslots_) throw std::invalid_argument("Program::run: too few variable values");
    std::vector<double> out(outputs_.size());
    run(vars.data(), out.data(), flag_kinks);
    return out;
}

}  // namespace slantgeo

#include "bifurc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "bifurc/errors.hpp"

namespace bifurc {

namespace {

struct FuncDef {
    const char* name;
    double (*fn)(double);
};

double f_abs(double v) { return std::fabs(v); }

const FuncDef kFuncs[] = {
    {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
    {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
    {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
    {"abs", f_abs},                                  {"sinh", [](double v) { return std::sinh(v); }},
    {"cosh", [](double v) { return std::cosh(v); }}, {"tanh", [](double v) { return std::tanh(v); }},
    {"atan", [](double v) { return std::atan(v); }},
};

}  // namespace

class ExprParser {
public:
    ExprParser(const std::string& s, const std::vector<std::string>& vars, Expr& out)
        : s_(s), vars_(vars), out_(out) {}

    void run() {
        expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        int depth = 0;
        for (const auto& in : out_.code_) {
            switch (in.op) {
                case Expr::Op::Const:
                case Expr::Op::Var: ++depth; break;
                case Expr::Op::Add:
                case Expr::Op::Sub:
                case Expr::Op::Mul:
                case Expr::Op::Div:
                case Expr::Op::Pow: --depth; break;
                default: break;
            }
            out_.max_depth_ = std::max(out_.max_depth_, depth);
        }
    }

private:
    void fail(const std::string& msg) const {
        throw ParseError("expression '" + s_ + "' at " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void emit(Expr::Op op, int arg = 0, double v = 0.0) { out_.code_.push_back({op, arg, v}); }

    void expr() {
        term();
        for (;;) {
            if (eat('+')) {
                term();
                emit(Expr::Op::Add);
            } else if (eat('-')) {
                term();
                emit(Expr::Op::Sub);
            } else {
                return;
            }
        }
    }
    void term() {
        unary();
        for (;;) {
            if (eat('*')) {
                unary();
                emit(Expr::Op::Mul);
            } else if (eat('/')) {
                unary();
                emit(Expr::Op::Div);
            } else {
                return;
            }
        }
    }
    void unary() {
        if (eat('-')) {
            unary();
            emit(Expr::Op::Neg);
        } else if (eat('+')) {
            unary();
        } else {
            power();
        }
    }
    void power() {
        atom();
        if (eat('^')) {
            size_t mark = out_.code_.size();
            unary();
            if (out_.code_.size() == mark + 1 && out_.code_.back().op == Expr::Op::Const) {
                double e = out_.code_.back().value;
                if (e == std::floor(e) && std::fabs(e) <= 64) {
                    out_.code_.pop_back();
                    emit(Expr::Op::PowInt, static_cast<int>(e));
                    return;
                }
            }
            emit(Expr::Op::Pow);
        }
    }
    void atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            expr();
            if (!eat(')')) fail("missing ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            emit(Expr::Op::Const, 0, v);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            for (size_t i = 0; i < vars_.size(); ++i) {
                if (vars_[i] == id) {
                    emit(Expr::Op::Var, static_cast<int>(i));
                    return;
                }
            }
            for (size_t i = 0; i < std::size(kFuncs); ++i) {
                if (id == kFuncs[i].name) {
                    if (!eat('(')) fail("expected '(' after " + id);
                    expr();
                    if (!eat(')')) fail("missing ')'");
                    emit(Expr::Op::Func, static_cast<int>(i));
                    return;
                }
            }
            if (id == "pi") {
                emit(Expr::Op::Const, 0, std::numbers::pi);
                return;
            }
            if (id == "e") {
                emit(Expr::Op::Const, 0, std::numbers::e);
                return;
            }
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    Expr& out_;
    size_t pos_ = 0;
};

Expr::Expr(const std::string& source, const std::vector<std::string>& variables) : source_(source) {
    ExprParser(source_, variables, *this).run();
}

bool Expr::uses(int variable) const {
    for (const auto& in : code_)
        if (in.op == Op::Var && in.arg == variable) return true;
    return false;
}

double Expr::eval(const double* values) const {
    double stack[64];
    double* heap = nullptr;
    std::vector<double> big;
    if (max_depth_ > 64) {
        big.resize(max_depth_);
        heap = big.data();
    }
    double* st = heap ? heap : stack;
    int sp = 0;
    for (const auto& in : code_) {
        switch (in.op) {
            case Op::Const: st[sp++] = in.value; break;
            case Op::Var: st[sp++] = values[in.arg]; break;
            case Op::Add: --sp; st[sp - 1] += st[sp]; break;
            case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
            case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
            case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
            case Op::Pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
            case Op::PowInt: {
                double b = st[sp - 1], r = 1.0;
                int n = std::abs(in.arg);
                for (int i = 0; i < n; ++i) r *= b;
                st[sp - 1] = in.arg < 0 ? 1.0 / r : r;
                break;
            }
            case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
            case Op::Func: st[sp - 1] = kFuncs[in.arg].fn(st[sp - 1]); break;
        }
    }
    return sp > 0 ? st[0] : 0.0;
}

}  // namespace bifurc

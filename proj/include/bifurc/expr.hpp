#pragma once

#include <string>
#include <vector>

namespace bifurc {

// Compiled arithmetic expression over a fixed list of variable names.
// Grammar: + - * / ^, unary minus, parentheses, numbers, the constants pi and e,
// and the functions sin cos tan exp log sqrt abs sinh cosh tanh atan.
class Expr {
public:
    Expr() = default;
    Expr(const std::string& source, const std::vector<std::string>& variables);

    double eval(const double* values) const;
    double eval(const std::vector<double>& values) const { return eval(values.data()); }

    const std::string& source() const { return source_; }
    bool uses(int variable) const;

private:
    enum class Op : unsigned char { Const, Var, Add, Sub, Mul, Div, Pow, PowInt, Neg, Func };
    struct Instr {
        Op op;
        int arg = 0;
        double value = 0.0;
    };

    friend class ExprParser;

    std::string source_;
    std::vector<Instr> code_;
    int max_depth_ = 0;
};

}  // namespace bifurc

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "curverecon/dual.hpp"
#include "curverecon/errors.hpp"

namespace curverecon {

inline double pow_(double a, double b) { return std::pow(a, b); }

template <int N>
Dual<N> pow_(const Dual<N>& a, const Dual<N>& b) {
    bool const_exp = true;
    for (double di : b.d)
        if (di != 0.0) const_exp = false;
    if (const_exp) return pow(a, b.v);
    Dual<N> r;
    r.v = std::pow(a.v, b.v);
    const double la = std::log(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = r.v * (b.d[i] * la + b.v * a.d[i] / a.v);
    return r;
}

// Tiny arithmetic-expression evaluator for field specifications in configs.
// Grammar: + - * / ^, parentheses, unary sign, numbers, the variables
// x, y, z (aliases x1, x2, x3) and the functions sin, cos, exp, sqrt.
// Parsed once into a postfix program; evaluation is generic over the
// scalar type so derivative propagation works through the same code.
class Expr {
  public:
    static Expr parse(std::string_view source);

    double operator()(double x, double y, double z = 0.0) const {
        return eval<double>(x, y, z);
    }

    template <class T>
    T eval(const T& x, const T& y, const T& z) const;

    const std::string& source() const { return source_; }
    bool uses_z() const { return uses_z_; }

  private:
    enum class Op : unsigned char {
        push_num,
        push_x,
        push_y,
        push_z,
        add,
        sub,
        mul,
        div,
        pow,
        neg,
        fn_sin,
        fn_cos,
        fn_exp,
        fn_sqrt,
    };
    struct Instr {
        Op op;
        double num = 0.0;
    };

    std::vector<Instr> prog_;
    std::string source_;
    bool uses_z_ = false;

    friend class ExprParser;
};

template <class T>
T Expr::eval(const T& x, const T& y, const T& z) const {
    // Program depth is bounded by expression nesting; a small local stack
    // avoids allocation on the hot path.
    std::vector<T> st;
    st.reserve(16);
    for (const Instr& in : prog_) {
        switch (in.op) {
            case Op::push_num: st.push_back(T(in.num)); break;
            case Op::push_x: st.push_back(x); break;
            case Op::push_y: st.push_back(y); break;
            case Op::push_z: st.push_back(z); break;
            case Op::neg: st.back() = -st.back(); break;
            case Op::fn_sin: st.back() = sin(st.back()); break;
            case Op::fn_cos: st.back() = cos(st.back()); break;
            case Op::fn_exp: st.back() = exp(st.back()); break;
            case Op::fn_sqrt: st.back() = sqrt(st.back()); break;
            default: {
                T b = st.back();
                st.pop_back();
                T& a = st.back();
                switch (in.op) {
                    case Op::add: a = a + b; break;
                    case Op::sub: a = a - b; break;
                    case Op::mul: a = a * b; break;
                    case Op::div: a = a / b; break;
                    case Op::pow: a = pow_(a, b); break;
                    default: break;
                }
            }
        }
    }
    return st.back();
}

}  // namespace curverecon

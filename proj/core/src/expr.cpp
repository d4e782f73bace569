#include "curverecon/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace curverecon {

// Recursive-descent parser emitting postfix instructions.
class ExprParser {
  public:
    ExprParser(std::string_view src, Expr& out) : src_(src), out_(out) {}

    void run() {
        expression();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        if (out_.prog_.empty()) fail("empty expression");
    }

  private:
    std::string_view src_;
    Expr& out_;
    size_t pos_ = 0;

    using Op = Expr::Op;

    [[noreturn]] void fail(const std::string& what) {
        throw ConfigError("expression error at position " + std::to_string(pos_) + ": " + what +
                          " in \"" + std::string(src_) + "\"");
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    void emit(Op op, double num = 0.0) { out_.prog_.push_back({op, num}); }

    void expression() {
        term();
        for (;;) {
            if (eat('+'))
                term(), emit(Op::add);
            else if (eat('-'))
                term(), emit(Op::sub);
            else
                return;
        }
    }

    void term() {
        factor();
        for (;;) {
            if (eat('*'))
                factor(), emit(Op::mul);
            else if (eat('/'))
                factor(), emit(Op::div);
            else
                return;
        }
    }

    // Right-associative power binds tighter than unary minus on its left,
    // looser on its right: -x^2 is -(x^2), x^-2 is x^(-2).
    void factor() {
        int negs = 0;
        while (true) {
            if (eat('-'))
                ++negs;
            else if (eat('+'))
                ;
            else
                break;
        }
        primary();
        if (eat('^')) {
            factor();
            emit(Op::pow);
        }
        for (int i = 0; i < negs; ++i) emit(Op::neg);
    }

    void primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("expected operand");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            expression();
            if (!eat(')')) fail("missing ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            identifier();
            return;
        }
        fail("unexpected character");
    }

    void number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<size_t>(end - begin);
        emit(Op::push_num, v);
    }

    void identifier() {
        const size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name == "x" || name == "x1") {
            emit(Op::push_x);
            return;
        }
        if (name == "y" || name == "x2") {
            emit(Op::push_y);
            return;
        }
        if (name == "z" || name == "x3") {
            emit(Op::push_z);
            out_.uses_z_ = true;
            return;
        }

        Op fn;
        if (name == "sin")
            fn = Op::fn_sin;
        else if (name == "cos")
            fn = Op::fn_cos;
        else if (name == "exp")
            fn = Op::fn_exp;
        else if (name == "sqrt")
            fn = Op::fn_sqrt;
        else
            fail("unknown identifier '" + std::string(name) + "'");

        if (!eat('(')) fail("expected '(' after function name");
        expression();
        if (!eat(')')) fail("missing ')'");
        emit(fn);
    }
};

Expr Expr::parse(std::string_view source) {
    Expr e;
    e.source_ = std::string(source);
    ExprParser(source, e).run();
    return e;
}

}  // namespace curverecon

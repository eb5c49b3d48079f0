#include "twirlcorr/qasm.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace twirlcorr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Token {
    enum class Kind {
        Identifier,
        Real,
        Integer,
        String,
        LParen,
        RParen,
        LBrack,
        RBrack,
        LBrace,
        RBrace,
        Comma,
        Semicolon,
        Arrow,
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        End
    } kind;
    std::string text;
    double value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
   public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws_and_comments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::Kind::End;
            return t;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                advance();
            }
            t.kind = Token::Kind::Identifier;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < text_.size() &&
                                                            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            size_t start = pos_;
            bool is_real = false;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    advance();
                } else if (d == '.' || d == 'e' || d == 'E') {
                    is_real = true;
                    advance();
                    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-') &&
                        (d == 'e' || d == 'E')) {
                        advance();
                    }
                } else {
                    break;
                }
            }
            t.text = text_.substr(start, pos_ - start);
            t.kind = is_real ? Token::Kind::Real : Token::Kind::Integer;
            try {
                t.value = std::stod(t.text);
            } catch (...) {
                throw QasmError("malformed number '" + t.text + "'", t.line, t.col);
            }
            return t;
        }
        if (c == '"') {
            advance();
            size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                advance();
            }
            if (pos_ >= text_.size()) {
                throw QasmError("unterminated string", t.line, t.col);
            }
            t.kind = Token::Kind::String;
            t.text = text_.substr(start, pos_ - start);
            advance();
            return t;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            t.kind = Token::Kind::Arrow;
            return t;
        }
        advance();
        switch (c) {
            case '(': t.kind = Token::Kind::LParen; return t;
            case ')': t.kind = Token::Kind::RParen; return t;
            case '[': t.kind = Token::Kind::LBrack; return t;
            case ']': t.kind = Token::Kind::RBrack; return t;
            case '{': t.kind = Token::Kind::LBrace; return t;
            case '}': t.kind = Token::Kind::RBrace; return t;
            case ',': t.kind = Token::Kind::Comma; return t;
            case ';': t.kind = Token::Kind::Semicolon; return t;
            case '+': t.kind = Token::Kind::Plus; return t;
            case '-': t.kind = Token::Kind::Minus; return t;
            case '*': t.kind = Token::Kind::Star; return t;
            case '/': t.kind = Token::Kind::Slash; return t;
            case '^': t.kind = Token::Kind::Caret; return t;
            default:
                throw QasmError(std::string("unexpected character '") + c + "'", t.line, t.col);
        }
    }

   private:
    void advance() {
        if (text_[pos_] == '\n') {
            line_++;
            col_ = 1;
        } else {
            col_++;
        }
        pos_++;
    }

    void skip_ws_and_comments() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
                continue;
            }
            return;
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// A gate macro: formal params, formal qubit args, body of calls whose params
// are expressions over the formals.
struct MacroExpr {
    // tiny expression tree for macro bodies: num | param ref | unary | binop
    enum class Kind { Number, Param, Neg, Add, Sub, Mul, Div, Pow } kind = Kind::Number;
    double number = 0;
    int param_index = -1;
    int lhs = -1, rhs = -1;  // indices into the pool
};

struct MacroCall {
    std::string gate;
    std::vector<int> param_exprs;  // indices into expr pool
    std::vector<int> qubit_args;   // formal argument indices
};

struct GateMacro {
    int n_params = 0;
    int n_qubits = 0;
    std::vector<MacroExpr> pool;
    std::vector<MacroCall> body;
};

// Primitive gates understood downstream (not expanded).
bool is_primitive(const std::string& name) {
    static const std::set<std::string> prims = {"i",  "id",  "h",  "x",  "y",    "z",  "s",  "sdg", "t",
                                                "tdg", "sx", "sxdg", "rz", "u1", "u3", "cx", "cz",  "swap"};
    return prims.count(name) > 0;
}

int primitive_arity(const std::string& name) {
    if (name == "cx" || name == "cz" || name == "swap") {
        return 2;
    }
    return 1;
}

int primitive_param_count(const std::string& name) {
    if (name == "rz" || name == "u1") {
        return 1;
    }
    if (name == "u3") {
        return 3;
    }
    return 0;
}

class Parser {
   public:
    explicit Parser(const std::string& text) : lexer_(text) {
        scan();
    }

    QasmProgram parse() {
        expect_identifier("OPENQASM");
        if (cur_.kind != Token::Kind::Real || cur_.text != "2.0") {
            fail("expected version 2.0");
        }
        program_.version = cur_.text;
        scan();
        expect(Token::Kind::Semicolon);
        while (cur_.kind != Token::Kind::End) {
            statement();
        }
        return std::move(program_);
    }

   private:
    [[noreturn]] void fail(const std::string& msg) {
        throw QasmError(msg, cur_.line, cur_.col);
    }

    void scan() {
        cur_ = lexer_.next();
    }

    void expect(Token::Kind k) {
        if (cur_.kind != k) {
            fail("unexpected token '" + cur_.text + "'");
        }
        scan();
    }

    void expect_identifier(const std::string& name) {
        if (cur_.kind != Token::Kind::Identifier || cur_.text != name) {
            fail("expected '" + name + "'");
        }
        scan();
    }

    std::string identifier() {
        if (cur_.kind != Token::Kind::Identifier) {
            fail("expected identifier");
        }
        std::string s = cur_.text;
        scan();
        return s;
    }

    int integer() {
        if (cur_.kind != Token::Kind::Integer) {
            fail("expected integer");
        }
        int v = static_cast<int>(cur_.value);
        scan();
        return v;
    }

    void statement() {
        if (cur_.kind != Token::Kind::Identifier) {
            fail("expected statement");
        }
        const std::string& kw = cur_.text;
        if (kw == "include") {
            scan();
            if (cur_.kind != Token::Kind::String) {
                fail("expected include path string");
            }
            if (cur_.text != "qelib1.inc") {
                fail("only qelib1.inc is supported (resolved from the built-in table)");
            }
            program_.has_include = true;
            scan();
            expect(Token::Kind::Semicolon);
            install_qelib();
            return;
        }
        if (kw == "qreg" || kw == "creg") {
            bool quantum = kw == "qreg";
            scan();
            std::string name = identifier();
            expect(Token::Kind::LBrack);
            int size = integer();
            expect(Token::Kind::RBrack);
            expect(Token::Kind::Semicolon);
            if (size <= 0) {
                fail("register size must be positive");
            }
            if (quantum) {
                if (program_.qregs.count(name)) {
                    fail("duplicate qreg '" + name + "'");
                }
                program_.qregs[name] = size;
                program_.qreg_order.push_back(name);
                qreg_offset_[name] = program_.n_qubits;
                program_.n_qubits += size;
            } else {
                program_.cregs[name] = size;
            }
            return;
        }
        if (kw == "gate") {
            parse_gate_definition();
            return;
        }
        if (kw == "barrier") {
            scan();
            // swallow operands
            QasmStatement st;
            st.kind = QasmStatement::Kind::Barrier;
            st.line = cur_.line;
            while (cur_.kind != Token::Kind::Semicolon) {
                resolve_operand();
                if (cur_.kind == Token::Kind::Comma) {
                    scan();
                }
            }
            scan();
            program_.statements.push_back(std::move(st));
            return;
        }
        if (kw == "measure") {
            int line = cur_.line;
            scan();
            auto qubits = resolve_operand();
            expect(Token::Kind::Arrow);
            std::string creg = identifier();
            if (!program_.cregs.count(creg)) {
                fail("undeclared creg '" + creg + "'");
            }
            if (cur_.kind == Token::Kind::LBrack) {
                scan();
                integer();
                expect(Token::Kind::RBrack);
            }
            expect(Token::Kind::Semicolon);
            QasmStatement st;
            st.kind = QasmStatement::Kind::Measure;
            st.qubits = qubits;
            st.line = line;
            program_.measured_count += static_cast<int>(qubits.size());
            program_.statements.push_back(std::move(st));
            return;
        }
        if (kw == "opaque" || kw == "if" || kw == "reset") {
            fail("unsupported statement '" + kw + "'");
        }
        gate_call_statement();
    }

    // expression with no formal parameters (top-level gate call argument)
    double const_expression() {
        return expr_add();
    }

    double expr_add() {
        double v = expr_mul();
        for (;;) {
            if (cur_.kind == Token::Kind::Plus) {
                scan();
                v += expr_mul();
            } else if (cur_.kind == Token::Kind::Minus) {
                scan();
                v -= expr_mul();
            } else {
                return v;
            }
        }
    }

    double expr_mul() {
        double v = expr_unary();
        for (;;) {
            if (cur_.kind == Token::Kind::Star) {
                scan();
                v *= expr_unary();
            } else if (cur_.kind == Token::Kind::Slash) {
                scan();
                double d = expr_unary();
                if (d == 0) {
                    fail("division by zero in parameter expression");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    double expr_unary() {
        if (cur_.kind == Token::Kind::Minus) {
            scan();
            return -expr_unary();
        }
        if (cur_.kind == Token::Kind::Plus) {
            scan();
            return expr_unary();
        }
        return expr_pow();
    }

    double expr_pow() {
        double base = expr_atom();
        if (cur_.kind == Token::Kind::Caret) {
            scan();
            double e = expr_unary();
            return std::pow(base, e);
        }
        return base;
    }

    double expr_atom() {
        if (cur_.kind == Token::Kind::Real || cur_.kind == Token::Kind::Integer) {
            double v = cur_.value;
            scan();
            return v;
        }
        if (cur_.kind == Token::Kind::Identifier && cur_.text == "pi") {
            scan();
            return kPi;
        }
        if (cur_.kind == Token::Kind::LParen) {
            scan();
            double v = expr_add();
            expect(Token::Kind::RParen);
            return v;
        }
        fail("expected parameter expression");
    }

    // resolves q, q[i] into flat qubit indices
    std::vector<int> resolve_operand() {
        std::string name = identifier();
        auto it = program_.qregs.find(name);
        if (it == program_.qregs.end()) {
            fail("undeclared register '" + name + "'");
        }
        int offset = qreg_offset_[name];
        if (cur_.kind == Token::Kind::LBrack) {
            scan();
            int idx = integer();
            expect(Token::Kind::RBrack);
            if (idx < 0 || idx >= it->second) {
                fail("index " + std::to_string(idx) + " out of range for register '" + name + "'");
            }
            return {offset + idx};
        }
        std::vector<int> all(it->second);
        for (int i = 0; i < it->second; i++) {
            all[i] = offset + i;
        }
        return all;
    }

    void gate_call_statement() {
        Token head = cur_;
        std::string name = identifier();
        std::vector<double> params;
        if (cur_.kind == Token::Kind::LParen) {
            scan();
            if (cur_.kind != Token::Kind::RParen) {
                params.push_back(const_expression());
                while (cur_.kind == Token::Kind::Comma) {
                    scan();
                    params.push_back(const_expression());
                }
            }
            expect(Token::Kind::RParen);
        }
        std::vector<std::vector<int>> operands;
        operands.push_back(resolve_operand());
        while (cur_.kind == Token::Kind::Comma) {
            scan();
            operands.push_back(resolve_operand());
        }
        expect(Token::Kind::Semicolon);

        // register broadcast: all multi-qubit operands must have equal size
        size_t reps = 1;
        for (const auto& op : operands) {
            if (op.size() > 1) {
                if (reps != 1 && op.size() != reps) {
                    throw QasmError("mismatched register sizes in gate call", head.line, head.col);
                }
                reps = op.size();
            }
        }
        for (size_t r = 0; r < reps; r++) {
            std::vector<int> qubits;
            for (const auto& op : operands) {
                qubits.push_back(op.size() == 1 ? op[0] : op[r]);
            }
            emit_call(name, params, qubits, head);
        }
    }

    void emit_call(const std::string& name, const std::vector<double>& params, const std::vector<int>& qubits,
                   const Token& at) {
        if (is_primitive(name)) {
            if (static_cast<int>(qubits.size()) != primitive_arity(name)) {
                throw QasmError("gate '" + name + "' expects " + std::to_string(primitive_arity(name)) +
                                    " qubit argument(s), got " + std::to_string(qubits.size()),
                                at.line, at.col);
            }
            if (static_cast<int>(params.size()) != primitive_param_count(name)) {
                throw QasmError("gate '" + name + "' expects " + std::to_string(primitive_param_count(name)) +
                                    " parameter(s), got " + std::to_string(params.size()),
                                at.line, at.col);
            }
            if (qubits.size() == 2 && qubits[0] == qubits[1]) {
                throw QasmError("two-qubit gate on identical qubits", at.line, at.col);
            }
            QasmStatement st;
            st.kind = QasmStatement::Kind::GateCall;
            st.gate = name;
            st.params = params;
            st.qubits = qubits;
            st.line = at.line;
            program_.statements.push_back(std::move(st));
            return;
        }
        auto it = macros_.find(name);
        if (it == macros_.end()) {
            throw QasmError("unknown gate '" + name + "'", at.line, at.col);
        }
        const GateMacro& m = it->second;
        if (static_cast<int>(params.size()) != m.n_params) {
            throw QasmError("gate '" + name + "' expects " + std::to_string(m.n_params) + " parameter(s), got " +
                                std::to_string(params.size()),
                            at.line, at.col);
        }
        if (static_cast<int>(qubits.size()) != m.n_qubits) {
            throw QasmError("gate '" + name + "' expects " + std::to_string(m.n_qubits) + " qubit argument(s), got " +
                                std::to_string(qubits.size()),
                            at.line, at.col);
        }
        for (const auto& call : m.body) {
            std::vector<double> sub_params;
            sub_params.reserve(call.param_exprs.size());
            for (int e : call.param_exprs) {
                sub_params.push_back(eval_macro_expr(m, e, params));
            }
            std::vector<int> sub_qubits;
            sub_qubits.reserve(call.qubit_args.size());
            for (int a : call.qubit_args) {
                sub_qubits.push_back(qubits[a]);
            }
            emit_call(call.gate, sub_params, sub_qubits, at);
        }
    }

    double eval_macro_expr(const GateMacro& m, int idx, const std::vector<double>& params) {
        const MacroExpr& e = m.pool[idx];
        switch (e.kind) {
            case MacroExpr::Kind::Number: return e.number;
            case MacroExpr::Kind::Param: return params[e.param_index];
            case MacroExpr::Kind::Neg: return -eval_macro_expr(m, e.lhs, params);
            case MacroExpr::Kind::Add: return eval_macro_expr(m, e.lhs, params) + eval_macro_expr(m, e.rhs, params);
            case MacroExpr::Kind::Sub: return eval_macro_expr(m, e.lhs, params) - eval_macro_expr(m, e.rhs, params);
            case MacroExpr::Kind::Mul: return eval_macro_expr(m, e.lhs, params) * eval_macro_expr(m, e.rhs, params);
            case MacroExpr::Kind::Div: return eval_macro_expr(m, e.lhs, params) / eval_macro_expr(m, e.rhs, params);
            case MacroExpr::Kind::Pow:
                return std::pow(eval_macro_expr(m, e.lhs, params), eval_macro_expr(m, e.rhs, params));
        }
        throw std::logic_error("bad macro expression");
    }

    // gate name(params?) args { body }
    void parse_gate_definition() {
        scan();  // 'gate'
        std::string name = identifier();
        GateMacro macro;
        std::vector<std::string> formal_params;
        if (cur_.kind == Token::Kind::LParen) {
            scan();
            if (cur_.kind != Token::Kind::RParen) {
                formal_params.push_back(identifier());
                while (cur_.kind == Token::Kind::Comma) {
                    scan();
                    formal_params.push_back(identifier());
                }
            }
            expect(Token::Kind::RParen);
        }
        std::vector<std::string> formal_qubits;
        formal_qubits.push_back(identifier());
        while (cur_.kind == Token::Kind::Comma) {
            scan();
            formal_qubits.push_back(identifier());
        }
        macro.n_params = static_cast<int>(formal_params.size());
        macro.n_qubits = static_cast<int>(formal_qubits.size());
        expect(Token::Kind::LBrace);
        while (cur_.kind != Token::Kind::RBrace) {
            if (cur_.kind == Token::Kind::Identifier && cur_.text == "barrier") {
                scan();
                while (cur_.kind != Token::Kind::Semicolon) {
                    scan();
                }
                scan();
                continue;
            }
            MacroCall call;
            call.gate = identifier();
            if (cur_.kind == Token::Kind::LParen) {
                scan();
                if (cur_.kind != Token::Kind::RParen) {
                    call.param_exprs.push_back(macro_expr_add(macro, formal_params));
                    while (cur_.kind == Token::Kind::Comma) {
                        scan();
                        call.param_exprs.push_back(macro_expr_add(macro, formal_params));
                    }
                }
                expect(Token::Kind::RParen);
            }
            for (;;) {
                std::string arg = identifier();
                int idx = -1;
                for (size_t i = 0; i < formal_qubits.size(); i++) {
                    if (formal_qubits[i] == arg) {
                        idx = static_cast<int>(i);
                        break;
                    }
                }
                if (idx < 0) {
                    fail("unknown qubit argument '" + arg + "' in gate body");
                }
                call.qubit_args.push_back(idx);
                if (cur_.kind == Token::Kind::Comma) {
                    scan();
                    continue;
                }
                break;
            }
            expect(Token::Kind::Semicolon);
            macro.body.push_back(std::move(call));
        }
        scan();  // '}'
        macros_[name] = std::move(macro);
    }

    int macro_expr_add(GateMacro& m, const std::vector<std::string>& formals) {
        int lhs = macro_expr_mul(m, formals);
        for (;;) {
            if (cur_.kind == Token::Kind::Plus || cur_.kind == Token::Kind::Minus) {
                auto kind = cur_.kind == Token::Kind::Plus ? MacroExpr::Kind::Add : MacroExpr::Kind::Sub;
                scan();
                int rhs = macro_expr_mul(m, formals);
                MacroExpr e;
                e.kind = kind;
                e.lhs = lhs;
                e.rhs = rhs;
                m.pool.push_back(e);
                lhs = static_cast<int>(m.pool.size()) - 1;
            } else {
                return lhs;
            }
        }
    }

    int macro_expr_mul(GateMacro& m, const std::vector<std::string>& formals) {
        int lhs = macro_expr_unary(m, formals);
        for (;;) {
            if (cur_.kind == Token::Kind::Star || cur_.kind == Token::Kind::Slash) {
                auto kind = cur_.kind == Token::Kind::Star ? MacroExpr::Kind::Mul : MacroExpr::Kind::Div;
                scan();
                int rhs = macro_expr_unary(m, formals);
                MacroExpr e;
                e.kind = kind;
                e.lhs = lhs;
                e.rhs = rhs;
                m.pool.push_back(e);
                lhs = static_cast<int>(m.pool.size()) - 1;
            } else {
                return lhs;
            }
        }
    }

    int macro_expr_unary(GateMacro& m, const std::vector<std::string>& formals) {
        if (cur_.kind == Token::Kind::Minus) {
            scan();
            int inner = macro_expr_unary(m, formals);
            MacroExpr e;
            e.kind = MacroExpr::Kind::Neg;
            e.lhs = inner;
            m.pool.push_back(e);
            return static_cast<int>(m.pool.size()) - 1;
        }
        if (cur_.kind == Token::Kind::Plus) {
            scan();
            return macro_expr_unary(m, formals);
        }
        return macro_expr_atom(m, formals);
    }

    int macro_expr_atom(GateMacro& m, const std::vector<std::string>& formals) {
        MacroExpr e;
        if (cur_.kind == Token::Kind::Real || cur_.kind == Token::Kind::Integer) {
            e.kind = MacroExpr::Kind::Number;
            e.number = cur_.value;
            scan();
        } else if (cur_.kind == Token::Kind::Identifier && cur_.text == "pi") {
            e.kind = MacroExpr::Kind::Number;
            e.number = kPi;
            scan();
        } else if (cur_.kind == Token::Kind::Identifier) {
            int idx = -1;
            for (size_t i = 0; i < formals.size(); i++) {
                if (formals[i] == cur_.text) {
                    idx = static_cast<int>(i);
                    break;
                }
            }
            if (idx < 0) {
                fail("unknown parameter '" + cur_.text + "' in gate body");
            }
            e.kind = MacroExpr::Kind::Param;
            e.param_index = idx;
            scan();
        } else if (cur_.kind == Token::Kind::LParen) {
            scan();
            int inner = macro_expr_add(m, formals);
            expect(Token::Kind::RParen);
            return inner;
        } else {
            fail("expected expression in gate body");
        }
        m.pool.push_back(e);
        return static_cast<int>(m.pool.size()) - 1;
    }

    // The standard-library gates that the benchmark circuits use, defined as
    // macros over the primitive set. Parsed from an embedded string; no
    // filesystem access.
    void install_qelib() {
        Parser lib(qelib_text());
        while (lib.cur_.kind == Token::Kind::Identifier && lib.cur_.text == "gate") {
            lib.parse_gate_definition();
        }
        for (auto& kv : lib.macros_) {
            macros_.insert_or_assign(kv.first, std::move(kv.second));
        }
    }

    static const std::string& qelib_text() {
        static const std::string text =
            "gate u2(phi,lambda) q { u3(pi/2,phi,lambda) q; }\n"
            "gate u(theta,phi,lambda) q { u3(theta,phi,lambda) q; }\n"
            "gate p(lambda) q { u1(lambda) q; }\n"
            "gate rx(theta) a { u3(theta,-pi/2,pi/2) a; }\n"
            "gate ry(theta) a { u3(theta,0,0) a; }\n"
            "gate cy a,b { sdg b; cx a,b; s b; }\n"
            "gate ch a,b { h b; sdg b; cx a,b; h b; t b; cx a,b; t b; h b; s b; x b; s a; }\n"
            "gate ccx a,b,c { h c; cx b,c; tdg c; cx a,c; t c; cx b,c; tdg c; cx a,c; t b; t c; h c; cx a,b; t a; "
            "tdg b; cx a,b; }\n"
            "gate crz(lambda) a,b { u1(lambda/2) b; cx a,b; u1(-lambda/2) b; cx a,b; }\n"
            "gate cu1(lambda) a,b { u1(lambda/2) a; cx a,b; u1(-lambda/2) b; cx a,b; u1(lambda/2) b; }\n"
            "gate cp(lambda) a,b { u1(lambda/2) a; cx a,b; u1(-lambda/2) b; cx a,b; u1(lambda/2) b; }\n"
            "gate cu3(theta,phi,lambda) c,t { u1((lambda+phi)/2) c; u1((lambda-phi)/2) t; cx c,t; "
            "u3(-theta/2,0,-(phi+lambda)/2) t; cx c,t; u3(theta/2,phi,0) t; }\n"
            "gate rzz(theta) a,b { cx a,b; u1(theta) b; cx a,b; }\n";
        return text;
    }

    Lexer lexer_;
    Token cur_;
    QasmProgram program_;
    std::map<std::string, int> qreg_offset_;
    std::map<std::string, GateMacro> macros_;
};

}  // namespace

QasmProgram parse_qasm(const std::string& text) {
    return Parser(text).parse();
}

QasmProgram parse_qasm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open qasm file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_qasm(ss.str());
}

GateCircuit lower(const QasmProgram& program) {
    if (program.n_qubits == 0) {
        throw std::invalid_argument("program declares no qubits");
    }
    GateCircuit c;
    c.n = program.n_qubits;
    std::vector<int> per_qubit_count(c.n, 0);
    int global_count = 0;
    for (const auto& st : program.statements) {
        if (st.kind != QasmStatement::Kind::GateCall) {
            continue;  // barriers and measurements take no part in fidelity runs
        }
        Gate g{st.gate, st.qubits, st.params};
        if (!gate_is_clifford(g)) {
            c.clifford = false;
        }
        int gi = static_cast<int>(c.gates.size());
        c.gates.push_back(g);
        if (gate_is_two_qubit(g)) {
            TwirlUnit unit;
            unit.gate_begin = gi;
            unit.gate_end = gi + 1;
            unit.qubits = g.qubits;
            unit.tableau = CliffordTableau::for_gate(c.n, g.name, g.qubits);
            c.twirl_units.push_back(std::move(unit));
            global_count++;
            for (int q : g.qubits) {
                per_qubit_count[q]++;
                NoiseSite s;
                s.qubit = q;
                s.time_q = per_qubit_count[q];
                s.time_global = global_count;
                s.gate_index = gi;
                c.sites.push_back(s);
            }
        }
    }
    return c;
}

}  // namespace twirlcorr

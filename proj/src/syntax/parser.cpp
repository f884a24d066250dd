// Lexer and recursive-descent parser for the supported JavaScript subset.
// The accepted productions are listed in docs/grammar.md.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "flowmend/syntax.hpp"

namespace flowmend {
namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
    int end_line = 1;
    int end_col = 1;
    bool nl_before = false;
};

const char* const kPuncts[] = {
    "===", "!==", "=>", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", "=", "+", "-", "*", "/", "%", "<", ">", "!", ":",
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;
    bool nl = false;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
                nl = true;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            int l0 = line, c0 = col;
            advance(2);
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
            if (i + 1 >= src.size()) throw ParseError("unterminated comment", l0, c0);
            advance(2);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        t.nl_before = nl;
        nl = false;
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '$'))
                advance(1);
            t.kind = Tok::Ident;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '.')) advance(1);
            t.kind = Tok::Number;
        } else if (c == '"' || c == '\'') {
            advance(1);
            while (i < src.size() && src[i] != c) {
                if (src[i] == '\n') throw ParseError("unterminated string", t.line, t.col);
                advance(src[i] == '\\' ? 2 : 1);
            }
            if (i >= src.size()) throw ParseError("unterminated string", t.line, t.col);
            advance(1);
            t.kind = Tok::String;
        } else {
            bool found = false;
            for (const char* p : kPuncts) {
                std::string_view ps(p);
                if (src.substr(i, ps.size()) == ps) {
                    advance(ps.size());
                    found = true;
                    break;
                }
            }
            if (!found) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            t.kind = Tok::Punct;
        }
        t.text = std::string(src.substr(start, i - start));
        t.end_line = line;
        t.end_col = col;
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    end.end_line = line;
    end.end_col = col;
    end.nl_before = true;
    out.push_back(end);
    return out;
}

bool is_reserved(const std::string& s) {
    static const char* const kw[] = {"var", "let", "const", "if", "else", "return", "throw", "function",
                                     "new", "typeof", "in", "instanceof", "true", "false", "null",
                                     "class", "for", "while", "do", "switch", "try", "catch", "async", "await",
                                     "yield", "import", "export"};
    for (const char* k : kw)
        if (s == k) return true;
    return false;
}

int binary_prec(const Token& t) {
    if (t.kind == Tok::Ident) return (t.text == "in" || t.text == "instanceof") ? 10 : -1;
    if (t.kind != Tok::Punct) return -1;
    const std::string& s = t.text;
    if (s == "||") return 4;
    if (s == "&&") return 5;
    if (s == "==" || s == "!=" || s == "===" || s == "!==") return 9;
    if (s == "<" || s == ">" || s == "<=" || s == ">=") return 10;
    if (s == "+" || s == "-") return 12;
    if (s == "*" || s == "/" || s == "%") return 13;
    return -1;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Tree program() {
        Tree p;
        p.type = NodeType::Program;
        p.span = {1, 1, 1, 1};
        while (peek().kind != Tok::End) {
            if (is_punct(";")) {
                next();
                continue;
            }
            p.kids.push_back(statement());
        }
        if (!p.kids.empty()) {
            p.span.line = p.kids.front().span.line;
            p.span.col = p.kids.front().span.col;
            p.span.end_line = p.kids.back().span.end_line;
            p.span.end_col = p.kids.back().span.end_col;
        }
        return p;
    }

    Tree single_statement() {
        while (is_punct(";")) next();
        Tree s = statement();
        while (is_punct(";")) next();
        expect_end();
        return s;
    }

    Tree single_expression() {
        Tree e = assignment();
        while (is_punct(";")) next();
        expect_end();
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const {
        std::size_t p = pos_ + k;
        return p < toks_.size() ? toks_[p] : toks_.back();
    }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool is_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text == p;
    }
    bool is_word(std::string_view w, std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == w;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", got " + got, t.line, t.col);
    }
    void expect_punct(std::string_view p) {
        if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
        next();
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail("expected end of input");
    }
    std::string identifier() {
        if (peek().kind != Tok::Ident || is_reserved(peek().text)) fail("expected identifier");
        return next().text;
    }

    static Tree node(NodeType t, std::string token, const Token& at) {
        Tree n;
        n.type = t;
        n.token = std::move(token);
        n.span = {at.line, at.col, at.end_line, at.end_col};
        return n;
    }
    void close(Tree& n) const {
        n.span.end_line = prev().end_line;
        n.span.end_col = prev().end_col;
    }
    static Tree leaf(NodeType t, const Token& tok) { return node(t, tok.text, tok); }

    void semicolon() {
        if (is_punct(";")) {
            next();
            return;
        }
        if (is_punct("}") || peek().kind == Tok::End || peek().nl_before) return;
        fail("expected ';'");
    }

    Tree statement() {
        const Token& t = peek();
        if (is_punct("{")) return block();
        if (is_word("var") || is_word("let") || is_word("const")) {
            Tree d = declaration();
            semicolon();
            close(d);
            return d;
        }
        if (is_word("if")) return if_statement();
        if (is_word("return")) {
            Tree r = node(NodeType::ReturnStmt, "", next());
            if (!is_punct(";") && !is_punct("}") && peek().kind != Tok::End && !peek().nl_before)
                r.kids.push_back(assignment());
            semicolon();
            close(r);
            return r;
        }
        if (is_word("throw")) {
            Tree r = node(NodeType::ThrowStmt, "", next());
            r.kids.push_back(assignment());
            semicolon();
            close(r);
            return r;
        }
        if (t.kind == Tok::Ident && is_reserved(t.text) && t.text != "function" && t.text != "new" &&
            t.text != "typeof" && t.text != "true" && t.text != "false" && t.text != "null")
            fail("unsupported statement");
        Tree e = node(NodeType::Expr, "", t);
        e.kids.push_back(assignment());
        semicolon();
        close(e);
        return e;
    }

    Tree block() {
        Tree b = node(NodeType::BlockStmt, "", peek());
        expect_punct("{");
        while (!is_punct("}")) {
            if (peek().kind == Tok::End) fail("expected '}'");
            if (is_punct(";")) {
                next();
                continue;
            }
            b.kids.push_back(statement());
        }
        next();
        close(b);
        return b;
    }

    Tree declaration() {
        Tree d = node(NodeType::DeclExpr, next().text, prev());
        do {
            Tree decl = node(NodeType::Declarator, "", peek());
            Token nameTok = peek();
            decl.kids.push_back(node(NodeType::VarDecl, identifier(), nameTok));
            if (is_punct("=")) {
                next();
                decl.kids.push_back(assignment());
            }
            close(decl);
            d.kids.push_back(std::move(decl));
        } while (is_punct(",") && (next(), true));
        return d;
    }

    Tree if_statement() {
        Tree s = node(NodeType::IfStmt, "", next());
        expect_punct("(");
        s.kids.push_back(expression());
        expect_punct(")");
        s.kids.push_back(statement());
        if (is_word("else")) {
            next();
            s.kids.push_back(statement());
        }
        close(s);
        return s;
    }

    // No comma operator: an expression is an assignment expression.
    Tree expression() { return assignment(); }

    bool arrow_ahead() const {
        if (peek().kind == Tok::Ident && !is_reserved(peek().text) && is_punct("=>", 1)) return true;
        if (!is_punct("(")) return false;
        int depth = 0;
        for (std::size_t k = 0; pos_ + k < toks_.size(); ++k) {
            const Token& t = peek(k);
            if (t.kind == Tok::End) return false;
            if (t.kind == Tok::Punct && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
            if (t.kind == Tok::Punct && (t.text == ")" || t.text == "]" || t.text == "}")) {
                if (--depth == 0) return is_punct("=>", k + 1);
            }
        }
        return false;
    }

    Tree arrow() {
        Tree f = node(NodeType::FuncExpr, "=>", peek());
        if (is_punct("(")) {
            next();
            if (!is_punct(")")) {
                do {
                    Token p = peek();
                    f.kids.push_back(node(NodeType::Param, identifier(), p));
                } while (is_punct(",") && (next(), true));
            }
            expect_punct(")");
        } else {
            Token p = peek();
            f.kids.push_back(node(NodeType::Param, identifier(), p));
        }
        expect_punct("=>");
        if (is_punct("{"))
            f.kids.push_back(block());
        else
            f.kids.push_back(assignment());
        close(f);
        return f;
    }

    Tree assignment() {
        if (arrow_ahead()) return arrow();
        Token start = peek();
        Tree lhs = binary(0);
        if (is_punct("=") || is_punct("+=") || is_punct("-=")) {
            if (lhs.type != NodeType::VarExpr && lhs.type != NodeType::DotExpr && lhs.type != NodeType::IndexExpr)
                fail("invalid assignment target");
            Tree a = node(NodeType::AssignExpr, next().text, start);
            a.kids.push_back(std::move(lhs));
            a.kids.push_back(assignment());
            close(a);
            return a;
        }
        return lhs;
    }

    Tree binary(int min_prec) {
        Token start = peek();
        Tree lhs = unary();
        for (;;) {
            int p = binary_prec(peek());
            if (p < 0 || p < min_prec) break;
            Token op = next();
            Tree rhs = binary(p + 1);
            Tree b = node(NodeType::BinaryExpr, "", start);
            b.kids.push_back(std::move(lhs));
            b.kids.push_back(leaf(NodeType::BinaryOp, op));
            b.kids.push_back(std::move(rhs));
            close(b);
            lhs = std::move(b);
        }
        return lhs;
    }

    Tree unary() {
        if (is_punct("!") || is_punct("-") || is_punct("+") || is_word("typeof")) {
            Tree u = node(NodeType::UnaryExpr, next().text, prev());
            u.kids.push_back(unary());
            close(u);
            return u;
        }
        return postfix(primary());
    }

    Tree postfix(Tree base) {
        for (;;) {
            if (is_punct(".")) {
                next();
                Token nameTok = peek();
                if (nameTok.kind != Tok::Ident) fail("expected property name");
                next();
                Tree d = node(NodeType::DotExpr, "", Token{});
                d.span = base.span;
                d.kids.push_back(std::move(base));
                d.kids.push_back(leaf(NodeType::Label, nameTok));
                close(d);
                base = std::move(d);
            } else if (is_punct("[")) {
                next();
                Tree ix = node(NodeType::IndexExpr, "", Token{});
                ix.span = base.span;
                ix.kids.push_back(std::move(base));
                ix.kids.push_back(expression());
                expect_punct("]");
                close(ix);
                base = std::move(ix);
            } else if (is_punct("(")) {
                Tree c = node(NodeType::CallExpr, "", Token{});
                c.span = base.span;
                c.kids.push_back(std::move(base));
                arguments(c);
                close(c);
                base = std::move(c);
            } else {
                return base;
            }
        }
    }

    void arguments(Tree& call) {
        expect_punct("(");
        if (!is_punct(")")) {
            do {
                if (is_punct(")")) break;
                call.kids.push_back(assignment());
            } while (is_punct(",") && (next(), true));
        }
        expect_punct(")");
    }

    Tree primary() {
        const Token t = peek();
        if (t.kind == Tok::Number || t.kind == Tok::String) return leaf(NodeType::Literal, next());
        if (t.kind == Tok::Punct) {
            if (t.text == "(") {
                next();
                Tree e = expression();
                expect_punct(")");
                return e;
            }
            if (t.text == "{") return object();
            if (t.text == "[") return array();
            fail("expected expression");
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "true" || t.text == "false" || t.text == "null") return leaf(NodeType::Literal, next());
            if (t.text == "function") return function();
            if (t.text == "new") return new_expression();
            if (t.text == "this") return leaf(NodeType::VarExpr, next());
            if (is_reserved(t.text)) fail("unsupported keyword");
            return leaf(NodeType::VarExpr, next());
        }
        fail("expected expression");
    }

    Tree function() {
        Tree f = node(NodeType::FuncExpr, "function", next());
        if (peek().kind == Tok::Ident && !is_reserved(peek().text)) f.token = "function " + next().text;
        expect_punct("(");
        if (!is_punct(")")) {
            do {
                Token p = peek();
                f.kids.push_back(node(NodeType::Param, identifier(), p));
            } while (is_punct(",") && (next(), true));
        }
        expect_punct(")");
        f.kids.push_back(block());
        close(f);
        return f;
    }

    Tree new_expression() {
        Tree n = node(NodeType::NewExpr, "", next());
        Token ct = peek();
        Tree callee = leaf(NodeType::VarExpr, ct);
        identifier();
        while (is_punct(".")) {
            next();
            Token nameTok = peek();
            if (nameTok.kind != Tok::Ident) fail("expected property name");
            next();
            Tree d = node(NodeType::DotExpr, "", ct);
            d.kids.push_back(std::move(callee));
            d.kids.push_back(leaf(NodeType::Label, nameTok));
            close(d);
            callee = std::move(d);
        }
        n.kids.push_back(std::move(callee));
        if (is_punct("(")) arguments(n);
        close(n);
        return n;
    }

    Tree object() {
        Tree o = node(NodeType::ObjectLit, "", next());
        while (!is_punct("}")) {
            const Token k = peek();
            if (k.kind != Tok::Ident && k.kind != Tok::String && k.kind != Tok::Number) fail("expected property key");
            next();
            Tree p = node(NodeType::PropInit, k.text, k);
            expect_punct(":");
            p.kids.push_back(assignment());
            close(p);
            o.kids.push_back(std::move(p));
            if (!is_punct(",")) break;
            next();
        }
        expect_punct("}");
        close(o);
        return o;
    }

    Tree array() {
        Tree a = node(NodeType::ArrayLit, "", next());
        while (!is_punct("]")) {
            a.kids.push_back(assignment());
            if (!is_punct(",")) break;
            next();
        }
        expect_punct("]");
        close(a);
        return a;
    }
};

}  // namespace

AstDoc parse(std::string_view source) {
    Parser p(source);
    return AstDoc::from_tree(p.program());
}

Tree parse_fragment(std::string_view source, bool as_statement) {
    Parser p(source);
    Tree t = as_statement ? p.single_statement() : p.single_expression();
    normalize(t);
    return t;
}

}  // namespace flowmend

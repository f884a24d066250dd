// Canonical source emission. Inline mode produces the one-line text stored as node values;
// pretty mode produces the multi-line file text with two-space indentation.

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "emit_internal.hpp"
#include "flowmend/syntax.hpp"

namespace flowmend {
namespace {

int binary_op_prec(const std::string& op) {
    if (op == "||") return 4;
    if (op == "&&") return 5;
    if (op == "==" || op == "!=" || op == "===" || op == "!==") return 9;
    if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "in" || op == "instanceof") return 10;
    if (op == "+" || op == "-") return 12;
    return 13;
}

int prec(const AstDoc& a, NodeId n) {
    switch (a.type(n)) {
        case NodeType::AssignExpr: return 2;
        case NodeType::FuncExpr: return a.token(n) == "=>" ? 2 : 20;
        case NodeType::BinaryExpr: return binary_op_prec(a.token(a.child(n, 1)));
        case NodeType::UnaryExpr: return 15;
        case NodeType::CallExpr:
        case NodeType::DotExpr:
        case NodeType::IndexExpr:
        case NodeType::NewExpr:
            return 18;
        default: return 20;
    }
}

bool is_plain_function(const AstDoc& a, NodeId n) {
    return a.type(n) == NodeType::FuncExpr && a.token(n) != "=>";
}

/// Whether child `c` of `n` at position `i` needs parentheses.
bool needs_parens(const AstDoc& a, NodeId n, int i, NodeId c) {
    switch (a.type(n)) {
        case NodeType::BinaryExpr: {
            int p = prec(a, n);
            return i == 0 ? prec(a, c) < p : prec(a, c) <= p;
        }
        case NodeType::UnaryExpr: return prec(a, c) < 15;
        case NodeType::CallExpr:
        case NodeType::DotExpr:
        case NodeType::IndexExpr:
            return i == 0 && (prec(a, c) < 18 || is_plain_function(a, c));
        case NodeType::NewExpr:
            return i == 0 && a.type(c) != NodeType::VarExpr && a.type(c) != NodeType::DotExpr;
        case NodeType::FuncExpr:
            return a.type(c) == NodeType::ObjectLit;
        default: return false;
    }
}

/// An expression statement may not begin with `{` or `function`.
bool starts_ambiguous(const AstDoc& a, NodeId n) {
    switch (a.type(n)) {
        case NodeType::ObjectLit: return true;
        case NodeType::FuncExpr: return a.token(n) != "=>";
        case NodeType::CallExpr:
        case NodeType::DotExpr:
        case NodeType::IndexExpr:
        case NodeType::BinaryExpr:
        case NodeType::AssignExpr: {
            NodeId c = a.child(n, 0);
            if (needs_parens(a, n, 0, c)) return false;
            return starts_ambiguous(a, c);
        }
        default: return false;
    }
}

class Printer {
public:
    Printer(const AstDoc& a, bool pretty, bool cached) : a_(a), pretty_(pretty), cached_(cached) {
        if (pretty_) lines_.assign(a.size(), {0, 0});
    }

    std::string out;
    std::vector<std::pair<int, int>> lines_;

    void node(NodeId n) {
        int first = line_;
        emit(n);
        if (pretty_) lines_[static_cast<std::size_t>(n)] = {first, line_};
    }

    void top(NodeId n) {
        if (a_.type(n) == NodeType::Program) {
            int first = line_;
            const auto& ks = a_.children(n);
            for (std::size_t i = 0; i < ks.size(); ++i) {
                if (i) sep();
                node(ks[i]);
            }
            if (pretty_) {
                lines_[static_cast<std::size_t>(n)] = {first, line_};
                if (!ks.empty()) out += '\n';
            }
        } else {
            emit(n);
        }
    }

private:
    const AstDoc& a_;
    bool pretty_;
    bool cached_;
    int indent_ = 0;
    int line_ = 1;

    void sep() {
        if (pretty_) {
            out += '\n';
            ++line_;
            out.append(static_cast<std::size_t>(indent_) * 2, ' ');
        } else {
            out += ' ';
        }
    }

    /// Emits child text, reusing stored values when composing node values.
    void sub(NodeId c) {
        if (cached_) {
            out += a_.value(c);
            return;
        }
        node(c);
    }

    void wrapped(NodeId n, int i, NodeId c) {
        bool p = needs_parens(a_, n, i, c);
        if (p) out += '(';
        sub(c);
        if (p) out += ')';
    }

    void list(const std::vector<NodeId>& ks, std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to; ++i) {
            if (i > from) out += ", ";
            sub(ks[i]);
        }
    }

    void block(NodeId n) {
        const auto& ks = a_.children(n);
        if (ks.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        ++indent_;
        for (NodeId k : ks) {
            sep();
            sub(k);
        }
        --indent_;
        sep();
        out += '}';
    }

    void emit(NodeId n) {
        const auto& ks = a_.children(n);
        const std::string& tok = a_.token(n);
        switch (a_.type(n)) {
            case NodeType::Program:
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    if (i) sep();
                    sub(ks[i]);
                }
                break;
            case NodeType::BlockStmt: block(n); break;
            case NodeType::IfStmt:
                out += "if (";
                sub(ks[0]);
                out += ") ";
                sub(ks[1]);
                if (ks.size() == 3) {
                    out += " else ";
                    sub(ks[2]);
                }
                break;
            case NodeType::Expr: {
                bool p = starts_ambiguous(a_, ks[0]);
                if (p) out += '(';
                sub(ks[0]);
                if (p) out += ')';
                out += ';';
                break;
            }
            case NodeType::CallExpr:
                wrapped(n, 0, ks[0]);
                out += '(';
                list(ks, 1, ks.size());
                out += ')';
                break;
            case NodeType::NewExpr:
                out += "new ";
                wrapped(n, 0, ks[0]);
                out += '(';
                list(ks, 1, ks.size());
                out += ')';
                break;
            case NodeType::IndexExpr:
                wrapped(n, 0, ks[0]);
                out += '[';
                sub(ks[1]);
                out += ']';
                break;
            case NodeType::DotExpr:
                wrapped(n, 0, ks[0]);
                out += '.';
                sub(ks[1]);
                break;
            case NodeType::DeclExpr:
                out += tok;
                out += ' ';
                list(ks, 0, ks.size());
                out += ';';
                break;
            case NodeType::Declarator:
                sub(ks[0]);
                if (ks.size() == 2) {
                    out += " = ";
                    sub(ks[1]);
                }
                break;
            case NodeType::AssignExpr:
                sub(ks[0]);
                out += ' ';
                out += tok.empty() ? "=" : tok;
                out += ' ';
                sub(ks[1]);
                break;
            case NodeType::BinaryExpr:
                wrapped(n, 0, ks[0]);
                out += ' ';
                sub(ks[1]);
                out += ' ';
                wrapped(n, 2, ks[2]);
                break;
            case NodeType::UnaryExpr: {
                out += tok;
                bool word = !tok.empty() && std::isalpha(static_cast<unsigned char>(tok[0]));
                NodeId c = ks[0];
                bool clash = !word && a_.type(c) == NodeType::UnaryExpr && !needs_parens(a_, n, 0, c) &&
                             (tok == "-" || tok == "+") && a_.token(c) == tok;
                if (word || clash) out += ' ';
                wrapped(n, 0, c);
                break;
            }
            case NodeType::ReturnStmt:
                out += "return";
                if (!ks.empty()) {
                    out += ' ';
                    sub(ks[0]);
                }
                out += ';';
                break;
            case NodeType::ThrowStmt:
                out += "throw ";
                sub(ks[0]);
                out += ';';
                break;
            case NodeType::FuncExpr: {
                const std::size_t np = ks.size() - 1;
                if (tok == "=>") {
                    out += '(';
                    list(ks, 0, np);
                    out += ") => ";
                    wrapped(n, static_cast<int>(np), ks[np]);
                } else {
                    out += tok;
                    if (tok == "function") out += ' ';
                    out += '(';
                    list(ks, 0, np);
                    out += ") ";
                    sub(ks[np]);
                }
                break;
            }
            case NodeType::ObjectLit:
                out += '{';
                list(ks, 0, ks.size());
                out += '}';
                break;
            case NodeType::PropInit:
                out += tok;
                out += ": ";
                sub(ks[0]);
                break;
            case NodeType::ArrayLit:
                out += '[';
                list(ks, 0, ks.size());
                out += ']';
                break;
            case NodeType::VarExpr:
            case NodeType::VarDecl:
            case NodeType::BinaryOp:
            case NodeType::Param:
            case NodeType::Label:
            case NodeType::Literal:
                out += tok;
                break;
        }
    }
};

}  // namespace

namespace detail {

std::string compose_inline(const AstDoc& ast, NodeId n) {
    Printer p(ast, false, true);
    p.node(n);
    return std::move(p.out);
}

}  // namespace detail

std::string emit(const AstDoc& ast) { return emit_with_lines(ast).text; }

EmitResult emit_with_lines(const AstDoc& ast) {
    EmitResult r;
    if (ast.size() == 0) return r;
    Printer p(ast, true, false);
    p.top(ast.root());
    r.text = std::move(p.out);
    r.lines = std::move(p.lines_);
    return r;
}

std::string emit_inline(const Tree& t) {
    AstDoc d = AstDoc::from_tree(t);
    return d.value(d.root());
}

}  // namespace flowmend

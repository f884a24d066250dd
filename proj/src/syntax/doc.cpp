#include <algorithm>
#include <array>
#include <functional>

#include "flowmend/syntax.hpp"
#include "emit_internal.hpp"

namespace flowmend {

namespace {

constexpr std::array<std::string_view, 25> kTypeNames = {
    "BlockStmt", "IfStmt", "Expr", "CallExpr", "IndexExpr", "DotExpr", "VarExpr", "VarDecl",
    "DeclExpr", "Declarator", "AssignExpr", "BinaryExpr", "BinaryOp", "UnaryExpr", "ReturnStmt",
    "FuncExpr", "Param", "Label", "Literal", "Program", "ObjectLit", "PropInit",
    "ArrayLit", "NewExpr", "ThrowStmt",
};
constexpr std::array<std::string_view, 4> kEdgeNames = {"SynParent", "SynChild", "SemParent", "SemChild"};
constexpr std::array<std::string_view, 5> kAnnotNames = {"source", "sink", "sanitizer", "guard", "witness"};

bool is_statement(NodeType t) {
    switch (t) {
        case NodeType::BlockStmt:
        case NodeType::IfStmt:
        case NodeType::Expr:
        case NodeType::DeclExpr:
        case NodeType::ReturnStmt:
        case NodeType::ThrowStmt:
            return true;
        default:
            return false;
    }
}

bool is_expression(NodeType t) {
    switch (t) {
        case NodeType::CallExpr:
        case NodeType::IndexExpr:
        case NodeType::DotExpr:
        case NodeType::VarExpr:
        case NodeType::AssignExpr:
        case NodeType::BinaryExpr:
        case NodeType::UnaryExpr:
        case NodeType::FuncExpr:
        case NodeType::Literal:
        case NodeType::ObjectLit:
        case NodeType::ArrayLit:
        case NodeType::NewExpr:
            return true;
        default:
            return false;
    }
}

/// What a child slot accepts; checked after normalization.
enum class Slot { Statement, Expression, Block, BlockOrIf, Name, Param, Label, Declarator, Op, Prop, BodyOrExpr };

Slot slot_of(NodeType parent, std::size_t i, std::size_t n) {
    switch (parent) {
        case NodeType::Program:
        case NodeType::BlockStmt:
            return Slot::Statement;
        case NodeType::IfStmt:
            return i == 0 ? Slot::Expression : i == 1 ? Slot::Block : Slot::BlockOrIf;
        case NodeType::DeclExpr:
            return Slot::Declarator;
        case NodeType::Declarator:
            return i == 0 ? Slot::Name : Slot::Expression;
        case NodeType::DotExpr:
            return i == 0 ? Slot::Expression : Slot::Label;
        case NodeType::BinaryExpr:
            return i == 1 ? Slot::Op : Slot::Expression;
        case NodeType::FuncExpr:
            return i + 1 < n ? Slot::Param : Slot::BodyOrExpr;
        case NodeType::ObjectLit:
            return Slot::Prop;
        default:
            return Slot::Expression;
    }
}

bool slot_accepts(Slot s, NodeType t) {
    switch (s) {
        case Slot::Statement: return is_statement(t);
        case Slot::Expression: return is_expression(t);
        case Slot::Block: return t == NodeType::BlockStmt;
        case Slot::BlockOrIf: return t == NodeType::BlockStmt || t == NodeType::IfStmt;
        case Slot::Name: return t == NodeType::VarDecl;
        case Slot::Param: return t == NodeType::Param;
        case Slot::Label: return t == NodeType::Label;
        case Slot::Declarator: return t == NodeType::Declarator;
        case Slot::Op: return t == NodeType::BinaryOp;
        case Slot::Prop: return t == NodeType::PropInit;
        case Slot::BodyOrExpr: return t == NodeType::BlockStmt || is_expression(t);
    }
    return false;
}

Tree wrap_block(Tree&& t) {
    Tree b;
    b.type = NodeType::BlockStmt;
    b.span = t.span;
    b.kids.push_back(std::move(t));
    return b;
}

}  // namespace

std::string_view to_string(NodeType t) { return kTypeNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(EdgeKind k) { return kEdgeNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(Annotation a) { return kAnnotNames[static_cast<std::size_t>(a)]; }

std::optional<NodeType> node_type_from(std::string_view s) {
    for (std::size_t i = 0; i < kTypeNames.size(); ++i)
        if (kTypeNames[i] == s) return static_cast<NodeType>(i);
    return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from(std::string_view s) {
    for (std::size_t i = 0; i < kEdgeNames.size(); ++i)
        if (kEdgeNames[i] == s) return static_cast<EdgeKind>(i);
    return std::nullopt;
}

bool arity_ok(NodeType t, std::size_t n) {
    switch (t) {
        case NodeType::BlockStmt:
        case NodeType::Program:
        case NodeType::ObjectLit:
        case NodeType::ArrayLit:
            return true;
        case NodeType::IfStmt: return n == 2 || n == 3;
        case NodeType::Expr:
        case NodeType::UnaryExpr:
        case NodeType::PropInit:
        case NodeType::ThrowStmt:
            return n == 1;
        case NodeType::CallExpr:
        case NodeType::NewExpr:
        case NodeType::DeclExpr:
        case NodeType::FuncExpr:
            return n >= 1;
        case NodeType::IndexExpr:
        case NodeType::DotExpr:
        case NodeType::AssignExpr:
            return n == 2;
        case NodeType::BinaryExpr: return n == 3;
        case NodeType::Declarator: return n == 1 || n == 2;
        case NodeType::ReturnStmt: return n <= 1;
        case NodeType::VarExpr:
        case NodeType::VarDecl:
        case NodeType::BinaryOp:
        case NodeType::Param:
        case NodeType::Label:
        case NodeType::Literal:
            return n == 0;
    }
    return false;
}

void normalize(Tree& t) {
    const std::size_t n = t.kids.size();
    for (std::size_t i = 0; i < n; ++i) {
        Tree& k = t.kids[i];
        Slot s = slot_of(t.type, i, n);
        if (is_name_leaf(k.type)) {
            switch (s) {
                case Slot::Name: k.type = NodeType::VarDecl; break;
                case Slot::Param: k.type = NodeType::Param; break;
                case Slot::Label: k.type = NodeType::Label; break;
                default: k.type = NodeType::VarExpr; break;
            }
        }
        if ((s == Slot::Block || s == Slot::BlockOrIf) && is_statement(k.type) && !slot_accepts(s, k.type))
            k = wrap_block(std::move(k));
        normalize(k);
    }
}

NodeId AstDoc::child(NodeId n, int i) const {
    const auto& ks = kids_.at(n);
    if (i < 0 || static_cast<std::size_t>(i) >= ks.size())
        throw IndexOutOfRange("child " + std::to_string(i) + " of node " + std::to_string(n));
    return ks[static_cast<std::size_t>(i)];
}

AstDoc AstDoc::from_tree(const Tree& input) {
    Tree t = input;
    normalize(t);
    AstDoc d;
    std::function<NodeId(const Tree&, NodeId)> flatten = [&](const Tree& x, NodeId parent) -> NodeId {
        if (!arity_ok(x.type, x.kids.size()))
            throw MalformedTree(std::string(to_string(x.type)) + " with " + std::to_string(x.kids.size()) +
                                " children");
        for (std::size_t i = 0; i < x.kids.size(); ++i) {
            Slot s = slot_of(x.type, i, x.kids.size());
            if (!slot_accepts(s, x.kids[i].type))
                throw MalformedTree(std::string(to_string(x.kids[i].type)) + " cannot be child " +
                                    std::to_string(i) + " of " + std::string(to_string(x.type)));
        }
        if (x.type == NodeType::FuncExpr && x.token != "=>" && x.kids.back().type != NodeType::BlockStmt)
            throw MalformedTree("function body must be a block");
        NodeId id = static_cast<NodeId>(d.types_.size());
        d.types_.push_back(x.type);
        d.tokens_.push_back(x.token);
        d.parents_.push_back(parent);
        d.kids_.emplace_back();
        d.origins_.push_back(x.origin);
        d.spans_.push_back(x.span);
        d.ends_.push_back(id);
        for (const Tree& k : x.kids) {
            NodeId c = flatten(k, id);
            d.kids_[static_cast<std::size_t>(id)].push_back(c);
        }
        d.ends_[static_cast<std::size_t>(id)] = static_cast<NodeId>(d.types_.size()) - 1;
        return id;
    };
    flatten(t, kNoNode);
    const std::size_t n = d.types_.size();
    d.values_.assign(n, std::string());
    for (std::size_t i = n; i-- > 0;) d.values_[i] = detail::compose_inline(d, static_cast<NodeId>(i));
    d.sem_kids_.assign(n, {});
    d.sem_parents_.assign(n, {});
    d.annots_.assign(n, 0);
    return d;
}

void AstDoc::add_sem_edge(NodeId from, NodeId to) {
    auto& ks = sem_kids_.at(from);
    auto it = std::lower_bound(ks.begin(), ks.end(), to);
    if (it != ks.end() && *it == to) return;
    ks.insert(it, to);
    auto& ps = sem_parents_.at(to);
    ps.insert(std::lower_bound(ps.begin(), ps.end(), from), from);
}

void AstDoc::clear_semantics() {
    for (auto& v : sem_kids_) v.clear();
    for (auto& v : sem_parents_) v.clear();
    std::fill(annots_.begin(), annots_.end(), 0);
}

std::vector<Edge> AstDoc::edges() const {
    std::vector<Edge> out;
    for (NodeId n = 0; n < static_cast<NodeId>(size()); ++n) {
        if (parents_[n] != kNoNode) out.push_back({n, parents_[n], EdgeKind::SynParent, -1});
        for (std::size_t i = 0; i < kids_[n].size(); ++i)
            out.push_back({n, kids_[n][i], EdgeKind::SynChild, static_cast<int>(i)});
        for (NodeId p : sem_parents_[n]) out.push_back({n, p, EdgeKind::SemParent, -1});
        for (std::size_t i = 0; i < sem_kids_[n].size(); ++i)
            out.push_back({n, sem_kids_[n][i], EdgeKind::SemChild, static_cast<int>(i)});
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.kind, a.index, a.dst) < std::tie(b.src, b.kind, b.index, b.dst);
    });
    return out;
}

std::size_t AstDoc::sem_edge_count() const {
    std::size_t c = 0;
    for (const auto& v : sem_kids_) c += v.size();
    return c;
}

Tree AstDoc::subtree(NodeId n) const {
    Tree t;
    t.type = types_.at(n);
    t.token = tokens_[n];
    t.origin = n;
    t.span = spans_[n];
    t.kids.reserve(kids_[n].size());
    for (NodeId c : kids_[n]) t.kids.push_back(subtree(c));
    return t;
}

std::vector<int> AstDoc::path_of(NodeId n) const {
    std::vector<int> path;
    while (parents_.at(n) != kNoNode) {
        NodeId p = parents_[n];
        const auto& ks = kids_[p];
        path.push_back(static_cast<int>(std::find(ks.begin(), ks.end(), n) - ks.begin()));
        n = p;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

NodeId AstDoc::node_at(const std::vector<int>& path) const {
    NodeId n = root();
    for (int i : path) n = child(n, i);
    return n;
}

NodeId AstDoc::find_origin(NodeId o) const {
    if (o == kNoNode) return kNoNode;
    for (NodeId n = 0; n < static_cast<NodeId>(size()); ++n)
        if (origins_[n] == o) return n;
    return kNoNode;
}

int child_index(const AstDoc& ast, NodeId parent, NodeId child) {
    const auto& ks = ast.children(parent);
    auto it = std::find(ks.begin(), ks.end(), child);
    if (it == ks.end())
        throw NotAChild("node " + std::to_string(child) + " is not a child of " + std::to_string(parent));
    return static_cast<int>(it - ks.begin());
}

int child_index_containing(const AstDoc& ast, NodeId ancestor, NodeId n) {
    if (n == ancestor || !ast.contains(ancestor, n))
        throw NotAnAncestor("node " + std::to_string(ancestor) + " is not a proper ancestor of " +
                            std::to_string(n));
    while (ast.parent(n) != ancestor) n = ast.parent(n);
    return child_index(ast, ancestor, n);
}

namespace {

Tree* descend(Tree& root, const std::vector<int>& path) {
    Tree* t = &root;
    for (int i : path) t = &t->kids[static_cast<std::size_t>(i)];
    return t;
}

template <typename F>
AstDoc edit_at(const AstDoc& ast, NodeId parent, F&& f) {
    Tree whole = ast.subtree(ast.root());
    Tree* p = descend(whole, ast.path_of(parent));
    f(*p);
    return AstDoc::from_tree(whole);
}

}  // namespace

AstDoc replace_child(const AstDoc& ast, NodeId parent, int index, const Tree& subtree) {
    if (index < 0 || static_cast<std::size_t>(index) >= ast.children(parent).size())
        throw IndexOutOfRange("replace at " + std::to_string(index) + " of " +
                              std::to_string(ast.children(parent).size()));
    return edit_at(ast, parent, [&](Tree& p) { p.kids[static_cast<std::size_t>(index)] = subtree; });
}

AstDoc insert_child(const AstDoc& ast, NodeId parent, int index, const Tree& subtree) {
    if (!is_statement_list(ast.type(parent)))
        throw NotAStatementList(std::string(to_string(ast.type(parent))) + " is not a statement list");
    if (index < 0 || static_cast<std::size_t>(index) > ast.children(parent).size())
        throw IndexOutOfRange("insert at " + std::to_string(index) + " of " +
                              std::to_string(ast.children(parent).size()));
    return edit_at(ast, parent, [&](Tree& p) { p.kids.insert(p.kids.begin() + index, subtree); });
}

AstDoc remove_child(const AstDoc& ast, NodeId parent, int index) {
    if (!is_statement_list(ast.type(parent)))
        throw NotAStatementList(std::string(to_string(ast.type(parent))) + " is not a statement list");
    if (index < 0 || static_cast<std::size_t>(index) >= ast.children(parent).size())
        throw IndexOutOfRange("remove at " + std::to_string(index));
    return edit_at(ast, parent, [&](Tree& p) { p.kids.erase(p.kids.begin() + index); });
}

AstDoc splice_children(const AstDoc& ast, NodeId parent, int index, const std::vector<Tree>& stmts) {
    if (!is_statement_list(ast.type(parent)))
        throw NotAStatementList(std::string(to_string(ast.type(parent))) + " is not a statement list");
    if (index < 0 || static_cast<std::size_t>(index) >= ast.children(parent).size())
        throw IndexOutOfRange("splice at " + std::to_string(index));
    return edit_at(ast, parent, [&](Tree& p) {
        p.kids.erase(p.kids.begin() + index);
        p.kids.insert(p.kids.begin() + index, stmts.begin(), stmts.end());
    });
}

bool same_tree(const AstDoc& a, NodeId na, const AstDoc& b, NodeId nb) {
    if (a.type(na) != b.type(nb) || a.token(na) != b.token(nb)) return false;
    const auto& ka = a.children(na);
    const auto& kb = b.children(nb);
    if (ka.size() != kb.size()) return false;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (!same_tree(a, ka[i], b, kb[i])) return false;
    return true;
}

bool same_tree(const AstDoc& a, const AstDoc& b) {
    if (a.size() != b.size()) return false;
    if (a.size() == 0) return true;
    return same_tree(a, a.root(), b, b.root());
}

bool same_tree(const Tree& a, const Tree& b) {
    if (a.type != b.type || a.token != b.token || a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!same_tree(a.kids[i], b.kids[i])) return false;
    return true;
}

}  // namespace flowmend

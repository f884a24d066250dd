#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowmend/errors.hpp"

namespace flowmend {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

enum class NodeType : std::uint8_t {
    BlockStmt, IfStmt, Expr, CallExpr, IndexExpr, DotExpr, VarExpr, VarDecl,
    DeclExpr, Declarator, AssignExpr, BinaryExpr, BinaryOp, UnaryExpr, ReturnStmt,
    FuncExpr, Param, Label, Literal, Program, ObjectLit, PropInit,
    ArrayLit, NewExpr, ThrowStmt,
};

enum class EdgeKind : std::uint8_t { SynParent, SynChild, SemParent, SemChild };

enum class Annotation : std::uint8_t { Source, Sink, Sanitizer, Guard, Witness };

std::string_view to_string(NodeType t);
std::string_view to_string(EdgeKind k);
std::string_view to_string(Annotation a);
std::optional<NodeType> node_type_from(std::string_view s);
std::optional<EdgeKind> edge_kind_from(std::string_view s);

inline bool is_child_kind(EdgeKind k) { return k == EdgeKind::SynChild || k == EdgeKind::SemChild; }
inline bool is_syntactic(EdgeKind k) { return k == EdgeKind::SynChild || k == EdgeKind::SynParent; }

/// Identifier-like leaves; they are retyped by position during normalization.
inline bool is_name_leaf(NodeType t) {
    return t == NodeType::VarExpr || t == NodeType::VarDecl || t == NodeType::Param || t == NodeType::Label;
}
inline bool is_statement_list(NodeType t) { return t == NodeType::BlockStmt || t == NodeType::Program; }

/// Child-count constraint for a node type.
bool arity_ok(NodeType t, std::size_t n);

struct Span {
    int line = 0;
    int col = 0;
    int end_line = 0;
    int end_col = 0;
};

struct Edge {
    NodeId src;
    NodeId dst;
    EdgeKind kind;
    int index;
    bool operator==(const Edge&) const = default;
};

/// Owned syntax fragment: the transport format for edits and materialization.
/// `token` holds the identifier, literal text, operator, or keyword of the node.
struct Tree {
    NodeType type = NodeType::Program;
    std::string token;
    std::vector<Tree> kids;
    NodeId origin = kNoNode;
    Span span;
};

/// The annotated AST: nodes with dense preorder ids, values, types, typed edges and annotations.
/// Syntactic structure is fixed at construction; semantic edges and annotations are added by
/// the analysis on its own copy.
class AstDoc {
public:
    AstDoc() = default;

    /// Normalizes and validates the tree; ids are assigned in preorder.
    static AstDoc from_tree(const Tree& t);

    std::size_t size() const { return types_.size(); }
    NodeId root() const { return size() ? 0 : kNoNode; }

    NodeType type(NodeId n) const { return types_.at(n); }
    const std::string& token(NodeId n) const { return tokens_.at(n); }
    const std::string& value(NodeId n) const { return values_.at(n); }
    NodeId parent(NodeId n) const { return parents_.at(n); }
    const std::vector<NodeId>& children(NodeId n) const { return kids_.at(n); }
    NodeId child(NodeId n, int i) const;
    NodeId origin(NodeId n) const { return origins_.at(n); }
    const Span& span(NodeId n) const { return spans_.at(n); }

    /// Semantic children/parents, each ordered by node id.
    const std::vector<NodeId>& sem_children(NodeId n) const { return sem_kids_.at(n); }
    const std::vector<NodeId>& sem_parents(NodeId n) const { return sem_parents_.at(n); }

    bool has(NodeId n, Annotation a) const { return (annots_.at(n) >> static_cast<int>(a)) & 1u; }
    std::uint8_t annotations(NodeId n) const { return annots_.at(n); }

    void add_sem_edge(NodeId from, NodeId to);
    void annotate(NodeId n, Annotation a) { annots_.at(n) |= static_cast<std::uint8_t>(1u << static_cast<int>(a)); }
    void clear_semantics();

    /// Full edge set in canonical order (by src, then kind, then index, then dst).
    std::vector<Edge> edges() const;
    std::size_t sem_edge_count() const;

    /// Deep copy of the subtree at n; origins point at this document's ids.
    Tree subtree(NodeId n) const;
    /// Last node id (inclusive) of the preorder range spanned by n's subtree.
    NodeId subtree_end(NodeId n) const { return ends_.at(n); }
    bool contains(NodeId ancestor, NodeId n) const { return n >= ancestor && n <= ends_.at(ancestor); }

    /// Child-index path from the root.
    std::vector<int> path_of(NodeId n) const;
    NodeId node_at(const std::vector<int>& path) const;

    /// First node whose origin is `o`, or kNoNode.
    NodeId find_origin(NodeId o) const;

private:
    std::vector<NodeType> types_;
    std::vector<std::string> tokens_;
    std::vector<std::string> values_;
    std::vector<NodeId> parents_;
    std::vector<std::vector<NodeId>> kids_;
    std::vector<NodeId> origins_;
    std::vector<Span> spans_;
    std::vector<NodeId> ends_;
    std::vector<std::vector<NodeId>> sem_kids_;
    std::vector<std::vector<NodeId>> sem_parents_;
    std::vector<std::uint8_t> annots_;
};

/// Puts a fragment in canonical form: if-branches become blocks, name leaves take the type
/// their position implies.
void normalize(Tree& t);

/// Parses a whole program.
AstDoc parse(std::string_view source);
/// Parses a single statement (as_statement) or expression into a fragment.
Tree parse_fragment(std::string_view source, bool as_statement);

/// Canonical multi-line source text.
std::string emit(const AstDoc& ast);
/// Canonical single-line text of a fragment (the same text node values use).
std::string emit_inline(const Tree& t);

/// Emission that also reports the 1-based line range of every node.
struct EmitResult {
    std::string text;
    std::vector<std::pair<int, int>> lines;
};
EmitResult emit_with_lines(const AstDoc& ast);

int child_index(const AstDoc& ast, NodeId parent, NodeId child);
/// Index of the child of `ancestor` that equals or contains `n`.
int child_index_containing(const AstDoc& ast, NodeId ancestor, NodeId n);

/// Both edits keep every untouched node's origin pointing at its id in `ast`.
AstDoc replace_child(const AstDoc& ast, NodeId parent, int index, const Tree& subtree);
AstDoc insert_child(const AstDoc& ast, NodeId parent, int index, const Tree& subtree);
/// Removes a statement from a statement list.
AstDoc remove_child(const AstDoc& ast, NodeId parent, int index);
/// Replaces one statement-list child with several statements.
AstDoc splice_children(const AstDoc& ast, NodeId parent, int index, const std::vector<Tree>& stmts);

/// Structural equality: types, tokens and child order.
bool same_tree(const AstDoc& a, NodeId na, const AstDoc& b, NodeId nb);
bool same_tree(const AstDoc& a, const AstDoc& b);
bool same_tree(const Tree& a, const Tree& b);

}  // namespace flowmend

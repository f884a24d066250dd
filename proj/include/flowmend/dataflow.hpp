#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowmend/syntax.hpp"

namespace flowmend {

struct SourcePattern {
    enum class Kind { HandlerParam, CallResult, NamedParam };
    Kind kind = Kind::NamedParam;
    /// Registrar, callee or parameter name depending on kind.
    std::string name;
    int index = 0;
};

struct SinkPattern {
    enum class Kind { DynamicCall, CallArg };
    Kind kind = Kind::DynamicCall;
    std::string callee;
    int index = 0;
};

struct GuardPattern {
    enum class Kind { MethodCall, TypeofCheck, InOperator };
    Kind kind = Kind::InOperator;
    /// Method name or required type; empty for InOperator.
    std::string name;
};

struct VulnSpec {
    std::string name;
    std::vector<SourcePattern> sources;
    std::vector<SinkPattern> sinks;
    std::vector<std::string> sanitizers;
    std::vector<GuardPattern> guards;
};

/// Reads one or more YAML documents, each describing one spec. See docs/flowspec.md.
std::vector<VulnSpec> load_spec(const std::string& path);
std::vector<VulnSpec> parse_spec(const std::string& text);
/// YAML text that parse_spec reads back to an equal spec.
std::string format_spec(const VulnSpec& s);

/// How a guard protects its region.
enum class GuardShape {
    IfThen,       ///< positive check in an if-condition; region is the then-branch
    EarlyReturn,  ///< negative check whose then-branch only returns or throws; region is the rest of the block
    AndOperand,   ///< positive left operand of `&&`; region is the right operand
};

struct GuardInfo {
    NodeId guard = kNoNode;
    /// The checked expression (call argument, typeof operand, `in` key).
    NodeId checked = kNoNode;
    GuardShape shape = GuardShape::IfThen;
    /// The IfStmt or `&&` BinaryExpr that gives the guard its region.
    NodeId owner = kNoNode;
};

struct AnnotatedAst {
    AstDoc doc;
    VulnSpec spec;
    std::vector<NodeId> sources;
    std::vector<NodeId> sinks;
    std::vector<NodeId> sanitizers;
    std::vector<NodeId> guards;
    std::vector<GuardInfo> guard_info;

    const GuardInfo* guard(NodeId n) const;
};

/// Adds dataflow edges and annotations. `ast` must carry no semantic edges.
AnnotatedAst annotate(const AstDoc& ast, const VulnSpec& spec);

/// One (source, witness?, sink) slice. `doc` is the per-flow view: the annotated document
/// with its semantic edges restricted to those lying on some source-to-sink path.
struct FlowTriple {
    NodeId source = kNoNode;
    NodeId sink = kNoNode;
    std::optional<NodeId> witness;
    AstDoc doc;
};

/// View of `aast` for one flow: keeps semantic edges a -> b with a reachable from source and
/// sink reachable from b.
FlowTriple make_triple(const AnnotatedAst& aast, NodeId source, NodeId sink, std::optional<NodeId> witness);

/// One triple per connected (source, sink), ordered by source then sink. The witness is the
/// lowest-id sanitizer or guard whose removal disconnects source from sink.
std::vector<FlowTriple> slice(const AnnotatedAst& aast);

}  // namespace flowmend

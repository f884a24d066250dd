#pragma once

#include <string>
#include <vector>

#include "flowmend/dataflow.hpp"

namespace flowmend {

enum class EditType { Insert, Replace };

std::string_view to_string(EditType t);

/// A repair unit: at child slot `index` of `editloc`, insert or replace with `editprog`.
struct Edit {
    EditType type = EditType::Replace;
    NodeId editloc = kNoNode;
    int index = 0;
    Tree editprog;
    /// The flow in the unsafe document this edit repairs.
    FlowTriple triple;
};

struct PairedExample {
    std::string id;
    AnnotatedAst unsafe;
    Edit edit;
    /// The safe program, with removed exits and messages normalized where the edit carries them.
    AstDoc safe;
};

/// Applies the edit primitive to a document (ids in `edit` refer to `unsafe`).
AstDoc apply_edit(const AstDoc& unsafe, const Edit& edit);

/// Both build the unsafe side and the captured edit from a witnessed flow of `safe`.
PairedExample remove_guard(const AnnotatedAst& safe, const FlowTriple& triple);
PairedExample remove_sanitizer(const AnnotatedAst& safe, const FlowTriple& triple);

struct SkippedTriple {
    std::string file;
    NodeId source;
    NodeId witness;
    NodeId sink;
    std::string reason;
};

struct MineResult {
    std::vector<PairedExample> pairs;
    std::vector<SkippedTriple> skipped;
    std::size_t witness_triples = 0;
};

struct CorpusFile {
    std::string name;
    AnnotatedAst aast;
};

/// One pair per witness triple whose removal flips the flow from safe to vulnerable and whose
/// edit round-trips; everything else is recorded in `skipped`.
MineResult make_pairs(const std::vector<CorpusFile>& corpus);

}  // namespace flowmend

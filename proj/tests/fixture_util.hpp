#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "flowmend/dataflow.hpp"

namespace testutil {

inline std::string root_path(const std::string& rel) { return std::string(FLOWMEND_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) {
    std::ifstream in(root_path(rel));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline flowmend::VulnSpec spec(const std::string& name) {
    return flowmend::load_spec(root_path("specs/" + name + ".flowspec")).at(0);
}

inline flowmend::AnnotatedAst annotated(const std::string& rel, const std::string& spec_name) {
    return flowmend::annotate(flowmend::parse(slurp(rel)), spec(spec_name));
}

/// First node whose inline value and type match.
inline flowmend::NodeId find(const flowmend::AstDoc& d, flowmend::NodeType t, const std::string& value) {
    for (flowmend::NodeId n = 0; n < static_cast<flowmend::NodeId>(d.size()); ++n)
        if (d.type(n) == t && d.value(n) == value) return n;
    return flowmend::kNoNode;
}

}  // namespace testutil

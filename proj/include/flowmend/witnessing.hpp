#pragma once

#include <vector>

#include "flowmend/dataflow.hpp"

namespace flowmend {

struct Vulnerability {
    NodeId source;
    NodeId sink;
    /// Node sequence source..sink; every step is a SemChild edge between unblocked nodes.
    std::vector<NodeId> path;
};

struct VulnerabilityReport {
    std::vector<Vulnerability> pairs;
};

struct Witness {
    NodeId source;
    NodeId witness;
    NodeId sink;
    std::vector<NodeId> to_witness;
    std::vector<NodeId> to_sink;
};

struct WitnessReport {
    std::vector<Witness> triples;
};

/// Sources and sinks are read from the document's annotations; sanitizers and guards block.
VulnerabilityReport find_vulnerabilities(const AstDoc& doc);
WitnessReport find_witnesses(const AstDoc& doc);

inline VulnerabilityReport find_vulnerabilities(const AnnotatedAst& a) { return find_vulnerabilities(a.doc); }
inline WitnessReport find_witnesses(const AnnotatedAst& a) { return find_witnesses(a.doc); }

/// Whether `report` flags the pair.
bool flags(const VulnerabilityReport& report, NodeId source, NodeId sink);

}  // namespace flowmend

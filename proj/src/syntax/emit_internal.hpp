#pragma once

#include <string>

#include "flowmend/syntax.hpp"

namespace flowmend::detail {

/// Single-line text of node n, built from the already computed values of its children.
std::string compose_inline(const AstDoc& ast, NodeId n);

}  // namespace flowmend::detail

#pragma once

#include <cstdint>
#include <string>

#include "nauticle/sfl/ast.hpp"
#include "nauticle/workspace.hpp"

namespace nauticle::sfl {

/// Everything an expression needs to bind against: the workspace symbols,
/// the case random stream and the solve-generation counter that drives
/// reduction caching.
struct ParseContext {
    Workspace& workspace;
    RandomState* random_state = nullptr;
    const std::uint64_t* generation = nullptr;
};

/// Parse one SFL expression against the workspace. Symbol references resolve
/// at assembly time; an unresolved identifier is an assembly error, malformed
/// syntax a parse error with the token column.
NodePtr parse_expression(const std::string& source, ParseContext& ctx);

}  // namespace nauticle::sfl

#pragma once

#include <memory>
#include <string>

#include "nauticle/field.hpp"
#include "nauticle/sfl/ast.hpp"

namespace nauticle {

/// One user-defined equation: a left-hand symbol (variable or field,
/// including the position field r) and a right-hand expression tree.
/// Solving evaluates the RHS and overwrites the LHS.
struct Equation {
    std::string name;
    Variable* lhs_variable = nullptr;
    std::shared_ptr<Field> lhs_field;
    sfl::NodePtr rhs;
    sfl::TreeInfo info;
    bool writes_positions = false;

    const std::string& lhs_name() const {
        return lhs_variable ? lhs_variable->name : lhs_field->name;
    }

    std::string to_text() const { return name + ": " + lhs_name() + "=" + rhs->to_text(); }
};

}  // namespace nauticle

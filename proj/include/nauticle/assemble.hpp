#pragma once

#include <cstdint>
#include <memory>

#include "nauticle/case.hpp"
#include "nauticle/io/case_document.hpp"
#include "nauticle/io/vtk.hpp"

namespace nauticle {

struct AssembleOptions {
    std::uint64_t seed = 0;
    /// When set, positions, field values, variables, time and rand counters
    /// come from this frame; symbols and equations still come from the
    /// document, which may have been edited between runs.
    const ResultFrame* hot_start = nullptr;
};

/// Build the case: define symbols in listed order (later definitions may use
/// earlier ones), instantiate particles from the grid or points file, create
/// the reserved position field r, then parse the equations against the
/// completed symbol table.
std::unique_ptr<Case> assemble_case(const CaseDocument& doc, const AssembleOptions& opts = {});

}  // namespace nauticle

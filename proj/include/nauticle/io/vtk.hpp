#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nauticle/tensor.hpp"

namespace nauticle {

class Case;

enum class VtkFormat { Ascii, Binary };

/// One output instant: all per-particle fields, all variables and the
/// serialized case metadata. Reloading a frame and re-serializing it is
/// lossless for every double (shortest round-trip decimal formatting in
/// ASCII, big-endian IEEE doubles in binary).
struct ResultFrame {
    int frame_index = 0;
    double time = 0.0;
    int dimension = 1;

    std::vector<Tensor> positions;

    struct FieldValues {
        std::string name;
        std::vector<Tensor> values;
    };
    std::vector<FieldValues> fields;  // excludes r, which is stored as the points

    std::vector<std::pair<std::string, Tensor>> variables;
    std::vector<std::pair<std::string, Tensor>> constants;
    std::vector<std::string> equations_text;
    std::string domain_text;
    std::string params_text;
    std::vector<std::uint64_t> rand_counters;  // empty when the deck never drew
};

/// Snapshot the case into a frame (deep copy; I/O never aliases solver data).
ResultFrame make_frame(const Case& cs, int frame_index, double time);

/// Legacy VTK PolyData. Point data holds each field (scalars as SCALARS,
/// d-vectors padded to 3-component VECTORS, other shapes as FIELD arrays);
/// variables, constants, equations and the domain are string-valued entries
/// of the CaseData FIELD block. Binary files store numeric arrays as
/// big-endian doubles per the legacy VTK convention; string arrays are always
/// written as ASCII lines.
void write_vtk(const ResultFrame& frame, const std::string& path, VtkFormat format);

ResultFrame read_vtk(const std::string& path);

}  // namespace nauticle

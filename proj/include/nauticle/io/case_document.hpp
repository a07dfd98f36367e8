#pragma once

#include <string>
#include <vector>

namespace nauticle {

/// Raw parsed case file: ordered name/expression bindings exactly as they
/// appear in the document. Definition order matters (later definitions may
/// reference earlier ones); section order inside the file is free.
struct CaseDocument {
    struct Binding {
        std::string name;
        std::string expr;
    };

    std::vector<Binding> constants;
    std::vector<Binding> variables;
    std::vector<Binding> fields;
    std::vector<Binding> equations;

    // domain block (SFL expressions, except boundary which is a '|' list of
    // boundary kind names)
    std::string cell_size;
    std::string minimum;
    std::string maximum;
    std::string boundary;

    // grid block: either a lattice or an external points file
    std::string grid_gid = "0";
    bool grid_from_file = false;
    std::string grid_file;
    std::string gpos, gsize, goffset, gip_dist;

    // parameter space
    std::string simulated_time;
    std::string print_interval;  // empty when absent

    std::string source_path;
    std::string source_dir;
};

/// Read and schema-check a case file. Malformed YAML reports the line;
/// unknown keys are rejected with the nearest valid key suggested.
CaseDocument read_case_file(const std::string& path);

/// Same, from an in-memory document (tests).
CaseDocument parse_case_text(const std::string& text, const std::string& virtual_path = "<string>");

}  // namespace nauticle

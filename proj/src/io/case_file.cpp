#include "nauticle/io/case_document.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>

#include "nauticle/error.hpp"

namespace nauticle {

namespace {

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggest(const std::string& key, const std::vector<std::string>& valid) {
    std::string best;
    int best_d = 1 << 30;
    for (const auto& v : valid) {
        int d = edit_distance(key, v);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    if (!best.empty() && best_d <= std::max<int>(2, static_cast<int>(key.size()) / 2))
        return "; did you mean '" + best + "'?";
    std::string all;
    for (const auto& v : valid) {
        if (!all.empty()) all += ", ";
        all += v;
    }
    return "; valid keys: " + all;
}

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

void check_keys(const YAML::Node& map, const std::vector<std::string>& valid,
                const std::string& where) {
    if (!map.IsMap()) throw parse_error("'", where, "' must be a mapping (line ", line_of(map), ")");
    for (const auto& kv : map) {
        std::string key = kv.first.Scalar();
        if (std::find(valid.begin(), valid.end(), key) == valid.end())
            throw parse_error("unknown key '", key, "' in '", where, "' (line ", line_of(kv.first),
                              ")", suggest(key, valid));
    }
}

YAML::Node require(const YAML::Node& map, const char* key, const std::string& where) {
    YAML::Node n = map[key];
    if (!n)
        throw parse_error("missing required key '", key, "' in '", where, "' (line ",
                          line_of(map), ")");
    return n;
}

std::string scalar(const YAML::Node& n, const std::string& what) {
    if (!n.IsScalar())
        throw parse_error("'", what, "' must be a scalar value (line ", line_of(n), ")");
    return n.Scalar();
}

// Ordered list of single-pair maps: "- name: expr".
std::vector<CaseDocument::Binding> bindings(const YAML::Node& list, const std::string& where) {
    std::vector<CaseDocument::Binding> out;
    if (!list.IsSequence())
        throw parse_error("'", where, "' must be a list of 'name: expression' entries (line ",
                          line_of(list), ")");
    for (const auto& item : list) {
        if (!item.IsMap() || item.size() != 1)
            throw parse_error("each entry of '", where,
                              "' must be a single 'name: expression' pair (line ", line_of(item),
                              ")");
        auto kv = *item.begin();
        out.push_back({kv.first.Scalar(), scalar(kv.second, where + " entry")});
    }
    return out;
}

CaseDocument parse_root(const YAML::Node& root, const std::string& path) {
    CaseDocument doc;
    doc.source_path = path;
    doc.source_dir = std::filesystem::path(path).parent_path().string();

    check_keys(root, {"simulation"}, "document root");
    YAML::Node sim = require(root, "simulation", "document root");
    check_keys(sim, {"case", "parameter_space"}, "simulation");

    YAML::Node cs = require(sim, "case", "simulation");
    check_keys(cs, {"workspace", "equations"}, "case");

    YAML::Node ws = require(cs, "workspace", "case");
    check_keys(ws, {"constants", "variables", "particle_system", "fields"}, "workspace");
    if (ws["constants"]) doc.constants = bindings(ws["constants"], "constants");
    if (ws["variables"]) doc.variables = bindings(ws["variables"], "variables");
    if (ws["fields"]) doc.fields = bindings(ws["fields"], "fields");

    YAML::Node psn = require(ws, "particle_system", "workspace");
    check_keys(psn, {"domain", "grid"}, "particle_system");

    YAML::Node dom = require(psn, "domain", "particle_system");
    check_keys(dom, {"cell_size", "minimum", "maximum", "boundary"}, "domain");
    doc.cell_size = scalar(require(dom, "cell_size", "domain"), "cell_size");
    doc.minimum = scalar(require(dom, "minimum", "domain"), "minimum");
    doc.maximum = scalar(require(dom, "maximum", "domain"), "maximum");
    doc.boundary = scalar(require(dom, "boundary", "domain"), "boundary");

    YAML::Node grid = require(psn, "grid", "particle_system");
    check_keys(grid, {"gid", "file", "gpos", "gsize", "goffset", "gip_dist"}, "grid");
    doc.grid_gid = scalar(require(grid, "gid", "grid"), "gid");
    if (grid["file"]) {
        doc.grid_from_file = true;
        doc.grid_file = scalar(grid["file"], "file");
        for (const char* k : {"gpos", "gsize", "goffset", "gip_dist"})
            if (grid[k])
                throw parse_error("grid cannot combine 'file' with '", k, "' (line ",
                                  line_of(grid[k]), ")");
    } else {
        doc.gpos = scalar(require(grid, "gpos", "grid"), "gpos");
        doc.gsize = scalar(require(grid, "gsize", "grid"), "gsize");
        doc.gip_dist = scalar(require(grid, "gip_dist", "grid"), "gip_dist");
        doc.goffset = grid["goffset"] ? scalar(grid["goffset"], "goffset") : "";
    }

    if (cs["equations"]) doc.equations = bindings(cs["equations"], "equations");

    YAML::Node params = require(sim, "parameter_space", "simulation");
    check_keys(params, {"simulated_time", "print_interval"}, "parameter_space");
    doc.simulated_time = scalar(require(params, "simulated_time", "parameter_space"),
                                "simulated_time");
    if (params["print_interval"])
        doc.print_interval = scalar(params["print_interval"], "print_interval");

    return doc;
}

}  // namespace

CaseDocument read_case_file(const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw io_error("cannot open case file '", path, "'");
    } catch (const YAML::Exception& e) {
        throw parse_error("malformed case file '", path, "' at line ", e.mark.line + 1, ": ",
                          e.msg);
    }
    try {
        return parse_root(root, path);
    } catch (const Error&) {
        throw;
    } catch (const YAML::Exception& e) {
        throw parse_error("malformed case file '", path, "' at line ", e.mark.line + 1, ": ",
                          e.msg);
    }
}

CaseDocument parse_case_text(const std::string& text, const std::string& virtual_path) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw parse_error("malformed case document at line ", e.mark.line + 1, ": ", e.msg);
    }
    return parse_root(root, virtual_path);
}

}  // namespace nauticle

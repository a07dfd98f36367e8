#include "nauticle/assemble.hpp"

#include <cmath>
#include <filesystem>

#include "nauticle/format.hpp"
#include "nauticle/interactions.hpp"
#include "nauticle/io/points.hpp"
#include "nauticle/sfl/parser.hpp"

namespace nauticle {

namespace {

template <typename Fn>
auto with_context(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), "in " + what + ": " + e.what());
    }
}

Tensor eval_definition(const std::string& what, const std::string& expr, sfl::ParseContext& ctx) {
    return with_context(what, [&] { return sfl::parse_expression(expr, ctx)->evaluate(0, 0); });
}

int integer_cell_count(double v, const char* key) {
    double r = std::round(v);
    if (std::abs(v - r) > 1e-6 * std::max(1.0, std::abs(v)))
        throw assembly_error("domain '", key, "' component ", format_double(v),
                             " is not an integer cell count");
    return static_cast<int>(r);
}

Domain build_domain(const CaseDocument& doc, sfl::ParseContext& ctx) {
    Tensor cell_size = eval_definition("domain cell_size", doc.cell_size, ctx);
    Tensor minimum = eval_definition("domain minimum", doc.minimum, ctx);
    Tensor maximum = eval_definition("domain maximum", doc.maximum, ctx);
    const int d = cell_size.rows();
    if (!cell_size.is_column() || !minimum.same_shape(cell_size) || !maximum.same_shape(cell_size))
        throw assembly_error("domain cell_size, minimum and maximum must share one shape");

    std::array<int, 3> min_cells{0, 0, 0}, max_cells{1, 1, 1};
    std::array<double, 3> sizes{1.0, 1.0, 1.0};
    std::array<BoundaryKind, 3> kinds{BoundaryKind::Cutoff, BoundaryKind::Cutoff,
                                      BoundaryKind::Cutoff};
    for (int a = 0; a < d; ++a) {
        sizes[a] = cell_size(a);
        min_cells[a] = integer_cell_count(minimum(a), "minimum");
        max_cells[a] = integer_cell_count(maximum(a), "maximum");
    }

    // boundary: per-axis kind names joined by '|'
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t bar = doc.boundary.find('|', start);
        parts.push_back(doc.boundary.substr(start, bar - start));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    if (static_cast<int>(parts.size()) != d)
        throw assembly_error("domain boundary lists ", parts.size(), " axes for a ", d,
                             "D domain");
    for (int a = 0; a < d; ++a) {
        std::string p = parts[a];
        p.erase(0, p.find_first_not_of(" \t"));
        p.erase(p.find_last_not_of(" \t") + 1);
        kinds[a] = boundary_from_name(p);
    }
    return Domain(d, min_cells, max_cells, sizes, kinds);
}

Tensor broadcast_axis_value(Tensor t, int d, const char* key) {
    if (t.is_scalar() && d > 1) {
        Tensor out = Tensor::zeros(d, 1);
        for (int a = 0; a < d; ++a) out(a) = t(0, 0);
        return out;
    }
    if (t.rows() != d || !t.is_column())
        throw assembly_error("grid '", key, "' must have ", d, " components");
    return t;
}

}  // namespace

std::unique_ptr<Case> assemble_case(const CaseDocument& doc, const AssembleOptions& opts) {
    auto cs = std::make_unique<Case>();
    cs->random = RandomState(opts.seed);
    Workspace& ws = cs->workspace;
    sfl::ParseContext ctx{ws, &cs->random, cs->generation_ptr()};

    for (const auto& def : doc.constants)
        ws.add_constant(def.name,
                        eval_definition("definition of constant '" + def.name + "'", def.expr, ctx));
    for (const auto& def : doc.variables)
        ws.add_variable(def.name,
                        eval_definition("definition of variable '" + def.name + "'", def.expr, ctx));

    Domain domain = build_domain(doc, ctx);
    const int d = domain.dimension();

    // Particle positions: hot-start frame (which wins over the grid spec),
    // external points file, or generated lattice.
    std::vector<Tensor> positions;
    if (opts.hot_start) {
        if (opts.hot_start->dimension != d)
            throw assembly_error("hot-start frame is ", opts.hot_start->dimension,
                                 "D but the document domain is ", d, "D");
        positions = opts.hot_start->positions;
    } else if (doc.grid_from_file) {
        std::filesystem::path p(doc.grid_file);
        if (p.is_relative() && !doc.source_dir.empty())
            p = std::filesystem::path(doc.source_dir) / p;
        positions = read_points_file(p.string(), d);
    } else {
        Tensor gpos = broadcast_axis_value(
            eval_definition("grid gpos", doc.gpos, ctx), d, "gpos");
        Tensor gsize = broadcast_axis_value(
            eval_definition("grid gsize", doc.gsize, ctx), d, "gsize");
        Tensor gip = broadcast_axis_value(
            eval_definition("grid gip_dist", doc.gip_dist, ctx), d, "gip_dist");
        Tensor goffset = doc.goffset.empty()
                             ? Tensor::zeros(d, 1)
                             : broadcast_axis_value(eval_definition("grid goffset", doc.goffset, ctx),
                                                    d, "goffset");
        positions = generate_grid(gpos, gsize, goffset, gip);
    }

    const int n = static_cast<int>(positions.size());
    auto r_field = ws.add_field("r", std::move(positions));
    auto ps = std::make_shared<ParticleSystem>(domain, r_field);
    ws.attach_particle_system(ps);
    cs->random.resize(n);

    // Fresh assemblies reject particles outside the domain on non-periodic
    // axes; a hot start instead lets apply_boundary_shift deactivate anything
    // that had escaped through a cut-off face.
    if (!opts.hot_start) {
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < d; ++a) {
                if (domain.boundary(a) == BoundaryKind::Periodic) continue;
                double x = r_field->values[i](a);
                if (x < domain.lo(a) || x > domain.hi(a))
                    throw assembly_error("particle ", i, " at ", format_double(x),
                                         " lies outside the domain on axis ", a);
            }
    }
    ps->apply_boundary_shift();

    Tensor gid = eval_definition("grid gid", doc.grid_gid, ctx);
    ws.add_field("gid", std::vector<Tensor>(n, gid));

    for (const auto& def : doc.fields) {
        with_context("definition of field '" + def.name + "'", [&] {
            sfl::NodePtr init = sfl::parse_expression(def.expr, ctx);
            std::vector<Tensor> values(n);
            for (int i = 0; i < n; ++i) values[i] = init->evaluate(i, 0);
            for (int i = 1; i < n; ++i)
                if (!values[i].same_shape(values[0]))
                    throw assembly_error("initializer produced mixed shapes");
            ws.add_field(def.name, std::move(values));
            return 0;
        });
    }

    if (!ws.find_variable("dt"))
        throw assembly_error("variable 'dt' must be defined (the scheduler writes the time step)");

    for (const auto& def : doc.equations) {
        with_context("equation '" + def.name + "'", [&] {
            size_t eq_pos = def.expr.find('=');
            auto bad = [&](auto... parts) { return assembly_error(parts...); };
            if (eq_pos == std::string::npos)
                throw bad("an equation must have the form lhs=rhs");
            std::string lhs = def.expr.substr(0, eq_pos);
            lhs.erase(0, lhs.find_first_not_of(" \t"));
            lhs.erase(lhs.find_last_not_of(" \t") + 1);
            std::string rhs = def.expr.substr(eq_pos + 1);

            Equation eq;
            eq.name = def.name;
            if (Variable* v = ws.find_variable(lhs)) {
                eq.lhs_variable = v;
            } else if (auto f = ws.find_field(lhs)) {
                eq.lhs_field = f;
                eq.writes_positions = (lhs == "r");
            } else if (ws.find_constant(lhs)) {
                throw bad("the LHS symbol '", lhs, "' is a constant and cannot be assigned");
            } else {
                throw bad("unknown symbol '", lhs, "' on the LHS");
            }
            eq.rhs = sfl::parse_expression(rhs, ctx);
            eq.rhs->collect(eq.info);
            cs->equations.push_back(std::move(eq));
            return 0;
        });
    }

    // Finite-influence radii larger than the cell size lose pairs; warn once
    // per offending operator.
    for (const auto& eq : cs->equations)
        for (const sfl::InteractionNode* node : eq.info.interactions) {
            int slot = node->op().radius_slot;
            if (slot < 0) continue;
            try {
                double radius = node->operand(slot).evaluate(0, 0).value();
                if (radius > domain.min_cell_size() * (1.0 + 1e-12)) ps->count_warning();
            } catch (const Error&) {
                // radius depends on per-particle state; checked implicitly at solve time
            }
        }

    ParameterSpace params;
    params.simulated_time =
        eval_definition("parameter_space simulated_time", doc.simulated_time, ctx).value();
    if (!(params.simulated_time > 0.0))
        throw assembly_error("simulated_time must be positive");
    if (!doc.print_interval.empty()) {
        params.print_interval =
            eval_definition("parameter_space print_interval", doc.print_interval, ctx).value();
        params.has_print_interval = true;
    }
    cs->parameters = params;

    if (opts.hot_start) {
        const ResultFrame& frame = *opts.hot_start;
        std::string problems;
        for (const auto& fd : frame.fields) {
            auto field = ws.find_field(fd.name);
            if (!field) {
                ps->count_warning();  // field dropped from the document
                continue;
            }
            if (static_cast<int>(fd.values.size()) != n) {
                problems += "\n  field '" + fd.name + "': " + std::to_string(fd.values.size()) +
                            " values for " + std::to_string(n) + " particles";
                continue;
            }
            if (!fd.values.empty() && !fd.values[0].same_shape(field->values[0])) {
                problems += "\n  field '" + fd.name + "': frame shape " +
                            fd.values[0].shape_string() + " vs document shape " +
                            field->values[0].shape_string();
                continue;
            }
            field->values = fd.values;
        }
        for (const auto& [name, value] : frame.variables) {
            Variable* v = ws.find_variable(name);
            if (!v) {
                ps->count_warning();
                continue;
            }
            if (!v->value.same_shape(value)) {
                problems += "\n  variable '" + name + "': frame shape " + value.shape_string() +
                            " vs document shape " + v->value.shape_string();
                continue;
            }
            v->value = value;
        }
        if (!problems.empty())
            throw assembly_error("hot start mismatches between result frame and document:",
                                 problems);
        if (!frame.rand_counters.empty()) {
            cs->random.resize(static_cast<int>(frame.rand_counters.size()));
            cs->random.counters() = frame.rand_counters;
        }
        cs->start_time = frame.time;
        cs->start_frame = frame.frame_index;
    }

    return cs;
}

}  // namespace nauticle

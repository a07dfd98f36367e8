#pragma once

#include <array>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nauticle/assemble.hpp"
#include "nauticle/case.hpp"
#include "nauticle/sfl/parser.hpp"

namespace test_helpers {

using namespace nauticle;

inline Tensor vec2(double x, double y) { return Tensor::column({x, y}); }
inline Tensor vec3(double x, double y, double z) { return Tensor::column({x, y, z}); }

inline Domain box(int d, std::array<int, 3> cells, std::array<double, 3> cell_size,
                  std::array<BoundaryKind, 3> kinds) {
    return Domain(d, {0, 0, 0}, cells, cell_size, kinds);
}

/// Assembles a case directly (no YAML), mirroring what assemble_case does.
struct CaseBuilder {
    std::unique_ptr<Case> cs = std::make_unique<Case>();

    CaseBuilder& seed(std::uint64_t s) {
        cs->random = RandomState(s);
        return *this;
    }
    CaseBuilder& constant(const std::string& name, Tensor v) {
        cs->workspace.add_constant(name, std::move(v));
        return *this;
    }
    CaseBuilder& variable(const std::string& name, Tensor v) {
        cs->workspace.add_variable(name, std::move(v));
        return *this;
    }
    CaseBuilder& particles(const Domain& dom, std::vector<Tensor> positions) {
        auto r = cs->workspace.add_field("r", std::move(positions));
        auto ps = std::make_shared<ParticleSystem>(dom, r);
        cs->workspace.attach_particle_system(ps);
        cs->random.resize(ps->particle_count());
        ps->apply_boundary_shift();
        ps->build_cells();
        return *this;
    }
    CaseBuilder& field(const std::string& name, std::vector<Tensor> values) {
        cs->workspace.add_field(name, std::move(values));
        return *this;
    }
    CaseBuilder& field_uniform(const std::string& name, const Tensor& value) {
        int n = cs->workspace.particle_count();
        cs->workspace.add_field(name, std::vector<Tensor>(static_cast<size_t>(n), value));
        return *this;
    }

    sfl::NodePtr parse(const std::string& expr) {
        sfl::ParseContext ctx{cs->workspace, &cs->random, cs->generation_ptr()};
        return sfl::parse_expression(expr, ctx);
    }
    Tensor eval(const std::string& expr, int i = 0) { return parse(expr)->evaluate(i, 0); }

    Equation equation(const std::string& name, const std::string& text) {
        size_t eq = text.find('=');
        Equation e;
        e.name = name;
        std::string lhs = text.substr(0, eq);
        if (Variable* v = cs->workspace.find_variable(lhs))
            e.lhs_variable = v;
        else
            e.lhs_field = cs->workspace.find_field(lhs);
        e.writes_positions = lhs == "r";
        e.rhs = parse(text.substr(eq + 1));
        e.rhs->collect(e.info);
        return e;
    }
};

/// Brute-force all-pairs-with-images neighbor enumeration, independent of
/// the cell-grid implementation: every combination of per-axis periodic
/// shifts and wall reflections, filtered to |rel| <= rcut.
struct OraclePair {
    int j;
    Tensor rel;
    Tensor guide;
};

inline std::vector<OraclePair> oracle_neighbors(const Domain& dom,
                                                const std::vector<Tensor>& pos, int i,
                                                double rcut) {
    const int d = dom.dimension();
    struct Option {
        double shift;
        int reflect;  // 0 none, -1 low, +1 high
    };
    std::array<std::vector<Option>, 3> options;
    for (int a = 0; a < d; ++a) {
        options[a].push_back({0.0, 0});
        if (dom.boundary(a) == BoundaryKind::Periodic) {
            options[a].push_back({-dom.extent(a), 0});
            options[a].push_back({+dom.extent(a), 0});
        } else if (dom.boundary(a) == BoundaryKind::Symmetric) {
            options[a].push_back({0.0, -1});
            options[a].push_back({0.0, +1});
        }
    }
    std::vector<OraclePair> out;
    const Tensor& xi = pos[i];
    for (size_t j = 0; j < pos.size(); ++j) {
        std::array<size_t, 3> sel{0, 0, 0};
        while (true) {
            Tensor rel = Tensor::zeros(d, 1);
            Tensor guide = Tensor::zeros(d, 1);
            for (int a = 0; a < d; ++a) {
                const Option& op = options[a][sel[a]];
                double img;
                if (op.reflect == 0)
                    img = pos[j](a) + op.shift;
                else if (op.reflect < 0)
                    img = 2.0 * dom.lo(a) - pos[j](a);
                else
                    img = 2.0 * dom.hi(a) - pos[j](a);
                rel(a) = img - xi(a);
                guide(a) = op.reflect != 0 ? -1.0 : 1.0;
            }
            if (rel.mat().norm() <= rcut) out.push_back({static_cast<int>(j), rel, guide});
            int a = 0;
            for (; a < d; ++a) {
                if (++sel[a] < options[a].size()) break;
                sel[a] = 0;
            }
            if (a == d) break;
        }
    }
    return out;
}

inline std::vector<Tensor> random_positions(std::mt19937& rng, const Domain& dom, int n) {
    std::vector<Tensor> pos;
    const int d = dom.dimension();
    for (int k = 0; k < n; ++k) {
        Tensor p = Tensor::zeros(d, 1);
        for (int a = 0; a < d; ++a) {
            std::uniform_real_distribution<double> u(dom.lo(a), dom.hi(a));
            p(a) = u(rng);
        }
        pos.push_back(std::move(p));
    }
    return pos;
}

}  // namespace test_helpers

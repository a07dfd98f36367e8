#pragma once

#include <string>
#include <vector>

#include "nauticle/sfl/ast.hpp"

namespace nauticle {

/// Precompiled interaction operator. A new operator supplies its name,
/// arity, influence kind and pair-contribution rule here and registers in
/// the table below; the SFL parser and solver need no other changes.
struct InteractionOp {
    const char* name;
    int arity_min;
    int arity_max;
    int kernel_slot;  // operand that must be a smoothing-kernel keyword, -1 if none
    int radius_slot;  // operand holding the influence radius expression, -1 if none
    bool finite_influence;
    Tensor (*eval)(const sfl::InteractionNode& node, int i, int level);
};

const InteractionOp* find_interaction(const std::string& name);
const std::vector<const InteractionOp*>& interaction_registry();

/// Shared summation mechanism: applies the pair rule over the boundary
/// adjusted neighborhood of particle i and accumulates the contributions.
/// Every finite-influence operator is expressed through this.
template <typename Rule>
Tensor interact(const ParticleSystem& ps, int i, Tensor acc, Rule&& rule) {
    ps.for_each_neighbor(i, [&](const Tensor& rel_pos, int j, const Tensor& cell_size,
                                const Tensor& guide) {
        acc = acc + rule(rel_pos, j, cell_size, guide);
    });
    return acc;
}

/// Material pairing of a Hertzian contact (effective quantities per pair).
struct HertzPair {
    double Ri, Rj;
    double Ei, Ej;
    double nui, nuj;
    double mi, mj;
    double friction;  // Coulomb coefficient c_f
};

/// Force on particle i from a contact with (possibly mirrored) particle j.
/// rel_pos is the adjusted vector from i to j. `damping_scale` multiplies the
/// viscous coefficient c_Hz; 1 is the standard model, 0 gives the purely
/// elastic contact used by restitution checks. Zero when there is no overlap.
Tensor hertz_contact_force(const HertzPair& pair, const Tensor& rel_pos, const Tensor& vi,
                           const Tensor& vj, double damping_scale = 1.0);

}  // namespace nauticle

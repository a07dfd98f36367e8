#include "nauticle/case.hpp"

#include <algorithm>

#include "nauticle/error.hpp"

namespace nauticle {

void Case::solve_equation(Equation& eq, const ThreadPool& pool) {
    ParticleSystem& ps = particle_system();
    if (eq.info.needs_cells && ps.dirty()) ps.build_cells();

    ++generation_;
    try {
        // Whole-field reductions are frozen once per equation, on one
        // thread, so concurrent evaluations all see the same value.
        for (sfl::ReductionNode* r : eq.info.reductions) r->refresh(0);

        if (eq.lhs_variable) {
            // Single-valued LHS: one thread evaluates at particle index 0.
            Tensor value = eq.rhs->evaluate(0, 0);
            if (!value.same_shape(eq.lhs_variable->value))
                throw runtime_error("LHS '", eq.lhs_variable->name, "' is ",
                                    eq.lhs_variable->value.shape_string(), " but RHS produced ",
                                    value.shape_string());
            if (!value.all_finite()) throw nan_error("non-finite value assigned");
            eq.lhs_variable->value = std::move(value);
            return;
        }

        Field& field = *eq.lhs_field;
        const int n = ps.particle_count();
        staging_.resize(n);
        std::vector<int> first_bad(std::max(1, std::min(pool.thread_count(), n)), -1);
        pool.parallel_blocks(n, [&](int block, int begin, int end) {
            for (int i = begin; i < end; ++i) {
                if (!ps.is_active(i)) {
                    staging_[i] = field.values[i];  // frozen outside the domain
                    continue;
                }
                Tensor value = eq.rhs->evaluate(i, 0);
                if (!value.same_shape(field.values[i]))
                    throw runtime_error("LHS field '", field.name, "' is ",
                                        field.values[i].shape_string(), " but RHS produced ",
                                        value.shape_string(), " at particle ", i);
                if (!value.all_finite() && first_bad[block] < 0) first_bad[block] = i;
                staging_[i] = std::move(value);
            }
        });
        int bad = -1;
        for (int b : first_bad)
            if (b >= 0) bad = bad < 0 ? b : std::min(bad, b);
        if (bad >= 0) throw nan_error("non-finite value at particle ", bad);
        field.values.swap(staging_);
    } catch (const Error& e) {
        throw Error(e.kind(), "equation '" + eq.name + "': " + e.what());
    }

    if (eq.writes_positions) {
        particle_system().apply_boundary_shift();
        particle_system().mark_dirty();
    }
}

void Case::solve_step(const ThreadPool& pool) {
    for (Equation& eq : equations) solve_equation(eq, pool);
}

}  // namespace nauticle

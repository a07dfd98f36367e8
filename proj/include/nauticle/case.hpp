#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nauticle/equation.hpp"
#include "nauticle/sfl/random_state.hpp"
#include "nauticle/thread_pool.hpp"
#include "nauticle/workspace.hpp"

namespace nauticle {

/// Simulation parameters of a case. A workspace variable named
/// `print_interval`, when defined, takes precedence over the literal.
struct ParameterSpace {
    double simulated_time = 0.0;
    double print_interval = 0.0;
    bool has_print_interval = false;
};

/// The assembled simulation: workspace, ordered equation list and
/// parameters. Equations are solved strictly in listed order with a barrier
/// between them; within one field equation particles are partitioned over
/// the thread pool. Expression trees hold pointers into this object, so a
/// case is pinned to its allocation (built via assemble_case).
class Case {
public:
    Case() = default;
    Case(const Case&) = delete;
    Case& operator=(const Case&) = delete;

    Workspace workspace;
    std::vector<Equation> equations;
    ParameterSpace parameters;
    RandomState random;

    // Nonzero after a hot start: the simulation resumes from this instant.
    double start_time = 0.0;
    int start_frame = 0;

    ParticleSystem& particle_system() { return *workspace.particle_system(); }
    const ParticleSystem& particle_system() const { return *workspace.particle_system(); }

    const std::uint64_t* generation_ptr() const { return &generation_; }

    /// Evaluate the RHS for every particle into a staging buffer, audit for
    /// non-finite results, then swap the buffer into the LHS (two-phase, so a
    /// self-referential RHS reads only pre-solve values). Variable LHS runs
    /// on a single thread. Rebuilds the cell grid first when the equation
    /// needs neighbors and positions have changed.
    void solve_equation(Equation& eq, const ThreadPool& pool);

    /// Solve all equations in order; after any equation that wrote r the
    /// positions are boundary-shifted and the neighbor structure flagged
    /// stale.
    void solve_step(const ThreadPool& pool);
    void solve_step() { solve_step(ThreadPool(1)); }

private:
    std::uint64_t generation_ = 0;
    std::vector<Tensor> staging_;
};

}  // namespace nauticle

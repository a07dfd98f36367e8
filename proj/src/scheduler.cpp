#include "nauticle/scheduler.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nauticle/error.hpp"
#include "nauticle/format.hpp"

namespace nauticle {

std::string frame_path(const std::string& outdir, int frame_index) {
    return (std::filesystem::path(outdir) / ("frame_" + std::to_string(frame_index) + ".vtk"))
        .string();
}

RunReport run(Case& cs, const RunConfig& config) {
    auto wall_start = std::chrono::steady_clock::now();
    RunReport report;

    std::error_code ec;
    std::filesystem::create_directories(config.outdir, ec);
    if (ec) throw io_error("cannot create output directory '", config.outdir, "': ", ec.message());

    Variable* dt_var = cs.workspace.find_variable("dt");
    if (!dt_var) throw assembly_error("variable 'dt' must be defined");
    Variable* interval_var = cs.workspace.find_variable("print_interval");
    if (!interval_var && !cs.parameters.has_print_interval)
        throw assembly_error(
            "print_interval must be given in parameter_space or as a workspace variable");

    auto output_interval = [&] {
        double v = interval_var ? interval_var->value.value() : cs.parameters.print_interval;
        if (!(v > 0.0)) throw runtime_error("print_interval must be positive, got ", format_double(v));
        return v;
    };

    const double t_end = cs.parameters.simulated_time;
    const double eps = 1e-12 * std::max(1.0, t_end);
    const ThreadPool pool(config.threads);

    double t = cs.start_time;
    int frame_index = cs.start_frame;

    auto write_frame = [&](double time) {
        write_vtk(make_frame(cs, frame_index, time), frame_path(config.outdir, frame_index),
                  config.format);
        ++report.frames_written;
        if (config.verbose)
            std::cout << "frame " << frame_index << " at t=" << format_double(time) << "\n";
        ++frame_index;
    };

    write_frame(t);  // initial condition is always visible
    double next_out = t + output_interval();

    while (t < t_end - eps) {
        double dt_user = dt_var->value.value();
        if (!(dt_user > 0.0))
            throw runtime_error("time step dt must be positive, got ", format_double(dt_user));

        // Clip to the next output instant or to the end of the simulation;
        // dt is only ever reduced.
        double target = std::min(next_out, t_end);
        double dt_step = dt_user;
        bool clipped = false;
        if (target <= t + dt_step + eps) {
            dt_step = std::min(target - t, dt_user);
            clipped = true;
        }

        dt_var->value = Tensor(dt_step);
        cs.solve_step(pool);
        ++report.steps;
        t = clipped ? target : t + dt_step;

        if (clipped && dt_var->value.value() == dt_step)
            dt_var->value = Tensor(dt_user);  // restore unless a deck equation rewrote dt

        if (clipped && next_out <= target + eps) {
            write_frame(t);
            next_out = t + output_interval();  // re-read: the deck may drive print_interval
        }
    }

    report.end_time = t;
    report.cell_rebuilds = cs.particle_system().rebuild_count();
    report.warnings = cs.particle_system().warning_count();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    if (config.write_report) {
        std::ofstream rep(std::filesystem::path(config.outdir) / "run_report.txt");
        rep << "steps: " << report.steps << "\n";
        rep << "frames: " << report.frames_written << "\n";
        rep << "cell_rebuilds: " << report.cell_rebuilds << "\n";
        rep << "warnings: " << report.warnings << "\n";
        rep << "end_time: " << format_double(report.end_time) << "\n";
        rep << "wall_seconds: " << format_double(report.wall_seconds) << "\n";
    }
    return report;
}

}  // namespace nauticle

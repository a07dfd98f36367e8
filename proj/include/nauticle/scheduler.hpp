#pragma once

#include <string>

#include "nauticle/case.hpp"
#include "nauticle/io/vtk.hpp"

namespace nauticle {

struct RunConfig {
    std::string outdir = "out";
    VtkFormat format = VtkFormat::Ascii;
    int threads = 1;
    bool verbose = false;
    bool write_report = true;
};

struct RunReport {
    long steps = 0;
    long cell_rebuilds = 0;
    long warnings = 0;
    int frames_written = 0;
    double end_time = 0.0;
    double wall_seconds = 0.0;
};

/// Drive the time loop: clip dt so steps land exactly on output instants
/// (never increasing it, restoring the user value afterwards unless a deck
/// equation rewrote dt), solve the equations each step, rebuild neighbors
/// lazily, and write a frame at t = 0 (or the hot-start instant) and at every
/// output instant. Frames land in `<outdir>/frame_<k>.vtk` next to a
/// run_report.txt.
RunReport run(Case& cs, const RunConfig& config);

std::string frame_path(const std::string& outdir, int frame_index);

}  // namespace nauticle

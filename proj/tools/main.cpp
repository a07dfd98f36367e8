#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "nauticle/assemble.hpp"
#include "nauticle/error.hpp"
#include "nauticle/io/case_document.hpp"
#include "nauticle/scheduler.hpp"

namespace {

constexpr const char* kUsage =
    R"(usage: nauticle -yamlname <case file> [options]

options:
  -yamlname, --case <path>   case configuration file (required)
  --threads <n>              worker threads (default: hardware threads,
                             or the NAUTICLE_THREADS environment variable)
  --seed <n>                 seed of the case random stream (default 0)
  --outdir <path>            output directory (default: case file stem)
  --format <ascii|binary>    result file format (default ascii)
  --hotstart <frame.vtk>     resume from a previous result frame
  --validate                 parse and assemble the case, then exit
  --verbose                  progress output per frame
  -h, --help                 this text
)";

struct CliConfig {
    std::string case_path;
    std::string outdir;
    std::string hotstart;
    std::string format = "ascii";
    int threads = 0;
    std::uint64_t seed = 0;
    bool validate = false;
    bool verbose = false;
};

int default_threads() {
    if (const char* env = std::getenv("NAUTICLE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

bool parse_args(int argc, char** argv, CliConfig& cfg, std::string& problem) {
    auto value = [&](int& k) -> const char* {
        if (k + 1 >= argc) return nullptr;
        return argv[++k];
    };
    for (int k = 1; k < argc; ++k) {
        std::string arg = argv[k];
        if (arg == "-yamlname" || arg == "--case") {
            const char* v = value(k);
            if (!v) {
                problem = arg + " needs a path";
                return false;
            }
            cfg.case_path = v;
        } else if (arg == "--threads") {
            const char* v = value(k);
            if (!v || std::atoi(v) < 1) {
                problem = "--threads needs a positive integer";
                return false;
            }
            cfg.threads = std::atoi(v);
        } else if (arg == "--seed") {
            const char* v = value(k);
            if (!v) {
                problem = "--seed needs an integer";
                return false;
            }
            cfg.seed = std::strtoull(v, nullptr, 10);
        } else if (arg == "--outdir") {
            const char* v = value(k);
            if (!v) {
                problem = "--outdir needs a path";
                return false;
            }
            cfg.outdir = v;
        } else if (arg == "--format") {
            const char* v = value(k);
            if (!v || (std::string(v) != "ascii" && std::string(v) != "binary")) {
                problem = "--format must be ascii or binary";
                return false;
            }
            cfg.format = v;
        } else if (arg == "--hotstart") {
            const char* v = value(k);
            if (!v) {
                problem = "--hotstart needs a result file";
                return false;
            }
            cfg.hotstart = v;
        } else if (arg == "--validate") {
            cfg.validate = true;
        } else if (arg == "--verbose") {
            cfg.verbose = true;
        } else if (arg == "-h" || arg == "--help") {
            std::cout << kUsage;
            std::exit(0);
        } else {
            problem = "unknown option '" + arg + "'";
            return false;
        }
    }
    if (cfg.case_path.empty()) {
        problem = "a case file is required (-yamlname <file>)";
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig cfg;
    std::string problem;
    if (!parse_args(argc, argv, cfg, problem)) {
        std::cerr << "nauticle: " << problem << "\n\n" << kUsage;
        return 2;
    }
    if (cfg.threads == 0) cfg.threads = default_threads();
    if (cfg.outdir.empty()) {
        std::filesystem::path p(cfg.case_path);
        cfg.outdir = p.parent_path() / p.stem();
    }

    try {
        nauticle::CaseDocument doc = nauticle::read_case_file(cfg.case_path);

        nauticle::ResultFrame frame;
        nauticle::AssembleOptions opts;
        opts.seed = cfg.seed;
        if (!cfg.hotstart.empty()) {
            frame = nauticle::read_vtk(cfg.hotstart);
            opts.hot_start = &frame;
        }
        auto cs = nauticle::assemble_case(doc, opts);

        if (cfg.validate) {
            std::cout << "case '" << cfg.case_path << "' is valid: "
                      << cs->workspace.constants().size() << " constants, "
                      << cs->workspace.variables().size() << " variables, "
                      << cs->workspace.fields().size() << " fields, " << cs->equations.size()
                      << " equations, " << cs->particle_system().particle_count()
                      << " particles\n";
            return 0;
        }

        nauticle::RunConfig run_cfg;
        run_cfg.outdir = cfg.outdir;
        run_cfg.format = cfg.format == "binary" ? nauticle::VtkFormat::Binary
                                                : nauticle::VtkFormat::Ascii;
        run_cfg.threads = cfg.threads;
        run_cfg.verbose = cfg.verbose;
        nauticle::RunReport report = nauticle::run(*cs, run_cfg);
        std::cout << "completed: " << report.steps << " steps, " << report.frames_written
                  << " frames, " << report.cell_rebuilds << " cell rebuilds, " << report.warnings
                  << " warnings, " << report.wall_seconds << " s\n";
        return 0;
    } catch (const nauticle::Error& e) {
        std::cerr << "nauticle: " << e.kind_name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "nauticle: error: " << e.what() << "\n";
        return 1;
    }
}

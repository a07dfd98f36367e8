#include "nauticle/io/points.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nauticle/error.hpp"

namespace nauticle {

std::vector<Tensor> read_points_file(const std::string& path, int dimension) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open points file '", path, "'");
    std::vector<Tensor> points;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::vector<double> cols;
        std::string tok;
        while (row >> tok) {
            try {
                size_t used = 0;
                double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                cols.push_back(v);
            } catch (const std::exception&) {
                throw io_error("points file '", path, "' line ", line_no, ": non-numeric token '",
                               tok, "'");
            }
        }
        if (cols.empty()) continue;  // blank line
        if (static_cast<int>(cols.size()) != dimension)
            throw io_error("points file '", path, "' line ", line_no, ": expected ", dimension,
                           " columns for a ", dimension, "D domain, got ", cols.size());
        Tensor p = Tensor::zeros(dimension, 1);
        for (int a = 0; a < dimension; ++a) p(a) = cols[a];
        points.push_back(std::move(p));
    }
    if (points.empty()) throw io_error("points file '", path, "' contains no particles");
    return points;
}

std::vector<Tensor> generate_grid(const Tensor& gpos, const Tensor& gsize, const Tensor& goffset,
                                  const Tensor& gip_dist) {
    const int d = gpos.rows();
    std::array<int, 3> counts{1, 1, 1};
    for (int a = 0; a < d; ++a) {
        if (!(gip_dist(a) > 0.0)) throw assembly_error("grid: gip_dist must be positive");
        if (gsize(a) < 0.0) throw assembly_error("grid: gsize must be non-negative");
        counts[a] = static_cast<int>(std::floor(gsize(a) / gip_dist(a) + 1e-9)) + 1;
    }
    long total = 1;
    for (int a = 0; a < d; ++a) total *= counts[a];
    if (total <= 0) throw assembly_error("grid: empty point lattice");

    std::vector<Tensor> points;
    points.reserve(total);
    std::array<int, 3> k{0, 0, 0};
    while (true) {
        Tensor p = Tensor::zeros(d, 1);
        for (int a = 0; a < d; ++a) p(a) = gpos(a) + goffset(a) + k[a] * gip_dist(a);
        points.push_back(std::move(p));
        int a = 0;
        for (; a < d; ++a) {
            if (++k[a] < counts[a]) break;
            k[a] = 0;
        }
        if (a == d) break;
    }
    return points;
}

}  // namespace nauticle

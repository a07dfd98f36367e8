#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "nauticle/domain.hpp"
#include "nauticle/field.hpp"

namespace nauticle {

/// Particle positions plus the cell grid used for neighbor search.
///
/// Neighbor enumeration walks the 3^d cell stencil around a particle and, per
/// axis, augments it with periodic wrap images and (for wall cells on
/// symmetric axes) mirror images reflected across the near wall, including
/// the particle's own reflection. Corner cells touching two symmetric walls
/// produce the double-mirror image through the cartesian combination of
/// per-axis options.
class ParticleSystem {
public:
    ParticleSystem(Domain domain, std::shared_ptr<Field> positions);

    const Domain& domain() const { return domain_; }
    Field& positions() { return *positions_; }
    const Field& positions() const { return *positions_; }
    const std::shared_ptr<Field>& positions_ptr() const { return positions_; }

    int particle_count() const { return positions_->particle_count(); }
    int active_count() const { return active_count_; }
    bool is_active(int i) const { return active_[i] != 0; }

    bool dirty() const { return dirty_; }
    void mark_dirty() { dirty_ = true; }

    /// Rebuild the cell lists from current positions. Inactive particles are
    /// excluded. An active particle outside the domain on a cutoff axis is an
    /// error; on a symmetric axis it is clamped to the wall cell (the
    /// overflow was already counted as a warning by apply_boundary_shift).
    void build_cells();

    /// Wrap positions on periodic axes; count warnings for symmetric
    /// overflow; flag particles beyond a cutoff face inactive.
    void apply_boundary_shift();

    long rebuild_count() const { return rebuild_count_; }
    long warning_count() const { return warnings_.load(); }
    void count_warning() const { ++warnings_; }  // callable from worker threads

    /// Invoke fn(rel_pos, j, cell_size, guide) for every candidate pair of
    /// particle i, including i itself with rel_pos = 0 (callbacks self-filter
    /// on distance > 0). rel_pos is the boundary-adjusted vector from i to
    /// the possibly imaged j; guide carries per-axis reflection signs (+1
    /// unreflected, -1 reflected) for mirroring vector operands. Pairs whose
    /// distance exceeds the cell size on any axis are skipped.
    template <typename Fn>
    void for_each_neighbor(int i, Fn&& fn) const {
        if (!active_[i]) return;
        const int d = domain_.dimension();
        const Tensor& xi = positions_->values[i];

        struct AxisOption {
            int cell;
            double shift;
            int reflect;  // 0 direct, -1 low wall, +1 high wall
        };
        std::array<std::array<AxisOption, 5>, 3> options{};
        std::array<int, 3> count{1, 1, 1};

        for (int a = 0; a < d; ++a) {
            const int n = domain_.cells(a);
            const int ci = cell_of_[i][a];
            const double ext = domain_.extent(a);
            int k = 0;
            for (int o = -1; o <= 1; ++o) {
                int c = ci + o;
                double shift = 0.0;
                if (c < 0) {
                    if (domain_.boundary(a) != BoundaryKind::Periodic) continue;
                    c += n;
                    shift = -ext;
                } else if (c >= n) {
                    if (domain_.boundary(a) != BoundaryKind::Periodic) continue;
                    c -= n;
                    shift = ext;
                }
                options[a][k++] = {c, shift, 0};
            }
            if (domain_.boundary(a) == BoundaryKind::Symmetric) {
                if (ci == 0) options[a][k++] = {0, 0.0, -1};
                if (ci == n - 1) options[a][k++] = {n - 1, 0.0, +1};
            }
            count[a] = k;
        }

        std::array<int, 3> sel{0, 0, 0};
        while (true) {
            int flat = 0;
            for (int a = d - 1; a >= 0; --a)
                flat = flat * domain_.cells(a) + options[a][sel[a]].cell;
            Tensor guide = Tensor::zeros(d, 1);
            for (int a = 0; a < d; ++a) guide(a) = options[a][sel[a]].reflect != 0 ? -1.0 : 1.0;

            for (int j : cells_[flat]) {
                const Tensor& xj = positions_->values[j];
                Tensor rel = Tensor::zeros(d, 1);
                bool skip = false;
                for (int a = 0; a < d; ++a) {
                    const AxisOption& op = options[a][sel[a]];
                    double img;
                    if (op.reflect == 0)
                        img = xj(a) + op.shift;
                    else if (op.reflect < 0)
                        img = 2.0 * domain_.lo(a) - xj(a);
                    else
                        img = 2.0 * domain_.hi(a) - xj(a);
                    double r = img - xi(a);
                    if (std::abs(r) > domain_.cell_size(a)) {
                        skip = true;
                        break;
                    }
                    rel(a) = r;
                }
                if (skip) continue;
                fn(rel, j, cell_size_, guide);
            }

            int a = 0;
            for (; a < d; ++a) {
                if (++sel[a] < count[a]) break;
                sel[a] = 0;
            }
            if (a == d) break;
        }
    }

private:
    int cell_index(int axis, double x) const;

    Domain domain_;
    std::shared_ptr<Field> positions_;
    std::vector<std::uint8_t> active_;
    std::vector<std::array<int, 3>> cell_of_;
    std::vector<std::vector<int>> cells_;
    Tensor cell_size_;
    int active_count_ = 0;
    bool dirty_ = true;
    long rebuild_count_ = 0;
    mutable std::atomic<long> warnings_{0};
};

}  // namespace nauticle

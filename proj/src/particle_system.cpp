#include "nauticle/particle_system.hpp"

#include "nauticle/error.hpp"
#include "nauticle/format.hpp"

namespace nauticle {

ParticleSystem::ParticleSystem(Domain domain, std::shared_ptr<Field> positions)
    : domain_(std::move(domain)), positions_(std::move(positions)) {
    const int n = positions_->particle_count();
    active_.assign(n, 1);
    cell_of_.assign(n, {0, 0, 0});
    active_count_ = n;
    cell_size_ = domain_.cell_size_tensor();
    long total = 1;
    for (int a = 0; a < domain_.dimension(); ++a) total *= domain_.cells(a);
    cells_.resize(total);
}

int ParticleSystem::cell_index(int axis, double x) const {
    const double lo = domain_.lo(axis);
    const double size = domain_.cell_size(axis);
    const int n = domain_.cells(axis);
    int c = static_cast<int>(std::floor((x - lo) / size));
    if (domain_.boundary(axis) == BoundaryKind::Periodic) {
        c %= n;
        if (c < 0) c += n;
        return c;
    }
    return c < 0 ? 0 : (c >= n ? n - 1 : c);
}

void ParticleSystem::build_cells() {
    for (auto& cell : cells_) cell.clear();
    const int d = domain_.dimension();
    const int n = particle_count();
    for (int i = 0; i < n; ++i) {
        if (!active_[i]) continue;
        const Tensor& x = positions_->values[i];
        int flat = 0;
        for (int a = d - 1; a >= 0; --a) {
            if (domain_.boundary(a) == BoundaryKind::Cutoff &&
                (x(a) < domain_.lo(a) || x(a) > domain_.hi(a)))
                throw runtime_error("particle ", i, " outside the domain on cut-off axis ", a,
                                    " (position ", format_double(x(a)), ")");
            int c = cell_index(a, x(a));
            cell_of_[i][a] = c;
            flat = flat * domain_.cells(a) + c;
        }
        cells_[flat].push_back(i);
    }
    dirty_ = false;
    ++rebuild_count_;
}

void ParticleSystem::apply_boundary_shift() {
    const int d = domain_.dimension();
    const int n = particle_count();
    for (int i = 0; i < n; ++i) {
        if (!active_[i]) continue;
        Tensor& x = positions_->values[i];
        for (int a = 0; a < d; ++a) {
            const double lo = domain_.lo(a);
            const double hi = domain_.hi(a);
            switch (domain_.boundary(a)) {
                case BoundaryKind::Periodic:
                    if (x(a) < lo || x(a) >= hi) {
                        double w = std::fmod(x(a) - lo, domain_.extent(a));
                        if (w < 0.0) w += domain_.extent(a);
                        x(a) = lo + w;
                        if (x(a) >= hi) x(a) = lo;  // guard fp rounding at the seam
                    }
                    break;
                case BoundaryKind::Symmetric:
                    if (x(a) < lo || x(a) > hi) ++warnings_;
                    break;
                case BoundaryKind::Cutoff:
                    if (x(a) < lo || x(a) > hi) {
                        if (active_[i]) {
                            active_[i] = 0;
                            --active_count_;
                            dirty_ = true;
                        }
                    }
                    break;
            }
            if (!active_[i]) break;
        }
    }
}

}  // namespace nauticle

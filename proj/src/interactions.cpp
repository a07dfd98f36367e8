#include "nauticle/interactions.hpp"

#include <cmath>

namespace nauticle {

using sfl::InteractionNode;

namespace {

constexpr double kTangentialFloor = 1e-12;  // m/s; regularizes v^t/|v^t| at sticking contacts

double scalar_operand(const InteractionNode& node, int slot, int j, int level) {
    return node.operand(slot).evaluate(j, level).value();
}

struct SphContext {
    Kernel kernel;
    double radius;
};

SphContext sph_context(const InteractionNode& node, int i, int level) {
    double radius = scalar_operand(node, 4, i, level);
    if (!(radius > 0.0))
        throw runtime_error(node.op().name, ": influence radius must be positive");
    return {Kernel(node.kernel(), 0.5 * radius), radius};
}

// A zero-distance pair is a deck error only between two distinct unreflected
// particles; the mirror image of a particle sitting exactly on a wall also
// gives d = 0 and is silently skipped.
bool warn_coincident(const ParticleSystem& ps, int i, int j, const Tensor& guide) {
    if (i == j) return false;
    for (int a = 0; a < guide.rows(); ++a)
        if (guide(a) < 0) return false;
    ps.count_warning();
    return true;
}

Tensor eval_sph_sampling(const InteractionNode& node, int i, int level) {
    SphContext ctx = sph_context(node, i, level);
    const ParticleSystem& ps = node.particle_system();
    Tensor a_i = node.operand(0).evaluate(i, level);
    Tensor zero = Tensor::zeros(a_i.rows(), a_i.cols());
    return interact(ps, i, zero,
                    [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
                        double d = rel.mat().norm();
                        if (d > ctx.radius) return zero;
                        double w = ctx.kernel.value(d);
                        if (w == 0.0) return zero;
                        double rho_j = scalar_operand(node, 2, j, level);
                        if (rho_j == 0.0)
                            throw runtime_error("sph_S: zero density at particle ", j);
                        double m_j = scalar_operand(node, 1, j, level);
                        Tensor a_j = mirror(node.operand(0).evaluate(j, level), guide);
                        return a_j * Tensor(m_j / rho_j * w);
                    });
}

Tensor eval_sph_divergence(const InteractionNode& node, int i, int level) {
    SphContext ctx = sph_context(node, i, level);
    const ParticleSystem& ps = node.particle_system();
    Tensor a_i = node.operand(0).evaluate(i, level);
    if (!a_i.is_column() || a_i.is_scalar())
        throw runtime_error("sph_D00: operand must be a vector field, got ", a_i.shape_string());
    Tensor zero = Tensor(0.0);
    return interact(ps, i, zero,
                    [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
                        double d = rel.mat().norm();
                        if (d <= 0.0 || d > ctx.radius) return zero;
                        double rho_j = scalar_operand(node, 2, j, level);
                        if (rho_j == 0.0)
                            throw runtime_error("sph_D00: zero density at particle ", j);
                        double m_j = scalar_operand(node, 1, j, level);
                        Tensor a_j = mirror(node.operand(0).evaluate(j, level), guide);
                        Tensor grad = ctx.kernel.gradient(rel);
                        return dot(a_j - a_i, grad) * Tensor(m_j / rho_j);
                    });
}

Tensor eval_sph_gradient(const InteractionNode& node, int i, int level) {
    SphContext ctx = sph_context(node, i, level);
    const ParticleSystem& ps = node.particle_system();
    double a_i = scalar_operand(node, 0, i, level);
    double rho_i = scalar_operand(node, 2, i, level);
    if (rho_i == 0.0) throw runtime_error("sph_G11: zero density at particle ", i);
    const int d = ps.domain().dimension();
    Tensor zero = Tensor::zeros(d, 1);
    Tensor sum = interact(
        ps, i, zero, [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
            double dist = rel.mat().norm();
            if (dist <= 0.0 || dist > ctx.radius) return zero;
            double rho_j = scalar_operand(node, 2, j, level);
            if (rho_j == 0.0) throw runtime_error("sph_G11: zero density at particle ", j);
            double a_j = scalar_operand(node, 0, j, level);
            double m_j = scalar_operand(node, 1, j, level);
            (void)guide;  // scalar operands are mirror invariant
            return ctx.kernel.gradient(rel) *
                   Tensor(m_j * (a_i / (rho_i * rho_i) + a_j / (rho_j * rho_j)));
        });
    return sum * Tensor(rho_i);
}

Tensor eval_sph_laplacian(const InteractionNode& node, int i, int level) {
    SphContext ctx = sph_context(node, i, level);
    const ParticleSystem& ps = node.particle_system();
    double a_i = scalar_operand(node, 0, i, level);
    Tensor zero = Tensor(0.0);
    return interact(ps, i, zero,
                    [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
                        double d = rel.mat().norm();
                        if (d > ctx.radius) return zero;
                        if (d <= 0.0) {
                            warn_coincident(ps, i, j, guide);
                            return zero;
                        }
                        double rho_j = scalar_operand(node, 2, j, level);
                        if (rho_j == 0.0)
                            throw runtime_error("sph_L0: zero density at particle ", j);
                        double a_j = scalar_operand(node, 0, j, level);
                        double m_j = scalar_operand(node, 1, j, level);
                        Tensor grad = ctx.kernel.gradient(rel);
                        return Tensor(2.0 * (a_j - a_i) * dot(rel, grad).value() / (d * d) * m_j /
                                      rho_j);
                    });
}

Tensor eval_sph_art_viscosity(const InteractionNode& node, int i, int level) {
    SphContext ctx = sph_context(node, i, level);
    const ParticleSystem& ps = node.particle_system();
    Tensor v_i = node.operand(0).evaluate(i, level);
    double rho_i = scalar_operand(node, 2, i, level);
    if (rho_i == 0.0) throw runtime_error("sph_A: zero density at particle ", i);
    Tensor zero = Tensor::zeros(ps.domain().dimension(), 1);
    return interact(ps, i, zero,
                    [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
                        double d = rel.mat().norm();
                        if (d > ctx.radius) return zero;
                        if (d <= 0.0) {
                            warn_coincident(ps, i, j, guide);
                            return zero;
                        }
                        Tensor v_j = mirror(node.operand(0).evaluate(j, level), guide);
                        double approach = dot(v_j - v_i, rel).value();
                        if (approach >= 0.0) return zero;
                        double m_j = scalar_operand(node, 1, j, level);
                        double pi_ij = approach / (rho_i * d * d);
                        return ctx.kernel.gradient(rel) * Tensor(m_j * pi_ij);
                    });
}

Tensor dem_sum(const InteractionNode& node, int i, int level, bool images_only, bool as_force) {
    const ParticleSystem& ps = node.particle_system();
    double radius = scalar_operand(node, 6, i, level);
    Tensor v_i = node.operand(0).evaluate(i, level);
    HertzPair pair{};
    pair.Ri = scalar_operand(node, 1, i, level);
    pair.Ei = scalar_operand(node, 2, i, level);
    pair.nui = scalar_operand(node, 3, i, level);
    pair.mi = scalar_operand(node, 4, i, level);
    pair.friction = scalar_operand(node, 5, i, level);
    const int d = ps.domain().dimension();
    Tensor zero = Tensor::zeros(d, 1);
    Tensor force = interact(
        ps, i, zero, [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
            double dist = rel.mat().norm();
            if (dist > radius) return zero;
            bool image = false;
            for (int a = 0; a < guide.rows(); ++a) image |= guide(a) < 0;
            if (images_only && !image) return zero;
            if (dist <= 0.0) {
                warn_coincident(ps, i, j, guide);
                return zero;
            }
            HertzPair p = pair;
            p.Rj = scalar_operand(node, 1, j, level);
            p.Ej = scalar_operand(node, 2, j, level);
            p.nuj = scalar_operand(node, 3, j, level);
            p.mj = scalar_operand(node, 4, j, level);
            if (p.Rj + p.Ri - dist <= 0.0) return zero;
            Tensor v_j = mirror(node.operand(0).evaluate(j, level), guide);
            return hertz_contact_force(p, rel, v_i, v_j);
        });
    return as_force ? force : force / Tensor(pair.mi);
}

Tensor eval_dem_contact(const InteractionNode& node, int i, int level) {
    return dem_sum(node, i, level, /*images_only=*/false, /*as_force=*/false);
}

Tensor eval_dem_boundary_force(const InteractionNode& node, int i, int level) {
    return dem_sum(node, i, level, /*images_only=*/true, /*as_force=*/true);
}

Tensor eval_gravity(const InteractionNode& node, int i, int level) {
    const ParticleSystem& ps = node.particle_system();
    double g_const = scalar_operand(node, 1, i, level);
    double eps = node.operand_count() > 2 ? scalar_operand(node, 2, i, level) : 0.0;
    const int d = ps.domain().dimension();
    const Tensor& x_i = ps.positions().values[i];
    Tensor acc = Tensor::zeros(d, 1);
    const int n = ps.particle_count();
    for (int j = 0; j < n; ++j) {
        if (j == i || !ps.is_active(j)) continue;
        Tensor rel = ps.positions().values[j] - x_i;
        double r2 = rel.mat().squaredNorm() + eps * eps;
        if (r2 == 0.0)
            throw runtime_error("nbody_gravity: coincident particles ", i, " and ", j,
                                " with zero softening");
        double m_j = scalar_operand(node, 0, j, level);
        acc = acc + rel * Tensor(g_const * m_j / std::pow(r2, 1.5));
    }
    return acc;
}

Tensor eval_social_force(const InteractionNode& node, int i, int level) {
    const ParticleSystem& ps = node.particle_system();
    Tensor v_i = node.operand(0).evaluate(i, level);
    double v0 = scalar_operand(node, 1, i, level);
    Tensor r_desired = node.operand(2).evaluate(i, level);
    double radius_i = scalar_operand(node, 3, i, level);
    double rep_a = scalar_operand(node, 4, i, level);
    double rep_b = scalar_operand(node, 5, i, level);
    double body_k = scalar_operand(node, 6, i, level);
    double c_i = scalar_operand(node, 7, i, level);
    double m_i = scalar_operand(node, 8, i, level);
    double tau = scalar_operand(node, 9, i, level);
    if (!(tau > 0.0)) throw runtime_error("sfm: relaxation time must be positive");
    if (!(m_i > 0.0)) throw runtime_error("sfm: mass must be positive");

    const int d = ps.domain().dimension();
    Tensor zero = Tensor::zeros(d, 1);
    Tensor driving = zero;
    Tensor e0 = r_desired - ps.positions().values[i];
    double e0n = e0.mat().norm();
    if (e0n > 0.0) {
        driving = (e0 * Tensor(v0 / e0n) - v_i) / Tensor(tau);
    } else {
        ps.count_warning();  // agent already at its desired position
    }

    Tensor sum = interact(
        ps, i, zero, [&](const Tensor& rel, int j, const Tensor& cell_size, const Tensor&) {
            double d_ji = rel.mat().norm();
            double cs_min = cell_size(0);
            for (int a = 1; a < cell_size.rows(); ++a) cs_min = std::min(cs_min, cell_size(a));
            if (!(d_ji > 0.0 && d_ji < cs_min)) return zero;
            double radius_j = scalar_operand(node, 3, j, level);
            double c_j = scalar_operand(node, 7, j, level);
            double r_ij = radius_i + radius_j;
            double c_ij = 0.5 * (c_i + c_j);
            double body = r_ij - d_ji > 0.0 ? body_k * (r_ij - d_ji) : 0.0;
            Tensor n_ji = rel / Tensor(d_ji);
            return n_ji * Tensor(rep_a * std::exp((r_ij - d_ji) / rep_b) + body - c_ij);
        });
    return driving - sum / Tensor(m_i);
}

const InteractionOp kOps[] = {
    {"sph_S", 5, 5, 3, 4, true, eval_sph_sampling},
    {"sph_D00", 5, 5, 3, 4, true, eval_sph_divergence},
    {"sph_G11", 5, 5, 3, 4, true, eval_sph_gradient},
    {"sph_L0", 5, 5, 3, 4, true, eval_sph_laplacian},
    {"sph_A", 5, 5, 3, 4, true, eval_sph_art_viscosity},
    {"dem_l", 7, 7, -1, 6, true, eval_dem_contact},
    {"dem_boundary_force", 7, 7, -1, 6, true, eval_dem_boundary_force},
    {"nbody_gravity", 2, 3, -1, -1, false, eval_gravity},
    {"sfm", 10, 10, -1, -1, true, eval_social_force},
};

}  // namespace

const InteractionOp* find_interaction(const std::string& name) {
    for (const auto& op : kOps)
        if (name == op.name) return &op;
    return nullptr;
}

const std::vector<const InteractionOp*>& interaction_registry() {
    static const std::vector<const InteractionOp*> reg = [] {
        std::vector<const InteractionOp*> r;
        for (const auto& op : kOps) r.push_back(&op);
        return r;
    }();
    return reg;
}

Tensor hertz_contact_force(const HertzPair& pair, const Tensor& rel_pos, const Tensor& vi,
                           const Tensor& vj, double damping_scale) {
    double dist = rel_pos.mat().norm();
    double overlap = pair.Ri + pair.Rj - dist;
    if (overlap <= 0.0 || dist <= 0.0) return Tensor::zeros(rel_pos.rows(), 1);
    if (pair.Ei <= 0.0 || pair.Ej <= 0.0 || pair.Ri <= 0.0 || pair.Rj <= 0.0)
        throw runtime_error("dem contact: nonpositive Young modulus or radius");

    double r_eff = pair.Ri * pair.Rj / (pair.Ri + pair.Rj);
    double m_eff = pair.mi * pair.mj / (pair.mi + pair.mj);
    double e_eff = pair.Ei * pair.Ej /
                   (pair.Ej * (1.0 - pair.nui * pair.nui) + pair.Ei * (1.0 - pair.nuj * pair.nuj));
    double k_hz = 4.0 / 3.0 * std::sqrt(r_eff) * e_eff;
    double c_hz = std::sqrt(m_eff * k_hz) / 8.0 * damping_scale;

    Tensor n_ji = rel_pos / Tensor(dist);
    double overlap_rate = -dot(vj - vi, n_ji).value();
    double normal = k_hz * std::pow(overlap, 1.5) + c_hz * std::pow(overlap, 0.25) * overlap_rate;
    Tensor force = -(n_ji * Tensor(normal));

    if (pair.friction != 0.0) {
        Tensor v_ij = vi - vj;
        Tensor v_t = -v_ij + n_ji * dot(v_ij, n_ji);
        double vt_norm = v_t.mat().norm();
        if (vt_norm > kTangentialFloor)
            force = force + v_t * Tensor(pair.friction * std::abs(normal) / vt_norm);
    }
    return force;
}

}  // namespace nauticle

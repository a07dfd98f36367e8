#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nauticle/interactions.hpp"
#include "nauticle/kernel.hpp"

using namespace nauticle;
using namespace test_helpers;

namespace {

constexpr auto P = BoundaryKind::Periodic;
constexpr auto S = BoundaryKind::Symmetric;
constexpr auto C = BoundaryKind::Cutoff;

// Independent per-operator references: direct formulas over the brute-force
// all-pairs-with-images enumeration (oracle_neighbors), no cell grid.

Tensor ref_sph_sampling(const Domain& dom, const std::vector<Tensor>& pos,
                        const std::vector<Tensor>& a, double mass, double rho, const Kernel& k,
                        double radius, int i) {
    Tensor acc = Tensor::zeros(a[i].rows(), a[i].cols());
    for (const auto& p : oracle_neighbors(dom, pos, i, radius))
        acc = acc + mirror(a[p.j], p.guide) * Tensor(mass / rho * k.value(p.rel.mat().norm()));
    return acc;
}

Tensor ref_sph_divergence(const Domain& dom, const std::vector<Tensor>& pos,
                          const std::vector<Tensor>& a, double mass, double rho, const Kernel& k,
                          double radius, int i) {
    Tensor acc(0.0);
    for (const auto& p : oracle_neighbors(dom, pos, i, radius)) {
        double d = p.rel.mat().norm();
        if (d <= 0.0) continue;
        acc = acc + dot(mirror(a[p.j], p.guide) - a[i], k.gradient(p.rel)) * Tensor(mass / rho);
    }
    return acc;
}

Tensor ref_sph_gradient(const Domain& dom, const std::vector<Tensor>& pos,
                        const std::vector<double>& a, double mass,
                        const std::vector<double>& rho, const Kernel& k, double radius, int i) {
    Tensor acc = Tensor::zeros(dom.dimension(), 1);
    for (const auto& p : oracle_neighbors(dom, pos, i, radius)) {
        double d = p.rel.mat().norm();
        if (d <= 0.0) continue;
        double w = mass * (a[i] / (rho[i] * rho[i]) + a[p.j] / (rho[p.j] * rho[p.j]));
        acc = acc + k.gradient(p.rel) * Tensor(w);
    }
    return acc * Tensor(rho[i]);
}

Tensor ref_sph_laplacian(const Domain& dom, const std::vector<Tensor>& pos,
                         const std::vector<double>& a, double mass, double rho, const Kernel& k,
                         double radius, int i) {
    double acc = 0.0;
    for (const auto& p : oracle_neighbors(dom, pos, i, radius)) {
        double d = p.rel.mat().norm();
        if (d <= 0.0) continue;
        acc += 2.0 * (a[p.j] - a[i]) * dot(p.rel, k.gradient(p.rel)).value() / (d * d) * mass / rho;
    }
    return Tensor(acc);
}

Tensor ref_sph_viscosity(const Domain& dom, const std::vector<Tensor>& pos,
                         const std::vector<Tensor>& v, double mass, double rho, const Kernel& k,
                         double radius, int i) {
    Tensor acc = Tensor::zeros(dom.dimension(), 1);
    for (const auto& p : oracle_neighbors(dom, pos, i, radius)) {
        double d = p.rel.mat().norm();
        if (d <= 0.0) continue;
        double approach = dot(mirror(v[p.j], p.guide) - v[i], p.rel).value();
        if (approach >= 0.0) continue;
        acc = acc + k.gradient(p.rel) * Tensor(mass * approach / (rho * d * d));
    }
    return acc;
}

// Hertz contact, re-derived in the test.
Tensor ref_dem(const Domain& dom, const std::vector<Tensor>& pos, const std::vector<Tensor>& v,
               double R, double E, double nu, double mass, double cf, double radius, int i,
               bool images_only, bool as_force) {
    Tensor acc = Tensor::zeros(dom.dimension(), 1);
    for (const auto& p : oracle_neighbors(dom, pos, i, radius)) {
        double d = p.rel.mat().norm();
        if (d <= 0.0) continue;
        bool image = false;
        for (int a = 0; a < p.guide.rows(); ++a) image |= p.guide(a) < 0;
        if (images_only && !image) continue;
        double overlap = 2.0 * R - d;
        if (overlap <= 0.0) continue;
        double r_eff = R / 2.0, m_eff = mass / 2.0;
        double e_eff = E / (2.0 * (1.0 - nu * nu));
        double k_hz = 4.0 / 3.0 * std::sqrt(r_eff) * e_eff;
        double c_hz = std::sqrt(m_eff * k_hz) / 8.0;
        Tensor n_ji = p.rel / Tensor(d);
        Tensor vj = mirror(v[p.j], p.guide);
        double ddot = -dot(vj - v[i], n_ji).value();
        double normal = k_hz * std::pow(overlap, 1.5) + c_hz * std::pow(overlap, 0.25) * ddot;
        Tensor f = -(n_ji * Tensor(normal));
        if (cf != 0.0) {
            Tensor v_ij = v[i] - vj;
            Tensor vt = -v_ij + n_ji * dot(v_ij, n_ji);
            double vtn = vt.mat().norm();
            if (vtn > 1e-12) f = f + vt * Tensor(cf * std::abs(normal) / vtn);
        }
        acc = acc + f;
    }
    return as_force ? acc : acc / Tensor(mass);
}

bool close(const Tensor& a, const Tensor& b, double tol) {
    double scale = std::max({1.0, a.mat().norm(), b.mat().norm()});
    return (a - b).mat().norm() <= tol * scale;
}

}  // namespace

TEST_CASE("sph_S: self term, zero field, Shepard sum") {
    double h = 0.25, rho0 = 1000.0, dx = h / 1.1;
    double mass = dx * dx * rho0;

    // isolated particle: only the self term V * W(0)
    CaseBuilder lone;
    lone.constant("mass", Tensor(mass)).constant("rho0", Tensor(rho0)).constant("h", Tensor(h));
    lone.particles(box(2, {8, 8, 1}, {2 * h, 2 * h, 1}, {C, C, C}), {vec2(2.0, 2.0)});
    lone.field_uniform("A", Tensor(1.0)).field_uniform("rho", Tensor(rho0));
    Kernel k(decode_kernel_keyword("Wp52220"), h);
    double expect = mass / rho0 * k.value(0.0);
    CHECK(lone.eval("sph_S(A,mass,rho,Wp52220,2*h)", 0).value() ==
          doctest::Approx(expect).epsilon(1e-14));
    CHECK(lone.eval("sph_S(A*0,mass,rho,Wp52220,2*h)", 0).value() == 0.0);

    // dense periodic lattice: the Shepard sum of a constant is within 2%
    dx = h / 1.5;
    mass = dx * dx * rho0;
    std::vector<Tensor> pos;
    int npr = static_cast<int>(std::round(2.0 / dx));
    double per = npr * dx;  // integer number of spacings per period
    for (int iy = 0; iy < npr; ++iy)
        for (int ix = 0; ix < npr; ++ix) pos.push_back(vec2(ix * dx, iy * dx));
    int cells = static_cast<int>(std::floor(per / (2 * h)));
    double cell = per / cells;
    CaseBuilder grid;
    grid.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    grid.particles(Domain(2, {0, 0, 0}, {cells, cells, 1}, {cell, cell, 1}, {P, P, C}),
                   std::move(pos));
    grid.field_uniform("A", Tensor(3.7)).field_uniform("rho", Tensor(rho0));
    double sampled = grid.eval("sph_S(A,mass,rho,Wp52220,2*h)", npr / 2 * npr + npr / 2).value();
    CHECK(sampled == doctest::Approx(3.7).epsilon(0.02));
}

TEST_CASE("sph_D00: constancy, single particle, linear divergence") {
    double h = 0.25, dx = h / 1.5, rho0 = 1000.0, mass = dx * dx * rho0;
    CaseBuilder b;
    b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    std::vector<Tensor> pos;
    for (int iy = 0; iy < 20; ++iy)
        for (int ix = 0; ix < 20; ++ix) pos.push_back(vec2(ix * dx, iy * dx));
    b.particles(box(2, {10, 10, 1}, {2 * h, 2 * h, 1}, {C, C, C}), pos);
    b.field_uniform("rho", Tensor(rho0));
    std::vector<Tensor> lin;
    for (const auto& p : pos) lin.push_back(vec2(p(0), 0.0));
    b.field("vlin", lin).field_uniform("vconst", vec2(1.25, -0.5));

    int center = 10 * 20 + 10;
    CHECK(b.eval("sph_D00(vconst,mass,rho,Wp52220,2*h)", center).value() == 0.0);
    CHECK(std::abs(b.eval("sph_D00(vlin,mass,rho,Wp52220,2*h)", center).value() - 1.0) <= 2e-2);

    CaseBuilder lone;
    lone.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    lone.particles(box(2, {8, 8, 1}, {2 * h, 2 * h, 1}, {C, C, C}), {vec2(1.9, 2.0)});
    lone.field_uniform("rho", Tensor(rho0)).field_uniform("v", vec2(3, 4));
    CHECK(lone.eval("sph_D00(v,mass,rho,Wp52220,2*h)", 0).value() == 0.0);
}

TEST_CASE("sph_G11: symmetry and zeros") {
    double h = 0.25, rho0 = 1000.0;
    CaseBuilder b;
    b.constant("mass", Tensor(51.65)).constant("h", Tensor(h));
    b.particles(box(2, {8, 8, 1}, {2 * h, 2 * h, 1}, {C, C, C}),
                {vec2(1.9, 2.0), vec2(2.2, 2.0)});
    b.field_uniform("rho", Tensor(rho0)).field_uniform("p", Tensor(77.0));
    Tensor f0 = b.eval("sph_G11(p,mass,rho,Wp52220,2*h)", 0);
    Tensor f1 = b.eval("sph_G11(p,mass,rho,Wp52220,2*h)", 1);
    CHECK((f0 + f1).mat().norm() <= 1e-12 * f0.mat().norm());
    CHECK(b.eval("sph_G11(p*0,mass,rho,Wp52220,2*h)", 0).mat().norm() == 0.0);
}

TEST_CASE("sph_G11 on a hydrostatic column balances gravity within 10%") {
    // column with the analytic hydrostatic pressure p = rho0 g (H - y);
    // the symmetrized gradient divided by rho must reproduce rho g.
    double h = 0.25, dx = h / 1.1, rho0 = 1000.0, mass = dx * dx * rho0, grav = 9.81;
    const int nx = 28, ny = 36;
    double height = (ny - 1) * dx;
    std::vector<Tensor> pos;
    std::vector<Tensor> pressure;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            pos.push_back(vec2(ix * dx, iy * dx));
            pressure.push_back(Tensor(rho0 * grav * (height - iy * dx)));
        }
    CaseBuilder b;
    b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    b.particles(box(2, {16, 20, 1}, {2 * h, 2 * h, 1}, {C, C, C}), pos);
    b.field_uniform("rho", Tensor(rho0));
    b.field("p", pressure);
    int interior = (ny / 2) * nx + nx / 2;
    Tensor grad_over_rho =
        b.eval("sph_G11(p,mass,rho,Wp52220,2*h)", interior) / Tensor(rho0);
    CHECK(std::abs(grad_over_rho(1) - (-grav)) <= 0.1 * grav);
    CHECK(std::abs(grad_over_rho(0)) <= 0.1 * grav);
}

TEST_CASE("sph_L0: constancy, 1D quadratic, pairwise cancellation") {
    double dx = 0.1, h = 2.0 * dx, rho0 = 1000.0, mass = dx * rho0;
    CaseBuilder b;
    b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    std::vector<Tensor> pos;
    const int n = 101;
    for (int i = 0; i < n; ++i) pos.push_back(Tensor(i * dx));
    int cells = static_cast<int>(std::ceil(n * dx / (2 * h)));
    b.particles(Domain(1, {0, 0, 0}, {cells, 1, 1}, {2 * h, 1, 1}, {C, C, C}), pos);
    b.field_uniform("rho", Tensor(rho0)).field_uniform("one", Tensor(4.2));
    std::vector<Tensor> quad;
    for (int i = 0; i < n; ++i) quad.push_back(Tensor(pos[i](0) * pos[i](0)));
    b.field("q", quad);

    CHECK(b.eval("sph_L0(one,mass,rho,Wp51220,2*h)", n / 2).value() == 0.0);
    CHECK(b.eval("sph_L0(q,mass,rho,Wp51220,2*h)", n / 2).value() ==
          doctest::Approx(2.0).epsilon(2.5e-2));

    // equal masses: the volume-weighted total vanishes by pairwise antisymmetry
    std::mt19937 rng(55);
    Domain pdom(1, {0, 0, 0}, {5, 1, 1}, {2 * h, 1, 1}, {P, C, C});
    auto rpos = random_positions(rng, pdom, 40);
    CaseBuilder pb;
    pb.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    pb.particles(pdom, rpos);
    pb.field_uniform("rho", Tensor(rho0));
    std::vector<Tensor> vals;
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 40; ++i) vals.push_back(Tensor(u(rng)));
    pb.field("a", vals);
    double total = 0.0, scale = 0.0;
    for (int i = 0; i < 40; ++i) {
        double li = pb.eval("sph_L0(a,mass,rho,Wp51220,2*h)", i).value();
        total += li * mass / rho0;
        scale += std::abs(li) * mass / rho0;
    }
    CHECK(std::abs(total) <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("sph_A: rest, separation and the single-pair closed form") {
    double h = 0.25, rho0 = 1000.0, mass = 51.65;
    CaseBuilder b;
    b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    b.particles(box(2, {8, 8, 1}, {2 * h, 2 * h, 1}, {C, C, C}),
                {vec2(1.9, 2.0), vec2(2.2, 2.0)});
    b.field_uniform("rho", Tensor(rho0));
    b.field_uniform("vrest", vec2(0, 0));
    b.field("vsep", {vec2(-1, 0), vec2(1, 0)});
    b.field("vapp", {vec2(1, 0), vec2(-1, 0)});

    CHECK(b.eval("sph_A(vrest,mass,rho,Wp52220,2*h)", 0).mat().norm() == 0.0);
    CHECK(b.eval("sph_A(vsep,mass,rho,Wp52220,2*h)", 0).mat().norm() == 0.0);

    // hand evaluation for the approaching pair
    Kernel k(decode_kernel_keyword("Wp52220"), h);
    double d = 0.3;
    Tensor rel = vec2(d, 0);
    double approach = dot(vec2(-2, 0), rel).value();  // v_ji . r_ji < 0
    Tensor expected = k.gradient(rel) * Tensor(mass * approach / (rho0 * d * d));
    Tensor got = b.eval("sph_A(vapp,mass,rho,Wp52220,2*h)", 0);
    CHECK(close(got, expected, 1e-12));
}

TEST_CASE("dem_l: gap, Hertz force magnitude, effective quantities") {
    double R = 0.004, E = 2.06e6, nu = 0.33;
    CaseBuilder far;
    far.constant("R", Tensor(R)).constant("E", Tensor(E)).constant("nu", Tensor(nu));
    far.constant("m", Tensor(1.0)).constant("cf", Tensor(0.0));
    far.particles(box(3, {4, 4, 4}, {0.01, 0.01, 0.01}, {C, C, C}),
                  {vec3(0.02, 0.02, 0.02), vec3(0.031, 0.02, 0.02)});
    far.field_uniform("v", vec3(0, 0, 0));
    CHECK(far.eval("dem_l(v,R,E,nu,m,cf,2*R)", 0).mat().norm() == 0.0);  // no contact

    // overlap 0.1 mm at rest: |f| = k_Hz overlap^{3/2}
    double overlap = 1e-4;
    CaseBuilder touch;
    touch.constant("R", Tensor(R)).constant("E", Tensor(E)).constant("nu", Tensor(nu));
    touch.constant("m", Tensor(1.0)).constant("cf", Tensor(0.0));
    touch.particles(box(3, {4, 4, 4}, {0.01, 0.01, 0.01}, {C, C, C}),
                    {vec3(0.02, 0.02, 0.02), vec3(0.02 + 2 * R - overlap, 0.02, 0.02)});
    touch.field_uniform("v", vec3(0, 0, 0));
    Tensor accel = touch.eval("dem_l(v,R,E,nu,m,cf,2*R)", 0);
    double e_eff = E / (2.0 * (1.0 - nu * nu));      // identical pair
    double k_hz = 4.0 / 3.0 * std::sqrt(R / 2) * e_eff;  // R' = R/2
    double f_expect = k_hz * std::pow(overlap, 1.5);
    CHECK(f_expect == doctest::Approx(6.89e-2).epsilon(2e-3));  // the derived magnitude
    CHECK(accel.mat().norm() * 1.0 == doctest::Approx(f_expect).epsilon(1e-12));
    CHECK(accel(0) < 0.0);  // repulsive: pushes i away from j
}

TEST_CASE("dem_boundary_force: wall contact through the mirror image") {
    double R = 0.004, E = 2.06e6, nu = 0.33, m = 2.1e-3;
    double overlap = 1e-4;
    double z = R - overlap / 2;  // image-pair overlap = 2R - 2z = overlap
    CaseBuilder b;
    b.constant("R", Tensor(R)).constant("E", Tensor(E)).constant("nu", Tensor(nu));
    b.constant("m", Tensor(m)).constant("cf", Tensor(0.0));
    b.particles(box(3, {5, 5, 5}, {0.02, 0.02, 0.02}, {S, S, S}),
                {vec3(0.05, 0.05, z)});
    b.field_uniform("v", vec3(0, 0, 0));
    Tensor f = b.eval("dem_boundary_force(v,R,E,nu,m,cf,2*R)", 0);
    double e_eff = E / (2.0 * (1.0 - nu * nu));
    double f_expect = 4.0 / 3.0 * std::sqrt(R / 2) * e_eff * std::pow(overlap, 1.5);
    CHECK(f(2) == doctest::Approx(f_expect).epsilon(1e-12));  // upward
    CHECK(std::abs(f(0)) <= 1e-15);
    // away from every wall the boundary force vanishes
    CaseBuilder mid;
    mid.constant("R", Tensor(R)).constant("E", Tensor(E)).constant("nu", Tensor(nu));
    mid.constant("m", Tensor(m)).constant("cf", Tensor(0.0));
    mid.particles(box(3, {5, 5, 5}, {0.02, 0.02, 0.02}, {S, S, S}), {vec3(0.05, 0.05, 0.05)});
    mid.field_uniform("v", vec3(0, 0, 0));
    CHECK(mid.eval("dem_boundary_force(v,R,E,nu,m,cf,2*R)", 0).mat().norm() == 0.0);
}

TEST_CASE("dem restitution: elastic contact conserves energy, damping dissipates") {
    // two-sphere head-on collision integrated with symplectic Euler
    double R = 0.004, E = 2.06e6, nu = 0.33, rho = 7850.0;
    double m = 4.0 / 3.0 * std::numbers::pi * R * R * R * rho;
    HertzPair pair{R, R, E, E, nu, nu, m, m, 0.0};
    for (double damping : {0.0, 1.0}) {
        Tensor x1 = vec3(-0.005, 0, 0), x2 = vec3(0.005, 0, 0);
        Tensor v1 = vec3(0.5, 0, 0), v2 = vec3(-0.5, 0, 0);
        double dt = 1e-6;
        double e_in = 0.5 * m * (v1.mat().squaredNorm() + v2.mat().squaredNorm());
        for (int step = 0; step < 40000; ++step) {
            Tensor f1 = hertz_contact_force(pair, x2 - x1, v1, v2, damping);
            Tensor f2 = hertz_contact_force(pair, x1 - x2, v2, v1, damping);
            v1 = v1 + f1 * Tensor(dt / m);
            v2 = v2 + f2 * Tensor(dt / m);
            x1 = x1 + v1 * Tensor(dt);
            x2 = x2 + v2 * Tensor(dt);
        }
        CHECK((x2 - x1).mat().norm() > 2 * R);  // separated again
        double e_out = 0.5 * m * (v1.mat().squaredNorm() + v2.mat().squaredNorm());
        if (damping == 0.0)
            CHECK(e_out == doctest::Approx(e_in).epsilon(0.01));
        else
            CHECK(e_out < e_in);
    }
}

TEST_CASE("nbody_gravity: two bodies, momentum, softening") {
    CaseBuilder b;
    b.constant("m", Tensor(1.0)).constant("G", Tensor(1.0));
    b.particles(box(2, {4, 4, 1}, {1, 1, 1}, {C, C, C}), {vec2(1.5, 2.0), vec2(2.5, 2.0)});
    Tensor a0 = b.eval("nbody_gravity(m,G)", 0);
    Tensor a1 = b.eval("nbody_gravity(m,G)", 1);
    CHECK(a0.mat().norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((a0 + a1).mat().norm() <= 1e-14);

    CaseBuilder tri;
    tri.constant("m", Tensor(1.0)).constant("G", Tensor(1.0));
    double s = 0.8;
    tri.particles(box(2, {4, 4, 1}, {1, 1, 1}, {C, C, C}),
                  {vec2(2.0, 2.0), vec2(2.0 + s, 2.0), vec2(2.0 + 0.5 * s, 2.0 + s * 0.8660254)});
    Tensor mom = Tensor::zeros(2, 1);
    for (int i = 0; i < 3; ++i) mom = mom + tri.eval("nbody_gravity(m,G)", i);
    CHECK(mom.mat().norm() <= 1e-12);

    CaseBuilder co;
    co.constant("m", Tensor(1.0)).constant("G", Tensor(1.0));
    co.particles(box(2, {4, 4, 1}, {1, 1, 1}, {C, C, C}), {vec2(2, 2), vec2(2, 2)});
    CHECK_THROWS_AS(co.eval("nbody_gravity(m,G)", 0), Error);
    CHECK(co.eval("nbody_gravity(m,G,0.1)", 0).mat().norm() == 0.0);  // softened
}

TEST_CASE("nbody_gravity: circular two-body orbit conserves energy to 1%") {
    CaseBuilder b;
    b.constant("m", Tensor(1.0)).constant("G", Tensor(1.0));
    b.particles(box(2, {8, 8, 1}, {1, 1, 1}, {C, C, C}), {vec2(3.5, 4.0), vec2(4.5, 4.0)});
    double v = std::sqrt(0.5);  // circular orbit, separation 1, about the barycenter
    std::vector<Tensor> vel = {vec2(0, v), vec2(0, -v)};
    double period = 2.0 * std::numbers::pi * 0.5 / v;
    double dt = period / 1e4;
    auto grav = b.parse("nbody_gravity(m,G)");
    auto& pos = b.cs->workspace.find_field("r")->values;
    auto energy = [&] {
        double ke = 0.5 * (vel[0].mat().squaredNorm() + vel[1].mat().squaredNorm());
        double pe = -1.0 / (pos[0] - pos[1]).mat().norm();
        return ke + pe;
    };
    double e0 = energy();
    for (int step = 0; step < 10000; ++step) {
        for (int i = 0; i < 2; ++i) vel[i] = vel[i] + grav->evaluate(i, 0) * Tensor(dt);
        for (int i = 0; i < 2; ++i) pos[i] = pos[i] + vel[i] * Tensor(dt);
    }
    CHECK(energy() == doctest::Approx(e0).epsilon(0.01));
    CHECK((pos[0] - pos[1]).mat().norm() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sfm: relaxed agent, resting agent and pair symmetry") {
    double tau = 0.5, v0 = 1.3;
    auto builder = [&](std::vector<Tensor> pos, std::vector<Tensor> vel) {
        CaseBuilder b;
        b.constant("A", Tensor(2000.0)).constant("B", Tensor(0.08)).constant("k", Tensor(1.2e5));
        b.constant("tau", Tensor(tau));
        b.particles(box(2, {8, 8, 1}, {1, 1, 1}, {C, C, C}), std::move(pos));
        b.field_uniform("v0", Tensor(v0));
        b.field_uniform("rdes", vec2(1000.0, 4.0));
        b.field_uniform("R", Tensor(0.25)).field_uniform("c", Tensor(0.0));
        b.field_uniform("m", Tensor(70.0));
        b.field("v", std::move(vel));
        return b;
    };
    {
        CaseBuilder b = builder({vec2(4, 4)}, {vec2(v0, 0)});  // already at v0 e0
        CHECK(b.eval("sfm(v,v0,rdes,R,A,B,k,c,m,tau)", 0).mat().norm() <= 1e-9);
    }
    {
        CaseBuilder b = builder({vec2(4, 4)}, {vec2(0, 0)});
        Tensor a = b.eval("sfm(v,v0,rdes,R,A,B,k,c,m,tau)", 0);
        CHECK(a(0) == doctest::Approx(v0 / tau).epsilon(1e-6));  // e0 is almost exactly +x
        CHECK(std::abs(a(1)) <= 1e-5);
    }
    {
        // symmetric overlap: equal and opposite interaction forces
        CaseBuilder b = builder({vec2(4.0, 4.0), vec2(4.3, 4.0)}, {vec2(0, 0), vec2(0, 0)});
        b.constant("z", Tensor(0.0));
        Tensor a0 = b.eval("sfm(v,0*v0,rdes,R,A,B,k,c,m,tau)", 0);
        Tensor a1 = b.eval("sfm(v,0*v0,rdes,R,A,B,k,c,m,tau)", 1);
        CHECK((a0 + a1).mat().norm() <= 1e-12 * a0.mat().norm());
        // hand formula: repulsion pushes agent 0 along -n_01, i.e. -x
        double d = 0.3, rij = 0.5, body = 1.2e5 * (rij - d);
        double f = 2000.0 * std::exp((rij - d) / 0.08) + body;
        CHECK(a0(0) == doctest::Approx(-f / 70.0).epsilon(1e-12));
    }
}

TEST_CASE("interact: counting rules and bitwise agreement with sph_S") {
    double h = 0.25;
    CaseBuilder b;
    b.constant("mass", Tensor(51.65)).constant("h", Tensor(h));
    std::mt19937 rng(60);
    Domain dom = box(2, {4, 4, 1}, {2 * h, 2 * h, 1}, {P, S, C});
    auto pos = random_positions(rng, dom, 60);
    b.particles(dom, pos);
    b.field_uniform("rho", Tensor(1000.0));
    std::vector<Tensor> av;
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 60; ++i) av.push_back(Tensor(u(rng)));
    b.field("A", av);

    const ParticleSystem& ps = *b.cs->workspace.particle_system();
    Tensor zero_rule = interact(ps, 7, Tensor(0.0),
                                [](const Tensor&, int, const Tensor&, const Tensor&) {
                                    return Tensor(0.0);
                                });
    CHECK(zero_rule.value() == 0.0);

    Tensor count = interact(ps, 7, Tensor(0.0),
                            [](const Tensor&, int, const Tensor&, const Tensor&) {
                                return Tensor(1.0);
                            });
    int visits = 0;
    ps.for_each_neighbor(7, [&](const Tensor&, int, const Tensor&, const Tensor&) { ++visits; });
    CHECK(count.value() == static_cast<double>(visits));

    // the sampling rule written through interact() reproduces sph_S bitwise
    auto field_a = b.cs->workspace.find_field("A");
    auto field_rho = b.cs->workspace.find_field("rho");
    double radius = 2 * h;
    Kernel kern(decode_kernel_keyword("Wp52220"), h);
    for (int i = 0; i < 60; i += 5) {
        Tensor via_rule = interact(
            ps, i, Tensor(0.0),
            [&](const Tensor& rel, int j, const Tensor&, const Tensor& guide) {
                double d = rel.mat().norm();
                if (d > radius) return Tensor(0.0);
                double w = kern.value(d);
                if (w == 0.0) return Tensor(0.0);
                double rho_j = field_rho->values[j].value();
                double m_j = 51.65;
                return Tensor(mirror(field_a->values[j], guide) * Tensor(m_j / rho_j * w));
            });
        Tensor via_op = b.eval("sph_S(A,mass,rho,Wp52220,2*h)", i);
        CHECK(via_rule.value() == via_op.value());
    }
}

TEST_CASE("oracle equivalence on random configurations") {
    std::mt19937 rng(71);
    double h = 0.3, mass = 2.5, rho0 = 800.0;
    Domain dom = box(2, {4, 3, 1}, {2 * h, 2 * h, 1}, {P, S, C});
    const int n = 90;
    auto pos = random_positions(rng, dom, n);
    CaseBuilder b;
    b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    b.particles(dom, pos);
    const auto& wrapped = b.cs->workspace.find_field("r")->values;

    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Tensor> pval, vval, rhoval;
    std::vector<double> pd, rhod;
    std::vector<Tensor> vv;
    for (int i = 0; i < n; ++i) {
        double p = u(rng), r1 = rho0 * (1.0 + 0.05 * u(rng));
        pval.push_back(Tensor(p));
        pd.push_back(p);
        rhoval.push_back(Tensor(r1));
        rhod.push_back(r1);
        Tensor v = vec2(u(rng), u(rng));
        vval.push_back(v);
        vv.push_back(v);
    }
    b.field("p", pval).field("v", vval).field("rho", rhoval);

    Kernel k(decode_kernel_keyword("Wp52220"), h);
    double radius = 2 * h;
    for (int i = 0; i < n; i += 3) {
        CHECK(close(b.eval("sph_S(p,mass,rho,Wp52220,2*h)", i),
                    [&] {
                        Tensor acc(0.0);
                        for (const auto& pr : oracle_neighbors(dom, wrapped, i, radius))
                            acc = acc + Tensor(pd[pr.j] * mass / rhod[pr.j] *
                                               k.value(pr.rel.mat().norm()));
                        return acc;
                    }(),
                    1e-12));
        CHECK(close(b.eval("sph_D00(v,mass,rho,Wp52220,2*h)", i),
                    [&] {
                        Tensor acc(0.0);
                        for (const auto& pr : oracle_neighbors(dom, wrapped, i, radius)) {
                            double d = pr.rel.mat().norm();
                            if (d <= 0.0) continue;
                            acc = acc + dot(mirror(vv[pr.j], pr.guide) - vv[i],
                                            k.gradient(pr.rel)) *
                                            Tensor(mass / rhod[pr.j]);
                        }
                        return acc;
                    }(),
                    1e-12));
        CHECK(close(b.eval("sph_G11(p,mass,rho,Wp52220,2*h)", i),
                    ref_sph_gradient(dom, wrapped, pd, mass, rhod, k, radius, i), 1e-12));
        CHECK(close(b.eval("sph_A(v,mass,rho,Wp52220,2*h)", i),
                    [&] {
                        Tensor acc = Tensor::zeros(2, 1);
                        for (const auto& pr : oracle_neighbors(dom, wrapped, i, radius)) {
                            double d = pr.rel.mat().norm();
                            if (d <= 0.0) continue;
                            double appr =
                                dot(mirror(vv[pr.j], pr.guide) - vv[i], pr.rel).value();
                            if (appr >= 0.0) continue;
                            acc = acc + k.gradient(pr.rel) *
                                            Tensor(mass * appr / (rhod[i] * d * d));
                        }
                        return acc;
                    }(),
                    1e-12));
    }

    // scalar Laplacian with uniform density operand
    CaseBuilder lb;
    lb.constant("mass", Tensor(mass)).constant("h", Tensor(h)).constant("rho0", Tensor(rho0));
    lb.particles(dom, pos);
    std::vector<Tensor> cvals;
    std::vector<double> cd;
    for (int i = 0; i < n; ++i) {
        double c = u(rng);
        cvals.push_back(Tensor(c));
        cd.push_back(c);
    }
    lb.field("c", cvals);
    const auto& wrapped2 = lb.cs->workspace.find_field("r")->values;
    for (int i = 0; i < n; i += 3)
        CHECK(close(lb.eval("sph_L0(c,mass,rho0,Wp52220,2*h)", i),
                    ref_sph_laplacian(dom, wrapped2, cd, mass, rho0, k, radius, i), 1e-12));
}

TEST_CASE("oracle equivalence for dem_l on a random packing") {
    std::mt19937 rng(81);
    double R = 0.004, E = 2.06e6, nu = 0.33, m = 2.1e-3, cf = 0.3;
    Domain dom = box(3, {3, 3, 3}, {0.012, 0.012, 0.012}, {S, S, S});
    const int n = 50;
    auto pos = random_positions(rng, dom, n);
    CaseBuilder b;
    b.constant("R", Tensor(R)).constant("E", Tensor(E)).constant("nu", Tensor(nu));
    b.constant("m", Tensor(m)).constant("cf", Tensor(cf));
    b.particles(dom, pos);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<Tensor> vel;
    for (int i = 0; i < n; ++i) vel.push_back(vec3(u(rng), u(rng), u(rng)));
    b.field("v", vel);
    const auto& wrapped = b.cs->workspace.find_field("r")->values;
    int contacts = 0;
    for (int i = 0; i < n; ++i) {
        Tensor got = b.eval("dem_l(v,R,E,nu,m,cf,2*R)", i);
        Tensor want = ref_dem(dom, wrapped, vel, R, E, nu, m, cf, 2 * R, i, false, false);
        if (want.mat().norm() > 0) ++contacts;
        CHECK(close(got, want, 1e-12));
        Tensor gotb = b.eval("dem_boundary_force(v,R,E,nu,m,cf,2*R)", i);
        Tensor wantb = ref_dem(dom, wrapped, vel, R, E, nu, m, cf, 2 * R, i, true, true);
        CHECK(close(gotb, wantb, 1e-12));
    }
    CHECK(contacts > 0);  // the packing is dense enough to exercise contacts
}

TEST_CASE("zeroth order and translation invariance on a periodic box") {
    std::mt19937 rng(91);
    double h = 0.3, mass = 2.5, rho0 = 800.0;
    Domain dom = box(2, {3, 3, 1}, {2 * h, 2 * h, 1}, {P, P, C});
    const int n = 60;
    auto pos = random_positions(rng, dom, n);

    auto build = [&](const std::vector<Tensor>& at) {
        CaseBuilder b;
        b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
        b.particles(dom, at);
        b.field_uniform("rho", Tensor(rho0));
        b.field_uniform("cs", Tensor(3.25));
        b.field_uniform("vs", vec2(0.7, -0.2));
        return b;
    };
    CaseBuilder b = build(pos);
    for (int i = 0; i < n; i += 7) {
        CHECK(b.eval("sph_D00(vs,mass,rho,Wp52220,2*h)", i).value() == 0.0);
        CHECK(b.eval("sph_L0(cs,mass,rho,Wp52220,2*h)", i).value() == 0.0);
        CHECK(b.eval("sph_A(vs,mass,rho,Wp52220,2*h)", i).mat().norm() == 0.0);
    }

    // momentum: uniform rho and mass make sph_G11 forces cancel pairwise
    std::vector<Tensor> pvals;
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < n; ++i) pvals.push_back(Tensor(u(rng)));
    b.field("p", pvals);
    Tensor total = Tensor::zeros(2, 1);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        Tensor g = b.eval("sph_G11(p,mass,rho,Wp52220,2*h)", i);
        total = total + g * Tensor(mass);
        scale += g.mat().norm() * mass;
    }
    CHECK(total.mat().norm() <= 1e-10 * std::max(1.0, scale) * n);

    // rigid translation by whole extents
    std::vector<Tensor> moved = pos;
    for (auto& p : moved) {
        p(0) += 2.0 * dom.extent(0);
        p(1) -= 1.0 * dom.extent(1);
    }
    CaseBuilder b2 = build(moved);
    b2.field("p", pvals);
    for (int i = 0; i < n; i += 5) {
        Tensor g1 = b.eval("sph_G11(p,mass,rho,Wp52220,2*h)", i);
        Tensor g2 = b2.eval("sph_G11(p,mass,rho,Wp52220,2*h)", i);
        CHECK(close(g1, g2, 1e-12));
    }
}

TEST_CASE("unused reference helpers stay exercised") {
    // ref_sph_sampling / ref_sph_divergence / ref_sph_viscosity are the
    // general-purpose forms used above in lambda form; spot check them here.
    std::mt19937 rng(99);
    double h = 0.3, mass = 2.5, rho0 = 800.0;
    Domain dom = box(2, {3, 3, 1}, {2 * h, 2 * h, 1}, {P, S, C});
    auto pos = random_positions(rng, dom, 30);
    CaseBuilder b;
    b.constant("mass", Tensor(mass)).constant("h", Tensor(h));
    b.particles(dom, pos);
    b.field_uniform("rho", Tensor(rho0));
    std::vector<Tensor> vv;
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 30; ++i) vv.push_back(vec2(u(rng), u(rng)));
    b.field("v", vv);
    const auto& wrapped = b.cs->workspace.find_field("r")->values;
    Kernel k(decode_kernel_keyword("Wp52220"), h);
    for (int i = 0; i < 30; i += 11) {
        CHECK(close(b.eval("sph_S(v,mass,rho,Wp52220,2*h)", i),
                    ref_sph_sampling(dom, wrapped, vv, mass, rho0, k, 2 * h, i), 1e-12));
        CHECK(close(b.eval("sph_D00(v,mass,rho,Wp52220,2*h)", i),
                    ref_sph_divergence(dom, wrapped, vv, mass, rho0, k, 2 * h, i), 1e-12));
        CHECK(close(b.eval("sph_A(v,mass,rho,Wp52220,2*h)", i),
                    ref_sph_viscosity(dom, wrapped, vv, mass, rho0, k, 2 * h, i), 1e-12));
    }
}

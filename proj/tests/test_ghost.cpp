#include <random>
#include <set>

#include "btorders/errors.hpp"
#include "btorders/ghost.hpp"
#include "doctest.h"

using namespace bto;

namespace {

Mat2 mat(const FieldPtr& f, const Rational& a, const Rational& b, const Rational& c,
         const Rational& d) {
    return Mat2(f->from_rational(a), f->from_rational(b), f->from_rational(c),
                f->from_rational(d));
}

Vertex random_vertex(const FieldPtr& f, std::mt19937& rng, long steps) {
    Vertex v = standard_vertex(f);
    for (long i = 0; i < steps; ++i) {
        auto nb = neighbors(v);
        v = nb[rng() % nb.size()];
    }
    return v;
}

ExtensionContext unram2() {
    auto k = Field::make_base(2);
    return make_extension_context(k, Field::make_quadratic(k, Rational(1), Rational(-1)));
}

} // namespace

TEST_CASE("extension distance scaling") {
    auto k2 = Field::make_base(2);
    ExtensionContext un = unram2();
    ExtensionContext ram = make_extension_context(
        k2, Field::make_quadratic(k2, Rational(-2), Rational(0)));

    Vertex v = standard_vertex(k2);
    Vertex w = neighbors(v)[0];
    CHECK(distance(extend_vertex(un, v), extend_vertex(un, w)) == 1);
    CHECK(distance(extend_vertex(ram, v), extend_vertex(ram, w)) == 2);

    std::mt19937 rng(2024);
    for (int t = 0; t < 20; ++t) {
        Vertex a = random_vertex(k2, rng, 2);
        Vertex b = random_vertex(k2, rng, 2);
        long d = distance(a, b);
        CHECK(distance(extend_vertex(un, a), extend_vertex(un, b)) == d);
        CHECK(distance(extend_vertex(ram, a), extend_vertex(ram, b)) == 2 * d);
    }
}

TEST_CASE("extend_order of the standard maximal order") {
    ExtensionContext ctx = unram2();
    Order m2o = vertex_order(standard_vertex(ctx.base));
    CHECK(extend_order_lattice(ctx, m2o) == Lattice::standard(ctx.ext, 4));
}

TEST_CASE("galois action on vertices") {
    ExtensionContext ctx = unram2();
    auto k2 = ctx.base;
    Vertex v = standard_vertex(k2);
    Vertex vl = extend_vertex(ctx, v);
    CHECK(galois_vertex(ctx, vl) == vl);

    // Off the embedded tree: walk toward an eigenline of a matrix whose
    // eigenvalues generate the extension.
    Mat2 u = embed_matrix(ctx, mat(k2, 0, -1, 1, 1));
    auto lam = root_in_ext(ctx.ext, Rational(1), Rational(1));
    REQUIRE(lam.has_value());
    Mat2 shifted = u - Mat2::scalar(ctx.ext, *lam);
    ProjPoint z(shifted.b(), -shifted.a());
    Vertex off = vertex_on_ray(vl, z, 1);
    Vertex conj = galois_vertex(ctx, off);
    CHECK(conj != off);
    CHECK(galois_vertex(ctx, conj) == off);
    CHECK(distance(conj, off) == 2);
    CHECK(distance(conj, vl) == 1);
    CHECK(!vertex_is_k_defined(ctx, off));
    CHECK(vertex_is_k_defined(ctx, vl));

    std::mt19937 rng(7);
    for (int t = 0; t < 10; ++t) {
        Vertex a = random_vertex(ctx.ext, rng, 3);
        CHECK(galois_vertex(ctx, galois_vertex(ctx, a)) == a);
    }
}

TEST_CASE("restrict") {
    ExtensionContext ctx = unram2();
    auto k2 = ctx.base;

    CHECK(restrict_lattice(ctx, Lattice::standard(ctx.ext, 4)) ==
          Lattice::standard(k2, 4));

    for (const Order& r :
         {vertex_order(standard_vertex(k2)),
          make_bass(k2, {BassParams::Family::J1, 2, Rational(1), 0, Rational(0),
                         Rational(1)}),
          scale_order(vertex_order(standard_vertex(k2)), 1)}) {
        CHECK(restrict_lattice(ctx, extend_order_lattice(ctx, r)) == r.lattice());
    }
}

TEST_CASE("ghost intersection basics") {
    ExtensionContext ctx = unram2();
    auto k2 = ctx.base;
    Vertex v1 = standard_vertex(k2);
    Vertex v2 = neighbors(v1)[0];

    // Extended K-vertices descend to the plain intersection.
    Order g = ghost_intersection(ctx, {extend_vertex(ctx, v1), extend_vertex(ctx, v2)});
    CHECK(g == intersect_vertices({v1, v2}));

    // A single non-K vertex gives a Bass order with a one-vertex branch.
    Mat2 u = embed_matrix(ctx, mat(k2, 0, -1, 1, 1));
    auto lam = root_in_ext(ctx.ext, Rational(1), Rational(1));
    Mat2 shifted = u - Mat2::scalar(ctx.ext, *lam);
    ProjPoint z(shifted.b(), -shifted.a());
    Vertex off = vertex_on_ray(extend_vertex(ctx, v1), z, 1);
    REQUIRE(!vertex_is_k_defined(ctx, off));
    Order b = ghost_intersection(ctx, {off});
    CHECK(is_bass(b));
    BranchDescriptor br = branch(b);
    CHECK(br.width == 0);
    CHECK(br.stem_path.size() == 1);

    // Galois saturation does not change the intersection.
    Order b2 = ghost_intersection(ctx, {off, galois_vertex(ctx, off)});
    CHECK(b2 == b);
}

TEST_CASE("ghost intersection reproduces the E1 form") {
    ExtensionContext ctx = unram2();
    auto k2 = ctx.base;
    QuadraticSubalgebra q = analyze_matrix(mat(k2, 0, -1, 1, 1));
    REQUIRE(q.tag == QuadraticSubalgebra::Case::Unramified);

    Mat2 etal = embed_matrix(ctx, *q.eta);
    Mat2 shifted = etal - Mat2::scalar(ctx.ext, ctx.ext->theta());
    ProjPoint z(shifted.b(), -shifted.a());
    Vertex dl = extend_vertex(ctx, standard_vertex(k2));
    Vertex d1 = vertex_on_ray(dl, z, 1);
    Order got = ghost_intersection(ctx, {dl, d1});
    CHECK(got == make_e1_form(q, 1, standard_vertex(k2)));
}

TEST_CASE("midpoint report") {
    // Non-dyadic: d_w = 0 and the midpoint is Galois fixed.
    auto k3 = Field::make_base(3);
    ExtensionContext c3 = make_extension_context(
        k3, Field::make_quadratic(k3, Rational(-3), Rational(0)));
    QuadraticSubalgebra q3 = analyze_matrix(mat(k3, 0, 1, 3, 0));
    REQUIRE(q3.tag == QuadraticSubalgebra::Case::Ramified);
    MidpointReport r3 = midpoint_report(c3, q3);
    CHECK(r3.d_w == 0);
    CHECK(r3.nearest_stem == r3.midpoint);
    CHECK(galois_vertex(c3, r3.midpoint) == r3.midpoint);

    // Dyadic: d_w >= 1.
    auto k2 = Field::make_base(2);
    ExtensionContext c2 = make_extension_context(
        k2, Field::make_quadratic(k2, Rational(-2), Rational(0)));
    QuadraticSubalgebra q2 = analyze_matrix(mat(k2, 0, 1, 2, 0));
    REQUIRE(q2.tag == QuadraticSubalgebra::Case::Ramified);
    MidpointReport r2 = midpoint_report(c2, q2);
    CHECK(r2.d_w >= 1);
    CHECK(galois_vertex(c2, r2.midpoint) == r2.midpoint);

    // Mismatched extension is rejected: sqrt(-6) field vs t^2 - 3 algebra.
    ExtensionContext cbad = make_extension_context(
        k3, Field::make_quadratic(k3, Rational(-6), Rational(0)));
    CHECK_THROWS_WITH_AS(midpoint_report(cbad, q3),
                         doctest::Contains("ExtensionMismatch"), Error);
}

TEST_CASE("bass ghost presentations") {
    auto k2 = Field::make_base(2);

    // Eichler: K-level presentation with two vertices at the right distance.
    Order e2 = make_bass(k2, {BassParams::Family::J1, 2, Rational(1), 0,
                              Rational(0), Rational(1)});
    GhostPresentation pe = bass_ghost_presentation(e2, classify_bass(e2));
    CHECK(pe.verified);
    CHECK(pe.ctx.trivial());
    REQUIRE(pe.vertices.size() == 2);
    CHECK(distance(pe.vertices[0], pe.vertices[1]) == 2);

    // E1 (J2): two vertices over the unramified extension.
    Order j2 = make_bass(k2, {BassParams::Family::J2, 1, Rational(1), 0,
                              Rational(0), Rational(1)});
    GhostPresentation p1 = bass_ghost_presentation(j2, classify_bass(j2));
    CHECK(p1.verified);
    CHECK(p1.vertices.size() == 2);
    CHECK(p1.ctx.ext->e() == 1);

    // E2 (J3): three vertices over the ramified extension, dyadic path.
    Order j3 = make_bass(k2, {BassParams::Family::J3, 1, Rational(1), 1,
                              Rational(2), Rational(1)});
    GhostPresentation p2 = bass_ghost_presentation(j3, classify_bass(j3));
    CHECK(p2.verified);
    CHECK(p2.vertices.size() == 3);
    CHECK(p2.ctx.ext->e() == 2);

    // Same pipeline at an odd prime.
    auto k3 = Field::make_base(3);
    Order j3o = make_bass(k3, {BassParams::Family::J3, 1, Rational(1), 1,
                               Rational(3), Rational(1)});
    GhostPresentation p3 = bass_ghost_presentation(j3o, classify_bass(j3o));
    CHECK(p3.verified);
}

TEST_CASE("scaled presentations") {
    auto k2 = Field::make_base(2);
    Order m2o = vertex_order(standard_vertex(k2));
    GhostPresentation p = bass_ghost_presentation(m2o, classify_bass(m2o));
    CHECK(ghost_presentation_of_scaled(p, 0).vertices.size() == p.vertices.size());

    GhostPresentation ps = ghost_presentation_of_scaled(p, 1);
    CHECK(ps.verified);
    CHECK(ps.claimed == scale_order(m2o, 1));

    Order j2 = make_bass(k2, {BassParams::Family::J2, 1, Rational(1), 0,
                              Rational(0), Rational(1)});
    GhostPresentation pj = bass_ghost_presentation(j2, classify_bass(j2));
    GhostPresentation pjs = ghost_presentation_of_scaled(pj, 1);
    CHECK(pjs.verified);
    CHECK(pjs.claimed == scale_order(j2, 1));
    CHECK(gorenstein_closure(pjs.claimed).r == 1);
}

TEST_CASE("theorem 1.2 pipeline") {
    auto k2 = Field::make_base(2);

    Order j3 = make_bass(k2, {BassParams::Family::J3, 1, Rational(1), 1,
                              Rational(2), Rational(1)});
    Theorem12Report rep = theorem_1_2_check(scale_order(j3, 1));
    CHECK(rep.closure_is_bass);
    CHECK(rep.r == 1);
    REQUIRE(rep.presentation.has_value());
    CHECK(rep.presentation->verified);

    // Width-1 tubular order: closure is the Eichler order of the stem.
    Vertex a = standard_vertex(k2);
    Vertex b = Vertex(Lattice::from_generators(
        k2, 2,
        {Vec{k2->one(), k2->zero()}, Vec{k2->zero(), k2->from_rational(4)}}));
    Order tub = tubular_order(a, b, 1);
    Theorem12Report rt = theorem_1_2_check(tub);
    CHECK(rt.closure_is_bass);
    CHECK(rt.r == 1);
    CHECK(is_eichler(rt.closure).eichler);
    REQUIRE(rt.presentation.has_value());
    CHECK(rt.presentation->ctx.trivial());

    // Trivial case.
    Theorem12Report rm = theorem_1_2_check(vertex_order(a));
    CHECK(rm.closure_is_bass);
    CHECK(rm.r == 0);
    CHECK(rm.presentation.has_value());
}

TEST_CASE("unramified stem meets the embedded tree once") {
    for (long p : {2L, 3L}) {
        auto k = Field::make_base(p);
        Rational eps = (p == 3) ? Rational(2) : Rational(1);
        Mat2 u = Mat2::unit(k, 1, 1) + Mat2::unit(k, 1, 2) -
                 Mat2::unit(k, 2, 1) * k->from_rational(eps);
        QuadraticSubalgebra q = analyze_matrix(u);
        REQUIRE(q.tag == QuadraticSubalgebra::Case::Unramified);
        FieldPtr l = Field::make_quadratic(k, q.m0, q.m1);
        ExtensionContext ctx = make_extension_context(k, l);

        Mat2 etal = embed_matrix(ctx, *q.eta);
        Mat2 sh1 = etal - Mat2::scalar(l, l->theta());
        Mat2 sh2 = etal - Mat2::scalar(l, l->theta().galois_conj());
        ProjPoint z1 = (!sh1.a().is_zero() || !sh1.b().is_zero())
                           ? ProjPoint(sh1.b(), -sh1.a())
                           : ProjPoint(sh1.d(), -sh1.c());
        ProjPoint z2 = (!sh2.a().is_zero() || !sh2.b().is_zero())
                           ? ProjPoint(sh2.b(), -sh2.a())
                           : ProjPoint(sh2.d(), -sh2.c());

        // The branch over K is a single vertex D; its extension lies on
        // the L-stem, and no other stem vertex within a window is
        // K-defined.
        BranchDescriptor bk = branch_matrix(u);
        REQUIRE(bk.stem_path.size() == 1);
        Vertex dl = extend_vertex(ctx, bk.stem_path[0]);
        CHECK(project_to_line(z1, z2, dl).dist == 0);
        long count = 0;
        for (long m = -3; m <= 3; ++m) {
            Vertex on = vertex_on_ray(dl, m >= 0 ? z1 : z2, std::abs(m));
            if (project_to_line(z1, z2, on).dist == 0 && vertex_is_k_defined(ctx, on))
                ++count;
        }
        CHECK(count == 1);
    }
}

TEST_CASE("presentation verification rejects a perturbed vertex") {
    auto k2 = Field::make_base(2);
    Order j2 = make_bass(k2, {BassParams::Family::J2, 1, Rational(1), 0,
                              Rational(0), Rational(1)});
    GhostPresentation p = bass_ghost_presentation(j2, classify_bass(j2));
    GhostPresentation bad = p;
    bad.vertices[1] = neighbors(bad.vertices[1])[0];
    CHECK(!verify_presentation(bad));
}

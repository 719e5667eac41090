#include "btorders/ghost.hpp"

#include <algorithm>
#include <map>

#include "btorders/errors.hpp"

namespace bto {

namespace {

void check_ext_vertex(const ExtensionContext& ctx, const Vertex& v) {
    check(v.field()->same_as(*ctx.ext), "FieldMismatch",
          "vertex not defined over the extension");
}

ProjPoint kernel_line(const Mat2& n) {
    if (!n.a().is_zero() || !n.b().is_zero()) return ProjPoint(n.b(), -n.a());
    return ProjPoint(n.d(), -n.c());
}

} // namespace

ExtensionContext make_extension_context(const FieldPtr& base, const FieldPtr& ext) {
    check(base->kind() == Field::Kind::Base, "Internal",
          "extension contexts start from the base field");
    if (ext->kind() == Field::Kind::Base) {
        check(base->same_as(*ext), "FieldMismatch", "trivial context over a different p");
        return {base, ext, 1};
    }
    check(ext->p() == base->p(), "FieldMismatch", "extension over a different p");
    return {base, ext, ext->e()};
}

ExtensionContext trivial_context(const FieldPtr& base) {
    return make_extension_context(base, base);
}

Scalar embed_scalar(const ExtensionContext& ctx, const Scalar& x) {
    check(x.field()->same_as(*ctx.base), "FieldMismatch", "scalar not over the base");
    check(x.b() == 0, "Internal", "base scalar with extension coordinate");
    return ctx.ext->from_rational(x.a());
}

Mat2 embed_matrix(const ExtensionContext& ctx, const Mat2& m) {
    return Mat2(embed_scalar(ctx, m.a()), embed_scalar(ctx, m.b()),
                embed_scalar(ctx, m.c()), embed_scalar(ctx, m.d()));
}

Vertex extend_vertex(const ExtensionContext& ctx, const Vertex& v) {
    check(v.field()->same_as(*ctx.base), "FieldMismatch", "vertex not over the base");
    std::vector<Vec> gens;
    for (const Vec& c : v.lattice().basis()) {
        Vec out;
        for (const Scalar& s : c) out.push_back(embed_scalar(ctx, s));
        gens.push_back(out);
    }
    return Vertex(Lattice::from_generators(ctx.ext, 2, gens));
}

Lattice extend_order_lattice(const ExtensionContext& ctx, const Order& r) {
    check(r.field()->same_as(*ctx.base), "FieldMismatch", "order not over the base");
    std::vector<Vec> gens;
    for (const Vec& c : r.lattice().basis()) {
        Vec out;
        for (const Scalar& s : c) out.push_back(embed_scalar(ctx, s));
        gens.push_back(out);
    }
    return Lattice::from_generators(ctx.ext, 4, gens);
}

Vertex galois_vertex(const ExtensionContext& ctx, const Vertex& v) {
    check_ext_vertex(ctx, v);
    check(!ctx.trivial(), "BaseFieldHasNoConjugation",
          "Galois action needs a quadratic extension");
    std::vector<Vec> gens;
    for (const Vec& c : v.lattice().basis()) {
        Vec out;
        for (const Scalar& s : c) out.push_back(s.galois_conj());
        gens.push_back(out);
    }
    return Vertex(Lattice::from_generators(ctx.ext, 2, gens));
}

namespace {

// Base-field descent of a rank-n O_L-lattice inside the K-subspace of
// vectors with vanishing theta-coordinate. Returns the K-rational parts.
std::vector<Vec> descend(const ExtensionContext& ctx, const std::vector<Vec>& l_cols,
                         long n) {
    const FieldPtr& k = ctx.base;
    const FieldPtr& l = ctx.ext;
    // O_K-generators: the O_L-basis and its eta-multiples.
    Scalar eta = l->eta();
    std::vector<Vec> gens = l_cols;
    for (const Vec& c : l_cols) {
        Vec scaled;
        for (const Scalar& s : c) scaled.push_back(s * eta);
        gens.push_back(scaled);
    }
    // Kernel of the theta-part map O_K^{2n} -> K^n.
    std::vector<Vec> bpart_cols;
    for (const Vec& g : gens) {
        Vec col;
        for (const Scalar& s : g) col.push_back(k->from_rational(s.b()));
        bpart_cols.push_back(col);
    }
    std::vector<Vec> ker = kernel_basis(k, n, bpart_cols);
    std::vector<Vec> out;
    for (const Vec& z : ker) {
        Vec lvec(static_cast<size_t>(n), l->zero());
        for (size_t j = 0; j < gens.size(); ++j)
            axpyv(lvec, l->from_rational(z[j].a()), gens[j]);
        Vec kvec;
        for (const Scalar& s : lvec) {
            check(s.b() == 0, "Internal", "descent left a theta component");
            kvec.push_back(k->from_rational(s.a()));
        }
        out.push_back(kvec);
    }
    return out;
}

} // namespace

Lattice restrict_lattice(const ExtensionContext& ctx, const Lattice& m) {
    check(m.dim() == 4, "DimensionMismatch", "restriction expects rank 4");
    if (ctx.trivial()) return m;
    check(m.field()->same_as(*ctx.ext), "FieldMismatch",
          "lattice not over the extension");
    return Lattice::from_generators(ctx.base, 4, descend(ctx, m.basis(), 4));
}

Order ghost_intersection(const ExtensionContext& ctx, const std::vector<Vertex>& vs) {
    check(!vs.empty(), "EmptyList", "ghost intersection of no vertices");
    for (const Vertex& v : vs) check_ext_vertex(ctx, v);
    Lattice acc = vertex_order(vs[0]).lattice();
    for (size_t i = 1; i < vs.size(); ++i)
        acc = acc.intersect(vertex_order(vs[i]).lattice());
    return Order::from_lattice(restrict_lattice(ctx, acc));
}

bool vertex_is_k_defined(const ExtensionContext& ctx, const Vertex& v) {
    check_ext_vertex(ctx, v);
    if (ctx.trivial()) return true;
    std::vector<Vec> kvecs = descend(ctx, v.lattice().basis(), 2);
    Lattice klat = Lattice::from_generators(ctx.base, 2, kvecs);
    return extend_vertex(ctx, Vertex(klat)) == v;
}

std::optional<Scalar> root_in_ext(const FieldPtr& ext, const Rational& s,
                                  const Rational& n) {
    check(ext->kind() == Field::Kind::Quadratic, "Internal",
          "roots are sought in a quadratic extension");
    // Ansatz x + y theta: y^2 = disc(t^2 - s t + n) / disc(g), then
    // x = (s + g1 y) / 2.
    Rational disc_m = s * s - 4 * n;
    Rational disc_g = ext->g1() * ext->g1() - 4 * ext->g0();
    auto y = exact_sqrt(disc_m / disc_g);
    if (!y) return std::nullopt;
    Rational x = (s + ext->g1() * (*y)) / 2;
    return ext->from_coords(x, *y);
}

namespace {

struct RamifiedStem {
    Vertex midpoint;
    Vertex nearest_stem;
    long d_w;
    ProjPoint z1, z2;
};

RamifiedStem ramified_stem_data(const ExtensionContext& ctx,
                                const QuadraticSubalgebra& lambda) {
    check(lambda.tag == QuadraticSubalgebra::Case::Ramified, "BadParams",
          "ramified subalgebra expected");
    check(!ctx.trivial() && ctx.ext->e() == 2, "ExtensionMismatch",
          "ramified extension expected");
    // Same field iff the discriminant classes agree.
    const Mat2& pi = *lambda.pi_lambda;
    Rational s = pi.trace().a();
    Rational n = pi.det().a();
    Rational disc_m = s * s - 4 * n;
    Rational disc_g = ctx.ext->m1() * ctx.ext->m1() - 4 * ctx.ext->m0();
    check(is_padic_square(disc_m * disc_g, ctx.base->p()), "ExtensionMismatch",
          "subalgebra generates a different ramified extension");

    BranchDescriptor edge = branch_matrix(lambda.u);
    check(edge.stem_kind == BranchDescriptor::StemKind::FinitePath &&
              edge.stem_path.size() == 2,
          "Internal", "ramified branch is not an edge");
    Vertex d1 = extend_vertex(ctx, edge.stem_path[0]);
    Vertex d2 = extend_vertex(ctx, edge.stem_path[1]);
    std::vector<Vertex> mid = geodesic(d1, d2);
    check(mid.size() == 3, "Internal", "extended edge is not at distance 2");

    auto lam = root_in_ext(ctx.ext, s, n);
    check(lam.has_value(), "UnrepresentableSplit",
          "uniformizer eigenvalues are not exactly representable over this model");
    Mat2 pil = embed_matrix(ctx, pi);
    Mat2 other = Mat2::scalar(ctx.ext, ctx.ext->from_rational(s) - *lam);
    ProjPoint z1 = kernel_line(pil - Mat2::scalar(ctx.ext, *lam));
    ProjPoint z2 = kernel_line(pil - other);
    LineProjection pr = project_to_line(z1, z2, mid[1]);
    return {mid[1], pr.nearest, pr.dist, z1, z2};
}

GhostPresentation finish_presentation(ExtensionContext ctx, std::vector<Vertex> vs,
                                      Order claimed) {
    GhostPresentation p{std::move(ctx), std::move(vs), std::move(claimed), false};
    check(verify_presentation(p), "VerificationFailed",
          "ghost presentation does not reproduce the order");
    p.verified = true;
    return p;
}

} // namespace

MidpointReport midpoint_report(const ExtensionContext& ctx,
                               const QuadraticSubalgebra& lambda) {
    RamifiedStem rs = ramified_stem_data(ctx, lambda);
    return {rs.midpoint, rs.nearest_stem, rs.d_w, rs.z1, rs.z2};
}

bool verify_presentation(const GhostPresentation& p) {
    if (p.vertices.empty()) return false;
    Order got = ghost_intersection(p.ctx, p.vertices);
    return got == p.claimed;
}

GhostPresentation bass_ghost_presentation(const Order& b,
                                          const BassClassification& cls) {
    const FieldPtr& k = b.field();
    switch (cls.tag) {
    case BassClassification::Tag::E3Eichler: {
        ExtensionContext ctx = trivial_context(k);
        std::vector<Vertex> vs = {cls.stem.front(), cls.stem.back()};
        return finish_presentation(ctx, vs, b);
    }
    case BassClassification::Tag::E1: {
        const QuadraticSubalgebra& lam = *cls.lambda;
        // Adapted unramified extension: L = K[t]/(minpoly of eta), so the
        // eigenvalue of eta over L is theta itself.
        FieldPtr l = Field::make_quadratic(k, lam.m0, lam.m1);
        check(l->e() == 1, "Internal", "adapted extension is not unramified");
        ExtensionContext ctx = make_extension_context(k, l);
        Mat2 etal = embed_matrix(ctx, *lam.eta);
        ProjPoint z = kernel_line(etal - Mat2::scalar(l, l->theta()));
        Vertex dl = extend_vertex(ctx, cls.stem.front());
        Vertex d1 = vertex_on_ray(dl, z, cls.r);
        return finish_presentation(ctx, {dl, d1}, b);
    }
    case BassClassification::Tag::E2: {
        const QuadraticSubalgebra& lam = *cls.lambda;
        const Mat2& pi = *lam.pi_lambda;
        FieldPtr l = Field::make_quadratic(k, pi.det().a(), -pi.trace().a());
        check(l->e() == 2, "Internal", "adapted extension is not ramified");
        ExtensionContext ctx = make_extension_context(k, l);
        RamifiedStem rs = ramified_stem_data(ctx, lam);
        // Third vertex: on the ray from the midpoint toward an eigenlimit,
        // at distance r from the midpoint.
        Vertex d1 = vertex_on_ray(rs.midpoint, rs.z1, cls.r);
        Vertex dl = extend_vertex(ctx, cls.stem.front());
        Vertex dlp = extend_vertex(ctx, cls.stem.back());
        return finish_presentation(ctx, {dl, dlp, d1}, b);
    }
    }
    fail("Internal", "unreachable");
}

GhostPresentation ghost_presentation_of_scaled(const GhostPresentation& p, long r) {
    check(p.verified, "Internal", "scale of an unverified presentation");
    check(r >= 0, "BadParams", "scaling exponent must be >= 0");
    if (r == 0) return p;
    bool has_k_vertex = false;
    for (const Vertex& v : p.vertices)
        if (vertex_is_k_defined(p.ctx, v)) has_k_vertex = true;
    check(has_k_vertex, "Internal", "presentation has no K-defined vertex");

    std::map<std::string, Vertex> spreadset;
    for (const Vertex& v : p.vertices)
        for (const Vertex& s : spread_out(v, p.ctx.e * r)) spreadset.emplace(s.key(), s);
    std::vector<Vertex> vs;
    for (auto& [key, v] : spreadset) vs.push_back(v);
    return finish_presentation(p.ctx, vs, scale_order(p.claimed, r));
}

Theorem12Report theorem_1_2_check(const Order& r) {
    GorensteinClosure gc = gorenstein_closure(r);
    BranchDescriptor br = branch(gc.closure);
    Theorem12Report report{gc.r, gc.closure, false, std::nullopt, 0};
    if (br.width == 0 && br.stem_kind == BranchDescriptor::StemKind::FinitePath) {
        report.closure_is_bass = true;
        BassClassification cls = classify_bass(gc.closure);
        GhostPresentation p = bass_ghost_presentation(gc.closure, cls);
        report.presentation = ghost_presentation_of_scaled(p, gc.r);
    } else {
        report.witness_width = br.width;
        check(br.width >= 1, "Internal", "non-Bass closure with width-0 branch");
    }
    return report;
}

} // namespace bto

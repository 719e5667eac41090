#pragma once

#include <optional>
#include <vector>

#include "btorders/orders.hpp"

namespace bto {

// Quadratic extension of scalars K -> L together with the induced algebra
// embedding M2(K) -> M2(L). The trivial context (L = K) serves Eichler
// presentations.
struct ExtensionContext {
    FieldPtr base;
    FieldPtr ext;
    long e = 1;

    bool trivial() const { return ext->kind() == Field::Kind::Base; }
};

ExtensionContext make_extension_context(const FieldPtr& base, const FieldPtr& ext);
ExtensionContext trivial_context(const FieldPtr& base);

Scalar embed_scalar(const ExtensionContext& ctx, const Scalar& x);
Mat2 embed_matrix(const ExtensionContext& ctx, const Mat2& m);

// Re-interpret over L and re-canonicalize; distances scale by e.
Vertex extend_vertex(const ExtensionContext& ctx, const Vertex& v);
Lattice extend_order_lattice(const ExtensionContext& ctx, const Order& r);

// Entrywise Galois conjugation on a representative basis.
Vertex galois_vertex(const ExtensionContext& ctx, const Vertex& v);

// M cap M2(K) for a full rank-4 O_L-lattice M, via the rank-8 base-field
// model.
Lattice restrict_lattice(const ExtensionContext& ctx, const Lattice& m);

// M2(K) cap the intersection of the given maximal orders over L.
Order ghost_intersection(const ExtensionContext& ctx, const std::vector<Vertex>& vs);

// Whether an L-vertex is the extension of a K-vertex.
bool vertex_is_k_defined(const ExtensionContext& ctx, const Vertex& v);

// Root of t^2 - s t + n in the quadratic field, when the discriminant
// ratio admits an exact rational square root.
std::optional<Scalar> root_in_ext(const FieldPtr& ext, const Rational& s,
                                  const Rational& n);

struct MidpointReport {
    Vertex midpoint;      // L-vertex between the extended edge endpoints
    Vertex nearest_stem;  // stem vertex of the L-branch closest to it
    long d_w = 0;         // their distance: 0 non-dyadic, > 0 dyadic
    ProjPoint z1, z2;     // visual limits of the L-stem
};

MidpointReport midpoint_report(const ExtensionContext& ctx,
                               const QuadraticSubalgebra& lambda);

struct GhostPresentation {
    ExtensionContext ctx;
    std::vector<Vertex> vertices; // maximal orders over ctx.ext
    Order claimed;
    bool verified = false;
};

// Exact lattice check: M2(K) cap the intersection equals the claimed order.
bool verify_presentation(const GhostPresentation& p);

// Constructs and verifies the presentation per classification case;
// throws VerificationFailed if the exact check does not pass.
GhostPresentation bass_ghost_presentation(const Order& b,
                                          const BassClassification& cls);

// Presentation for O1 + pi^r R from a verified presentation of R, by
// spreading each vertex out at distance e*r.
GhostPresentation ghost_presentation_of_scaled(const GhostPresentation& p, long r);

struct Theorem12Report {
    long r = 0;
    Order closure;
    bool closure_is_bass = false;
    std::optional<GhostPresentation> presentation; // set when realized
    long witness_width = 0;                        // set when not
};

Theorem12Report theorem_1_2_check(const Order& r);

} // namespace bto

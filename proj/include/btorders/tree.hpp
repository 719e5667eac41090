#pragma once

#include <optional>
#include <string>
#include <vector>

#include "btorders/lattice.hpp"

namespace bto {

// Point of P^1 over the field, canonicalized as (1 : y) with v(y) >= 0,
// (x : 1) with v(x) > 0, or (0 : 1).
class ProjPoint {
public:
    ProjPoint(const Scalar& x, const Scalar& y);

    const Scalar& x() const { return x_; }
    const Scalar& y() const { return y_; }

    bool operator==(const ProjPoint& o) const { return x_ == o.x_ && y_ == o.y_; }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }

    std::string str() const { return "(" + x_.str() + ":" + y_.str() + ")"; }

private:
    Scalar x_, y_;
};

// Homothety class of rank-2 lattices = vertex of the Bruhat-Tits tree.
// Canonical representative: HNF basis scaled so the minimum entry
// valuation is 0; equality is plain data comparison.
class Vertex {
public:
    explicit Vertex(const Lattice& lat);

    const Lattice& lattice() const { return lat_; }
    const FieldPtr& field() const { return lat_.field(); }

    bool operator==(const Vertex& o) const { return lat_ == o.lat_; }
    bool operator!=(const Vertex& o) const { return !(*this == o); }
    bool operator<(const Vertex& o) const { return key() < o.key(); }

    const std::string& key() const { return key_; }

private:
    Lattice lat_;
    std::string key_;
};

Vertex standard_vertex(const FieldPtr& field);

// The q+1 classes of index-q sublattices, one per line of the residue
// plane, sorted by canonical key.
std::vector<Vertex> neighbors(const Vertex& v);

long distance(const Vertex& v, const Vertex& w);
std::vector<Vertex> geodesic(const Vertex& v, const Vertex& w);
std::vector<Vertex> ball(const Vertex& v, long r);

// Median of the three pairwise geodesics.
Vertex median(const Vertex& u, const Vertex& v, const Vertex& w);

// Class of (Lambda cap line(z)) + pi^r Lambda: the vertex at distance r
// from v on the ray toward the visual limit z.
Vertex vertex_on_ray(const Vertex& v, const ProjPoint& z, long r);

// Nearest vertex to v on the maximal line with visual limits z1, z2,
// together with the distance.
struct LineProjection {
    Vertex nearest;
    long dist;
};
LineProjection project_to_line(const ProjPoint& z1, const ProjPoint& z2, const Vertex& v);

// Shape of a branch.
struct BranchDescriptor {
    enum class Kind { Tube, Foliage };
    enum class StemKind { FinitePath, InfiniteLine, Ray };

    Kind kind = Kind::Tube;
    StemKind stem_kind = StemKind::FinitePath;
    std::vector<Vertex> stem_path;           // FinitePath
    std::optional<ProjPoint> limit_a;        // InfiniteLine / Ray / Foliage
    std::optional<ProjPoint> limit_b;        // InfiniteLine
    std::optional<Vertex> anchor;            // Ray start / Foliage anchor
    long width = 0;

    static BranchDescriptor tube_path(std::vector<Vertex> stem, long width);
    static BranchDescriptor tube_line(ProjPoint a, ProjPoint b, long width);
    static BranchDescriptor tube_ray(Vertex start, ProjPoint a, long width);
    static BranchDescriptor foliage(Vertex anchor, ProjPoint limit);

    bool member(const Vertex& v) const;
    std::string describe() const;
};

// Membership in the ball union along the ray from the anchor toward the
// limit: true iff the nearest ray vertex v_i has distance(v, v_i) <= i.
bool foliage_member(const Vertex& anchor, const ProjPoint& limit, const Vertex& v);

// Stem/width recovery for a finite connected vertex set; errors EmptySet,
// Disconnected, NotATube.
BranchDescriptor shape_of(const std::vector<Vertex>& vertices);

// Deterministic DOT rendering; vertices labeled by canonical basis, edges
// from adjacency, `marked` keys drawn with a distinct style.
std::string to_dot(const std::vector<Vertex>& vertices,
                   const std::vector<std::string>& marked);

} // namespace bto

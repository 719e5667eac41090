#include "btorders/tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "btorders/errors.hpp"

namespace bto {

ProjPoint::ProjPoint(const Scalar& x, const Scalar& y) : x_(x), y_(y) {
    check(same_field(x, y), "FieldMismatch", "projective point across fields");
    check(!x.is_zero() || !y.is_zero(), "Internal", "projective point (0:0)");
    const FieldPtr& field = x.field();
    if (x_.is_zero()) {
        x_ = field->zero();
        y_ = field->one();
        return;
    }
    if (x_.valuation() <= y_.valuation()) {
        y_ = y_ / x_;
        x_ = field->one();
    } else {
        x_ = x_ / y_;
        y_ = field->one();
    }
}

Vertex::Vertex(const Lattice& lat) : lat_(lat) {
    check(lat.dim() == 2, "DimensionMismatch", "vertices are rank-2 classes");
    long m = lat_.min_entry_valuation();
    if (m != 0) lat_ = lat_.scale(-m);
    key_ = lat_.str();
}

Vertex standard_vertex(const FieldPtr& field) {
    return Vertex(Lattice::standard(field, 2));
}

std::vector<Vertex> neighbors(const Vertex& v) {
    const FieldPtr& field = v.field();
    const Lattice& lat = v.lattice();
    Scalar pi = field->pi_pow(1);
    std::vector<Vertex> out;
    auto push_line = [&](const Scalar& dx, const Scalar& dy) {
        Vec u(2, field->zero());
        axpyv(u, dx, lat.col(0));
        axpyv(u, dy, lat.col(1));
        Vec p0 = lat.col(0), p1 = lat.col(1);
        for (Scalar& s : p0) s = s * pi;
        for (Scalar& s : p1) s = s * pi;
        out.emplace_back(Lattice::from_generators(field, 2, {u, p0, p1}));
    };
    for (const ResidueElement& t : field->residue_classes())
        push_line(field->one(), field->residue_lift(t));
    push_line(field->zero(), field->one());
    std::sort(out.begin(), out.end());
    return out;
}

long distance(const Vertex& v, const Vertex& w) {
    check(v.field()->same_as(*w.field()), "FieldMismatch", "distance across fields");
    // Transition matrix T = B_v^{-1} B_w; with elementary divisors pi^a,
    // pi^b the distance is a - b = v(det T) - 2 min-entry-valuation.
    Vec c0 = v.lattice().solve(w.lattice().col(0));
    Vec c1 = v.lattice().solve(w.lattice().col(1));
    Scalar det = c0[0] * c1[1] - c0[1] * c1[0];
    long minv = kValInf;
    for (const Scalar& s : {c0[0], c0[1], c1[0], c1[1]})
        if (!s.is_zero()) minv = std::min(minv, s.valuation());
    return det.valuation() - 2 * minv;
}

std::vector<Vertex> geodesic(const Vertex& v, const Vertex& w) {
    std::vector<Vertex> path = {v};
    Vertex cur = v;
    long d = distance(v, w);
    while (d > 0) {
        bool stepped = false;
        for (const Vertex& nb : neighbors(cur)) {
            if (distance(nb, w) == d - 1) {
                path.push_back(nb);
                cur = nb;
                --d;
                stepped = true;
                break;
            }
        }
        check(stepped, "Internal", "geodesic step failed");
    }
    return path;
}

std::vector<Vertex> ball(const Vertex& v, long r) {
    check(r >= 0, "Internal", "ball of negative radius");
    std::map<std::string, Vertex> seen;
    seen.emplace(v.key(), v);
    std::vector<Vertex> frontier = {v};
    for (long step = 0; step < r; ++step) {
        std::vector<Vertex> next;
        for (const Vertex& u : frontier) {
            for (const Vertex& nb : neighbors(u)) {
                if (seen.emplace(nb.key(), nb).second) next.push_back(nb);
            }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
    }
    std::vector<Vertex> out;
    out.reserve(seen.size());
    for (auto& [k, vert] : seen) out.push_back(vert);
    return out;
}

Vertex median(const Vertex& u, const Vertex& v, const Vertex& w) {
    // The median is the unique vertex on all three geodesics.
    std::set<std::string> on_uv;
    for (const Vertex& x : geodesic(u, v)) on_uv.insert(x.key());
    for (const Vertex& x : geodesic(u, w)) {
        if (on_uv.count(x.key()) && distance(x, v) + distance(x, w) == distance(v, w))
            return x;
    }
    fail("Internal", "median not found");
}

Vertex vertex_on_ray(const Vertex& v, const ProjPoint& z, long r) {
    check(r >= 0, "Internal", "negative ray distance");
    const FieldPtr& field = v.field();
    const Lattice& lat = v.lattice();
    // Primitive generator of Lambda cap line(z).
    Vec zc = lat.solve({z.x(), z.y()});
    long m = std::min(zc[0].valuation(), zc[1].valuation());
    Scalar shift = field->pi_pow(-m);
    Vec u(2, field->zero());
    axpyv(u, zc[0] * shift, lat.col(0));
    axpyv(u, zc[1] * shift, lat.col(1));
    Vec p0 = lat.col(0), p1 = lat.col(1);
    Scalar pr = field->pi_pow(r);
    for (Scalar& s : p0) s = s * pr;
    for (Scalar& s : p1) s = s * pr;
    return Vertex(Lattice::from_generators(field, 2, {u, p0, p1}));
}

LineProjection project_to_line(const ProjPoint& z1, const ProjPoint& z2, const Vertex& v) {
    check(z1 != z2, "Internal", "line needs two distinct limits");
    const FieldPtr& field = v.field();
    // Vertices on the line: classes of span{u1, pi^m u2} for primitive
    // ambient lifts u1, u2 of the limits.
    Vec u1 = {z1.x(), z1.y()};
    Vec u2 = {z2.x(), z2.y()};
    auto line_vertex = [&](long m) {
        Vec su2 = u2;
        Scalar s = field->pi_pow(m);
        for (Scalar& x : su2) x = x * s;
        return Vertex(Lattice::from_generators(field, 2, {u1, su2}));
    };
    long m = 0;
    Vertex cur = line_vertex(0);
    long d = distance(cur, v);
    // d(m) is strictly unimodal with a unique minimizer.
    while (true) {
        Vertex up = line_vertex(m + 1);
        long du = distance(up, v);
        if (du < d) {
            m += 1;
            cur = up;
            d = du;
            continue;
        }
        Vertex dn = line_vertex(m - 1);
        long dd = distance(dn, v);
        if (dd < d) {
            m -= 1;
            cur = dn;
            d = dd;
            continue;
        }
        break;
    }
    return {cur, d};
}

bool foliage_member(const Vertex& anchor, const ProjPoint& limit, const Vertex& v) {
    // Project v onto the ray v_0, v_1, ... toward the limit.
    long i = 0;
    Vertex cur = anchor;
    long d = distance(cur, v);
    while (true) {
        Vertex nxt = vertex_on_ray(anchor, limit, i + 1);
        long dn = distance(nxt, v);
        if (dn >= d) break;
        i += 1;
        cur = nxt;
        d = dn;
    }
    return d <= i;
}

BranchDescriptor BranchDescriptor::tube_path(std::vector<Vertex> stem, long width) {
    BranchDescriptor b;
    b.kind = Kind::Tube;
    b.stem_kind = StemKind::FinitePath;
    b.stem_path = std::move(stem);
    b.width = width;
    return b;
}

BranchDescriptor BranchDescriptor::tube_line(ProjPoint a, ProjPoint z, long width) {
    BranchDescriptor b;
    b.kind = Kind::Tube;
    b.stem_kind = StemKind::InfiniteLine;
    b.limit_a = a;
    b.limit_b = z;
    b.width = width;
    return b;
}

BranchDescriptor BranchDescriptor::tube_ray(Vertex start, ProjPoint a, long width) {
    BranchDescriptor b;
    b.kind = Kind::Tube;
    b.stem_kind = StemKind::Ray;
    b.anchor = std::move(start);
    b.limit_a = a;
    b.width = width;
    return b;
}

BranchDescriptor BranchDescriptor::foliage(Vertex anchor, ProjPoint limit) {
    BranchDescriptor b;
    b.kind = Kind::Foliage;
    b.anchor = std::move(anchor);
    b.limit_a = limit;
    return b;
}

bool BranchDescriptor::member(const Vertex& v) const {
    if (kind == Kind::Foliage) return foliage_member(*anchor, *limit_a, v);
    switch (stem_kind) {
    case StemKind::FinitePath: {
        long best = kValInf;
        for (const Vertex& s : stem_path) best = std::min(best, distance(s, v));
        return best <= width;
    }
    case StemKind::InfiniteLine:
        return project_to_line(*limit_a, *limit_b, v).dist <= width;
    case StemKind::Ray: {
        // Walk the ray from the start while the distance decreases.
        long i = 0;
        long d = distance(*anchor, v);
        while (true) {
            Vertex nxt = vertex_on_ray(*anchor, *limit_a, i + 1);
            long dn = distance(nxt, v);
            if (dn >= d) break;
            ++i;
            d = dn;
        }
        return d <= width;
    }
    }
    return false;
}

std::string BranchDescriptor::describe() const {
    std::ostringstream os;
    if (kind == Kind::Foliage) {
        os << "foliage toward " << limit_a->str() << " anchored at " << anchor->key();
        return os.str();
    }
    os << "tube width " << width << ", stem ";
    switch (stem_kind) {
    case StemKind::FinitePath:
        os << "path of length " << (stem_path.size() - 1);
        break;
    case StemKind::InfiniteLine:
        os << "line " << limit_a->str() << " .. " << limit_b->str();
        break;
    case StemKind::Ray:
        os << "ray toward " << limit_a->str();
        break;
    }
    return os.str();
}

namespace {

// Induced adjacency of a finite vertex set.
std::vector<std::vector<size_t>> adjacency(const std::vector<Vertex>& vs) {
    std::vector<std::vector<size_t>> adj(vs.size());
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (distance(vs[i], vs[j]) == 1) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    return adj;
}

bool is_connected(const std::vector<Vertex>& vs,
                  const std::vector<std::vector<size_t>>& adj) {
    if (vs.empty()) return false;
    std::vector<bool> seen(vs.size(), false);
    std::vector<size_t> stack = {0};
    seen[0] = true;
    size_t count = 1;
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        for (size_t j : adj[i])
            if (!seen[j]) {
                seen[j] = true;
                ++count;
                stack.push_back(j);
            }
    }
    return count == vs.size();
}

// A connected subset of a tree is a line iff every degree is at most 2.
bool is_line(const std::vector<Vertex>& vs) {
    if (vs.size() <= 2) return true;
    auto adj = adjacency(vs);
    for (const auto& nb : adj)
        if (nb.size() > 2) return false;
    return true;
}

std::vector<Vertex> order_path(std::vector<Vertex> vs) {
    if (vs.size() <= 1) return vs;
    auto adj = adjacency(vs);
    size_t start = 0;
    for (size_t i = 0; i < vs.size(); ++i)
        if (adj[i].size() == 1) {
            start = i;
            break;
        }
    std::vector<Vertex> out;
    std::vector<bool> used(vs.size(), false);
    size_t cur = start;
    for (size_t step = 0; step < vs.size(); ++step) {
        out.push_back(vs[cur]);
        used[cur] = true;
        bool advanced = false;
        for (size_t j : adj[cur])
            if (!used[j]) {
                cur = j;
                advanced = true;
                break;
            }
        if (!advanced) break;
    }
    check(out.size() == vs.size(), "Internal", "path ordering failed");
    return out;
}

std::vector<Vertex> peel_leaves(const std::vector<Vertex>& vs) {
    if (vs.size() <= 1) return {};
    auto adj = adjacency(vs);
    std::vector<Vertex> out;
    for (size_t i = 0; i < vs.size(); ++i)
        if (adj[i].size() >= 2) out.push_back(vs[i]);
    return out;
}

std::vector<Vertex> tube_enumerate(const std::vector<Vertex>& stem, long width) {
    std::map<std::string, Vertex> seen;
    for (const Vertex& s : stem)
        for (const Vertex& v : ball(s, width)) seen.emplace(v.key(), v);
    std::vector<Vertex> out;
    for (auto& [k, v] : seen) out.push_back(v);
    return out;
}

} // namespace

BranchDescriptor shape_of(const std::vector<Vertex>& vertices) {
    check(!vertices.empty(), "EmptySet", "shape of an empty set");
    // Dedup, sorted by canonical key.
    std::map<std::string, Vertex> uniq;
    for (const Vertex& v : vertices) uniq.emplace(v.key(), v);
    std::vector<Vertex> vs;
    for (auto& [k, v] : uniq) vs.push_back(v);

    check(is_connected(vs, adjacency(vs)), "Disconnected",
          "shape of a disconnected set");

    std::vector<std::vector<Vertex>> layers = {vs};
    while (!layers.back().empty()) layers.push_back(peel_leaves(layers.back()));

    std::set<std::string> keys;
    for (const Vertex& v : vs) keys.insert(v.key());
    for (size_t r = 0; r + 1 < layers.size(); ++r) {
        const std::vector<Vertex>& stem = layers[r];
        if (stem.empty() || !is_line(stem)) continue;
        std::vector<Vertex> tube = tube_enumerate(stem, static_cast<long>(r));
        if (tube.size() != vs.size()) continue;
        bool same = true;
        for (const Vertex& v : tube)
            if (!keys.count(v.key())) {
                same = false;
                break;
            }
        if (same) return BranchDescriptor::tube_path(order_path(stem), static_cast<long>(r));
    }
    fail("NotATube", "set is not a tubular neighborhood of a line");
}

std::string to_dot(const std::vector<Vertex>& vertices,
                   const std::vector<std::string>& marked) {
    std::map<std::string, Vertex> uniq;
    for (const Vertex& v : vertices) uniq.emplace(v.key(), v);
    std::set<std::string> mark(marked.begin(), marked.end());
    std::vector<Vertex> vs;
    for (auto& [k, v] : uniq) vs.push_back(v);
    std::ostringstream os;
    os << "graph branch {\n";
    std::map<std::string, size_t> ids;
    for (size_t i = 0; i < vs.size(); ++i) {
        ids[vs[i].key()] = i;
        os << "  n" << i << " [label=\"" << vs[i].key() << "\"";
        if (mark.count(vs[i].key())) os << " shape=box style=bold";
        os << "];\n";
    }
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (distance(vs[i], vs[j]) == 1)
                os << "  n" << i << " -- n" << j << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace bto

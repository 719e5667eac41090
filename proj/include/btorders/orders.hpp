#pragma once

#include <optional>
#include <vector>

#include "btorders/matrix.hpp"
#include "btorders/tree.hpp"

namespace bto {

// Full multiplicatively closed integral lattice in the matrix algebra,
// stored by its canonical rank-4 basis in coordinates (e11, e12, e21, e22).
class Order {
public:
    // Validates: contains 1, closed under multiplication, every basis
    // element integral, full rank.
    static Order from_lattice(const Lattice& lat);

    const Lattice& lattice() const { return lat_; }
    const FieldPtr& field() const { return lat_.field(); }
    std::vector<Mat2> basis_mats() const;

    bool contains(const Mat2& m) const { return lat_.member(m.to_vec4()); }
    bool contains(const Order& o) const;

    // Reduced discriminant valuation: v(det of the trace Gram) / 2.
    long disc_valuation() const;

    bool operator==(const Order& o) const { return lat_ == o.lat_; }
    bool operator!=(const Order& o) const { return !(*this == o); }

private:
    explicit Order(Lattice lat) : lat_(std::move(lat)) {}
    Lattice lat_;
    mutable std::optional<long> disc_cache_;
};

// Rank-2 subalgebra data attached to a non-central integral matrix u:
// O_K[u] = O 1 + pi^r O_Lambda where O_Lambda = O 1 + O eta is the maximal
// order of K[u].
struct QuadraticSubalgebra {
    enum class Case { NilpotentTranslate, Split, Unramified, Ramified };
    Case tag;
    Mat2 u;
    long conductor = 0; // r; unused for NilpotentTranslate
    std::optional<Mat2> eta;        // absent for NilpotentTranslate
    Rational m0, m1;                // minimal polynomial of eta: t^2 + m1 t + m0
    std::optional<Mat2> pi_lambda;  // Ramified
    std::optional<ProjPoint> eigen1, eigen2; // Split: both; Nilpotent: eigen1
};

struct BassParams {
    enum class Family { J1, J2, J3 };
    Family family = Family::J1;
    long n = 1;
    Rational eps = 1;           // J2: unit with t^2 - t + eps irreducible
    long pbar = 0;              // J3: in {0, 1}
    Rational alpha1 = 0, alpha2 = 1; // J3: v(alpha1) > 0, alpha2 a unit
};

struct BassClassification {
    enum class Tag { E1, E2, E3Eichler };
    Tag tag;
    long level = 0;                 // E3 (tree distance of the endpoints)
    long r = 0;                     // E1/E2 exponent
    std::optional<QuadraticSubalgebra> lambda; // E1/E2
    std::vector<Vertex> stem;
    bool low_level_overlap = false; // E3 of level <= 1 also fits E1/E2 with r=0
};

// Smallest order containing 1 and the generators; NonIntegral when a
// generator has a non-integral entry or saturation leaves every maximal
// order, NotFull when the generated ring has rank < 4.
Order order_from_generators(const FieldPtr& field, const std::vector<Mat2>& gens);

Order vertex_order(const Vertex& v);
bool vertex_contains(const Vertex& v, const Mat2& m);
bool vertex_contains(const Vertex& v, const Order& h);

QuadraticSubalgebra analyze_matrix(const Mat2& u);

BranchDescriptor branch_matrix(const Mat2& u);

// Exhaustive scan oracle: vertices of ball(center, radius) containing h.
std::vector<Vertex> branch_oracle(const Order& h, const Vertex& center, long radius);
std::vector<Vertex> branch_oracle(const Mat2& u, const Vertex& center, long radius);

// Structured branch of a full order: BFS over the containing maximal
// orders, then stem/width recovery.
BranchDescriptor branch(const Order& r);
std::vector<Vertex> branch_vertices(const Order& r);

// O 1 + pi^r R.
Order scale_order(const Order& r, long k);

struct GorensteinClosure {
    long r;
    Order closure;
};
GorensteinClosure gorenstein_closure(const Order& r);

bool is_gorenstein(const Order& r);
bool is_bass(const Order& r);
struct EichlerResult {
    bool eichler;
    long level;
};
EichlerResult is_eichler(const Order& r);

BassClassification classify_bass(const Order& b);

Order make_bass(const FieldPtr& field, const BassParams& params);

// Abstract presentations O_Lambda + pi^r D and O_Lambda + pi_Lambda^r E.
Order make_e1_form(const QuadraticSubalgebra& lambda, long r, const Vertex& d);
Order make_e2_form(const QuadraticSubalgebra& lambda, long r, const Order& e);

Order intersect_vertices(const std::vector<Vertex>& vs);

// Three vertices at distance r from v in pairwise distinct directions.
std::vector<Vertex> spread_out(const Vertex& v, long r);

// E^[r] for E the Eichler order of the two endpoints.
Order tubular_order(const Vertex& a, const Vertex& b, long r);

} // namespace bto

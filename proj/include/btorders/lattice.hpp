#pragma once

#include <string>
#include <vector>

#include "btorders/field.hpp"

namespace bto {

using Vec = std::vector<Scalar>;

// target += coeff * src, entrywise.
void axpyv(Vec& target, const Scalar& coeff, const Vec& src);

// Canonical column echelon form of an arbitrary generating set over the
// valuation ring: pivot rows strictly increasing, pivot entries pi^a, the
// pivot-row entries of later columns reduced to canonical digit
// representatives modulo the pivot. Unique for the module it spans.
struct EchelonForm {
    std::vector<Vec> cols;
    std::vector<long> pivot_rows;
};
EchelonForm canonical_echelon(const FieldPtr& field, long n, std::vector<Vec> gens);

// Saturated kernel of the module map O^k -> F^n given by the columns of A:
// columns of a unimodular transform spanning { z in O^k : A z = 0 }.
std::vector<Vec> kernel_basis(const FieldPtr& field, long n, const std::vector<Vec>& a_cols);

// Full O-lattice in F^n, stored by its canonical upper-triangular basis.
// Two lattices are equal iff their bases are identical entry lists.
class Lattice {
public:
    // hnf of a generating set; NotFullRank if the span is proper.
    static Lattice from_generators(const FieldPtr& field, long n,
                                   const std::vector<Vec>& gens);
    static Lattice standard(const FieldPtr& field, long n);

    long dim() const { return n_; }
    const FieldPtr& field() const { return field_; }
    const std::vector<Vec>& basis() const { return cols_; }
    const Vec& col(long j) const { return cols_[static_cast<size_t>(j)]; }

    bool member(const Vec& x) const;
    // B^{-1} x by triangular back-substitution.
    Vec solve(const Vec& x) const;

    Lattice intersect(const Lattice& o) const;
    Lattice sum(const Lattice& o) const;
    Lattice scale(long k) const; // pi^k L

    // v(det(B1^{-1} B2)) for o contained in *this; NotContained otherwise.
    long index_valuation(const Lattice& sub) const;

    long det_valuation() const;
    long min_entry_valuation() const;

    bool operator==(const Lattice& o) const;
    bool operator!=(const Lattice& o) const { return !(*this == o); }

    std::string str() const;

private:
    Lattice(FieldPtr field, long n, std::vector<Vec> cols)
        : field_(std::move(field)), n_(n), cols_(std::move(cols)) {}

    FieldPtr field_;
    long n_ = 0;
    std::vector<Vec> cols_;
};

// Codifferent-style dual of a rank-4 lattice in the matrix algebra:
// { x : tr(x L) integral }, via the trace-pairing Gram matrix.
Lattice trace_dual(const Lattice& l);

} // namespace bto

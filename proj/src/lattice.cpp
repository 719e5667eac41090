#include "btorders/lattice.hpp"

#include <algorithm>

#include "btorders/errors.hpp"
#include "btorders/matrix.hpp"

namespace bto {

void axpyv(Vec& target, const Scalar& coeff, const Vec& src) {
    for (size_t i = 0; i < target.size(); ++i) target[i] = target[i] + coeff * src[i];
}

namespace {

void check_vec(const FieldPtr& field, long n, const Vec& v) {
    check(static_cast<long>(v.size()) == n, "DimensionMismatch",
          "vector of wrong dimension");
    for (const Scalar& s : v)
        check(s.field() != nullptr && field->same_as(*s.field()), "FieldMismatch",
              "vector entry from a different field");
}

bool is_zero_col(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

// Bottom-up elimination shared by the echelon and kernel routines. Returns
// the pivot column index per row (-1 when the row has no pivot). When
// `transform` is non-null the same column operations are mirrored onto it.
std::vector<long> eliminate(const FieldPtr& field, long n, std::vector<Vec>& cols,
                            std::vector<Vec>* transform) {
    std::vector<bool> assigned(cols.size(), false);
    std::vector<long> pivot_of_row(static_cast<size_t>(n), -1);
    for (long row = n - 1; row >= 0; --row) {
        // Pivot: unassigned column with the smallest valuation at this row,
        // earliest column on ties (keeps the routine deterministic).
        long piv = -1;
        long best = kValInf;
        for (size_t j = 0; j < cols.size(); ++j) {
            if (assigned[j]) continue;
            long v = cols[j][static_cast<size_t>(row)].valuation();
            if (v < best) {
                best = v;
                piv = static_cast<long>(j);
            }
        }
        if (piv < 0 || is_inf(best)) continue;
        assigned[static_cast<size_t>(piv)] = true;
        pivot_of_row[static_cast<size_t>(row)] = piv;
        const Scalar pivot_entry = cols[static_cast<size_t>(piv)][static_cast<size_t>(row)];
        for (size_t j = 0; j < cols.size(); ++j) {
            if (assigned[j] || is_zero_col(cols[j])) continue;
            const Scalar& e = cols[j][static_cast<size_t>(row)];
            if (e.is_zero()) continue;
            Scalar q = -(e / pivot_entry); // valuation >= 0 by pivot choice
            axpyv(cols[j], q, cols[static_cast<size_t>(piv)]);
            if (transform) axpyv((*transform)[j], q, (*transform)[static_cast<size_t>(piv)]);
        }
    }
    (void)field;
    return pivot_of_row;
}

std::vector<Vec> invert_square(const FieldPtr& field, const std::vector<Vec>& cols) {
    long n = static_cast<long>(cols.size());
    // Gauss-Jordan on [A | I], columns as vectors of length n.
    std::vector<Vec> a = cols;
    std::vector<Vec> inv;
    for (long j = 0; j < n; ++j) {
        Vec e(static_cast<size_t>(n), field->zero());
        e[static_cast<size_t>(j)] = field->one();
        inv.push_back(e);
    }
    // Row-reduce A (treating cols as a matrix A with A[i][j] = a[j][i]).
    for (long i = 0; i < n; ++i) {
        long piv = -1;
        for (long j = i; j < n; ++j) {
            if (!a[static_cast<size_t>(j)][static_cast<size_t>(i)].is_zero()) {
                piv = j;
                break;
            }
        }
        check(piv >= 0, "Internal", "singular matrix in invert_square");
        std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(i)]);
        std::swap(inv[static_cast<size_t>(piv)], inv[static_cast<size_t>(i)]);
        Scalar d = a[static_cast<size_t>(i)][static_cast<size_t>(i)].inverse();
        for (long r = 0; r < n; ++r) {
            a[static_cast<size_t>(i)][static_cast<size_t>(r)] =
                a[static_cast<size_t>(i)][static_cast<size_t>(r)] * d;
            inv[static_cast<size_t>(i)][static_cast<size_t>(r)] =
                inv[static_cast<size_t>(i)][static_cast<size_t>(r)] * d;
        }
        for (long j = 0; j < n; ++j) {
            if (j == i) continue;
            Scalar f = a[static_cast<size_t>(j)][static_cast<size_t>(i)];
            if (f.is_zero()) continue;
            for (long r = 0; r < n; ++r) {
                a[static_cast<size_t>(j)][static_cast<size_t>(r)] =
                    a[static_cast<size_t>(j)][static_cast<size_t>(r)] -
                    f * a[static_cast<size_t>(i)][static_cast<size_t>(r)];
                inv[static_cast<size_t>(j)][static_cast<size_t>(r)] =
                    inv[static_cast<size_t>(j)][static_cast<size_t>(r)] -
                    f * inv[static_cast<size_t>(i)][static_cast<size_t>(r)];
            }
        }
    }
    // inv now holds A^{-1} with inv[j][i] = (A^{-1})[i][j].
    return inv;
}

} // namespace

EchelonForm canonical_echelon(const FieldPtr& field, long n, std::vector<Vec> gens) {
    for (const Vec& g : gens) check_vec(field, n, g);
    std::vector<long> pivot_of_row = eliminate(field, n, gens, nullptr);

    EchelonForm out;
    for (long row = 0; row < n; ++row) {
        long j = pivot_of_row[static_cast<size_t>(row)];
        if (j < 0) continue;
        out.cols.push_back(gens[static_cast<size_t>(j)]);
        out.pivot_rows.push_back(row);
    }
    // Normalize pivots to plain powers of pi.
    for (size_t j = 0; j < out.cols.size(); ++j) {
        long row = out.pivot_rows[j];
        Scalar& piv = out.cols[j][static_cast<size_t>(row)];
        long a = piv.valuation();
        Scalar u_inv = (piv * field->pi_pow(-a)).inverse();
        for (Scalar& s : out.cols[j]) s = s * u_inv;
    }
    // Reduce pivot-row entries of later columns, deepest pivot first.
    for (size_t i = out.cols.size(); i-- > 0;) {
        long row = out.pivot_rows[i];
        long a = out.cols[i][static_cast<size_t>(row)].valuation();
        for (size_t j = i + 1; j < out.cols.size(); ++j) {
            const Scalar& x = out.cols[j][static_cast<size_t>(row)];
            if (x.is_zero()) continue;
            Scalar rep = x.reduce_mod_pi_pow(a);
            Scalar q = -((x - rep) * field->pi_pow(-a));
            axpyv(out.cols[j], q, out.cols[i]);
        }
    }
    return out;
}

std::vector<Vec> kernel_basis(const FieldPtr& field, long n, const std::vector<Vec>& a_cols) {
    for (const Vec& c : a_cols) check_vec(field, n, c);
    std::vector<Vec> work = a_cols;
    size_t k = a_cols.size();
    std::vector<Vec> transform;
    for (size_t j = 0; j < k; ++j) {
        Vec e(k, field->zero());
        e[j] = field->one();
        transform.push_back(e);
    }
    eliminate(field, n, work, &transform);
    std::vector<Vec> kernel;
    for (size_t j = 0; j < k; ++j) {
        if (is_zero_col(work[j])) kernel.push_back(transform[j]);
    }
    return kernel;
}

Lattice Lattice::from_generators(const FieldPtr& field, long n,
                                 const std::vector<Vec>& gens) {
    EchelonForm ech = canonical_echelon(field, n, gens);
    check(static_cast<long>(ech.cols.size()) == n, "NotFullRank",
          "generators span a proper subspace");
    return Lattice(field, n, std::move(ech.cols));
}

Lattice Lattice::standard(const FieldPtr& field, long n) {
    std::vector<Vec> cols;
    for (long j = 0; j < n; ++j) {
        Vec e(static_cast<size_t>(n), field->zero());
        e[static_cast<size_t>(j)] = field->one();
        cols.push_back(e);
    }
    return Lattice(field, n, std::move(cols));
}

Vec Lattice::solve(const Vec& x) const {
    check_vec(field_, n_, x);
    // Upper triangular with cols_[j] pivot at row j: back-substitute from the
    // bottom row.
    Vec c(static_cast<size_t>(n_), field_->zero());
    Vec rem = x;
    for (long row = n_ - 1; row >= 0; --row) {
        const Scalar& piv = cols_[static_cast<size_t>(row)][static_cast<size_t>(row)];
        Scalar coeff = rem[static_cast<size_t>(row)] / piv;
        c[static_cast<size_t>(row)] = coeff;
        for (long r = 0; r <= row; ++r) {
            rem[static_cast<size_t>(r)] =
                rem[static_cast<size_t>(r)] -
                coeff * cols_[static_cast<size_t>(row)][static_cast<size_t>(r)];
        }
    }
    return c;
}

bool Lattice::member(const Vec& x) const {
    Vec c = solve(x);
    return std::all_of(c.begin(), c.end(),
                       [](const Scalar& s) { return s.valuation() >= 0; });
}

Lattice Lattice::intersect(const Lattice& o) const {
    check(n_ == o.n_, "DimensionMismatch", "intersect in different dimensions");
    check(field_->same_as(*o.field_), "FieldMismatch", "intersect across fields");
    // Solve B1 x = B2 y over the valuation ring: kernel of [B1 | -B2].
    std::vector<Vec> stacked = cols_;
    for (const Vec& c : o.cols_) {
        Vec neg;
        neg.reserve(c.size());
        for (const Scalar& s : c) neg.push_back(-s);
        stacked.push_back(neg);
    }
    std::vector<Vec> ker = kernel_basis(field_, n_, stacked);
    std::vector<Vec> gens;
    for (const Vec& z : ker) {
        Vec v(static_cast<size_t>(n_), field_->zero());
        for (long j = 0; j < n_; ++j) axpyv(v, z[static_cast<size_t>(j)], cols_[static_cast<size_t>(j)]);
        gens.push_back(v);
    }
    return from_generators(field_, n_, gens);
}

Lattice Lattice::sum(const Lattice& o) const {
    check(n_ == o.n_, "DimensionMismatch", "sum in different dimensions");
    check(field_->same_as(*o.field_), "FieldMismatch", "sum across fields");
    std::vector<Vec> gens = cols_;
    gens.insert(gens.end(), o.cols_.begin(), o.cols_.end());
    return from_generators(field_, n_, gens);
}

Lattice Lattice::scale(long k) const {
    Scalar s = field_->pi_pow(k);
    std::vector<Vec> gens = cols_;
    for (Vec& c : gens)
        for (Scalar& x : c) x = x * s;
    return from_generators(field_, n_, gens);
}

long Lattice::det_valuation() const {
    long v = 0;
    for (long j = 0; j < n_; ++j)
        v += cols_[static_cast<size_t>(j)][static_cast<size_t>(j)].valuation();
    return v;
}

long Lattice::min_entry_valuation() const {
    long best = kValInf;
    for (const Vec& c : cols_)
        for (const Scalar& s : c)
            if (!s.is_zero()) best = std::min(best, s.valuation());
    return best;
}

long Lattice::index_valuation(const Lattice& sub) const {
    check(n_ == sub.n_, "DimensionMismatch", "index in different dimensions");
    for (const Vec& c : sub.cols_)
        check(member(c), "NotContained", "index of a non-contained lattice");
    return sub.det_valuation() - det_valuation();
}

bool Lattice::operator==(const Lattice& o) const {
    if (n_ != o.n_ || !field_->same_as(*o.field_)) return false;
    return cols_ == o.cols_;
}

std::string Lattice::str() const {
    std::string s = "[";
    for (long row = 0; row < n_; ++row) {
        if (row) s += "; ";
        for (long j = 0; j < n_; ++j) {
            if (j) s += " ";
            s += cols_[static_cast<size_t>(j)][static_cast<size_t>(row)].str();
        }
    }
    return s + "]";
}

Lattice trace_dual(const Lattice& l) {
    check(l.dim() == 4, "DimensionMismatch", "trace dual needs a rank-4 lattice");
    const FieldPtr& field = l.field();
    std::vector<Mat2> b;
    for (long j = 0; j < 4; ++j) b.push_back(Mat2::from_vec4(field, l.col(j)));
    // Gram of the trace pairing, as columns G[j][i] = tr(b_i b_j).
    std::vector<Vec> gram;
    for (long j = 0; j < 4; ++j) {
        Vec col;
        for (long i = 0; i < 4; ++i) col.push_back((b[static_cast<size_t>(i)] * b[static_cast<size_t>(j)]).trace());
        gram.push_back(col);
    }
    std::vector<Vec> ginv = invert_square(field, gram);
    // Dual basis vector j = sum_i (G^{-1})_{ij} b_i.
    std::vector<Vec> gens;
    for (long j = 0; j < 4; ++j) {
        Vec v(4, field->zero());
        for (long i = 0; i < 4; ++i)
            axpyv(v, ginv[static_cast<size_t>(j)][static_cast<size_t>(i)],
                 b[static_cast<size_t>(i)].to_vec4());
        gens.push_back(v);
    }
    return Lattice::from_generators(field, 4, gens);
}

} // namespace bto

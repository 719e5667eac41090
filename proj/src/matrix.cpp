#include "btorders/matrix.hpp"

#include "btorders/errors.hpp"

namespace bto {

Mat2::Mat2(Scalar a, Scalar b, Scalar c, Scalar d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    check(same_field(a_, b_) && same_field(a_, c_) && same_field(a_, d_),
          "FieldMismatch", "matrix entries from different fields");
}

Mat2 Mat2::identity(const FieldPtr& field) {
    return Mat2(field->one(), field->zero(), field->zero(), field->one());
}

Mat2 Mat2::zero(const FieldPtr& field) {
    return Mat2(field->zero(), field->zero(), field->zero(), field->zero());
}

Mat2 Mat2::scalar(const FieldPtr& field, const Scalar& s) {
    return Mat2(s, field->zero(), field->zero(), s);
}

Mat2 Mat2::unit(const FieldPtr& field, int i, int j) {
    Scalar z = field->zero(), o = field->one();
    if (i == 1 && j == 1) return Mat2(o, z, z, z);
    if (i == 1 && j == 2) return Mat2(z, o, z, z);
    if (i == 2 && j == 1) return Mat2(z, z, o, z);
    return Mat2(z, z, z, o);
}

Mat2 Mat2::operator+(const Mat2& o) const {
    return Mat2(a_ + o.a_, b_ + o.b_, c_ + o.c_, d_ + o.d_);
}

Mat2 Mat2::operator-(const Mat2& o) const {
    return Mat2(a_ - o.a_, b_ - o.b_, c_ - o.c_, d_ - o.d_);
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return Mat2(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

Mat2 Mat2::operator*(const Scalar& s) const {
    return Mat2(a_ * s, b_ * s, c_ * s, d_ * s);
}

bool Mat2::operator==(const Mat2& o) const {
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

Scalar Mat2::disc() const {
    Scalar t = trace();
    Scalar four = field()->from_rational(4);
    return t * t - four * det();
}

Mat2 Mat2::inverse() const {
    Scalar dt = det();
    check(!dt.is_zero(), "Internal", "inverse of singular matrix");
    Scalar inv = dt.inverse();
    return Mat2(d_ * inv, -b_ * inv, -c_ * inv, a_ * inv);
}

Mat2 Mat2::galois_conj() const {
    return Mat2(a_.galois_conj(), b_.galois_conj(), c_.galois_conj(),
                d_.galois_conj());
}

bool Mat2::is_integral_element() const {
    return trace().valuation() >= 0 && det().valuation() >= 0;
}

bool Mat2::entries_integral() const {
    return a_.valuation() >= 0 && b_.valuation() >= 0 && c_.valuation() >= 0 &&
           d_.valuation() >= 0;
}

std::array<Scalar, 2> Mat2::apply(const std::array<Scalar, 2>& v) const {
    return {a_ * v[0] + b_ * v[1], c_ * v[0] + d_ * v[1]};
}

std::vector<Scalar> Mat2::to_vec4() const { return {a_, b_, c_, d_}; }

Mat2 Mat2::from_vec4(const FieldPtr& field, const std::vector<Scalar>& v) {
    check(v.size() == 4, "Internal", "vec4 of wrong size");
    (void)field;
    return Mat2(v[0], v[1], v[2], v[3]);
}

std::string Mat2::str() const {
    return "[" + a_.str() + " " + b_.str() + "; " + c_.str() + " " + d_.str() + "]";
}

} // namespace bto

#pragma once

#include <array>
#include <string>
#include <vector>

#include "btorders/field.hpp"

namespace bto {

// 2x2 matrix over a Field. Row-major entries a b / c d.
class Mat2 {
public:
    Mat2() = default;
    Mat2(Scalar a, Scalar b, Scalar c, Scalar d);

    static Mat2 identity(const FieldPtr& field);
    static Mat2 zero(const FieldPtr& field);
    static Mat2 scalar(const FieldPtr& field, const Scalar& s);
    // Matrix unit e_ij (1-based indices).
    static Mat2 unit(const FieldPtr& field, int i, int j);

    const Scalar& a() const { return a_; }
    const Scalar& b() const { return b_; }
    const Scalar& c() const { return c_; }
    const Scalar& d() const { return d_; }
    const FieldPtr& field() const { return a_.field(); }

    Mat2 operator+(const Mat2& o) const;
    Mat2 operator-(const Mat2& o) const;
    Mat2 operator*(const Mat2& o) const;
    Mat2 operator*(const Scalar& s) const;
    bool operator==(const Mat2& o) const;

    Scalar trace() const { return a_ + d_; }
    Scalar det() const { return a_ * d_ - b_ * c_; }
    Scalar disc() const; // trace^2 - 4 det
    Mat2 inverse() const;
    Mat2 galois_conj() const;

    // Integral as an algebra element: trace and determinant valuations >= 0.
    bool is_integral_element() const;
    bool is_central() const { return b_.is_zero() && c_.is_zero() && a_ == d_; }
    bool entries_integral() const;

    // Column action on (x, y).
    std::array<Scalar, 2> apply(const std::array<Scalar, 2>& v) const;

    // Coordinates in the basis (e11, e12, e21, e22).
    std::vector<Scalar> to_vec4() const;
    static Mat2 from_vec4(const FieldPtr& field, const std::vector<Scalar>& v);

    std::string str() const;

private:
    Scalar a_, b_, c_, d_;
};

} // namespace bto

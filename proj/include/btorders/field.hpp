#pragma once

#include <memory>
#include <string>
#include <vector>

#include "btorders/rational.hpp"

namespace bto {

class Field;
class Scalar;
using FieldPtr = std::shared_ptr<const Field>;

// Residue class modulo the maximal ideal, as a digit vector of length f
// over {0, ..., p-1}. For f = 2 the class is d0 + d1 * eta-bar where eta
// generates the ring of integers.
class ResidueElement {
public:
    ResidueElement() = default;
    ResidueElement(FieldPtr field, Integer d0, Integer d1);

    const Integer& d0() const { return d0_; }
    const Integer& d1() const { return d1_; }
    const FieldPtr& field() const { return field_; }

    bool operator==(const ResidueElement& o) const { return d0_ == o.d0_ && d1_ == o.d1_; }
    bool operator!=(const ResidueElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    FieldPtr field_;
    Integer d0_ = 0, d1_ = 0;
};

// Exact model of the base local field (Q with the p-adic valuation) or a
// quadratic extension Q[theta]/(theta^2 + g1 theta + g0), localized at p.
// Immutable; create through make_base / make_quadratic.
class Field : public std::enable_shared_from_this<Field> {
public:
    enum class Kind { Base, Quadratic };

    static FieldPtr make_base(const Integer& p);
    static FieldPtr make_quadratic(const FieldPtr& base, const Rational& g0,
                                   const Rational& g1);

    Kind kind() const { return kind_; }
    const Integer& p() const { return p_; }
    long e() const { return e_; }
    long f() const { return f_; }
    const Integer& q() const { return q_; }
    long degree() const { return kind_ == Kind::Base ? 1 : 2; }

    // Defining polynomial x^2 + g1 x + g0 (Quadratic only).
    const Rational& g0() const { return g0_; }
    const Rational& g1() const { return g1_; }

    // Maximal-order generator eta = (theta - eta_c) / p^eta_k, with minimal
    // polynomial t^2 + m1 t + m0. For Base fields eta is not meaningful.
    const Integer& eta_c() const { return eta_c_; }
    long eta_k() const { return eta_k_; }
    const Rational& m0() const { return m0_; }
    const Rational& m1() const { return m1_; }

    Scalar zero() const;
    Scalar one() const;
    Scalar from_rational(const Rational& a) const;
    Scalar from_coords(const Rational& a, const Rational& b) const;
    Scalar theta() const;       // Quadratic only
    Scalar eta() const;         // maximal-order generator (Quadratic only)
    Scalar uniformizer() const; // pi, v(pi) = 1
    Scalar pi_pow(long k) const;

    // All q residue classes, in lexicographic digit order.
    std::vector<ResidueElement> residue_classes() const;
    Scalar residue_lift(const ResidueElement& r) const;

    // Same mathematical field (value comparison, not pointer identity).
    bool same_as(const Field& o) const;

    std::string describe() const;

private:
    Field() = default;

    Kind kind_ = Kind::Base;
    Integer p_;
    long e_ = 1, f_ = 1;
    Integer q_;
    Rational g0_, g1_;
    Integer eta_c_ = 0;
    long eta_k_ = 0;
    Rational m0_, m1_;
    // Residue digit of eta when f = 1 (double root of the reduced minimal
    // polynomial); 0 for Base.
    Integer eta_res_ = 0;

    friend class Scalar;
};

// Element of a Field: a + b*theta with exact rational coordinates (b = 0
// for Base fields). Arithmetic is exact; values are immutable.
class Scalar {
public:
    Scalar() = default;
    Scalar(FieldPtr field, Rational a, Rational b);

    const FieldPtr& field() const { return field_; }
    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar inverse() const;

    bool operator==(const Scalar& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Normalized valuation: v(pi) = 1, v(0) = kValInf.
    long valuation() const;
    bool is_integral() const { return valuation() >= 0; }

    // Field norm down to Q: a^2 - g1 a b + g0 b^2 (= a for Base).
    Rational norm() const;
    Rational trace_to_base() const; // 2a - g1 b

    Scalar galois_conj() const;

    ResidueElement residue() const;

    // Canonical digit representative modulo pi^a: sum of d_m pi^m over
    // v(x) <= m < a with d_m in the canonical digit set.
    Scalar reduce_mod_pi_pow(long a) const;

    std::string str() const;

private:
    FieldPtr field_;
    Rational a_, b_;
};

bool same_field(const Scalar& x, const Scalar& y);

} // namespace bto

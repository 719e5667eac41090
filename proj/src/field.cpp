#include "btorders/field.hpp"

#include <cstdlib>

#include "btorders/errors.hpp"

namespace bto {

namespace {

// g evaluated at a rational point, for g(x) = x^2 + g1 x + g0.
Rational eval_monic_quadratic(const Rational& g0, const Rational& g1, const Rational& x) {
    return x * x + g1 * x + g0;
}

} // namespace

// ---------------------------------------------------------------------------
// ResidueElement

ResidueElement::ResidueElement(FieldPtr field, Integer d0, Integer d1)
    : field_(std::move(field)), d0_(std::move(d0)), d1_(std::move(d1)) {
    check(field_ != nullptr, "Internal", "residue element without field");
    check(d0_ >= 0 && d0_ < field_->p(), "Internal", "residue digit out of range");
    check(d1_ >= 0 && d1_ < field_->p(), "Internal", "residue digit out of range");
    if (field_->f() == 1) check(d1_ == 0, "Internal", "residue dimension mismatch");
}

std::string ResidueElement::str() const {
    if (field_ && field_->f() == 2) return d0_.get_str() + "+" + d1_.get_str() + "*t";
    return d0_.get_str();
}

// ---------------------------------------------------------------------------
// Field construction

FieldPtr Field::make_base(const Integer& p) {
    check(p >= 2, "NotPrime", p.get_str() + " is not a prime");
    check(mpz_probab_prime_p(p.get_mpz_t(), 40) != 0, "NotPrime",
          p.get_str() + " is not a prime");
    auto fld = std::shared_ptr<Field>(new Field());
    fld->kind_ = Kind::Base;
    fld->p_ = p;
    fld->e_ = 1;
    fld->f_ = 1;
    fld->q_ = p;
    return fld;
}

FieldPtr Field::make_quadratic(const FieldPtr& base, const Rational& g0,
                               const Rational& g1) {
    check(base != nullptr && base->kind() == Kind::Base, "Internal",
          "quadratic extensions are built over the base field");
    const Integer& p = base->p();
    check(padic_valuation(g0, p) >= 0 && padic_valuation(g1, p) >= 0,
          "NotIntegral", "defining polynomial must have p-integral coefficients");

    Rational disc = g1 * g1 - 4 * g0;
    check(disc != 0 && !is_padic_square(disc, p), "Reducible",
          "x^2 + (" + rational_to_string(g1) + ")x + (" + rational_to_string(g0) +
              ") has a root over the base");

    auto fld = std::shared_ptr<Field>(new Field());
    fld->kind_ = Kind::Quadratic;
    fld->p_ = p;
    fld->g0_ = g0;
    fld->g1_ = g1;

    // Maximal-order search: eta = (theta - c)/p^k with p-integral minimal
    // polynomial and k as large as possible; then O_L = O_K[eta]. The
    // substitution theta = p^k t + c gives
    //   t^2 + ((2c + g1)/p^k) t + g(c)/p^2k.
    long kmax = padic_valuation(disc, p) / 2;
    bool found = false;
    for (long k = kmax; k >= 0 && !found; --k) {
        Integer pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k));
        for (Integer c = 0; c < pk; ++c) {
            Rational lin = (2 * c + g1) / Rational(pk);
            Rational cst = eval_monic_quadratic(g0, g1, Rational(c)) / Rational(pk * pk);
            if (padic_valuation(lin, p) >= 0 && padic_valuation(cst, p) >= 0) {
                fld->eta_c_ = c;
                fld->eta_k_ = k;
                fld->m1_ = lin;
                fld->m0_ = cst;
                found = true;
                break;
            }
        }
    }
    check(found, "Internal", "maximal-order search failed"); // k = 0, c = 0 always works

    // Unramified iff the reduced minimal polynomial of eta is irreducible
    // over the residue field.
    bool unramified;
    if (p == 2) {
        unramified = (mod_pk(fld->m1_, p, 1) == 1) && (mod_pk(fld->m0_, p, 1) == 1);
    } else {
        Rational disc_m = fld->m1_ * fld->m1_ - 4 * fld->m0_;
        unramified = (padic_valuation(disc_m, p) == 0);
    }

    if (unramified) {
        fld->e_ = 1;
        fld->f_ = 2;
        fld->q_ = p * p;
    } else {
        fld->e_ = 2;
        fld->f_ = 1;
        fld->q_ = p;
        // Residue digit of eta: the double root of the reduced minimal
        // polynomial.
        if (p == 2) {
            fld->eta_res_ = mod_pk(fld->m0_, p, 1);
        } else {
            Rational half_m1 = -fld->m1_ / 2;
            fld->eta_res_ = mod_pk(half_m1, p, 1);
        }
    }

    // Sanity: the uniformizer really has valuation 1.
    check(fld->uniformizer().valuation() == 1, "Internal", "uniformizer valuation != 1");
    return fld;
}

bool Field::same_as(const Field& o) const {
    return kind_ == o.kind_ && p_ == o.p_ && g0_ == o.g0_ && g1_ == o.g1_;
}

Scalar Field::zero() const { return Scalar(shared_from_this(), 0, 0); }
Scalar Field::one() const { return Scalar(shared_from_this(), 1, 0); }

Scalar Field::from_rational(const Rational& a) const {
    return Scalar(shared_from_this(), a, 0);
}

Scalar Field::from_coords(const Rational& a, const Rational& b) const {
    check(kind_ == Kind::Quadratic || b == 0, "Internal",
          "base-field scalar with theta coordinate");
    return Scalar(shared_from_this(), a, b);
}

Scalar Field::theta() const {
    check(kind_ == Kind::Quadratic, "Internal", "theta of base field");
    return Scalar(shared_from_this(), 0, 1);
}

Scalar Field::eta() const {
    check(kind_ == Kind::Quadratic, "Internal", "eta of base field");
    // (theta - c) / p^k in power-basis coordinates.
    Rational pk = rational_pow(Rational(p_), eta_k_);
    return Scalar(shared_from_this(), Rational(-eta_c_) / pk, Rational(1) / pk);
}

Scalar Field::uniformizer() const {
    if (kind_ == Kind::Base || e_ == 1) return from_rational(Rational(p_));
    // Ramified: eta, shifted by its residue digit when it is a unit.
    Scalar et = eta();
    long v = et.valuation();
    if (v >= 1) return et;
    return et - from_rational(Rational(eta_res_));
}

Scalar Field::pi_pow(long k) const {
    if (k == 0) return one();
    if (kind_ == Kind::Base || e_ == 1) return from_rational(rational_pow(Rational(p_), k));
    Scalar pi = uniformizer();
    Scalar acc = one();
    Scalar b = k > 0 ? pi : pi.inverse();
    unsigned long n = static_cast<unsigned long>(k > 0 ? k : -k);
    while (n > 0) {
        if (n & 1) acc = acc * b;
        b = b * b;
        n >>= 1;
    }
    return acc;
}

std::vector<ResidueElement> Field::residue_classes() const {
    std::vector<ResidueElement> out;
    auto self = shared_from_this();
    if (f_ == 1) {
        for (Integer d = 0; d < p_; ++d) out.emplace_back(self, d, 0);
    } else {
        for (Integer d0 = 0; d0 < p_; ++d0)
            for (Integer d1 = 0; d1 < p_; ++d1) out.emplace_back(self, d0, d1);
    }
    return out;
}

Scalar Field::residue_lift(const ResidueElement& r) const {
    check(r.field() != nullptr && same_as(*r.field()), "Internal",
          "residue lift across fields");
    if (kind_ == Kind::Base || f_ == 1) return from_rational(Rational(r.d0()));
    return from_rational(Rational(r.d0())) + from_rational(Rational(r.d1())) * eta();
}

std::string Field::describe() const {
    if (kind_ == Kind::Base) return "Q localized at " + p_.get_str();
    return "Q(theta)/(x^2 + (" + rational_to_string(g1_) + ")x + (" +
           rational_to_string(g0_) + ")) at " + p_.get_str() + " (e=" +
           std::to_string(e_) + ", f=" + std::to_string(f_) + ")";
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(FieldPtr field, Rational a, Rational b)
    : field_(std::move(field)), a_(std::move(a)), b_(std::move(b)) {
    check(field_ != nullptr, "Internal", "scalar without field");
}

bool same_field(const Scalar& x, const Scalar& y) {
    return x.field() != nullptr && y.field() != nullptr &&
           x.field()->same_as(*y.field());
}

Scalar Scalar::operator+(const Scalar& o) const {
    check(same_field(*this, o), "FieldMismatch", "scalar addition across fields");
    return Scalar(field_, a_ + o.a_, b_ + o.b_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    check(same_field(*this, o), "FieldMismatch", "scalar subtraction across fields");
    return Scalar(field_, a_ - o.a_, b_ - o.b_);
}

Scalar Scalar::operator-() const { return Scalar(field_, -a_, -b_); }

Scalar Scalar::operator*(const Scalar& o) const {
    check(same_field(*this, o), "FieldMismatch", "scalar product across fields");
    if (field_->kind() == Field::Kind::Base) return Scalar(field_, a_ * o.a_, 0);
    // (a1 + b1 t)(a2 + b2 t) with t^2 = -g1 t - g0.
    const Rational& g0 = field_->g0();
    const Rational& g1 = field_->g1();
    Rational cross = b_ * o.b_;
    return Scalar(field_, a_ * o.a_ - g0 * cross,
                  a_ * o.b_ + b_ * o.a_ - g1 * cross);
}

Scalar Scalar::inverse() const {
    check(!is_zero(), "Internal", "inverse of zero");
    if (field_->kind() == Field::Kind::Base) return Scalar(field_, 1 / a_, 0);
    Rational n = norm();
    Scalar conj = galois_conj();
    return Scalar(field_, conj.a_ / n, conj.b_ / n);
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Rational Scalar::norm() const {
    if (field_->kind() == Field::Kind::Base) return a_;
    return a_ * a_ - field_->g1() * a_ * b_ + field_->g0() * b_ * b_;
}

Rational Scalar::trace_to_base() const {
    if (field_->kind() == Field::Kind::Base) return a_;
    return 2 * a_ - field_->g1() * b_;
}

long Scalar::valuation() const {
    if (is_zero()) return kValInf;
    if (field_->kind() == Field::Kind::Base) return padic_valuation(a_, field_->p());
    long vn = padic_valuation(norm(), field_->p());
    if (field_->e() == 2) return vn;
    check(vn % 2 == 0, "Internal", "odd norm valuation in unramified field");
    return vn / 2;
}

Scalar Scalar::galois_conj() const {
    check(field_->kind() == Field::Kind::Quadratic, "BaseFieldHasNoConjugation",
          "conjugation needs a quadratic field");
    // a + b theta -> (a - g1 b) - b theta.
    return Scalar(field_, a_ - field_->g1() * b_, -b_);
}

ResidueElement Scalar::residue() const {
    check(valuation() >= 0, "NegativeValuation",
          "residue of an element of negative valuation");
    const Integer& p = field_->p();
    if (field_->kind() == Field::Kind::Base) {
        return ResidueElement(field_, mod_pk(a_, p, 1), 0);
    }
    // Coordinates in the integral basis {1, eta}: x = alpha + beta eta with
    // theta = c + p^k eta.
    Rational pk = rational_pow(Rational(p), field_->eta_k());
    Rational alpha = a_ + b_ * Rational(field_->eta_c());
    Rational beta = b_ * pk;
    if (field_->f() == 2) {
        return ResidueElement(field_, mod_pk(alpha, p, 1), mod_pk(beta, p, 1));
    }
    Integer d = (mod_pk(alpha, p, 1) + mod_pk(beta, p, 1) * field_->eta_res_) % p;
    return ResidueElement(field_, d, 0);
}

Scalar Scalar::reduce_mod_pi_pow(long a) const {
    Scalar acc = field_->zero();
    Scalar y = *this;
    while (true) {
        long m = y.valuation();
        if (m >= a) break;
        Scalar digit = field_->residue_lift((y * field_->pi_pow(-m)).residue());
        Scalar term = digit * field_->pi_pow(m);
        acc = acc + term;
        y = y - term;
    }
    return acc;
}

std::string Scalar::str() const {
    if (field_ == nullptr || field_->kind() == Field::Kind::Base)
        return rational_to_string(a_);
    if (b_ == 0) return rational_to_string(a_);
    return rational_to_string(a_) + "+" + rational_to_string(b_) + "*t";
}

} // namespace bto

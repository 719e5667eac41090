#include "btorders/rational.hpp"

#include "btorders/errors.hpp"

namespace bto {

long padic_valuation(const Integer& n, const Integer& p) {
    if (n == 0) return kValInf;
    Integer reduced;
    return static_cast<long>(mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long padic_valuation(const Rational& x, const Integer& p) {
    if (x == 0) return kValInf;
    return padic_valuation(x.get_num(), p) - padic_valuation(x.get_den(), p);
}

Integer mod_pk(const Rational& x, const Integer& p, long k) {
    check(k >= 0, "Internal", "mod_pk with negative k");
    Integer pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k));
    Integer den_inv;
    int ok = mpz_invert(den_inv.get_mpz_t(), x.get_den().get_mpz_t(), pk.get_mpz_t());
    check(ok != 0 || pk == 1, "Internal", "mod_pk: denominator not coprime to p");
    Integer r = (x.get_num() * den_inv) % pk;
    if (r < 0) r += pk;
    return r;
}

Rational unit_part(const Rational& x, const Integer& p) {
    check(x != 0, "Internal", "unit_part of zero");
    long v = padic_valuation(x, p);
    return x / rational_pow(Rational(p), v);
}

bool is_padic_square(const Rational& x, const Integer& p) {
    if (x == 0) return true;
    if (x < 0 && p != 2) {
        // sign is carried by the unit part; fall through to the residue test
    }
    long v = padic_valuation(x, p);
    if (v % 2 != 0) return false;
    Rational u = unit_part(x, p);
    if (p == 2) {
        return mod_pk(u, p, 3) == 1; // unit square in Q_2 iff = 1 mod 8
    }
    Integer r = mod_pk(u, p, 1);
    Integer e = (p - 1) / 2;
    Integer pw;
    mpz_powm(pw.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return pw == 1;
}

std::optional<Rational> exact_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    if (x == 0) return Rational(0);
    if (!mpz_perfect_square_p(x.get_num().get_mpz_t())) return std::nullopt;
    if (!mpz_perfect_square_p(x.get_den().get_mpz_t())) return std::nullopt;
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den().get_mpz_t());
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Rational rational_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    check(base != 0 || e > 0, "Internal", "0 to a negative power");
    Rational b = e > 0 ? base : Rational(1) / base;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

std::string rational_to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
    check(!s.empty(), "ParseError", "empty rational");
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0) {
        fail("ParseError", "bad rational '" + s + "'");
    }
    check(r.get_den() != 0, "ParseError", "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

} // namespace bto

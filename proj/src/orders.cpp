#include "btorders/orders.hpp"

#include <algorithm>
#include <map>

#include "btorders/errors.hpp"

namespace bto {

namespace {

// Membership in the module spanned by an echelon form, with coefficients
// in the valuation ring.
bool echelon_member(const EchelonForm& ech, Vec x) {
    for (size_t j = ech.cols.size(); j-- > 0;) {
        long row = ech.pivot_rows[j];
        const Scalar& piv = ech.cols[j][static_cast<size_t>(row)];
        const Scalar& e = x[static_cast<size_t>(row)];
        if (e.is_zero()) continue;
        Scalar c = e / piv;
        if (c.valuation() < 0) return false;
        axpyv(x, -c, ech.cols[j]);
    }
    return std::all_of(x.begin(), x.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::vector<Mat2> echelon_mats(const FieldPtr& field, const EchelonForm& ech) {
    std::vector<Mat2> out;
    for (const Vec& c : ech.cols) out.push_back(Mat2::from_vec4(field, c));
    return out;
}

long gram_det_valuation(const std::vector<Mat2>& b) {
    const FieldPtr& field = b[0].field();
    std::vector<Vec> cols;
    for (size_t j = 0; j < 4; ++j) {
        Vec col;
        for (size_t i = 0; i < 4; ++i) col.push_back((b[i] * b[j]).trace());
        cols.push_back(col);
    }
    auto det3 = [&](const std::array<std::array<Scalar, 3>, 3>& m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    Scalar det = field->zero();
    int sign = 1;
    for (size_t i = 0; i < 4; ++i) {
        std::array<std::array<Scalar, 3>, 3> minor{};
        size_t rr = 0;
        for (size_t r = 0; r < 4; ++r) {
            if (r == i) continue;
            size_t cc = 0;
            for (size_t c = 1; c < 4; ++c) minor[rr][cc++] = cols[c][r];
            ++rr;
        }
        Scalar term = cols[0][i] * det3(minor);
        det = sign > 0 ? det + term : det - term;
        sign = -sign;
    }
    return det.valuation();
}

void validate_order(const Lattice& lat) {
    check(lat.dim() == 4, "DimensionMismatch", "orders are rank-4 lattices");
    const FieldPtr& field = lat.field();
    check(lat.member(Mat2::identity(field).to_vec4()), "Internal",
          "order does not contain 1");
    std::vector<Mat2> b;
    for (long j = 0; j < 4; ++j) b.push_back(Mat2::from_vec4(field, lat.col(j)));
    for (const Mat2& m : b)
        check(m.is_integral_element(), "NonIntegral",
              "order basis element is not integral");
    for (const Mat2& x : b)
        for (const Mat2& y : b)
            check(lat.member((x * y).to_vec4()), "Internal",
                  "order is not closed under multiplication");
}

Vec mat_apply_to_vec2(const Mat2& m, const Vec& v) {
    return {m.a() * v[0] + m.b() * v[1], m.c() * v[0] + m.d() * v[1]};
}

// Rank-2 lattice spanned by the w-orbit {w, u w}; w runs through
// e1, e2, e1+e2 until the span is full.
Lattice cyclic_lattice(const Mat2& u, const FieldPtr& field) {
    std::vector<Vec> candidates = {
        {field->one(), field->zero()},
        {field->zero(), field->one()},
        {field->one(), field->one()},
    };
    for (const Vec& w : candidates) {
        std::vector<Vec> gens = {w, mat_apply_to_vec2(u, w)};
        try {
            return Lattice::from_generators(field, 2, gens);
        } catch (const Error&) {
            continue;
        }
    }
    fail("Internal", "no cyclic vector found");
}

ProjPoint kernel_line(const Mat2& n) {
    if (!n.a().is_zero() || !n.b().is_zero()) return ProjPoint(n.b(), -n.a());
    return ProjPoint(n.d(), -n.c());
}

} // namespace

// ---------------------------------------------------------------------------
// Order basics

Order Order::from_lattice(const Lattice& lat) {
    validate_order(lat);
    return Order(lat);
}

std::vector<Mat2> Order::basis_mats() const {
    std::vector<Mat2> out;
    for (long j = 0; j < 4; ++j) out.push_back(Mat2::from_vec4(field(), lat_.col(j)));
    return out;
}

bool Order::contains(const Order& o) const {
    for (const Vec& c : o.lattice().basis())
        if (!lat_.member(c)) return false;
    return true;
}

long Order::disc_valuation() const {
    if (!disc_cache_) {
        long v = gram_det_valuation(basis_mats());
        check(v % 2 == 0, "Internal", "odd trace-form discriminant valuation");
        disc_cache_ = v / 2;
    }
    return *disc_cache_;
}

// ---------------------------------------------------------------------------
// Construction from generators

Order order_from_generators(const FieldPtr& field, const std::vector<Mat2>& gens) {
    for (const Mat2& g : gens)
        check(g.entries_integral(), "NonIntegral",
              "generator has a non-integral entry");

    std::vector<Vec> span = {Mat2::identity(field).to_vec4()};
    for (const Mat2& g : gens) span.push_back(g.to_vec4());

    EchelonForm ech = canonical_echelon(field, 4, span);
    for (int round = 0; round < 200; ++round) {
        std::vector<Mat2> basis = echelon_mats(field, ech);
        if (basis.size() == 4) {
            // An integral order has non-negative reduced discriminant; once
            // the running lattice drops below that, the generated ring lies
            // in no maximal order and saturation cannot terminate.
            check(gram_det_valuation(basis) >= 0, "NonIntegral",
                  "generated ring leaves every maximal order");
        }
        std::vector<Vec> products;
        for (const Mat2& x : basis)
            for (const Mat2& y : basis) {
                Vec v = (x * y).to_vec4();
                if (!echelon_member(ech, v)) products.push_back(v);
            }
        if (products.empty()) break;
        std::vector<Vec> next = ech.cols;
        next.insert(next.end(), products.begin(), products.end());
        ech = canonical_echelon(field, 4, next);
    }
    check(ech.cols.size() == 4, "NotFull", "generated ring has rank < 4");
    return Order::from_lattice(Lattice::from_generators(field, 4, ech.cols));
}

// ---------------------------------------------------------------------------
// Vertices as maximal orders

Order vertex_order(const Vertex& v) {
    const FieldPtr& field = v.field();
    const Lattice& lam = v.lattice();
    Mat2 b(lam.col(0)[0], lam.col(1)[0], lam.col(0)[1], lam.col(1)[1]);
    Mat2 binv = b.inverse();
    std::vector<Vec> gens;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            gens.push_back((b * Mat2::unit(field, i, j) * binv).to_vec4());
    return Order::from_lattice(Lattice::from_generators(field, 4, gens));
}

bool vertex_contains(const Vertex& v, const Mat2& m) {
    const Lattice& lam = v.lattice();
    Mat2 b(lam.col(0)[0], lam.col(1)[0], lam.col(0)[1], lam.col(1)[1]);
    return (b.inverse() * m * b).entries_integral();
}

bool vertex_contains(const Vertex& v, const Order& h) {
    const Lattice& lam = v.lattice();
    Mat2 b(lam.col(0)[0], lam.col(1)[0], lam.col(0)[1], lam.col(1)[1]);
    Mat2 binv = b.inverse();
    for (const Mat2& m : h.basis_mats())
        if (!(binv * m * b).entries_integral()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Quadratic subalgebras

QuadraticSubalgebra analyze_matrix(const Mat2& u) {
    const FieldPtr& field = u.field();
    check(field->kind() == Field::Kind::Base, "Internal",
          "matrix analysis runs over the base field");
    check(!u.is_central(), "Central", "central matrix spans no quadratic algebra");
    check(u.is_integral_element(), "NonIntegral", "matrix is not integral");

    QuadraticSubalgebra out{QuadraticSubalgebra::Case::Split, u, 0, std::nullopt,
                            Rational(0),  Rational(0), std::nullopt,
                            std::nullopt, std::nullopt};
    Rational s = u.trace().a();
    Rational n = u.det().a();
    Rational disc = s * s - 4 * n;
    const Integer& p = field->p();

    if (disc == 0) {
        out.tag = QuadraticSubalgebra::Case::NilpotentTranslate;
        Scalar lambda = field->from_rational(s / 2);
        Mat2 nil = u - Mat2::scalar(field, lambda);
        out.eigen1 = kernel_line(nil);
        return out;
    }

    if (is_padic_square(disc, p)) {
        auto root = exact_sqrt(disc);
        check(root.has_value(), "UnrepresentableSplit",
              "eigenvalues live in the completion but not in the exact model");
        Rational l1 = (s + *root) / 2;
        Rational l2 = (s - *root) / 2;
        out.tag = QuadraticSubalgebra::Case::Split;
        out.conductor = padic_valuation(l1 - l2, p);
        // Idempotent projector (u - l2)/(l1 - l2) generates O x O.
        Scalar denom = field->from_rational(l1 - l2);
        Mat2 proj =
            (u - Mat2::scalar(field, field->from_rational(l2))) * denom.inverse();
        out.eta = proj;
        out.m0 = 0;
        out.m1 = -1;
        out.eigen1 = kernel_line(u - Mat2::scalar(field, field->from_rational(l2)));
        out.eigen2 = kernel_line(u - Mat2::scalar(field, field->from_rational(l1)));
        return out;
    }

    // Irreducible minimal polynomial: conductor search for the maximal
    // order of K[u], transported along t -> u.
    long kmax = padic_valuation(disc, p) / 2;
    bool found = false;
    Mat2 eta = u;
    Rational m0, m1;
    long conductor = 0;
    for (long k = kmax; k >= 0 && !found; --k) {
        Integer pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k));
        for (Integer c = 0; c < pk; ++c) {
            Rational tr_eta = (s - 2 * c) / Rational(pk);
            Rational det_eta = (n - s * c + c * c) / (Rational(pk) * Rational(pk));
            if (padic_valuation(tr_eta, p) >= 0 && padic_valuation(det_eta, p) >= 0) {
                Scalar scale = field->from_rational(Rational(pk)).inverse();
                eta = (u - Mat2::scalar(field, field->from_rational(Rational(c)))) * scale;
                m1 = -tr_eta;
                m0 = det_eta;
                conductor = k;
                found = true;
                break;
            }
        }
    }
    check(found, "Internal", "conductor search failed");
    out.eta = eta;
    out.m0 = m0;
    out.m1 = m1;
    out.conductor = conductor;

    bool unramified;
    if (p == 2) {
        unramified = (mod_pk(m1, p, 1) == 1) && (mod_pk(m0, p, 1) == 1);
    } else {
        Rational disc_eta = m1 * m1 - 4 * m0;
        unramified = (padic_valuation(disc_eta, p) == 0);
    }
    if (unramified) {
        out.tag = QuadraticSubalgebra::Case::Unramified;
        return out;
    }

    out.tag = QuadraticSubalgebra::Case::Ramified;
    long v_eta = padic_valuation(m0, p); // v(det eta) = valuation of eta in K[u]
    if (v_eta >= 1) {
        check(v_eta == 1, "Internal", "maximal-order generator too deep");
        out.pi_lambda = eta;
    } else {
        Integer res = (p == 2) ? mod_pk(m0, p, 1) : mod_pk(-m1 / 2, p, 1);
        Mat2 pi = eta - Mat2::scalar(field, field->from_rational(Rational(res)));
        check(padic_valuation(pi.det().a(), p) == 1, "Internal",
              "uniformizer valuation != 1");
        out.pi_lambda = pi;
    }
    return out;
}

BranchDescriptor branch_matrix(const Mat2& u) {
    const FieldPtr& field = u.field();
    QuadraticSubalgebra q = analyze_matrix(u);
    switch (q.tag) {
    case QuadraticSubalgebra::Case::NilpotentTranslate: {
        Vertex anchor = Vertex(cyclic_lattice(u, field));
        return BranchDescriptor::foliage(anchor, *q.eigen1);
    }
    case QuadraticSubalgebra::Case::Split:
        return BranchDescriptor::tube_line(*q.eigen1, *q.eigen2, q.conductor);
    case QuadraticSubalgebra::Case::Unramified: {
        Vertex v = Vertex(cyclic_lattice(*q.eta, field));
        return BranchDescriptor::tube_path({v}, q.conductor);
    }
    case QuadraticSubalgebra::Case::Ramified: {
        Lattice lam = cyclic_lattice(*q.eta, field);
        Vertex d1{lam};
        std::vector<Vec> gens;
        for (const Vec& c : lam.basis())
            gens.push_back(mat_apply_to_vec2(*q.pi_lambda, c));
        Vertex d2{Lattice::from_generators(field, 2, gens)};
        check(distance(d1, d2) == 1, "Internal", "ramified stem is not an edge");
        return BranchDescriptor::tube_path({d1, d2}, q.conductor);
    }
    }
    fail("Internal", "unreachable");
}

// ---------------------------------------------------------------------------
// Branches

std::vector<Vertex> branch_oracle(const Order& h, const Vertex& center, long radius) {
    std::vector<Vertex> out;
    for (const Vertex& v : ball(center, radius))
        if (vertex_contains(v, h)) out.push_back(v);
    return out;
}

std::vector<Vertex> branch_oracle(const Mat2& u, const Vertex& center, long radius) {
    std::vector<Vertex> out;
    for (const Vertex& v : ball(center, radius))
        if (vertex_contains(v, u)) out.push_back(v);
    return out;
}

std::vector<Vertex> branch_vertices(const Order& r) {
    const FieldPtr& field = r.field();
    // Seed: the class of R e1 (with fallbacks), which R stabilizes.
    std::vector<Vec> seeds = {
        {field->one(), field->zero()},
        {field->zero(), field->one()},
        {field->one(), field->one()},
    };
    std::optional<Vertex> seed;
    for (const Vec& w : seeds) {
        std::vector<Vec> gens;
        for (const Mat2& m : r.basis_mats()) gens.push_back(mat_apply_to_vec2(m, w));
        try {
            Vertex v{Lattice::from_generators(field, 2, gens)};
            if (vertex_contains(v, r)) {
                seed = v;
                break;
            }
        } catch (const Error&) {
            continue;
        }
    }
    check(seed.has_value(), "Internal", "no seed vertex contains the order");

    std::map<std::string, Vertex> found;
    found.emplace(seed->key(), *seed);
    std::vector<Vertex> frontier = {*seed};
    size_t guard = 0;
    while (!frontier.empty()) {
        check(++guard < 100000, "Internal", "branch enumeration did not terminate");
        std::vector<Vertex> next;
        for (const Vertex& v : frontier)
            for (const Vertex& nb : neighbors(v)) {
                if (found.count(nb.key())) continue;
                if (vertex_contains(nb, r)) {
                    found.emplace(nb.key(), nb);
                    next.push_back(nb);
                }
            }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
    }
    std::vector<Vertex> out;
    for (auto& [k, v] : found) out.push_back(v);
    return out;
}

BranchDescriptor branch(const Order& r) { return shape_of(branch_vertices(r)); }

// ---------------------------------------------------------------------------
// Gorenstein machinery

Order scale_order(const Order& r, long k) {
    check(k >= 0, "Internal", "scale_order needs r >= 0");
    if (k == 0) return r;
    const FieldPtr& field = r.field();
    std::vector<Vec> gens = {Mat2::identity(field).to_vec4()};
    Scalar pk = field->pi_pow(k);
    for (const Vec& c : r.lattice().basis()) {
        Vec scaled = c;
        for (Scalar& s : scaled) s = s * pk;
        gens.push_back(scaled);
    }
    return Order::from_lattice(Lattice::from_generators(field, 4, gens));
}

namespace {

// Projection M2 -> K^3, x -> (a - d, b, c); its kernel on an order is
// exactly O 1.
Vec project_traceless(const Vec& x4) {
    return {x4[0] - x4[3], x4[1], x4[2]};
}

// Lift (s, b, c) to an integral matrix [[s + z, b], [c, z]] when a scalar
// adjustment z exists. For odd p the trace-zero shift is the only
// candidate; dyadically z runs over the forced classes {0, 1/2} mod O.
// The lattice O1 + lifts does not depend on the choice.
std::optional<Mat2> integral_lift(const FieldPtr& field, const Vec& m3) {
    Mat2 x0(m3[0], m3[1], m3[2], field->zero());
    std::vector<Scalar> candidates;
    if (field->p() == 2) {
        candidates = {field->zero(), field->from_rational(Rational(1, 2))};
    } else {
        candidates = {field->from_rational(-x0.trace().a() / 2)};
    }
    for (const Scalar& z : candidates) {
        Mat2 x = x0 + Mat2::scalar(field, z);
        if (x.is_integral_element()) return x;
    }
    return std::nullopt;
}

// O1 + (integral lifts of a basis of pi^{-k} M), when it is an order.
std::optional<Lattice> closure_candidate(const FieldPtr& field, const Lattice& m3,
                                         long k) {
    Lattice mk = m3.scale(-k);
    std::vector<Vec> gens = {Mat2::identity(field).to_vec4()};
    for (const Vec& col : mk.basis()) {
        auto lift = integral_lift(field, col);
        if (!lift) return std::nullopt;
        gens.push_back(lift->to_vec4());
    }
    Lattice lat = Lattice::from_generators(field, 4, gens);
    std::vector<Mat2> basis;
    for (long j = 0; j < 4; ++j) basis.push_back(Mat2::from_vec4(field, lat.col(j)));
    for (const Mat2& m : basis)
        if (!m.is_integral_element()) return std::nullopt;
    for (const Mat2& x : basis)
        for (const Mat2& y : basis)
            if (!lat.member((x * y).to_vec4())) return std::nullopt;
    return lat;
}

} // namespace

GorensteinClosure gorenstein_closure(const Order& r) {
    const FieldPtr& field = r.field();
    std::vector<Vec> proj;
    for (const Vec& c : r.lattice().basis()) proj.push_back(project_traceless(c));
    Lattice m3 = Lattice::from_generators(field, 3, proj);

    auto self = closure_candidate(field, m3, 0);
    check(self.has_value() && *self == r.lattice(), "Internal",
          "order fails its own closure reconstruction");
    long bound = r.disc_valuation() + 1;
    long best = 0;
    Lattice best_lat = r.lattice();
    for (long k = 1; k <= bound; ++k) {
        auto cand = closure_candidate(field, m3, k);
        if (!cand) break;
        best = k;
        best_lat = *cand;
    }
    return {best, Order::from_lattice(best_lat)};
}

bool is_gorenstein(const Order& r) { return gorenstein_closure(r).r == 0; }

bool is_bass(const Order& r) {
    BranchDescriptor b = branch(r);
    return b.kind == BranchDescriptor::Kind::Tube &&
           b.stem_kind == BranchDescriptor::StemKind::FinitePath && b.width == 0;
}

EichlerResult is_eichler(const Order& r) {
    BranchDescriptor b = branch(r);
    if (b.kind != BranchDescriptor::Kind::Tube || b.width != 0) return {false, 0};
    Order e = intersect_vertices({b.stem_path.front(), b.stem_path.back()});
    if (e == r) return {true, static_cast<long>(b.stem_path.size()) - 1};
    return {false, 0};
}

// ---------------------------------------------------------------------------
// Classification

namespace {

// Candidates scanned for a quadratic subalgebra generator: canonical basis
// first, then pairwise sums, in canonical order.
std::vector<Mat2> lambda_candidates(const Order& b) {
    std::vector<Mat2> basis = b.basis_mats();
    std::vector<Mat2> out = basis;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j)
            out.push_back(basis[i] + basis[j]);
    return out;
}

std::optional<QuadraticSubalgebra> find_subalgebra(const Order& b,
                                                   QuadraticSubalgebra::Case wanted) {
    std::optional<QuadraticSubalgebra> best;
    for (const Mat2& m : lambda_candidates(b)) {
        if (m.is_central() || !m.is_integral_element()) continue;
        Rational s = m.trace().a();
        Rational n = m.det().a();
        Rational disc = s * s - 4 * n;
        if (disc == 0 || is_padic_square(disc, b.field()->p())) continue;
        QuadraticSubalgebra q = analyze_matrix(m);
        if (q.tag != wanted) continue;
        if (!best || q.conductor < best->conductor) best = q;
    }
    return best;
}

} // namespace

BassClassification classify_bass(const Order& b) {
    BranchDescriptor br = branch(b);
    check(br.kind == BranchDescriptor::Kind::Tube &&
              br.stem_kind == BranchDescriptor::StemKind::FinitePath &&
              br.width == 0,
          "NotBass", "branch is not a line");

    BassClassification out;
    out.stem = br.stem_path;
    long d = static_cast<long>(br.stem_path.size()) - 1;

    Order e = intersect_vertices({br.stem_path.front(), br.stem_path.back()});
    if (e == b) {
        out.tag = BassClassification::Tag::E3Eichler;
        out.level = d;
        out.low_level_overlap = (d <= 1);
        return out;
    }
    check(d <= 1, "Internal", "non-Eichler Bass order with a long stem");

    if (d == 0) {
        auto lambda = find_subalgebra(b, QuadraticSubalgebra::Case::Unramified);
        check(lambda.has_value(), "Internal", "E1 order without unramified generator");
        long bound = b.disc_valuation() + 2;
        for (long k = 0; k <= bound; ++k) {
            Order cand = make_e1_form(*lambda, k, br.stem_path.front());
            if (cand == b) {
                out.tag = BassClassification::Tag::E1;
                out.r = k;
                out.lambda = lambda;
                return out;
            }
        }
        fail("Internal", "E1 exponent not recovered");
    }

    auto lambda = find_subalgebra(b, QuadraticSubalgebra::Case::Ramified);
    check(lambda.has_value(), "Internal", "E2 order without ramified generator");
    long k = e.lattice().index_valuation(b.lattice());
    Order cand = make_e2_form(*lambda, k, e);
    check(cand == b, "Internal", "E2 reconstruction mismatch");
    out.tag = BassClassification::Tag::E2;
    out.r = k;
    out.lambda = lambda;
    return out;
}

// ---------------------------------------------------------------------------
// Constructors

Order make_bass(const FieldPtr& field, const BassParams& params) {
    check(field->kind() == Field::Kind::Base, "BadParams",
          "Bass constructors run over the base field");
    const Integer& p = field->p();
    Scalar pi = field->uniformizer();
    Scalar pn = field->pi_pow(params.n);
    Mat2 one = Mat2::identity(field);
    switch (params.family) {
    case BassParams::Family::J1: {
        check(params.n >= 0, "BadParams", "J1 needs n >= 0");
        Mat2 x11 = Mat2::unit(field, 1, 1);
        Mat2 x12 = Mat2::unit(field, 1, 2);
        Mat2 x21 = Mat2::unit(field, 2, 1) * pn;
        return order_from_generators(field, {one, x11, x12, x21});
    }
    case BassParams::Family::J2: {
        check(params.n >= 1, "BadParams", "J2 needs n >= 1");
        check(padic_valuation(params.eps, p) == 0, "BadParams", "eps must be a unit");
        Rational disc = 1 - 4 * params.eps;
        check(disc != 0 && !is_padic_square(disc, p), "BadParams",
              "t^2 - t + eps must be irreducible");
        Scalar eps = field->from_rational(params.eps);
        Mat2 u = Mat2::unit(field, 1, 1) + Mat2::unit(field, 1, 2) -
                 Mat2::unit(field, 2, 1) * eps;
        Mat2 a = Mat2::unit(field, 1, 1) * pn;
        Mat2 b = Mat2::unit(field, 1, 2) * pn;
        return order_from_generators(field, {one, u, a, b});
    }
    case BassParams::Family::J3: {
        check(params.n >= 0, "BadParams", "J3 needs n >= 0");
        check(params.pbar == 0 || params.pbar == 1, "BadParams", "pbar in {0,1}");
        check(padic_valuation(params.alpha1, p) >= 1, "BadParams",
              "alpha1 needs positive valuation");
        check(padic_valuation(params.alpha2, p) == 0, "BadParams",
              "alpha2 must be a unit");
        Scalar a1 = field->from_rational(params.alpha1);
        Scalar a2 = field->from_rational(params.alpha2);
        Mat2 gen = Mat2::unit(field, 1, 1) * a1 + Mat2::unit(field, 1, 2) * a2 -
                   Mat2::unit(field, 2, 1) * pi;
        Mat2 a = Mat2::unit(field, 1, 1) * pn;
        Mat2 b = Mat2::unit(field, 2, 1) * field->pi_pow(params.n + params.pbar);
        return order_from_generators(field, {one, gen, a, b});
    }
    }
    fail("Internal", "unreachable");
}

Order make_e1_form(const QuadraticSubalgebra& lambda, long r, const Vertex& d) {
    check(lambda.tag == QuadraticSubalgebra::Case::Unramified, "BadParams",
          "E1 form needs an unramified subalgebra");
    check(r >= 0, "BadParams", "E1 form needs r >= 0");
    const FieldPtr& field = lambda.u.field();
    Order dv = vertex_order(d);
    std::vector<Vec> gens = {Mat2::identity(field).to_vec4(), lambda.eta->to_vec4()};
    Scalar pr = field->pi_pow(r);
    for (const Vec& c : dv.lattice().basis()) {
        Vec scaled = c;
        for (Scalar& s : scaled) s = s * pr;
        gens.push_back(scaled);
    }
    return Order::from_lattice(Lattice::from_generators(field, 4, gens));
}

Order make_e2_form(const QuadraticSubalgebra& lambda, long r, const Order& e) {
    check(lambda.tag == QuadraticSubalgebra::Case::Ramified, "BadParams",
          "E2 form needs a ramified subalgebra");
    check(r >= 0, "BadParams", "E2 form needs r >= 0");
    const FieldPtr& field = lambda.u.field();
    Mat2 pir = Mat2::identity(field);
    for (long i = 0; i < r; ++i) pir = pir * (*lambda.pi_lambda);
    std::vector<Vec> gens = {Mat2::identity(field).to_vec4(), lambda.eta->to_vec4()};
    for (const Mat2& m : e.basis_mats()) gens.push_back((pir * m).to_vec4());
    return Order::from_lattice(Lattice::from_generators(field, 4, gens));
}

Order intersect_vertices(const std::vector<Vertex>& vs) {
    check(!vs.empty(), "EmptyList", "intersection of no vertices");
    Lattice acc = vertex_order(vs[0]).lattice();
    for (size_t i = 1; i < vs.size(); ++i)
        acc = acc.intersect(vertex_order(vs[i]).lattice());
    return Order::from_lattice(acc);
}

std::vector<Vertex> spread_out(const Vertex& v, long r) {
    const FieldPtr& field = v.field();
    const Lattice& lam = v.lattice();
    // Directions from v: the first three residue lines in canonical order,
    // pairwise distinct by construction.
    Vec c0 = lam.col(0), c1 = lam.col(1);
    Vec c01(2, field->zero());
    axpyv(c01, field->one(), c0);
    axpyv(c01, field->one(), c1);
    std::vector<ProjPoint> dirs = {ProjPoint(c0[0], c0[1]),
                                   ProjPoint(c01[0], c01[1]),
                                   ProjPoint(c1[0], c1[1])};
    std::vector<Vertex> out;
    for (const ProjPoint& z : dirs) out.push_back(vertex_on_ray(v, z, r));
    return out;
}

Order tubular_order(const Vertex& a, const Vertex& b, long r) {
    return scale_order(intersect_vertices({a, b}), r);
}

} // namespace bto

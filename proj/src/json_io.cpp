#include "btorders/json_io.hpp"

#include <fstream>

#include "btorders/errors.hpp"

namespace bto {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { fail("ParseError", msg); }

Rational rational_from_json_str(const Json& j) {
    if (!j.is_string()) parse_fail("expected a rational string");
    return rational_from_string(j.get<std::string>());
}

} // namespace

Json scalar_to_json(const Scalar& s) {
    if (s.field()->kind() == Field::Kind::Base)
        return rational_to_string(s.a());
    return Json::array({rational_to_string(s.a()), rational_to_string(s.b())});
}

Scalar scalar_from_json(const FieldPtr& field, const Json& j) {
    try {
        if (j.is_string()) return field->from_rational(rational_from_json_str(j));
        if (j.is_number_integer())
            return field->from_rational(Rational(j.get<long>()));
        if (j.is_array() && j.size() == 2) {
            check(field->kind() == Field::Kind::Quadratic, "ParseError",
                  "theta coordinates over the base field");
            return field->from_coords(rational_from_json_str(j[0]),
                                      rational_from_json_str(j[1]));
        }
    } catch (const Error& e) {
        if (e.code() == "ParseError") throw;
        parse_fail(e.what());
    }
    parse_fail("malformed scalar");
}

Json field_to_json(const FieldPtr& field) {
    Json j;
    j["p"] = field->p().get_si();
    if (field->kind() == Field::Kind::Base) {
        j["g"] = nullptr;
    } else {
        j["g"] = Json::array(
            {rational_to_string(field->g0()), rational_to_string(field->g1())});
    }
    return j;
}

FieldPtr field_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer())
        parse_fail("field needs an integer \"p\"");
    FieldPtr base = Field::make_base(Integer(j["p"].get<long>()));
    if (!j.contains("g") || j["g"].is_null()) return base;
    const Json& g = j["g"];
    if (!g.is_array() || g.size() != 2) parse_fail("field \"g\" must be [g0, g1]");
    return Field::make_quadratic(base, rational_from_json_str(g[0]),
                                 rational_from_json_str(g[1]));
}

Json matrix_to_json(const Mat2& m) {
    return Json::array({Json::array({scalar_to_json(m.a()), scalar_to_json(m.b())}),
                        Json::array({scalar_to_json(m.c()), scalar_to_json(m.d())})});
}

Mat2 matrix_from_json(const FieldPtr& field, const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        parse_fail("matrix must be a 2x2 array");
    return Mat2(scalar_from_json(field, j[0][0]), scalar_from_json(field, j[0][1]),
                scalar_from_json(field, j[1][0]), scalar_from_json(field, j[1][1]));
}

Json lattice_to_json(const Lattice& l) {
    Json basis = Json::array();
    for (const Vec& c : l.basis()) {
        Json col = Json::array();
        for (const Scalar& s : c) col.push_back(scalar_to_json(s));
        basis.push_back(col);
    }
    return Json{{"n", l.dim()}, {"basis", basis}};
}

Lattice lattice_from_json(const FieldPtr& field, const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("basis"))
        parse_fail("lattice needs \"n\" and \"basis\"");
    long n = j["n"].get<long>();
    std::vector<Vec> gens;
    for (const Json& col : j["basis"]) {
        Vec v;
        for (const Json& s : col) v.push_back(scalar_from_json(field, s));
        if (static_cast<long>(v.size()) != n) parse_fail("basis vector of wrong length");
        gens.push_back(v);
    }
    return Lattice::from_generators(field, n, gens);
}

Json vertex_to_json(const Vertex& v) { return lattice_to_json(v.lattice()); }

Vertex vertex_from_json(const FieldPtr& field, const Json& j) {
    return Vertex(lattice_from_json(field, j));
}

Json projpoint_to_json(const ProjPoint& z) {
    return Json::array({scalar_to_json(z.x()), scalar_to_json(z.y())});
}

Json branch_to_json(const BranchDescriptor& b) {
    Json j;
    if (b.kind == BranchDescriptor::Kind::Foliage) {
        j["kind"] = "foliage";
        j["limit"] = projpoint_to_json(*b.limit_a);
        j["anchor"] = vertex_to_json(*b.anchor);
        return j;
    }
    j["kind"] = "tube";
    j["width"] = b.width;
    Json stem;
    switch (b.stem_kind) {
    case BranchDescriptor::StemKind::FinitePath: {
        stem["type"] = "path";
        Json vs = Json::array();
        for (const Vertex& v : b.stem_path) vs.push_back(vertex_to_json(v));
        stem["vertices"] = vs;
        break;
    }
    case BranchDescriptor::StemKind::InfiniteLine:
        stem["type"] = "line";
        stem["limits"] =
            Json::array({projpoint_to_json(*b.limit_a), projpoint_to_json(*b.limit_b)});
        break;
    case BranchDescriptor::StemKind::Ray:
        stem["type"] = "ray";
        stem["start"] = vertex_to_json(*b.anchor);
        stem["limit"] = projpoint_to_json(*b.limit_a);
        break;
    }
    j["stem"] = stem;
    return j;
}

Json order_to_json(const Order& r) {
    return Json{{"field", field_to_json(r.field())},
                {"basis", lattice_to_json(r.lattice())["basis"]}};
}

Order order_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("basis"))
        parse_fail("order needs \"field\" and \"basis\"");
    FieldPtr field = field_from_json(j["field"]);
    Lattice lat = lattice_from_json(field, Json{{"n", 4}, {"basis", j["basis"]}});
    return Order::from_lattice(lat);
}

Json order_report(const Order& r) {
    Json j = order_to_json(r);
    j["disc_valuation"] = r.disc_valuation();
    GorensteinClosure gc = gorenstein_closure(r);
    j["gorenstein"] =
        Json{{"r", gc.r},
             {"closure_basis", lattice_to_json(gc.closure.lattice())["basis"]}};
    BranchDescriptor br = branch(r);
    j["branch"] = branch_to_json(br);
    bool bass = br.width == 0 &&
                br.stem_kind == BranchDescriptor::StemKind::FinitePath;
    j["bass"] = bass;
    j["gorenstein_order"] = (gc.r == 0);
    EichlerResult er = is_eichler(r);
    j["eichler"] = Json{{"is_eichler", er.eichler}, {"level", er.level}};
    if (bass) {
        BassClassification cls = classify_bass(r);
        Json c;
        switch (cls.tag) {
        case BassClassification::Tag::E1:
            c["case"] = "E1";
            c["r"] = cls.r;
            break;
        case BassClassification::Tag::E2:
            c["case"] = "E2";
            c["r"] = cls.r;
            break;
        case BassClassification::Tag::E3Eichler:
            c["case"] = "E3-eichler";
            c["level"] = cls.level;
            c["low_level_overlap"] = cls.low_level_overlap;
            break;
        }
        j["classification"] = c;
    } else {
        j["classification"] = nullptr;
    }
    return j;
}

Json presentation_to_json(const GhostPresentation& p) {
    Json vs = Json::array();
    for (const Vertex& v : p.vertices) vs.push_back(vertex_to_json(v));
    return Json{{"extension", field_to_json(p.ctx.ext)},
                {"vertices", vs},
                {"claimed_order", order_to_json(p.claimed)},
                {"verified", p.verified}};
}

GhostPresentation presentation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("extension") || !j.contains("vertices") ||
        !j.contains("claimed_order"))
        parse_fail("presentation needs \"extension\", \"vertices\", \"claimed_order\"");
    FieldPtr ext = field_from_json(j["extension"]);
    Order claimed = order_from_json(j["claimed_order"]);
    ExtensionContext ctx = make_extension_context(claimed.field(), ext);
    std::vector<Vertex> vs;
    for (const Json& v : j["vertices"]) vs.push_back(vertex_from_json(ext, v));
    GhostPresentation p{ctx, vs, claimed, false};
    p.verified = verify_presentation(p);
    return p;
}

Json theorem12_to_json(const Theorem12Report& rep) {
    Json j;
    j["gorenstein_r"] = rep.r;
    j["closure_basis"] = lattice_to_json(rep.closure.lattice())["basis"];
    j["closure_is_bass"] = rep.closure_is_bass;
    if (rep.presentation.has_value()) {
        j["result"] = "GhostRealized";
        j["presentation"] = presentation_to_json(*rep.presentation);
    } else {
        j["result"] = "NotGhost";
        j["witness_branch_width"] = rep.witness_width;
    }
    return j;
}

ProblemFile problem_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("field")) parse_fail("problem needs a \"field\"");
    ProblemFile pf;
    pf.field = field_from_json(j["field"]);
    if (j.contains("generators")) {
        std::vector<Mat2> gens;
        for (const Json& m : j["generators"])
            gens.push_back(matrix_from_json(pf.field, m));
        pf.generators = gens;
    }
    if (j.contains("basis")) {
        pf.order = order_from_json(Json{{"field", j["field"]}, {"basis", j["basis"]}});
    }
    if (j.contains("matrix")) pf.matrix = matrix_from_json(pf.field, j["matrix"]);
    if (j.contains("vertices")) {
        std::vector<Vertex> vs;
        for (const Json& v : j["vertices"]) vs.push_back(vertex_from_json(pf.field, v));
        pf.vertices = vs;
    }
    if (j.contains("presentation"))
        pf.presentation = presentation_from_json(j["presentation"]);
    if (j.contains("options")) {
        const Json& o = j["options"];
        if (o.contains("radius")) pf.radius = o["radius"].get<long>();
        if (o.contains("format")) pf.format = o["format"].get<std::string>();
        if (o.contains("seed")) pf.seed = o["seed"].get<unsigned long>();
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    check(in.good(), "ParseError", "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    return problem_from_json(j);
}

Order order_of_problem(const ProblemFile& pf) {
    if (pf.order.has_value()) return *pf.order;
    if (pf.generators.has_value())
        return order_from_generators(pf.field, *pf.generators);
    if (pf.vertices.has_value()) return intersect_vertices(*pf.vertices);
    parse_fail("problem names no order (generators, basis or vertices)");
}

} // namespace bto

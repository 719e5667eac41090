#pragma once

#include <string>

#include "json.hpp"

#include "btorders/ghost.hpp"

namespace bto {

using Json = nlohmann::json;

// Scalars serialize as "a/b" (base) or ["a/b", "c/d"] (theta coordinates);
// fields as {"p": int, "g": ["g0", "g1"] | null}; lattices as
// {"n": int, "basis": [[scalar, ...], ...]} listing basis vectors.

Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const FieldPtr& field, const Json& j);

Json field_to_json(const FieldPtr& field);
FieldPtr field_from_json(const Json& j);

Json matrix_to_json(const Mat2& m);
Mat2 matrix_from_json(const FieldPtr& field, const Json& j);

Json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const FieldPtr& field, const Json& j);

Json vertex_to_json(const Vertex& v);
Vertex vertex_from_json(const FieldPtr& field, const Json& j);

Json branch_to_json(const BranchDescriptor& b);

Json projpoint_to_json(const ProjPoint& z);

// {"field": ..., "basis": ...}; validated on parse.
Json order_to_json(const Order& r);
Order order_from_json(const Json& j);

// Full classification report: basis, discriminant, Gorenstein data,
// predicates, branch, and the Bass case tag when applicable.
Json order_report(const Order& r);

Json presentation_to_json(const GhostPresentation& p);
GhostPresentation presentation_from_json(const Json& j);

Json theorem12_to_json(const Theorem12Report& rep);

// Problem file: a field plus one of "generators", "basis", "matrix",
// "vertices" or "presentation", with an "options" object.
struct ProblemFile {
    FieldPtr field;
    std::optional<std::vector<Mat2>> generators;
    std::optional<Order> order; // from "basis"
    std::optional<Mat2> matrix;
    std::optional<std::vector<Vertex>> vertices;
    std::optional<GhostPresentation> presentation;
    long radius = -1;
    std::string format = "json";
    unsigned long seed = 20240915;
};

ProblemFile problem_from_json(const Json& j);
ProblemFile load_problem(const std::string& path);

// The order named by a problem file (generators, basis or vertices).
Order order_of_problem(const ProblemFile& pf);

} // namespace bto

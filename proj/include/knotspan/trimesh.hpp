#pragma once

#include "knotspan/geom.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace knotspan::mesh {

using Face = std::array<std::size_t, 3>;

struct TriMesh {
    std::vector<Point3> vertices;
    std::vector<Face> faces;

    double area() const;
    double triangle_area(std::size_t f) const;
    geom::Triangle triangle(std::size_t f) const;
    /// Throws InputError on out-of-range indices, repeated indices in a face
    /// or non-finite coordinates.
    void validate() const;
};

/// Boundary edges (used by exactly one face) chained into loops, each loop
/// following the orientation of its faces. Throws Error when the boundary is
/// not a disjoint union of simple loops.
std::vector<std::vector<std::size_t>> boundary_loops(const TriMesh& m);

TriMesh parse_off(std::istream& in);
void write_off(const TriMesh& m, std::ostream& out);
TriMesh read_off(const std::string& path);
void write_off(const TriMesh& m, const std::string& path);

}  // namespace knotspan::mesh

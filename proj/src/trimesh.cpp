#include "knotspan/trimesh.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace knotspan::mesh {

double TriMesh::triangle_area(std::size_t f) const {
    const auto& t = faces[f];
    return geom::triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
}

double TriMesh::area() const {
    double a = 0.0;
    for (std::size_t f = 0; f < faces.size(); ++f) a += triangle_area(f);
    return a;
}

geom::Triangle TriMesh::triangle(std::size_t f) const {
    const auto& t = faces[f];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
}

void TriMesh::validate() const {
    for (const auto& v : vertices) {
        if (!geom::is_finite(v)) throw InputError("mesh", "non-finite vertex coordinate");
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& t = faces[f];
        for (auto i : t) {
            if (i >= vertices.size()) throw InputError("mesh", "face " + std::to_string(f) + " index out of range");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw InputError("mesh", "face " + std::to_string(f) + " repeats a vertex");
        }
    }
}

std::vector<std::vector<std::size_t>> boundary_loops(const TriMesh& m) {
    std::map<std::pair<std::size_t, std::size_t>, int> count;
    for (const auto& t : m.faces) {
        for (int k = 0; k < 3; ++k) {
            const auto a = t[k], b = t[(k + 1) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::map<std::size_t, std::size_t> next;
    for (const auto& t : m.faces) {
        for (int k = 0; k < 3; ++k) {
            const auto a = t[k], b = t[(k + 1) % 3];
            if (count[{std::min(a, b), std::max(a, b)}] != 1) continue;
            if (!next.emplace(a, b).second) throw Error("mesh", "boundary vertex " + std::to_string(a) + " is pinched");
        }
    }
    std::vector<std::vector<std::size_t>> loops;
    std::map<std::size_t, bool> used;
    for (const auto& [start, unused] : next) {
        (void)unused;
        if (used[start]) continue;
        std::vector<std::size_t> loop;
        std::size_t v = start;
        do {
            if (used[v]) throw Error("mesh", "boundary is not a union of simple loops");
            used[v] = true;
            loop.push_back(v);
            auto it = next.find(v);
            if (it == next.end()) throw Error("mesh", "open boundary chain at vertex " + std::to_string(v));
            v = it->second;
        } while (v != start);
        loops.push_back(std::move(loop));
    }
    return loops;
}

namespace {

// Next non-empty, non-comment line.
bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TriMesh parse_off(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw InputError("mesh", "empty OFF input");
    std::istringstream head(line);
    std::string magic;
    head >> magic;
    if (magic != "OFF") throw InputError("mesh", "missing OFF header");
    long nv = -1, nf = -1, ne = 0;
    if (!(head >> nv)) {
        if (!next_line(in, line)) throw InputError("mesh", "missing OFF counts");
        std::istringstream counts(line);
        counts >> nv >> nf >> ne;
    } else {
        head >> nf >> ne;
    }
    if (nv < 0 || nf < 0) throw InputError("mesh", "bad OFF counts");
    TriMesh m;
    m.vertices.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!next_line(in, line)) throw InputError("mesh", "truncated OFF vertex list");
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) throw InputError("mesh", "bad OFF vertex line " + std::to_string(i));
        m.vertices.emplace_back(x, y, z);
    }
    for (long f = 0; f < nf; ++f) {
        if (!next_line(in, line)) throw InputError("mesh", "truncated OFF face list");
        std::istringstream ls(line);
        int k;
        long a, b, c;
        if (!(ls >> k) || k != 3) throw InputError("mesh", "only triangular OFF faces are supported");
        if (!(ls >> a >> b >> c) || a < 0 || b < 0 || c < 0) {
            throw InputError("mesh", "bad OFF face line " + std::to_string(f));
        }
        m.faces.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), static_cast<std::size_t>(c)});
    }
    m.validate();
    return m;
}

void write_off(const TriMesh& m, std::ostream& out) {
    out << "OFF\n" << m.vertices.size() << ' ' << m.faces.size() << " 0\n";
    out << std::setprecision(17);
    for (const auto& v : m.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : m.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

TriMesh read_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("mesh", "cannot open " + path);
    return parse_off(in);
}

void write_off(const TriMesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("mesh", "cannot write " + path);
    write_off(m, out);
}

}  // namespace knotspan::mesh

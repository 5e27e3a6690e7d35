#include "helifem/msh_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace helifem {

namespace {

struct LineReader {
    std::istream& in;
    int lineno = 0;
    bool next(std::string& out) {
        if (!std::getline(in, out)) return false;
        ++lineno;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    }
    std::string expect(const char* what) {
        std::string s;
        if (!next(s)) throw MshParseError(lineno, std::string("unexpected end of file, expected ") + what);
        return s;
    }
};

constexpr int kOuterBoundaryTag = -2;  // internal marker while parsing

int region_from_name(const std::string& name, int lineno) {
    if (name == "insulator") return kInsulator;
    if (name == "outer_boundary") return kOuterBoundaryTag;
    if (name.rfind("conductor_", 0) == 0) {
        try {
            const int i = std::stoi(name.substr(10));
            if (i >= 0) return i;
        } catch (const std::exception&) {
        }
    }
    throw MshParseError(lineno, "unknown physical name \"" + name + "\"");
}

}  // namespace

Mesh2D parse_msh(std::istream& in) {
    LineReader r{in};
    Mesh2D mesh;
    std::map<int, int> phys_region;      // physical tag -> region / boundary marker
    std::map<long, int> node_id_map;     // file node id -> dense index
    bool got_format = false, got_nodes = false, got_elements = false;

    std::string line;
    while (r.next(line)) {
        if (line.empty()) continue;
        if (line == "$MeshFormat") {
            std::istringstream ss(r.expect("version line"));
            std::string version;
            int file_type = -1, data_size = -1;
            ss >> version >> file_type >> data_size;
            if (version != "2.2" || file_type != 0 || data_size != 8)
                throw MshParseError(r.lineno, "unsupported mesh format \"" + version +
                                                  "\" (need ASCII 2.2 0 8)");
            if (r.expect("$EndMeshFormat") != "$EndMeshFormat")
                throw MshParseError(r.lineno, "missing $EndMeshFormat");
            got_format = true;
        } else if (line == "$PhysicalNames") {
            const int n = std::stoi(r.expect("physical name count"));
            for (int i = 0; i < n; ++i) {
                std::istringstream ss(r.expect("physical name"));
                int dim, tag;
                std::string name;
                ss >> dim >> tag;
                std::getline(ss, name);
                const auto q0 = name.find('"'), q1 = name.rfind('"');
                if (q0 == std::string::npos || q1 <= q0)
                    throw MshParseError(r.lineno, "malformed physical name entry");
                name = name.substr(q0 + 1, q1 - q0 - 1);
                phys_region[tag] = region_from_name(name, r.lineno);
            }
            if (r.expect("$EndPhysicalNames") != "$EndPhysicalNames")
                throw MshParseError(r.lineno, "missing $EndPhysicalNames");
        } else if (line == "$Nodes") {
            if (!got_format) throw MshParseError(r.lineno, "$Nodes before $MeshFormat");
            const int n = std::stoi(r.expect("node count"));
            for (int i = 0; i < n; ++i) {
                std::istringstream ss(r.expect("node"));
                long id;
                double x, y, z;
                if (!(ss >> id >> x >> y >> z))
                    throw MshParseError(r.lineno, "malformed node line");
                if (std::abs(z) > 1e-12)
                    throw MshParseError(r.lineno, "node has nonzero z-coordinate");
                if (!node_id_map.emplace(id, static_cast<int>(mesh.nodes.size())).second)
                    throw MshParseError(r.lineno, "duplicate node id " + std::to_string(id));
                mesh.nodes.emplace_back(x, y);
            }
            if (r.expect("$EndNodes") != "$EndNodes")
                throw MshParseError(r.lineno, "missing $EndNodes");
            got_nodes = true;
        } else if (line == "$Elements") {
            if (!got_nodes) throw MshParseError(r.lineno, "$Elements before $Nodes");
            const int n = std::stoi(r.expect("element count"));
            for (int i = 0; i < n; ++i) {
                std::istringstream ss(r.expect("element"));
                long id;
                int type, ntags;
                if (!(ss >> id >> type >> ntags))
                    throw MshParseError(r.lineno, "malformed element line");
                int phys = 0;
                for (int k = 0; k < ntags; ++k) {
                    int tag;
                    if (!(ss >> tag)) throw MshParseError(r.lineno, "malformed element tags");
                    if (k == 0) phys = tag;
                }
                auto read_node = [&]() {
                    long nid;
                    if (!(ss >> nid)) throw MshParseError(r.lineno, "malformed element connectivity");
                    auto it = node_id_map.find(nid);
                    if (it == node_id_map.end())
                        throw MshParseError(r.lineno, "element references unknown node " +
                                                          std::to_string(nid));
                    return it->second;
                };
                auto region_of = [&](int dim_needed) {
                    auto it = phys_region.find(phys);
                    if (it == phys_region.end())
                        throw MshParseError(r.lineno, "element physical tag " + std::to_string(phys) +
                                                          " has no physical name");
                    (void)dim_needed;
                    return it->second;
                };
                if (type == 1) {  // 2-node line
                    const int a = read_node(), b = read_node();
                    if (region_of(1) != kOuterBoundaryTag)
                        throw MshParseError(r.lineno, "line element must be tagged outer_boundary");
                    mesh.boundary_lines.push_back({a, b});
                } else if (type == 2) {  // 3-node triangle
                    Triangle t;
                    t.v = {read_node(), read_node(), read_node()};
                    t.region = region_of(2);
                    if (t.region == kOuterBoundaryTag)
                        throw MshParseError(r.lineno, "triangle tagged outer_boundary");
                    mesh.triangles.push_back(t);
                } else if (type == 15) {
                    // isolated point elements are ignored
                    read_node();
                } else {
                    throw MshParseError(r.lineno, "unsupported element type " + std::to_string(type));
                }
            }
            if (r.expect("$EndElements") != "$EndElements")
                throw MshParseError(r.lineno, "missing $EndElements");
            got_elements = true;
        } else if (line[0] == '$') {
            // skip unknown section
            const std::string end = "$End" + line.substr(1);
            while (true) {
                const std::string s = r.expect(end.c_str());
                if (s == end) break;
            }
        } else {
            throw MshParseError(r.lineno, "unexpected content outside a section");
        }
    }
    if (!got_format) throw MshParseError(r.lineno, "missing $MeshFormat section");
    if (!got_elements) throw MshParseError(r.lineno, "missing $Elements section");

    try {
        mesh.finalize();
    } catch (const MeshError& e) {
        throw MshParseError(r.lineno, std::string("mesh validation failed: ") + e.what());
    }
    return mesh;
}

Mesh2D parse_msh_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open mesh file: " + path);
    return parse_msh(f);
}

void write_msh(const Mesh2D& m, std::ostream& out) {
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";

    // Physical names: 1-based tags; lines get the tag after all regions.
    const int n_regions = m.conductor_count + 1;
    out << "$PhysicalNames\n" << (n_regions + 1) << "\n";
    for (int c = 0; c < m.conductor_count; ++c)
        out << "2 " << (c + 1) << " \"conductor_" << c << "\"\n";
    out << "2 " << (m.conductor_count + 1) << " \"insulator\"\n";
    out << "1 " << (m.conductor_count + 2) << " \"outer_boundary\"\n";
    out << "$EndPhysicalNames\n";

    out << "$Nodes\n" << m.nodes.size() << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
        out << (i + 1) << " " << m.nodes[i].x() << " " << m.nodes[i].y() << " 0\n";
    out << "$EndNodes\n";

    const auto outer = m.outer_boundary_edges();
    out << "$Elements\n" << (m.triangles.size() + outer.size()) << "\n";
    long id = 1;
    for (int e : outer)
        out << id++ << " 1 2 " << (m.conductor_count + 2) << " " << (m.conductor_count + 2)
            << " " << (m.edges[e].a + 1) << " " << (m.edges[e].b + 1) << "\n";
    for (const auto& t : m.triangles) {
        const int phys = (t.region == kInsulator) ? m.conductor_count + 1 : t.region + 1;
        out << id++ << " 2 2 " << phys << " " << phys << " " << (t.v[0] + 1) << " "
            << (t.v[1] + 1) << " " << (t.v[2] + 1) << "\n";
    }
    out << "$EndElements\n";
}

void write_msh_file(const Mesh2D& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    write_msh(m, f);
}

}  // namespace helifem

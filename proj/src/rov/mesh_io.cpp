#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "egoexo/errors.hpp"
#include "egoexo/rov/mesh.hpp"

namespace egoexo::rov {

double TriangleMesh::triangle_area(std::size_t i) const {
  const auto& t = triangles[i];
  const Eigen::Vector3d& a = vertices[t[0]];
  return 0.5 * (vertices[t[1]] - a).cross(vertices[t[2]] - a).norm();
}

void TriangleMesh::validate() const {
  for (const auto& t : triangles)
    for (auto idx : t)
      if (idx >= vertices.size()) throw ValidationError("mesh triangle index out of range");
  if (vertex_colors && vertex_colors->size() != vertices.size())
    throw ValidationError("mesh vertex color count differs from vertex count");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError("expected a number, got '" + s + "'", line);
  return v;
}

long long to_int(const std::string& s, std::size_t line) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError("expected an integer, got '" + s + "'", line);
  return v;
}

std::uint8_t to_channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> scalar_props;  // order of non-list properties
  bool has_list = false;
};

TriangleMesh parse_ply(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != "ply") throw ParseError("missing 'ply' magic", 1);
  std::vector<PlyElement> elements;
  bool saw_format = false;
  while (true) {
    if (!next_line()) throw ParseError("unterminated PLY header", line_no);
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") throw ParseError("only ascii PLY is supported", line_no);
      saw_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError("malformed element line", line_no);
      const long long n = to_int(tok[2], line_no);
      if (n < 0) throw ParseError("negative element count", line_no);
      elements.push_back({tok[1], static_cast<std::size_t>(n), {}, false});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError("property before any element", line_no);
      if (tok.size() >= 2 && tok[1] == "list") {
        if (tok.size() != 5) throw ParseError("malformed list property", line_no);
        elements.back().has_list = true;
      } else {
        if (tok.size() != 3) throw ParseError("malformed property", line_no);
        if (elements.back().has_list)
          throw ParseError("scalar property after list property is not supported", line_no);
        elements.back().scalar_props.push_back(tok[2]);
      }
    } else {
      throw ParseError("unknown header keyword '" + tok[0] + "'", line_no);
    }
  }
  if (!saw_format) throw ParseError("PLY header has no format line", line_no);

  TriangleMesh mesh;
  for (const auto& el : elements) {
    if (el.name == "vertex") {
      auto find = [&](const char* name) -> long {
        const auto it = std::find(el.scalar_props.begin(), el.scalar_props.end(), name);
        return it == el.scalar_props.end() ? -1 : static_cast<long>(it - el.scalar_props.begin());
      };
      const long ix = find("x"), iy = find("y"), iz = find("z");
      const long ir = find("red"), ig = find("green"), ib = find("blue");
      if (ix < 0 || iy < 0 || iz < 0) throw ParseError("vertex element lacks x/y/z", line_no);
      const bool colored = ir >= 0 && ig >= 0 && ib >= 0;
      if (colored) mesh.vertex_colors.emplace();
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!next_line()) throw ParseError("truncated vertex list", line_no);
        const auto tok = split_ws(line);
        if (tok.size() < el.scalar_props.size()) throw ParseError("short vertex line", line_no);
        mesh.vertices.emplace_back(to_double(tok[ix], line_no), to_double(tok[iy], line_no),
                                   to_double(tok[iz], line_no));
        if (colored)
          mesh.vertex_colors->push_back({to_channel(to_double(tok[ir], line_no)),
                                         to_channel(to_double(tok[ig], line_no)),
                                         to_channel(to_double(tok[ib], line_no))});
      }
    } else if (el.name == "face") {
      if (!el.has_list) throw ParseError("face element lacks an index list", line_no);
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!next_line()) throw ParseError("truncated face list", line_no);
        const auto tok = split_ws(line);
        const std::size_t skip = el.scalar_props.size();
        if (tok.size() <= skip) throw ParseError("short face line", line_no);
        const long long n = to_int(tok[skip], line_no);
        if (n != 3) throw ParseError("only triangular faces are supported", line_no);
        if (tok.size() < skip + 4) throw ParseError("short face line", line_no);
        std::array<std::uint32_t, 3> tri{};
        for (int k = 0; k < 3; ++k) {
          const long long idx = to_int(tok[skip + 1 + k], line_no);
          if (idx < 0) throw ParseError("negative face index", line_no);
          tri[k] = static_cast<std::uint32_t>(idx);
        }
        mesh.triangles.push_back(tri);
      }
    } else {
      for (std::size_t i = 0; i < el.count; ++i)
        if (!next_line()) throw ParseError("truncated element '" + el.name + "'", line_no);
    }
  }
  for (const auto& t : mesh.triangles)
    for (auto idx : t)
      if (idx >= mesh.vertices.size()) throw ParseError("face index out of range", line_no);
  return mesh;
}

std::uint32_t obj_index(const std::string& tok, std::size_t nverts, std::size_t line_no) {
  const std::string head = tok.substr(0, tok.find('/'));
  const long long idx = to_int(head, line_no);
  long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(nverts) + idx;
  if (idx == 0 || resolved < 0 || resolved >= static_cast<long long>(nverts))
    throw ParseError("face index out of range", line_no);
  return static_cast<std::uint32_t>(resolved);
}

TriangleMesh parse_obj(std::istream& in) {
  TriangleMesh mesh;
  std::vector<Rgb> colors;
  bool any_color = false;
  bool all_color = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "v") {
      if (tok.size() != 4 && tok.size() != 7) throw ParseError("vertex needs 3 or 6 values", line_no);
      mesh.vertices.emplace_back(to_double(tok[1], line_no), to_double(tok[2], line_no),
                                 to_double(tok[3], line_no));
      if (tok.size() == 7) {
        any_color = true;
        colors.push_back({to_channel(255.0 * to_double(tok[4], line_no)),
                          to_channel(255.0 * to_double(tok[5], line_no)),
                          to_channel(255.0 * to_double(tok[6], line_no))});
      } else {
        all_color = false;
        colors.push_back({});
      }
    } else if (tok[0] == "f") {
      if (tok.size() != 4) throw ParseError("only triangular faces are supported", line_no);
      mesh.triangles.push_back({obj_index(tok[1], mesh.vertices.size(), line_no),
                                obj_index(tok[2], mesh.vertices.size(), line_no),
                                obj_index(tok[3], mesh.vertices.size(), line_no)});
    }
    // vt, vn, o, g, s, usemtl, mtllib: irrelevant to sampling.
  }
  if (any_color && all_color) mesh.vertex_colors = std::move(colors);
  return mesh;
}

}  // namespace

LoadedMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  TriangleMesh raw = format == MeshFormat::ply_ascii ? parse_ply(in) : parse_obj(in);

  LoadedMesh out;
  if (raw.vertices.empty() || raw.triangles.empty())
    throw NoDataError("mesh " + path.string() + " is empty");

  Eigen::Vector3d lo = raw.vertices.front(), hi = raw.vertices.front();
  for (const auto& v : raw.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double diag = (hi - lo).norm();
  const double min_area = 1e-12 * diag * diag;

  out.mesh.vertices = raw.vertices;
  out.mesh.vertex_colors = raw.vertex_colors;
  for (std::size_t i = 0; i < raw.triangles.size(); ++i) {
    if (raw.triangle_area(i) <= min_area)
      ++out.dropped_faces;
    else
      out.mesh.triangles.push_back(raw.triangles[i]);
  }
  if (out.mesh.triangles.empty())
    throw NoDataError("mesh " + path.string() + " has no non-degenerate faces");

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& v : out.mesh.vertices) centroid += v;
  centroid /= static_cast<double>(out.mesh.vertices.size());
  for (auto& v : out.mesh.vertices) v -= centroid;
  return out;
}

LoadedMesh load_mesh(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".ply") return load_mesh(path, MeshFormat::ply_ascii);
  if (ext == ".obj") return load_mesh(path, MeshFormat::obj);
  throw ParseError("unrecognized mesh extension '" + ext + "'");
}

}  // namespace egoexo::rov

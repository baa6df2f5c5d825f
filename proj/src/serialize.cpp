#include "corrlab/serialize.hpp"

#include <fstream>
#include <sstream>

namespace corrlab {

namespace {

[[noreturn]] void schema(const std::string& at, const std::string& what) {
  throw Error(ErrorKind::SchemaError, at + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& at) {
  if (!j.is_object()) schema(at, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(at, std::string("missing \"") + key + "\"");
  return *it;
}

int as_int(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) schema(at, "expected an integer");
  return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& at) {
  if (!j.is_array()) schema(at, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], at + "/" + std::to_string(i)));
  return out;
}

template <class F>
auto guarded(const std::string& at, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaError || e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::SchemaError, at + ": " + e.what());
  }
}

Json int_mat_json(const IntMat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

IntMat int_mat_from_json(const Json& j, int rows, int cols, const std::string& at) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) schema(at, "expected " + std::to_string(rows) + " rows");
  IntMat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const auto rat = at + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols) schema(rat, "expected " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number_integer()) schema(rat + "/" + std::to_string(c), "expected an integer");
      m(r, c) = row[static_cast<std::size_t>(c)].get<long long>();
    }
  }
  return m;
}

Json vertex_list(Subset s) {
  Json out = Json::array();
  for (int i = 0; i < 32; ++i)
    if (s & (Subset{1} << i)) out.push_back(i);
  return out;
}

}  // namespace

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const Json& j, int rows, int cols, const std::string& at) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) schema(at, "expected " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const auto rat = at + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols) schema(rat, "expected " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      const auto& z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        schema(rat + "/" + std::to_string(c), "expected [re, im]");
      m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

Json to_json(const FdCstarAlgebra& a) {
  Json j{{"kind", "algebra"}, {"blocks", a.blocks()}};
  if (!a.label().empty()) j["label"] = a.label();
  return j;
}

Json to_json(const StarHom& phi) {
  return {{"kind", "star_hom"}, {"src", to_json(phi.src())}, {"dst", to_json(phi.dst())}, {"matrix", to_json(phi.matrix())}};
}

Json to_json(const HilbertModule& e) { return {{"kind", "module"}, {"base", to_json(e.base())}, {"mult", e.mult()}}; }

Json to_json(const Correspondence& e) {
  return {{"kind", "correspondence"},
          {"src", to_json(e.src())},
          {"dst", to_json(e.dst())},
          {"mult", e.mult()},
          {"left_action", to_json(e.left_action())}};
}

Json to_json(const CorrIso& u) {
  Json blocks = Json::array();
  for (const auto& b : u.unitary()) blocks.push_back(to_json(b));
  return {{"kind", "iso"}, {"src", to_json(u.src())}, {"dst", to_json(u.dst())}, {"unitary", blocks}};
}

Json to_json(const NCorrSimplex& s) {
  Json algebras = Json::array();
  for (const auto& a : s.algebras()) algebras.push_back(to_json(a));
  Json corrs = Json::array();
  Json isos = Json::array();
  const int n = s.dim();
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      corrs.push_back({{"i", i}, {"j", j}, {"corr", to_json(s.corr(i, j))}});
      for (int k = j + 1; k <= n; ++k) {
        Json blocks = Json::array();
        for (const auto& b : s.iso(i, j, k).unitary()) blocks.push_back(to_json(b));
        isos.push_back({{"i", i}, {"j", j}, {"k", k}, {"unitary", blocks}});
      }
    }
  return {{"kind", "ncorr_simplex"}, {"n", n}, {"algebras", algebras}, {"corrs", corrs}, {"isos", isos}};
}

Json to_json(const HornSpec& h) {
  Json faces = Json::array();
  for (const auto& f : h.faces) faces.push_back(f ? to_json(*f) : Json(nullptr));
  return {{"kind", "horn"}, {"n", h.n}, {"k", h.k}, {"faces", faces}};
}

Json to_json(const K0Simplex& s) {
  Json maps = Json::array();
  for (int i = 0; i < s.dim(); ++i) maps.push_back({{"i", i}, {"j", i + 1}, {"matrix", int_mat_json(s.map(i, i + 1))}});
  return {{"kind", "k0_simplex"}, {"ranks", s.ranks}, {"maps", maps}};
}

Json to_json(const TraceEntry& t) {
  return {{"level", t.level},
          {"simplex", t.simplex},
          {"chain", t.chain},
          {"horn", "(" + std::to_string(t.horn_dim) + "," + std::to_string(t.horn_k) + ")"},
          {"type", t.special ? "special" : "inner"},
          {"certificate", t.certificate}};
}

Json to_json(const std::vector<TraceEntry>& trace) {
  Json out = Json::array();
  for (const auto& t : trace) out.push_back(to_json(t));
  return out;
}

Json to_json(const SubdivisionFunctor& f) {
  const int n = f.n();
  const Subset full = full_subset(n);
  Json vertices = Json::array();
  Json homs = Json::array();
  for (Subset s = 1; s <= full; ++s) vertices.push_back({{"set", vertex_list(s)}, {"algebra", to_json(f.algebra(s))}});
  for (Subset s = 1; s <= full; ++s)
    for (Subset t = 1; t <= full; ++t)
      if (s != t && (s & ~t) == 0)
        homs.push_back({{"from", vertex_list(s)}, {"to", vertex_list(t)}, {"hom", to_json(f.hom(s, t))}});
  return {{"kind", "subdivision_functor"}, {"n", n}, {"vertices", vertices}, {"homs", homs}};
}

FdCstarAlgebra algebra_from_json(const Json& j, const std::string& at) {
  const auto blocks = int_list(field(j, "blocks", at), at + "/blocks");
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) schema(at + "/label", "expected a string");
    label = j["label"].get<std::string>();
  }
  if (blocks.empty()) return FdCstarAlgebra::zero();
  return guarded(at, [&] { return make_algebra(blocks, label); });
}

StarHom hom_from_json(const Json& j, const std::string& at) {
  const auto src = algebra_from_json(field(j, "src", at), at + "/src");
  const auto dst = algebra_from_json(field(j, "dst", at), at + "/dst");
  const Mat m = mat_from_json(field(j, "matrix", at), dst.dim(), src.dim(), at + "/matrix");
  return make_star_hom(src, dst, m);
}

HilbertModule module_from_json(const Json& j, const std::string& at) {
  const auto base = algebra_from_json(field(j, "base", at), at + "/base");
  const auto mult = int_list(field(j, "mult", at), at + "/mult");
  return make_module(base, mult);
}

Correspondence corr_from_json(const Json& j, const std::string& at) {
  const auto src = algebra_from_json(field(j, "src", at), at + "/src");
  const auto dst = algebra_from_json(field(j, "dst", at), at + "/dst");
  const auto mult = int_list(field(j, "mult", at), at + "/mult");
  const auto module = make_module(dst, mult);
  const auto left = hom_from_json(field(j, "left_action", at), at + "/left_action");
  if (!(left.src() == src)) schema(at + "/left_action", "source differs from src");
  if (!(left.dst() == module.compacts())) schema(at + "/left_action", "target is not K(E)");
  return make_corr(module, left);
}

namespace {

BlockOp block_op_from_json(const Json& j, const Correspondence& dst, const std::string& at) {
  if (!j.is_array() || static_cast<int>(j.size()) != dst.dst().num_blocks())
    schema(at, "expected one block per base block");
  BlockOp u;
  for (int b = 0; b < dst.dst().num_blocks(); ++b)
    u.push_back(mat_from_json(j[static_cast<std::size_t>(b)], dst.mult(b), dst.mult(b), at + "/" + std::to_string(b)));
  return u;
}

}  // namespace

CorrIso iso_from_json(const Json& j, const std::string& at) {
  const auto src = corr_from_json(field(j, "src", at), at + "/src");
  const auto dst = corr_from_json(field(j, "dst", at), at + "/dst");
  const auto u = block_op_from_json(field(j, "unitary", at), dst, at + "/unitary");
  return make_iso(src, dst, u);
}

NCorrSimplex simplex_from_json(const Json& j, const std::string& at) {
  const int n = as_int(field(j, "n", at), at + "/n");
  if (n < 0 || n > kMaxSubdivisionDim) schema(at + "/n", "dimension out of range");
  const auto& algs = field(j, "algebras", at);
  if (!algs.is_array() || static_cast<int>(algs.size()) != n + 1) schema(at + "/algebras", "expected n + 1 algebras");
  std::vector<FdCstarAlgebra> algebras;
  for (int i = 0; i <= n; ++i)
    algebras.push_back(algebra_from_json(algs[static_cast<std::size_t>(i)], at + "/algebras/" + std::to_string(i)));
  NCorrSimplex s(algebras);
  const auto& corrs = field(j, "corrs", at);
  if (!corrs.is_array()) schema(at + "/corrs", "expected an array");
  for (std::size_t c = 0; c < corrs.size(); ++c) {
    const auto cat = at + "/corrs/" + std::to_string(c);
    const int a = as_int(field(corrs[c], "i", cat), cat + "/i");
    const int b = as_int(field(corrs[c], "j", cat), cat + "/j");
    if (a < 0 || b > n || a >= b) schema(cat, "indices must satisfy 0 <= i < j <= n");
    const auto e = corr_from_json(field(corrs[c], "corr", cat), cat + "/corr");
    if (!(e.src() == s.algebra(a)) || !(e.dst() == s.algebra(b))) schema(cat, "endpoints differ from the algebras");
    s.set_corr(a, b, e);
  }
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (!s.has_corr(a, b)) schema(at + "/corrs", "missing E" + std::to_string(a) + std::to_string(b));
  const auto& isos = field(j, "isos", at);
  if (!isos.is_array()) schema(at + "/isos", "expected an array");
  for (std::size_t c = 0; c < isos.size(); ++c) {
    const auto cat = at + "/isos/" + std::to_string(c);
    const int a = as_int(field(isos[c], "i", cat), cat + "/i");
    const int b = as_int(field(isos[c], "j", cat), cat + "/j");
    const int d = as_int(field(isos[c], "k", cat), cat + "/k");
    if (a < 0 || d > n || a >= b || b >= d) schema(cat, "indices must satisfy 0 <= i < j < k <= n");
    const auto src = tensor(s.corr(a, b), s.corr(b, d));
    const auto& dst = s.corr(a, d);
    const auto u = block_op_from_json(field(isos[c], "unitary", cat), dst, cat + "/unitary");
    s.set_iso(a, b, d, make_iso(src, dst, u));
  }
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int d = b + 1; d <= n; ++d)
        if (!s.has_iso(a, b, d))
          schema(at + "/isos", "missing u" + std::to_string(a) + std::to_string(b) + std::to_string(d));
  s.set_unit_data();
  return s;
}

HornSpec horn_from_json(const Json& j, const std::string& at) {
  HornSpec h;
  h.n = as_int(field(j, "n", at), at + "/n");
  h.k = as_int(field(j, "k", at), at + "/k");
  if (h.n < 1 || h.n > kMaxSubdivisionDim || h.k < 0 || h.k > h.n) schema(at, "bad (n, k)");
  const auto& faces = field(j, "faces", at);
  if (!faces.is_array() || static_cast<int>(faces.size()) != h.n + 1) schema(at + "/faces", "expected n + 1 slots");
  for (int f = 0; f <= h.n; ++f) {
    const auto& face = faces[static_cast<std::size_t>(f)];
    if (face.is_null()) {
      h.faces.emplace_back();
      continue;
    }
    h.faces.emplace_back(simplex_from_json(face, at + "/faces/" + std::to_string(f)));
  }
  return h;
}

K0Simplex k0_simplex_from_json(const Json& j, const std::string& at) {
  const auto ranks = int_list(field(j, "ranks", at), at + "/ranks");
  if (ranks.empty()) schema(at + "/ranks", "expected at least one vertex");
  const auto& maps = field(j, "maps", at);
  if (!maps.is_array() || maps.size() + 1 != ranks.size()) schema(at + "/maps", "expected one map per spine edge");
  std::vector<IntMat> spine;
  for (std::size_t i = 0; i < maps.size(); ++i)
    spine.push_back(int_mat_from_json(field(maps[i], "matrix", at + "/maps/" + std::to_string(i)), ranks[i + 1], ranks[i],
                                      at + "/maps/" + std::to_string(i) + "/matrix"));
  return guarded(at, [&] { return k0_simplex(ranks, spine); });
}

std::string kind_of(const Json& j) {
  if (!j.is_object()) schema("$", "expected an object");
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) schema("$/kind", "expected a string");
    return j["kind"].get<std::string>();
  }
  if (j.contains("faces")) return "horn";
  if (j.contains("algebras")) return "ncorr_simplex";
  if (j.contains("unitary")) return "iso";
  if (j.contains("left_action")) return "correspondence";
  if (j.contains("matrix")) return "star_hom";
  if (j.contains("base")) return "module";
  if (j.contains("ranks")) return "k0_simplex";
  if (j.contains("blocks")) return "algebra";
  schema("$", "unknown record");
}

Json parse_json(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw Error(ErrorKind::ParseError, "empty input");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace corrlab

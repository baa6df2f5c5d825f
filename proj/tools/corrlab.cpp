// corrlab command-line front end.

#include "acceptance.hpp"
#include "corrlab/bicat.hpp"
#include "corrlab/extension.hpp"
#include "corrlab/random.hpp"
#include "corrlab/serialize.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace corrlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kCliMaxDim = 3;

struct Globals {
  double eps = 1e-9;
  std::uint64_t seed = 42;
  std::string out;
  std::string trace;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const Json& j) {
  if (g.out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(g.out, j);
}

std::vector<int> parse_blocks(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("bad block list \"" + s + "\"");
    }
  }
  if (out.empty()) throw UsageError("empty block list");
  return out;
}

void cap_dim(int n) {
  if (n > kCliMaxDim) throw UsageError("the command line supports n <= 3, got " + std::to_string(n));
}

std::vector<StarHom> chain_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, "$: a chain is an array of star_hom records");
  std::vector<StarHom> chain;
  for (std::size_t i = 0; i < j.size(); ++i) chain.push_back(hom_from_json(j[i], "$/" + std::to_string(i)));
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!(chain[i].src() == chain[i - 1].dst()))
      throw Error(ErrorKind::SchemaError, "$/" + std::to_string(i) + ": not composable with the previous hom");
  return chain;
}

void line(bool ok, const std::string& what, double residual) {
  std::cout << (ok ? "pass " : "FAIL ") << what << " residual " << residual << '\n';
}

// ---------------------------------------------------------------------------

int validate_simplex_report(const NCorrSimplex& s) {
  SimplexReport report;
  try {
    validate_simplex(s, &report);
  } catch (const ResidualError& e) {
    std::cout << "FAIL " << e.what() << '\n';
    return kExitFail;
  }
  line(true, "unit conditions", report.worst_unit);
  const int n = s.dim();
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int k = j; k <= n; ++k)
        for (int l = k; l <= n; ++l) {
          const double r = pentagon_residual(s, i, j, k, l);
          const bool pass = r <= eps();
          ok = ok && pass;
          worst = std::max(worst, r);
          line(pass, "pentagon (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "," +
                         std::to_string(l) + ")",
               r);
        }
  std::cout << "simplex of dimension " << n << (ok ? " is coherent" : " is not coherent") << ", worst pentagon "
            << worst << '\n';
  return ok ? kExitPass : kExitFail;
}

int cmd_validate(const Globals&, const std::string& path) {
  const Json j = read_json_file(path);
  const std::string kind = kind_of(j);
  if (kind == "algebra") {
    const auto a = algebra_from_json(j);
    std::cout << "pass algebra of dimension " << a.dim() << '\n';
  } else if (kind == "star_hom") {
    const auto phi = hom_from_json(j);
    std::cout << "pass *-homomorphism, multiplicities\n" << phi.mult_matrix() << '\n';
  } else if (kind == "module") {
    module_from_json(j);
    std::cout << "pass Hilbert module\n";
  } else if (kind == "correspondence") {
    const auto e = corr_from_json(j);
    std::cout << "pass correspondence, full " << (is_full_corr(e) ? "yes" : "no") << ", equivalence "
              << (is_equivalence(e) ? "yes" : "no") << '\n';
  } else if (kind == "iso") {
    const auto u = iso_from_json(j);
    const auto r = iso_residuals(u.src(), u.dst(), u.unitary());
    line(true, "unitary", r.unitary);
    line(true, "right-linear", r.right_linear);
    line(true, "intertwining", r.intertwining);
  } else if (kind == "ncorr_simplex") {
    const auto s = simplex_from_json(j);
    cap_dim(s.dim());
    return validate_simplex_report(s);
  } else if (kind == "horn") {
    const auto h = horn_from_json(j);
    cap_dim(h.n);
    int code = kExitPass;
    for (int f = 0; f <= h.n; ++f) {
      if (!h.faces[static_cast<std::size_t>(f)]) continue;
      std::cout << "face " << f << ":\n";
      code = std::max(code, validate_simplex_report(*h.faces[static_cast<std::size_t>(f)]));
    }
    return code;
  } else {
    throw Error(ErrorKind::SchemaError, "$/kind: cannot validate \"" + kind + "\"");
  }
  return kExitPass;
}

struct MakeOptions {
  std::string what;
  std::string blocks = "2,1";
  std::string src = "2,1";
  std::string dst;
  std::string label;
  int n = 2;
  int k = 1;
  bool gamma = false;
  bool twist = false;
};

int cmd_make(const Globals& g, const MakeOptions& o) {
  Rng rng(g.seed);
  if (o.what == "algebra") {
    emit(g, to_json(make_algebra(parse_blocks(o.blocks), o.label)));
  } else if (o.what == "hom") {
    const auto a = make_algebra(parse_blocks(o.src));
    emit(g, to_json(o.dst.empty() ? random_unital_hom(rng, a, 3, 4) : random_hom_into(rng, a, make_algebra(parse_blocks(o.dst)))));
  } else if (o.what == "corr") {
    const auto a = make_algebra(parse_blocks(o.src));
    const auto b = make_algebra(parse_blocks(o.dst.empty() ? "2" : o.dst));
    emit(g, to_json(random_corr(rng, a, b, true, 3)));
  } else if (o.what == "chain") {
    cap_dim(o.n);
    Json j = Json::array();
    for (const auto& h : random_chain(rng, o.n, 2, 2)) j.push_back(to_json(h));
    emit(g, j);
  } else if (o.what == "simplex" || o.what == "horn") {
    cap_dim(o.n);
    if (o.n < 0 || (o.what == "horn" && o.n < 2)) throw UsageError("bad dimension");
    NCorrSimplex s = o.gamma ? (o.n == 0 ? gamma_simplex_vertex(random_algebra(rng, 2, 2))
                                         : gamma_simplex(random_chain(rng, o.n, 2, 2)))
                             : (o.n == 0 ? gamma_simplex_vertex(random_algebra(rng, 2, 2))
                                         : random_simplex(rng, o.n, 2, 2, 2));
    if (o.twist) s = twist_simplex(rng, s);
    if (o.what == "simplex") {
      emit(g, to_json(s));
    } else {
      if (o.k < 0 || o.k > o.n) throw UsageError("horn index out of range");
      emit(g, to_json(horn_of(s, o.k)));
    }
  } else {
    throw UsageError("make: unknown kind \"" + o.what + "\"");
  }
  return kExitPass;
}

int cmd_gamma(const Globals& g, const std::string& hom, const std::string& chain) {
  if (hom.empty() == chain.empty()) throw UsageError("gamma needs exactly one of --hom, --chain");
  if (!hom.empty()) {
    emit(g, to_json(gamma_of_hom(hom_from_json(read_json_file(hom)))));
    return kExitPass;
  }
  const auto c = chain_from_json(read_json_file(chain));
  if (c.empty()) throw UsageError("empty chain");
  cap_dim(static_cast<int>(c.size()));
  emit(g, to_json(gamma_simplex(c)));
  return kExitPass;
}

int cmd_morita(const Globals& g, const std::string& path) {
  const auto j = read_json_file(path);
  const auto e = kind_of(j) == "correspondence" ? corr_from_json(j).module() : module_from_json(j);
  const auto mi = morita_inverse_of_corner(e);
  const auto i_e = corner_embedding(e);
  emit(g, {{"kind", "morita"},
           {"corner_embedding", to_json(i_e)},
           {"gamma_corner", to_json(gamma_of_hom(i_e))},
           {"inverse", to_json(mi.inverse)},
           {"unit", to_json(mi.unit)},
           {"counit", to_json(mi.counit)}});
  return kExitPass;
}

int cmd_fill(const Globals& g, const std::string& path) {
  const auto h = horn_from_json(read_json_file(path));
  cap_dim(h.n);
  const auto s = h.k > 0 && h.k < h.n ? fill_inner_horn(h) : fill_special_outer_horn(h);
  std::cerr << (h.k < h.n ? "inner" : "special outer") << " horn (" << h.n << "," << h.k << ") filled\n";
  emit(g, to_json(s));
  return kExitPass;
}

int cmd_subdivide(const Globals& g, const std::string& path, int n) {
  const auto s = simplex_from_json(read_json_file(path));
  cap_dim(s.dim());
  if (n >= 0 && n != s.dim()) throw UsageError("--n " + std::to_string(n) + " but the simplex has dimension " + std::to_string(s.dim()));
  FunctorReport report;
  const auto f = subdivision_functor(validate_simplex(s), &report);
  std::cerr << "functor on " << report.chains << " chains, worst residual " << report.worst << '\n';
  emit(g, to_json(f));
  return kExitPass;
}

struct ExtendOptions {
  std::string simplex;
  std::string functor = "k0";
  std::string target;
  std::string chain;
  bool guided = false;
};

int cmd_extend(const Globals& g, const ExtendOptions& o) {
  const auto sigma = validate_simplex(simplex_from_json(read_json_file(o.simplex)));
  cap_dim(sigma.dim());
  std::optional<std::vector<StarHom>> hint;
  if (!o.chain.empty()) {
    hint = chain_from_json(read_json_file(o.chain));
    if (static_cast<int>(hint->size()) != sigma.dim() || !simplex_equal(gamma_simplex(*hint), sigma, eps()))
      throw Error(ErrorKind::CompatibilityViolated, "the chain does not produce the simplex");
  }
  const std::string target = o.target.empty() ? (o.functor == "gamma" ? "ncorr" : "k0nerve") : o.target;
  std::vector<TraceEntry> trace;
  Json result;
  if (o.functor == "k0" && target == "k0nerve") {
    Extender<K0Nerve> ext(K0Nerve{}, k0_functor(), o.guided);
    result = to_json(ext.bar_F(sigma, hint));
    trace = ext.trace();
  } else if (o.functor == "gamma" && target == "ncorr") {
    Extender<NCorrNerve> ext(NCorrNerve{}, gamma_functor(), o.guided);
    result = to_json(ext.bar_F(sigma, hint));
    trace = ext.trace();
  } else {
    throw UsageError("functor " + o.functor + " does not land in " + target);
  }
  if (!g.trace.empty()) write_json_file(g.trace, to_json(trace));
  std::cerr << trace.size() << " horn fills\n";
  emit(g, result);
  return kExitPass;
}

int cmd_selftest(const Globals& g) {
  Json results = Json::array();
  bool all = true;
  for (int id = 1; id <= 10; ++id) {
    const auto r = run_criterion(id, g.seed, g.eps);
    std::cerr << format_line(r) << '\n';
    all = all && r.pass;
    results.push_back({{"suite", r.name},
                       {"case", r.id},
                       {"pass", r.pass},
                       {"cases", r.cases},
                       {"failed", r.failed},
                       {"residual", r.worst_residual},
                       {"time", r.seconds},
                       {"time_limit", r.time_limit},
                       {"detail", r.detail}});
  }
  emit(g, {{"seed", g.seed}, {"eps", g.eps}, {"pass", all}, {"results", results}});
  return all ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrlab: correspondences, nerves and horn-filling extensions"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--eps", g.eps, "comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "write JSON output here instead of stdout");
  app.add_option("--trace", g.trace, "write the horn-fill trace here (extend)");

  std::string path;
  auto* validate = app.add_subcommand("validate", "check a JSON record and report residuals");
  auto* vpath = validate->add_option("file", path, "any record");
  validate->add_option("--simplex", path, "ncorr_simplex record")->excludes(vpath);

  MakeOptions mo;
  auto* make = app.add_subcommand("make", "generate a random record");
  make->add_option("what", mo.what, "algebra | hom | corr | chain | simplex | horn")->required();
  make->add_option("--blocks", mo.blocks, "block sizes for algebra, e.g. 2,1");
  make->add_option("--label", mo.label, "algebra label");
  make->add_option("--src", mo.src, "source block sizes");
  make->add_option("--dst", mo.dst, "target block sizes");
  make->add_option("--n", mo.n, "dimension");
  make->add_option("--k", mo.k, "missing face of a horn");
  make->add_flag("--gamma", mo.gamma, "simplex of a random chain of homs");
  make->add_flag("--twist", mo.twist, "twist every edge by a random unitary");

  std::string chain_path;
  auto* gamma = app.add_subcommand("gamma", "correspondence of a *-homomorphism, or simplex of a chain");
  gamma->add_option("--hom", path, "star_hom record");
  gamma->add_option("--chain", chain_path, "array of star_hom records");

  auto* morita = app.add_subcommand("morita", "corner embedding of a module and its Morita inverse");
  morita->add_option("--module", path, "module or correspondence record")->required();

  auto* fill = app.add_subcommand("fill", "fill an inner or special outer horn");
  fill->add_option("--horn", path, "horn record")->required();

  int sub_n = -1;
  auto* subdivide = app.add_subcommand("subdivide", "functor from the subdivision of a simplex");
  subdivide->add_option("--simplex", path, "ncorr_simplex record")->required();
  subdivide->add_option("--n", sub_n, "expected dimension");

  ExtendOptions eo;
  auto* extend = app.add_subcommand("extend", "extend a functor along the nerve");
  extend->add_option("--simplex", eo.simplex, "ncorr_simplex record")->required();
  extend->add_option("--functor", eo.functor, "k0 | gamma")->check(CLI::IsMember({"k0", "gamma"}));
  extend->add_option("--target", eo.target, "k0nerve | ncorr")->check(CLI::IsMember({"k0nerve", "ncorr"}));
  extend->add_option("--chain", eo.chain, "chain of homs with Gamma(chain) = simplex");
  extend->add_flag("--guided", eo.guided, "fill through the edges of the chain");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  ScopedEps scope(g.eps);
  try {
    if (*validate) {
      if (path.empty()) throw UsageError("validate needs a file");
      return cmd_validate(g, path);
    }
    if (*make) return cmd_make(g, mo);
    if (*gamma) return cmd_gamma(g, path, chain_path);
    if (*morita) return cmd_morita(g, path);
    if (*fill) return cmd_fill(g, path);
    if (*subdivide) return cmd_subdivide(g, path, sub_n);
    if (*extend) return cmd_extend(g, eo);
    if (*selftest) return cmd_selftest(g);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    const bool input = e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::SchemaError;
    return input ? kExitUsage : kExitFail;
  }
  return kExitUsage;
}

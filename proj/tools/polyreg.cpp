#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "polyreg/audit.hpp"
#include "polyreg/io.hpp"
#include "polyreg/regularity.hpp"

using namespace polyreg;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string file;
  std::string z;
  std::string which = "all";
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::size_t count = 200;
  std::string family = "random_polyhedron";
  std::size_t n = 2;
  std::size_t k = 4;
  long entry_bound = 3;
};

AVIInstance load_instance(const InstanceFile& f) {
  AVIInstance inst(f.a, f.c);
  if (f.base_point) {
    if (!f.c.contains(*f.base_point)) throw UsageError("base_point is not in C");
    inst.base_point = f.base_point;
  }
  return inst;
}

InstanceFile read_instance(const Options& o) {
  if (o.file.empty()) throw UsageError("--file is required");
  return instance_from_json(read_json_file(o.file));
}

std::string key(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string pair_text(const FaceLattice& lat, std::optional<std::pair<std::size_t, std::size_t>> p) {
  if (!p) return "";
  return " at faces " + key(lat.faces[p->first].active_set) + " ⊂ " + key(lat.faces[p->second].active_set);
}

const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

void emit(const Options& o, const Json& j, const std::string& text) {
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_faces(const Options& o) {
  InstanceFile f = read_instance(o);
  FaceLattice lat = enumerate_faces(f.c);
  std::string text = std::to_string(lat.size()) + " faces\n";
  for (const auto& face : lat.faces)
    text += key(face.active_set) + " dim " + std::to_string(face.dim) + " ri " + to_string(face.ri_point) + "\n";
  text += std::to_string(lat.covering_pairs.size()) + " covering pairs\n";
  emit(o, to_json(lat), text);
  return kPass;
}

int cmd_check(const Options& o) {
  InstanceFile f = read_instance(o);
  AVIInstance inst = load_instance(f);
  const auto& lat = inst.lattice;
  const bool all = o.which == "all";
  if (!all && o.which != "coherent" && o.which != "separation" && o.which != "critical")
    throw UsageError("--which must be coherent, separation, critical or all");
  Json j = Json::object();
  std::string text;
  bool pass = true;
  if (all || o.which == "coherent") {
    auto r = check_coherent_orientation(inst.a, inst.c, lat);
    pass = pass && r.coherent;
    j["coherent_orientation"] = to_json(r, lat);
    text += std::string("coherent orientation: ") + verdict(r.coherent);
    if (r.non_complementary_face) text += " (face " + key(lat.faces[*r.non_complementary_face].active_set) + " is not complementary)";
    if (r.singular_face) text += " (T_F singular on face " + key(lat.faces[*r.singular_face].active_set) + ")";
    text += pair_text(lat, r.bad_pair) + "\n";
  }
  if (all || o.which == "separation") {
    FaceSeparation r = f.relation ? check_face_separation(relation_from_json(*f.relation, inst.c, lat))
                                  : check_face_separation(inst.a, inst.c, lat);
    pass = pass && r.holds;
    j["face_separation"] = to_json(r, lat);
    j["face_separation"]["relation"] = f.relation ? "file" : "induced by A";
    text += std::string("face separation: ") + verdict(r.holds);
    if (!r.reason.empty()) text += " (" + r.reason + ")";
    text += "\n";
  }
  if (all || o.which == "critical") {
    std::size_t fbar = base_face(inst.c, lat, inst.base_point);
    ConeFaces k(localize(inst.c, lat, fbar));
    auto r = check_critical_face(inst.a, k);
    pass = pass && r.holds;
    j["critical_face"] = to_json(r, k.lattice);
    j["critical_face"]["base_face"] = lat.faces[fbar].active_set;
    text += std::string("critical face on T(C,F) for F = ") + key(lat.faces[fbar].active_set) + ": " + verdict(r.holds);
    if (r.witness) text += " witness z = " + to_string(*r.witness);
    text += "\n";
  }
  j["pass"] = pass;
  emit(o, j, text);
  return pass ? kPass : kFail;
}

int cmd_solve(const Options& o) {
  if (o.z.empty()) throw UsageError("--z is required");
  InstanceFile f = read_instance(o);
  AVIInstance inst = load_instance(f);
  RatVector z = parse_vector_list(o.z);
  auto pieces = solve_all(inst, z);
  Json j = Json::array();
  std::string text = std::to_string(pieces.size()) + " solution piece(s)\n";
  for (const auto& p : pieces) {
    j.push_back(to_json(p));
    text += "face " + key(p.face_active_set) + " x = " + to_string(p.witness) + (p.single_point ? "\n" : " (positive-dimensional piece)\n");
  }
  emit(o, j, text);
  return kPass;
}

int cmd_modulus(const Options& o) {
  InstanceFile f = read_instance(o);
  AVIInstance inst = load_instance(f);
  std::size_t fbar = base_face(inst.c, inst.lattice, inst.base_point);
  ModulusQuery q = canonical_modulus_query(inst.a, localize(inst.c, inst.lattice, fbar));
  ModulusOptions opt;
  if (o.samples) opt.samples_per_pair = *o.samples;
  if (o.seed) opt.seed = *o.seed;
  ModulusResult m = surjection_modulus(q, opt);
  Json j = to_json(m, q.k.lattice);
  j["base_face"] = inst.lattice.faces[fbar].active_set;
  j["norm"] = "euclidean";
  j["samples_per_pair"] = opt.samples_per_pair;
  j["tolerance"] = opt.tolerance;
  std::ostringstream text;
  text << "surjection modulus on T(C,F) for F = " << key(inst.lattice.faces[fbar].active_set) << ": "
       << (m.positive ? "positive" : "zero") << "\n";
  if (m.positive) text << "  bounds [" << m.lower << ", " << m.upper << "]" << pair_text(q.k.lattice, m.argmin) << "\n";
  else text << "  vanishes" << pair_text(q.k.lattice, m.argmin) << "\n";
  emit(o, j, text.str());
  return m.positive ? kPass : kFail;
}

int cmd_audit(const Options& o) {
  const std::size_t samples = o.samples.value_or(100);
  if (!o.file.empty()) {
    InstanceFile f = read_instance(o);
    AVIInstance inst = load_instance(f);
    RegularityReport r = equivalence_audit(inst, {samples, o.seed.value_or(0)});
    Json j = audit_report_json(inst, r);
    std::string text = std::string("coherent orientation ") + verdict(r.coherent.coherent) + ", face separation " +
                       verdict(r.separation.holds) + ", critical face " + verdict(r.critical_k.holds) + ", modulus " +
                       (r.modulus_k.positive ? "positive" : "zero") + ", stress " + (r.stress.single_valued ? "single-valued" : "not single-valued") + "\n";
    if (auto z = r.stress.counterexample()) text += "  solver witness z = " + to_string(*z) + "\n";
    for (const auto& msg : r.inconsistencies) text += "  INCONSISTENT: " + msg + "\n";
    text += r.consistent() ? "consistent\n" : "inconsistent\n";
    emit(o, j, text);
    return r.consistent() ? kPass : kFail;
  }
  const std::uint64_t seed = o.seed.value_or(42);
  auto entries = audit_sweep(seed, o.count, samples);
  Json j = sweep_json(seed, samples, entries);
  std::ostringstream text;
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (const auto& msg : entries[i].report.inconsistencies)
      text << "instance " << i << " (" << family_name(entries[i].config.family) << "): " << msg << "\n";
  text << entries.size() << " instances, " << j["regular"].get<std::size_t>() << " regular, "
       << j["irregular"].get<std::size_t>() << " irregular, " << j["unwitnessed_irregularity"].get<std::size_t>()
       << " irregular without solver witness, " << j["inconsistent"].get<std::size_t>() << " inconsistent\n";
  emit(o, j, text.str());
  return j["inconsistent"].get<std::size_t>() == 0 ? kPass : kFail;
}

int cmd_generate(const Options& o) {
  GeneratorConfig cfg;
  cfg.seed = o.seed.value_or(0);
  cfg.n = o.n;
  cfg.k = o.k;
  cfg.entry_bound = o.entry_bound;
  cfg.family = parse_family(o.family);
  GeneratedInstance g = generate_instance(cfg);
  std::cout << to_json(InstanceFile{g.a, g.c, std::nullopt, std::nullopt}).dump(2) << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyreg: regularity of affine variational inequalities over polyhedra"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--file", o.file, "instance JSON");
    sub->add_flag("--json", o.json, "machine-readable output");
  };
  auto* faces = app.add_subcommand("faces", "list the face lattice of C");
  add_common(faces);
  auto* check = app.add_subcommand("check", "coherent orientation, face separation, critical face");
  add_common(check);
  check->add_option("--which", o.which, "coherent|separation|critical|all");
  auto* solve = app.add_subcommand("solve", "all solutions of z ∈ Ax + N(C,x)");
  add_common(solve);
  solve->add_option("--z", o.z, "right-hand side, comma separated rationals");
  auto* modulus = app.add_subcommand("modulus", "surjection modulus at the base face");
  add_common(modulus);
  modulus->add_option("--samples", o.samples, "sampled directions per face pair");
  modulus->add_option("--seed", o.seed, "sampling seed");
  auto* audit = app.add_subcommand("audit", "cross-check all certificates against the solver");
  add_common(audit);
  audit->add_option("--samples", o.samples, "minimum stress samples per instance");
  audit->add_option("--seed", o.seed, "sweep seed (default 42)");
  audit->add_option("--count", o.count, "number of generated instances when no --file is given");
  auto* generate = app.add_subcommand("generate", "write a seeded random instance");
  generate->add_option("--seed", o.seed, "generator seed");
  generate->add_option("--family", o.family, "orthant|box|random_cone|random_polyhedron|p_matrix|identity_perturbation|negated_diagonal|singular|lower_dimensional");
  generate->add_option("--n", o.n, "dimension");
  generate->add_option("--k", o.k, "inequality count");
  generate->add_option("--entry-bound", o.entry_bound, "bound on integer entries");
  generate->add_flag("--json", o.json, "accepted for symmetry; output is always JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*faces) return cmd_faces(o);
    if (*check) return cmd_check(o);
    if (*solve) return cmd_solve(o);
    if (*modulus) return cmd_modulus(o);
    if (*audit) return cmd_audit(o);
    if (*generate) return cmd_generate(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const EmptySetError& e) {
    std::cerr << "error: C is empty\n";
    return kUsage;
  } catch (const NotInSetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MalformedRelationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

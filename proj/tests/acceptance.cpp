// One line per acceptance criterion; exit status 0 iff every criterion passes.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "polyreg/audit.hpp"

using namespace polyreg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title;
  if (!o.detail.empty()) std::cout << "  [" << o.detail << "]";
  std::cout << std::endl;
  failures += !o.pass;
}

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int bound) {
  RatMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<long>(rng() % (2 * bound + 1)) - bound;
  return a;
}

constexpr std::uint64_t kSweepSeed = 42;
constexpr std::size_t kSweepCount = 200;
constexpr std::size_t kStressSamples = 100;

Outcome face_lattice_oracle() {
  std::mt19937_64 rng(1001);
  Outcome o;
  std::size_t faces = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + t % 3;
    std::size_t k = std::min<std::size_t>(6, n + 1 + t % 4);
    HPolyhedron c = oracle::random_polyhedron(rng, n, k);
    FaceLattice lat = enumerate_faces(c);
    auto brute = oracle::brute_force_faces(c);
    bool same = brute.size() == lat.size();
    for (std::size_t i = 0; same && i < brute.size(); ++i)
      same = brute[i].key == lat.faces[i].active_set && brute[i].dim == lat.faces[i].dim;
    for (std::size_t a = 0; same && a < brute.size(); ++a)
      for (std::size_t b = 0; same && b < brute.size(); ++b)
        same = lat.contained[a][b] == std::includes(brute[a].key.begin(), brute[a].key.end(), brute[b].key.begin(), brute[b].key.end());
    faces += lat.size();
    if (!same) {
      o.pass = false;
      o.detail = "mismatch on polyhedron " + std::to_string(t);
      return o;
    }
  }
  o.detail = "100 polyhedra, " + std::to_string(faces) + " faces";
  return o;
}

Outcome polar_difference_identity() {
  std::mt19937_64 rng(1002);
  std::size_t pairs = 0, bad = 0;
  for (int t = 0; t < 50; ++t) {
    ConeFaces k(oracle::random_cone(rng, 1 + t % 4));
    for (auto [f1, f2] : k.lattice.nested_pairs()) {
      PolyCone lhs = polar_difference(k, f1, f2);
      PolyCone rhs = cone_difference(normal_cone(k.poly, k.lattice.faces[f1]), normal_cone(k.poly, k.lattice.faces[f2]));
      bad += !oracle::lp_cone_equal(lhs, rhs);
      ++pairs;
    }
  }
  return {bad == 0, "50 cones, " + std::to_string(pairs) + " face pairs, " + std::to_string(bad) + " failures"};
}

Outcome coherent_vs_separation(const std::vector<SweepEntry>& sweep) {
  std::size_t disagree = 0, regular = 0;
  for (const auto& e : sweep) {
    disagree += e.report.coherent.coherent != e.report.separation.holds;
    regular += e.report.coherent.coherent;
  }
  return {disagree == 0 && regular > 0 && regular < sweep.size(),
          std::to_string(sweep.size()) + " instances, " + std::to_string(regular) + " regular, " +
              std::to_string(sweep.size() - regular) + " irregular, " + std::to_string(disagree) + " disagreements"};
}

Outcome lcp_minors() {
  std::mt19937_64 rng(1004);
  std::size_t disagree = 0, p = 0, total = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    HPolyhedron c = HPolyhedron::orthant(n);
    FaceLattice lat = enumerate_faces(c);
    for (int t = 0; t < 60; ++t) {
      RatMatrix a;
      if (t % 3 == 0) {
        GeneratorConfig cfg;
        cfg.seed = 5000 + n * 100 + t;
        cfg.n = n;
        cfg.family = Family::PMatrix;
        a = generate_instance(cfg).a;
      } else {
        a = random_matrix(rng, n, 3);
      }
      bool minors = oracle::is_p_matrix(a);
      disagree += check_coherent_orientation(a, c, lat).coherent != minors;
      p += minors;
      ++total;
    }
  }
  return {disagree == 0 && p > 0 && p < total, std::to_string(total) + " matrices, " + std::to_string(p) + " P-matrices, " +
                                                   std::to_string(disagree) + " disagreements"};
}

Outcome behavioral(const std::vector<SweepEntry>& sweep) {
  std::size_t regular = 0, regular_bad = 0, irregular = 0, witnessed = 0, min_samples = SIZE_MAX;
  std::string unwitnessed;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& r = sweep[i].report;
    min_samples = std::min(min_samples, r.stress.samples);
    if (r.coherent.coherent) {
      ++regular;
      regular_bad += !r.stress.single_valued;
    } else {
      ++irregular;
      if (!r.stress.single_valued)
        ++witnessed;
      else
        unwitnessed += (unwitnessed.empty() ? "" : ",") + std::to_string(i);
    }
  }
  bool ok = regular_bad == 0 && min_samples >= kStressSamples && irregular > 0 && witnessed * 100 >= 95 * irregular;
  std::string d = std::to_string(regular) + " regular with " + std::to_string(regular_bad) + " non-single-valued; " +
                  std::to_string(witnessed) + "/" + std::to_string(irregular) + " irregular witnessed; >= " +
                  std::to_string(min_samples) + " z per instance";
  if (!unwitnessed.empty()) d += "; unwitnessed instances " + unwitnessed;
  return {ok, d};
}

Outcome cone_separation(const std::vector<SweepEntry>& sweep) {
  std::size_t regular = 0, bad = 0;
  for (const auto& e : sweep) {
    if (!e.report.coherent.coherent) continue;
    ++regular;
    AVIInstance inst(e.instance.a, e.instance.c);
    // every tangential extension pair of x ↦ Ax + N(C,x), checked again from scratch
    for (std::size_t f = 0; f < inst.lattice.size(); ++f) {
      PolyCone k = linear_image(inst.a, tangent_cone(inst.c, inst.lattice.faces[f]));
      bad += !cone_intersect(k, normal_cone(inst.c, inst.lattice.faces[f])).is_zero_cone();
    }
    bad += !e.report.cone_separation.holds;
  }
  return {bad == 0 && regular > 0, std::to_string(regular) + " regular instances, " + std::to_string(bad) + " failures"};
}

ModulusOptions acceptance_modulus() {
  ModulusOptions opt;
  opt.samples_per_pair = 1000;
  opt.descent_steps = 100;
  return opt;
}

Outcome modulus_identity() {
  std::mt19937_64 rng(1007);
  Outcome o;
  double worst_gap = 0;
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 4;
    auto q = canonical_modulus_query(RatMatrix::identity(n), oracle::random_cone(rng, n, 4));
    auto m = surjection_modulus(q, acceptance_modulus());
    worst_gap = std::max(worst_gap, m.upper - m.lower);
    if (!m.positive || m.lower > 1.0 || m.upper < 1.0 || m.upper - m.lower > 1e-6) {
      o.pass = false;
      o.detail = "identity cone " + std::to_string(t) + " bounds [" + std::to_string(m.lower) + ", " + std::to_string(m.upper) + "]";
      return o;
    }
  }
  const Rational scales[] = {Rational(2), Rational(1, 3), Rational(7, 4)};
  std::mt19937_64 rng2(1077);
  for (const auto& c : scales) {
    std::size_t n = 2;
    RatMatrix t = c * RatMatrix::identity(n);
    auto q = canonical_modulus_query(t, oracle::random_cone(rng2, n, 3));
    auto m = surjection_modulus(q, acceptance_modulus());
    double cd = to_double(c);
    if (!m.positive || m.lower > cd || m.upper < cd || m.upper - m.lower > 1e-6) {
      o.pass = false;
      o.detail = "T = " + to_string(c) + " I bounds [" + std::to_string(m.lower) + ", " + std::to_string(m.upper) + "]";
      return o;
    }
  }
  std::ostringstream d;
  d << "20 cones with T = S = I, max gap " << worst_gap << "; T = cI for c in {2, 1/3, 7/4} bracket c";
  o.detail = d.str();
  return o;
}

Outcome modulus_vs_lipschitz(const std::vector<SweepEntry>& sweep) {
  std::size_t checked = 0, bad = 0, disagree = 0;
  double worst = 0;
  for (const auto& e : sweep) {
    const auto& r = e.report;
    disagree += r.modulus_k.positive != r.critical_k.holds;
    if (!r.coherent.coherent) continue;
    AVIInstance inst(e.instance.a, e.instance.c);
    PolyCone k = localize(inst.c, inst.lattice, r.base_face);
    AVIInstance cone_inst(inst.a, HPolyhedron::from_cone(k));
    auto m = surjection_modulus(canonical_modulus_query(inst.a, k), acceptance_modulus());
    disagree += m.positive != r.critical_k.holds;
    auto samples = stress_samples(cone_inst, kStressSamples, e.config.seed);
    std::vector<std::pair<RatVector, RatVector>> pairs;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) pairs.emplace_back(samples[i], samples[i + 1]);
    for (std::size_t i = 0; i + 7 < samples.size(); i += 7) pairs.emplace_back(samples[i], samples[i + 7]);
    double lip = std::sqrt(to_double(lipschitz_estimate(cone_inst, pairs)));
    ++checked;
    if (std::isinf(m.lower)) {
      bad += lip != 0;
      continue;
    }
    worst = std::max(worst, lip * m.lower);
    bad += !(m.lower > 0) || lip > 1.10 / m.lower;
  }
  std::ostringstream d;
  d << checked << " regular instances, max lip * lower = " << worst << ", " << bad << " violations, " << disagree
    << " positivity/critical-face disagreements over " << sweep.size() << " instances";
  return {bad == 0 && disagree == 0 && checked >= 50, d.str()};
}

Outcome projection_contract() {
  std::mt19937_64 rng(1009);
  std::size_t bad = 0;
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 4;
    HPolyhedron c = oracle::random_polyhedron(rng, n, n + 1 + t % 4);
    Projector proj(c);
    for (int s = 0; s < 200; ++s) {
      RatVector z = oracle::random_int_vector(rng, n, 6), w = oracle::random_int_vector(rng, n, 6);
      if (s % 4 == 0) z = Rational(1, 3) * z;
      RatVector pz = proj(z), pw = proj(w);
      bad += proj(pz) != pz;
      bad += !c.contains(pz) || !oracle::in_conic_hull(c.normals(c.active_set(pz)), z - pz);
      bad += squared_norm(pz - pw) > squared_norm(z - w);
    }
  }
  return {bad == 0, "20 sets, 200 pairs each, " + std::to_string(bad) + " failures"};
}

bool same_piece_scaled(const SolutionPiece& base, const SolutionPiece& scaled, const Rational& lam) {
  if (base.face_active_set != scaled.face_active_set || base.single_point != scaled.single_point) return false;
  if (base.single_point) return scaled.witness == lam * base.witness;
  auto gb = polyhedron_generators(base.piece), gs = polyhedron_generators(scaled.piece);
  for (const auto& p : gb.points)
    if (!scaled.piece.contains(lam * p)) return false;
  for (const auto& p : gs.points)
    if (!base.piece.contains((1 / lam) * p)) return false;
  return true;
}

Outcome homogeneity() {
  std::mt19937_64 rng(1010);
  const Rational lambdas[] = {Rational(1, 5), Rational(2, 3), Rational(3, 2), Rational(4), Rational(19, 7)};
  std::size_t checks = 0, bad = 0;
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 3;
    AVIInstance inst(random_matrix(rng, n, 2), HPolyhedron::from_cone(oracle::random_cone(rng, n)));
    AviSolver solver(inst);
    for (const auto& z : stress_samples(inst, 20, t)) {
      auto base = solver.solve_all(z);
      for (const auto& lam : lambdas) {
        auto scaled = solver.solve_all(lam * z);
        bool ok = scaled.size() == base.size();
        for (std::size_t i = 0; ok && i < base.size(); ++i) ok = same_piece_scaled(base[i], scaled[i], lam);
        bad += !ok;
        ++checks;
      }
    }
  }
  return {bad == 0, std::to_string(checks) + " (z, λ) checks on 20 cone instances, " + std::to_string(bad) + " failures"};
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

Outcome determinism() {
  const std::string cmd = std::string("\"") + POLYREG_CLI + "\" audit --count 40 --seed 7 --json";
  int s1 = 0, s2 = 0;
  std::string a = run_capture(cmd, s1), b = run_capture(cmd, s2);
  bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  return {ok, "two runs of `polyreg audit --count 40 --seed 7 --json`: " + std::to_string(a.size()) + " bytes, " +
                  (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  report(1, "face lattice equals brute-force 2^k enumeration", face_lattice_oracle());
  report(2, "(F2-F1)° = N(K,F1) - N(K,F2) on random cones", polar_difference_identity());
  std::cout << "running the audit sweep (seed " << kSweepSeed << ", " << kSweepCount << " instances)..." << std::endl;
  auto sweep = audit_sweep(kSweepSeed, kSweepCount, kStressSamples);
  std::size_t inconsistent = 0;
  for (const auto& e : sweep) inconsistent += !e.report.consistent();
  std::cout << "  sweep inconsistencies: " << inconsistent << std::endl;
  report(3, "coherent orientation equals face separation", coherent_vs_separation(sweep));
  report(4, "orthant: coherent orientation iff all principal minors positive", lcp_minors());
  report(5, "solver single-valued on regular instances, witnesses on irregular ones", behavioral(sweep));
  report(6, "K ∩ H = {0} on every regular instance", cone_separation(sweep));
  report(7, "modulus brackets 1 for T = S = I and c for T = cI", modulus_identity());
  report(8, "empirical Lipschitz constant within 1.10 / lower modulus bound", modulus_vs_lipschitz(sweep));
  report(9, "projection idempotent, variational, nonexpansive", projection_contract());
  report(10, "S(λz) = λS(z) on cone instances", homogeneity());
  report(11, "audit JSON byte-identical across runs", determinism());
  if (inconsistent) {
    std::cout << "audit sweep reported " << inconsistent << " inconsistent instances" << std::endl;
    ++failures;
  }
  std::cout << (failures == 0 ? "all acceptance criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

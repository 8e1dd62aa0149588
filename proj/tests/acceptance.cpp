// Acceptance run: one PASS/FAIL line per criterion, each with a pinned time limit.
//
//   acceptance                 exit 0 iff every criterion passes
//   acceptance --expect-fail 5 exit 0 iff the failing set is exactly {5}
//
// Criterion 5 is registered with --expect-fail 5; see the README for the analysis.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "extcat/extcat.hpp"
#include "support.hpp"

using namespace extcat;
using namespace extcat::groth;
using testsupport::names;

namespace {

using Clock = std::chrono::steady_clock;
using S = std::set<std::string>;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Outcome&)> body;
};

std::vector<std::string> formatted(const CategoryModel& m, const std::vector<Obj>& xs) {
  return testsupport::formatted(m, xs);
}

std::vector<long long> counts(const std::vector<IndecIndex>& factors, const std::vector<IndecIndex>& phi) {
  std::vector<long long> c(phi.size(), 0);
  for (IndecIndex x : factors) ++c[strat::phi_position(phi, x)];
  return c;
}

std::string vec_str(const std::vector<long long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

ObjSet closure_indecs(const strat::Closure& c) {
  ObjSet out;
  for (IndecIndex i : c.indecs) out.insert(Obj::indec(i));
  return out;
}

void ex51(Outcome& o) {
  auto fx = fixtures::load("ex5_1");
  const CategoryModel& m = fx.ambient;
  const auto phi = fx.phi_indices();
  const strat::Closure c = strat::filtered_closure(phi, m);
  o.require(names(m, c.indecs) == S{"S2", "P3", "S3[1]", "P2"}, "filtered closure");
  const strat::StratSystem built = strat::build_projective_system(phi, m);
  o.require(formatted(m, *built.q) == std::vector<std::string>{"P2", "P3", "S3[1]"}, "Q");
  const auto le = strat::check_left_exact(fx.stated_system(), m);
  o.require(le.left_exact == std::vector<bool>(3, true), "left exactness");
  const JhVerdict jh = jh_and_length_verdict(fx.analysed().model);
  o.require(jh.jh == Tri::yes && jh.length == Tri::yes, "JH/length verdict");
  auto q = testsupport::find_extriangle(m, "P3", "P2", "S2");
  o.require(q.has_value(), "deflation P2 -> S2 listed");
  if (q) {
    const ObjSet fphi = closure_indecs(c);
    const EpiResult e = m.is_epi(*q, &fphi);
    o.require(!e.epi && e.witness, "P2 -> S2 is not epi in F(Phi)");
    if (e.witness) o.notes.push_back("epi witness " + m.name(*e.witness));
  }
}

void ex52(Outcome& o) {
  auto fx = fixtures::load("ex5_2");
  const CategoryModel& m = fx.ambient;
  const auto phi = fx.phi_indices();
  o.require(names(m, strat::filtered_closure(phi, m).indecs) == S{"P2[1]", "S2", "P3", "P2", "P3[1]"},
            "filtered closure");
  const strat::StratSystem stated = fx.stated_system();
  o.require(formatted(m, *stated.q) == std::vector<std::string>{"0", "P2", "P3"}, "stated Q");
  const strat::ProjectiveVerdict pv = strat::check_projective_system(stated, m);
  o.require(pv.ps1 && pv.ps2 && pv.qn_iso && pv.all_minimal(), "Q accepted as minimal projective");
  const Submodel sub = fx.analysed();
  const ZeroSimpleLike z = zero_simple_like(sub.model);
  o.require(!z.value, "zero simple-like is false");
  o.require(z.witness && sub.model.format(*z.witness) == "(P3, 0, P3[1])", "zero-middled witness");
  const JhVerdict jh = jh_and_length_verdict(sub.model);
  o.require(jh.jh == Tri::no && jh.length == Tri::no, "JH/length verdict");
  const auto le = strat::check_left_exact(stated, m);
  o.require(!le.left_exact.at(2), "not left exact at i = 3");
}

void ex53(Outcome& o) {
  auto fx = fixtures::load("ex5_3");
  const CategoryModel& m = fx.ambient;
  const auto phi = fx.phi_indices();
  const strat::Closure c = strat::filtered_closure(phi, m);
  o.require(names(m, c.indecs) == S{"N[1]", "S2", "P3", "P2", "S3[1]"}, "filtered closure");
  const strat::StratSystem built = strat::build_projective_system(phi, m);
  o.require(formatted(m, *built.q) == std::vector<std::string>{"S3[1]", "P2", "P3"}, "Q");
  const auto le = strat::check_left_exact(fx.stated_system(), m);
  o.require(le.left_exact == std::vector<bool>{true, false, true}, "left exactness (t,f,t)");
  const JhVerdict jh = jh_and_length_verdict(fx.analysed().model);
  o.require(jh.jh == Tri::yes, "JH verdict");
  const Extriangle& eta1 = built.etas->at(0);
  const Extriangle& eta2 = built.etas->at(1);
  // k_1 : K_1 -> Q_1 starts at the third term of q_2.
  o.require(eta1.a_end == eta2.c_end, "K_1 = Phi_2");
  const ObjSet fphi = closure_indecs(c);
  const EpiResult e = m.is_epi(eta2, &fphi);
  o.require(!e.epi, "q_2 is not epi");
  o.require(e.witness && Obj::indec(*e.witness) == eta1.mid, "witness is the target of k_1");
  if (e.witness) o.notes.push_back("epi witness " + m.name(*e.witness));
}

void thm_c(Outcome& o) {
  for (const auto& name : fixtures::names()) {
    auto fx = fixtures::load(name);
    const ThmC t = thmC_crosscheck(fx.analysed().model);
    o.require(t.agree, name + " verdicts disagree");
    o.notes.push_back(name + " " + to_string(t.verdict_i));
  }
}

// Multiplicities against factor counts of every filtration of every object of
// F(Phi) with each indecomposable at most twice. Filtrations are compared
// through their factor-count vectors; the length of a filtration is the sum.
void jhp(Outcome& o) {
  std::size_t objects = 0, profiles = 0;
  for (const char* name : {"ex5_1", "ex5_3"}) {
    auto fx = fixtures::load(name);
    const CategoryModel& m = fx.ambient;
    const auto phi = fx.phi_indices();
    const strat::StratSystem sys = fx.stated_system();
    const strat::Closure closure = strat::filtered_closure(phi, m);
    const auto& ind = closure.indecs;
    Obj largest;
    for (IndecIndex i : ind) largest.add(i, 2);
    // One engine whose predecessor pool covers every object's own pool.
    FiltrationEngine eng = strat::filtration_engine(m, phi, closure, largest);
    std::size_t bad = 0;
    std::string first;
    for (const Obj& local : enumerate_objects(ind.size(), 2, 2 * static_cast<unsigned>(ind.size()))) {
      Obj x;
      local.for_each([&](IndecIndex i, unsigned k) { x.add(ind[i], k); });
      ++objects;
      const auto mult = strat::multiplicities(x, sys, m);
      const FiltrationProfiles fp = eng.profiles(x, strat::default_cap(x));
      profiles += fp.counts.size();
      bool ok = !fp.truncated && !fp.counts.empty();
      std::string why = fp.truncated ? "truncated" : "no filtration";
      for (const auto& c : fp.counts) {
        const std::vector<long long> cl(c.begin(), c.end());
        if (cl != mult) {
          ok = false;
          why = "m = " + vec_str(mult) + ", factors " + vec_str(cl);
        }
      }
      if (fp.lengths().size() > 1) {
        ok = false;
        why = "filtrations of different lengths";
      }
      if (!ok && bad++ == 0) first = m.format(x) + ": " + why;
    }
    o.require(bad == 0, std::string(name) + ": " + std::to_string(bad) + " objects disagree, first " + first);
  }
  o.notes.push_back(std::to_string(objects) + " objects, " + std::to_string(profiles) + " factor profiles");
}

void backend_oracle(Outcome& o) {
  const CategoryModel m2 = fixtures::win4(2), m3 = fixtures::win4(3);
  o.require(m2.size() == 17 && m3.size() == 17, "WIN4 has 17 indecomposables");
  std::size_t diffs = 0;
  for (std::size_t i = 0; i < m2.size(); ++i)
    for (std::size_t j = 0; j < m2.size(); ++j) {
      const IndecIndex x = static_cast<IndecIndex>(i), y = static_cast<IndecIndex>(j);
      if (m2.hom_dim(x, y) != m3.hom_dim(x, y) || m2.ext_dim(x, y) != m3.ext_dim(x, y)) ++diffs;
    }
  o.require(diffs == 0, std::to_string(diffs) + " table entries differ between p = 2 and p = 3");

  // Meshes are rebuilt from interval combinatorics: the middle term of the
  // triangle ending in [a,b] collects its immediate predecessors.
  for (const CategoryModel* m : {&m2, &m3}) {
    auto b = testsupport::derived_of(*m);
    const int n = b->n();
    auto preds = [&](const derived::Interval& c) {
      std::vector<derived::Interval> out;
      if (c.a < c.b) out.push_back({c.a + 1, c.b, c.shift});
      if (c.b < n) out.push_back({c.a, c.b + 1, c.shift});
      if (c.b == n && c.a > 1) out.push_back({1, c.a - 1, c.shift - 1});
      return out;
    };
    std::size_t meshes = 0, missing = 0;
    for (std::size_t i = 0; i < m->size(); ++i) {
      const derived::Interval c = b->interval(static_cast<IndecIndex>(i));
      auto t = b->find(derived::tau(c, n));
      if (!t) continue;
      Obj mid;
      bool inside = true;
      for (const auto& p : preds(c)) {
        if (auto j = b->find(p)) mid.add(*j);
        else inside = false;
      }
      if (!inside) continue;
      ++meshes;
      bool found = false;
      for (const auto& xi : m->middle_terms(Obj::indec(static_cast<IndecIndex>(i)), Obj::indec(*t)))
        if (!xi.is_split() && xi.mid == mid) found = true;
      if (!found) ++missing;
    }
    o.require(missing == 0, std::to_string(missing) + " meshes not recovered at p = " +
                                std::to_string(m->meta().field_characteristic));
    o.require(meshes >= 9, "fewer meshes than expected");
    if (m == &m2) o.notes.push_back(std::to_string(meshes) + " meshes");
  }
}

void k0_numerics(Outcome& o) {
  const CategoryModel w = fixtures::win4();
  const K0Result kw = k0(monoid_presentation(w), simples(w, {}, true));
  o.require(kw.free_rank == 4, "K0(WIN4) free rank " + std::to_string(kw.free_rank));
  o.require(kw.invariant_factors.empty(), "K0(WIN4) has torsion");
  const CategoryModel e1 = fixtures::load("ex5_1").analysed().model;
  const K0Result k1 = k0(monoid_presentation(e1), simples(e1));
  o.require(k1.free_rank == 3, "K0(F(Phi)) free rank " + std::to_string(k1.free_rank));
  o.require(k1.invariant_factors.empty() && k1.basis_flag, "simple images form a basis");
}

void properties(Outcome& o) {
  for (const auto& name : fixtures::names()) {
    auto fx = fixtures::load(name);
    o.require(validate_model(fx.ambient).ok(), name + " fails validation");
    if (fx.has_system()) o.require(validate_model(fx.analysed().model).ok(), name + " F(Phi) fails validation");
  }

  std::size_t triples = 0;
  for (const CategoryModel& m : {fixtures::win4(), fixtures::modA4()}) {
    const auto ind = indec_objects(m);
    for (const Obj& x : ind)
      for (const Obj& y : ind)
        for (const Obj& z : ind) {
          try {
            const bool eq = star(star({x}, {y}, m), {z}, m) == star({x}, star({y}, {z}, m), m);
            o.require(eq, "star not associative at " + m.format(x) + ", " + m.format(y) + ", " + m.format(z));
            ++triples;
          } catch (const WindowOverflow&) {
          }
        }
  }
  o.notes.push_back(std::to_string(triples) + " star triples");

  for (const CategoryModel& m : {fixtures::win4(), fixtures::modA2(), fixtures::modA4(), fixtures::zero_model()})
    o.require(table::object_level_equal(opposite(opposite(m)), m, 1), m.meta().window_label + " op op differs");

  for (const char* name : {"ex5_1", "ex5_3"}) {
    auto fx = fixtures::load(name);
    const CategoryModel& m = fx.ambient;
    const auto phi = fx.phi_indices();
    const auto ind = strat::filtered_closure(phi, m).indecs;
    for (const Obj& local : enumerate_objects(ind.size(), 3, 3)) {
      Obj x;
      local.for_each([&](IndecIndex i, unsigned k) { x.add(ind[i], k); });
      for (const auto& f : strat::enumerate_filtrations(x, phi, m).filtrations) {
        const Filtration r = strat::reorder_filtration(f, phi, m);
        std::vector<std::size_t> pos;
        for (IndecIndex y : r.factors) pos.push_back(strat::phi_position(phi, y));
        o.require(r.target() == f.target() && r.length() == f.length() &&
                      counts(r.factors, phi) == counts(f.factors, phi) && std::is_sorted(pos.rbegin(), pos.rend()),
                  std::string(name) + ": reorder of a filtration of " + m.format(x));
      }
    }
  }

  // Atoms and length-one objects are compared only where 0 is simple-like.
  for (const auto& name : fixtures::names()) {
    const CategoryModel m = fixtures::load(name).analysed().model;
    if (!zero_simple_like(m).value) continue;
    const auto simple = simples(m);
    try {
      check_atoms_match_simples(monoid_presentation(m), simple);
    } catch (const ConsistencyError&) {
      o.require(false, name + ": atoms differ from simples");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      const IndecIndex x = static_cast<IndecIndex>(i);
      const bool is_simple = std::find(simple.begin(), simple.end(), x) != simple.end();
      const SeriesVerdict v = composition_series(Obj::indec(x), m, simple);
      const bool length_one = v.has_series && !v.truncated && v.lengths == std::set<unsigned>{1};
      o.require(is_simple == length_one, name + ": " + m.name(x) + " simple/length-one mismatch");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria expected to fail");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "ex5_1 reproduction", 1.0, ex51},
      {2, "ex5_2 reproduction", 1.0, ex52},
      {3, "ex5_3 reproduction", 1.0, ex53},
      {4, "JH, monoid and K0 verdicts agree on the bundled fixtures", 10.0, thm_c},
      {5, "multiplicities against filtrations on ex5_1 and ex5_3", 5.0, jhp},
      {6, "WIN4 tables at p = 2, 3 and AR meshes", 5.0, backend_oracle},
      {7, "K0 numerics", 1.0, k0_numerics},
      {8, "structural property suites", 10.0, properties},
  };

  std::set<int> failed;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.require(secs < c.limit_s, "over the time limit");
    if (!o.pass) failed.insert(c.id);
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " [" << secs << "s < " << c.limit_s
         << "s] " << c.title;
    for (const auto& n : o.notes) line << "; " << n;
    std::cout << line.str() << "\n";
  }
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (failed != expected) {
    std::cout << "unexpected outcome: " << failed.size() << " failing, " << expected.size() << " expected to fail\n";
    return 1;
  }
  return 0;
}

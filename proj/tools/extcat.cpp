// extcat: build or load a category window and run the analyses on it.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "extcat/extcat.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace extcat;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kValidation = 3, kAnnotation = 4, kConsistency = 5 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string fixture;
  std::string file;
  std::string mode;
  std::string build;
  unsigned p = 2;
  bool ambient = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "n=4", "n=4,lo=0,hi=1"
CategoryModel build_from(const std::string& spec, unsigned p) {
  int n = 0, lo = 0, hi = 0;
  std::string label;
  for (const auto& kv : split(spec, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--build expects key=value pairs, got '" + kv + "'");
    const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    try {
      if (k == "n") {
        n = std::stoi(v);
      } else if (k == "lo") {
        lo = std::stoi(v);
      } else if (k == "hi") {
        hi = std::stoi(v);
      } else if (k == "label") {
        label = v;
      } else {
        throw ConfigError("unknown --build key '" + k + "'");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad --build value '" + kv + "'");
    }
  }
  if (n < 1 || hi < lo) throw ConfigError("--build needs n >= 1 and lo <= hi");
  return derived::build_window(n, lo, hi, label, p);
}

fixtures::Fixture resolve(const Source& s) {
  const int given = !s.fixture.empty() + !s.file.empty() + !s.build.empty();
  if (given != 1) throw ConfigError("give exactly one of --fixture, --file, --build");
  if (!s.fixture.empty()) {
    const auto& ns = fixtures::names();
    if (std::find(ns.begin(), ns.end(), s.fixture) == ns.end())
      throw ConfigError("unknown fixture '" + s.fixture + "'");
    fixtures::Fixture fx = fixtures::load(s.fixture, s.p);
    if (s.ambient) fx.phi.clear();
    return fx;
  }
  if (!s.file.empty()) {
    table::LoadOptions opt;
    if (s.mode == "exact") opt.mode = table::Mode::exact;
    if (s.mode == "general") opt.mode = table::Mode::general;
    return {s.file, table::load_model(s.file, opt), {}, {}, {}};
  }
  return {"build", build_from(s.build, s.p), {}, {}, {}};
}

void add_source(CLI::App* app, Source& s) {
  app->add_option("--fixture", s.fixture, "bundled model: ex5_1, ex5_2, ex5_3, win4, modA2, modA4");
  app->add_option("--file", s.file, "interchange file to load");
  app->add_option("--mode", s.mode, "override the file's mode")->check(CLI::IsMember({"general", "exact"}));
  app->add_option("--build", s.build, "derived window of kA_n, e.g. n=4,lo=0,hi=1");
  app->add_flag("--ambient", s.ambient, "analyse the whole window instead of F(Phi)");
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::vector<IndecIndex> phi_from(const fixtures::Fixture& fx, const std::string& text) {
  if (!text.empty()) return strat::parse_phi(fx.ambient, split(text, ','));
  if (!fx.has_system()) throw ConfigError("no Phi: pass --phi");
  return fx.phi_indices();
}

std::string strip_key(const std::string& s, const std::string& key) {
  return s.rfind(key + "=", 0) == 0 ? s.substr(key.size() + 1) : s;
}

struct ModelArgs {
  std::string out, dot, highlight;
  unsigned record_bound = 1;
  std::string json_out;
};

int cmd_model(const Source& src, const ModelArgs& a) {
  fixtures::Fixture fx = resolve(src);
  const CategoryModel& m = fx.ambient;
  ValidationReport rep = validate_model(m);
  std::set<IndecIndex> hl;
  if (!a.highlight.empty()) {
    if (a.highlight == "filtered") {
      if (!fx.has_system()) throw ConfigError("--highlight filtered needs a model with Phi");
      for (IndecIndex i : strat::filtered_closure(fx.phi_indices(), m).indecs) hl.insert(i);
    } else if (a.highlight == "phi") {
      if (!fx.has_system()) throw ConfigError("--highlight phi needs a model with Phi");
      for (IndecIndex i : fx.phi_indices()) hl.insert(i);
    } else {
      for (const auto& nm : split(a.highlight, ',')) hl.insert(m.index_of(nm));
    }
  }
  if (!a.out.empty()) table::save_model(m, a.out, a.record_bound);
  if (!a.dot.empty()) write_text(a.dot, report::dot(m, hl));
  json j;
  j["model"] = m.meta().window_label;
  j["mode"] = m.meta().exact_mode ? "exact" : "general";
  j["field_characteristic"] = m.meta().field_characteristic;
  json ind = json::array();
  for (const auto& id : m.indecs()) ind.push_back(id.name);
  j["indecomposables"] = ind;
  json hj = json::array();
  for (IndecIndex i : hl) hj.push_back(m.name(i));
  j["highlight"] = hj;
  json viol = json::array();
  for (const auto& v : rep.violations) viol.push_back({{"kind", v.kind}, {"detail", v.detail}});
  j["validation"] = {{"ok", rep.ok()}, {"violations", viol}, {"skipped", rep.skipped}};
  json notes = json::array();
  for (const auto& n : m.meta().notes) notes.push_back(n);
  for (const auto& n : fx.notes) notes.push_back(n);
  j["notes"] = notes;
  emit(j, a.json_out);
  return rep.ok() ? kOk : kValidation;
}

struct StratArgs {
  std::string phi;
  bool construct = false;
  std::string check;
  std::vector<std::string> mults;
  std::string json_out;
};

int cmd_strat(const Source& src, const StratArgs& a) {
  fixtures::Fixture fx = resolve(src);
  const CategoryModel& m = fx.ambient;
  std::vector<IndecIndex> phi = phi_from(fx, a.phi);
  json j;
  j["model"] = m.meta().window_label;
  strat::StratVerdict sv = strat::check_stratifying(phi, m);
  j["system"] = {{"phi", report::names_of(m, phi)}};
  j["s1s2"] = report::stratifying(sv);
  if (!sv.pass) {
    j["verdict"] = "not stratifying";
    emit(j, a.json_out);
    return kOk;
  }
  strat::Closure cl = strat::filtered_closure(phi, m);
  j["filtered_closure"] = report::names_of(m, cl.indecs);

  strat::StratSystem sys;
  if (!a.check.empty()) {
    sys.phi = phi;
    sys.q.emplace();
    for (const auto& s : split(strip_key(a.check, "Q"), ',')) sys.q->push_back(m.parse(s));
    if (sys.q->size() != phi.size()) throw ConfigError("--check needs one Q_i per Phi_i");
  } else if (a.construct || fx.q.empty()) {
    sys = strat::build_projective_system(phi, m);
  } else {
    sys = fx.stated_system();
  }
  strat::ProjectiveVerdict pv = strat::check_projective_system(sys, m);
  if (!sys.etas) sys.etas = pv.etas;
  j["system"]["q"] = report::objs_of(m, *sys.q);
  json etas = json::array();
  for (const auto& e : *sys.etas) etas.push_back(m.format(e));
  j["system"]["etas"] = etas;
  j["ps1"] = pv.ps1;
  j["ps2"] = pv.ps2;
  j["minimal"] = report::bools(pv.minimal);
  j["qn_iso"] = pv.qn_iso;
  j["relative_projective"] = pv.relative_projective;
  strat::LeftExactVerdict le = strat::check_left_exact(sys, m);
  j["left_exact"] = report::bools(le.left_exact);
  j["q_nonzero"] = report::bools(le.q_nonzero);
  json wit = json::array();
  for (const auto& w : le.witness) wit.push_back(w ? json(m.format(*w)) : json(nullptr));
  j["left_exact_witness"] = wit;
  strat::MultiplicityMatrix d = strat::multiplicity_matrix(sys, m);
  j["D"] = report::matrix(d.d);
  j["D_upper_triangular"] = d.upper_triangular;
  j["D_diagonal_nonzero"] = d.diagonal_nonzero;
  Submodel sub = restrict_model(m, cl.indecs);
  groth::JhVerdict jv = groth::jh_and_length_verdict(sub.model);
  j["jh"] = report::tri(jv.jh);
  j["length"] = report::tri(jv.length);
  if (!a.mults.empty()) {
    json ms = json::array();
    for (const auto& text : a.mults) {
      const std::string ms_text = strip_key(text, "M");
      json e;
      e["M"] = ms_text;
      try {
        e["m"] = strat::multiplicities(m.parse(ms_text), sys, m);
      } catch (const SingularMatrix& ex) {
        e["error"] = std::string("SingularMatrix: ") + ex.what();
      } catch (const NonIntegralSolution& ex) {
        e["error"] = std::string("NonIntegralSolution: ") + ex.what();
      }
      ms.push_back(e);
    }
    j["multiplicities"] = ms;
  }
  std::string verdict;
  if (!pv.ps1 || !pv.ps2 || !pv.qn_iso) {
    verdict = "not a projective system";
  } else if (!pv.all_minimal()) {
    verdict = "projective system, not minimal";
  } else {
    verdict = "minimal projective system";
  }
  j["verdict"] = verdict;
  json det = json::array();
  for (const auto& s : pv.details) det.push_back(s);
  j["details"] = det;
  emit(j, a.json_out);
  return kOk;
}

struct GrothArgs {
  std::vector<std::string> equal;
  unsigned norm = 4;
  std::string json_out;
};

groth::Bounds bounds_from(const GrothArgs& a) {
  groth::Bounds b;
  b.norm = a.norm;
  return b;
}

int cmd_monoid(const Source& src, const GrothArgs& a) {
  fixtures::Fixture fx = resolve(src);
  Submodel sub = fx.analysed();
  const CategoryModel& m = sub.model;
  groth::Bounds b = bounds_from(a);
  groth::MonoidPresentation p = groth::monoid_presentation(m, b);
  groth::JhVerdict jv = groth::jh_and_length_verdict(m, b);
  json j;
  j["model"] = m.meta().window_label;
  json gens = json::array();
  for (const auto& g : p.generators) gens.push_back(g);
  j["generators"] = gens;
  j["relations"] = report::relations(p);
  groth::Reducedness red = groth::is_reduced(p, b);
  j["reduced"] = report::tri(red.value);
  if (red.witness) j["reduced_witness"] = report::vec_obj(p, *red.witness);
  json at = json::array();
  std::vector<IndecIndex> atom_list = groth::atoms(p, b);
  for (IndecIndex i : atom_list) at.push_back(p.generators[i]);
  j["atoms"] = at;
  j["simples"] = report::names_of(m, jv.simples);
  if (jv.zero.value) groth::check_atoms_match_simples(p, jv.simples, b);
  groth::FreeVerdict fv = groth::monoid_free_on_simples(p, jv.simples, b);
  j["free"] = report::tri(fv.value);
  j["free_reason"] = fv.reason;
  if (fv.nu_additive) j["length_functional_additive"] = *fv.nu_additive;
  if (!a.equal.empty()) {
    if (a.equal.size() != 2) throw ConfigError("--equal takes two objects");
    groth::Vec x = m.parse(a.equal[0]).dense(m.size()), y = m.parse(a.equal[1]).dense(m.size());
    j["equal"] = report::equality(p, groth::monoid_equal(p, x, y, b));
  }
  emit(j, a.json_out);
  return kOk;
}

int cmd_k0(const Source& src, const GrothArgs& a) {
  fixtures::Fixture fx = resolve(src);
  Submodel sub = fx.analysed();
  const CategoryModel& m = sub.model;
  groth::Bounds b = bounds_from(a);
  groth::MonoidPresentation p = groth::monoid_presentation(m, b);
  groth::JhVerdict jv = groth::jh_and_length_verdict(m, b);
  json j;
  j["model"] = m.meta().window_label;
  j["generators"] = p.generators.size();
  j["relations"] = p.relations.size();
  j["simples"] = report::names_of(m, jv.simples);
  j["k0"] = report::k0(groth::k0(p, jv.simples));
  emit(j, a.json_out);
  return kOk;
}

int cmd_jh(const Source& src, const GrothArgs& a) {
  fixtures::Fixture fx = resolve(src);
  Submodel sub = fx.analysed();
  const CategoryModel& m = sub.model;
  groth::Bounds b = bounds_from(a);
  groth::ThmC t = groth::thmC_crosscheck(m, b);
  if (t.jh.zero.value) groth::check_atoms_match_simples(t.presentation, t.jh.simples, b);
  emit(report::thmC(m, t, b), a.json_out);
  return t.agree ? kOk : kConsistency;
}

unsigned default_field() {
  if (const char* e = std::getenv("EXTCAT_FIELD_CHAR")) {
    try {
      return static_cast<unsigned>(std::stoul(e));
    } catch (const std::exception&) {
      throw ConfigError("EXTCAT_FIELD_CHAR must be a prime number");
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extcat: finite windows of extriangulated categories"};
  app.require_subcommand(1);
  Source src;
  try {
    src.p = default_field();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  app.add_option("--field-char", src.p, "prime field characteristic (default: $EXTCAT_FIELD_CHAR or 2)");

  ModelArgs ma;
  auto* model = app.add_subcommand("model", "write the model, its DOT rendering and a validation report");
  add_source(model, src);
  model->add_option("--out", ma.out, "interchange file to write");
  model->add_option("--dot", ma.dot, "DOT file to write");
  model->add_option("--highlight", ma.highlight, "names to shade, or 'filtered' / 'phi'");
  model->add_option("--record-bound", ma.record_bound, "largest end size listed in the interchange file");
  model->add_option("--json", ma.json_out, "report path (default stdout)");

  StratArgs sa;
  auto* st = app.add_subcommand("strat", "stratifying and projective system analysis");
  add_source(st, src);
  st->add_option("--phi", sa.phi, "comma-separated Phi, e.g. S2,P3,S3[1]");
  st->add_flag("--construct", sa.construct, "construct Q from Phi");
  st->add_option("--check", sa.check, "validate a supplied Q, e.g. Q=P2,P3,S3[1]");
  st->add_option("--multiplicities", sa.mults, "objects M for D m = c, e.g. M=P2");
  st->add_option("--json", sa.json_out, "report path (default stdout)");

  GrothArgs ga;
  auto* mo = app.add_subcommand("monoid", "Grothendieck monoid presentation and word problem");
  add_source(mo, src);
  mo->add_option("--equal", ga.equal, "two objects to compare")->expected(2);
  mo->add_option("--norm", ga.norm, "largest vector size visited by rewriting");
  mo->add_option("--json", ga.json_out, "report path (default stdout)");
  auto* kz = app.add_subcommand("k0", "Grothendieck group");
  add_source(kz, src);
  kz->add_option("--json", ga.json_out, "report path (default stdout)");
  auto* jh = app.add_subcommand("jh", "Jordan-Hoelder, monoid and group verdicts side by side");
  add_source(jh, src);
  jh->add_option("--norm", ga.norm, "largest vector size visited by rewriting");
  jh->add_option("--json", ga.json_out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*model) return cmd_model(src, ma);
    if (*st) return cmd_strat(src, sa);
    if (*mo) return cmd_monoid(src, ga);
    if (*kz) return cmd_k0(src, ga);
    if (*jh) return cmd_jh(src, ga);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const UnknownIndec& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
    return kConfig;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const AnnotationMissing& e) {
    std::cerr << "missing annotation: " << e.what() << "\n";
    return kAnnotation;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

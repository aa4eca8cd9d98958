// qf: command-line front end for the quadratic form library.
//
// Exit codes: 0 success / PASS, 1 checked failure, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qf/qf.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qf;

constexpr int kOk = 0;
constexpr int kChecked = 1;
constexpr int kUsage = 2;

struct Output {
  bool as_json = false;
  json doc = json::object();
  std::ostringstream text;
};

// ---------------------------------------------------------------------------
// conversions

json jint(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

json jrat(const Rat& x) { return x.get_str(); }

json jinterval(const Interval& x) { return json::array({x.lower_str(25), x.upper_str(25)}); }

json jvec(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(jint(x));
  return a;
}

json jvec(const RatVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_den() == 1 ? jint(x.get_num()) : jrat(x));
  return a;
}

template <class T>
json jmatrix(const Matrix<T>& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<T> row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(jvec(row));
  }
  return a;
}

template <class T>
std::string text_matrix(const Matrix<T>& m, const std::string& indent = "  ") {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += indent;
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? " " : "") + m(i, j).get_str();
    s += "\n";
  }
  return s;
}

Int parse_int(const std::string& s) {
  Int x;
  if (s.empty() || x.set_str(s, 10) != 0) fail(ErrorKind::ParseError, "not an integer: " + s);
  return x;
}

Rat parse_rat(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_int(s));
  const Int den = parse_int(s.substr(slash + 1));
  if (den == 0) fail(ErrorKind::ParseError, "zero denominator: " + s);
  Rat r(parse_int(s.substr(0, slash)), den);
  r.canonicalize();
  return r;
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  fail(ErrorKind::ParseError, "expected an integer or a rational string, got " + j.dump());
}

/// "[1,0,-2]", "1,0,-2" or "1 0 -2"; entries may be rationals "a/b".
RatVec parse_vector(const std::string& s) {
  RatVec v;
  const auto first = s.find_first_not_of(" \t");
  if (first != std::string::npos && s[first] == '[') {
    json j;
    try {
      j = json::parse(s);
    } catch (const json::exception& e) {
      fail(ErrorKind::ParseError, std::string("bad vector: ") + e.what());
    }
    if (!j.is_array()) fail(ErrorKind::ParseError, "vector must be a JSON array");
    for (const auto& x : j) v.push_back(rat_from_json(x));
    return v;
  }
  std::string t = s;
  for (auto& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::string tok;
  while (in >> tok) v.push_back(parse_rat(tok));
  if (v.empty()) fail(ErrorKind::ParseError, "empty vector");
  return v;
}

IntVec integral_vector(const RatVec& v) {
  if (!is_integral(v)) fail(ErrorKind::InvalidArgument, "vector must have integer entries");
  return to_int(v);
}

RatMatrix read_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  if (j.is_object() && j.contains("matrix")) j = j["matrix"];
  if (!j.is_array() || j.empty()) fail(ErrorKind::ParseError, path + ": expected a nested array");
  const std::size_t r = j.size(), c = j[0].is_array() ? j[0].size() : 0;
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) fail(ErrorKind::ParseError, path + ": ragged matrix");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = rat_from_json(j[i][k]);
  }
  return m;
}

GramForm read_form(const std::string& path) {
  if (path == "-") return parse_gram(std::cin);
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  return parse_gram(in);
}

std::string density_text(const DensityValue& d) {
  return d.exact.get_str() + (d.stabilized ? "" : "  (unstabilized)");
}

// ---------------------------------------------------------------------------
// subcommands

struct Context {
  Output& out;
  mpfr_prec_t prec;
};

int run_enumerate(Context& c, const std::string& form, const std::string& norm, const std::string& bound, bool count_only) {
  const GramForm g = read_form(form);
  if (norm.empty() == bound.empty()) fail(ErrorKind::InvalidArgument, "give exactly one of --norm and --bound");
  const bool exact = !norm.empty();
  const Int m = parse_int(exact ? norm : bound);
  c.out.doc["form_hash"] = form_hash(g);
  c.out.doc["m"] = jint(m);
  if (exact && count_only) {
    const Int r = representation_count(g, m);
    c.out.doc["count"] = jint(r);
    c.out.text << r << "\n";
    return kOk;
  }
  const ShortVectorList sv = short_vectors(g, m);
  std::vector<ShortVector> chosen;
  for (const auto& s : sv.expanded())
    if (!exact || s.norm == m) chosen.push_back(s);
  c.out.doc["count"] = chosen.size();
  if (count_only) {
    c.out.text << chosen.size() << "\n";
    return kOk;
  }
  json vs = json::array();
  for (const auto& s : chosen) {
    json v = json::array();
    std::string line;
    for (auto x : s.v) {
      v.push_back(x);
      line += (line.empty() ? "" : " ") + std::to_string(x);
    }
    vs.push_back({{"v", v}, {"norm", jint(s.norm)}});
    c.out.text << line << "  norm " << s.norm << "\n";
  }
  c.out.doc["vectors"] = vs;
  c.out.text << "count " << chosen.size() << "\n";
  return kOk;
}

int run_density(Context& c, const std::string& form, const std::string& p, const std::string& m, unsigned kmax,
                const std::string& method, std::uint64_t budget) {
  const GramForm g = read_form(form);
  DensityOptions opt;
  opt.k_max = kmax;
  opt.budget = budget;
  if (method == "exhaustive")
    opt.method = DensityMethod::Exhaustive;
  else if (method != "blocks")
    fail(ErrorKind::InvalidArgument, "method must be blocks or exhaustive");
  const DensityValue d = local_density(g, parse_int(p), parse_int(m), opt);
  c.out.doc["p"] = jint(parse_int(p));
  c.out.doc["m"] = jint(parse_int(m));
  c.out.doc["value"] = jrat(d.exact);
  c.out.doc["stabilized_at_k"] = d.stabilized_at_k;
  c.out.doc["stabilized"] = d.stabilized;
  c.out.doc["certificate"] = d.certificate;
  json by_k = json::array();
  for (const auto& v : d.by_k) by_k.push_back(jrat(v));
  c.out.doc["by_k"] = by_k;
  c.out.text << density_text(d) << "\n";
  return kOk;
}

int run_infdensity(Context& c, const std::string& form, unsigned n, const std::string& disc, const std::string& y) {
  Int dd = 0;
  unsigned nn = n;
  if (!form.empty()) {
    const GramForm g = read_form(form);
    nn = static_cast<unsigned>(g.dim());
    dd = g.det();
  } else {
    if (disc.empty() || n == 0) fail(ErrorKind::InvalidArgument, "give --form or both --n and --disc");
    dd = parse_int(disc);
  }
  const Rat yy = parse_rat(y);
  const DensityValue d = infinity_density(nn, dd, yy, c.prec);
  c.out.doc["p"] = "inf";
  c.out.doc["m"] = jrat(yy);
  c.out.doc["n"] = nn;
  c.out.doc["disc"] = jint(dd);
  c.out.doc["value"] = jinterval(*d.interval);
  c.out.doc["omega"] = jinterval(omega(nn, c.prec));
  c.out.doc["stabilized_at_k"] = nullptr;
  c.out.text << d.interval->str(25) << "\n";
  return kOk;
}

int run_jordan(Context& c, const std::string& form, const std::string& p, unsigned K) {
  const GramForm g = read_form(form);
  const JordanDecomposition jd = jordan_decompose_odd(g, parse_int(p), K);
  json blocks = json::array();
  for (const auto& b : jd.blocks) {
    json diag = json::array();
    std::string line;
    for (std::size_t i = 0; i < b.unit_block.dim(); ++i) {
      diag.push_back(jint(b.unit_block(i, i)));
      line += " " + b.unit_block(i, i).get_str();
    }
    blocks.push_back({{"exponent", b.exponent}, {"scale", jint(b.scale)}, {"unit_diagonal", diag}});
    c.out.text << "p^" << b.exponent << " *" << line << "\n";
  }
  c.out.doc["p"] = jint(parse_int(p));
  c.out.doc["modulus"] = jint(jd.modulus);
  c.out.doc["blocks"] = blocks;
  c.out.doc["transform"] = jmatrix(jd.transform);
  c.out.doc["reduced_gram"] = jmatrix(jd.reduced_gram);
  return kOk;
}

int run_split2(Context& c, const std::string& form, unsigned K) {
  const GramForm g = read_form(form);
  const TwoAdicSplit s = two_adic_split(g, K);
  json blocks = json::array();
  for (const auto& b : s.blocks) {
    const bool hyp = b.type == TwoAdicBlockType::Hyperbolic;
    blocks.push_back({{"type", hyp ? "2x1x2" : "2x1x2+2x2^2"}, {"gram", jmatrix(b.gram)}});
    c.out.text << (hyp ? "2x1x2" : "2x1x2+2x2^2") << "\n";
  }
  c.out.text << "blocks " << s.blocks.size() << ", remainder dimension " << s.residual.rows() << "\n";
  if (s.residual.rows() > 0) c.out.text << text_matrix(s.residual);
  c.out.doc["modulus"] = jint(s.modulus);
  c.out.doc["blocks"] = blocks;
  c.out.doc["residual"] = jmatrix(s.residual);
  c.out.doc["transform"] = jmatrix(s.transform);
  return kOk;
}

void report_lattice(Context& c, const Lattice& l) {
  c.out.doc["basis"] = jmatrix(l.basis());
  c.out.doc["gram"] = jmatrix(l.gram());
  c.out.doc["discriminant"] = jrat(l.discriminant());
  c.out.text << "basis (columns)\n" << text_matrix(l.basis()) << "gram\n" << text_matrix(l.gram());
  c.out.text << "discriminant " << l.discriminant() << "\n";
}

int run_saturate(Context& c, const std::string& form) {
  const Lattice l = Lattice::standard(read_form(form));
  const Lattice s = saturate(l);
  report_lattice(c, s);
  json f = json::array();
  for (const auto& x : invariant_factors(s)) f.push_back(jint(x));
  c.out.doc["invariant_factors"] = f;
  return kOk;
}

int run_dual(Context& c, const std::string& form) {
  report_lattice(c, dual_lattice(Lattice::standard(read_form(form))));
  return kOk;
}

int run_factors(Context& c, const std::string& form) {
  const auto fs = invariant_factors(read_form(form));
  json f = json::array();
  std::map<Int, std::vector<Int>> by_p;
  for (const auto& x : fs) {
    f.push_back(jint(x));
    for (const auto& [p, e] : factorize(x)) by_p[p].push_back(pow_int(p, static_cast<unsigned long>(e)));
    c.out.text << x << "\n";
  }
  json pf = json::object();
  for (const auto& [p, parts] : by_p) {
    json a = json::array();
    for (const auto& q : parts) a.push_back(jint(q));
    pf[p.get_str()] = a;
  }
  c.out.doc["invariant_factors"] = f;
  c.out.doc["p_factors"] = pf;
  return kOk;
}

int run_reflect(Context& c, const std::string& form, const std::string& root, const std::string& x, bool matrix) {
  const Lattice l = Lattice::standard(read_form(form));
  const RatVec v = parse_vector(root);
  if (matrix || x.empty()) {
    const Isometry r = reflection(l, v);
    c.out.doc["matrix"] = jmatrix(r.matrix);
    c.out.doc["preserves_sheet"] = r.preserves_sheet;
    c.out.text << text_matrix(r.matrix, "");
  }
  if (!x.empty()) {
    const RatVec y = reflect(l, v, parse_vector(x));
    c.out.doc["image"] = jvec(y);
    c.out.text << to_string(y) << "\n";
  }
  return kOk;
}

int run_classify_root(Context& c, const std::string& form, const std::string& vec) {
  const Lattice l = Lattice::standard(read_form(form));
  const RootClass rc = classify_root(l, parse_vector(vec));
  c.out.doc["kind"] = to_string(rc.kind);
  c.out.doc["norm"] = jrat(rc.norm);
  if (rc.kind == RootKind::NotRoot) c.out.doc["reason"] = rc.reason;
  c.out.text << to_string(rc.kind);
  if (rc.kind == RootKind::NotRoot) c.out.text << " (" << rc.reason << ")";
  c.out.text << "\n";
  return kOk;
}

int run_complement(Context& c, const std::string& form, const std::string& vec) {
  const GramForm q = complement_form(Lattice::standard(read_form(form)), parse_vector(vec));
  c.out.doc["gram"] = jmatrix(q.gram());
  c.out.doc["form_hash"] = form_hash(q);
  c.out.text << format_gram(q);
  return kOk;
}

int run_meet(Context& c, const std::string& form, std::size_t qdim, const std::string& alpha, const std::string& vec) {
  const MeetResult r = classify_hyperplane_meet(read_form(form), qdim, parse_int(alpha), integral_vector(parse_vector(vec)));
  c.out.doc["kind"] = to_string(r.kind);
  c.out.doc["u"] = jvec(r.u);
  c.out.text << to_string(r.kind);
  if (r.kind == MeetKind::HyperplaneOf) {
    c.out.doc["w"] = jvec(r.w);
    c.out.doc["multiple"] = jint(r.multiple);
    c.out.doc["w_verified"] = r.w_verified;
    c.out.text << " w = " << to_string(r.w) << " (u = " << r.multiple << " w, " << (r.w_verified ? "root" : "NOT a root")
               << ")";
  }
  c.out.text << "\n";
  return r.kind == MeetKind::HyperplaneOf && !r.w_verified ? kChecked : kOk;
}

int run_mass_check(Context& c, const std::vector<std::string>& forms, const std::vector<std::string>& orders,
                   const std::string& m, unsigned long primes, const std::string& tol) {
  GenusInput genus;
  for (const auto& f : forms) genus.forms.push_back(read_form(f));
  for (const auto& o : orders) genus.automorphism_orders.push_back(parse_int(o));
  const MassLedger r = siegel_check(genus, parse_int(m), primes, parse_rat(tol), {}, c.prec);
  json w = json::array(), counts = json::array(), ords = json::array();
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    w.push_back(jrat(r.weights[i]));
    counts.push_back(jint(r.representation_counts[i]));
    ords.push_back(jint(r.orders[i]));
  }
  c.out.doc["check"] = "siegel";
  c.out.doc["m"] = jint(r.rhs.m);
  c.out.doc["prime_bound"] = r.rhs.prime_bound;
  c.out.doc["epsilon"] = jrat(r.rhs.epsilon);
  c.out.doc["weights"] = w;
  c.out.doc["automorphism_orders"] = ords;
  c.out.doc["representation_counts"] = counts;
  c.out.doc["value"] = jrat(r.lhs);
  c.out.doc["interval"] = jinterval(r.rhs.value);
  c.out.doc["archimedean"] = jinterval(r.rhs.archimedean);
  c.out.doc["relative_gap"] = jinterval(r.relative_gap);
  c.out.doc["tail_log_bound"] = r.rhs.tail_log_bound ? jrat(*r.rhs.tail_log_bound) : json(nullptr);
  c.out.doc["bound"] = jrat(r.tolerance);
  c.out.doc["truncated"] = true;
  c.out.doc["pass"] = r.pass;
  c.out.text << "lhs  " << r.lhs << "\n";
  c.out.text << "rhs  " << r.rhs.value.str(20) << "  (primes <= " << r.rhs.prime_bound << ", truncated)\n";
  c.out.text << "gap  " << r.relative_gap.str(6) << "  tol " << r.tolerance << "\n";
  c.out.text << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? kOk : kChecked;
}

int run_ledger41(Context& c) {
  const LedgerReport rep = bounds_ledger_41(c.prec);
  json checks = json::array();
  for (const auto& ch : rep.checks) {
    json j = {{"check", ch.check}, {"statement", ch.statement}};
    if (ch.interval) j["interval"] = jinterval(*ch.interval);
    if (ch.value) j["value"] = jrat(*ch.value);
    j["bound"] = ch.bound;
    j["pass"] = ch.pass;
    if (!ch.detail.empty()) j["detail"] = ch.detail;
    checks.push_back(j);
    c.out.text << (ch.pass ? "PASS " : "FAIL ") << ch.check << ": " << ch.statement << "\n";
    if (ch.interval) c.out.text << "     interval " << ch.interval->str(15) << "\n";
    if (ch.value) c.out.text << "     value " << *ch.value << "\n";
    if (!ch.detail.empty()) c.out.text << "     " << ch.detail << "\n";
  }
  c.out.doc["checks"] = checks;
  c.out.doc["pass"] = rep.all_pass();
  return rep.all_pass() ? kOk : kChecked;
}

int run_prop41(Context& c, const std::string& king, const std::string& order, const std::string& r2, const std::string& ct) {
  const Prop41Report r = prop41_arithmetic(parse_rat(king), parse_int(order), parse_int(r2), parse_rat(ct));
  json chain = json::array();
  for (const auto& s : r.chain) {
    chain.push_back({{"check", s.statement}, {"value", jrat(s.lhs)}, {"bound", jrat(s.rhs)}, {"pass", s.pass}});
  }
  c.out.doc["inputs"] = {{"king_mass", jrat(r.king_mass)}, {"e8_order", jint(r.e8_order)}, {"e8_r2", jint(r.e8_r2)},
                         {"ct_bound", jrat(r.ct_bound)}};
  c.out.doc["M1"] = jrat(r.M1);
  c.out.doc["chain_coefficient"] = jint(r.chain_coefficient);
  c.out.doc["chain"] = chain;
  c.out.doc["s_paper"] = jint(r.s_paper);
  c.out.doc["s_sharp"] = jint(r.s_sharp);
  c.out.doc["s_tight"] = jint(r.s_tight);
  c.out.doc["pass"] = r.pass();
  const std::string k = r.chain_coefficient.get_str();
  c.out.text << "M1 = " << r.king_mass << " / (2 * " << r.e8_order << ") = " << r.M1 << "\n";
  for (const auto& s : r.chain) c.out.text << (s.pass ? "  ok   " : "  FAIL ") << s.statement << "\n";
  c.out.text << "sharp: s >= 2 * " << k << " * M1 / ct, so s ≥ " << r.s_sharp << "\n";
  c.out.text << "tight (coefficient " << Rat(Rat(r.e8_r2 + 2) - r.ct_bound) << "): s ≥ " << r.s_tight << "\n";
  c.out.text << r.lower << " ≤ " << k << " M1 ≤ " << r.ct_bound << " M3 ≤ s / " << Rat(2 / r.ct_bound)
             << ", so s ≥ " << r.s_paper << "\n";
  return r.pass() ? kOk : kChecked;
}

int run_pingpong(Context& c, const std::string& g1p, const std::string& g2p, const std::string& form, const std::string& seed,
                 unsigned mmax, unsigned audit, bool sym2) {
  const GramForm f = form.empty() ? discriminant_form() : read_form(form);
  auto load = [&](const std::string& p) {
    RatMatrix m = read_matrix_json(p);
    if (sym2) m = symmetric_square(to_int(m));
    if (m.rows() != f.dim() || m.cols() != f.dim()) fail(ErrorKind::InvalidArgument, p + ": matrix size does not match the form");
    return m;
  };
  const RatMatrix g1 = load(g1p), g2 = load(g2p);
  RatVec x0;
  if (!seed.empty()) {
    x0 = parse_vector(seed);
  } else {
    const auto v = negative_vector(f);
    if (!v) fail(ErrorKind::InvalidArgument, "form has no negative vector");
    x0 = to_rat(*v);
  }
  const SchottkyCertificate cert = schottky_certify(f, g1, g2, x0, mmax, audit, c.prec);
  json regions = json::array();
  for (const auto& h : cert.regions) regions.push_back({{"label", h.label}, {"normal", jvec(h.normal)}});
  json table = json::array();
  for (const auto& row : cert.pairings) {
    json r = json::array();
    for (const auto& x : row) r.push_back(jrat(x));
    table.push_back(r);
  }
  c.out.doc["m"] = cert.m;
  c.out.doc["base_point"] = jvec(cert.base_point);
  c.out.doc["regions"] = regions;
  c.out.doc["pairings"] = table;
  c.out.doc["mapping_verified"] = cert.mapping_verified;
  c.out.doc["translation_length"] = {jinterval(translation_length(f, g1, c.prec)), jinterval(translation_length(f, g2, c.prec))};
  c.out.doc["word_audit"] = {{"max_length", audit}, {"words", cert.words_checked}, {"pass", cert.word_audit_passed}};
  const bool ok = cert.mapping_verified && cert.word_audit_passed;
  c.out.doc["pass"] = ok;
  c.out.text << "m = " << cert.m << "\n";
  for (const auto& h : cert.regions) c.out.text << "  " << h.label << "  {x : (x, " << to_string(h.normal) << ") >= 0}\n";
  c.out.text << "pairings\n";
  for (const auto& row : cert.pairings) {
    c.out.text << " ";
    for (const auto& x : row) c.out.text << " " << x;
    c.out.text << "\n";
  }
  c.out.text << "mapping " << (cert.mapping_verified ? "verified" : "FAILED") << "\n";
  c.out.text << "word audit: " << cert.words_checked << " reduced words of length <= " << audit << ", "
             << (cert.word_audit_passed ? "none trivial" : "IDENTITY FOUND") << "\n";
  return ok ? kOk : kChecked;
}

int run_autord(Context& c, const std::string& form, std::size_t dim_limit) {
  const GramForm g = read_form(form);
  const AutomorphismResult r = automorphism_group(g, dim_limit);
  json orbits = json::array();
  for (auto o : r.orbit_sizes) orbits.push_back(o);
  c.out.doc["form_hash"] = form_hash(g);
  c.out.doc["order"] = jint(r.order);
  c.out.doc["orbit_sizes"] = orbits;
  c.out.doc["generators"] = r.generators.size();
  c.out.text << r.order << "\n";
  return kOk;
}

bool usage_kind(ErrorKind k) {
  return k == ErrorKind::ParseError || k == ErrorKind::InvalidArgument || k == ErrorKind::NonPositiveInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic for integral quadratic forms and lattices"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  unsigned precision = static_cast<unsigned>(precision_from_env());
  app.add_flag("--json", out.as_json, "emit one JSON document");
  app.add_option("--precision", precision, "interval precision in bits (default QF_PRECISION_BITS or 128)")
      ->check(CLI::Range(32u, 1u << 20));

  std::string form, p, m, norm, bound, method = "blocks", disc, y, root, x, vec, alpha = "1", tol = "1/50", g1, g2, seed;
  std::string king = kKingMass.get_str(), e8_order = kE8Order.get_str(), e8_r2 = kE8RootCount.get_str(), ct = kCtBound.get_str();
  std::vector<std::string> forms, orders;
  unsigned kmax = 6, K = 8, n = 0, mmax = 20, audit = 6;
  unsigned long primes = 10000;
  std::uint64_t budget = 100'000'000;
  std::size_t qdim = 0, dim_limit = 8;
  bool count = false, matrix = false, sym2 = false;

  auto* enumerate = app.add_subcommand("enumerate", "lattice vectors of a given norm or up to a bound");
  enumerate->add_option("--form", form, "Gram file")->required();
  enumerate->add_option("--norm", norm, "exact norm f(v) = N");
  enumerate->add_option("--bound", bound, "all vectors with 0 < f(v) <= B");
  enumerate->add_flag("--count", count, "print only the number of vectors");

  auto* density = app.add_subcommand("density", "p-adic density Df_p^{-1}(m)");
  density->add_option("--form", form, "Gram file")->required();
  density->add_option("--p", p, "prime")->required();
  density->add_option("--m", m, "integer m")->required();
  density->add_option("--kmax", kmax, "largest exponent k")->check(CLI::Range(1u, 64u));
  density->add_option("--method", method, "blocks or exhaustive")->check(CLI::IsMember({"blocks", "exhaustive"}));
  density->add_option("--budget", budget, "counting work limit per k");

  auto* infd = app.add_subcommand("infdensity", "archimedean density Df_inf^{-1}(y)");
  infd->add_option("--form", form, "Gram file (gives n and disc)");
  infd->add_option("--n", n, "dimension");
  infd->add_option("--disc", disc, "discriminant");
  infd->add_option("--y", y, "point y > 0")->required();

  auto* jordan = app.add_subcommand("jordan", "Jordan splitting at an odd prime");
  jordan->add_option("--form", form, "Gram file")->required();
  jordan->add_option("--p", p, "odd prime")->required();
  jordan->add_option("--K", K, "work modulo p^K");

  auto* split2 = app.add_subcommand("split2", "split hyperbolic planes off over Z_2");
  split2->add_option("--form", form, "Gram file")->required();
  split2->add_option("--K", K, "work modulo 2^K (K >= 3)");

  auto* sat = app.add_subcommand("saturate", "saturate until invariant factors are squarefree");
  sat->add_option("--form", form, "Gram file")->required();

  auto* dual = app.add_subcommand("dual", "dual lattice");
  dual->add_option("--form", form, "Gram file")->required();

  auto* factors = app.add_subcommand("factors", "invariant factors and their p-parts");
  factors->add_option("--form", form, "Gram file")->required();

  auto* refl = app.add_subcommand("reflect", "reflection in a root");
  refl->add_option("--form", form, "Gram file")->required();
  refl->add_option("--root", root, "root v, e.g. [1,0,-1]")->required();
  refl->add_option("--x", x, "vector to reflect");
  refl->add_flag("--matrix", matrix, "print the reflection matrix");

  auto* croot = app.add_subcommand("classify-root", "positive root, negative root or not a root");
  croot->add_option("--form", form, "Gram file")->required();
  croot->add_option("--v", vec, "vector")->required();

  auto* comp = app.add_subcommand("complement", "Gram matrix of the orthogonal complement of v");
  comp->add_option("--form", form, "Gram file")->required();
  comp->add_option("--v", vec, "non-isotropic vector")->required();

  auto* meet = app.add_subcommand("meet", "hyperplane of a root of alpha*q + t restricted to the q-block");
  meet->add_option("--form", form, "Gram file of alpha*q + t")->required();
  meet->add_option("--qdim", qdim, "dimension of the q-block")->required();
  meet->add_option("--alpha", alpha, "scale alpha >= 1");
  meet->add_option("--v", vec, "positive root of the form")->required();

  auto* mass = app.add_subcommand("mass-check", "Siegel mass formula with a truncated Euler product");
  mass->add_option("--form", forms, "Gram file of a class representative (repeatable)")->required();
  mass->add_option("--order", orders, "automorphism order per representative (default: computed)");
  mass->add_option("--m", m, "positive integer m")->required();
  mass->add_option("--primes", primes, "largest prime in the product");
  mass->add_option("--tol", tol, "relative tolerance, e.g. 1/50");

  auto* ledger = app.add_subcommand("ledger41", "inequality ledger for the 41-dimensional genus");

  auto* prop = app.add_subcommand("prop41", "class-count chain from King's mass");
  prop->add_option("--king", king, "mass of the 32-dimensional forms without roots");
  prop->add_option("--e8-order", e8_order, "|O(e8)|");
  prop->add_option("--e8-r2", e8_r2, "number of norm 2 vectors of e8");
  prop->add_option("--ct", ct, "bound on the density product");

  auto* pp = app.add_subcommand("pingpong", "ping-pong certificate for <g1^m, g2^m>");
  pp->add_option("--g1", g1, "JSON matrix file")->required();
  pp->add_option("--g2", g2, "JSON matrix file")->required();
  pp->add_option("--form", form, "Gram file (default: b^2 - 4ac on binary forms)");
  pp->add_option("--seed", seed, "base point with f < 0");
  pp->add_option("--mmax", mmax, "largest power tried");
  pp->add_option("--audit", audit, "word audit length")->check(CLI::Range(0u, 8u));
  pp->add_flag("--sym2", sym2, "inputs are 2x2 matrices acting on binary forms");

  auto* autord = app.add_subcommand("autord", "order of the automorphism group");
  autord->add_option("--form", form, "Gram file")->required();
  autord->add_option("--dim-limit", dim_limit, "largest dimension attempted");

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

  Context c{out, static_cast<mpfr_prec_t>(precision)};
  int code = kOk;
  try {
    auto* sub = app.get_subcommands().front();
    if (sub == enumerate) code = run_enumerate(c, form, norm, bound, count);
    else if (sub == density) code = run_density(c, form, p, m, kmax, method, budget);
    else if (sub == infd) code = run_infdensity(c, form, n, disc, y);
    else if (sub == jordan) code = run_jordan(c, form, p, K);
    else if (sub == split2) code = run_split2(c, form, K);
    else if (sub == sat) code = run_saturate(c, form);
    else if (sub == dual) code = run_dual(c, form);
    else if (sub == factors) code = run_factors(c, form);
    else if (sub == refl) code = run_reflect(c, form, root, x, matrix);
    else if (sub == croot) code = run_classify_root(c, form, vec);
    else if (sub == comp) code = run_complement(c, form, vec);
    else if (sub == meet) code = run_meet(c, form, qdim, alpha, vec);
    else if (sub == mass) code = run_mass_check(c, forms, orders, m, primes, tol);
    else if (sub == ledger) code = run_ledger41(c);
    else if (sub == prop) code = run_prop41(c, king, e8_order, e8_r2, ct);
    else if (sub == pp) code = run_pingpong(c, g1, g2, form, seed, mmax, audit, sym2);
    else if (sub == autord) code = run_autord(c, form, dim_limit);
  } catch (const Error& e) {
    code = usage_kind(e.kind()) ? kUsage : kChecked;
    if (out.as_json) {
      std::cout << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return code;
  }
  if (out.as_json)
    std::cout << out.doc.dump(2) << "\n";
  else
    std::cout << out.text.str();
  return code;
}

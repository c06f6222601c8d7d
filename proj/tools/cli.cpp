#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "padicsum/bounds.hpp"
#include "padicsum/congruence.hpp"
#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"
#include "padicsum/hensel.hpp"
#include "padicsum/io.hpp"
#include "padicsum/multivar.hpp"

namespace padicsum::cli {

namespace {

using nlohmann::json;

Family family_from_name(const std::string& s) {
  if (s == "dense") return Family::Dense;
  if (s == "split") return Family::Split;
  if (s == "parametric") return Family::Parametric;
  throw ParseError("unknown corpus family \"" + s + "\"");
}

std::vector<long> parse_prime_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw ParseError("bad prime \"" + item + "\"");
    }
    (void)Prime(out.back());
  }
  return out;
}

// "3" or "1-4".
std::pair<long, long> parse_range(const std::string& text) {
  try {
    const auto dash = text.find('-', 1);
    if (dash == std::string::npos) {
      const long v = std::stol(text);
      return {v, v};
    }
    return {std::stol(text.substr(0, dash)), std::stol(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw ParseError("bad range \"" + text + "\"");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

double distance(const Complex& a, const Complex& b) { return static_cast<double>((a - b).abs()); }

struct MemberOutcome {
  std::optional<BoundReport> report;
  std::vector<std::string> failures;
  std::vector<std::string> flags;
  std::optional<std::string> skipped;
  double containment_C = 0;
  std::optional<double> congruence_ratio;
};

std::optional<double> constant_for(const AuditConfig& cfg, const std::string& bound, int d) {
  const auto it = cfg.constants.find(bound);
  if (it == cfg.constants.end()) return std::nullopt;
  if (auto j = it->second.find(d); j != it->second.end()) return j->second;
  if (auto j = it->second.find(0); j != it->second.end()) return j->second;
  return std::nullopt;
}

MemberOutcome audit_member(const CorpusMember& mem, const AuditConfig& cfg) {
  MemberOutcome out;
  const PadicPoly& f = mem.f;
  const Prime p = f.prime();
  const std::string tag = "member " + std::to_string(mem.index) + " (" + f.to_string() + ", p = " +
                          std::to_string(p.value()) + ", m = " + std::to_string(mem.m) + ")";
  const auto fail = [&](const std::string& what) { out.failures.push_back(tag + ": " + what); };
  try {
    const Integer pm = pow(p, mem.m);
    if (!pm.fits_ulong_p() || pm.get_ui() > cfg.budget_pm)
      throw BudgetExceeded("p^m", pm.fits_ulong_p() ? pm.get_ui() : ~0ULL, cfg.budget_pm);
    const bool weil = weil_hypothesis(f);
    BoundReport r = bound_report(f, mem.m, mem.roots, false, cfg.budget_pm);
    if (weil) {
      r.witness = lower_bound_search(f, mem.m, cfg.pair_budget, mem.index);
      if (!r.witness->holds)
        fail("lower bound witness " + format_double(r.witness->measured) + " <= " + format_double(r.witness->threshold));
    } else {
      out.flags.push_back(tag + ": p <= d, lower bound not asserted");
    }

    // Exhaustive sum against the structured evaluator.
    const PadicPoly P = f.scaled(Rational(Integer(1), pm));
    StructuredOptions opt;
    opt.budget = cfg.budget_pm;
    const auto structured = structured_eval(P, opt);
    const auto exhaustive = complete_sum(f, mem.m, cfg.budget_pm, false);
    const double gap = distance(structured.total.value, exhaustive.value);
    if (!(gap <= 1e-9)) fail("structured evaluator differs from the complete sum by " + format_double(gap));

    for (int k = 1; k <= f.degree(); ++k) {
      const auto c = containment_check(f, mem.m, k, cfg.budget_pm);
      const std::string what = "sublevel member outside p^(-L/k) of derivative zeros, k = " + std::to_string(k);
      // The containment argument divides by k!, so for p <= d a miss is reported, not failed.
      if (!c.holds && weil) fail(what);
      else if (!c.holds) out.flags.push_back(tag + ": " + what);
      if (c.flagged > 0) out.flags.push_back(tag + ": containment used unresolved boxes, k = " + std::to_string(k));
      out.containment_C = std::max(out.containment_C, c.empirical_C);
    }

    if (f.denominator_exponent() == 0) {
      const auto cong = congruence_audit(f, mem.m, cfg.budget_pm);
      if (!*cong.lower_holds) fail("congruence lower bound fails");
      if (cong.improved_holds && !*cong.improved_holds) fail("improved congruence lower bound fails");
      out.congruence_ratio = cong.upper_ratio;
    }

    const auto check_constant = [&](const std::string& name, std::optional<double> ratio) {
      const auto C = constant_for(cfg, name, f.degree());
      if (C && ratio && *ratio > *C + 1e-9)
        fail(name + " ratio " + format_double(*ratio) + " exceeds candidate constant " + format_double(*C));
    };
    check_constant("thm11", r.ratio_thm11);
    check_constant("lv", r.ratio_lv);
    check_constant("ps", r.ratio_ps);
    out.report = std::move(r);
  } catch (const BudgetExceeded& e) {
    out.skipped = tag + ": " + e.what();
  } catch (const Error& e) {
    fail(std::string("error: ") + e.what());
  }
  return out;
}

struct Worst {
  double ratio = -1;
  std::optional<std::size_t> member;
  void see(std::optional<double> r, std::size_t index) {
    if (r && *r > ratio) {
      ratio = *r;
      member = index;
    }
  }
  json to_json() const {
    if (!member) return {{"max_ratio", nullptr}, {"argmax_member", nullptr}};
    return {{"max_ratio", ratio}, {"argmax_member", *member}};
  }
};

}  // namespace

json AuditConfig::to_json() const {
  json fam = json::array();
  for (auto f : corpus.families) fam.push_back(family_name(f));
  json consts = json::object();
  for (const auto& [name, per] : constants)
    for (const auto& [d, c] : per) consts[name][d == 0 ? "any" : std::to_string(d)] = c;
  return {{"primes", corpus.primes},
          {"degrees", {corpus.min_degree, corpus.max_degree}},
          {"m", {corpus.min_m, corpus.max_m}},
          {"size", corpus.size},
          {"seed", corpus.seed},
          {"families", fam},
          {"require_p_above_degree", corpus.require_p_above_degree},
          {"budget_pm", budget_pm},
          {"pair_budget", pair_budget},
          {"constants", consts}};
}

AuditConfig config_from_json(const json& j, AuditConfig base) {
  try {
    if (j.contains("primes")) base.corpus.primes = j["primes"].get<std::vector<long>>();
    if (j.contains("degrees")) {
      base.corpus.min_degree = j["degrees"].at(0).get<int>();
      base.corpus.max_degree = j["degrees"].at(1).get<int>();
    }
    if (j.contains("m")) {
      base.corpus.min_m = j["m"].at(0).get<unsigned>();
      base.corpus.max_m = j["m"].at(1).get<unsigned>();
    }
    if (j.contains("size")) base.corpus.size = j["size"].get<std::size_t>();
    if (j.contains("seed")) base.corpus.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("families")) {
      base.corpus.families.clear();
      for (const auto& f : j["families"]) base.corpus.families.push_back(family_from_name(f.get<std::string>()));
    }
    if (j.contains("require_p_above_degree")) base.corpus.require_p_above_degree = j["require_p_above_degree"].get<bool>();
    if (j.contains("budget_pm")) base.budget_pm = j["budget_pm"].get<std::uint64_t>();
    if (j.contains("pair_budget")) base.pair_budget = j["pair_budget"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("audit config: ") + e.what());
  }
  for (long p : base.corpus.primes) (void)Prime(p);
  if (base.budget_pm == 0 || base.pair_budget == 0) throw ParseError("budgets must be positive");
  if (base.corpus.min_degree < 1 || base.corpus.min_degree > base.corpus.max_degree)
    throw ParseError("bad degree range");
  if (base.corpus.min_m < 1 || base.corpus.min_m > base.corpus.max_m) throw ParseError("bad m range");
  return base;
}

std::map<std::string, std::map<int, double>> constants_from_json(const json& j) {
  std::map<std::string, std::map<int, double>> out;
  try {
    for (const auto& [name, v] : j.items()) {
      if (name != "thm11" && name != "lv" && name != "ps") throw ParseError("unknown bound \"" + name + "\"");
      if (v.is_number()) {
        out[name][0] = v.get<double>();
      } else {
        for (const auto& [d, c] : v.items()) out[name][d == "any" ? 0 : std::stoi(d)] = c.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("constants: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("constants: degree keys must be integers or \"any\"");
  }
  return out;
}

AuditResult run_audit(const AuditConfig& cfg) {
  const auto corpus = generate_corpus(cfg.corpus);
  std::vector<MemberOutcome> outcomes(corpus.size());
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, corpus.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < corpus.size();) outcomes[i] = audit_member(corpus[i], cfg);
    });
  for (auto& t : pool) t.join();

  AuditResult res;
  res.csv = csv_header() + "\n";
  json failures = json::array(), flags = json::array(), skipped = json::array();
  Worst thm11, lv, ps;
  std::map<std::string, json> per_dp;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& o = outcomes[i];
    for (const auto& f : o.failures) failures.push_back(f);
    for (const auto& f : o.flags) flags.push_back(f);
    if (o.skipped) skipped.push_back(*o.skipped);
    if (!o.report) continue;
    const BoundReport& r = *o.report;
    res.csv += csv_row(r) + "\n";
    thm11.see(r.ratio_thm11, i);
    lv.see(r.ratio_lv, i);
    ps.see(r.ratio_ps, i);
    auto& slot = per_dp["d=" + std::to_string(r.d) + ",p=" + std::to_string(r.p)];
    if (slot.is_null()) slot = {{"members", 0}};
    slot["members"] = slot["members"].get<int>() + 1;
    const auto bump = [&](const char* key, std::optional<double> v) {
      if (!v) return;
      if (!slot.contains(key) || slot[key].get<double>() < *v) slot[key] = *v;
    };
    bump("max_ratio_thm11", r.ratio_thm11);
    bump("max_ratio_lv", r.ratio_lv);
    bump("max_ratio_ps", r.ratio_ps);
    bump("max_containment_C", o.containment_C);
    bump("max_congruence_ratio", o.congruence_ratio);
  }
  res.passed = failures.empty();
  json dp = json::object();
  for (auto& [k, v] : per_dp) dp[k] = v;
  res.summary = {{"config", cfg.to_json()},
                 {"members", corpus.size()},
                 {"per_bound", {{"thm11", thm11.to_json()}, {"lv", lv.to_json()}, {"ps", ps.to_json()}}},
                 {"per_dp", dp},
                 {"failures", failures},
                 {"flagged", flags},
                 {"skipped", skipped}};
  return res;
}

namespace {

struct Common {
  long p = 0;
  long m = 0;
  std::string poly;
  std::uint64_t budget = kDefaultBudget;
};

PadicPoly read_uni(const Common& c) {
  auto v = parse_poly(c.poly, Prime(c.p));
  if (auto* f = std::get_if<PadicPoly>(&v)) return *f;
  throw ParseError("expected a univariate polynomial");
}

void print_sum(std::ostream& out, const SumValue& s) {
  out << "abs = " << format_double(s.abs()) << "\n"
      << "re = " << format_double(s.re()) << "\n"
      << "im = " << format_double(s.im()) << "\n"
      << "err = " << format_double(s.err) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic exponential sums and oscillatory integrals"};
  app.require_subcommand(1);

  Common c;
  const auto add_common = [&](CLI::App* sub, bool need_m, bool need_poly) {
    auto* po = sub->add_option("--p", c.p, "prime");
    po->required();
    auto* mo = sub->add_option("--m", c.m, "level exponent");
    if (need_m) mo->required();
    auto* pol = sub->add_option("--poly", c.poly, "polynomial, text or JSON");
    if (need_poly) pol->required();
    sub->add_option("--budget-pm", c.budget, "largest number of enumerated residues");
  };

  auto* sum = app.add_subcommand("sum", "complete sum S_m(f)");
  add_common(sum, true, true);

  auto* hinf = app.add_subcommand("hinf", "H infimum of p^-m f");
  add_common(hinf, false, true);

  auto* hensel = app.add_subcommand("hensel", "order-L Hensel lift");
  add_common(hensel, false, true);
  std::string t0_text = "0";
  int L = 1;
  long prec = 10;
  bool lenient = false;
  hensel->add_option("--t0", t0_text, "starting point")->required();
  hensel->add_option("--L", L, "order");
  hensel->add_option("--prec", prec, "target precision N");
  hensel->add_flag("--lenient", lenient, "record violated intermediate claims instead of failing");

  auto* polygon = app.add_subcommand("polygon", "Newton polygon");
  add_common(polygon, false, true);

  auto* basis = app.add_subcommand("basis", "directional basis as JSON");
  int bn = 2, bk = 2;
  basis->add_option("--n", bn, "variables")->required();
  basis->add_option("--k", bk, "degree")->required();

  auto* audit = app.add_subcommand("audit", "corpus audit: CSV rows and a JSON summary");
  std::string primes_text, degree_text, m_text, corpus_path, constants_path, out_path;
  std::uint64_t seed = 42, budget_pm = 0;
  std::size_t size = 0;
  unsigned threads = 0;
  audit->add_option("--p", primes_text, "comma separated primes");
  audit->add_option("--m", m_text, "m or a range lo-hi");
  audit->add_option("--degree", degree_text, "degree or a range lo-hi");
  audit->add_option("--seed", seed, "corpus seed");
  audit->add_option("--size", size, "corpus size");
  audit->add_option("--corpus", corpus_path, "JSON corpus configuration");
  audit->add_option("--constants-file", constants_path, "JSON candidate constants per bound");
  audit->add_option("--budget-pm", budget_pm, "largest p^m per member");
  audit->add_option("--out", out_path, "CSV path; the summary goes next to it with extension .json");
  audit->add_option("--threads", threads, "worker threads (0: hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sum->parsed()) {
      if (c.m < 0) throw ParseError("--m must be nonnegative");
      auto v = parse_poly(c.poly, Prime(c.p));
      if (auto* f = std::get_if<PadicPoly>(&v)) {
        print_sum(out, complete_sum(*f, static_cast<unsigned>(c.m), c.budget, false));
      } else {
        print_sum(out, multi_sum(std::get<MultiPadicPoly>(v), static_cast<unsigned>(c.m), c.budget));
      }
      return 0;
    }
    if (hinf->parsed()) {
      const Rational scale(Integer(1), pow(Prime(c.p), static_cast<unsigned long>(std::max(0L, c.m))));
      auto v = parse_poly(c.poly, Prime(c.p));
      if (auto* f = std::get_if<PadicPoly>(&v)) {
        const auto r = h_inf(f->scaled(scale));
        out << "h_inf = " << r.value.to_string() << "\n"
            << "witness = " << to_string(r.witness) << "\n";
        if (r.radius_exponent) out << "ball radius = p^-" << *r.radius_exponent << "\n";
      } else {
        const auto r = h_inf_multi(std::get<MultiPadicPoly>(v).scaled(scale), c.budget);
        out << "h_inf = " << r.value.to_string() << "\n" << "witness = (";
        for (std::size_t i = 0; i < r.witness.size(); ++i) out << (i ? "," : "") << r.witness[i].get_str();
        out << ")\nmodulus = p^" << r.modulus << "\n";
      }
      return 0;
    }
    if (hensel->parsed()) {
      const PadicPoly phi = read_uni(c);
      const Rational t0 = parse_rational(t0_text);
      const auto cert = check_hypotheses(phi, t0, L);
      out << "lambda = " << cert.lambda.to_string() << "\n"
          << "lambda_plus = " << cert.lambda_plus.to_string() << "\n"
          << "delta = " << cert.delta.to_string() << "\n";
      for (std::size_t k = 0; k < cert.delta_k.size(); ++k)
        out << "delta_" << k + 1 << " = " << cert.delta_k[k].to_string() << "\n";
      out << "step_bound = " << cert.step_bound.to_string() << "\n";
      if (!cert.hypotheses_met) {
        out << "hypotheses not met: " << cert.failing_condition << "\n";
        return 1;
      }
      const auto root = lift_root(phi, t0, L, prec, !lenient);
      out << "root = " << residue(root.t, phi.prime(), static_cast<unsigned long>(prec)).get_str() << " mod p^" << prec
          << "\n"
          << "distance = " << root.distance.to_string() << "\n"
          << "iterations = " << root.iterations << "\n";
      for (const auto& f : root.claim_failures) out << "violated claim " << f << "\n";
      return 0;
    }
    if (polygon->parsed()) {
      const auto np = newton_polygon(read_uni(c));
      if (np.zero_roots) out << "zero roots = " << np.zero_roots << "\n";
      for (const auto& s : np.segments) {
        out << "slope " << s.slope.numerator();
        if (s.slope.denominator() != 1) out << "/" << s.slope.denominator();
        out << " length " << s.length << "\n";
      }
      return 0;
    }
    if (basis->parsed()) {
      out << build_basis(bn, bk).to_json().dump(2) << "\n";
      return 0;
    }

    AuditConfig cfg;
    if (!corpus_path.empty()) cfg = config_from_json(read_json_file(corpus_path));
    if (!primes_text.empty()) cfg.corpus.primes = parse_prime_list(primes_text);
    if (!degree_text.empty()) {
      const auto [lo, hi] = parse_range(degree_text);
      cfg.corpus.min_degree = static_cast<int>(lo);
      cfg.corpus.max_degree = static_cast<int>(hi);
    }
    if (!m_text.empty()) {
      const auto [lo, hi] = parse_range(m_text);
      cfg.corpus.min_m = static_cast<unsigned>(lo);
      cfg.corpus.max_m = static_cast<unsigned>(hi);
    }
    if (audit->count("--seed")) cfg.corpus.seed = seed;
    if (audit->count("--size")) cfg.corpus.size = size;
    if (budget_pm) cfg.budget_pm = budget_pm;
    cfg.corpus.max_pm = cfg.budget_pm;
    cfg.threads = threads;
    if (!constants_path.empty()) cfg.constants = constants_from_json(read_json_file(constants_path));
    cfg = config_from_json(json::object(), cfg);

    const AuditResult res = run_audit(cfg);
    if (out_path.empty()) {
      out << res.csv;
      err << res.summary.dump(2) << "\n";
    } else {
      std::ofstream csv(out_path);
      csv << res.csv;
      std::string jpath = out_path;
      const auto dot = jpath.find_last_of('.');
      const auto slash = jpath.find_last_of('/');
      if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) jpath.erase(dot);
      std::ofstream summary(jpath + ".json");
      summary << res.summary.dump(2) << "\n";
      if (!csv || !summary) throw Error("cannot write " + out_path);
    }
    return res.passed ? 0 : 1;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace padicsum::cli

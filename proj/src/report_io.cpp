#include "hamnf/report_io.hpp"

#include "hamnf/errors.hpp"
#include "json_io.hpp"

#include <cstdio>
#include <sstream>

namespace hamnf {

using detail::In;
using detail::json;

namespace {

constexpr const char* kUndetermined = "undetermined (supply brouwer_index)";
constexpr const char* kStructuralUnavailable = "structural unavailable";
constexpr const char* kUserRequired = "user-required";

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string g6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

BrouwerSource brouwer_source_from(const In& in) {
  const std::string s = in.str();
  for (auto b : {BrouwerSource::Nondegenerate, BrouwerSource::UserSupplied,
                 BrouwerSource::Planar, BrouwerSource::Unknown}) {
    if (to_string(b) == s) return b;
  }
  in.fail("unknown Brouwer source '" + s + "'");
}

// -- to JSON ---------------------------------------------------------------

json to_json(const ImaginaryEigenvalue& ev) {
  return json{{"beta", ev.beta},
              {"algebraic_mult", ev.algebraic_mult},
              {"geometric_mult", ev.geometric_mult},
              {"jordan_partition", ev.jordan_partition},
              {"class", to_string(classify_eigenvalue(ev))},
              {"conditioning_warning", ev.conditioning_warning}};
}

json to_json(const LambdaSet& ls) {
  json src = json::array();
  for (const auto& s : ls.sources) {
    src.push_back({{"beta", s.beta}, {"multiples", s.multiples}});
  }
  return json{{"points", ls.points}, {"lambda_max", ls.lambda_max}, {"sources", src}};
}

json to_json(const ConditionReport& c) {
  json o;
  o["beta0"] = c.beta0;
  o["gamma"] = c.gamma;
  if (c.counts) {
    o["counts"] = {{"o_plus", c.counts->o_plus},
                   {"o_minus", c.counts->o_minus},
                   {"e_plus", c.counts->e_plus},
                   {"e_minus", c.counts->e_minus},
                   {"kappa", c.counts->kappa()}};
  } else {
    o["counts"] = nullptr;
  }
  json blocks = json::array();
  for (const auto& b : c.blocks) {
    blocks.push_back({{"beta", b.beta}, {"half_dim", b.half_dim}, {"epsilon", b.epsilon}});
  }
  o["blocks"] = blocks;
  o["structural_note"] = c.structural_note;
  o["brouwer"] = c.brouwer ? json(*c.brouwer) : json(kUserRequired);
  o["brouwer_source"] = to_string(c.brouwer_source);
  o["condition_holds"] =
      c.condition_holds ? json(*c.condition_holds) : json(kUndetermined);
  o["routes_agree"] =
      c.routes_agree ? json(*c.routes_agree) : json(kStructuralUnavailable);
  return o;
}

json to_json(const BifurcationIndex& b) {
  json entries = json::array();
  for (const auto& [j, eta] : b.entries) entries.push_back({{"j", j}, {"eta", eta}});
  return json{{"equilibrium_id", b.equilibrium_id},
              {"lambda0", b.lambda0},
              {"j_max", b.j_max},
              {"may_extend", b.may_extend},
              {"entries", entries}};
}

json to_json(const AssumptionCheck& a) {
  return json{{"holds", a.holds},
              {"certified_betas", a.certified_betas},
              {"diagnostics", a.diagnostics}};
}

json to_json(const AssumptionReport& a) {
  return json{{"A0", to_json(a.a0)},
              {"A1", to_json(a.a1)},
              {"A2", to_json(a.a2)},
              {"A3", a.a3 ? to_json(*a.a3) : json(nullptr)},
              {"A4", a.a4 ? to_json(*a.a4) : json(nullptr)}};
}

json to_json(const BranchSummary& s) {
  return json{{"beta0", s.beta0},
              {"termination", s.termination},
              {"message", s.message},
              {"orbit_count", s.orbit_count},
              {"lambda_first", s.lambda_first},
              {"lambda_last", s.lambda_last},
              {"amplitude_max", s.amplitude_max},
              {"residual_max", s.residual_max},
              {"energy_drift_max", s.energy_drift_max},
              {"period_limit_ok", s.period_limit_ok}};
}

json to_json(const BetaReport& b) {
  json o;
  o["beta"] = b.beta;
  o["condition"] = b.condition ? to_json(*b.condition) : json(nullptr);
  o["index"] = b.index ? to_json(*b.index) : json(nullptr);
  o["nonresonant"] = b.nonresonant ? json(*b.nonresonant) : json(nullptr);
  o["branch"] = b.branch ? to_json(*b.branch) : json(nullptr);
  o["error"] = b.error;
  return o;
}

json to_json(const EquilibriumReport& e) {
  json o;
  o["id"] = e.id;
  o["point"] = e.point;
  o["error"] = e.error;
  json spec = json::array();
  for (const auto& ev : e.spectrum) spec.push_back(to_json(ev));
  o["spectrum"] = spec;
  o["has_nonimaginary"] = e.has_nonimaginary;
  o["has_zero_eigenvalue"] = e.has_zero_eigenvalue;
  o["lambda_set"] = e.lambda_set ? to_json(*e.lambda_set) : json(nullptr);
  o["brouwer"] = e.brouwer ? json(*e.brouwer) : json(kUserRequired);
  o["brouwer_source"] = to_string(e.brouwer_source);
  json betas = json::array();
  for (const auto& b : e.betas) betas.push_back(to_json(b));
  o["betas"] = betas;
  o["assumptions"] = e.assumptions ? to_json(*e.assumptions) : json(nullptr);
  o["assumptions_error"] = e.assumptions_error;
  o["branch_lower_bound"] =
      e.branch_lower_bound ? json(*e.branch_lower_bound) : json(nullptr);
  return o;
}

// -- from JSON -------------------------------------------------------------

std::vector<int> ints(const In& in) {
  std::vector<int> v(in.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(in[i].integer());
  return v;
}

std::optional<int> int_or_user(const In& in) {
  if (in.is_string()) {
    if (in.str() != kUserRequired) in.fail("expected an integer or \"user-required\"");
    return std::nullopt;
  }
  return static_cast<int>(in.integer());
}

ImaginaryEigenvalue read_eigenvalue(const In& in) {
  ImaginaryEigenvalue ev;
  ev.beta = in.at("beta").num();
  ev.algebraic_mult = static_cast<int>(in.at("algebraic_mult").integer());
  ev.geometric_mult = static_cast<int>(in.at("geometric_mult").integer());
  ev.jordan_partition = ints(in.at("jordan_partition"));
  ev.conditioning_warning = in.at("conditioning_warning").boolean();
  return ev;
}

LambdaSet read_lambda_set(const In& in) {
  LambdaSet ls;
  ls.points = in.at("points").numbers();
  ls.lambda_max = in.at("lambda_max").num();
  const In src = in.at("sources");
  for (std::size_t i = 0; i < src.size(); ++i) {
    ls.sources.push_back({src[i].at("beta").num(), ints(src[i].at("multiples"))});
  }
  return ls;
}

ConditionReport read_condition(const In& in) {
  ConditionReport c;
  c.beta0 = in.at("beta0").num();
  c.gamma = static_cast<int>(in.at("gamma").integer());
  if (auto cn = in.opt("counts")) {
    BlockCounts bc;
    bc.o_plus = static_cast<int>(cn->at("o_plus").integer());
    bc.o_minus = static_cast<int>(cn->at("o_minus").integer());
    bc.e_plus = static_cast<int>(cn->at("e_plus").integer());
    bc.e_minus = static_cast<int>(cn->at("e_minus").integer());
    if (cn->at("kappa").integer() != bc.kappa()) cn->at("kappa").fail("inconsistent kappa");
    c.counts = bc;
  }
  const In blocks = in.at("blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    c.blocks.push_back({blocks[i].at("beta").num(),
                        static_cast<int>(blocks[i].at("half_dim").integer()),
                        static_cast<int>(blocks[i].at("epsilon").integer())});
  }
  c.structural_note = in.at("structural_note").str();
  c.brouwer = int_or_user(in.at("brouwer"));
  c.brouwer_source = brouwer_source_from(in.at("brouwer_source"));
  const In ch = in.at("condition_holds");
  if (ch.is_string()) {
    if (ch.str() != kUndetermined) ch.fail("unexpected verdict string");
  } else {
    c.condition_holds = ch.boolean();
  }
  const In ra = in.at("routes_agree");
  if (ra.is_string()) {
    if (ra.str() != kStructuralUnavailable) ra.fail("unexpected routes_agree string");
  } else {
    c.routes_agree = ra.boolean();
  }
  return c;
}

BifurcationIndex read_index(const In& in) {
  BifurcationIndex b;
  b.equilibrium_id = in.at("equilibrium_id").str();
  b.lambda0 = in.at("lambda0").num();
  b.j_max = static_cast<int>(in.at("j_max").integer());
  b.may_extend = in.at("may_extend").boolean();
  const In en = in.at("entries");
  for (std::size_t i = 0; i < en.size(); ++i) {
    b.entries[static_cast<int>(en[i].at("j").integer())] =
        static_cast<int>(en[i].at("eta").integer());
  }
  return b;
}

AssumptionCheck read_check(const In& in) {
  return AssumptionCheck{in.at("holds").boolean(), in.at("certified_betas").numbers(),
                         in.at("diagnostics").str()};
}

AssumptionReport read_assumptions(const In& in) {
  AssumptionReport a;
  a.a0 = read_check(in.at("A0"));
  a.a1 = read_check(in.at("A1"));
  a.a2 = read_check(in.at("A2"));
  if (auto v = in.opt("A3")) a.a3 = read_check(*v);
  if (auto v = in.opt("A4")) a.a4 = read_check(*v);
  return a;
}

BranchSummary read_branch(const In& in) {
  BranchSummary s;
  s.beta0 = in.at("beta0").num();
  s.termination = in.at("termination").str();
  s.message = in.at("message").str();
  s.orbit_count = static_cast<int>(in.at("orbit_count").integer());
  s.lambda_first = in.at("lambda_first").num();
  s.lambda_last = in.at("lambda_last").num();
  s.amplitude_max = in.at("amplitude_max").num();
  s.residual_max = in.at("residual_max").num();
  s.energy_drift_max = in.at("energy_drift_max").num();
  s.period_limit_ok = in.at("period_limit_ok").boolean();
  return s;
}

BetaReport read_beta(const In& in) {
  BetaReport b;
  b.beta = in.at("beta").num();
  if (auto v = in.opt("condition")) b.condition = read_condition(*v);
  if (auto v = in.opt("index")) b.index = read_index(*v);
  if (auto v = in.opt("nonresonant")) b.nonresonant = v->boolean();
  if (auto v = in.opt("branch")) b.branch = read_branch(*v);
  b.error = in.at("error").str();
  return b;
}

EquilibriumReport read_equilibrium(const In& in) {
  EquilibriumReport e;
  e.id = in.at("id").str();
  e.point = in.at("point").numbers();
  e.error = in.at("error").str();
  const In sp = in.at("spectrum");
  for (std::size_t i = 0; i < sp.size(); ++i) e.spectrum.push_back(read_eigenvalue(sp[i]));
  e.has_nonimaginary = in.at("has_nonimaginary").boolean();
  e.has_zero_eigenvalue = in.at("has_zero_eigenvalue").boolean();
  if (auto v = in.opt("lambda_set")) e.lambda_set = read_lambda_set(*v);
  e.brouwer = int_or_user(in.at("brouwer"));
  e.brouwer_source = brouwer_source_from(in.at("brouwer_source"));
  const In bs = in.at("betas");
  for (std::size_t i = 0; i < bs.size(); ++i) e.betas.push_back(read_beta(bs[i]));
  if (auto v = in.opt("assumptions")) e.assumptions = read_assumptions(*v);
  e.assumptions_error = in.at("assumptions_error").str();
  if (auto v = in.opt("branch_lower_bound")) {
    e.branch_lower_bound = static_cast<int>(v->integer());
  }
  return e;
}

// -- human-readable --------------------------------------------------------

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string betas_list(const std::vector<double>& v) {
  std::string s;
  for (double b : v) s += (s.empty() ? "" : ", ") + g6(b);
  return "{" + s + "}";
}

void human_assumption(std::ostringstream& out, const char* name,
                      const AssumptionCheck& a) {
  out << "    " << name << ": " << (a.holds ? "holds" : "fails");
  if (a.holds) out << ", certified beta " << betas_list(a.certified_betas);
  if (!a.diagnostics.empty()) out << " (" << a.diagnostics << ")";
  out << "\n";
}

void human_equilibrium(std::ostringstream& out, const EquilibriumReport& e) {
  out << "equilibrium " << e.id << " at (";
  for (std::size_t i = 0; i < e.point.size(); ++i) out << (i ? ", " : "") << g6(e.point[i]);
  out << ")\n";
  if (!e.error.empty()) {
    out << "  FAILED: " << e.error << "\n";
    return;
  }
  if (e.spectrum.empty()) {
    out << "  no purely imaginary eigenvalues: no candidate beta0, no branches\n";
  }
  for (const auto& ev : e.spectrum) {
    out << "  +-i*" << g6(ev.beta) << ": algebraic " << ev.algebraic_mult
        << ", geometric " << ev.geometric_mult << ", Jordan {";
    for (std::size_t i = 0; i < ev.jordan_partition.size(); ++i) {
      out << (i ? "," : "") << ev.jordan_partition[i];
    }
    out << "}, " << to_string(classify_eigenvalue(ev))
        << (ev.conditioning_warning ? " [ill-conditioned rank decision]" : "") << "\n";
  }
  if (e.has_nonimaginary) out << "  eigenvalues off the imaginary axis present\n";
  if (e.has_zero_eigenvalue) out << "  zero eigenvalue present\n";
  if (e.lambda_set) {
    out << "  Lambda up to " << g6(e.lambda_set->lambda_max) << ": "
        << betas_list(e.lambda_set->points) << "\n";
  }
  if (e.brouwer) {
    out << "  Brouwer index: " << *e.brouwer << " (" << to_string(e.brouwer_source)
        << ")\n";
  } else {
    out << "  Brouwer index: unknown, supply brouwer_index\n";
  }
  for (const auto& b : e.betas) {
    if (!b.error.empty()) {
      out << "  beta=" << g6(b.beta) << ": FAILED: " << b.error << "\n";
      continue;
    }
    if (b.condition) {
      out << "  " << verdict_line(*b.condition) << "\n";
      if (!b.condition->blocks.empty()) {
        out << "    blocks:";
        for (const auto& s : b.condition->blocks) {
          out << " (N=" << s.half_dim << ", eps=" << (s.epsilon > 0 ? "+1" : "-1") << ")";
        }
        out << "\n";
      }
      if (!b.condition->structural_note.empty()) {
        out << "    structural route: " << b.condition->structural_note << "\n";
      }
    }
    if (b.index) {
      out << "    BIF at lambda0=" << g6(b.index->lambda0) << ": ";
      if (b.index->trivial()) out << "Theta";
      for (const auto& [j, eta] : b.index->entries) out << "eta_" << j << "=" << eta << " ";
      out << " (j <= " << b.index->j_max
          << (b.index->may_extend ? ", larger j may contribute" : "") << ")\n";
    }
    if (b.nonresonant) out << "    nonresonant: " << yes_no(*b.nonresonant) << "\n";
    if (b.branch) {
      const auto& s = *b.branch;
      out << "    branch: " << s.orbit_count << " orbits, " << s.termination
          << ", lambda " << g6(s.lambda_first) << " -> " << g6(s.lambda_last)
          << ", max amplitude " << g6(s.amplitude_max) << ", max residual "
          << g6(s.residual_max) << ", max energy drift " << g6(s.energy_drift_max)
          << ", period limit " << (s.period_limit_ok ? "ok" : "violated");
      if (!s.message.empty()) out << " (" << s.message << ")";
      out << "\n";
    }
  }
  if (e.branch_lower_bound) {
    out << "  lower bound on connected branches: " << *e.branch_lower_bound << "\n";
  }
  if (e.assumptions) {
    out << "  classical assumptions:\n";
    human_assumption(out, "A0", e.assumptions->a0);
    human_assumption(out, "A1", e.assumptions->a1);
    human_assumption(out, "A2", e.assumptions->a2);
    if (e.assumptions->a3) human_assumption(out, "A3", *e.assumptions->a3);
    if (e.assumptions->a4) human_assumption(out, "A4", *e.assumptions->a4);
  }
  if (!e.assumptions_error.empty()) {
    out << "  classical assumptions: FAILED: " << e.assumptions_error << "\n";
  }
}

}  // namespace

std::string verdict_line(const ConditionReport& c) {
  std::ostringstream out;
  out << "beta=" << g6(c.beta0) << ": ";
  if (c.counts) {
    out << "o+=" << c.counts->o_plus << " o-=" << c.counts->o_minus
        << " e+=" << c.counts->e_plus << " e-=" << c.counts->e_minus
        << " kappa=" << c.counts->kappa();
  } else {
    out << "o+=? o-=? e+=? e-=? kappa=?";
  }
  out << " gamma=" << c.gamma << " | -2*kappa="
      << (c.counts ? std::to_string(-2 * c.counts->kappa()) : std::string("?"))
      << " | brouwer="
      << (c.brouwer ? std::to_string(*c.brouwer) : std::string(kUserRequired))
      << " | condition ";
  if (!c.condition_holds) {
    out << kUndetermined;
  } else {
    out << (*c.condition_holds ? "holds" : "fails");
  }
  out << " | routes ";
  if (!c.routes_agree) {
    out << kStructuralUnavailable;
  } else {
    out << (*c.routes_agree ? "agree" : "DISAGREE");
  }
  return out.str();
}

std::string emit_report(const AnalysisReport& report, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    json eqs = json::array();
    for (const auto& e : report.equilibria) eqs.push_back(to_json(e));
    json j{{"tool_version", report.tool_version},
           {"tolerances", detail::to_json(report.tolerances)},
           {"seed", report.seed},
           {"equilibria", eqs}};
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "hamnf " << report.tool_version << " report\n"
      << "tolerances: rank " << g6(report.tolerances.rank_tol) << ", eig_zero "
      << g6(report.tolerances.eig_zero_tol) << ", residual "
      << g6(report.tolerances.residual_tol) << "; seed " << report.seed << "\n\n";
  for (const auto& e : report.equilibria) {
    human_equilibrium(out, e);
    out << "\n";
  }
  return out.str();
}

AnalysisReport parse_report(const std::string& text) {
  const json j = detail::parse_json(text);
  const In root(j, "");
  AnalysisReport r;
  r.tool_version = root.at("tool_version").str();
  r.tolerances = detail::read_tolerances(root.at("tolerances"));
  r.seed = root.at("seed").uinteger();
  const In eqs = root.at("equilibria");
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    r.equilibria.push_back(read_equilibrium(eqs[i]));
  }
  return r;
}

std::string branch_csv(const Branch& branch) {
  std::ostringstream out;
  out << "index,lambda,amplitude,residual,energy_drift";
  const Eigen::Index n = branch.orbits.empty() ? branch.equilibrium.size()
                                               : branch.orbits.front().x0.size();
  for (Eigen::Index i = 0; i < n; ++i) out << ",x0_" << i;
  out << "\n";
  for (std::size_t k = 0; k < branch.orbits.size(); ++k) {
    const auto& o = branch.orbits[k];
    out << k << "," << g17(o.lambda) << "," << g17(o.amplitude) << ","
        << g17(o.residual) << "," << g17(o.energy_drift);
    for (Eigen::Index i = 0; i < o.x0.size(); ++i) out << "," << g17(o.x0(i));
    out << "\n";
  }
  return out.str();
}

}  // namespace hamnf

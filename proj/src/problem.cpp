#include "hamnf/problem.hpp"

#include "hamnf/errors.hpp"
#include "json_io.hpp"

#include <set>
#include <sstream>

namespace hamnf {

using detail::In;
using detail::json;
using detail::to_json;

namespace {

bool same(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

double max_abs(const Matrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

ContinuationConfig read_continuation(const In& in, bool& enabled) {
  ContinuationConfig c;
  if (auto v = in.opt("enabled")) enabled = v->boolean();
  if (auto v = in.opt("seed_amplitude")) c.seed_amplitude = v->num();
  if (auto v = in.opt("initial_step")) c.initial_step = v->num();
  if (auto v = in.opt("min_step")) c.min_step = v->num();
  if (auto v = in.opt("max_step")) c.max_step = v->num();
  if (auto v = in.opt("growth")) c.growth = v->num();
  if (auto v = in.opt("growth_after")) c.growth_after = static_cast<int>(v->integer());
  if (auto v = in.opt("max_steps")) c.max_steps = static_cast<int>(v->integer());
  if (auto v = in.opt("amplitude_cap")) c.amplitude_cap = v->num();
  if (auto v = in.opt("lambda_min")) c.lambda_min = v->num();
  if (auto v = in.opt("lambda_max")) c.lambda_max = v->num();
  if (auto cor = in.opt("corrector")) {
    if (auto v = cor->opt("tol")) c.corrector.tol = v->num();
    if (auto v = cor->opt("max_iters")) c.corrector.max_iters = static_cast<int>(v->integer());
    if (auto v = cor->opt("min_amplitude")) c.corrector.min_amplitude = v->num();
  }
  if (auto integ = in.opt("integrator")) {
    auto& ic = c.corrector.integrator;
    if (auto v = integ->opt("abs_tol")) ic.abs_tol = v->num();
    if (auto v = integ->opt("rel_tol")) ic.rel_tol = v->num();
    if (auto v = integ->opt("domain_bound")) ic.domain_bound = v->num();
    if (auto v = integ->opt("max_steps")) ic.max_steps = v->integer();
  }
  if (!(c.seed_amplitude > 0 && c.initial_step > 0 && c.min_step > 0 &&
        c.max_step >= c.min_step && c.growth >= 1.0 && c.growth_after >= 1 &&
        c.max_steps >= 0 && c.amplitude_cap > 0 && c.lambda_min >= 0 &&
        c.lambda_max > c.lambda_min && c.corrector.tol > 0 &&
        c.corrector.max_iters >= 1 && c.corrector.integrator.abs_tol > 0 &&
        c.corrector.integrator.rel_tol >= 0)) {
    in.fail("invalid continuation settings");
  }
  return c;
}

json continuation_json(const ContinuationConfig& c, bool enabled) {
  const auto& ic = c.corrector.integrator;
  return json{{"enabled", enabled},
              {"seed_amplitude", c.seed_amplitude},
              {"initial_step", c.initial_step},
              {"min_step", c.min_step},
              {"max_step", c.max_step},
              {"growth", c.growth},
              {"growth_after", c.growth_after},
              {"max_steps", c.max_steps},
              {"amplitude_cap", c.amplitude_cap},
              {"lambda_min", c.lambda_min},
              {"lambda_max", c.lambda_max},
              {"corrector",
               {{"tol", c.corrector.tol},
                {"max_iters", c.corrector.max_iters},
                {"min_amplitude", c.corrector.min_amplitude}}},
              {"integrator",
               {{"abs_tol", ic.abs_tol},
                {"rel_tol", ic.rel_tol},
                {"domain_bound", ic.domain_bound},
                {"max_steps", ic.max_steps}}}};
}

void check_consistency(const EquilibriumSpec& e,
                       const std::optional<PolynomialHamiltonian>& h,
                       const TolerancePolicy& tol) {
  if (!h) return;
  const Matrix& a = e.hessian.matrix();
  const Matrix hh = h->hessian(e.point);
  const double hdiff = max_abs(hh - a);
  if (hdiff > tol.residual_tol * (1.0 + max_abs(a))) {
    std::ostringstream s;
    s << "equilibrium '" << e.id
      << "': declared Hessian differs from the Hamiltonian's by " << hdiff;
    throw ConsistencyError(s.str());
  }
  const double g = h->gradient(e.point).lpNorm<Eigen::Infinity>();
  const double scale =
      (1.0 + e.point.lpNorm<Eigen::Infinity>()) * std::max(1.0, max_abs(a));
  if (g > tol.residual_tol * scale) {
    std::ostringstream s;
    s << "equilibrium '" << e.id << "': gradient does not vanish (|H'| = " << g
      << ")";
    throw ConsistencyError(s.str());
  }
}

}  // namespace

void validate_problem(const ProblemSpec& spec) {
  if (spec.dim <= 0 || spec.dim % 2) {
    throw ConsistencyError("dim must be positive and even");
  }
  if (spec.hamiltonian && spec.hamiltonian->dim() != spec.dim) {
    throw ConsistencyError("Hamiltonian dimension differs from dim");
  }
  std::set<std::string> ids;
  for (const auto& e : spec.equilibria) {
    if (!ids.insert(e.id).second) {
      throw ConsistencyError("duplicate equilibrium id '" + e.id + "'");
    }
    if (e.point.size() != spec.dim || e.hessian.dim() != spec.dim) {
      throw ConsistencyError("equilibrium '" + e.id + "' has the wrong dimension");
    }
    check_consistency(e, spec.hamiltonian, spec.analysis.tolerances);
  }
}

ProblemSpec parse_problem(const std::string& text) {
  const json j = detail::parse_json(text);
  const In root(j, "");
  ProblemSpec p;

  // Tolerances first: the consistency checks depend on them.
  if (auto an = root.opt("analysis")) {
    if (auto t = an->opt("tolerances")) {
      p.analysis.tolerances = detail::read_tolerances(*t);
    }
  }
  const TolerancePolicy& tol = p.analysis.tolerances;

  const In dim = root.at("dim");
  const long long d = dim.integer();
  if (d <= 0 || d % 2) dim.fail("dim must be a positive even integer");
  p.dim = static_cast<int>(d);
  const auto n = static_cast<std::size_t>(d);

  if (auto h = root.opt("hamiltonian")) {
    const In terms = h->at("terms");
    std::vector<Monomial> ms;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const In t = terms[k];
      Monomial m;
      m.coefficient = t.at("coefficient").num();
      const In ex = t.at("exponents");
      if (ex.size() != n) ex.fail("expected " + std::to_string(n) + " exponents");
      for (std::size_t i = 0; i < n; ++i) {
        const long long e = ex[i].integer();
        if (e < 0) ex[i].fail("negative exponent");
        m.exponents.push_back(static_cast<int>(e));
      }
      ms.push_back(std::move(m));
    }
    p.hamiltonian = PolynomialHamiltonian(p.dim, std::move(ms));
  }

  const In eqs = root.at("equilibria");
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    const In e = eqs[k];
    EquilibriumSpec es;
    es.id = e.has("id") ? e.at("id").str() : "eq" + std::to_string(k);
    es.point = e.has("point") ? e.at("point").vector(n) : Vector(Vector::Zero(d));
    if (auto hs = e.opt("hessian")) {
      const Matrix a = hs->matrix(n, n);
      const double asym = max_abs(a - a.transpose());
      if (asym > tol.residual_tol * std::max(1.0, max_abs(a))) {
        std::ostringstream s;
        s << "equilibrium '" << es.id << "': Hessian is not symmetric (mismatch "
          << asym << " at " << hs->path() << ")";
        throw ConsistencyError(s.str());
      }
      es.hessian = SymmetricMatrix(a);
    } else if (p.hamiltonian) {
      es.hessian = SymmetricMatrix(p.hamiltonian->hessian(es.point));
    } else {
      e.at("hessian");  // reports the missing field
    }
    if (auto b = e.opt("brouwer_index")) es.brouwer_index = static_cast<int>(b->integer());
    if (auto sp = e.opt("split")) {
      SymplecticSplit split;
      split.e1 = sp->at("e1").matrix(n);
      split.e2 = sp->at("e2").matrix(n);
      es.split = std::move(split);
    }
    p.equilibria.push_back(std::move(es));
  }

  if (auto an = root.opt("analysis")) {
    AnalysisSettings& s = p.analysis;
    if (auto v = an->opt("lambda_max")) {
      s.lambda_max = v->num();
      if (!(*s.lambda_max > 0)) v->fail("lambda_max must be positive");
    }
    if (auto v = an->opt("j_max")) {
      s.j_max = static_cast<int>(v->integer());
      if (*s.j_max < 1) v->fail("j_max must be >= 1");
    }
    if (auto v = an->opt("betas")) {
      if (v->is_string()) {
        if (v->str() != "all") v->fail("expected \"all\" or an array of numbers");
      } else {
        s.betas = v->numbers();
        for (std::size_t i = 0; i < s.betas->size(); ++i) {
          if (!((*s.betas)[i] > 0)) (*v)[i].fail("beta must be positive");
        }
      }
    }
    if (auto v = an->opt("seed")) s.seed = v->uinteger();
    if (auto v = an->opt("continuation")) {
      s.continuation_config = read_continuation(*v, s.continuation);
    }
  }

  try {
    validate_problem(p);
  } catch (const ConsistencyError&) {
    throw;
  } catch (const Error& e) {
    throw ConsistencyError(e.what());
  }
  return p;
}

std::string emit_problem(const ProblemSpec& spec) {
  json j;
  j["dim"] = spec.dim;
  json eqs = json::array();
  for (const auto& e : spec.equilibria) {
    json o{{"id", e.id},
           {"point", to_json(e.point)},
           {"hessian", to_json(e.hessian.matrix())}};
    if (e.brouwer_index) o["brouwer_index"] = *e.brouwer_index;
    if (e.split) o["split"] = {{"e1", to_json(e.split->e1)}, {"e2", to_json(e.split->e2)}};
    eqs.push_back(std::move(o));
  }
  j["equilibria"] = std::move(eqs);
  if (spec.hamiltonian) {
    json terms = json::array();
    for (const auto& t : spec.hamiltonian->terms()) {
      terms.push_back({{"coefficient", t.coefficient}, {"exponents", t.exponents}});
    }
    j["hamiltonian"] = {{"terms", std::move(terms)}};
  }
  const AnalysisSettings& s = spec.analysis;
  json an;
  if (s.lambda_max) an["lambda_max"] = *s.lambda_max;
  if (s.j_max) an["j_max"] = *s.j_max;
  an["tolerances"] = to_json(s.tolerances);
  if (s.betas) {
    an["betas"] = *s.betas;
  } else {
    an["betas"] = "all";
  }
  an["seed"] = s.seed;
  an["continuation"] = continuation_json(s.continuation_config, s.continuation);
  j["analysis"] = std::move(an);
  return j.dump(2) + "\n";
}

bool operator==(const EquilibriumSpec& a, const EquilibriumSpec& b) {
  if (a.id != b.id || !same(a.point, b.point) ||
      !same(a.hessian.matrix(), b.hessian.matrix()) ||
      a.brouwer_index != b.brouwer_index || a.split.has_value() != b.split.has_value()) {
    return false;
  }
  return !a.split ||
         (same(a.split->e1, b.split->e1) && same(a.split->e2, b.split->e2));
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  return a.dim == b.dim && a.equilibria == b.equilibria &&
         a.hamiltonian == b.hamiltonian && a.analysis == b.analysis;
}

}  // namespace hamnf

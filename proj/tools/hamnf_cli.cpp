// Command-line front end: analyze, normal-form, index and continue.

#include "hamnf/analysis.hpp"
#include "hamnf/errors.hpp"
#include "hamnf/problem.hpp"
#include "hamnf/report_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

struct Options {
  std::string input = "-";
  std::string output;
  std::string format = "human";
  std::optional<double> lambda_max;
  std::optional<int> j_max;
  std::vector<double> betas;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
};

std::string read_all(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw hamnf::ParseError(path, "cannot open input file");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

hamnf::ProblemSpec load(const Options& o) {
  hamnf::ProblemSpec spec = hamnf::parse_problem(read_all(o.input));
  auto& a = spec.analysis;
  if (o.tol_scale) {
    if (!(*o.tol_scale > 0)) throw hamnf::ParseError("--tol-scale", "must be positive");
    a.tolerances = a.tolerances.scaled(*o.tol_scale);
  }
  if (o.lambda_max) {
    if (!(*o.lambda_max > 0)) throw hamnf::ParseError("--lambda-max", "must be positive");
    a.lambda_max = o.lambda_max;
  }
  if (o.j_max) {
    if (*o.j_max < 1) throw hamnf::ParseError("--j-max", "must be >= 1");
    a.j_max = o.j_max;
  }
  if (!o.betas.empty()) a.betas = o.betas;
  if (o.seed) a.seed = *o.seed;
  return spec;
}

hamnf::ReportFormat report_format(const Options& o) {
  return o.format == "structured" || o.format == "json"
             ? hamnf::ReportFormat::Structured
             : hamnf::ReportFormat::Human;
}

int run_report(const Options& o, const hamnf::Stages& stages) {
  const hamnf::ProblemSpec spec = load(o);
  const hamnf::AnalysisResult res = hamnf::run_analysis(spec, stages);
  write_out(o.output, hamnf::emit_report(res.report, report_format(o)));
  return static_cast<int>(hamnf::report_status(res.report));
}

std::string sanitize(const std::string& s) {
  std::string r;
  for (char c : s) r += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return r;
}

int run_continue(const Options& o) {
  const hamnf::ProblemSpec spec = load(o);
  if (!spec.hamiltonian) {
    throw hamnf::ParseError("/hamiltonian", "continue needs a polynomial Hamiltonian");
  }
  hamnf::ProblemSpec s = spec;
  s.analysis.continuation = true;
  const hamnf::AnalysisResult res =
      hamnf::run_analysis(s, hamnf::Stages{false, false, true});

  int status = 0;
  for (const auto& b : res.branches) {
    if (b.orbits.empty()) status = 3;
  }
  for (const auto& e : res.report.equilibria) {
    if (!e.error.empty()) status = 3;
    for (const auto& b : e.betas) {
      if (!b.error.empty()) {
        std::cerr << e.id << " beta=" << b.beta << ": " << b.error << "\n";
        status = 3;
      }
    }
  }

  if (o.output.empty() || o.output == "-") {
    bool first = true;
    for (const auto& b : res.branches) {
      if (!first) std::cout << "\n";
      first = false;
      std::cout << "# equilibrium=" << b.equilibrium_id << " beta0=" << b.beta0
                << " termination=" << hamnf::to_string(b.termination) << "\n"
                << hamnf::branch_csv(b);
    }
    return status;
  }
  if (res.branches.size() == 1) {
    write_out(o.output, hamnf::branch_csv(res.branches.front()));
    return status;
  }
  const std::filesystem::path base(o.output);
  for (std::size_t k = 0; k < res.branches.size(); ++k) {
    const auto& b = res.branches[k];
    const std::filesystem::path p =
        base.parent_path() / (base.stem().string() + "-" + sanitize(b.equilibrium_id) +
                              "-" + std::to_string(k) + base.extension().string());
    write_out(p.string(), hamnf::branch_csv(b));
  }
  return status;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-i,--input", o.input, "problem JSON (default stdin)");
  sub->add_option("-o,--output", o.output, "output file (default stdout)");
  sub->add_option("--format", o.format, "human or structured")
      ->check(CLI::IsMember({"human", "structured", "json"}));
  sub->add_option("--lambda-max", o.lambda_max, "truncation of Lambda");
  sub->add_option("--j-max", o.j_max, "truncation of the bifurcation index");
  sub->add_option("--beta", o.betas, "restrict to these frequencies");
  sub->add_option("--seed", o.seed, "seed recorded in the report");
  sub->add_option("--tol-scale", o.tol_scale, "multiply every tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal forms, bifurcation indices and periodic branches of "
               "Hamiltonian equilibria"};
  app.require_subcommand(1);
  Options o;
  auto* analyze = app.add_subcommand("analyze", "full pipeline");
  auto* nf = app.add_subcommand("normal-form", "spectrum and block decomposition");
  auto* index = app.add_subcommand("index", "Lambda, gamma and the bifurcation index");
  auto* cont = app.add_subcommand("continue", "branches of periodic orbits as CSV");
  for (auto* s : {analyze, nf, index, cont}) add_common(s, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return run_report(o, hamnf::Stages{true, true, true});
    if (nf->parsed()) return run_report(o, hamnf::Stages{false, false, false});
    if (index->parsed()) return run_report(o, hamnf::Stages{true, false, false});
    return run_continue(o);
  } catch (const hamnf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const hamnf::ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return 2;
  } catch (const hamnf::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

#include "gpcpd/cli.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpcpd/approximate.hpp"
#include "gpcpd/bench.hpp"
#include "gpcpd/decompose.hpp"
#include "gpcpd/error.hpp"
#include "gpcpd/gevd.hpp"
#include "gpcpd/io.hpp"
#include "gpcpd/unfold.hpp"

namespace gpcpd {

namespace {

using nlohmann::json;

struct Common {
  std::string file;
  Index rank = 0;
  std::uint64_t seed = 0;
  std::string output;
  bool as_json = false;
  bool reshape = false;
};

json factors_json(const CPDecomposition& cp) { return json::parse(format_factors(cp)); }

std::vector<Index> one_based(const std::vector<Index>& modes) {
  std::vector<Index> out;
  for (Index a : modes) out.push_back(a + 1);
  return out;
}

int run_rank(const Common& c, double tol, std::ostream& out) {
  const DenseTensor t = read_tensor(c.file);
  const Index r = estimate_rank(t, tol);
  if (c.as_json) {
    const Eigen::VectorXd s = flattening_singular_values(t);
    json j{{"rank", r}, {"tol", tol}, {"singular_values", std::vector<double>(s.data(), s.data() + s.size())}};
    if (t.order() >= 2) {
      const FlattenPlan p = most_square_plan(t.dims());
      j["flattening"] = {{"group1", one_based(p.group1)}, {"group2", one_based(p.group2)}, {"rows", p.rows},
                         {"cols", p.cols}};
    }
    out << j.dump() << "\n";
  } else {
    out << r << "\n";
  }
  return kExitOk;
}

void emit_decomposition(const Common& c, const DenseTensor& t, const CPDecomposition& cp, json extra,
                        std::ostream& out) {
  const double resid = hs_norm(t - expand(cp));
  const double fn = hs_norm(t);
  if (!c.output.empty()) write_factors(c.output, cp);
  if (c.as_json) {
    extra["rank"] = cp.rank();
    extra["residual"] = resid;
    extra["relative_residual"] = fn > 0 ? resid / fn : 0.0;
    extra["factors"] = factors_json(cp);
    out << extra.dump() << "\n";
  } else {
    out << "rank " << cp.rank() << " decomposition, residual " << std::setprecision(6) << resid
        << " (relative " << (fn > 0 ? resid / fn : 0.0) << ")\n";
  }
}

int run_decompose(const Common& c, std::ostream& out) {
  const DenseTensor t = read_tensor(c.file);
  json extra = json::object();
  CPDecomposition cp = CPDecomposition::zeros(t.dims(), 0);
  if (c.reshape) {
    ReshapedRun run = decompose_reshaped_detailed(t, c.rank, c.seed);
    extra["reshape"] = {{"I1", one_based(run.plan.groups[0])},
                        {"I2", one_based(run.plan.groups[1])},
                        {"I3", one_based(run.plan.groups[2])},
                        {"p", run.plan.p},
                        {"max_unique_rank", run.plan.max_unique_rank},
                        {"max_split_ratio", run.max_split_ratio}};
    cp = std::move(run.cp);
  } else {
    GenPolyRun run = run_generating_polynomial(t, c.rank, c.seed);
    extra["xi_attempts"] = run.xi_attempts;
    extra["max_offdiag_ratio"] = run.modes.max_offdiag_ratio;
    cp = std::move(run.cp);
  }
  emit_decomposition(c, t, cp, std::move(extra), out);
  return kExitOk;
}

int run_approximate(const Common& c, bool refine, int max_iter, std::ostream& out) {
  const DenseTensor t = read_tensor(c.file);
  ApproxOptions opts;
  opts.seed = c.seed;
  opts.refine = refine;
  opts.max_als_iters = max_iter;
  const ApproxResult res = c.reshape ? approximate_reshaped(t, c.rank, opts) : approximate(t, c.rank, opts);
  const CPDecomposition& best = res.x_opt ? *res.x_opt : res.x_gp;
  if (!c.output.empty()) write_factors(c.output, best);
  if (c.as_json) {
    json j{{"rank", c.rank},
           {"resid_gp", res.resid_gp},
           {"resid_opt", res.resid_opt ? json(*res.resid_opt) : json(nullptr)},
           {"als_iters", res.als_iters},
           {"ridge_solves", res.ridge_solves},
           {"t_gp_ms", res.timings.gp_ms},
           {"t_opt_ms", res.x_opt ? json(res.timings.opt_ms) : json(nullptr)},
           {"factors", factors_json(best)}};
    out << j.dump() << "\n";
  } else {
    out << std::setprecision(5) << std::scientific << "||F - X_gp||  = " << res.resid_gp << "\n";
    if (res.resid_opt) out << "||F - X_opt|| = " << *res.resid_opt << " (" << res.als_iters << " ALS sweeps)\n";
  }
  return kExitOk;
}

int run_gevd(const Common& c, std::ostream& out) {
  const DenseTensor t = read_tensor(c.file);
  GevdRun run = gevd_decompose_detailed(t, c.rank, c.seed);
  json extra{{"retried", run.ws.retried}, {"pencil_condition", run.ws.pencil_condition}};
  emit_decomposition(c, t, run.cp, std::move(extra), out);
  return kExitOk;
}

std::string fmt_opt(const std::optional<double>& v, int prec = 4) {
  if (!v) return "-";
  std::ostringstream ss;
  ss << std::setprecision(prec) << *v;
  return ss.str();
}

int run_bench_cmd(const BenchConfig& cfg, const Common& c, std::ostream& out) {
  const BenchReport rep = run_bench(cfg);
  const std::string text = format_report(rep);
  if (!c.output.empty()) write_file(c.output, text);
  if (c.as_json) {
    out << text;
    return kExitOk;
  }
  out << "epsilon      done fail  rho_gp      rho_opt  rho_gevd  t_gp_ms  t_opt_ms  t_gevd_ms\n";
  for (const auto& cell : rep.cells) {
    out << std::left << std::setw(12) << cell.epsilon << " " << std::setw(4) << cell.completed << " "
        << std::setw(4) << cell.failures << " " << std::setw(11) << fmt_opt(cell.median_rho_gp) << " "
        << std::setw(8) << fmt_opt(cell.median_rho_opt) << " " << std::setw(9) << fmt_opt(cell.median_rho_gevd)
        << " " << std::setw(8) << fmt_opt(cell.median_t_gp_ms) << " " << std::setw(9)
        << fmt_opt(cell.median_t_opt_ms) << " " << fmt_opt(cell.median_t_gevd_ms) << "\n";
  }
  return kExitOk;
}

int run_generate(const Dims& dims, Index r, double eps, std::uint64_t seed, const std::string& path,
                 const std::string& truth, std::ostream& out) {
  const PerturbationInstance inst = gen_instance(dims, r, eps, seed);
  write_tensor(path, inst.f);
  if (!truth.empty()) write_factors(truth, inst.truth);
  out << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CP decomposition and low-rank approximation by generating polynomials"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  double tol = kDefaultRankTol;
  bool refine = false;
  int max_iter = 500;
  BenchConfig bcfg;
  std::string method = "gp";
  double gen_eps = 0.0;
  std::string truth_path;

  auto add_common = [&](CLI::App* sub, bool needs_rank) {
    sub->add_flag("--json", c.as_json, "Machine-readable output on stdout");
    sub->add_option("--output", c.output, "Output file");
    if (needs_rank) {
      sub->add_option("--rank", c.rank, "Target rank")->required()->check(CLI::PositiveNumber);
      sub->add_option("--seed", c.seed, "Random seed");
    }
  };

  auto* rank = app.add_subcommand("rank", "Estimate rank from the most square flattening");
  rank->add_option("file", c.file, "ctensor-v1 file")->required();
  rank->add_option("--tol", tol, "Relative singular value threshold")->check(CLI::Range(0.0, 1.0));
  add_common(rank, false);

  auto* dec = app.add_subcommand("decompose", "Exact rank-r decomposition");
  dec->add_option("file", c.file, "ctensor-v1 file")->required();
  dec->add_flag("--reshape", c.reshape, "Decompose through an order-3 reshape");
  add_common(dec, true);

  auto* apx = app.add_subcommand("approximate", "Rank-r approximation");
  apx->add_option("file", c.file, "ctensor-v1 file")->required();
  apx->add_flag("--refine", refine, "Refine with alternating least squares");
  apx->add_option("--max-iter", max_iter, "Maximum ALS sweeps")->check(CLI::PositiveNumber);
  apx->add_flag("--reshape", c.reshape, "Approximate through an order-3 reshape");
  add_common(apx, true);

  auto* gev = app.add_subcommand("gevd", "GEVD baseline decomposition (order 3)");
  gev->add_option("file", c.file, "ctensor-v1 file")->required();
  add_common(gev, true);

  auto* bench = app.add_subcommand("bench", "Perturbation benchmark");
  bench->add_option("--dims", bcfg.dims, "Dimensions, comma separated")->required()->delimiter(',')->check(
      CLI::PositiveNumber);
  bench->add_option("--eps", bcfg.eps, "Noise levels, comma separated (0 = exact)")->delimiter(',')->check(
      CLI::NonNegativeNumber);
  bench->add_option("--trials", bcfg.trials, "Trials per noise level")->check(CLI::NonNegativeNumber);
  bench->add_flag("--reshape", bcfg.reshape, "Use the reshaped approximation");
  bench->add_option("--method", method, "gp, gevd or both")->check(CLI::IsMember({"gp", "gevd", "both"}));
  bench->add_option("--max-iter", bcfg.max_iter, "Maximum ALS sweeps")->check(CLI::PositiveNumber);
  add_common(bench, true);

  Dims gen_dims;
  auto* gen = app.add_subcommand("generate", "Write a seeded perturbation instance");
  gen->add_option("--dims", gen_dims, "Dimensions, comma separated")->required()->delimiter(',')->check(
      CLI::PositiveNumber);
  gen->add_option("--eps", gen_eps, "Noise norm")->check(CLI::NonNegativeNumber);
  gen->add_option("--truth", truth_path, "Write the planted factors here");
  add_common(gen, true);
  gen->get_option("--output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rank) return run_rank(c, tol, out);
    if (*dec) return run_decompose(c, out);
    if (*apx) return run_approximate(c, refine, max_iter, out);
    if (*gev) return run_gevd(c, out);
    if (*bench) {
      bcfg.r = c.rank;
      bcfg.seed = c.seed;
      bcfg.method = method == "gevd" ? BenchMethod::Gevd : method == "both" ? BenchMethod::Both : BenchMethod::Gp;
      return run_bench_cmd(bcfg, c, out);
    }
    if (*gen) return run_generate(gen_dims, c.rank, gen_eps, c.seed, c.output, truth_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace gpcpd

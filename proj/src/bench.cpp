#include "gpcpd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "gpcpd/approximate.hpp"
#include "gpcpd/error.hpp"
#include "gpcpd/gevd.hpp"
#include "gpcpd/random.hpp"

namespace gpcpd {

PerturbationInstance gen_instance(const Dims& dims, Index r, double epsilon, std::uint64_t seed) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "rank must be positive");
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  Rng rng(seed);
  std::vector<Matrix> f;
  for (Index n : dims) f.push_back(rng.complex_gaussian_matrix(n, r));
  PerturbationInstance inst;
  inst.truth = CPDecomposition(std::move(f));
  inst.r = expand(inst.truth);
  inst.e = DenseTensor(dims);
  if (epsilon > 0.0) {
    for (Index i = 0; i < inst.e.size(); ++i) inst.e[i] = rng.complex_gaussian();
    inst.e *= epsilon / hs_norm(inst.e);
  }
  inst.f = inst.r + inst.e;
  inst.epsilon = epsilon;
  inst.seed = seed;
  inst.r_true = r;
  return inst;
}

RelativeError relative_errors(const DenseTensor& f, const CPDecomposition& x, double e_norm) {
  if (!(e_norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "e_norm must be positive");
  RelativeError out;
  out.resid = hs_norm(f - expand(x));
  out.rho = out.resid / e_norm;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

BenchCell summarize(double eps, const std::vector<BenchRecord>& recs) {
  BenchCell c;
  c.epsilon = eps;
  auto collect = [&](std::optional<double> BenchRecord::*field) {
    std::vector<double> v;
    for (const auto& r : recs) {
      if (!r.failure && r.*field) v.push_back(*(r.*field));
    }
    return v;
  };
  auto med = [&](std::optional<double> BenchRecord::*field) -> std::optional<double> {
    auto v = collect(field);
    if (v.empty()) return std::nullopt;
    return median(std::move(v));
  };
  auto mean = [&](std::optional<double> BenchRecord::*field) -> std::optional<double> {
    auto v = collect(field);
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (const auto& r : recs) (r.failure ? c.failures : c.completed)++;
  c.median_rho_gp = med(&BenchRecord::rho_gp);
  c.median_rho_opt = med(&BenchRecord::rho_opt);
  c.median_rho_gevd = med(&BenchRecord::rho_gevd);
  c.median_t_gp_ms = med(&BenchRecord::t_gp_ms);
  c.median_t_opt_ms = med(&BenchRecord::t_opt_ms);
  c.median_t_gevd_ms = med(&BenchRecord::t_gevd_ms);
  c.mean_t_gp_ms = mean(&BenchRecord::t_gp_ms);
  c.mean_t_opt_ms = mean(&BenchRecord::t_opt_ms);
  c.mean_t_gevd_ms = mean(&BenchRecord::t_gevd_ms);
  return c;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be nonnegative");
  if (config.dims.empty()) throw Error(ErrorCode::InvalidArgument, "bench dims must be nonempty");
  BenchReport report;
  report.config = config;
  for (double eps : config.eps) {
    std::vector<BenchRecord> cell;
    for (int trial = 0; trial < config.trials; ++trial) {
      BenchRecord rec;
      rec.dims = config.dims;
      rec.r = config.r;
      rec.epsilon = eps;
      rec.trial = trial;
      rec.seed = config.seed + static_cast<std::uint64_t>(trial);
      try {
        const PerturbationInstance inst = gen_instance(config.dims, config.r, eps, rec.seed);
        const double denom = eps > 0.0 ? hs_norm(inst.e) : hs_norm(inst.f);
        if (config.method != BenchMethod::Gevd) {
          ApproxOptions opts;
          opts.seed = rec.seed;
          opts.refine = true;
          opts.max_als_iters = config.max_iter;
          const ApproxResult res =
              config.reshape ? approximate_reshaped(inst.f, config.r, opts) : approximate(inst.f, config.r, opts);
          rec.resid_gp = res.resid_gp;
          rec.rho_gp = res.resid_gp / denom;
          rec.resid_opt = res.resid_opt;
          rec.rho_opt = *res.resid_opt / denom;
          rec.t_gp_ms = res.timings.gp_ms;
          rec.t_opt_ms = res.timings.opt_ms;
          rec.als_iters = res.als_iters;
        }
        if (config.method != BenchMethod::Gp) {
          const auto t0 = Clock::now();
          const CPDecomposition x = gevd_decompose(inst.f, config.r, rec.seed);
          rec.t_gevd_ms = ms_since(t0);
          const RelativeError re = relative_errors(inst.f, x, denom);
          rec.resid_gevd = re.resid;
          rec.rho_gevd = re.rho;
        }
      } catch (const Error& e) {
        rec.failure = e.what();
      }
      cell.push_back(std::move(rec));
    }
    report.cells.push_back(summarize(eps, cell));
    for (auto& r : cell) report.records.push_back(std::move(r));
  }
  return report;
}

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

const char* method_name(BenchMethod m) {
  switch (m) {
    case BenchMethod::Gp: return "gp";
    case BenchMethod::Gevd: return "gevd";
    case BenchMethod::Both: return "both";
  }
  return "gp";
}

}  // namespace

std::string format_report(const BenchReport& report) {
  using nlohmann::json;
  const auto& c = report.config;
  json j;
  j["format"] = "benchreport-v1";
  j["config"] = {{"dims", c.dims},       {"r", c.r},
                 {"eps", c.eps},         {"trials", c.trials},
                 {"seed", c.seed},       {"reshape", c.reshape},
                 {"method", method_name(c.method)}, {"max_iter", c.max_iter}};
  json recs = json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"dims", r.dims},
                    {"r", r.r},
                    {"epsilon", r.epsilon},
                    {"seed", r.seed},
                    {"trial", r.trial},
                    {"rho_gp", opt(r.rho_gp)},
                    {"rho_opt", opt(r.rho_opt)},
                    {"t_gp_ms", opt(r.t_gp_ms)},
                    {"t_opt_ms", opt(r.t_opt_ms)},
                    {"resid_gp", opt(r.resid_gp)},
                    {"resid_opt", opt(r.resid_opt)},
                    {"als_iters", opt(r.als_iters)},
                    {"rho_gevd", opt(r.rho_gevd)},
                    {"t_gevd_ms", opt(r.t_gevd_ms)},
                    {"resid_gevd", opt(r.resid_gevd)},
                    {"failure", opt(r.failure)}});
  }
  j["records"] = std::move(recs);
  json cells = json::array();
  for (const auto& m : report.cells) {
    cells.push_back({{"epsilon", m.epsilon},
                     {"completed", m.completed},
                     {"failures", m.failures},
                     {"median_rho_gp", opt(m.median_rho_gp)},
                     {"median_rho_opt", opt(m.median_rho_opt)},
                     {"median_rho_gevd", opt(m.median_rho_gevd)},
                     {"median_t_gp_ms", opt(m.median_t_gp_ms)},
                     {"median_t_opt_ms", opt(m.median_t_opt_ms)},
                     {"median_t_gevd_ms", opt(m.median_t_gevd_ms)},
                     {"mean_t_gp_ms", opt(m.mean_t_gp_ms)},
                     {"mean_t_opt_ms", opt(m.mean_t_opt_ms)},
                     {"mean_t_gevd_ms", opt(m.mean_t_gevd_ms)}});
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

}  // namespace gpcpd

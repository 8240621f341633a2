#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpcpd/cp.hpp"
#include "gpcpd/tensor.hpp"

namespace gpcpd {

struct PerturbationInstance {
  DenseTensor r{Dims{1}};  // planted rank-r_true tensor
  DenseTensor e{Dims{1}};  // noise with ||E|| = epsilon
  DenseTensor f{Dims{1}};  // R + E
  CPDecomposition truth = CPDecomposition::zeros({1}, 0);
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  Index r_true = 0;
};

/// Factor entries and noise entries are complex Gaussians drawn from one Rng:
/// factors mode by mode, column by column, then E in row-major order.
PerturbationInstance gen_instance(const Dims& dims, Index r, double epsilon, std::uint64_t seed);

struct RelativeError {
  double rho = 0.0;
  double resid = 0.0;
};
RelativeError relative_errors(const DenseTensor& f, const CPDecomposition& x, double e_norm);

enum class BenchMethod { Gp, Gevd, Both };

struct BenchConfig {
  Dims dims;
  Index r = 1;
  /// Noise levels; 0 means an exact instance.
  std::vector<double> eps{0.0};
  int trials = 1;
  std::uint64_t seed = 0;
  bool reshape = false;
  BenchMethod method = BenchMethod::Gp;
  int max_iter = 500;
};

/// One (epsilon, trial) run.  For exact instances rho values are relative to
/// ||F|| instead of ||E||.
struct BenchRecord {
  Dims dims;
  Index r = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
  std::optional<double> rho_gp;
  std::optional<double> rho_opt;
  std::optional<double> t_gp_ms;
  std::optional<double> t_opt_ms;
  std::optional<double> resid_gp;
  std::optional<double> resid_opt;
  std::optional<int> als_iters;
  std::optional<double> rho_gevd;
  std::optional<double> t_gevd_ms;
  std::optional<double> resid_gevd;
  std::optional<std::string> failure;
};

struct BenchCell {
  double epsilon = 0.0;
  int completed = 0;
  int failures = 0;
  std::optional<double> median_rho_gp, median_rho_opt, median_rho_gevd;
  std::optional<double> median_t_gp_ms, median_t_opt_ms, median_t_gevd_ms;
  std::optional<double> mean_t_gp_ms, mean_t_opt_ms, mean_t_gevd_ms;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRecord> records;  // sorted by (epsilon index, trial)
  std::vector<BenchCell> cells;      // one per epsilon
};

/// Trial t of noise level e uses seed config.seed + t, so every epsilon sees
/// the same planted tensors.
BenchReport run_bench(const BenchConfig& config);

/// benchreport-v1 JSON.  Timing fields are the only run-to-run differences.
std::string format_report(const BenchReport& report);

double median(std::vector<double> values);

}  // namespace gpcpd

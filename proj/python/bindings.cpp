#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpcpd/approximate.hpp"
#include "gpcpd/bench.hpp"
#include "gpcpd/decompose.hpp"
#include "gpcpd/error.hpp"
#include "gpcpd/fixtures.hpp"
#include "gpcpd/gevd.hpp"
#include "gpcpd/io.hpp"
#include "gpcpd/unfold.hpp"

namespace py = pybind11;
using namespace gpcpd;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

DenseTensor to_tensor(const CArray& a) {
  if (a.ndim() < 1) throw Error(ErrorCode::InvalidArgument, "tensor must have at least one mode");
  Dims dims(a.shape(), a.shape() + a.ndim());
  return DenseTensor(dims, std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray to_array(const DenseTensor& t) {
  std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
  CArray out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

std::vector<Matrix> factors_of(const CPDecomposition& cp) { return cp.factors(); }

py::dict approx_dict(const ApproxResult& r) {
  py::dict d;
  d["x_gp"] = factors_of(r.x_gp);
  d["x_opt"] = r.x_opt ? py::cast(factors_of(*r.x_opt)) : py::none();
  d["resid_gp"] = r.resid_gp;
  d["resid_opt"] = r.resid_opt ? py::cast(*r.resid_opt) : py::none();
  d["als_iters"] = r.als_iters;
  d["t_gp_ms"] = r.timings.gp_ms;
  d["t_opt_ms"] = r.timings.opt_ms;
  return d;
}

ApproxOptions options(std::uint64_t seed, bool refine, int max_iter) {
  ApproxOptions o;
  o.seed = seed;
  o.refine = refine;
  o.max_als_iters = max_iter;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CP decomposition and low-rank approximation by generating polynomials";

  // Messages carry the error code as a prefix, e.g. "rank_bound: ...".
  py::register_exception<Error>(m, "GpcpdError");

  m.def("expand", [](const std::vector<Matrix>& f) { return to_array(expand(CPDecomposition(f))); },
        py::arg("factors"));
  m.def("estimate_rank", [](const CArray& t, double tol) { return estimate_rank(to_tensor(t), tol); },
        py::arg("tensor"), py::arg("tol") = kDefaultRankTol);
  m.def("flattening_singular_values", [](const CArray& t) { return flattening_singular_values(to_tensor(t)); },
        py::arg("tensor"));
  m.def(
      "decompose",
      [](const CArray& t, Index r, std::uint64_t seed, bool reshape) {
        const DenseTensor f = to_tensor(t);
        return factors_of(reshape ? decompose_reshaped(f, r, seed) : decompose(f, r, seed));
      },
      py::arg("tensor"), py::arg("rank"), py::arg("seed") = 0, py::arg("reshape") = false);
  m.def(
      "approximate",
      [](const CArray& t, Index r, std::uint64_t seed, bool refine, int max_iter, bool reshape) {
        const DenseTensor f = to_tensor(t);
        const ApproxOptions o = options(seed, refine, max_iter);
        return approx_dict(reshape ? approximate_reshaped(f, r, o) : approximate(f, r, o));
      },
      py::arg("tensor"), py::arg("rank"), py::arg("seed") = 0, py::arg("refine") = false,
      py::arg("max_iter") = 500, py::arg("reshape") = false);
  m.def(
      "gevd_decompose",
      [](const CArray& t, Index r, std::uint64_t seed) { return factors_of(gevd_decompose(to_tensor(t), r, seed)); },
      py::arg("tensor"), py::arg("rank"), py::arg("seed") = 0);
  m.def("rank1_approx", [](const CArray& t) { return factors_of(rank1_approx(to_tensor(t))); }, py::arg("tensor"));
  m.def(
      "cp_equivalent",
      [](const std::vector<Matrix>& a, const std::vector<Matrix>& b, double tol) {
        return cp_equivalent(CPDecomposition(a), CPDecomposition(b), tol);
      },
      py::arg("a"), py::arg("b"), py::arg("tol"));
  m.def(
      "gen_instance",
      [](const Dims& dims, Index r, double eps, std::uint64_t seed) {
        const PerturbationInstance inst = gen_instance(dims, r, eps, seed);
        py::dict d;
        d["f"] = to_array(inst.f);
        d["r"] = to_array(inst.r);
        d["e"] = to_array(inst.e);
        d["truth"] = factors_of(inst.truth);
        return d;
      },
      py::arg("dims"), py::arg("rank"), py::arg("epsilon"), py::arg("seed"));
  m.def(
      "bench_json",
      [](const Dims& dims, Index r, const std::vector<double>& eps, int trials, std::uint64_t seed, bool reshape,
         const std::string& method, int max_iter) {
        BenchConfig c;
        c.dims = dims;
        c.r = r;
        c.eps = eps;
        c.trials = trials;
        c.seed = seed;
        c.reshape = reshape;
        c.max_iter = max_iter;
        if (method == "gp") {
          c.method = BenchMethod::Gp;
        } else if (method == "gevd") {
          c.method = BenchMethod::Gevd;
        } else if (method == "both") {
          c.method = BenchMethod::Both;
        } else {
          throw Error(ErrorCode::InvalidArgument, "method must be gp, gevd or both");
        }
        py::gil_scoped_release release;
        return format_report(run_bench(c));
      },
      py::arg("dims"), py::arg("rank"), py::arg("eps"), py::arg("trials") = 1, py::arg("seed") = 0,
      py::arg("reshape") = false, py::arg("method") = "gp", py::arg("max_iter") = 500);
  m.def("read_tensor", [](const std::string& p) { return to_array(read_tensor(p)); }, py::arg("path"));
  m.def("write_tensor", [](const std::string& p, const CArray& t) { write_tensor(p, to_tensor(t)); },
        py::arg("path"), py::arg("tensor"));
  m.def("read_factors", [](const std::string& p) { return factors_of(read_factors(p)); }, py::arg("path"));
  m.def(
      "write_factors",
      [](const std::string& p, const std::vector<Matrix>& f) { write_factors(p, CPDecomposition(f)); },
      py::arg("path"), py::arg("factors"));
  m.def("sqrt_sum_tensor", [](const Dims& d) { return to_array(sqrt_sum_tensor(d)); }, py::arg("dims") = Dims{5, 5, 4});
  m.def("arctan_tensor", [](const Dims& d) { return to_array(arctan_tensor(d)); },
        py::arg("dims") = Dims{6, 6, 6, 5, 4});
}

"""CP decomposition and low-rank approximation of complex tensors.

Tensors are numpy complex arrays (C order); a decomposition is a list of
factor matrices, factor j of shape (n_j, r).
"""

from ._core import (
    GpcpdError,
    approximate,
    arctan_tensor,
    cp_equivalent,
    decompose,
    estimate_rank,
    expand,
    flattening_singular_values,
    gen_instance,
    gevd_decompose,
    rank1_approx,
    read_factors,
    read_tensor,
    sqrt_sum_tensor,
    write_factors,
    write_tensor,
)
from ._core import bench_json as _bench_json


def bench(dims, rank, eps, trials=1, seed=0, reshape=False, method="gp", max_iter=500):
    """Run the perturbation benchmark and return the benchreport-v1 dict."""
    import json

    return json.loads(_bench_json(list(dims), rank, list(eps), trials, seed, reshape, method, max_iter))


__all__ = [
    "GpcpdError",
    "approximate",
    "arctan_tensor",
    "bench",
    "cp_equivalent",
    "decompose",
    "estimate_rank",
    "expand",
    "flattening_singular_values",
    "gen_instance",
    "gevd_decompose",
    "rank1_approx",
    "read_factors",
    "read_tensor",
    "sqrt_sum_tensor",
    "write_factors",
    "write_tensor",
]

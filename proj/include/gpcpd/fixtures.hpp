#pragma once

#include "gpcpd/tensor.hpp"

namespace gpcpd {

/// F(i1, i2, i3) = i1 + i2/2 + i3/3 + sqrt(i1^2 + i2^2 + i3^2), 1-based indices.
DenseTensor sqrt_sum_tensor(const Dims& dims = {5, 5, 4});

/// F(i1, ..., im) = arctan(i1 + 2 i2 + ... + m im), 1-based indices.
DenseTensor arctan_tensor(const Dims& dims = {6, 6, 6, 5, 4});

}  // namespace gpcpd

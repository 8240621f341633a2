#include "gpcpd/fixtures.hpp"

#include <cmath>

#include "gpcpd/error.hpp"

namespace gpcpd {

DenseTensor sqrt_sum_tensor(const Dims& dims) {
  if (dims.size() != 3) throw Error(ErrorCode::InvalidArgument, "sqrt_sum_tensor is order 3");
  DenseTensor t(dims);
  Index pos = 0;
  for_each_index(dims, [&](std::span<const Index> idx) {
    const double a = static_cast<double>(idx[0] + 1);
    const double b = static_cast<double>(idx[1] + 1);
    const double c = static_cast<double>(idx[2] + 1);
    t[pos++] = a + b / 2.0 + c / 3.0 + std::sqrt(a * a + b * b + c * c);
  });
  return t;
}

DenseTensor arctan_tensor(const Dims& dims) {
  DenseTensor t(dims);
  Index pos = 0;
  for_each_index(dims, [&](std::span<const Index> idx) {
    double s = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) s += static_cast<double>(k + 1) * static_cast<double>(idx[k] + 1);
    t[pos++] = std::atan(s);
  });
  return t;
}

}  // namespace gpcpd

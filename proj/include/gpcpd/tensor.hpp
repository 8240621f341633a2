#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gpcpd {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<Index>;

Index product(std::span<const Index> dims);

/// Dense complex tensor of order m >= 1, stored row-major (last index
/// fastest).  Multi-indices are 0-based throughout the library.
class DenseTensor {
 public:
  /// Zero tensor.
  explicit DenseTensor(Dims dims);
  DenseTensor(Dims dims, std::vector<Complex> data);

  const Dims& dims() const noexcept { return dims_; }
  Index dim(Index mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
  Index order() const noexcept { return static_cast<Index>(dims_.size()); }
  Index size() const noexcept { return static_cast<Index>(data_.size()); }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  /// Row-major strides, stride(order-1) == 1.
  const std::vector<Index>& strides() const noexcept { return strides_; }
  Index linear_index(std::span<const Index> idx) const;

  Complex operator()(std::span<const Index> idx) const { return data_[linear_index(idx)]; }
  Complex& operator()(std::span<const Index> idx) { return data_[linear_index(idx)]; }
  Complex operator[](Index linear) const { return data_[static_cast<std::size_t>(linear)]; }
  Complex& operator[](Index linear) { return data_[static_cast<std::size_t>(linear)]; }

  /// The tensor viewed as an n_1 x (n_2...n_m) row-major matrix.
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  leading_unfolding() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(Complex scale);

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Dims dims_;
  std::vector<Index> strides_;
  std::vector<Complex> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);

/// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const DenseTensor& t);

/// Tensor whose mode a is mode perm[a] of the input.
DenseTensor permute_modes(const DenseTensor& t, std::span<const Index> perm);

/// Contiguous sub-block along mode 0: rows [begin, end).
DenseTensor leading_rows(const DenseTensor& t, Index begin, Index end);

/// Unfolding with `mode` as rows and the remaining modes (ascending,
/// row-major) as columns.
Matrix unfold(const DenseTensor& t, Index mode);

/// Permutation sorting dims into non-increasing order (stable).
std::vector<Index> descending_order(std::span<const Index> dims);

/// Calls f(multi_index) for every index of `dims` in row-major order.
template <typename F>
void for_each_index(std::span<const Index> dims, F&& f) {
  std::vector<Index> idx(dims.size(), 0);
  for (Index d : dims) {
    if (d == 0) return;
  }
  while (true) {
    f(std::span<const Index>(idx));
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (idx.empty()) return;
  }
}

}  // namespace gpcpd

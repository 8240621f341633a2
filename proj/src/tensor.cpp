#include "gpcpd/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gpcpd/error.hpp"

namespace gpcpd {

namespace {

void check_dims(const Dims& dims) {
  if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "tensor order must be at least 1");
  for (Index d : dims) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "tensor dimensions must be positive");
  }
}

std::vector<Index> make_strides(const Dims& dims) {
  std::vector<Index> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

}  // namespace

Index product(std::span<const Index> dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  strides_ = make_strides(dims_);
  data_.assign(static_cast<std::size_t>(product(dims_)), Complex(0.0, 0.0));
}

DenseTensor::DenseTensor(Dims dims, std::vector<Complex> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (static_cast<Index>(data_.size()) != product(dims_)) {
    throw Error(ErrorCode::DimensionMismatch,
                "data length " + std::to_string(data_.size()) + " does not match dims product " +
                    std::to_string(product(dims_)));
  }
  strides_ = make_strides(dims_);
}

Index DenseTensor::linear_index(std::span<const Index> idx) const {
  if (idx.size() != dims_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match tensor order");
  }
  Index lin = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k]) {
      throw Error(ErrorCode::InvalidArgument, "index out of range").with_mode(static_cast<std::int64_t>(k));
    }
    lin += idx[k] * strides_[k];
  }
  return lin;
}

Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
DenseTensor::leading_unfolding() const {
  return {data_.data(), dims_[0], size() / dims_[0]};
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.dims_ != dims_) throw Error(ErrorCode::DimensionMismatch, "tensor dims differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (other.dims_ != dims_) throw Error(ErrorCode::DimensionMismatch, "tensor dims differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(Complex scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }

double hs_norm(const DenseTensor& t) {
  // Scaled accumulation, as in LAPACK's nrm2, to avoid overflow.
  double scale = 0.0, ssq = 1.0;
  auto add = [&](double v) {
    v = std::abs(v);
    if (v == 0.0) return;
    if (scale < v) {
      ssq = 1.0 + ssq * (scale / v) * (scale / v);
      scale = v;
    } else {
      ssq += (v / scale) * (v / scale);
    }
  };
  for (const Complex& x : t.data()) {
    add(x.real());
    add(x.imag());
  }
  return scale * std::sqrt(ssq);
}

DenseTensor permute_modes(const DenseTensor& t, std::span<const Index> perm) {
  const Index m = t.order();
  if (static_cast<Index>(perm.size()) != m) {
    throw Error(ErrorCode::InvalidArgument, "permutation length does not match tensor order");
  }
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  Dims nd(static_cast<std::size_t>(m));
  for (Index a = 0; a < m; ++a) {
    Index p = perm[static_cast<std::size_t>(a)];
    if (p < 0 || p >= m || seen[static_cast<std::size_t>(p)]) {
      throw Error(ErrorCode::InvalidArgument, "not a permutation of the modes");
    }
    seen[static_cast<std::size_t>(p)] = true;
    nd[static_cast<std::size_t>(a)] = t.dim(p);
  }
  DenseTensor out(nd);
  // Stride of new mode a in the source tensor.
  std::vector<Index> src_stride(static_cast<std::size_t>(m));
  for (Index a = 0; a < m; ++a) src_stride[static_cast<std::size_t>(a)] = t.strides()[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
  Index pos = 0;
  for_each_index(nd, [&](std::span<const Index> idx) {
    Index src = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) src += idx[a] * src_stride[a];
    out[pos++] = t[src];
  });
  return out;
}

DenseTensor leading_rows(const DenseTensor& t, Index begin, Index end) {
  if (begin < 0 || end > t.dim(0) || begin >= end) {
    throw Error(ErrorCode::InvalidArgument, "leading_rows: empty or out-of-range row block");
  }
  Dims nd = t.dims();
  nd[0] = end - begin;
  const Index stride = t.strides()[0];
  auto src = t.data().subspan(static_cast<std::size_t>(begin * stride),
                              static_cast<std::size_t>((end - begin) * stride));
  return DenseTensor(nd, std::vector<Complex>(src.begin(), src.end()));
}

Matrix unfold(const DenseTensor& t, Index mode) {
  const Index m = t.order();
  if (mode < 0 || mode >= m) throw Error(ErrorCode::InvalidArgument, "unfold: mode out of range");
  std::vector<Index> perm{mode};
  for (Index a = 0; a < m; ++a) {
    if (a != mode) perm.push_back(a);
  }
  DenseTensor p = permute_modes(t, perm);
  return p.leading_unfolding();
}

std::vector<Index> descending_order(std::span<const Index> dims) {
  std::vector<Index> order(dims.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return dims[static_cast<std::size_t>(a)] > dims[static_cast<std::size_t>(b)]; });
  return order;
}

}  // namespace gpcpd

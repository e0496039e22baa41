#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hiercons {

/// Square row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Principal submatrix on `idx` (in the given order).
  DenseMatrix submatrix(std::span<const std::size_t> idx) const {
    DenseMatrix out(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const auto src = row(idx[a]);
      auto dst = out.row(a);
      for (std::size_t b = 0; b < idx.size(); ++b) dst[b] = src[idx[b]];
    }
    return out;
  }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace hiercons

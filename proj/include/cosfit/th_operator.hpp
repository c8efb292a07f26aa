#pragma once

// Scaled Toeplitz+Hankel normal-equation operators.
//
// 1D:  A = D (T + H) D,  T_{k,l} = a_{|k-l|},  H_{k,l} = a_{k+l},
//      a_k = 1/2 sum_j w_j cos(pi k x_j),  D = diag(1/sqrt2, 1, ..., 1).
// 2D:  A_{(l,k),(l',k')} = e_{k,l} e_{k',l'} sum over the four index
//      combinations (l +- l', k +- k') of the generating array
//      G(q, p) = 1/4 sum_j w_j cos(pi p x_j) cos(pi q y_j),
//      with e = 1/sqrt2 only at (0, 0). Outer blocks are indexed by the
//      y-degree l, entries within a block by the x-degree k.
//
// Products are computed by embedding T + H into a larger Toeplitz+Hankel
// matrix that the DCT-I diagonalizes; operators are immutable and reentrant.

#include <cstddef>
#include <span>
#include <vector>

#include "cosfit/array2d.hpp"
#include "cosfit/nudct.hpp"

namespace cosfit {

inline constexpr std::size_t kDenseOrderLimit = 4096;

/// Smallest 2^n + 1 that is >= max(2M + 1, 2).
std::size_t default_padded_length(std::size_t degree);

class THOperator {
 public:
  /// `gen` holds a_0 .. a_{2M+1} (length 2M + 2). padded_len = 0 selects the default.
  explicit THOperator(std::vector<double> gen, std::size_t padded_len = 0);

  std::size_t degree() const { return degree_; }
  std::size_t size() const { return degree_ + 1; }
  std::size_t padded_length() const { return padded_; }
  std::span<const double> gen() const { return gen_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// D (T + H) D materialized. Throws InvalidArgument above `max_order`.
  Array2D dense(std::size_t max_order = kDenseOrderLimit) const;

 private:
  std::vector<double> gen_;
  std::size_t degree_ = 0;
  std::size_t padded_ = 0;
  std::vector<double> spectrum_;  // C^T of the first column of the augmented matrix
};

class BlockTHOperator {
 public:
  /// `gen` is (2My + 2) x (2Mx + 2) with gen(q, p) = G(q, p).
  explicit BlockTHOperator(Array2D gen, std::size_t padded_x = 0, std::size_t padded_y = 0);

  std::size_t degree_x() const { return mx_; }
  std::size_t degree_y() const { return my_; }
  std::size_t size() const { return (mx_ + 1) * (my_ + 1); }
  std::size_t padded_x() const { return nx_; }
  std::size_t padded_y() const { return ny_; }
  const Array2D& gen() const { return gen_; }

  /// A x with x stacked as index l * (Mx + 1) + k. Uses the 2D DCT path when the
  /// process-wide self-check has passed, the blockwise path otherwise.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Block-augmented embedding diagonalized by the 2D DCT-I.
  void apply_tensor(std::span<const double> x, std::span<double> y) const;

  /// One 1D fast product per (block row, block column) pair.
  void apply_blockwise(std::span<const double> x, std::span<double> y) const;

  Array2D dense(std::size_t max_order = kDenseOrderLimit) const;

 private:
  Array2D gen_;
  std::size_t mx_ = 0;
  std::size_t my_ = 0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  Array2D spectrum_;                // 2D C^T of the augmented first column
  std::vector<std::vector<double>> row_spectra_;  // 1D C^T per generating row q
};

/// Result of the one-time check of the 2D DCT path against the dense oracle.
bool block_fast_path_verified();

struct Assembly1D {
  THOperator op;
  std::vector<double> rhs;
};

struct Assembly2D {
  BlockTHOperator op;
  std::vector<double> rhs;
};

/// Generating sequence and right-hand side b = V^T s^(w) for degree M.
Assembly1D assemble_1d(const PointSet1D& pts, std::span<const double> weights, std::span<const double> values,
                       std::size_t M, const MomentOptions& options = {}, std::size_t padded_len = 0);

Assembly2D assemble_2d(const PointSet2D& pts, std::span<const double> weights, std::span<const double> values,
                       std::size_t Mx, std::size_t My, const MomentOptions& options = {});

}  // namespace cosfit

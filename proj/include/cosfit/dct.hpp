#pragma once

// Type-I discrete cosine transform in one and two dimensions.
//
// Convention (non-unitary):
//   [C_n]_{k,l} = e_k cos(pi k l / (n-1)) / sqrt(2n-2),
//   e_k = 1 for k in {0, n-1}, 2 otherwise.
// With this scaling C C = I and C = D1^{-1} C^T D1, D1 = diag(2, 1, ..., 1, 2).
//
// The fast routines run in O(n log n) for any n >= 2. All functions are pure
// and may be called concurrently.

#include <cstddef>
#include <span>
#include <vector>

#include "cosfit/array2d.hpp"

namespace cosfit::dct {

/// Edge scaling D1 = diag(2, 1, ..., 1, 2) of order n (n >= 2).
std::vector<double> edge_scaling(std::size_t n);

/// y = C_n x.  Throws InvalidArgument for n < 2 or non-finite input.
std::vector<double> dct1_apply(std::span<const double> x);

/// y = C_n^T x, computed as D1 C (D1^{-1} x).
std::vector<double> dct1_transpose_apply(std::span<const double> x);

/// Dense C_n built entry by entry from the definition. O(n^2); reference path.
Array2D dct1_matrix(std::size_t n);

/// Separable 2D transform (C_m applied to every column, then C_n to every row)
/// of an m x n signal.
Array2D dct2d_apply(const Array2D& x);

/// Separable 2D transpose transform (C_m^T on columns, C_n^T on rows).
Array2D dct2d_transpose_apply(const Array2D& x);

}  // namespace cosfit::dct

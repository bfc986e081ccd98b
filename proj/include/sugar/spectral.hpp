#pragma once

#include "sugar/kernel.hpp"

namespace sugar {

/// Full symmetric eigendecomposition; eigenvalues descending, eigenvectors as
/// orthonormal columns in matching order. Each eigenvector's entry of largest
/// magnitude is positive.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi. Throws std::invalid_argument when `s` is not square or is
/// asymmetric beyond 1e-10 (relative to its largest entry).
EigenDecomposition sym_eigendecomp(const Matrix& s);

/// Diffusion-map coordinates ψ_k(i)·λ_k^t for the m leading nontrivial
/// eigenpairs of P = D⁻¹K. Coordinates are scaled so that Euclidean distance
/// over all N-1 nontrivial coordinates equals the diffusion distance at t.
struct Embedding {
  Matrix coords;
  Vector eigenvalues;
};

Embedding diffusion_map(const KernelMatrix& k, Index m, int t);

/// Union-find over edges with affinity >= threshold. Labels are numbered in
/// order of first appearance.
struct Components {
  Index count = 0;
  std::vector<Index> labels;
};

Components connected_components(const KernelMatrix& k, Scalar threshold);
/// Same graph as connected_components(gaussian_kernel(x, bw), threshold) but
/// computed row by row without storing the kernel.
Components connected_components(const DataMatrix& x, const BandwidthSpec& bw, Scalar threshold);

/// The m smallest eigenvalues of L = D − K, ascending.
Vector laplacian_spectrum(const KernelMatrix& k, Index m);

}  // namespace sugar

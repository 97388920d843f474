#pragma once

// Purely imaginary spectrum of a Hamiltonian matrix together with its
// Jordan structure, computed by the staircase (nested kernel) algorithm.

#include "hamnf/linalg.hpp"

#include <complex>
#include <string>
#include <vector>

namespace hamnf {

struct ImaginaryEigenvalue {
  double beta = 0.0;
  int algebraic_mult = 0;
  int geometric_mult = 0;
  /// Complex Jordan block sizes for i*beta, descending.
  std::vector<int> jordan_partition;
  bool conditioning_warning = false;

  bool operator==(const ImaginaryEigenvalue&) const = default;
};

enum class EigenvalueClass {
  Simple,
  Semisimple,
  PartiallySemisimple,
  StrictlyNonsemisimple,
};

std::string to_string(EigenvalueClass c);

/// A group of computed eigenvalues that represent one exact eigenvalue.
struct EigenCluster {
  std::complex<double> center;
  int multiplicity = 0;
  bool validated = true;
};

struct SpectrumReport {
  /// One entry per distinct beta > 0, sorted by beta descending.
  std::vector<ImaginaryEigenvalue> imaginary;
  /// Clusters off the imaginary axis (and the zero eigenvalue, if present).
  std::vector<EigenCluster> other;
  bool has_nonimaginary = false;
  bool has_zero_eigenvalue = false;
};

/// Nested kernels Ker(B) c Ker(B^2) c ... of a square complex matrix.
struct NestedKernels {
  /// dims[k] = dim Ker(B^k); dims[0] = 0. Stops once the sequence stalls.
  std::vector<int> dims;
  /// bases[k] has orthonormal columns spanning Ker(B^k); bases[0] is empty.
  std::vector<CMatrix> bases;
  /// A singular value landed within a factor 10 of the rank threshold.
  bool conditioning_warning = false;
  /// Smallest ratio (retained sigma / threshold) and (threshold / dropped
  /// sigma) seen over all steps; large values mean clean rank decisions.
  double rank_gap = 0.0;
};

/// Numeric rank of a complex matrix: #{sigma_i > rank_tol * reference}.
int numeric_rank(const CMatrix& a, double rank_tol, double reference);

NestedKernels nested_kernels(const CMatrix& b, int max_steps,
                             const TolerancePolicy& tol);

struct JordanData {
  std::vector<int> partition;  // descending
  std::vector<int> kernel_dims;
  bool conditioning_warning = false;
};

/// Jordan block sizes of the eigenvalue i*beta of M.
/// Throws NotFoundError if i*beta is not an eigenvalue within tolerance.
JordanData jordan_partition(const Matrix& m, double beta,
                            const TolerancePolicy& tol = {});

/// Groups the computed eigenvalues of M into clusters, one per exact
/// eigenvalue. A candidate cluster is accepted once the generalized kernel
/// at its centroid has dimension equal to its size; otherwise it is split
/// at a finer linkage radius.
std::vector<EigenCluster> eigenvalue_clusters(const Matrix& m,
                                              const TolerancePolicy& tol = {});

/// Throws StructureError for non-Hamiltonian input.
SpectrumReport imaginary_spectrum(const Matrix& m,
                                  const TolerancePolicy& tol = {});

EigenvalueClass classify_eigenvalue(const ImaginaryEigenvalue& ev);

/// Spectral 2-norm.
double spectral_norm(const Matrix& m);

}  // namespace hamnf

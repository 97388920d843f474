#pragma once

// Catalogue of indecomposable Hamiltonian blocks with spectrum {+-i beta},
// their assembly into full normal forms, and the reverse direction:
// reading block sizes and sign characteristics off an arbitrary matrix.

#include "hamnf/linalg.hpp"

#include <optional>
#include <vector>

namespace hamnf {

struct BlockSpec {
  double beta = 1.0;
  int half_dim = 1;  // N_j
  int epsilon = 1;   // +1 or -1

  /// Throws ArgumentError on beta <= 0 or epsilon not in {+1, -1}.
  void validate() const;
  bool is_odd() const { return half_dim % 2 == 1; }

  bool operator==(const BlockSpec&) const = default;
};

/// Canonical order: beta descending, then half_dim descending, then epsilon
/// descending.
bool canonical_less(const BlockSpec& a, const BlockSpec& b);
void sort_canonical(std::vector<BlockSpec>& blocks);

struct NormalForm {
  std::vector<BlockSpec> blocks;
  /// Opaque Hamiltonian part carrying the spectrum off {+-i beta}.
  std::optional<Matrix> other_part;

  int half_dim() const;
};

struct BlockCounts {
  int o_plus = 0;
  int o_minus = 0;
  int e_plus = 0;
  int e_minus = 0;

  int kappa() const { return o_plus - o_minus - e_plus + e_minus; }
  int total() const { return o_plus + o_minus + e_plus + e_minus; }
  bool operator==(const BlockCounts&) const = default;
};

/// Hessian of the odd-size quadratic form. `coupling` multiplies the
/// nilpotent sum x_i y_{i+1}; 1 gives the catalogue block, other values
/// trace the homotopy used to evaluate the Morse index of -A.
SymmetricMatrix odd_block_hessian(int half_dim, double beta, int epsilon,
                                  double coupling = 1.0);
/// Hessian of the even-size quadratic form; `coupling` scales both the
/// x_i y_{i+2} sum and the epsilon term.
SymmetricMatrix even_block_hessian(int half_dim, double beta, int epsilon,
                                   double coupling = 1.0);

/// J * Hess for odd N_j. Throws ParityError for even half_dim.
Matrix odd_block(int half_dim, double beta, int epsilon);
/// J * Hess for even N_j. Throws ParityError for odd half_dim.
Matrix even_block(int half_dim, double beta, int epsilon);
/// Dispatches on parity.
Matrix catalogue_block(const BlockSpec& spec);
SymmetricMatrix catalogue_hessian(const BlockSpec& spec);

/// Block-diagonal matrix diag(M_1, ..., M_s, other) with each block in its
/// own (x_j, y_j) coordinates.
Matrix block_direct_sum(const NormalForm& nf);
/// Permutation P with assemble_normal_form(nf) = P * block_direct_sum(nf) * P^T.
/// P maps diag(J_{2N_1}, ...) onto J_{2N}.
Matrix normal_form_permutation(const NormalForm& nf);
/// The interleaved layout [[diag D, diag B], [diag C, diag -D^T]].
Matrix assemble_normal_form(const NormalForm& nf);

/// Counts odd blocks at frequency `beta` by parity of (N_j+1)/2 and sign.
BlockCounts block_counts(const std::vector<BlockSpec>& blocks, double beta,
                         double match_tol = 1e-9);
BlockCounts block_counts(const NormalForm& nf, double beta,
                         double match_tol = 1e-9);

/// Per-size signature of the Krein form, exposed for diagnostics.
struct SignCharacteristic {
  int size = 0;
  int positive = 0;
  int negative = 0;
  double gap = 0.0;  // separation of retained from discarded eigenvalues
};

struct Decomposition {
  std::vector<BlockSpec> blocks;  // canonical order
  std::vector<SignCharacteristic> signs;
  std::vector<int> kernel_dims;
  bool conditioning_warning = false;
};

/// Recovers the catalogue blocks {(N_j, epsilon_j)} of M at frequency beta.
/// Throws StructureError / NotFoundError on bad input and
/// DecompositionError when the sign characteristic cannot be read reliably.
Decomposition structural_decomposition(const Matrix& m, double beta,
                                       const TolerancePolicy& tol = {});

}  // namespace hamnf

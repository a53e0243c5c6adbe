#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "etdg/dg_forms.hpp"
#include "etdg/embedding.hpp"
#include "etdg/local_ops.hpp"

namespace etdg {

enum class Method { StandardDg, EmbeddedTrefftz, BlockCoupled };

std::string to_string(Method m);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients over the full broken basis of `space`.
struct DiscreteSolution {
  std::shared_ptr<const DgSpace> space;
  Eigen::VectorXd coefficients;
  Method method = Method::StandardDg;
  int ndof_full = 0;
  /// Size of the globally coupled system (N for standard DG).
  int ndof_trefftz = 0;
  /// Relative residual of the solved linear system.
  double residual = 0.0;
  /// Block-coupled solves only: u = local_part + trefftz_part.
  Eigen::VectorXd local_part;
  Eigen::VectorXd trefftz_part;
};

/// Sparse LU with COLAMD ordering plus up to three steps of iterative
/// refinement; throws SolverError if the factorization fails.
Eigen::VectorXd sparse_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                             double* relative_residual = nullptr);

DiscreteSolution solve_standard_dg(const DgSystem& sys);

/// Solves (T^T A T) u_T = T^T (l - A u_L) and returns T u_T + u_L.
DiscreteSolution solve_embedded_trefftz(const DgSystem& sys, const GlobalEmbedding& emb);

/// How the complement L_h(K) of the Trefftz space is spanned.
enum class ComplementRule {
  /// Leading right singular vectors of A_K (the row space).
  SvdComplement,
  /// Image of the pseudo-inverse of A_K taken in raw scaled-monomial
  /// coordinates, orthonormalized in the element basis.
  MinNormImage,
};

/// Orthonormal columns spanning L_h(K) for one element.
Eigen::MatrixXd complement_basis(const ElementEmbedding& emb, const ElementBasis& basis,
                                 ComplementRule rule);

/// Assembles and solves the full 2x2 block system (local rows tested with the
/// leading left singular vectors of each A_K, global rows tested with T_h).
DiscreteSolution solve_block_coupled(const std::vector<LocalOperator>& local_ops,
                                     const DgSystem& sys, const GlobalEmbedding& emb,
                                     ComplementRule rule);

}  // namespace etdg

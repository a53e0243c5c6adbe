#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "etdg/dg_forms.hpp"
#include "etdg/local_ops.hpp"

namespace etdg {

/// How many singular values of A_K count as the local problem.
struct RankRule {
  enum class Mode { ExpectFullRowRank, Threshold };
  Mode mode = Mode::ExpectFullRowRank;
  /// Relative threshold: threshold mode keeps sigma_i >= tau * sigma_1; the
  /// full-row-rank mode uses it as the guard on sigma_min.
  double tau = 1e-9;
  /// ExpectFullRowRank only: fall back to the threshold rule instead of
  /// throwing when the guard fails.
  bool allow_fallback = true;

  static RankRule expect_full_row_rank(bool allow_fallback = true) {
    return {Mode::ExpectFullRowRank, 1e-9, allow_fallback};
  }
  static RankRule threshold(double tau) { return {Mode::Threshold, tau, true}; }
};

/// Thrown when A_K is rank deficient and no fallback is allowed.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, Eigen::VectorXd sigma)
      : std::runtime_error(what), sigma_(std::move(sigma)) {}
  const Eigen::VectorXd& sigma() const { return sigma_; }

 private:
  Eigen::VectorXd sigma_;
};

/// SVD A_K = U S V^T split into the kernel (Trefftz) part and its complement.
struct ElementEmbedding {
  int element = -1;
  /// n x n_T, orthonormal columns spanning ker(A_K).
  Eigen::MatrixXd trefftz;
  /// n x rank, orthonormal columns V_{:,1..rank} (row space of A_K).
  Eigen::MatrixXd complement;
  /// rows x rank, leading left singular vectors.
  Eigen::MatrixXd left;
  /// Min-norm solution of A_K u = l_K (pseudo-inverse).
  Eigen::VectorXd particular;
  Eigen::VectorXd sigma;
  int rank_used = 0;
  /// True when the full-row-rank guard failed and the threshold rule was used.
  bool downgraded = false;

  int dim() const { return static_cast<int>(trefftz.rows()); }
  int trefftz_dim() const { return static_cast<int>(trefftz.cols()); }
};

ElementEmbedding compute_embedding(const LocalOperator& op,
                                   const RankRule& rule = RankRule::expect_full_row_rank());

/// Block-diagonal prolongation from Trefftz coordinates to the broken
/// polynomial space plus the concatenated particular solution.
class GlobalEmbedding {
 public:
  /// `dofs_per_element` is dim V_h(K); every embedding must match it.
  GlobalEmbedding(int num_elements, int dofs_per_element, std::vector<ElementEmbedding> elements);

  int num_elements() const { return static_cast<int>(elements_.size()); }
  int dofs_per_element() const { return dofs_per_element_; }
  int full_dim() const { return num_elements() * dofs_per_element_; }
  int trefftz_dim() const { return trefftz_offsets_.back(); }
  int trefftz_offset(int k) const { return trefftz_offsets_[k]; }
  const ElementEmbedding& element(int k) const { return elements_.at(k); }
  const std::vector<ElementEmbedding>& elements() const { return elements_; }

  /// Concatenated particular solution u_L (length full_dim()).
  const Eigen::VectorXd& particular() const { return particular_; }

  /// Sparse N x N_T matrix T.
  Eigen::SparseMatrix<double> prolongation() const;

  /// T u_T + u_L.
  Eigen::VectorXd lift(const Eigen::VectorXd& trefftz_coefficients) const;

 private:
  int dofs_per_element_;
  std::vector<ElementEmbedding> elements_;
  std::vector<int> trefftz_offsets_;
  Eigen::VectorXd particular_;
};

GlobalEmbedding assemble_global_embedding(const Mesh2D& mesh, int dofs_per_element,
                                          std::vector<ElementEmbedding> per_element);

/// A_K and l_K for every element of the space.
std::vector<LocalOperator> assemble_local_operators(const DgSpace& space, OperatorKind kind,
                                                    const PdeCoefficients& coeffs,
                                                    const LocalOperatorOptions& options = {});

/// compute_embedding on every element, gathered into the global embedding.
GlobalEmbedding compute_global_embedding(const DgSpace& space,
                                         const std::vector<LocalOperator>& ops,
                                         const RankRule& rule = RankRule::expect_full_row_rank());

/// CSV with header element_id,sigma_index,sigma_value.
void write_sigma_csv(std::ostream& out, const GlobalEmbedding& embedding);

}  // namespace etdg

#include "etdg/embedding.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include <Eigen/SVD>

namespace etdg {

ElementEmbedding compute_embedding(const LocalOperator& op, const RankRule& rule) {
  const Eigen::MatrixXd& a = op.matrix;
  const int n = op.cols();
  const int m = op.rows();
  ElementEmbedding emb;
  emb.element = op.element;

  if (m == 0) {
    emb.trefftz = Eigen::MatrixXd::Identity(n, n);
    emb.complement.resize(n, 0);
    emb.left.resize(0, 0);
    emb.particular = Eigen::VectorXd::Zero(n);
    return emb;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  emb.sigma = svd.singularValues();
  const double s1 = emb.sigma.size() > 0 ? emb.sigma[0] : 0.0;

  auto threshold_rank = [&](double tau) {
    int k = 0;
    while (k < emb.sigma.size() && s1 > 0.0 && emb.sigma[k] >= tau * s1) ++k;
    return k;
  };

  int rank = 0;
  if (rule.mode == RankRule::Mode::ExpectFullRowRank) {
    const bool full = m <= n && s1 > 0.0 && emb.sigma[m - 1] > rule.tau * s1;
    if (full) {
      rank = m;
    } else if (rule.allow_fallback) {
      rank = threshold_rank(rule.tau);
      emb.downgraded = true;
    } else {
      std::ostringstream msg;
      msg << "compute_embedding: element " << op.element << " operator " << m << "x" << n
          << " is not of full row rank; sigma =";
      for (Eigen::Index i = 0; i < emb.sigma.size(); ++i) msg << ' ' << emb.sigma[i];
      throw RankDeficiencyError(msg.str(), emb.sigma);
    }
  } else {
    rank = threshold_rank(rule.tau);
  }

  emb.rank_used = rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::MatrixXd& u = svd.matrixU();
  emb.trefftz = v.rightCols(n - rank);
  emb.complement = v.leftCols(rank);
  emb.left = u.leftCols(rank);
  const Eigen::VectorXd projected = emb.left.transpose() * op.rhs;
  emb.particular =
      emb.complement * (projected.array() / emb.sigma.head(rank).array()).matrix();
  return emb;
}

GlobalEmbedding::GlobalEmbedding(int num_elements, int dofs_per_element,
                                 std::vector<ElementEmbedding> elements)
    : dofs_per_element_(dofs_per_element), elements_(std::move(elements)) {
  if (static_cast<int>(elements_.size()) != num_elements) {
    throw std::invalid_argument("GlobalEmbedding: got " + std::to_string(elements_.size()) +
                                " element embeddings for " + std::to_string(num_elements) +
                                " elements");
  }
  trefftz_offsets_.assign(elements_.size() + 1, 0);
  particular_.resize(static_cast<Eigen::Index>(elements_.size()) * dofs_per_element);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto& e = elements_[k];
    if (e.dim() != dofs_per_element || e.particular.size() != dofs_per_element) {
      throw std::invalid_argument("GlobalEmbedding: element " + std::to_string(k) +
                                  " has dimension " + std::to_string(e.dim()) + ", expected " +
                                  std::to_string(dofs_per_element));
    }
    trefftz_offsets_[k + 1] = trefftz_offsets_[k] + e.trefftz_dim();
    particular_.segment(static_cast<Eigen::Index>(k) * dofs_per_element, dofs_per_element) =
        e.particular;
  }
}

Eigen::SparseMatrix<double> GlobalEmbedding::prolongation() const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < num_elements(); ++k) {
    const auto& t = elements_[k].trefftz;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        if (t(i, j) != 0.0) {
          triplets.emplace_back(k * dofs_per_element_ + static_cast<int>(i),
                                trefftz_offsets_[k] + static_cast<int>(j), t(i, j));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> out(full_dim(), trefftz_dim());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::VectorXd GlobalEmbedding::lift(const Eigen::VectorXd& trefftz_coefficients) const {
  if (trefftz_coefficients.size() != trefftz_dim()) {
    throw std::invalid_argument("GlobalEmbedding::lift: size mismatch");
  }
  Eigen::VectorXd out = particular_;
  for (int k = 0; k < num_elements(); ++k) {
    const auto& t = elements_[k].trefftz;
    out.segment(k * dofs_per_element_, dofs_per_element_) +=
        t * trefftz_coefficients.segment(trefftz_offsets_[k], t.cols());
  }
  return out;
}

GlobalEmbedding assemble_global_embedding(const Mesh2D& mesh, int dofs_per_element,
                                          std::vector<ElementEmbedding> per_element) {
  return GlobalEmbedding(mesh.num_elements(), dofs_per_element, std::move(per_element));
}

std::vector<LocalOperator> assemble_local_operators(const DgSpace& space, OperatorKind kind,
                                                    const PdeCoefficients& coeffs,
                                                    const LocalOperatorOptions& options) {
  std::vector<LocalOperator> ops;
  ops.reserve(space.num_elements());
  for (int k = 0; k < space.num_elements(); ++k) {
    ops.push_back(assemble_local_operator(kind, space.mesh(), k, space.basis(k), coeffs, options));
  }
  return ops;
}

GlobalEmbedding compute_global_embedding(const DgSpace& space,
                                         const std::vector<LocalOperator>& ops,
                                         const RankRule& rule) {
  std::vector<ElementEmbedding> elements;
  elements.reserve(ops.size());
  for (const auto& op : ops) elements.push_back(compute_embedding(op, rule));
  return assemble_global_embedding(space.mesh(), space.dofs_per_element(), std::move(elements));
}

void write_sigma_csv(std::ostream& out, const GlobalEmbedding& embedding) {
  out << "element_id,sigma_index,sigma_value\n";
  char buf[64];
  for (int k = 0; k < embedding.num_elements(); ++k) {
    const auto& sigma = embedding.element(k).sigma;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", sigma[i]);
      out << k << ',' << i << ',' << buf << '\n';
    }
  }
}

}  // namespace etdg

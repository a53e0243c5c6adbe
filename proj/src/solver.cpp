#include "etdg/solver.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/OrderingMethods>
#include <Eigen/QR>
#include <Eigen/SparseLU>

namespace etdg {

std::string to_string(Method m) {
  switch (m) {
    case Method::StandardDg: return "STANDARD_DG";
    case Method::EmbeddedTrefftz: return "EMBEDDED_TREFFTZ";
    case Method::BlockCoupled: return "BLOCK_COUPLED";
  }
  return "UNKNOWN";
}

Eigen::VectorXd sparse_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                             double* relative_residual) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw std::invalid_argument("sparse_solve: dimension mismatch");
  }
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (relative_residual) *relative_residual = 0.0;
    return Eigen::VectorXd::Zero(b.size());
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sparse LU failed on a " << a.rows() << "x" << a.cols()
        << " system: " << lu.lastErrorMessage();
    throw SolverError(msg.str());
  }
  Eigen::VectorXd x = lu.solve(b);
  double res = (b - a * x).norm() / bnorm;
  for (int step = 0; step < 3 && res > 1e-12; ++step) {
    x += lu.solve(b - a * x);
    res = (b - a * x).norm() / bnorm;
  }
  if (!std::isfinite(res) || res > 1e-6) {
    std::ostringstream msg;
    msg << "sparse LU produced relative residual " << res << " on a " << a.rows()
        << "-dof system; the matrix is numerically singular (log|det| = "
        << lu.logAbsDeterminant() << ")";
    throw SolverError(msg.str());
  }
  if (relative_residual) *relative_residual = res;
  return x;
}

DiscreteSolution solve_standard_dg(const DgSystem& sys) {
  DiscreteSolution sol;
  sol.space = sys.space;
  sol.method = Method::StandardDg;
  sol.coefficients = sparse_solve(sys.matrix, sys.rhs, &sol.residual);
  sol.ndof_full = static_cast<int>(sys.rhs.size());
  sol.ndof_trefftz = sol.ndof_full;
  return sol;
}

DiscreteSolution solve_embedded_trefftz(const DgSystem& sys, const GlobalEmbedding& emb) {
  if (emb.full_dim() != sys.rhs.size()) {
    throw std::invalid_argument("solve_embedded_trefftz: embedding does not match the system");
  }
  const Eigen::SparseMatrix<double> t = emb.prolongation();
  const Eigen::SparseMatrix<double> tt = t.transpose();
  const Eigen::SparseMatrix<double> reduced = tt * sys.matrix * t;
  const Eigen::VectorXd rhs = tt * (sys.rhs - sys.matrix * emb.particular());

  DiscreteSolution sol;
  sol.space = sys.space;
  sol.method = Method::EmbeddedTrefftz;
  const Eigen::VectorXd ut = sparse_solve(reduced, rhs, &sol.residual);
  sol.coefficients = emb.lift(ut);
  sol.ndof_full = emb.full_dim();
  sol.ndof_trefftz = emb.trefftz_dim();
  return sol;
}

Eigen::MatrixXd complement_basis(const ElementEmbedding& emb, const ElementBasis& basis,
                                 ComplementRule rule) {
  if (rule == ComplementRule::SvdComplement || emb.rank_used == 0) return emb.complement;
  // phi = C m, so coefficients x have monomial coordinates y = C^T x. The
  // min-norm (in y) solutions of A x = l fill range((C C^T)^{-1} A^T), and
  // range(A^T) restricted to the used rank is range(V_k).
  const Eigen::MatrixXd& c = basis.coefficients();
  const Eigen::MatrixXd ccT = c * c.transpose();
  const Eigen::MatrixXd image = ccT.llt().solve(emb.complement);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(image);
  return qr.householderQ() * Eigen::MatrixXd::Identity(image.rows(), image.cols());
}

DiscreteSolution solve_block_coupled(const std::vector<LocalOperator>& local_ops,
                                     const DgSystem& sys, const GlobalEmbedding& emb,
                                     ComplementRule rule) {
  const DgSpace& space = *sys.space;
  const int ne = space.num_elements();
  const int n = space.dofs_per_element();
  if (static_cast<int>(local_ops.size()) != ne || emb.num_elements() != ne ||
      emb.dofs_per_element() != n) {
    throw std::invalid_argument("solve_block_coupled: inconsistent dimensions");
  }

  // Column layout: all L_h columns (element by element), then all T_h columns.
  std::vector<int> local_offset(ne + 1, 0);
  std::vector<Eigen::MatrixXd> complements(ne);
  for (int k = 0; k < ne; ++k) {
    complements[k] = complement_basis(emb.element(k), space.basis(k), rule);
    local_offset[k + 1] = local_offset[k] + static_cast<int>(complements[k].cols());
  }
  const int nl = local_offset[ne];
  const int nt = emb.trefftz_dim();
  const int total = nl + nt;
  if (total != space.num_dofs()) {
    throw std::logic_error("solve_block_coupled: L_h + T_h does not span V_h");
  }

  std::vector<Eigen::Triplet<double>> phi_triplets;
  std::vector<Eigen::Triplet<double>> local_rows;
  Eigen::VectorXd rhs(total);
  for (int k = 0; k < ne; ++k) {
    const auto& e = emb.element(k);
    const int r0 = space.offset(k);
    for (Eigen::Index j = 0; j < complements[k].cols(); ++j) {
      for (int i = 0; i < n; ++i) {
        phi_triplets.emplace_back(r0 + i, local_offset[k] + static_cast<int>(j),
                                  complements[k](i, j));
      }
    }
    for (Eigen::Index j = 0; j < e.trefftz.cols(); ++j) {
      for (int i = 0; i < n; ++i) {
        phi_triplets.emplace_back(r0 + i, nl + emb.trefftz_offset(k) + static_cast<int>(j),
                                  e.trefftz(i, j));
      }
    }
    // local rows: <A_K u, q~_i> for the leading left singular vectors q~_i
    const Eigen::MatrixXd rows = e.left.transpose() * local_ops[k].matrix;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      for (int j = 0; j < n; ++j) {
        local_rows.emplace_back(local_offset[k] + static_cast<int>(i), r0 + j, rows(i, j));
      }
    }
    rhs.segment(local_offset[k], e.rank_used) = e.left.transpose() * local_ops[k].rhs;
  }
  Eigen::SparseMatrix<double> phi(space.num_dofs(), total);
  phi.setFromTriplets(phi_triplets.begin(), phi_triplets.end());
  Eigen::SparseMatrix<double> r(nl, space.num_dofs());
  r.setFromTriplets(local_rows.begin(), local_rows.end());
  const Eigen::SparseMatrix<double> t = emb.prolongation();
  const Eigen::SparseMatrix<double> tt = t.transpose();

  const Eigen::SparseMatrix<double> top = r * phi;
  const Eigen::SparseMatrix<double> bottom = tt * sys.matrix * phi;
  rhs.tail(nt) = tt * sys.rhs;

  std::vector<Eigen::Triplet<double>> block;
  block.reserve(static_cast<std::size_t>(top.nonZeros() + bottom.nonZeros()));
  for (int j = 0; j < top.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(top, j); it; ++it) {
      block.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int j = 0; j < bottom.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(bottom, j); it; ++it) {
      block.emplace_back(nl + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  Eigen::SparseMatrix<double> system(total, total);
  system.setFromTriplets(block.begin(), block.end());

  DiscreteSolution sol;
  sol.space = sys.space;
  sol.method = Method::BlockCoupled;
  const Eigen::VectorXd x = sparse_solve(system, rhs, &sol.residual);
  Eigen::VectorXd xl = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd xt = Eigen::VectorXd::Zero(total);
  xl.head(nl) = x.head(nl);
  xt.tail(nt) = x.tail(nt);
  sol.local_part = phi * xl;
  sol.trefftz_part = phi * xt;
  sol.coefficients = sol.local_part + sol.trefftz_part;
  sol.ndof_full = space.num_dofs();
  sol.ndof_trefftz = nt;
  return sol;
}

}  // namespace etdg

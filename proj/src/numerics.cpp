#include "saddle/numerics.hpp"

#include <Eigen/Dense>

#include "saddle/errors.hpp"

namespace saddle {

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ParameterError("SymMatrix: matrix not square");
  if (!m_.allFinite()) throw EvaluationError("SymMatrix: non-finite entries");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw ConsistencyError("SymMatrix: asymmetry " + std::to_string(asym) +
                           " exceeds 1e-12 relative");
  m_ = 0.5 * (m_ + m_.transpose().eval());
}

Eigen::VectorXd solve_linear(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  if (M.rows() != M.cols()) throw ParameterError("solve_linear: matrix not square");
  if (M.rows() != b.size()) throw ParameterError("solve_linear: dimension mismatch");
  if (!M.allFinite() || !b.allFinite())
    throw EvaluationError("solve_linear: non-finite input");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12))
    throw SingularMatrixError("solve_linear: reciprocal condition estimate " +
                              std::to_string(rcond) + " below 1e-12");
  Eigen::VectorXd v = lu.solve(b);
  if (!v.allFinite()) throw SingularMatrixError("solve_linear: non-finite solution");
  return v;
}

double sym_eig_min(const SymMatrix& M) {
  if (M.order() == 0) throw ParameterError("sym_eig_min: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.matrix(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw SingularMatrixError("sym_eig_min: eigensolver failed");
  return es.eigenvalues()(0);
}

double sym_eig_min(const Eigen::MatrixXd& M) { return sym_eig_min(SymMatrix(M)); }

double spectral_norm(const Eigen::MatrixXd& M) {
  if (!M.allFinite()) throw EvaluationError("spectral_norm: non-finite entries");
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues()(0);
}

}  // namespace saddle

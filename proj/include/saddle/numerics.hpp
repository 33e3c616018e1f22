#ifndef SADDLE_NUMERICS_HPP
#define SADDLE_NUMERICS_HPP

#include <Eigen/Core>

namespace saddle {

// Dense symmetric matrix, validated on construction.
class SymMatrix {
 public:
  // Throws ConsistencyError if m is not symmetric within 1e-12 relative,
  // EvaluationError if it has non-finite entries.
  explicit SymMatrix(Eigen::MatrixXd m);

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index order() const { return m_.rows(); }

 private:
  Eigen::MatrixXd m_;
};

// Solves M v = b for square nonsingular M. Throws SingularMatrixError if the
// estimated condition number exceeds 1e12. The returned v satisfies
// ||M v - b|| <= 1e-10 (||M|| ||v|| + ||b||).
Eigen::VectorXd solve_linear(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

// Smallest eigenvalue of a symmetric matrix.
double sym_eig_min(const SymMatrix& M);
double sym_eig_min(const Eigen::MatrixXd& M);  // validates symmetry first

// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& M);

}  // namespace saddle

#endif  // SADDLE_NUMERICS_HPP

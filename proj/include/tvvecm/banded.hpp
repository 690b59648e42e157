#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tvvecm {

/// Cholesky factorisation of a symmetric positive-definite block-tridiagonal
/// matrix with T diagonal blocks (p x p each) and T-1 sub-diagonal blocks.
///
/// Factors A = L L' with L block lower-bidiagonal, in O(T p^3); solve is
/// O(T p^2) per right-hand side.  This is the workhorse for the penalized
/// least-squares smoother, whose normal equations couple only neighbouring
/// periods.
class BlockTridiagonalCholesky {
 public:
  /// diag[t] is block (t,t); sub[t] is block (t+1,t).  All blocks p x p.
  /// Throws ShapeError on inconsistent dimensions and CollinearityError when
  /// a pivot block is not positive definite.
  void factor(const std::vector<Eigen::MatrixXd>& diag,
              const std::vector<Eigen::MatrixXd>& sub);

  /// Solves A x = rhs (rhs length T*p).
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// A * x using the original blocks, accumulated in extended precision so
  /// iterative refinement has an accurate residual to work with.
  [[nodiscard]] Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  /// solve() followed by up to `sweeps` rounds of iterative refinement,
  /// stopping early once the residual no longer shrinks.  Each round costs one
  /// multiply and one solve and rescues the accuracy lost when the system is
  /// badly scaled (very large smoothing weights), where a single round's
  /// contraction can be as weak as the condition number times machine epsilon.
  [[nodiscard]] Eigen::VectorXd solve_refined(const Eigen::VectorXd& rhs,
                                              int sweeps = 12) const;

  [[nodiscard]] Eigen::Index block_count() const { return static_cast<Eigen::Index>(diag_.size()); }
  [[nodiscard]] Eigen::Index block_size() const { return p_; }

 private:
  std::vector<Eigen::MatrixXd> diag_;      // original diagonal blocks
  std::vector<Eigen::MatrixXd> sub_;       // original sub-diagonal blocks
  std::vector<Eigen::MatrixXd> l_diag_;    // Cholesky factors of pivot blocks
  std::vector<Eigen::MatrixXd> l_sub_;     // L_{t+1,t}
  Eigen::Index p_ = 0;
};

}  // namespace tvvecm

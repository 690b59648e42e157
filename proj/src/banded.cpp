#include "tvvecm/banded.hpp"

#include <limits>

#include "tvvecm/errors.hpp"

namespace tvvecm {

void BlockTridiagonalCholesky::factor(const std::vector<Eigen::MatrixXd>& diag,
                                      const std::vector<Eigen::MatrixXd>& sub) {
  if (diag.empty()) throw ShapeError("block system needs at least one diagonal block");
  if (sub.size() + 1 != diag.size()) {
    throw ShapeError("sub-diagonal block count must be one less than diagonal count");
  }
  p_ = diag.front().rows();
  for (const auto& b : diag) {
    if (b.rows() != p_ || b.cols() != p_) throw ShapeError("inconsistent diagonal block size");
  }
  for (const auto& b : sub) {
    if (b.rows() != p_ || b.cols() != p_) throw ShapeError("inconsistent sub-diagonal block size");
  }

  diag_ = diag;
  sub_ = sub;
  const auto t = static_cast<Eigen::Index>(diag.size());
  l_diag_.assign(static_cast<std::size_t>(t), Eigen::MatrixXd());
  l_sub_.assign(static_cast<std::size_t>(t) - (t > 0 ? 1 : 0), Eigen::MatrixXd());

  Eigen::MatrixXd pivot = diag[0];
  for (Eigen::Index i = 0; i < t; ++i) {
    const Eigen::LLT<Eigen::MatrixXd> llt(pivot);
    if (llt.info() != Eigen::Success) {
      throw CollinearityError("block pivot " + std::to_string(i) +
                              " is not positive definite; the penalized system is singular");
    }
    l_diag_[static_cast<std::size_t>(i)] = llt.matrixL();
    if (i + 1 < t) {
      // L_{i+1,i} = A_{i+1,i} * L_ii^-T
      const Eigen::MatrixXd& l = l_diag_[static_cast<std::size_t>(i)];
      Eigen::MatrixXd w = sub[static_cast<std::size_t>(i)];
      l.transpose()
          .triangularView<Eigen::Upper>()
          .solveInPlace<Eigen::OnTheRight>(w);
      l_sub_[static_cast<std::size_t>(i)] = w;
      pivot = diag[static_cast<std::size_t>(i) + 1] - w * w.transpose();
    }
  }
}

Eigen::VectorXd BlockTridiagonalCholesky::solve(const Eigen::VectorXd& rhs) const {
  const auto t = block_count();
  if (rhs.size() != t * p_) throw ShapeError("right-hand side length does not match system");

  Eigen::VectorXd y = rhs;
  // forward: L y = rhs
  for (Eigen::Index i = 0; i < t; ++i) {
    auto yi = y.segment(i * p_, p_);
    if (i > 0) yi -= l_sub_[static_cast<std::size_t>(i) - 1] * y.segment((i - 1) * p_, p_);
    l_diag_[static_cast<std::size_t>(i)].triangularView<Eigen::Lower>().solveInPlace(yi);
  }
  // backward: L' x = y
  for (Eigen::Index i = t - 1; i >= 0; --i) {
    auto yi = y.segment(i * p_, p_);
    if (i + 1 < t) {
      yi -= l_sub_[static_cast<std::size_t>(i)].transpose() * y.segment((i + 1) * p_, p_);
    }
    l_diag_[static_cast<std::size_t>(i)]
        .transpose()
        .triangularView<Eigen::Upper>()
        .solveInPlace(yi);
  }
  return y;
}

namespace {

// rhs - A x (or A x when rhs is null), block row by block row with long
// double accumulation so iterative refinement sees an accurate residual.
Eigen::VectorXd accumulate_rows(const std::vector<Eigen::MatrixXd>& diag,
                                const std::vector<Eigen::MatrixXd>& sub, Eigen::Index p,
                                const Eigen::VectorXd& x, const Eigen::VectorXd* rhs) {
  const auto t = static_cast<Eigen::Index>(diag.size());
  Eigen::VectorXd out(t * p);
  std::vector<long double> acc(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < t; ++i) {
    for (auto& a : acc) a = 0.0L;
    auto add_block = [&](const Eigen::MatrixXd& block, Eigen::Index col_block,
                         bool transpose) {
      const auto seg = x.segment(col_block * p, p);
      for (Eigen::Index r = 0; r < p; ++r) {
        long double s = 0.0L;
        for (Eigen::Index c = 0; c < p; ++c) {
          const double entry = transpose ? block(c, r) : block(r, c);
          s += static_cast<long double>(entry) * static_cast<long double>(seg[c]);
        }
        acc[static_cast<std::size_t>(r)] += s;
      }
    };
    add_block(diag[static_cast<std::size_t>(i)], i, false);
    if (i > 0) add_block(sub[static_cast<std::size_t>(i) - 1], i - 1, false);
    if (i + 1 < t) add_block(sub[static_cast<std::size_t>(i)], i + 1, true);
    for (Eigen::Index r = 0; r < p; ++r) {
      const long double ax = acc[static_cast<std::size_t>(r)];
      out[i * p + r] = rhs == nullptr
                           ? static_cast<double>(ax)
                           : static_cast<double>(
                                 static_cast<long double>((*rhs)[i * p + r]) - ax);
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd BlockTridiagonalCholesky::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != block_count() * p_) throw ShapeError("vector length does not match system");
  return accumulate_rows(diag_, sub_, p_, x, nullptr);
}

Eigen::VectorXd BlockTridiagonalCholesky::solve_refined(const Eigen::VectorXd& rhs,
                                                        int sweeps) const {
  Eigen::VectorXd x = solve(rhs);
  double prev_norm = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const Eigen::VectorXd residual = accumulate_rows(diag_, sub_, p_, x, &rhs);
    const double norm = residual.cwiseAbs().maxCoeff();
    // stop once refinement stagnates at the attainable accuracy
    if (norm == 0.0 || norm >= prev_norm) break;
    prev_norm = norm;
    x += solve(residual);
  }
  return x;
}

}  // namespace tvvecm

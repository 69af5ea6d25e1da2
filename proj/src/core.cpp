#include "trex/core.hpp"

#include <algorithm>
#include <cmath>

#include "trex/errors.hpp"

namespace trex {

std::string Dataset::name_of(int j) const {
  if (!column_names.empty()) return column_names[static_cast<size_t>(j)];
  return "x" + std::to_string(j + 1);
}

std::vector<int> support_of(const Eigen::VectorXd& beta) {
  std::vector<int> s;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) s.push_back(static_cast<int>(j));
  }
  return s;
}

Eigen::VectorXd standardize_columns(Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  Eigen::VectorXd scales(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double norm = x.col(j).norm();
    if (norm < 1e-12 * sqrt_n) {
      throw DegenerateColumn(static_cast<int>(j),
                             "column " + std::to_string(j) +
                                 " has near-zero norm " + std::to_string(norm));
    }
    double scale = norm / sqrt_n;
    x.col(j) /= scale;
    scales[j] = scale;
  }
  return scales;
}

namespace {

void check_finite(const Eigen::MatrixXd& x, const char* what) {
  if (!x.allFinite()) {
    throw Error(std::string(what) + " contains non-finite entries");
  }
}

}  // namespace

Dataset standardize(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y) {
  const Eigen::Index n = raw_x.rows();
  const Eigen::Index p = raw_x.cols();
  if (n < 2) throw Error("need at least 2 observations, got " + std::to_string(n));
  if (p < 1) throw Error("need at least 1 column");
  if (raw_y.size() != n) {
    throw DimensionMismatch("response length " + std::to_string(raw_y.size()) +
                            " does not match design rows " + std::to_string(n));
  }
  check_finite(raw_x, "design matrix");
  check_finite(raw_y, "response");

  Dataset d;
  d.x = raw_x;
  d.col_scales = standardize_columns(d.x);
  d.y = raw_y;
  d.n = n;
  d.p = p;
  return d;
}

Dataset subset_rows(const Dataset& d, const std::vector<int>& indices,
                    bool restandardize) {
  const Eigen::Index m = static_cast<Eigen::Index>(indices.size());
  Dataset out;
  out.x.resize(m, d.p);
  out.y.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.x.row(i) = d.x.row(indices[static_cast<size_t>(i)]);
    out.y[i] = d.y[indices[static_cast<size_t>(i)]];
  }
  out.n = m;
  out.p = d.p;
  out.column_names = d.column_names;
  if (restandardize) {
    out.col_scales = standardize_columns(out.x);
  } else {
    out.col_scales = Eigen::VectorXd::Ones(d.p);
  }
  return out;
}

Eigen::VectorXd residual(const Dataset& d, const Eigen::VectorXd& beta) {
  if (beta.size() != d.p) {
    throw DimensionMismatch("beta length " + std::to_string(beta.size()) +
                            " does not match p = " + std::to_string(d.p));
  }
  return d.y - d.x * beta;
}

double sup_correlation(const Dataset& d, const Eigen::VectorXd& r) {
  if (r.size() != d.n) {
    throw DimensionMismatch("residual length " + std::to_string(r.size()) +
                            " does not match n = " + std::to_string(d.n));
  }
  return (d.x.transpose() * r).cwiseAbs().maxCoeff();
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

Eigen::VectorXd least_squares_refit(const Dataset& d,
                                    const std::vector<int>& support) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.p);
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());
  if (k == 0) return beta;
  if (k > d.n) {
    throw SingularSubmatrix("support size " + std::to_string(k) +
                            " exceeds sample size " + std::to_string(d.n));
  }
  Eigen::MatrixXd xs(d.n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    xs.col(c) = d.x.col(support[static_cast<size_t>(c)]);
  }

  // Condition check on the restricted Gram matrix before solving.
  Eigen::MatrixXd gram = xs.transpose() * xs;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  double lo = eig.eigenvalues().minCoeff();
  double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularSubmatrix("restricted Gram matrix is rank-deficient");
  }

  Eigen::VectorXd bs = xs.colPivHouseholderQr().solve(d.y);
  for (Eigen::Index c = 0; c < k; ++c) {
    beta[support[static_cast<size_t>(c)]] = bs[c];
  }
  return beta;
}

Eigen::VectorXd to_raw_scale(const Dataset& d, const Eigen::VectorXd& beta) {
  if (beta.size() != d.p) {
    throw DimensionMismatch("beta length does not match p");
  }
  return beta.array() / d.col_scales.array();
}

}  // namespace trex

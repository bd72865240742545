#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lrcs {

// Dense real matrix, the universal carrier for Y, X, A, R. Row/column
// conventions follow Eigen; storage is column-major.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numeric failure: non-convergence, singularity, degenerate inputs.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File and parse failures.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite())
    throw std::invalid_argument(name + ": matrix contains NaN or Inf entries");
}

inline void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                          const std::string& name) {
  if (m.rows() != rows || m.cols() != cols)
    throw std::invalid_argument(name + ": expected " + std::to_string(rows) + "x" +
                                std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()));
}

}  // namespace lrcs

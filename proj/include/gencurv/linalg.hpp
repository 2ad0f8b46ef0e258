#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace gencurv {

// Error kinds map onto CLI exit codes: invalid input -> 2, unsupported -> 3.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Global zero tolerance. Starts at 1e-9, or GENCURV_TOL when set.
double tolerance();
void setTolerance(double t);
inline constexpr double kDiscTol = 1e-7;
inline constexpr double kDefaultTol = 1e-9;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const;
  std::vector<double> column(std::size_t j) const;
  void setColumn(std::size_t j, const std::vector<double>& v);
  double maxAbs() const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(double s) const;
  std::vector<double> operator*(const std::vector<double>& v) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

double maxAbsDiff(const Matrix& a, const Matrix& b);
double trace(const Matrix& m);
double determinant(const Matrix& m);
Matrix inverse(const Matrix& m);  // throws SingularityError
std::size_t rank(const Matrix& m, double tol);
// Orthonormal-free basis of the null space, one vector per column.
Matrix nullspace(const Matrix& m, double tol);
// Least-squares solve via normal equations on a full-column-rank system.
std::vector<double> solve(const Matrix& a, const std::vector<double>& b);

struct SymEigen {
  std::vector<double> values;
  Matrix vectors;  // columns
};
// Cyclic Jacobi rotations; input must be symmetric.
SymEigen symmetricEigen(const Matrix& m);

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  static Tensor cube(std::size_t dim, std::size_t rank);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  std::size_t offset(const std::vector<std::size_t>& idx) const;
  double& at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
  double at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
  }

  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(double s) const;
  double maxAbs() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

double maxAbsDiff(const Tensor& a, const Tensor& b);

class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(Matrix m);  // throws unless exactly symmetric
  static BilinearForm diagonal(const std::vector<double>& d);

  std::size_t dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  bool nondegenerate() const;
  const Matrix& inverseMatrix() const;  // throws SingularityError

 private:
  Matrix m_;
  Matrix inv_;
  bool haveInv_ = false;
};

// Pairs are (axis of t, axis of u).
Tensor contract(const Tensor& t, const Tensor& u,
                const std::vector<std::pair<std::size_t, std::size_t>>& axes);
Tensor tensorProduct(const Tensor& t, const Tensor& u);
Tensor antisymmetrize(const Tensor& t);
Tensor symmetrize(const Tensor& t);
Tensor raiseIndex(const Tensor& t, const BilinearForm& form, std::size_t axis);
Tensor lowerIndex(const Tensor& t, const BilinearForm& form, std::size_t axis);
// Apply a matrix to one axis: out[..i..] = sum_j m(i,j) t[..j..].
Tensor applyOnAxis(const Tensor& t, const Matrix& m, std::size_t axis);

Tensor fromVector(const std::vector<double>& v);
Tensor fromMatrix(const Matrix& m);
Matrix toMatrix(const Tensor& t);

// 12 significant digits; negative zero prints as 0.
std::string formatScalar(double x);

int permutationSign(const std::vector<std::size_t>& p);
Tensor levi(std::size_t n);

}  // namespace gencurv

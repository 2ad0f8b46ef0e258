#include "gencurv/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace gencurv {

namespace {

double initialTolerance() {
  if (const char* s = std::getenv("GENCURV_TOL")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s && std::isfinite(v) && v > 0) return v;
  }
  return kDefaultTol;
}

std::atomic<double>& tolSlot() {
  static std::atomic<double> slot{initialTolerance()};
  return slot;
}

void requireSquare(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionError(std::string(what) + ": matrix not square");
}

// Row echelon form with partial pivoting. Returns pivot columns.
std::vector<std::size_t> echelon(Matrix& a, double tol) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  double scale = std::max(1.0, a.maxAbs());
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t best = r;
    for (std::size_t i = r + 1; i < a.rows(); ++i)
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    if (std::abs(a(best, c)) <= tol * scale) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(best, j));
    double p = a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) /= p;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      double f = a(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

double det3(const Matrix& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Matrix minorOf(const Matrix& m, std::size_t r, std::size_t c) {
  std::size_t n = m.rows();
  Matrix out(n - 1, n - 1);
  for (std::size_t i = 0, oi = 0; i < n; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0, oj = 0; j < n; ++j) {
      if (j == c) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

double cofactorDet(const Matrix& m) {
  switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3: return det3(m);
    default: break;
  }
  double d = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = (j % 2 == 0) ? 1.0 : -1.0;
    d += s * m(0, j) * cofactorDet(minorOf(m, 0, j));
  }
  return d;
}

// LU with partial pivoting; returns det and fills the inverse if asked.
double luDet(const Matrix& m, Matrix* inv) {
  std::size_t n = m.rows();
  Matrix a = m;
  Matrix b = Matrix::identity(n);
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    if (a(best, c) == 0.0) return 0.0;
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(c, j), a(best, j));
        std::swap(b(c, j), b(best, j));
      }
      det = -det;
    }
    double p = a(c, c);
    det *= p;
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= p;
      b(c, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      double f = a(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        b(i, j) -= f * b(c, j);
      }
    }
  }
  if (inv) *inv = b;
  return det;
}

}  // namespace

double tolerance() { return tolSlot().load(); }
void setTolerance(double t) {
  if (!(t > 0) || !std::isfinite(t)) throw InvalidInputError("tolerance must be positive");
  tolSlot().store(t);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::setColumn(std::size_t j, const std::vector<double>& v) {
  if (v.size() != rows_) throw DimensionError("column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double Matrix::maxAbs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
  Matrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

Matrix Matrix::operator*(double s) const {
  Matrix r = *this;
  for (double& x : r.data_) x *= s;
  return r;
}

std::vector<double> Matrix::operator*(const std::vector<double>& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  std::vector<double> r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

double maxAbsDiff(const Matrix& a, const Matrix& b) { return (a - b).maxAbs(); }

double trace(const Matrix& m) {
  requireSquare(m, "trace");
  double t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

double determinant(const Matrix& m) {
  requireSquare(m, "determinant");
  if (m.rows() <= 4) return cofactorDet(m);
  return luDet(m, nullptr);
}

Matrix inverse(const Matrix& m) {
  requireSquare(m, "inverse");
  std::size_t n = m.rows();
  // Hadamard bound: |det| <= prod of row norms, so this test is scale-free.
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += m(i, j) * m(i, j);
    scale *= std::sqrt(r);
  }
  if (n <= 4) {
    double d = cofactorDet(m);
    if (!(std::abs(d) > tolerance() * scale)) throw SingularityError("matrix is singular");
    Matrix inv(n, n);
    if (n == 1) {
      inv(0, 0) = 1.0 / d;
      return inv;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        inv(j, i) = s * cofactorDet(minorOf(m, i, j)) / d;
      }
    return inv;
  }
  Matrix inv;
  double d = luDet(m, &inv);
  if (!(std::abs(d) > tolerance() * scale)) throw SingularityError("matrix is singular");
  return inv;
}

std::size_t rank(const Matrix& m, double tol) {
  Matrix a = m;
  return echelon(a, tol).size();
}

Matrix nullspace(const Matrix& m, double tol) {
  Matrix a = m;
  auto piv = echelon(a, tol);
  std::vector<bool> isPivot(m.cols(), false);
  for (auto p : piv) isPivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!isPivot[c]) free.push_back(c);
  Matrix out(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    out(free[k], k) = 1.0;
    for (std::size_t r = 0; r < piv.size(); ++r) out(piv[r], k) = -a(r, free[k]);
  }
  return out;
}

std::vector<double> solve(const Matrix& a, const std::vector<double>& b) {
  Matrix at = a.transpose();
  return inverse(at * a) * (at * b);
}

SymEigen symmetricEigen(const Matrix& m) {
  requireSquare(m, "symmetricEigen");
  std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) throw InvalidInputError("symmetricEigen: matrix not symmetric");
  Matrix a = m;
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  SymEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  out.vectors = v;
  return out;
}

// ---- Tensor

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
  std::size_t count = 1;
  for (auto d : shape_) count *= d;
  data_.assign(count, fill);
}

Tensor Tensor::cube(std::size_t dim, std::size_t rank) {
  return Tensor(std::vector<std::size_t>(rank, dim));
}

std::size_t Tensor::offset(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) throw DimensionError("index rank mismatch");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= shape_[k]) throw DimensionError("index out of range");
    off = off * shape_[k] + idx[k];
  }
  return off;
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (shape_ != o.shape_) throw DimensionError("tensor sum shape mismatch");
  Tensor r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

Tensor Tensor::operator-(const Tensor& o) const {
  if (shape_ != o.shape_) throw DimensionError("tensor difference shape mismatch");
  Tensor r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

Tensor Tensor::operator*(double s) const {
  Tensor r = *this;
  for (double& x : r.data_) x *= s;
  return r;
}

double Tensor::maxAbs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double maxAbsDiff(const Tensor& a, const Tensor& b) { return (a - b).maxAbs(); }

namespace {

// Iterate over all multi-indices of a shape.
bool nextIndex(std::vector<std::size_t>& idx, const std::vector<std::size_t>& shape) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

void requireCubical(const Tensor& t, const char* what) {
  for (auto d : t.shape())
    if (d != t.shape()[0]) throw DimensionError(std::string(what) + ": non-cubical shape");
}

}  // namespace

Tensor contract(const Tensor& t, const Tensor& u,
                const std::vector<std::pair<std::size_t, std::size_t>>& axes) {
  std::vector<bool> tUsed(t.rank(), false), uUsed(u.rank(), false);
  for (auto [a, b] : axes) {
    if (a >= t.rank() || b >= u.rank()) throw DimensionError("contract: axis out of range");
    if (tUsed[a] || uUsed[b]) throw DimensionError("contract: axis repeated");
    if (t.shape()[a] != u.shape()[b]) throw DimensionError("contract: paired axes differ in length");
    tUsed[a] = uUsed[b] = true;
  }
  std::vector<std::size_t> tFree, uFree, outShape, sumShape;
  for (std::size_t k = 0; k < t.rank(); ++k)
    if (!tUsed[k]) { tFree.push_back(k); outShape.push_back(t.shape()[k]); }
  for (std::size_t k = 0; k < u.rank(); ++k)
    if (!uUsed[k]) { uFree.push_back(k); outShape.push_back(u.shape()[k]); }
  for (auto [a, b] : axes) sumShape.push_back(t.shape()[a]);

  Tensor out(outShape);
  std::vector<std::size_t> oi(outShape.size(), 0), ti(t.rank()), ui(u.rank());
  if (out.size() == 0) return out;
  do {
    for (std::size_t k = 0; k < tFree.size(); ++k) ti[tFree[k]] = oi[k];
    for (std::size_t k = 0; k < uFree.size(); ++k) ui[uFree[k]] = oi[tFree.size() + k];
    double acc = 0.0;
    std::vector<std::size_t> si(sumShape.size(), 0);
    bool any = true;
    for (auto d : sumShape) any = any && d > 0;
    if (any) {
      do {
        for (std::size_t k = 0; k < axes.size(); ++k) {
          ti[axes[k].first] = si[k];
          ui[axes[k].second] = si[k];
        }
        acc += t.at(ti) * u.at(ui);
      } while (nextIndex(si, sumShape));
    }
    out.at(oi) = acc;
  } while (nextIndex(oi, outShape));
  return out;
}

Tensor tensorProduct(const Tensor& t, const Tensor& u) { return contract(t, u, {}); }

namespace {

Tensor alternate(const Tensor& t, bool withSign) {
  requireCubical(t, withSign ? "antisymmetrize" : "symmetrize");
  std::size_t k = t.rank();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  Tensor out(t.shape());
  if (t.size() == 0) return out;
  std::vector<std::size_t> idx(k, 0), src(k);
  do {
    double acc = 0.0;
    for (const auto& p : perms) {
      for (std::size_t s = 0; s < k; ++s) src[s] = idx[p[s]];
      acc += (withSign ? permutationSign(p) : 1) * t.at(src);
    }
    out.at(idx) = acc / static_cast<double>(perms.size());
  } while (nextIndex(idx, t.shape()));
  return out;
}

}  // namespace

Tensor antisymmetrize(const Tensor& t) { return alternate(t, true); }
Tensor symmetrize(const Tensor& t) { return alternate(t, false); }

Tensor applyOnAxis(const Tensor& t, const Matrix& m, std::size_t axis) {
  if (axis >= t.rank()) throw DimensionError("axis out of range");
  if (m.cols() != t.shape()[axis]) throw DimensionError("axis length does not match matrix");
  auto shape = t.shape();
  shape[axis] = m.rows();
  Tensor out(shape);
  if (out.size() == 0) return out;
  std::vector<std::size_t> idx(shape.size(), 0), src;
  do {
    src = idx;
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      src[axis] = j;
      acc += m(idx[axis], j) * t.at(src);
    }
    out.at(idx) = acc;
  } while (nextIndex(idx, shape));
  return out;
}

Tensor raiseIndex(const Tensor& t, const BilinearForm& form, std::size_t axis) {
  return applyOnAxis(t, form.inverseMatrix(), axis);
}

Tensor lowerIndex(const Tensor& t, const BilinearForm& form, std::size_t axis) {
  return applyOnAxis(t, form.matrix(), axis);
}

Tensor fromVector(const std::vector<double>& v) {
  Tensor t({v.size()});
  t.data() = v;
  return t;
}

Tensor fromMatrix(const Matrix& m) {
  Tensor t({m.rows(), m.cols()});
  t.data() = m.data();
  return t;
}

Matrix toMatrix(const Tensor& t) {
  if (t.rank() != 2) throw DimensionError("toMatrix: rank must be 2");
  Matrix m(t.shape()[0], t.shape()[1]);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = t(i, j);
  return m;
}

std::string formatScalar(double x) {
  if (x == 0.0) x = 0.0;
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

int permutationSign(const std::vector<std::size_t>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

Tensor levi(std::size_t n) {
  Tensor t = Tensor::cube(n, n);
  std::vector<std::size_t> idx(n, 0);
  do t.at(idx) = permutationSign(idx);
  while (nextIndex(idx, t.shape()));
  return t;
}

// ---- BilinearForm

BilinearForm::BilinearForm(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("bilinear form must be square");
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m_(i, j) != m_(j, i)) throw InvalidInputError("bilinear form is not symmetric");
  for (double x : m_.data())
    if (!std::isfinite(x)) throw InvalidInputError("bilinear form has non-finite entry");
  try {
    inv_ = inverse(m_);
    haveInv_ = true;
  } catch (const SingularityError&) {
    haveInv_ = false;
  }
}

BilinearForm BilinearForm::diagonal(const std::vector<double>& d) {
  return BilinearForm(Matrix::diagonal(d));
}

bool BilinearForm::nondegenerate() const { return haveInv_; }

const Matrix& BilinearForm::inverseMatrix() const {
  if (!haveInv_) throw SingularityError("bilinear form is degenerate");
  return inv_;
}

}  // namespace gencurv

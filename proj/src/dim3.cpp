#include "gencurv/dim3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <numeric>
#include <sstream>

namespace gencurv {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec add(const Vec& a, const Vec& b, double t = 1.0) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += t * b[i];
  return r;
}

Vec scaled(const Vec& a, double t) {
  Vec r(a);
  for (double& x : r) x *= t;
  return r;
}

double gdot(const Matrix& G, const Vec& a, const Vec& b) { return dot(a, G * b); }

Vec cross3(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec rowOf(const Matrix& m, std::size_t i) {
  Vec r(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) r[j] = m(i, j);
  return r;
}

// Null vector of a rank-2 3x3 matrix: the longest cross product of two rows.
Vec kernelVector3(const Matrix& m) {
  Vec best;
  double bn = -1.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      Vec c = cross3(rowOf(m, i), rowOf(m, j));
      double nn = dot(c, c);
      if (nn > bn) {
        bn = nn;
        best = c;
      }
    }
  return scaled(best, 1.0 / std::sqrt(bn));
}

// Two vectors spanning the orthogonal complement of w (Euclidean).
std::pair<Vec, Vec> complementOf(const Vec& w) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(w[i]) < std::abs(w[k])) k = i;
  Vec e(3, 0.0);
  e[k] = 1.0;
  Vec p = cross3(w, e);
  Vec q = cross3(w, p);
  return {scaled(p, 1.0 / std::sqrt(dot(p, p))), scaled(q, 1.0 / std::sqrt(dot(q, q)))};
}

// One-sided Jacobi: going through m^T m would put a 1e-16 roundoff at 1e-8
// in the singular values, right where the rank cut sits.
std::vector<double> singularValues(Matrix a) {
  const std::size_t r = a.rows(), c = a.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < c; ++p)
      for (std::size_t q = p + 1; q < c; ++q) {
        double al = 0, be = 0, ga = 0;
        for (std::size_t i = 0; i < r; ++i) {
          al += a(i, p) * a(i, p);
          be += a(i, q) * a(i, q);
          ga += a(i, p) * a(i, q);
        }
        if (ga == 0.0) continue;
        off = std::max(off, std::abs(ga) / std::sqrt(al * be));
        double zeta = (be - al) / (2 * ga);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        double cs = 1 / std::sqrt(1 + t * t), sn = cs * t;
        for (std::size_t i = 0; i < r; ++i) {
          double x = a(i, p), y = a(i, q);
          a(i, p) = cs * x - sn * y;
          a(i, q) = sn * x + cs * y;
        }
      }
    if (off < 1e-15) break;
  }
  std::vector<double> s(c);
  for (std::size_t j = 0; j < c; ++j) {
    double n2 = 0;
    for (std::size_t i = 0; i < r; ++i) n2 += a(i, j) * a(i, j);
    s[j] = std::sqrt(n2);
  }
  return s;
}

double singularValueRank(const Matrix& m, double tol, std::size_t* out = nullptr) {
  std::size_t r = 0;
  double smallest = INFINITY;
  for (double s : singularValues(m)) {
    if (s > tol) ++r;
    smallest = std::min(smallest, s);
  }
  if (out) *out = r;
  return smallest;
}

std::size_t numericRank(const Matrix& m, double tol) {
  std::size_t r = 0;
  singularValueRank(m, tol, &r);
  return r;
}

double signOf(double x) { return x < 0 ? -1.0 : 1.0; }

Matrix columnsToMatrix(const std::vector<Vec>& cols) {
  Matrix m(cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.setColumn(j, cols[j]);
  return m;
}

// Characteristic polynomial x^3 + a x^2 + b x + c.
struct Cubic {
  double a, b, c;
  double operator()(double x) const { return ((x + a) * x + b) * x + c; }
  double deriv(double x) const { return (3 * x + 2 * a) * x + b; }
  double discriminant() const {
    return 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c;
  }
  double polish(double x) const {
    for (int it = 0; it < 3; ++it) {
      double d = deriv(x);
      if (d == 0.0) break;
      double nx = x - (*this)(x) / d;
      if (!std::isfinite(nx)) break;
      x = nx;
    }
    return x;
  }
  std::vector<double> realRoots() const {
    double p = b - a * a / 3.0;
    double q = 2 * a * a * a / 27.0 - a * b / 3.0 + c;
    double shift = -a / 3.0;
    double D = q * q / 4.0 + p * p * p / 27.0;
    std::vector<double> r;
    if (D > 0) {
      double s = std::sqrt(D);
      r.push_back(polish(std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s) + shift));
    } else if (p == 0.0) {
      r.assign(3, shift);
    } else {
      double m = 2 * std::sqrt(-p / 3.0);
      double arg = std::clamp(3 * q / (p * m), -1.0, 1.0);
      double th = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) r.push_back(polish(m * std::cos(th - 2 * M_PI * k / 3.0) + shift));
      std::sort(r.begin(), r.end());
    }
    return r;
  }
};

Cubic charPoly(const Matrix& L) {
  double t = trace(L);
  double c2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) c2 += L(i, i) * L(j, j) - L(i, j) * L(j, i);
  return Cubic{-t, c2, -determinant(L)};
}

enum class PlaneKind { Auto, Complex, Jordan };

struct PlaneResult {
  std::string kind;  // diag, complex, jordan+, jordan-
  double first = 0.0, second = 0.0;
  Vec f1, f2;
};

// Normal form of a g-symmetric operator on an invariant plane span(p, q). The
// first output vector has sign s1 when the plane is indefinite.
PlaneResult planeForm(const Matrix& G, const Matrix& op, const Vec& p, const Vec& q, double s1,
                      PlaneKind hint) {
  Matrix B = columnsToMatrix({p, q});
  Matrix M = inverse(B.transpose() * B) * (B.transpose() * (op * B));
  Matrix gram = B.transpose() * (G * B);
  double tr = M(0, 0) + M(1, 1);
  double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  double sc = std::max({std::abs(tr) / 2, std::sqrt(std::abs(det)), M.maxAbs(), 1e-300});
  double disc = (tr * tr - 4 * det) / (sc * sc);
  double th = tr / 2;
  Matrix N = M - Matrix::identity(2) * th;
  double gramDet = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  bool indefinite = gramDet < 0;

  PlaneKind kind = hint;
  if (kind == PlaneKind::Auto) {
    if (disc < -kDiscTol)
      kind = PlaneKind::Complex;
    else if (std::abs(disc) <= kDiscTol && N.maxAbs() > 1e-6 * sc)
      kind = PlaneKind::Jordan;
  }
  auto amb = [&](double x, double y) { return add(scaled(p, x), q, y); };
  PlaneResult r;

  if (kind == PlaneKind::Complex) {
    using C = std::complex<double>;
    double eta = std::sqrt(std::max(det - th * th, 0.0));
    C lam(th, eta);
    C c1, c2;
    if (std::abs(M(0, 1)) >= std::abs(M(1, 0))) {
      c1 = M(0, 1);
      c2 = lam - M(0, 0);
    } else {
      c1 = lam - M(1, 1);
      c2 = M(1, 0);
    }
    std::size_t d = p.size();
    std::vector<C> w(d);
    for (std::size_t i = 0; i < d; ++i) w[i] = c1 * p[i] + c2 * q[i];
    C gww = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) gww += w[i] * G(i, j) * w[j];
    C z = std::sqrt(C(2 * s1, 0.0) / gww);
    r.f1.assign(d, 0.0);
    r.f2.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      C x = z * w[i];
      r.f1[i] = x.real();
      r.f2[i] = -x.imag();
    }
    r.kind = "complex";
    r.first = th;
    r.second = eta;
    return r;
  }

  if (kind == PlaneKind::Jordan) {
    Vec Np = amb(N(0, 0), N(1, 0)), Nq = amb(N(0, 1), N(1, 1));
    Vec ell = dot(Np, Np) >= dot(Nq, Nq) ? Np : Nq;
    Vec w = std::abs(gdot(G, ell, p)) >= std::abs(gdot(G, ell, q)) ? p : q;
    Vec Nw = (&w == &p || w == p) ? Np : Nq;
    double gl = gdot(G, ell, w);
    double c = dot(Nw, ell) / (gl * dot(ell, ell));
    double t = std::sqrt(2 * std::abs(c));
    Vec l2 = scaled(ell, t);
    Vec m = add(w, ell, -gdot(G, w, w) / (2 * gl));
    m = scaled(m, 2 * s1 / gdot(G, l2, m));
    r.f1 = scaled(add(l2, m), 0.5);
    r.f2 = scaled(add(m, l2, -1.0), 0.5);
    r.kind = c * s1 > 0 ? "jordan+" : "jordan-";
    r.first = th;
    r.second = th;
    return r;
  }

  // Diagonalizable.
  std::vector<std::pair<Vec, double>> vecs;
  if (std::abs(disc) <= kDiscTol) {
    SymEigen e = symmetricEigen(gram);
    for (std::size_t k = 0; k < 2; ++k) {
      Vec f = amb(e.vectors(0, k), e.vectors(1, k));
      vecs.push_back({scaled(f, 1.0 / std::sqrt(std::abs(gdot(G, f, f)))), th});
    }
  } else {
    double rr = std::sqrt(std::max(tr * tr - 4 * det, 0.0)) / 2;
    for (double lam : {th - rr, th + rr}) {
      double x, y;
      if (std::abs(M(0, 1)) + std::abs(lam - M(0, 0)) >= std::abs(M(1, 0)) + std::abs(lam - M(1, 1))) {
        x = M(0, 1);
        y = lam - M(0, 0);
      } else {
        x = lam - M(1, 1);
        y = M(1, 0);
      }
      Vec f = amb(x, y);
      vecs.push_back({scaled(f, 1.0 / std::sqrt(std::abs(gdot(G, f, f)))), lam});
    }
  }
  if (indefinite && gdot(G, vecs[0].first, vecs[0].first) * s1 < 0) std::swap(vecs[0], vecs[1]);
  r.kind = "diag";
  r.f1 = vecs[0].first;
  r.f2 = vecs[1].first;
  r.first = vecs[0].second;
  r.second = vecs[1].second;
  return r;
}

Matrix realizeIn(const Matrix& op, const Matrix& F) { return inverse(F) * (op * F); }

double sumSign(const std::vector<double>& eps) { return std::accumulate(eps.begin(), eps.end(), 0.0); }

NormalForm finish(NormalFormTag tag, const Matrix& op, Matrix F, const Matrix& G, bool lFamily) {
  NormalForm nf;
  nf.tag = std::move(tag);
  nf.frame = std::move(F);
  for (std::size_t j = 0; j < nf.frame.cols(); ++j) {
    Vec f = nf.frame.column(j);
    nf.eps.push_back(signOf(gdot(G, f, f)));
  }
  nf.realized = realizeIn(op, nf.frame);
  Matrix target = lFamily ? lNormalFormMatrix(nf.tag) : mNormalFormMatrix(nf.tag);
  nf.residual = maxAbsDiff(nf.realized, target);
  return nf;
}

Vec unitBySign(const Matrix& G, const Vec& v) { return scaled(v, 1.0 / std::sqrt(std::abs(gdot(G, v, v)))); }

}  // namespace

std::vector<double> crossProduct(const std::vector<double>& u, const std::vector<double>& v,
                                 const Frame& frame) {
  if (u.size() != 3 || v.size() != 3 || frame.v.rows() != 3)
    throw UnsupportedError("cross product is three-dimensional");
  Matrix Vinv = inverse(frame.v);
  Vec a = Vinv * u, b = Vinv * v;
  Tensor e = levi(3);
  Vec w(3, 0.0);
  for (std::size_t c = 0; c < 3; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) s += e(i, j, c) * a[i] * b[j];
    w[c] = frame.eps[c] * s;
  }
  return frame.v * w;
}

LieAlgebra bracketFromL(const LEncoding& enc) {
  if (enc.L.rows() != 3 || enc.L.cols() != 3 || enc.eps.size() != 3)
    throw UnsupportedError("L-encoding is three-dimensional");
  LieAlgebra alg = makeLieAlgebra(3);
  Tensor e = levi(3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) {
        double s = 0.0;
        for (std::size_t d = 0; d < 3; ++d) s += e(a, b, d) * enc.L(c, d) * enc.eps[d];
        alg.kappa(a, b, c) = s;
      }
  return alg;
}

namespace {
LEncoding lFromFrameConstants(const Tensor& k, const std::vector<double>& eps) {
  Tensor e = levi(3);
  LEncoding enc{Matrix(3, 3), eps};
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t d = 0; d < 3; ++d) {
      double s = 0.0;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) s += e(a, b, d) * k(a, b, c);
      enc.L(c, d) = 0.5 * s * eps[d];
    }
  return enc;
}
}  // namespace

LEncoding lFromBracket(const AdaptedBasis& basis) {
  if (basis.n != 3) throw UnsupportedError("L-encoding needs n = 3");
  if (determinant(basis.v) <= 0) throw InvalidInputError("L-encoding needs an oriented frame");
  return lFromFrameConstants(basis.kappaFrame, basis.eps);
}

LEncoding lFromBracket(const LieAlgebra& alg, const Frame& frame) {
  if (alg.n != 3) throw UnsupportedError("L-encoding needs n = 3");
  if (determinant(frame.v) <= 0) throw InvalidInputError("L-encoding needs an oriented frame");
  return lFromFrameConstants(changeBasis(alg, frame.v).kappa, frame.eps);
}

bool isGSymmetric(const LEncoding& enc, double tol) {
  double sc = std::max(1.0, enc.L.maxAbs());
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      if (std::abs(enc.L(a, b) * enc.eps[b] - enc.L(b, a) * enc.eps[a]) > tol * sc) return false;
  return true;
}

std::string describe(const NormalFormTag& tag) {
  std::ostringstream os;
  os.precision(12);
  os << tag.family << "(";
  for (std::size_t i = 0; i < tag.params.size(); ++i) os << (i ? "," : "") << tag.params[i];
  os << ")";
  return os.str();
}

Matrix lNormalFormMatrix(const NormalFormTag& t) {
  const auto& p = t.params;
  const double r = 1.0 / std::sqrt(2.0);
  if (t.family == "L1") return Matrix::diagonal({p.at(0), p.at(1), p.at(2)});
  if (t.family == "L2") return Matrix{{p.at(2), 0, 0}, {0, p.at(0), -p.at(1)}, {0, p.at(1), p.at(0)}};
  if (t.family == "L3")
    return Matrix{{p.at(1), 0, 0}, {0, 0.5 + p.at(0), 0.5}, {0, -0.5, -0.5 + p.at(0)}};
  if (t.family == "L4")
    return Matrix{{p.at(1), 0, 0}, {0, -0.5 + p.at(0), -0.5}, {0, 0.5, 0.5 + p.at(0)}};
  if (t.family == "L5") return Matrix{{p.at(0), r, 0}, {r, p.at(0), r}, {0, -r, p.at(0)}};
  throw InvalidInputError("unknown L normal form " + t.family);
}

Matrix mNormalFormMatrix(const NormalFormTag& t) {
  const auto& p = t.params;
  if (t.family == "M1") return Matrix::diagonal({p.at(0), p.at(1)});
  if (t.family == "M2") return Matrix{{p.at(0), -p.at(1)}, {p.at(1), p.at(0)}};
  if (t.family == "M3") return Matrix{{0.5 + p.at(0), 0.5}, {-0.5, -0.5 + p.at(0)}};
  if (t.family == "M4") return Matrix{{-0.5 + p.at(0), -0.5}, {0.5, 0.5 + p.at(0)}};
  throw InvalidInputError("unknown M normal form " + t.family);
}

NormalForm normalFormOfSymmetricL(const LEncoding& enc) {
  if (enc.L.rows() != 3 || enc.eps.size() != 3) throw UnsupportedError("L normal forms are three-dimensional");
  if (!isGSymmetric(enc, 1e3 * tolerance())) throw InvalidInputError("L is not g-symmetric");
  const Matrix& L = enc.L;
  Matrix G = Matrix::diagonal(enc.eps);
  double total = sumSign(enc.eps);
  bool definite = std::abs(total) == 3.0;
  double s = total > 0 ? 1.0 : -1.0;  // the sign that occurs at least twice

  auto orient = [](std::vector<Vec>& cols, std::size_t flip) {
    if (determinant(columnsToMatrix(cols)) < 0) cols[flip] = scaled(cols[flip], -1.0);
  };

  if (definite) {
    Matrix Ls = (L + L.transpose()) * 0.5;
    SymEigen e = symmetricEigen(Ls);
    std::vector<std::size_t> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return e.values[i] < e.values[j]; });
    std::vector<Vec> cols;
    for (auto i : idx) cols.push_back(e.vectors.column(i));
    orient(cols, 2);
    return finish({"L1", {e.values[idx[0]], e.values[idx[1]], e.values[idx[2]]}}, L, columnsToMatrix(cols), G,
                  true);
  }

  Cubic cp = charPoly(L);
  double sc = 1.0 + L.maxAbs();
  double disc = cp.discriminant() / std::pow(sc, 6);
  double rankTol = 1e-6 * std::max(1.0, L.maxAbs());

  auto diagonalFrame = [&](std::vector<std::pair<Vec, double>> ev) {
    // ev: g-orthonormal eigenvectors with eigenvalues
    std::vector<std::pair<Vec, double>> same, other;
    for (auto& x : ev) (gdot(G, x.first, x.first) * s > 0 ? same : other).push_back(x);
    std::sort(same.begin(), same.end(), [](auto& a, auto& b) { return a.second < b.second; });
    std::vector<Vec> cols{same.at(0).first, same.at(1).first, other.at(0).first};
    orient(cols, 2);
    return finish({"L1", {same[0].second, same[1].second, other[0].second}}, L, columnsToMatrix(cols), G, true);
  };
  auto eigenvector = [&](double lam) { return unitBySign(G, kernelVector3(L - Matrix::identity(3) * lam)); };
  auto withPlane = [&](const Vec& u, PlaneKind kind, const Matrix& op) {
    Vec un = unitBySign(G, u);
    if (gdot(G, un, un) * s < 0) throw InvalidInputError("no indefinite complement for the normal form");
    auto [p, q] = complementOf(G * un);
    PlaneResult pr = planeForm(G, op, p, q, s, kind);
    std::vector<Vec> cols{un, pr.f1, pr.f2};
    orient(cols, 0);
    return std::make_pair(pr, columnsToMatrix(cols));
  };

  auto distinct = [&]() -> NormalForm {
    std::vector<std::pair<Vec, double>> ev;
    for (double r : cp.realRoots()) ev.push_back({eigenvector(r), r});
    if (ev.size() != 3) throw InvalidInputError("no three real eigenvalues");
    return diagonalFrame(ev);
  };
  auto complexPair = [&]() -> NormalForm {
    auto roots = cp.realRoots();
    if (roots.size() != 1) throw InvalidInputError("no complex eigenvalues");
    double gamma = roots.front();
    auto [pr, F] = withPlane(eigenvector(gamma), PlaneKind::Complex, L);
    return finish({"L2", {pr.first, pr.second, gamma}}, L, F, G, true);
  };

  // Repeated eigenvalue: roots of p' locate it stably.
  double dd = (4 * cp.a * cp.a - 12 * cp.b) / (sc * sc);
  bool tripleLikely = std::abs(dd) <= kDiscTol;
  auto repeated = [&](bool triple) -> NormalForm {
    double a = cp.a, b = cp.b;
    double lam;
    if (triple) {
      lam = -a / 3.0;
    } else {
      double rt = std::sqrt(std::max(4 * a * a - 12 * b, 0.0));
      double x1 = (-2 * a - rt) / 6.0, x2 = (-2 * a + rt) / 6.0;
      lam = std::abs(cp(x1)) <= std::abs(cp(x2)) ? x1 : x2;
    }
    double mu = -a - 2 * lam;
    Matrix N = L - Matrix::identity(3) * lam;
    std::size_t rk = numericRank(N, rankTol);

    if (!triple) {
      if (rk <= 1) {
        Vec v = eigenvector(mu);
        auto [p, q] = complementOf(G * v);
        Matrix B = columnsToMatrix({p, q});
        SymEigen e = symmetricEigen(B.transpose() * (G * B));
        std::vector<std::pair<Vec, double>> ev{{v, mu}};
        for (std::size_t k = 0; k < 2; ++k)
          ev.push_back({unitBySign(G, add(scaled(p, e.vectors(0, k)), q, e.vectors(1, k))), lam});
        return diagonalFrame(ev);
      }
      auto [pr, F] = withPlane(eigenvector(mu), PlaneKind::Jordan, L);
      return finish({pr.kind == "jordan+" ? "L3" : "L4", {pr.first, mu}}, L, F, G, true);
    }

    if (rk == 0) {
      std::vector<std::pair<Vec, double>> ev;
      for (std::size_t k = 0; k < 3; ++k) {
        Vec e(3, 0.0);
        e[k] = 1.0;
        ev.push_back({e, lam});
      }
      return diagonalFrame(ev);
    }
    if (rk == 1) {
      // ker N is the degenerate plane orthogonal to the null image; pick a
      // non-null vector in it.
      Vec r0 = rowOf(N, 0);
      for (std::size_t i = 1; i < 3; ++i)
        if (dot(rowOf(N, i), rowOf(N, i)) > dot(r0, r0)) r0 = rowOf(N, i);
      auto [k1, k2] = complementOf(r0);
      Vec best = k1;
      for (const Vec& c : {k2, add(k1, k2), add(k1, k2, -1.0)})
        if (std::abs(gdot(G, c, c)) > std::abs(gdot(G, best, best))) best = c;
      auto [pr, F] = withPlane(best, PlaneKind::Jordan, L);
      return finish({pr.kind == "jordan+" ? "L3" : "L4", {lam, lam}}, L, F, G, true);
    }

    // Three-dimensional nilpotent part.
    Matrix N2 = N * N;
    Vec l0 = N2.column(0);
    for (std::size_t j = 1; j < 3; ++j)
      if (dot(N2.column(j), N2.column(j)) > dot(l0, l0)) l0 = N2.column(j);
    Vec gl = G * l0;
    std::size_t iy = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (std::abs(gl[i]) > std::abs(gl[iy])) iy = i;
    Vec y(3, 0.0);
    y[iy] = 1.0;
    double c = dot(N2 * y, l0) / (gl[iy] * dot(l0, l0));
    if (c * s <= 0) throw InvalidInputError("nilpotent part has no L5 frame");
    double k = std::sqrt(s / (2 * c));
    Vec p = scaled(y, k / gl[iy]);
    Vec Np = N * p;
    double beta = -gdot(G, p, Np) / s;
    double gam = (s - (gdot(G, p, p) + 2 * beta * gdot(G, p, Np) + beta * beta * c * k * k)) / (2 * k);
    Vec x = add(add(p, Np, beta), l0, gam);
    std::vector<Vec> cols{x, scaled(N * x, std::sqrt(2.0)), add(x, N2 * x, -2.0)};
    if (determinant(columnsToMatrix(cols)) < 0)
      for (auto& v : cols) v = scaled(v, -1.0);
    return finish({"L5", {lam}}, L, columnsToMatrix(cols), G, true);
  };

  // The discriminant picks the branch; near a root collision the other
  // branches are tried too and the best fit wins.
  auto repeatedFirst = [&] { return repeated(tripleLikely); };
  auto repeatedOther = [&] { return repeated(!tripleLikely); };
  std::vector<std::function<NormalForm()>> order;
  if (disc > kDiscTol)
    order = {distinct, repeatedFirst, repeatedOther, complexPair};
  else if (disc < -kDiscTol)
    order = {complexPair, repeatedFirst, repeatedOther, distinct};
  else
    order = {repeatedFirst, distinct, complexPair, repeatedOther};
  double accept = 1e-6 * std::max(1.0, L.maxAbs());
  std::optional<NormalForm> best;
  std::string lastError = "no normal form found";
  for (auto& branch : order) {
    try {
      NormalForm nf = branch();
      if (!std::isfinite(nf.residual)) continue;
      if (!best || nf.residual < best->residual) best = std::move(nf);
      if (best->residual <= accept) break;
    } catch (const std::exception& e) {
      lastError = e.what();
    }
  }
  if (!best) throw InvalidInputError(lastError);
  return *best;
}

NormalForm normalFormOfM(const Matrix& M, const std::vector<double>& eps2) {
  if (M.rows() != 2 || M.cols() != 2 || eps2.size() != 2) throw DimensionError("M normal forms are 2x2");
  Matrix G = Matrix::diagonal(eps2);
  double sc = std::max(1.0, M.maxAbs());
  if (std::abs(M(0, 1) * eps2[1] - M(1, 0) * eps2[0]) > 1e3 * tolerance() * sc)
    throw InvalidInputError("M is not g-symmetric");
  if (eps2[0] == eps2[1]) {
    SymEigen e = symmetricEigen((M + M.transpose()) * 0.5);
    std::size_t i0 = e.values[0] <= e.values[1] ? 0 : 1, i1 = 1 - i0;
    Matrix F = columnsToMatrix({e.vectors.column(i0), e.vectors.column(i1)});
    return finish({"M1", {e.values[i0], e.values[i1]}}, M, F, G, false);
  }
  PlaneResult pr = planeForm(G, M, {1.0, 0.0}, {0.0, 1.0}, eps2[0], PlaneKind::Auto);
  Matrix F = columnsToMatrix({pr.f1, pr.f2});
  if (pr.kind == "diag") return finish({"M1", {pr.first, pr.second}}, M, F, G, false);
  if (pr.kind == "complex") return finish({"M2", {pr.first, pr.second}}, M, F, G, false);
  return finish({pr.kind == "jordan+" ? "M3" : "M4", {pr.first}}, M, F, G, false);
}

std::string bianchiName(BianchiKind kind, double parameter) {
  std::ostringstream os;
  os.precision(12);
  switch (kind) {
    case BianchiKind::Abelian: return "abelian";
    case BianchiKind::SO3: return "so(3)";
    case BianchiKind::SO21: return "so(2,1)";
    case BianchiKind::E2: return "e(2)";
    case BianchiKind::E11: return "e(1,1)";
    case BianchiKind::Heis: return "heis";
    case BianchiKind::R2R: return "r2+R";
    case BianchiKind::R3: return "r3";
    case BianchiKind::R3Lambda:
      if (parameter == 1.0) return "r3,1";
      os << "r3,l(" << parameter << ")";
      return os.str();
    case BianchiKind::R3Prime:
      if (parameter == 1.0) return "r'3,1";
      os << "r'3,g(" << parameter << ")";
      return os.str();
  }
  return "?";
}

BianchiLabel identifyBianchi(const LieAlgebra& alg) {
  if (alg.n != 3) throw UnsupportedError("Bianchi identification needs n = 3");
  const double tol = 1e-8;
  double sc = alg.kappa.maxAbs();
  BianchiLabel out;
  auto label = [&](BianchiKind k, double par = 0.0) {
    out.kind = k;
    out.parameter = par;
    out.name = bianchiName(k, par);
    return out;
  };
  if (sc <= tolerance()) return label(BianchiKind::Abelian);
  LieAlgebra a{3, alg.kappa * (1.0 / sc)};

  Matrix derived(3, 3);
  std::size_t col = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j, ++col)
      for (std::size_t c = 0; c < 3; ++c) derived(c, col) = a.kappa(i, j, c);
  std::size_t d = numericRank(derived, tol);
  Vec tau = traceForm(a);
  bool unimodular = std::sqrt(dot(tau, tau)) <= tol;

  if (unimodular) {
    if (d == 0) return label(BianchiKind::Abelian);
    if (d == 1) return label(BianchiKind::Heis);
    SymEigen k = symmetricEigen(killingForm(a));
    double kmax = 0.0;
    for (double v : k.values) kmax = std::max(kmax, std::abs(v));
    int pos = 0, neg = 0;
    for (double v : k.values) {
      if (v > tol * kmax) ++pos;
      if (v < -tol * kmax) ++neg;
    }
    if (d == 2) return label(neg > 0 ? BianchiKind::E2 : BianchiKind::E11);
    return label(neg == 3 ? BianchiKind::SO3 : BianchiKind::SO21);
  }

  // R acting on the unimodular kernel.
  auto [u1, u2] = complementOf(tau);
  Vec x = tau;
  Matrix U = columnsToMatrix({u1, u2});
  Matrix act(3, 2);
  act.setColumn(0, bracket(a, x, u1));
  act.setColumn(1, bracket(a, x, u2));
  Matrix A = inverse(U.transpose() * U) * (U.transpose() * act);
  A = A * (2.0 / trace(A));
  double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  double disc = 4 - 4 * det;
  if (disc < -kDiscTol) {
    double gamma = 1.0 / std::sqrt(det - 1.0);
    if (std::abs(gamma - 1.0) <= 1e-7) gamma = 1.0;
    return label(BianchiKind::R3Prime, gamma);
  }
  if (std::abs(disc) <= kDiscTol) {
    Matrix N = A - Matrix::identity(2);
    return N.maxAbs() <= 1e-6 ? label(BianchiKind::R3Lambda, 1.0) : label(BianchiKind::R3);
  }
  double r = std::sqrt(disc) / 2;
  if (std::abs(1 - r) <= 1e-7) return label(BianchiKind::R2R);
  return label(BianchiKind::R3Lambda, (1 - r) / (1 + r));
}

UnimodularKernel unimodularKernel(const LieAlgebra& alg, const Matrix& g) {
  if (alg.n != 3) throw UnsupportedError("unimodular kernel is implemented for n = 3");
  Vec tau = traceForm(alg);
  double sc = std::max(alg.kappa.maxAbs(), 1e-300);
  if (std::sqrt(dot(tau, tau)) <= tolerance() * sc)
    throw InvalidInputError("algebra is unimodular: kernel is everything");
  auto [u1, u2] = complementOf(tau);
  UnimodularKernel k;
  k.basis = columnsToMatrix({u1, u2});
  Matrix gram = k.basis.transpose() * (g * k.basis);
  k.gramDet = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  double gs = std::max(g.maxAbs(), 1e-300);
  k.degenerate = std::abs(k.gramDet) <= 1e3 * tolerance() * gs * gs;
  Vec tn = scaled(tau, 1.0 / std::sqrt(dot(tau, tau)));
  Vec uu = bracket(alg, u1, u2);
  double defect = std::sqrt(dot(uu, uu));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      Vec ei(3, 0.0), ej(3, 0.0);
      ei[i] = ej[j] = 1.0;
      defect = std::max(defect, std::abs(dot(bracket(alg, ei, ej), tn)));
    }
  k.idealDefect = defect / sc;
  return k;
}

KernelAction kernelAction(const LieAlgebra& alg) {
  if (alg.n != 3) throw UnsupportedError("kernel action is implemented for n = 3");
  Vec tau = traceForm(alg);
  double sc = std::max(alg.kappa.maxAbs(), 1e-300);
  if (std::sqrt(dot(tau, tau)) <= tolerance() * sc) throw InvalidInputError("algebra is unimodular");
  auto [u1, u2] = complementOf(tau);
  Matrix U = columnsToMatrix({u1, u2});
  Matrix act(3, 2);
  act.setColumn(0, bracket(alg, tau, u1));
  act.setColumn(1, bracket(alg, tau, u2));
  Matrix A = inverse(U.transpose() * U) * (U.transpose() * act);
  double tr = trace(A), det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  double m = std::max(A.maxAbs(), 1e-300);
  double disc = (tr * tr - 4 * det) / (m * m);
  KernelAction k;
  if (disc < -kDiscTol) {
    k.A = A * (1.0 / std::sqrt(std::abs(det)));
    return k;
  }
  k.realEigenvalues = true;
  double r = std::sqrt(std::max(tr * tr - 4 * det, 0.0)) / 2;
  double e1 = tr / 2 + r, e2 = tr / 2 - r;
  double big = std::abs(e1) >= std::abs(e2) ? e1 : e2, small = big == e1 ? e2 : e1;
  k.A = A * (1.0 / big);
  k.s = small / big;
  if (std::abs(disc) <= kDiscTol) {
    k.s = 1.0;
    k.diagonalizable = (A - Matrix::identity(2) * (tr / 2)).maxAbs() <= 1e-6 * m;
  } else {
    k.diagonalizable = true;
  }
  return k;
}

}  // namespace gencurv

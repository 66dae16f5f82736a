#include "qg5/matrix.hpp"

#include <cmath>
#include <sstream>

#include "qg5/errors.hpp"

namespace qg5 {

Mat4c Mat4c::identity() {
  Mat4c m;
  for (int i = 0; i < 4; ++i) m.at(i, i) = ExactComplex(1);
  return m;
}

Mat4c Mat4c::scalar(const ExactComplex& s) {
  Mat4c m;
  for (int i = 0; i < 4; ++i) m.at(i, i) = s;
  return m;
}

Mat4c Mat4c::operator+(const Mat4c& o) const {
  Mat4c r;
  for (int i = 0; i < 16; ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

Mat4c Mat4c::operator-(const Mat4c& o) const {
  Mat4c r;
  for (int i = 0; i < 16; ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

Mat4c Mat4c::operator-() const {
  Mat4c r;
  for (int i = 0; i < 16; ++i) r.e_[i] = -e_[i];
  return r;
}

Mat4c Mat4c::operator*(const Mat4c& o) const {
  Mat4c r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const ExactComplex& a = at(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < 4; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) += a * o.at(k, j);
      }
    }
  return r;
}

Mat4c Mat4c::scaled(const ExactComplex& s) const {
  Mat4c r;
  for (int i = 0; i < 16; ++i) r.e_[i] = e_[i] * s;
  return r;
}

bool Mat4c::is_zero() const {
  for (const auto& v : e_)
    if (!v.is_zero()) return false;
  return true;
}

Mat4c Mat4c::transpose() const {
  Mat4c r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat4c Mat4c::conj_transpose() const {
  Mat4c r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.at(j, i) = at(i, j).conj();
  return r;
}

Mat4c Mat4c::inverse() const {
  // Gauss-Jordan on [A | I]; pivots are exact so there is no conditioning
  // question, only invertibility.
  std::array<std::array<ExactComplex, 8>, 4> w;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w[i][j] = at(i, j);
    for (int j = 4; j < 8; ++j) w[i][j] = ExactComplex(j - 4 == i ? 1 : 0);
  }
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (!w[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) throw NotInvertible("Mat4c: singular matrix");
    std::swap(w[col], w[piv]);
    ExactComplex inv = w[col][col].inverse();
    for (int j = 0; j < 8; ++j) w[col][j] = w[col][j] * inv;
    for (int r = 0; r < 4; ++r) {
      if (r == col || w[r][col].is_zero()) continue;
      ExactComplex f = w[r][col];
      for (int j = 0; j < 8; ++j) w[r][j] = w[r][j] - f * w[col][j];
    }
  }
  Mat4c out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.at(i, j) = w[i][j + 4];
  return out;
}

std::pair<ExactComplex, Mat4c> Mat4c::identity_part() const {
  ExactComplex s = at(0, 0);
  return {s, *this - Mat4c::scalar(s)};
}

std::optional<ExactComplex> Mat4c::as_scalar_identity() const {
  auto [s, res] = identity_part();
  if (res.is_zero()) return s;
  return std::nullopt;
}

double Mat4c::max_abs() const {
  double m = 0.0;
  for (const auto& v : e_) m = std::max(m, std::abs(v.to_complex()));
  return m;
}

std::array<std::complex<double>, 16> Mat4c::to_complex() const {
  std::array<std::complex<double>, 16> r;
  for (int i = 0; i < 16; ++i) r[i] = e_[i].to_complex();
  return r;
}

std::string Mat4c::str() const {
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    os << "[";
    for (int j = 0; j < 4; ++j) os << (j ? ", " : " ") << at(i, j).str();
    os << " ]\n";
  }
  return os.str();
}

}  // namespace qg5

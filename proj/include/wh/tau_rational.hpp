#pragma once

#include <functional>
#include <vector>

#include "wh/linalg.hpp"
#include "wh/polynomial.hpp"

namespace wh {

// Pole identities: 0 is tau = 0, 2k+1 / 2k+2 the inside / outside member of pair k.
constexpr int kOriginKey = 0;
inline int inside_key(int pair) { return 2 * pair + 1; }
inline int outside_key(int pair) { return 2 * pair + 2; }
inline bool key_is_inside(int key) { return key == kOriginKey || key % 2 == 1; }
inline int partner_key(int key) { return key == kOriginKey ? -1 : (key % 2 == 1 ? key + 1 : key - 1); }

struct TauPole {
  int key;
  cplx at;
  int mult;
};

// num(tau) / (scale * prod (tau - at)^mult)
class TauRational {
 public:
  TauRational();
  TauRational(Polynomial num, cplx scale = 1.0, std::vector<TauPole> poles = {});
  static TauRational constant(cplx c);

  const Polynomial& num() const { return num_; }
  cplx scale() const { return scale_; }
  const std::vector<TauPole>& poles() const { return poles_; }
  int mult(int key) const;
  int pole_degree() const;
  bool is_zero() const { return num_.is_zero(); }

  cplx operator()(cplx tau) const;
  // Polynomial that multiplies num when brought over the denominator `target`.
  Polynomial lift(const std::vector<TauPole>& target) const;

 private:
  Polynomial num_;
  cplx scale_;
  std::vector<TauPole> poles_;  // sorted by key
};

TauRational operator*(const TauRational& a, const TauRational& b);
TauRational operator+(const TauRational& a, const TauRational& b);
TauRational operator-(const TauRational& a);
TauRational operator-(const TauRational& a, const TauRational& b);

std::vector<TauPole> pole_union(const std::vector<TauPole>& a, const std::vector<TauPole>& b);
Polynomial pole_polynomial(const std::vector<TauPole>& poles);

struct PoleRemoval {
  TauRational value;
  double residual;      // worst relative remainder of the divided-out factors
  double remainder = 0.0;  // worst |num(at)| / |scale|
  double magnitude = 0.0;  // matching sum |c_k| |at|^k / |scale|
};
// Divides the numerator by every pole factor whose key satisfies `drop`.
PoleRemoval remove_poles(const TauRational& r, const std::function<bool(int)>& drop);

class RationalMatrixTau {
 public:
  RationalMatrixTau() = default;
  explicit RationalMatrixTau(int n);
  static RationalMatrixTau identity(int n);

  int n() const { return n_; }
  TauRational& at(int i, int j) { return e_[static_cast<size_t>(i * n_ + j)]; }
  const TauRational& at(int i, int j) const { return e_[static_cast<size_t>(i * n_ + j)]; }
  ComplexMatrix operator()(cplx tau) const;

 private:
  int n_ = 0;
  std::vector<TauRational> e_;
};

RationalMatrixTau operator*(const RationalMatrixTau& a, const RationalMatrixTau& b);
RationalMatrixTau operator*(const TauRational& s, const RationalMatrixTau& a);
TauRational determinant(const RationalMatrixTau& a);
RationalMatrixTau adjugate(const RationalMatrixTau& a);

}  // namespace wh

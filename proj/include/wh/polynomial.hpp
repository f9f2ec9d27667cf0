#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace wh {

using cplx = std::complex<double>;

// Dense polynomial, coeffs[k] multiplies z^k. Always stored trimmed.
class Polynomial {
 public:
  Polynomial();
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs);

  static Polynomial constant(cplx c);
  static Polynomial monomial(int k, cplx c = 1.0);
  static Polynomial from_roots(const std::vector<cplx>& roots, cplx leading = 1.0);

  const std::vector<cplx>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == cplx(0.0); }
  cplx leading() const { return c_.back(); }
  cplx coeff(int k) const;
  double max_abs() const;

  cplx operator()(cplx z) const;

 private:
  std::vector<cplx> c_;
};

cplx poly_eval(const Polynomial& p, cplx z);
Polynomial poly_derivative(const Polynomial& p);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& p, cplx s);
// p(z) * z^k
Polynomial poly_shift(const Polynomial& p, int k);
Polynomial poly_pow(const Polynomial& p, int k);

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(cplx s, const Polynomial& p);

// Taylor coefficients p^(d)(z)/d! for d = 0..count-1.
std::vector<cplx> taylor_coefficients(const Polynomial& p, cplx z, int count);
// sum_k |c_k| |z|^k, the scale against which |p(z)| is judged
double abs_eval(const Polynomial& p, cplx z);

struct Deflation {
  Polynomial quotient;
  double residual;  // |p(r)| / abs_eval(p, r)
};
// Divides out (z - r); direction chosen for stability.
Deflation deflate(const Polynomial& p, cplx r);

std::pair<cplx, cplx> quadratic_roots(cplx a, cplx b, cplx c);
cplx newton_polish(const Polynomial& p, cplx r, int steps = 1);
// All roots via the companion matrix, each polished by Newton steps.
std::vector<cplx> poly_roots(const Polynomial& p);

class RationalFunction {
 public:
  RationalFunction();
  RationalFunction(Polynomial num, Polynomial den);
  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  cplx operator()(cplx z) const;
  // Cancels (z - r) from both parts for each listed root shared by num and den.
  RationalFunction cancel_roots(const std::vector<cplx>& roots, double tol = 1e-10) const;

 private:
  Polynomial num_;
  Polynomial den_;
};

}  // namespace wh

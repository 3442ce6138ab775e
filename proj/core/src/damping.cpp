#include "anpid/damping.hpp"

#include "anpid/error.hpp"

namespace anpid {

namespace {

struct TauNu {
  ComplexVector tau;
  ComplexVector nu;
};

double ratio(const TauNu& v, MultiplyTally* t) {
  const double den = norm_squared(v.nu.span(), t);
  if (den == 0.0) return 0.0;
  return dot(v.nu.span(), v.tau.span(), t).real() / den;
}

TauNu residuals(std::span<const Complex> y, const ComplexVector& Hx, const ComplexVector& Hd) {
  TauNu v{ComplexVector(y.size()), ComplexVector(y.size())};
  for (std::size_t m = 0; m < y.size(); ++m) {
    v.tau[m] = y[m] - Hx[m];
    v.nu[m] = Hd[m] - Hx[m];
  }
  return v;
}

}  // namespace

double optimal_damping(const ComplexMatrix& H, std::span<const Complex> y,
                       std::span<const Complex> x_t, std::span<const Complex> d_prev,
                       MultiplyTally* t) {
  if (y.size() != H.rows()) throw Error(ErrorCode::shape, "damping: y length mismatch");
  const ComplexVector Hx = multiply(H, x_t, t);
  const ComplexVector Hd = multiply(H, d_prev, t);
  return ratio(residuals(y, Hx, Hd), t);
}

double fixed_damping(const ComplexMatrix& H, std::span<const Complex> y,
                     std::span<const Complex> x_1, MultiplyTally* t) {
  if (y.size() != H.rows()) throw Error(ErrorCode::shape, "damping: y length mismatch");
  const ComplexVector Hx = multiply(H, x_1, t);
  if (is_zero(Hx.span())) {
    throw Error(ErrorCode::degenerate_first_decision, "H x_1 is the zero vector");
  }
  // H d_0 is identically zero; no product needed.
  return ratio(residuals(y, Hx, ComplexVector(y.size())), t);
}

ComplexVector damp(std::span<const Complex> d_prev, std::span<const Complex> x, double omega,
                   MultiplyTally* t) {
  if (d_prev.size() != x.size()) throw Error(ErrorCode::shape, "damping: length mismatch");
  ComplexVector d(x.size());
  const double keep = 1.0 - omega;
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = omega * d_prev[i] + keep * x[i];
  tally(t, 2 * x.size());
  return d;
}

}  // namespace anpid

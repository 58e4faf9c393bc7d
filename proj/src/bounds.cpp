#include "pinchkit/bounds.hpp"

#include <cmath>

#include "pinchkit/errors.hpp"

namespace pinchkit::bounds {

namespace {

void require_k_range(int n, int k, int min_n, const char* where) {
  if (n < min_n)
    throw DomainError(std::string(where) + ": n must be >= " + std::to_string(min_n) + ", got " +
                      std::to_string(n));
  if (k < 2 || 2 * k > n)
    throw DomainError(std::string(where) + ": k must satisfy 2 <= k <= n/2, got k=" +
                      std::to_string(k) + " with n=" + std::to_string(n));
}

Rat phi_denominator(int n, const Rat& s) { return s * (n - 2 * s) + n * (s - 1) * (n - s); }

}  // namespace

Rat phi_value_exact(int n, const Rat& s) {
  if (n < 5) throw DomainError("phi: n must be >= 5, got " + std::to_string(n));
  if (s < 2 || 2 * s > n)
    throw DomainError("phi: s must lie in [2, n/2], got s=" + format_rational(s) +
                      " with n=" + std::to_string(n));
  const Rat den = phi_denominator(n, s);
  if (den <= 0) throw DomainError("phi: nonpositive denominator at s=" + format_rational(s));
  return s * (n - s) / den;
}

Rat phi_derivative_exact(int n, const Rat& s) {
  if (n < 5) throw DomainError("phi: n must be >= 5, got " + std::to_string(n));
  if (s < 2 || 2 * s > n)
    throw DomainError("phi: s must lie in [2, n/2], got s=" + format_rational(s) +
                      " with n=" + std::to_string(n));
  const Rat den = phi_denominator(n, s);
  if (den <= 0) throw DomainError("phi: nonpositive denominator at s=" + format_rational(s));
  return Rat(-n * n * (n - 2 * s)) / (den * den);
}

PhiValue phi(int n, double s) {
  if (n < 5) throw DomainError("phi: n must be >= 5, got " + std::to_string(n));
  if (s < 2.0 || 2.0 * s > n)
    throw DomainError("phi: s must lie in [2, n/2], got s=" + std::to_string(s) +
                      " with n=" + std::to_string(n));
  const double den = s * (n - 2.0 * s) + n * (s - 1.0) * (n - s);
  if (den <= 0) throw DomainError("phi: nonpositive denominator at s=" + std::to_string(s));
  PhiValue out;
  out.s = s;
  out.value = s * (n - s) / den;
  out.derivative = -static_cast<double>(n) * n * (n - 2.0 * s) / (den * den);
  return out;
}

Rat alpha_coefficient(int n, int k) {
  require_k_range(n, k, 5, "alpha");
  return (n - 1) - (n - 2) * phi_value_exact(n, Rat(k));
}

double alpha(int n, int k, double H, double c) {
  return to_double(alpha_coefficient(n, k)) * (c + H * H);
}

Rat alpha_exact(int n, int k, const Rat& h_sq, const Rat& c) {
  return alpha_coefficient(n, k) * (c + h_sq);
}

double b_vlachos(int n, int k, double H) {
  require_k_range(n, k, 4, "b_vlachos");
  if (H < 0) throw DomainError("b_vlachos: H must be >= 0, got " + std::to_string(H));
  const double nn = n;
  const double root = std::sqrt(nn * nn * H * H + 4.0 * k * (nn - k));
  return nn * (k - 1) / k + nn * (k - 1) * H / (2.0 * k * k) * (nn * H + root);
}

QuadExt b_vlachos_exact(int n, int k, const Rat& h) {
  require_k_range(n, k, 4, "b_vlachos");
  if (h < 0) throw DomainError("b_vlachos: H must be >= 0");
  const Rat coef = Rat(n * (k - 1), 2 * k * k) * h;  // n(k-1)H / 2k^2
  const Rat radicand = n * n * h * h + 4 * k * (n - k);
  return QuadExt(Rat(n * (k - 1), k) + coef * n * h, coef, radicand);
}

double xu_gu_bound(int n, double H, double c) {
  if (n < 4) throw DomainError("xu_gu_bound: n must be >= 4, got " + std::to_string(n));
  return static_cast<double>(n) * (n - 1) / (n + 2) * (c + H * H);
}

Rat xu_gu_exact(int n, const Rat& h_sq, const Rat& c) {
  if (n < 4) throw DomainError("xu_gu_bound: n must be >= 4, got " + std::to_string(n));
  return Rat(n * (n - 1), n + 2) * (c + h_sq);
}

long gamma_k(int n, int k) {
  require_k_range(n, k, 4, "gamma_k");
  return static_cast<long>(k) * (n - k) - n;
}

std::string to_string(Trichotomy t) {
  switch (t) {
    case Trichotomy::ALPHA_GREATER: return "ALPHA_GREATER";
    case Trichotomy::EQUAL: return "EQUAL";
    case Trichotomy::B_GREATER: return "B_GREATER";
  }
  return "?";
}

namespace {

// the regrouped form of b - alpha on the unit sphere:
//   n(k-1)/(2k^2) H sqrt(n^2H^2 + 4k(n-k))
//   + n(k-1)(n-2k) / (k((n+2)gamma + 2n)) * (n gamma H^2 / 2k - (n-k))
QuadExt difference_gamma_form_exact(int n, int k, const Rat& h) {
  const long gamma = gamma_k(n, k);
  const Rat y = Rat(n * (k - 1), 2 * k * k) * h;
  const Rat radicand = n * n * h * h + 4 * k * (n - k);
  const Rat x = Rat(n * (k - 1) * (n - 2 * k), k * ((n + 2) * gamma + 2 * n)) *
                (Rat(n * gamma, 2 * k) * h * h - (n - k));
  return QuadExt(x, y, radicand);
}

BoundReport report_shell(int n, int k, double H) {
  BoundReport r;
  r.n = n;
  r.k = k;
  r.H = H;
  r.c = 1.0;
  r.alpha = alpha(n, k, H, 1.0);
  r.b = b_vlachos(n, k, H);
  r.xu_gu = xu_gu_bound(n, H, 1.0);
  r.gamma_k = gamma_k(n, k);
  return r;
}

}  // namespace

BoundReport compare_alpha_b(int n, int k, double H) {
  require_k_range(n, k, 5, "compare_alpha_b");
  if (H < 0) throw DomainError("compare_alpha_b: H must be >= 0");
  BoundReport r = report_shell(n, k, H);
  const double direct = r.b - r.alpha;
  const double gamma_form = difference_gamma_form_exact(n, k, Rat(H)).to_double();
  const double scale = 1.0 + std::abs(r.b) + std::abs(r.alpha);
  if (std::abs(direct - gamma_form) > 1e-12 * scale)
    throw InternalInconsistency("b - alpha paths disagree: direct " + std::to_string(direct) +
                                " vs gamma form " + std::to_string(gamma_form));
  r.difference = direct;
  if (std::abs(direct) <= 1e-12)
    throw AmbiguousComparison("b - alpha = " + std::to_string(direct) +
                              " lies inside the float dead band; use the exact comparison");
  r.comparison = direct > 0 ? Trichotomy::B_GREATER : Trichotomy::ALPHA_GREATER;
  r.exact_decided = false;
  return r;
}

BoundReport compare_alpha_b_exact(int n, int k, const Rat& h) {
  require_k_range(n, k, 5, "compare_alpha_b");
  if (h < 0) throw DomainError("compare_alpha_b: H must be >= 0");
  BoundReport r = report_shell(n, k, to_double(h));
  const QuadExt alpha_q(alpha_exact(n, k, h * h, Rat(1)));
  const QuadExt direct = b_vlachos_exact(n, k, h) - alpha_q;
  const QuadExt gamma_form = difference_gamma_form_exact(n, k, h);
  // the regrouping is an identity; exact evaluation must agree exactly
  if (!(direct == gamma_form))
    throw InternalInconsistency("exact b - alpha paths disagree");
  const int sign = direct.sign();
  r.difference = direct.to_double();
  r.comparison = sign > 0   ? Trichotomy::B_GREATER
                 : sign < 0 ? Trichotomy::ALPHA_GREATER
                            : Trichotomy::EQUAL;
  r.exact_decided = true;
  return r;
}

AlphaRange alpha_range_check(int n, int k) {
  const Rat coef = alpha_coefficient(n, k);
  AlphaRange out;
  out.lower_strict = coef > (n - 3);
  out.upper = coef <= (n - 2);
  out.upper_equality_iff_2k = (coef == (n - 2)) == (n == 2 * k);
  return out;
}

}  // namespace pinchkit::bounds

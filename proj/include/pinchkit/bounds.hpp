#pragma once

#include <string>

#include "pinchkit/rational.hpp"

namespace pinchkit::bounds {

// ==== pinching bound functions and their comparison ====
//
// alpha and phi admit exact rational evaluation. b contains the radical
// sqrt(n^2 H^2 + 4k(n-k)); its exact form is a QuadExt so the b-vs-alpha
// trichotomy is decided by exact sign, never by round-off. The float
// comparison path refuses to decide inside a 1e-12 dead band instead.

struct PhiValue {
  double s = 0.0;
  double value = 0.0;
  double derivative = 0.0;
};

// phi(s) = s(n-s) / (s(n-2s) + n(s-1)(n-s)) on [2, n/2]
PhiValue phi(int n, double s);
Rat phi_value_exact(int n, const Rat& s);
Rat phi_derivative_exact(int n, const Rat& s);

// alpha(n,k,H,c) / (c + H^2), a rational function of (n,k) only
Rat alpha_coefficient(int n, int k);

double alpha(int n, int k, double H, double c);
// exact variant, parameterized by H^2 so model radicals stay rational
Rat alpha_exact(int n, int k, const Rat& h_sq, const Rat& c);

// b = n(k-1)/k + (n(k-1)H / 2k^2)(nH + sqrt(n^2 H^2 + 4k(n-k)))
double b_vlachos(int n, int k, double H);
QuadExt b_vlachos_exact(int n, int k, const Rat& h);

double xu_gu_bound(int n, double H, double c);
Rat xu_gu_exact(int n, const Rat& h_sq, const Rat& c);

long gamma_k(int n, int k);  // k(n-k) - n

enum class Trichotomy { ALPHA_GREATER, EQUAL, B_GREATER };
std::string to_string(Trichotomy t);

struct BoundReport {
  int n = 0;
  int k = 0;
  double H = 0.0;
  double c = 1.0;  // the b comparison is defined on the unit sphere
  double alpha = 0.0;
  double b = 0.0;
  double xu_gu = 0.0;
  long gamma_k = 0;
  Trichotomy comparison = Trichotomy::EQUAL;
  double difference = 0.0;  // b - alpha
  bool exact_decided = false;
};

// Float path. The difference b - alpha is computed both directly and by
// the gamma(k) regrouping; disagreement beyond tolerance raises
// InternalInconsistency, and |difference| <= 1e-12 raises
// AmbiguousComparison rather than guessing a side.
BoundReport compare_alpha_b(int n, int k, double H);

// Exact path: the same two computations agree identically as QuadExt
// values and the trichotomy is the exact sign.
BoundReport compare_alpha_b_exact(int n, int k, const Rat& h);

struct AlphaRange {
  bool lower_strict = false;          // (n-3)(c+H^2) < alpha
  bool upper = false;                 // alpha <= (n-2)(c+H^2)
  bool upper_equality_iff_2k = false; // equality exactly when n = 2k
};

// evaluated in exact arithmetic; all three flags hold for valid (n,k)
AlphaRange alpha_range_check(int n, int k);

}  // namespace pinchkit::bounds

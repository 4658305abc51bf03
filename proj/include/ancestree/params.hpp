// Model parameters of the two-type Moran model with selection and mutation,
// and the constants of its deterministic limit.
//
// Type 0 is the fit type: every individual reproduces at rate 1 and type-0
// individuals reproduce at additional rate s.  Each individual mutates at
// rate u; the new type is 0 with probability nu0 and 1 with probability nu1.
#pragma once

namespace ancestree {

struct ModelParams {
  int N = 2;         // population size
  double s = 0.0;    // selection intensity, >= 0
  double u = 0.0;    // total mutation rate, >= 0
  double nu0 = 0.5;  // probability a mutation produces type 0
  double nu1 = 0.5;  // probability a mutation produces type 1

  // Throws Error(InvalidArgument) unless N >= 1, s >= 0, u >= 0,
  // nu0 in [0,1] and nu0 + nu1 = 1.
  void validate() const;
};

// nu1 is fixed to 1 - nu0 here so the pair cannot get out of sync.
ModelParams make_params(int N, double s, double u, double nu0);

// Constants of the deterministic frequency ODE
//   z' = s z (1 - z) + u (nu0 - z)
// and of the asymptotic line-counting chain.
struct DerivedConstants {
  double delta;      // (s - u)^2 + 4 s u nu0, discriminant of the ODE field
  double x_plus;     // stable equilibrium frequency of type 0 in [0, 1]
  double ell_minus;  // smaller root of u nu1 x^2 - (s + u) x + s, in [0, 1]
  double ell_plus;   // larger root, equals 1 / (1 - x_plus); +inf when u nu1 = 0
};

// Requires s + u > 0 (pure drift has no deterministic attractor).
DerivedConstants derive(const ModelParams& p);

}  // namespace ancestree

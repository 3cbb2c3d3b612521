#pragma once

#include <utility>

#include "anmf/types.hpp"

namespace anmf {

struct QuadratureRule {
  RealVec nodes;
  RealVec weights;
};

// Gauss-Legendre rule on [-1, 1] (Golub-Welsch on the Jacobi tridiagonal).
QuadratureRule gauss_legendre(int n);

// Generalized Gauss-Laguerre rule for the weight x^alpha e^{-x} on (0, inf),
// alpha > -1, with weights normalized to sum to 1 — i.e. node/weight pairs
// for expectations against the Gamma(alpha + 1, 1) density.
QuadratureRule gauss_laguerre_normalized(int n, double alpha);

// Expectation nodes for tau ~ Gamma(shape nu, scale 1/nu) (unit mean):
// E[h(tau)] ~= sum_i weights[i] * h(nodes[i]).
QuadratureRule gamma_expectation_rule(double nu, int n = 128);

}  // namespace anmf

#pragma once

// Galerkin assembly of the linearized mean-curvature (Jacobi) operator
//   L_N = -Laplace_N - (|A_N|^2 + Ric(nu,nu))
// on a leaf, the flat reference operator L_0 = -Laplace^e - 2/R^2, and the
// spectral quantities eta0 (lowest eigenvalue), eta1 (second) and mu0
// (lowest over mean-zero functions, by deflation of the constant).
//
// Under an outward radial bump v of the graph, the first variation of the
// mean curvature is  dH(v) = L_N(g(omega,nu) v) + <grad H, tangential part>;
// frechet_check verifies the assembled operator against central differences
// of the nonlinear map.

#include "cmcfol/core.hpp"
#include "cmcfol/graph_surfaces.hpp"

namespace cmcfol {

struct JacobiMatrix {
  Eigen::MatrixXd op;        // <L_N phi_a, phi_b> with the dsigma_g measure
  Eigen::MatrixXd mass;      // Gram matrix <phi_a, phi_b>_{dsigma_g}
  double symmetry_defect = 0.0;  // max |op - op'| / max |op| before symmetrization
  int band_limit = 0;
};

// Galerkin matrices in the real harmonic basis up to the leaf's band limit.
JacobiMatrix assemble_jacobi(const LeafSurface& leaf, const MetricField& field);

// Same data structure for L_0 on the round radius-R sphere: diagonal with
// eigenvalues (l(l+1) - 2)/R^2 and the identity Gram matrix.
JacobiMatrix assemble_L0(double R, const SphereGrid& grid);

struct SpectrumResult {
  double eta0 = 0.0;
  double eta1 = 0.0;
  double mu0 = 0.0;
  std::vector<double> eigenvalues;          // lowest k, ascending
  std::vector<HarmonicCoeffs> eigenfields;  // matching coefficient vectors
  double smallest_abs_eigenvalue = 0.0;     // inverse-bound diagnostic
};

SpectrumResult eigen_solve(const JacobiMatrix& matrix, int k);

// Multiplication-by-c operator in coefficient space (Galerkin with the unit
// sphere measure); used for the radial-to-normal projection factor.
Eigen::MatrixXd multiplication_operator(const SphereGrid& grid, const Eigen::VectorXd& c);

// Field of the linearized mean curvature dH(v) for a radial direction v,
// evaluated through the assembled Galerkin operator.
Eigen::VectorXd linearized_H_field(const LeafSurface& leaf, const MetricField& field,
                                   const JacobiMatrix& jac, const SurfaceGeometry& geo,
                                   const HarmonicCoeffs& direction);

struct FrechetReport {
  std::vector<double> eps;
  std::vector<double> deviation;      // max-norm vs. the operator prediction
  double richardson_deviation = 0.0;  // after eliminating the eps^2 term
  std::vector<double> order_ratios;   // deviation(eps)/deviation(eps/2)
};

FrechetReport frechet_check(const LeafSurface& leaf, const MetricField& field,
                            const HarmonicCoeffs& direction,
                            const std::vector<double>& eps_list);

}  // namespace cmcfol

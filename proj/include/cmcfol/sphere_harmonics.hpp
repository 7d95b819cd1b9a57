#pragma once

// Band-limited scalar analysis on the unit sphere: Gauss-Legendre x
// equispaced quadrature grid, real spherical-harmonic transforms, the
// spherical Laplacian in coefficient space, and the l=1 (Cartesian)
// projection.
//
// Conventions:
//   * Real orthonormal basis Y_lm, 0 <= l <= L, -l <= m <= l, with
//     int_{S^2} Y_lm Y_l'm' dOmega = delta.  No Condon-Shortley phase:
//       Y_l0      = Ptilde_l0(cos th)
//       Y_lm      = sqrt(2) Ptilde_lm(cos th) cos(m ph)   (m > 0)
//       Y_l,-m    = sqrt(2) Ptilde_lm(cos th) sin(m ph)   (m > 0)
//     so Y_00 = 1/sqrt(4pi) and (y1,y2,y3) = sqrt(4pi/3) (Y_11, Y_1-1, Y_10).
//   * Quadrature weights sum to 4pi and integrate Y_lm Y_l'm' exactly for
//     l, l' <= L (theta rule exact through degree 2L+1).

#include "cmcfol/core.hpp"

#include <memory>

namespace cmcfol {

struct HarmonicCoeffs {
  int L = 0;
  Eigen::VectorXd a;  // size (L+1)^2, index l*(l+1)+m

  HarmonicCoeffs() = default;
  explicit HarmonicCoeffs(int band_limit)
      : L(band_limit), a(Eigen::VectorXd::Zero((band_limit + 1) * (band_limit + 1))) {}

  static int index(int l, int m) { return l * (l + 1) + m; }
  double& at(int l, int m) { return a[index(l, m)]; }
  double at(int l, int m) const { return a[index(l, m)]; }
  int size() const { return static_cast<int>(a.size()); }
};

class SphereGrid {
 public:
  explicit SphereGrid(int band_limit);

  int band_limit() const { return L_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  int node_count() const { return n_theta_ * n_phi_; }

  int node_index(int i_theta, int j_phi) const { return i_theta * n_phi_ + j_phi; }
  double theta(int i_theta) const { return theta_[i_theta]; }
  double phi(int j_phi) const { return phi_[j_phi]; }
  double cos_theta(int i_theta) const { return cos_theta_[i_theta]; }
  double sin_theta(int i_theta) const { return sin_theta_[i_theta]; }

  // Quadrature weight of node (i,j); sum over all nodes is 4pi.
  double weight(int i_theta, int j_phi) const {
    (void)j_phi;
    return w_theta_[i_theta] * w_phi_;
  }
  double weight(int node) const { return w_theta_[node / n_phi_] * w_phi_; }

  // Unit outward direction omega(theta,phi) and its angular derivatives.
  Vec3 direction(int node) const;
  Vec3 d_theta_direction(int node) const;
  Vec3 d_phi_direction(int node) const;

  // Node of the antipodal direction -omega; exact on this grid.
  int antipodal_node(int node) const;

  // Basis value Y_lm at a grid node / at an arbitrary direction.
  double basis(int l, int m, int node) const;
  static double basis_at(int l, int m, double theta, double phi);

  // --- transforms -------------------------------------------------------

  Eigen::VectorXd synthesis(const HarmonicCoeffs& coeffs) const;
  HarmonicCoeffs analysis(const Eigen::VectorXd& values) const;

  // Pointwise value of a band-limited expansion at an arbitrary direction.
  static double evaluate(const HarmonicCoeffs& coeffs, double theta, double phi);

  // Value plus first and second angular derivatives at every node.
  struct FieldJet {
    Eigen::VectorXd f, f_t, f_p, f_tt, f_tp, f_pp;
  };
  FieldJet synthesis_with_derivatives(const HarmonicCoeffs& coeffs) const;

  double quadrature_integral(const Eigen::VectorXd& values) const;

 private:
  void build_legendre_tables();

  int L_, n_theta_, n_phi_;
  std::vector<double> cos_theta_, sin_theta_, theta_, w_theta_, phi_;
  double w_phi_;
  // Normalized associated Legendre values and theta-derivatives per theta
  // node, triangular layout tri_index(l,m) = l(l+1)/2 + m, 0 <= m <= l.
  std::vector<std::vector<double>> P_, dP_, d2P_;
  // trig tables cos(m phi_j), sin(m phi_j)
  std::vector<std::vector<double>> cosm_, sinm_;

  static int tri_index(int l, int m) { return l * (l + 1) / 2 + m; }
};

// (-Laplace_S2 f) in coefficient space: a_lm -> l(l+1) a_lm.
HarmonicCoeffs laplace_beltrami_apply(const HarmonicCoeffs& coeffs);

// Splits off the l=1 content as a Cartesian vector b (f ~ b.y + rest).
struct L1Split {
  Vec3 b = Vec3::Zero();
  HarmonicCoeffs remainder;
};
L1Split l1_projection(const HarmonicCoeffs& coeffs);

// Gauss-Legendre nodes (ascending) and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace cmcfol

#pragma once

// Leaves as radial graphs over spheres and their extrinsic geometry under an
// ambient MetricField.
//
// A leaf is { p + (R + psi(omega)) omega : omega in S^2 } with psi band
// limited.  Sign conventions: outward g-unit normal, A_ab = -g(D_a d_b, nu),
// so the round Euclidean sphere of radius R has H = 2/R > 0 and the first
// variation of H under an outward radial bump v is L_N(g(omega,nu) v) plus a
// tangential transport term (see stability_spectrum).
//
// Note the paper-style normal graphs x + psi nu_g describe the same surface
// family; the radial profile differs from a normal profile by O(|h| |psi|)
// reparametrization, below the leading order of every quantity computed here.

#include "cmcfol/core.hpp"
#include "cmcfol/metric_fields.hpp"
#include "cmcfol/sphere_harmonics.hpp"

#include <memory>

namespace cmcfol {

struct LeafSurface {
  Vec3 p = Vec3::Zero();
  double R = 1.0;
  HarmonicCoeffs psi;
  std::shared_ptr<const SphereGrid> grid;

  static LeafSurface round_sphere(const Vec3& p, double R,
                                  std::shared_ptr<const SphereGrid> grid) {
    LeafSurface leaf;
    leaf.p = p;
    leaf.R = R;
    leaf.psi = HarmonicCoeffs(grid->band_limit());
    leaf.grid = std::move(grid);
    return leaf;
  }
};

// Embedding and angular derivatives at every grid node.
struct EmbeddingJet {
  Eigen::VectorXd r;                      // R + psi
  std::vector<Vec3> z, z_t, z_p, z_tt, z_tp, z_pp;
};

EmbeddingJet embed(const LeafSurface& leaf);

// Pointwise extrinsic geometry.
struct SurfaceGeometry {
  std::vector<Vec3> z;         // embedding points
  std::vector<Vec3> normal;    // outward g-unit normal
  std::vector<Mat2> first;     // induced metric in (theta,phi) coordinates
  std::vector<Mat2> first_inv;
  std::vector<Mat2> second;    // A_ab
  Eigen::VectorXd H;           // mean curvature
  Eigen::VectorXd A2;          // |A|^2
  Eigen::VectorXd Aring2;      // |A|^2 - H^2/2 (trace-free part)
  Eigen::VectorXd area_g;      // dsigma_g / dOmega
  Eigen::VectorXd area_e;      // dsigma_e / dOmega
  Eigen::VectorXd normal_radial;  // g(omega, nu): radial-to-normal projection
  std::vector<Vec3> z_t, z_p;  // tangent vectors (kept for gradient work)
};

SurfaceGeometry fundamental_forms(const LeafSurface& leaf, const MetricField& field);

Eigen::VectorXd mean_curvature_field(const LeafSurface& leaf, const MetricField& field);

// Explicit mean-curvature expansion of the coordinate sphere S_R(p): the
// displayed 1/R- and h-terms without the remainder.  Used as a cross-check
// of fundamental_forms on round spheres.
Eigen::VectorXd mc_expansion_eval(const MetricField& field, const Vec3& p, double R,
                                  const SphereGrid& grid);

struct LeafArea {
  double area_g = 0.0;
  double area_e = 0.0;
};
LeafArea area(const LeafSurface& leaf, const MetricField& field);

double traceless_A_norm(const SurfaceGeometry& geometry);

// sup over nodes of |f(omega) - f(-omega)| for a node field (parity probe)
double odd_part_sup(const SphereGrid& grid, const Eigen::VectorXd& values);

// Leaf (de)serialization: compact binary of (p, R, band limit, coefficients).
void save_leaf_binary(const LeafSurface& leaf, const std::string& path);
LeafSurface load_leaf_binary(const std::string& path, std::shared_ptr<const SphereGrid> grid);

// CSV with node angles, embedding point, H, |Aring|^2 and area density.
void write_leaf_csv(const LeafSurface& leaf, const MetricField& field,
                    const std::string& path);

}  // namespace cmcfol

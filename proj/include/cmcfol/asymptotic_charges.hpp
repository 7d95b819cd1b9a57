#pragma once

// Asymptotic invariants: ADM mass through the flux and Einstein-tensor
// definitions, the Hamiltonian center of mass, Hawking mass of a leaf, the
// geometric center of a foliation, and the dipole identity check
//   int_{S_R(p)} (x-p)(H_S - 2/R) dsigma_e = 8 pi m (p - C) + O(R^{1-2q}).
//
// Measures follow the definitions exactly: flux/center/centroid integrals
// use the Euclidean area element, the Hawking mass uses the g-induced one.
// r -> infinity limits are realized as least-squares extrapolation in the
// known error order, with the fit residual reported.

#include "cmcfol/core.hpp"
#include "cmcfol/graph_surfaces.hpp"
#include "cmcfol/metric_fields.hpp"

namespace cmcfol {

double adm_mass_flux(const MetricField& field, double r, const SphereGrid& grid);
double adm_mass_ricci(const MetricField& field, double r, const SphereGrid& grid);

// Eq-style center of mass at finite radius; requires a nonzero mass estimate.
Vec3 center_of_mass(const MetricField& field, double r, double m_est,
                    const SphereGrid& grid);

double hawking_mass(const LeafSurface& leaf, const MetricField& field);

struct ChargeSeries {
  std::vector<double> radii;
  std::vector<double> values;
  SeriesFit fit;
};

// Declared mass if present, else the extrapolated flux integral.
double estimate_mass(const MetricField& field, int band_limit = 16);

// Declared center if present, else the extrapolated center integral.
Vec3 estimate_center(const MetricField& field, double m_est, int band_limit = 16);

struct Charges {
  ChargeSeries flux_series;
  ChargeSeries ricci_series;
  std::array<ChargeSeries, 3> center_series;
  double m_flux = 0.0;
  double m_ricci = 0.0;
  Vec3 center = Vec3::Zero();
};

Charges compute_charges(const MetricField& field, const std::vector<double>& radii,
                        int band_limit = 24);

// Euclidean area centroid of leaves and its R -> infinity extrapolation with
// the a + b R^{1-2q} model.
struct GeometricCenterFit {
  std::vector<double> radii;
  std::vector<Vec3> centroids;
  Vec3 limit = Vec3::Zero();
  double rms_residual = 0.0;
};
GeometricCenterFit geometric_center(const std::vector<LeafSurface>& leaves,
                                    const MetricField& field, double q);

struct CenterIdentity {
  Vec3 lhs = Vec3::Zero();
  Vec3 rhs = Vec3::Zero();
  double gap = 0.0;
};
CenterIdentity center_identity_check(const MetricField& field, const Vec3& p, double R,
                                     double m_est, const Vec3& center_est,
                                     const SphereGrid& grid);

}  // namespace cmcfol

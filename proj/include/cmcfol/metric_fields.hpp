#pragma once

// Asymptotically flat metrics on the exterior chart: closed-form families,
// derivative/curvature evaluation, constraint residuals, and the empirical
// decay/parity audit.

#include "cmcfol/core.hpp"
#include "cmcfol/sphere_harmonics.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>

namespace cmcfol {

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

struct EuclideanFamily {};

// g = (1 + m/(2|x-c|))^4 delta, exact derivatives.
struct SchwarzschildIsotropic {
  double mass = 1.0;
  Vec3 center = Vec3::Zero();
};

// g = u^4 delta with harmonic u = 1 + m/(2s) + d.y/(2 s^3) + y'Qy/(2 s^5),
// y = x - c.  Q must be symmetric trace-free so every term is harmonic.
// The optional vector field X = b/s generates extrinsic data through
// pi = u^2 (L_delta X), K = pi - (tr_g pi / 2) g.
struct HarmonicAsymptotics {
  double mass = 1.0;
  Vec3 dipole = Vec3::Zero();
  Mat3 quadrupole = Mat3::Zero();
  Vec3 center = Vec3::Zero();
  std::optional<Vec3> x_field;
};

struct MetricField;  // forward

// base + a |x|^{-q'} Y_lm(x/|x|) delta with l >= 2 even (parity-even
// perturbation, so it neither carries mass nor moves the center).
struct PerturbedRT {
  std::shared_ptr<const MetricField> base;
  double amplitude = 0.0;
  double decay_q = 1.0;  // q' in (1/2, 1]
  int l = 2;
  int m = 0;
};

// Metric sampled on a regular Cartesian lattice, interpolated.
struct TabulatedUser {
  std::vector<double> xs, ys, zs;        // strictly increasing axes
  std::vector<Mat3> g;                   // row-major [ix][iy][iz]
  int interp_order = 1;                  // 1 (trilinear) or 3 (tricubic)
  Mat3 sample(int ix, int iy, int iz) const;
  Mat3 interpolate(const Vec3& x) const;
};

using MetricFamily = std::variant<EuclideanFamily, SchwarzschildIsotropic,
                                  HarmonicAsymptotics, PerturbedRT, TabulatedUser>;

// ---------------------------------------------------------------------------
// Extrinsic data
// ---------------------------------------------------------------------------

struct ExtrinsicJet {
  Mat3 K = Mat3::Zero();
  std::array<Mat3, 3> dK{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
};

struct ExtrinsicData {
  std::function<ExtrinsicJet(const Vec3&)> eval;  // empty means K absent
  bool present() const { return static_cast<bool>(eval); }
};

// Explicit K = 0 (time-symmetric data).
inline ExtrinsicData zero_extrinsic() {
  return ExtrinsicData{[](const Vec3&) { return ExtrinsicJet{}; }};
}

// ---------------------------------------------------------------------------
// MetricField
// ---------------------------------------------------------------------------

struct MetricField {
  MetricFamily family;
  double q = 1.0;       // decay rate in (1/2, 1]
  double r_min = 0.0;   // inner radius of chart validity
  std::optional<double> declared_mass;
  std::optional<Vec3> declared_center;
  bool rt_flag = true;

  // Full second-order jet; analytic for closed-form families, finite
  // differences otherwise.
  MetricJet eval(const Vec3& x) const;
  Mat3 metric_only(const Vec3& x) const;
  bool has_extrinsic() const { return extrinsic.present(); }
  ExtrinsicData extrinsic;

  // convenience constructors with family defaults (q, r_min, declared data)
  static MetricField euclidean();
  static MetricField schwarzschild(double mass, const Vec3& center = Vec3::Zero());
  static MetricField harmonic(double mass, const Vec3& dipole,
                              const Mat3& quadrupole = Mat3::Zero(),
                              const Vec3& center = Vec3::Zero(),
                              std::optional<Vec3> x_field = std::nullopt);
  static MetricField perturbed_rt(MetricField base, double amplitude, double decay_q,
                                  int l, int m);
  static MetricField tabulated(TabulatedUser table, double q, double r_min);
};

// Reads the TabulatedUser lattice from CSV with columns
// x,y,z,g11,g12,g13,g22,g23,g33 (header line optional).
TabulatedUser read_metric_table_csv(const std::string& path, int interp_order);

// ---------------------------------------------------------------------------
// Pointwise operations
// ---------------------------------------------------------------------------

struct CurvatureEval {
  Vec3 x;
  double riemann[3][3][3][3];  // R_ijkl, all indices down
  Mat3 ricci;
  double scalar;
};

// Gamma^k_ij from the jet; throws DegenerateMetric when det g ~ 0.
std::array<Mat3, 3> evaluate_christoffel(const MetricJet& jet);

CurvatureEval evaluate_curvature(const MetricField& field, const Vec3& x);
CurvatureEval evaluate_curvature(const MetricJet& jet, const Vec3& x);

// Energy and momentum constraint residuals (rho, J).  Throws
// MissingExtrinsicData when J is requested without K.
struct ConstraintResiduals {
  double rho = 0.0;
  Vec3 J = Vec3::Zero();
  bool has_J = false;
};
ConstraintResiduals constraint_residuals(const MetricField& field, const Vec3& x,
                                         bool want_J = true);

// 4th-order central differences of a matrix-valued sampler.  Default step
// h = max(1e-3, 1e-4 |x|).
struct FiniteDiffJet {
  std::array<Mat3, 3> dg;
  std::array<std::array<Mat3, 3>, 3> d2g;
};
double default_fd_step(const Vec3& x);
FiniteDiffJet finite_difference_derivatives(const std::function<Mat3(const Vec3&)>& g_sampler,
                                            const Vec3& x, double h_step);

// ---------------------------------------------------------------------------
// Decay / parity audit
// ---------------------------------------------------------------------------

struct DecayAudit {
  std::vector<double> radii;
  // sup over a sphere sample at each radius
  std::vector<double> sup_h, sup_dh, sup_d2h, sup_h_odd, sup_dh_odd;
  PowerFit fit_h, fit_dh, fit_d2h, fit_h_odd, fit_dh_odd;
  bool identically_flat = false;
};

// Requires >= 3 radii spanning a ratio >= 4.
DecayAudit decay_audit(const MetricField& field, const std::vector<double>& radii,
                       int sample_band_limit = 12);

}  // namespace cmcfol

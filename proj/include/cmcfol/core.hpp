#pragma once

// Shared small types, error hierarchy, fitting helpers, and a minimal
// parallel-for used across the library.

#include <Eigen/Dense>

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cmcfol {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kFourPi = 4.0 * kPi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CMCFOL_DEFINE_ERROR(Name)                            \
  struct Name : Error {                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

CMCFOL_DEFINE_ERROR(PointInsideChart);
CMCFOL_DEFINE_ERROR(SingularPoint);
CMCFOL_DEFINE_ERROR(DegenerateMetric);
CMCFOL_DEFINE_ERROR(MissingExtrinsicData);
CMCFOL_DEFINE_ERROR(StencilOutsideChart);
CMCFOL_DEFINE_ERROR(InsufficientRadii);
CMCFOL_DEFINE_ERROR(NonFiniteInput);
CMCFOL_DEFINE_ERROR(BandLimitMismatch);
CMCFOL_DEFINE_ERROR(NonEmbedded);
CMCFOL_DEFINE_ERROR(DegenerateFirstForm);
CMCFOL_DEFINE_ERROR(ObstructionNotCleared);
CMCFOL_DEFINE_ERROR(ZeroMass);
CMCFOL_DEFINE_ERROR(SingularJacobian);
CMCFOL_DEFINE_ERROR(EigSolverFailure);
CMCFOL_DEFINE_ERROR(CenterMismatchTooLarge);
CMCFOL_DEFINE_ERROR(InsufficientLeaves);
CMCFOL_DEFINE_ERROR(SchemaError);
CMCFOL_DEFINE_ERROR(FileNotFound);

#undef CMCFOL_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Second-order jet of a metric at a point
// ---------------------------------------------------------------------------

// g, dg[k](i,j) = d_k g_ij, d2g[k][l](i,j) = d_k d_l g_ij (symmetric in k,l).
struct MetricJet {
  Mat3 g = Mat3::Identity();
  std::array<Mat3, 3> dg{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  std::array<std::array<Mat3, 3>, 3> d2g{{{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()},
                                          {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()},
                                          {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}}};
};

// ---------------------------------------------------------------------------
// Power-law fitting (rate regressions and limit extrapolation)
// ---------------------------------------------------------------------------

// Least-squares fit of log|v| = intercept + slope * log r.
struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;   // in log space
  bool identically_zero = false;  // all samples below the zero floor
};

PowerFit fit_power_law(const std::vector<double>& radii,
                       const std::vector<double>& values,
                       double zero_floor = 1e-14);

// Least-squares fit of v(r) = limit + sum_k coeff[k] * r^(-(s0 + k)),
// k = 0..nterms-1.  This realizes r->infinity limits from finitely many
// radii; the decay model exponent s0 comes from the known error order.
struct SeriesFit {
  double limit = 0.0;
  std::vector<double> coeffs;
  double rms_residual = 0.0;
};

SeriesFit extrapolate_series(const std::vector<double>& radii,
                             const std::vector<double>& values,
                             double s0, int nterms = 2);

// ---------------------------------------------------------------------------
// parallel_for
// ---------------------------------------------------------------------------

// Worker count: CMCFOL_THREADS if set (0 or 1 disables threading), else
// hardware concurrency.  Work items write disjoint slots, so results are
// bitwise independent of the thread count.
int worker_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cmcfol

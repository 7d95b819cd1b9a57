#include "cmcfol/metric_fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cmcfol {

namespace {

// --------------------------------------------------------------------------
// scalar jets (value, gradient, Hessian) for harmonic building blocks
// --------------------------------------------------------------------------

struct ScalarJet {
  double v = 0.0;
  Vec3 d = Vec3::Zero();
  Mat3 dd = Mat3::Zero();
  ScalarJet& operator+=(const ScalarJet& o) {
    v += o.v;
    d += o.d;
    dd += o.dd;
    return *this;
  }
};

// m/(2s)
ScalarJet monopole_jet(double mass, const Vec3& y) {
  const double s = y.norm();
  const Vec3 n = y / s;
  ScalarJet out;
  out.v = 0.5 * mass / s;
  out.d = -0.5 * mass / (s * s) * n;
  out.dd = -0.5 * mass / (s * s * s) * (Mat3::Identity() - 3.0 * n * n.transpose());
  return out;
}

// d.y / (2 s^3)
ScalarJet dipole_jet(const Vec3& dip, const Vec3& y) {
  const double s = y.norm();
  const double s3 = s * s * s, s5 = s3 * s * s, s7 = s5 * s * s;
  const double dy = dip.dot(y);
  ScalarJet out;
  out.v = 0.5 * dy / s3;
  out.d = 0.5 * (dip / s3 - 3.0 * dy * y / s5);
  out.dd = 0.5 * (-3.0 * (dip * y.transpose() + y * dip.transpose() + dy * Mat3::Identity()) / s5 +
                  15.0 * dy * y * y.transpose() / s7);
  return out;
}

// y'Qy / (2 s^5), Q symmetric trace-free
ScalarJet quadrupole_jet(const Mat3& Q, const Vec3& y) {
  const double s = y.norm();
  const double s5 = std::pow(s, 5), s7 = s5 * s * s, s9 = s7 * s * s;
  const Vec3 Qy = Q * y;
  const double yQy = y.dot(Qy);
  ScalarJet out;
  out.v = 0.5 * yQy / s5;
  out.d = Qy / s5 - 2.5 * yQy * y / s7;
  out.dd = Q / s5 - 5.0 * (Qy * y.transpose() + y * Qy.transpose()) / s7 -
           2.5 * yQy * Mat3::Identity() / s7 + 17.5 * yQy * y * y.transpose() / s9;
  return out;
}

// g = u^4 delta from a conformal factor jet
MetricJet conformal_jet(const ScalarJet& u) {
  MetricJet out;
  const double u2 = u.v * u.v, u3 = u2 * u.v;
  out.g = (u2 * u2) * Mat3::Identity();
  for (int k = 0; k < 3; ++k) out.dg[k] = 4.0 * u3 * u.d[k] * Mat3::Identity();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      out.d2g[k][l] =
          (12.0 * u2 * u.d[k] * u.d[l] + 4.0 * u3 * u.dd(k, l)) * Mat3::Identity();
  return out;
}

ScalarJet harmonic_u_jet(const HarmonicAsymptotics& fam, const Vec3& x) {
  const Vec3 y = x - fam.center;
  if (y.norm() < 1e-12) throw SingularPoint("harmonic family center");
  ScalarJet u;
  u.v = 1.0;
  u += monopole_jet(fam.mass, y);
  if (fam.dipole.squaredNorm() > 0) u += dipole_jet(fam.dipole, y);
  if (fam.quadrupole.squaredNorm() > 0) u += quadrupole_jet(fam.quadrupole, y);
  return u;
}

// perturbation scalar of the RT family: a s^{-q'} Y_lm(x/s)
double rt_scalar(const PerturbedRT& fam, const Vec3& x) {
  const double s = x.norm();
  if (s < 1e-12) throw SingularPoint("perturbation centered at the origin");
  const double theta = std::acos(std::clamp(x.z() / s, -1.0, 1.0));
  const double phi = std::atan2(x.y(), x.x());
  return fam.amplitude * std::pow(s, -fam.decay_q) *
         SphereGrid::basis_at(fam.l, fam.m, theta, phi);
}

ExtrinsicData harmonic_extrinsic(const HarmonicAsymptotics& fam) {
  if (!fam.x_field) return {};
  const Vec3 b = *fam.x_field;
  const Vec3 c = fam.center;
  HarmonicAsymptotics fam_copy = fam;
  return ExtrinsicData{[b, c, fam_copy](const Vec3& x) {
    const Vec3 y = x - c;
    const double s = y.norm();
    const double s3 = s * s * s, s5 = s3 * s * s;
    // X = b/s, L_delta X = dX + dX' - div(X) I
    Mat3 dX;  // dX(i,j) = d_j X_i
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dX(i, j) = -b[i] * y[j] / s3;
    const double divX = -b.dot(y) / s3;
    const Mat3 LX = dX + dX.transpose() - divX * Mat3::Identity();
    // d_k of the pieces
    std::array<Mat3, 3> dLX;
    for (int k = 0; k < 3; ++k) {
      Mat3 ddX;  // d_k d_j X_i
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          ddX(i, j) = -b[i] * ((j == k ? 1.0 : 0.0) / s3 - 3.0 * y[j] * y[k] / s5);
      const double ddiv = -b[k] / s3 + 3.0 * b.dot(y) * y[k] / s5;
      dLX[k] = ddX + ddX.transpose() - ddiv * Mat3::Identity();
    }
    const ScalarJet u = harmonic_u_jet(fam_copy, x);
    ExtrinsicJet out;
    const Mat3 pi = u.v * u.v * LX;
    out.K = pi - 0.5 * pi.trace() * Mat3::Identity();
    for (int k = 0; k < 3; ++k) {
      const Mat3 dpi = 2.0 * u.v * u.d[k] * LX + u.v * u.v * dLX[k];
      out.dK[k] = dpi - 0.5 * dpi.trace() * Mat3::Identity();
    }
    return out;
  }};
}

int axis_lower_index(const std::vector<double>& axis, double v) {
  auto it = std::upper_bound(axis.begin(), axis.end(), v);
  int idx = static_cast<int>(it - axis.begin()) - 1;
  return std::clamp(idx, 0, static_cast<int>(axis.size()) - 2);
}

// 1D Lagrange weights on `npts` consecutive samples starting at `start`
void lagrange_weights(const std::vector<double>& axis, double v, int start, int npts,
                      std::vector<double>& w) {
  w.assign(npts, 1.0);
  for (int i = 0; i < npts; ++i)
    for (int j = 0; j < npts; ++j)
      if (i != j)
        w[i] *= (v - axis[start + j]) / (axis[start + i] - axis[start + j]);
}

}  // namespace

// --------------------------------------------------------------------------
// TabulatedUser
// --------------------------------------------------------------------------

Mat3 TabulatedUser::sample(int ix, int iy, int iz) const {
  const int ny = static_cast<int>(ys.size()), nz = static_cast<int>(zs.size());
  return g[(ix * ny + iy) * nz + iz];
}

Mat3 TabulatedUser::interpolate(const Vec3& x) const {
  const std::array<const std::vector<double>*, 3> axes{&xs, &ys, &zs};
  for (int d = 0; d < 3; ++d)
    if (x[d] < axes[d]->front() || x[d] > axes[d]->back())
      throw StencilOutsideChart("tabulated metric queried outside the sampled box");
  const int npts = interp_order + 1;
  std::array<int, 3> start;
  std::array<std::vector<double>, 3> w;
  for (int d = 0; d < 3; ++d) {
    const auto& axis = *axes[d];
    int lo = axis_lower_index(axis, x[d]);
    lo = std::clamp(lo - (npts - 2) / 2, 0, static_cast<int>(axis.size()) - npts);
    start[d] = lo;
    lagrange_weights(axis, x[d], lo, npts, w[d]);
  }
  Mat3 out = Mat3::Zero();
  for (int a = 0; a < npts; ++a)
    for (int b = 0; b < npts; ++b)
      for (int c = 0; c < npts; ++c)
        out += w[0][a] * w[1][b] * w[2][c] * sample(start[0] + a, start[1] + b, start[2] + c);
  return out;
}

TabulatedUser read_metric_table_csv(const std::string& path, int interp_order) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  TabulatedUser table;
  table.interp_order = interp_order;
  struct Row {
    Vec3 x;
    Mat3 g;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double vals[9];
    bool ok = true;
    for (double& v : vals)
      if (!(ss >> v)) {
        ok = false;
        break;
      }
    if (!ok) continue;  // header or malformed line
    Row r;
    r.x = Vec3(vals[0], vals[1], vals[2]);
    r.g << vals[3], vals[4], vals[5], vals[4], vals[6], vals[7], vals[5], vals[7], vals[8];
    rows.push_back(r);
  }
  auto collect_axis = [&rows](int d) {
    std::vector<double> axis;
    for (const auto& r : rows) axis.push_back(r.x[d]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               axis.end());
    return axis;
  };
  table.xs = collect_axis(0);
  table.ys = collect_axis(1);
  table.zs = collect_axis(2);
  const std::size_t n = table.xs.size() * table.ys.size() * table.zs.size();
  if (rows.size() != n)
    throw SchemaError("metric table is not a full tensor grid (" + std::to_string(rows.size()) +
                      " rows, expected " + std::to_string(n) + ")");
  table.g.assign(n, Mat3::Identity());
  auto find = [](const std::vector<double>& axis, double v) {
    return static_cast<int>(std::lower_bound(axis.begin(), axis.end(), v - 1e-12) - axis.begin());
  };
  for (const auto& r : rows) {
    const int ix = find(table.xs, r.x[0]), iy = find(table.ys, r.x[1]), iz = find(table.zs, r.x[2]);
    table.g[(ix * table.ys.size() + iy) * table.zs.size() + iz] = r.g;
  }
  return table;
}

// --------------------------------------------------------------------------
// finite differences
// --------------------------------------------------------------------------

double default_fd_step(const Vec3& x) { return std::max(1e-3, 1e-4 * x.norm()); }

FiniteDiffJet finite_difference_derivatives(const std::function<Mat3(const Vec3&)>& g_sampler,
                                            const Vec3& x, double h_step) {
  if (!(h_step > 0)) throw Error("finite_difference_derivatives: h_step must be positive");
  FiniteDiffJet out;
  const double h = h_step;
  auto shift = [&](int d, double k) {
    Vec3 p = x;
    p[d] += k * h;
    return g_sampler(p);
  };
  const Mat3 g0 = g_sampler(x);
  std::array<std::array<Mat3, 4>, 3> line;  // offsets -2,-1,+1,+2 per axis
  for (int d = 0; d < 3; ++d) {
    line[d][0] = shift(d, -2);
    line[d][1] = shift(d, -1);
    line[d][2] = shift(d, +1);
    line[d][3] = shift(d, +2);
    out.dg[d] = (line[d][0] - 8.0 * line[d][1] + 8.0 * line[d][2] - line[d][3]) / (12.0 * h);
    out.d2g[d][d] = (-line[d][0] + 16.0 * line[d][1] - 30.0 * g0 + 16.0 * line[d][2] -
                     line[d][3]) /
                    (12.0 * h * h);
  }
  // mixed: 4th-order first-derivative stencil applied twice
  const double off[4] = {-2, -1, +1, +2};
  const double cf[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      Mat3 mixed = Mat3::Zero();
      for (int i = 0; i < 4; ++i) {
        Mat3 dgb = Mat3::Zero();
        for (int j = 0; j < 4; ++j) {
          Vec3 p = x;
          p[a] += off[i] * h;
          p[b] += off[j] * h;
          dgb += cf[j] * g_sampler(p);
        }
        mixed += cf[i] * dgb / h;
      }
      mixed /= h;
      out.d2g[a][b] = mixed;
      out.d2g[b][a] = mixed;
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// MetricField
// --------------------------------------------------------------------------

Mat3 MetricField::metric_only(const Vec3& x) const {
  return std::visit(
      [&](const auto& fam) -> Mat3 {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, EuclideanFamily>) {
          return Mat3::Identity();
        } else if constexpr (std::is_same_v<T, SchwarzschildIsotropic>) {
          const double s = (x - fam.center).norm();
          if (s < 1e-12) throw SingularPoint("Schwarzschild center");
          const double u = 1.0 + 0.5 * fam.mass / s;
          return std::pow(u, 4) * Mat3::Identity();
        } else if constexpr (std::is_same_v<T, HarmonicAsymptotics>) {
          const double u = harmonic_u_jet(fam, x).v;
          return std::pow(u, 4) * Mat3::Identity();
        } else if constexpr (std::is_same_v<T, PerturbedRT>) {
          return fam.base->metric_only(x) + rt_scalar(fam, x) * Mat3::Identity();
        } else {
          if (x.norm() < r_min)
            throw PointInsideChart("tabulated metric queried inside r_min");
          return fam.interpolate(x);
        }
      },
      family);
}

MetricJet MetricField::eval(const Vec3& x) const {
  return std::visit(
      [&](const auto& fam) -> MetricJet {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, EuclideanFamily>) {
          return MetricJet{};
        } else if constexpr (std::is_same_v<T, SchwarzschildIsotropic>) {
          const Vec3 y = x - fam.center;
          if (y.norm() < 1e-12) throw SingularPoint("Schwarzschild center");
          ScalarJet u = monopole_jet(fam.mass, y);
          u.v += 1.0;
          return conformal_jet(u);
        } else if constexpr (std::is_same_v<T, HarmonicAsymptotics>) {
          return conformal_jet(harmonic_u_jet(fam, x));
        } else if constexpr (std::is_same_v<T, PerturbedRT>) {
          MetricJet jet = fam.base->eval(x);
          const auto fd = finite_difference_derivatives(
              [&fam](const Vec3& p) { return rt_scalar(fam, p) * Mat3::Identity(); }, x,
              default_fd_step(x));
          jet.g += rt_scalar(fam, x) * Mat3::Identity();
          for (int k = 0; k < 3; ++k) {
            jet.dg[k] += fd.dg[k];
            for (int l = 0; l < 3; ++l) jet.d2g[k][l] += fd.d2g[k][l];
          }
          return jet;
        } else {
          if (x.norm() < r_min)
            throw PointInsideChart("tabulated metric queried inside r_min");
          MetricJet jet;
          jet.g = fam.interpolate(x);
          const auto fd = finite_difference_derivatives(
              [&fam](const Vec3& p) { return fam.interpolate(p); }, x, default_fd_step(x));
          jet.dg = fd.dg;
          jet.d2g = fd.d2g;
          return jet;
        }
      },
      family);
}

MetricField MetricField::euclidean() {
  MetricField f;
  f.family = EuclideanFamily{};
  f.q = 1.0;
  f.r_min = 0.0;
  f.declared_mass = 0.0;
  f.declared_center = Vec3::Zero();
  return f;
}

MetricField MetricField::schwarzschild(double mass, const Vec3& center) {
  MetricField f;
  f.family = SchwarzschildIsotropic{mass, center};
  f.q = 1.0;
  f.r_min = 4.0 * std::abs(mass);
  f.declared_mass = mass;
  f.declared_center = center;
  return f;
}

MetricField MetricField::harmonic(double mass, const Vec3& dipole, const Mat3& quadrupole,
                                  const Vec3& center, std::optional<Vec3> x_field) {
  const Mat3 sym = 0.5 * (quadrupole + quadrupole.transpose());
  const Mat3 q_tf = sym - (sym.trace() / 3.0) * Mat3::Identity();
  MetricField f;
  HarmonicAsymptotics fam{mass, dipole, q_tf, center, x_field};
  f.family = fam;
  f.q = 1.0;
  f.r_min = 4.0 * std::abs(mass);
  f.declared_mass = mass;
  if (mass != 0.0) f.declared_center = center + dipole / mass;
  f.extrinsic = harmonic_extrinsic(fam);
  return f;
}

MetricField MetricField::perturbed_rt(MetricField base, double amplitude, double decay_q,
                                      int l, int m) {
  if (!(decay_q > 0.5 && decay_q <= 1.0))
    throw SchemaError("perturbed_rt: q must lie in (1/2, 1]");
  if (l < 2 || l % 2 != 0)
    throw SchemaError("perturbed_rt: angular profile l must be even and >= 2");
  if (std::abs(m) > l) throw SchemaError("perturbed_rt: |m| must be <= l");
  MetricField f;
  f.q = std::min(base.q, decay_q);
  f.r_min = base.r_min;
  f.declared_mass = base.declared_mass;
  f.declared_center = base.declared_center;
  f.extrinsic = base.extrinsic;
  PerturbedRT fam;
  fam.base = std::make_shared<MetricField>(std::move(base));
  fam.amplitude = amplitude;
  fam.decay_q = decay_q;
  fam.l = l;
  fam.m = m;
  f.family = fam;
  return f;
}

MetricField MetricField::tabulated(TabulatedUser table, double q, double r_min) {
  MetricField f;
  f.family = std::move(table);
  f.q = q;
  f.r_min = r_min;
  return f;
}

// --------------------------------------------------------------------------
// Christoffel / curvature / constraints
// --------------------------------------------------------------------------

std::array<Mat3, 3> evaluate_christoffel(const MetricJet& jet) {
  const double det = jet.g.determinant();
  if (std::abs(det) < 1e-12) throw DegenerateMetric("det g below tolerance");
  const Mat3 ginv = jet.g.inverse();
  std::array<Mat3, 3> gamma;  // gamma[k](i,j) = Gamma^k_ij
  for (int k = 0; k < 3; ++k) gamma[k] = Mat3::Zero();
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 3; ++l)
          sum += ginv(k, l) * (jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j));
        gamma[k](i, j) = 0.5 * sum;
      }
  return gamma;
}

CurvatureEval evaluate_curvature(const MetricJet& jet, const Vec3& x) {
  const double det = jet.g.determinant();
  if (std::abs(det) < 1e-12) throw DegenerateMetric("det g below tolerance");
  const Mat3 ginv = jet.g.inverse();
  const auto gamma = evaluate_christoffel(jet);
  // d_k g^{ab} = -g^{am} dg_k(m,n) g^{nb}
  std::array<Mat3, 3> dginv;
  for (int k = 0; k < 3; ++k) dginv[k] = -ginv * jet.dg[k] * ginv;
  // dGamma[k][m](i,j) = d_k Gamma^m_ij
  double dGamma[3][3][3][3];
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double sum = 0.0;
          for (int l = 0; l < 3; ++l) {
            sum += dginv[k](m, l) * (jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j));
            sum += ginv(m, l) *
                   (jet.d2g[k][i](l, j) + jet.d2g[k][j](l, i) - jet.d2g[k][l](i, j));
          }
          dGamma[k][m][i][j] = 0.5 * sum;
        }
  CurvatureEval out;
  out.x = x;
  // R^m_jkl = d_k Gamma^m_lj - d_l Gamma^m_kj + G^m_ka G^a_lj - G^m_la G^a_kj
  double Rup[3][3][3][3];
  for (int m = 0; m < 3; ++m)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double sum = dGamma[k][m][l][j] - dGamma[l][m][k][j];
          for (int a = 0; a < 3; ++a)
            sum += gamma[m](k, a) * gamma[a](l, j) - gamma[m](l, a) * gamma[a](k, j);
          Rup[m][j][k][l] = sum;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double sum = 0.0;
          for (int m = 0; m < 3; ++m) sum += jet.g(i, m) * Rup[m][j][k][l];
          out.riemann[i][j][k][l] = sum;
        }
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      double sum = 0.0;
      for (int m = 0; m < 3; ++m) sum += Rup[m][j][m][l];
      out.ricci(j, l) = sum;
    }
  out.scalar = (ginv * out.ricci).trace();
  return out;
}

CurvatureEval evaluate_curvature(const MetricField& field, const Vec3& x) {
  return evaluate_curvature(field.eval(x), x);
}

ConstraintResiduals constraint_residuals(const MetricField& field, const Vec3& x,
                                         bool want_J) {
  const MetricJet jet = field.eval(x);
  const CurvatureEval curv = evaluate_curvature(jet, x);
  ConstraintResiduals out;
  if (!field.has_extrinsic()) {
    if (want_J) throw MissingExtrinsicData("momentum constraint requested without K");
    out.rho = curv.scalar / (16.0 * kPi);
    return out;
  }
  const ExtrinsicJet ext = field.extrinsic.eval(x);
  const Mat3 ginv = jet.g.inverse();
  const double trK = (ginv * ext.K).trace();
  const Mat3 Kup = ginv * ext.K * ginv;  // K^{ij}
  const double K2 = (Kup.transpose().cwiseProduct(ext.K)).sum();
  out.rho = (curv.scalar - K2 + trK * trK) / (16.0 * kPi);
  if (want_J) {
    // div_g(K - trK g)_j = g^{ik} nabla_i pi_kj with pi = K - trK g
    const auto gamma = evaluate_christoffel(jet);
    Mat3 pi = ext.K - trK * jet.g;
    std::array<Mat3, 3> dpi;
    for (int k = 0; k < 3; ++k) {
      // d_k trK = d_k(g^{ab} K_ab)
      const Mat3 dginv = -ginv * jet.dg[k] * ginv;
      const double dtrK = (dginv * ext.K).trace() + (ginv * ext.dK[k]).trace();
      dpi[k] = ext.dK[k] - dtrK * jet.g - trK * jet.dg[k];
    }
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
          double cov = dpi[i](k, j);
          for (int a = 0; a < 3; ++a)
            cov -= gamma[a](i, k) * pi(a, j) + gamma[a](i, j) * pi(k, a);
          sum += ginv(i, k) * cov;
        }
      out.J[j] = sum / (8.0 * kPi);
    }
    out.has_J = true;
  }
  return out;
}

// --------------------------------------------------------------------------
// decay audit
// --------------------------------------------------------------------------

DecayAudit decay_audit(const MetricField& field, const std::vector<double>& radii,
                       int sample_band_limit) {
  if (radii.size() < 3) throw InsufficientRadii("decay_audit needs >= 3 radii");
  const auto [mn, mx] = std::minmax_element(radii.begin(), radii.end());
  if (*mx / *mn < 4.0) throw InsufficientRadii("decay_audit radii must span a ratio >= 4");
  SphereGrid grid(sample_band_limit);
  DecayAudit out;
  out.radii = radii;
  for (double r : radii) {
    double sh = 0, sdh = 0, sd2h = 0, shodd = 0, sdhodd = 0;
    for (int k = 0; k < grid.node_count(); ++k) {
      const Vec3 w = grid.direction(k);
      const MetricJet jp = field.eval(r * w);
      const MetricJet jm = field.eval(-r * w);
      const Mat3 hp = jp.g - Mat3::Identity();
      const Mat3 hm = jm.g - Mat3::Identity();
      sh = std::max(sh, hp.cwiseAbs().maxCoeff());
      shodd = std::max(shodd, (hp - hm).cwiseAbs().maxCoeff());
      for (int d = 0; d < 3; ++d) {
        sdh = std::max(sdh, jp.dg[d].cwiseAbs().maxCoeff());
        sdhodd = std::max(sdhodd, (jp.dg[d] + jm.dg[d]).cwiseAbs().maxCoeff());
        for (int e = 0; e < 3; ++e)
          sd2h = std::max(sd2h, jp.d2g[d][e].cwiseAbs().maxCoeff());
      }
    }
    out.sup_h.push_back(sh);
    out.sup_dh.push_back(sdh);
    out.sup_d2h.push_back(sd2h);
    out.sup_h_odd.push_back(shodd);
    out.sup_dh_odd.push_back(sdhodd);
  }
  out.fit_h = fit_power_law(radii, out.sup_h);
  out.fit_dh = fit_power_law(radii, out.sup_dh);
  out.fit_d2h = fit_power_law(radii, out.sup_d2h);
  out.fit_h_odd = fit_power_law(radii, out.sup_h_odd);
  out.fit_dh_odd = fit_power_law(radii, out.sup_dh_odd);
  out.identically_flat = out.fit_h.identically_zero && out.fit_dh.identically_zero;
  return out;
}

}  // namespace cmcfol

#include "cmcfol/sphere_harmonics.hpp"

#include <cmath>

namespace cmcfol {

namespace {

constexpr double kSqrt2 = 1.41421356237309514547462185873882845;

// Normalized associated Legendre functions Ptilde_lm(x) for one x, all
// 0 <= m <= l <= L, plus first/second theta-derivatives.  Recurrences are
// in the fully normalized form, stable to high degree.  The grid never
// contains the poles, so sin(theta) > 0 throughout.
void legendre_row(int L, double x, double s,
                  std::vector<double>& P,
                  std::vector<double>* dP,
                  std::vector<double>* d2P) {
  auto tri = [](int l, int m) { return l * (l + 1) / 2 + m; };
  const int size = (L + 1) * (L + 2) / 2;
  P.assign(size, 0.0);
  P[tri(0, 0)] = std::sqrt(1.0 / kFourPi);
  for (int m = 1; m <= L; ++m)
    P[tri(m, m)] = s * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * P[tri(m - 1, m - 1)];
  for (int m = 0; m < L; ++m)
    P[tri(m + 1, m)] = x * std::sqrt(2.0 * m + 3.0) * P[tri(m, m)];
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      P[tri(l, m)] = a * (x * P[tri(l - 1, m)] - b * P[tri(l - 2, m)]);
    }
  }
  if (!dP) return;
  dP->assign(size, 0.0);
  for (int l = 0; l <= L; ++l) {
    for (int m = 0; m <= l; ++m) {
      double below = 0.0;
      if (l > m) {
        // c_lm Ptilde_{l-1,m} with c_lm = sqrt((2l+1)(l^2-m^2)/(2l-1))
        const double c = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) /
                                   (2.0 * l - 1.0));
        below = c * P[tri(l - 1, m)];
      }
      (*dP)[tri(l, m)] = (l * x * P[tri(l, m)] - below) / s;
    }
  }
  if (!d2P) return;
  d2P->assign(size, 0.0);
  // from the associated Legendre ODE:
  //   P'' = -cot(th) P' - (l(l+1) - m^2/sin^2) P
  const double cot = x / s;
  for (int l = 0; l <= L; ++l)
    for (int m = 0; m <= l; ++m)
      (*d2P)[tri(l, m)] = -cot * (*dP)[tri(l, m)] -
                          (l * (l + 1.0) - double(m) * m / (s * s)) * P[tri(l, m)];
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;                 // ascending
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

SphereGrid::SphereGrid(int band_limit)
    : L_(band_limit), n_theta_(band_limit + 1), n_phi_(2 * band_limit + 2) {
  if (band_limit < 1) throw Error("SphereGrid: band limit must be >= 1");
  gauss_legendre(n_theta_, cos_theta_, w_theta_);
  theta_.resize(n_theta_);
  sin_theta_.resize(n_theta_);
  for (int i = 0; i < n_theta_; ++i) {
    theta_[i] = std::acos(cos_theta_[i]);
    sin_theta_[i] = std::sqrt(1.0 - cos_theta_[i] * cos_theta_[i]);
  }
  w_phi_ = 2.0 * kPi / n_phi_;
  phi_.resize(n_phi_);
  for (int j = 0; j < n_phi_; ++j) phi_[j] = w_phi_ * j;
  build_legendre_tables();
}

void SphereGrid::build_legendre_tables() {
  P_.resize(n_theta_);
  dP_.resize(n_theta_);
  d2P_.resize(n_theta_);
  for (int i = 0; i < n_theta_; ++i)
    legendre_row(L_, cos_theta_[i], sin_theta_[i], P_[i], &dP_[i], &d2P_[i]);
  cosm_.assign(n_phi_, std::vector<double>(L_ + 1));
  sinm_.assign(n_phi_, std::vector<double>(L_ + 1));
  for (int j = 0; j < n_phi_; ++j)
    for (int m = 0; m <= L_; ++m) {
      cosm_[j][m] = std::cos(m * phi_[j]);
      sinm_[j][m] = std::sin(m * phi_[j]);
    }
}

Vec3 SphereGrid::direction(int node) const {
  const int i = node / n_phi_, j = node % n_phi_;
  return {sin_theta_[i] * cosm_[j][1], sin_theta_[i] * sinm_[j][1], cos_theta_[i]};
}

Vec3 SphereGrid::d_theta_direction(int node) const {
  const int i = node / n_phi_, j = node % n_phi_;
  return {cos_theta_[i] * cosm_[j][1], cos_theta_[i] * sinm_[j][1], -sin_theta_[i]};
}

Vec3 SphereGrid::d_phi_direction(int node) const {
  const int i = node / n_phi_, j = node % n_phi_;
  return {-sin_theta_[i] * sinm_[j][1], sin_theta_[i] * cosm_[j][1], 0.0};
}

int SphereGrid::antipodal_node(int node) const {
  const int i = node / n_phi_, j = node % n_phi_;
  // Gauss-Legendre nodes are symmetric and n_phi is even, so -omega is a node.
  return node_index(n_theta_ - 1 - i, (j + n_phi_ / 2) % n_phi_);
}

double SphereGrid::basis(int l, int m, int node) const {
  const int i = node / n_phi_, j = node % n_phi_;
  const int am = std::abs(m);
  const double p = P_[i][tri_index(l, am)];
  if (m == 0) return p;
  return m > 0 ? kSqrt2 * p * cosm_[j][am] : kSqrt2 * p * sinm_[j][am];
}

double SphereGrid::basis_at(int l, int m, double theta, double phi) {
  const double x = std::cos(theta), s = std::sin(theta);
  std::vector<double> P;
  legendre_row(l, x, s, P, nullptr, nullptr);
  const int am = std::abs(m);
  const double p = P[l * (l + 1) / 2 + am];
  if (m == 0) return p;
  return m > 0 ? kSqrt2 * p * std::cos(m * phi) : kSqrt2 * p * std::sin(am * phi);
}

Eigen::VectorXd SphereGrid::synthesis(const HarmonicCoeffs& coeffs) const {
  if (coeffs.L != L_) throw BandLimitMismatch("synthesis: coefficient band limit differs from grid");
  Eigen::VectorXd out(node_count());
  // m-sums first: G_m(theta_i), then phi sums.  O(L^3) overall.
  std::vector<double> gc(L_ + 1), gs(L_ + 1);
  for (int i = 0; i < n_theta_; ++i) {
    for (int m = 0; m <= L_; ++m) {
      double c = 0.0, s = 0.0;
      for (int l = m; l <= L_; ++l) {
        const double p = P_[i][tri_index(l, m)];
        if (m == 0) {
          c += coeffs.at(l, 0) * p;
        } else {
          c += coeffs.at(l, m) * p;
          s += coeffs.at(l, -m) * p;
        }
      }
      gc[m] = c;
      gs[m] = s;
    }
    for (int j = 0; j < n_phi_; ++j) {
      double v = gc[0];
      for (int m = 1; m <= L_; ++m)
        v += kSqrt2 * (gc[m] * cosm_[j][m] + gs[m] * sinm_[j][m]);
      out[node_index(i, j)] = v;
    }
  }
  return out;
}

HarmonicCoeffs SphereGrid::analysis(const Eigen::VectorXd& values) const {
  if (values.size() != node_count()) throw BandLimitMismatch("analysis: wrong node count");
  if (!values.allFinite()) throw NonFiniteInput("analysis: non-finite field value");
  HarmonicCoeffs out(L_);
  std::vector<double> Fc(L_ + 1), Fs(L_ + 1);
  for (int i = 0; i < n_theta_; ++i) {
    for (int m = 0; m <= L_; ++m) {
      double c = 0.0, s = 0.0;
      for (int j = 0; j < n_phi_; ++j) {
        const double v = values[node_index(i, j)];
        c += v * cosm_[j][m];
        s += v * sinm_[j][m];
      }
      Fc[m] = c;
      Fs[m] = s;
    }
    const double wi = w_theta_[i] * w_phi_;
    for (int m = 0; m <= L_; ++m) {
      for (int l = m; l <= L_; ++l) {
        const double p = P_[i][tri_index(l, m)];
        if (m == 0) {
          out.at(l, 0) += wi * p * Fc[0];
        } else {
          out.at(l, m) += wi * kSqrt2 * p * Fc[m];
          out.at(l, -m) += wi * kSqrt2 * p * Fs[m];
        }
      }
    }
  }
  return out;
}

double SphereGrid::evaluate(const HarmonicCoeffs& coeffs, double theta, double phi) {
  const int L = coeffs.L;
  const double x = std::cos(theta), s = std::sin(theta);
  std::vector<double> P;
  legendre_row(L, x, s, P, nullptr, nullptr);
  auto tri = [](int l, int m) { return l * (l + 1) / 2 + m; };
  double v = 0.0;
  for (int m = 0; m <= L; ++m) {
    double gc = 0.0, gs = 0.0;
    for (int l = m; l <= L; ++l) {
      const double p = P[tri(l, m)];
      if (m == 0) {
        gc += coeffs.at(l, 0) * p;
      } else {
        gc += coeffs.at(l, m) * p;
        gs += coeffs.at(l, -m) * p;
      }
    }
    if (m == 0)
      v += gc;
    else
      v += kSqrt2 * (gc * std::cos(m * phi) + gs * std::sin(m * phi));
  }
  return v;
}

SphereGrid::FieldJet SphereGrid::synthesis_with_derivatives(const HarmonicCoeffs& coeffs) const {
  if (coeffs.L != L_)
    throw BandLimitMismatch("synthesis_with_derivatives: band limit differs from grid");
  FieldJet out;
  const int n = node_count();
  out.f.resize(n); out.f_t.resize(n); out.f_p.resize(n);
  out.f_tt.resize(n); out.f_tp.resize(n); out.f_pp.resize(n);
  std::vector<double> gc(L_ + 1), gs(L_ + 1), dgc(L_ + 1), dgs(L_ + 1),
      d2gc(L_ + 1), d2gs(L_ + 1);
  for (int i = 0; i < n_theta_; ++i) {
    for (int m = 0; m <= L_; ++m) {
      double c = 0, s = 0, dc = 0, ds = 0, d2c = 0, d2s = 0;
      for (int l = m; l <= L_; ++l) {
        const int t = tri_index(l, m);
        const double p = P_[i][t], dp = dP_[i][t], d2p = d2P_[i][t];
        if (m == 0) {
          c += coeffs.at(l, 0) * p;
          dc += coeffs.at(l, 0) * dp;
          d2c += coeffs.at(l, 0) * d2p;
        } else {
          c += coeffs.at(l, m) * p;
          s += coeffs.at(l, -m) * p;
          dc += coeffs.at(l, m) * dp;
          ds += coeffs.at(l, -m) * dp;
          d2c += coeffs.at(l, m) * d2p;
          d2s += coeffs.at(l, -m) * d2p;
        }
      }
      gc[m] = c; gs[m] = s; dgc[m] = dc; dgs[m] = ds; d2gc[m] = d2c; d2gs[m] = d2s;
    }
    for (int j = 0; j < n_phi_; ++j) {
      double f = gc[0], ft = dgc[0], fp = 0, ftt = d2gc[0], ftp = 0, fpp = 0;
      for (int m = 1; m <= L_; ++m) {
        const double cm = cosm_[j][m], sm = sinm_[j][m];
        f += kSqrt2 * (gc[m] * cm + gs[m] * sm);
        ft += kSqrt2 * (dgc[m] * cm + dgs[m] * sm);
        ftt += kSqrt2 * (d2gc[m] * cm + d2gs[m] * sm);
        fp += kSqrt2 * m * (-gc[m] * sm + gs[m] * cm);
        ftp += kSqrt2 * m * (-dgc[m] * sm + dgs[m] * cm);
        fpp += -kSqrt2 * m * m * (gc[m] * cm + gs[m] * sm);
      }
      const int k = node_index(i, j);
      out.f[k] = f; out.f_t[k] = ft; out.f_p[k] = fp;
      out.f_tt[k] = ftt; out.f_tp[k] = ftp; out.f_pp[k] = fpp;
    }
  }
  return out;
}

double SphereGrid::quadrature_integral(const Eigen::VectorXd& values) const {
  if (values.size() != node_count()) throw BandLimitMismatch("quadrature_integral: wrong node count");
  if (!values.allFinite()) throw NonFiniteInput("quadrature_integral: non-finite field value");
  double sum = 0.0;
  for (int i = 0; i < n_theta_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_phi_; ++j) row += values[node_index(i, j)];
    sum += w_theta_[i] * row;
  }
  return sum * w_phi_;
}

HarmonicCoeffs laplace_beltrami_apply(const HarmonicCoeffs& coeffs) {
  HarmonicCoeffs out(coeffs.L);
  for (int l = 0; l <= coeffs.L; ++l)
    for (int m = -l; m <= l; ++m) out.at(l, m) = l * (l + 1.0) * coeffs.at(l, m);
  return out;
}

L1Split l1_projection(const HarmonicCoeffs& coeffs) {
  L1Split out;
  out.remainder = coeffs;
  if (coeffs.L >= 1) {
    const double scale = std::sqrt(3.0 / kFourPi);  // Y_1m = scale * (y1,y2,y3)
    out.b = Vec3(coeffs.at(1, 1), coeffs.at(1, -1), coeffs.at(1, 0)) * scale;
    out.remainder.at(1, -1) = 0.0;
    out.remainder.at(1, 0) = 0.0;
    out.remainder.at(1, 1) = 0.0;
  }
  return out;
}

}  // namespace cmcfol

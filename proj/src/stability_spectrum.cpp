#include "cmcfol/stability_spectrum.hpp"

#include <cmath>

namespace cmcfol {

namespace {

// basis value / angular gradient tables, nodes x basis
struct BasisTables {
  Eigen::MatrixXd val, dth, dph;
};

BasisTables basis_tables(const SphereGrid& grid) {
  const int L = grid.band_limit();
  const int B = (L + 1) * (L + 1);
  const int n = grid.node_count();
  BasisTables t;
  t.val.resize(n, B);
  t.dth.resize(n, B);
  t.dph.resize(n, B);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) {
      HarmonicCoeffs c(L);
      c.at(l, m) = 1.0;
      const auto jet = grid.synthesis_with_derivatives(c);
      const int a = HarmonicCoeffs::index(l, m);
      t.val.col(a) = jet.f;
      t.dth.col(a) = jet.f_t;
      t.dph.col(a) = jet.f_p;
    }
  return t;
}

}  // namespace

JacobiMatrix assemble_jacobi(const LeafSurface& leaf, const MetricField& field) {
  const SphereGrid& grid = *leaf.grid;
  const int n = grid.node_count();
  const SurfaceGeometry geo = fundamental_forms(leaf, field);

  // potential |A|^2 + Ric(nu,nu), evaluated with the g-unit normal at the node
  Eigen::VectorXd V(n);
  parallel_for(n, [&](std::size_t k) {
    const CurvatureEval curv = evaluate_curvature(field, geo.z[k]);
    V[k] = geo.A2[k] + geo.normal[k].dot(curv.ricci * geo.normal[k]);
  });

  // surface-gradient inner products need the inverse first form in the
  // (theta,phi) coordinates; weights carry the g-area density
  Eigen::VectorXd w(n), wtt(n), wtp(n), wpp(n), wV(n);
  for (int k = 0; k < n; ++k) {
    const double wk = grid.weight(k) * geo.area_g[k];
    const Mat2& gi = geo.first_inv[k];
    w[k] = wk;
    wtt[k] = wk * gi(0, 0);
    wtp[k] = wk * gi(0, 1);
    wpp[k] = wk * gi(1, 1);
    wV[k] = wk * V[k];
  }

  const BasisTables t = basis_tables(grid);
  JacobiMatrix out;
  out.band_limit = grid.band_limit();
  out.mass = t.val.transpose() * w.asDiagonal() * t.val;
  Eigen::MatrixXd stiff = t.dth.transpose() * wtt.asDiagonal() * t.dth +
                          t.dth.transpose() * wtp.asDiagonal() * t.dph +
                          t.dph.transpose() * wtp.asDiagonal() * t.dth +
                          t.dph.transpose() * wpp.asDiagonal() * t.dph;
  Eigen::MatrixXd op = stiff - t.val.transpose() * wV.asDiagonal() * t.val;
  out.symmetry_defect =
      (op - op.transpose()).cwiseAbs().maxCoeff() / std::max(op.cwiseAbs().maxCoeff(), 1e-300);
  out.op = 0.5 * (op + op.transpose());
  out.mass = 0.5 * (out.mass + out.mass.transpose());
  return out;
}

JacobiMatrix assemble_L0(double R, const SphereGrid& grid) {
  const int L = grid.band_limit();
  const int B = (L + 1) * (L + 1);
  JacobiMatrix out;
  out.band_limit = L;
  out.mass = Eigen::MatrixXd::Identity(B, B);
  out.op = Eigen::MatrixXd::Zero(B, B);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) {
      const int a = HarmonicCoeffs::index(l, m);
      out.op(a, a) = (l * (l + 1.0) - 2.0) / (R * R);
    }
  return out;
}

SpectrumResult eigen_solve(const JacobiMatrix& matrix, int k) {
  if (k < 2) throw Error("eigen_solve: k must be >= 2");
  const int B = static_cast<int>(matrix.op.rows());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.op, matrix.mass);
  if (solver.info() != Eigen::Success)
    throw EigSolverFailure("generalized eigensolve did not converge");
  SpectrumResult out;
  const Eigen::VectorXd& ev = solver.eigenvalues();
  out.eta0 = ev(0);
  out.eta1 = ev(1);
  out.smallest_abs_eigenvalue = ev.cwiseAbs().minCoeff();
  const int keep = std::min(k, B);
  for (int i = 0; i < keep; ++i) {
    out.eigenvalues.push_back(ev(i));
    HarmonicCoeffs c(matrix.band_limit);
    c.a = solver.eigenvectors().col(i);
    out.eigenfields.push_back(std::move(c));
  }

  // mu0: deflate the constant function (coefficient direction e0) against
  // the Gram matrix and re-solve on the complement.
  Eigen::VectorXd c = matrix.mass.col(0);  // <phi_a, const>_g up to scale
  c.normalize();
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(B);
  e0(0) = 1.0;
  Eigen::VectorXd v = c - e0;
  Eigen::MatrixXd Z;
  if (v.norm() < 1e-14) {
    Z = Eigen::MatrixXd::Identity(B, B).rightCols(B - 1);
  } else {
    v.normalize();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(B, B) - 2.0 * v * v.transpose();
    Z = H.rightCols(B - 1);  // columns orthogonal to c
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> reduced(
      Z.transpose() * matrix.op * Z, Z.transpose() * matrix.mass * Z);
  if (reduced.info() != Eigen::Success)
    throw EigSolverFailure("deflated eigensolve did not converge");
  out.mu0 = reduced.eigenvalues()(0);
  return out;
}

Eigen::MatrixXd multiplication_operator(const SphereGrid& grid, const Eigen::VectorXd& c) {
  const int L = grid.band_limit();
  const int B = (L + 1) * (L + 1);
  const int n = grid.node_count();
  Eigen::MatrixXd val(n, B);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) {
      HarmonicCoeffs e(L);
      e.at(l, m) = 1.0;
      val.col(HarmonicCoeffs::index(l, m)) = grid.synthesis(e);
    }
  Eigen::VectorXd wc(n);
  for (int k = 0; k < n; ++k) wc[k] = grid.weight(k) * c[k];
  return val.transpose() * wc.asDiagonal() * val;
}

Eigen::VectorXd linearized_H_field(const LeafSurface& leaf, const MetricField& field,
                                   const JacobiMatrix& jac, const SurfaceGeometry& geo,
                                   const HarmonicCoeffs& direction) {
  const SphereGrid& grid = *leaf.grid;
  const int n = grid.node_count();
  (void)field;
  // normal part: L_N(c_n v) through the Galerkin pair
  Eigen::VectorXd v = grid.synthesis(direction);
  Eigen::VectorXd cnv(n);
  for (int k = 0; k < n; ++k) cnv[k] = geo.normal_radial[k] * v[k];
  const HarmonicCoeffs w = grid.analysis(cnv);
  Eigen::VectorXd y = jac.mass.ldlt().solve(jac.op * w.a);
  HarmonicCoeffs yc(direction.L);
  yc.a = y;
  Eigen::VectorXd out = grid.synthesis(yc);
  // tangential transport: <grad H, v omega - (c_n v) nu>_g reduces to
  // gamma^{ab} dH_a g(z_b, v omega)
  const auto Hjet = grid.synthesis_with_derivatives(grid.analysis(geo.H));
  for (int k = 0; k < n; ++k) {
    const MetricJet jet = field.eval(geo.z[k]);
    const Vec3 womega = v[k] * grid.direction(k);
    const Eigen::Vector2d dH(Hjet.f_t[k], Hjet.f_p[k]);
    const Eigen::Vector2d t(geo.z_t[k].dot(jet.g * womega), geo.z_p[k].dot(jet.g * womega));
    out[k] += dH.dot(geo.first_inv[k] * t);
  }
  return out;
}

FrechetReport frechet_check(const LeafSurface& leaf, const MetricField& field,
                            const HarmonicCoeffs& direction,
                            const std::vector<double>& eps_list) {
  const SphereGrid& grid = *leaf.grid;
  const JacobiMatrix jac = assemble_jacobi(leaf, field);
  const SurfaceGeometry geo = fundamental_forms(leaf, field);
  const Eigen::VectorXd predicted = linearized_H_field(leaf, field, jac, geo, direction);

  FrechetReport report;
  report.eps = eps_list;
  std::vector<Eigen::VectorXd> quotients;
  for (double eps : eps_list) {
    LeafSurface plus = leaf, minus = leaf;
    plus.psi.a += eps * direction.a;
    minus.psi.a -= eps * direction.a;
    const Eigen::VectorXd Hp = mean_curvature_field(plus, field);
    const Eigen::VectorXd Hm = mean_curvature_field(minus, field);
    const Eigen::VectorXd quotient = (Hp - Hm) / (2.0 * eps);
    quotients.push_back(quotient);
    report.deviation.push_back((quotient - predicted).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    report.order_ratios.push_back(report.deviation[i] / report.deviation[i + 1]);
  if (quotients.size() >= 2) {
    // central differences have error a eps^2 + O(eps^4); eliminate the
    // leading term from the two smallest steps
    const std::size_t i = quotients.size() - 2, j = quotients.size() - 1;
    const double r = eps_list[i] / eps_list[j];
    const Eigen::VectorXd rich =
        (r * r * quotients[j] - quotients[i]) / (r * r - 1.0);
    report.richardson_deviation = (rich - predicted).cwiseAbs().maxCoeff();
  } else {
    report.richardson_deviation = report.deviation.empty() ? 0.0 : report.deviation[0];
  }
  return report;
}

}  // namespace cmcfol

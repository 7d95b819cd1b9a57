#include "cmcfol/graph_surfaces.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace cmcfol {

EmbeddingJet embed(const LeafSurface& leaf) {
  const SphereGrid& grid = *leaf.grid;
  const auto jet = grid.synthesis_with_derivatives(leaf.psi);
  const int n = grid.node_count();
  EmbeddingJet out;
  out.r = jet.f.array() + leaf.R;
  if (out.r.minCoeff() <= 0.0)
    throw NonEmbedded("R + min psi <= 0");
  out.z.resize(n); out.z_t.resize(n); out.z_p.resize(n);
  out.z_tt.resize(n); out.z_tp.resize(n); out.z_pp.resize(n);
  for (int k = 0; k < n; ++k) {
    const Vec3 w = grid.direction(k);
    const Vec3 wt = grid.d_theta_direction(k);
    const Vec3 wp = grid.d_phi_direction(k);
    const int i = k / grid.n_phi(), j = k % grid.n_phi();
    const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
    const double cp = std::cos(grid.phi(j)), sp = std::sin(grid.phi(j));
    const Vec3 w_tt = -w;
    const Vec3 w_tp(-ct * sp, ct * cp, 0.0);
    const Vec3 w_pp(-st * cp, -st * sp, 0.0);
    const double r = out.r[k];
    out.z[k] = leaf.p + r * w;
    out.z_t[k] = jet.f_t[k] * w + r * wt;
    out.z_p[k] = jet.f_p[k] * w + r * wp;
    out.z_tt[k] = jet.f_tt[k] * w + 2.0 * jet.f_t[k] * wt + r * w_tt;
    out.z_tp[k] = jet.f_tp[k] * w + jet.f_t[k] * wp + jet.f_p[k] * wt + r * w_tp;
    out.z_pp[k] = jet.f_pp[k] * w + 2.0 * jet.f_p[k] * wp + r * w_pp;
  }
  return out;
}

SurfaceGeometry fundamental_forms(const LeafSurface& leaf, const MetricField& field) {
  const SphereGrid& grid = *leaf.grid;
  const EmbeddingJet E = embed(leaf);
  const int n = grid.node_count();
  SurfaceGeometry geo;
  geo.z = E.z;
  geo.z_t = E.z_t;
  geo.z_p = E.z_p;
  geo.normal.resize(n);
  geo.first.resize(n);
  geo.first_inv.resize(n);
  geo.second.resize(n);
  geo.H.resize(n);
  geo.A2.resize(n);
  geo.Aring2.resize(n);
  geo.area_g.resize(n);
  geo.area_e.resize(n);
  geo.normal_radial.resize(n);

  parallel_for(n, [&](std::size_t k) {
    const MetricJet jet = field.eval(E.z[k]);
    const auto gamma = evaluate_christoffel(jet);
    const Vec3 zt = E.z_t[k], zp = E.z_p[k];

    Mat2 first;
    first(0, 0) = zt.dot(jet.g * zt);
    first(0, 1) = first(1, 0) = zt.dot(jet.g * zp);
    first(1, 1) = zp.dot(jet.g * zp);
    const double det = first.determinant();
    if (det < 1e-12 * std::pow(leaf.R, 4))
      throw DegenerateFirstForm("induced metric degenerate at a node");

    // g-normal: raise the Euclidean covector z_t x z_p and normalize.
    const Vec3 ncov = zt.cross(zp);
    Vec3 nu = jet.g.llt().solve(ncov);
    const double norm = std::sqrt(ncov.dot(nu));
    nu /= norm;
    const Vec3 w = grid.direction(static_cast<int>(k));
    if (nu.dot(E.z[k] - leaf.p) < 0.0) nu = -nu;  // outward
    const Vec3 gnu = jet.g * nu;

    auto second_ff = [&](const Vec3& zab, const Vec3& za, const Vec3& zb) {
      Vec3 cov = zab;
      for (int c = 0; c < 3; ++c) cov[c] += za.dot(gamma[c] * zb);
      return -gnu.dot(cov);
    };
    Mat2 second;
    second(0, 0) = second_ff(E.z_tt[k], zt, zt);
    second(0, 1) = second(1, 0) = second_ff(E.z_tp[k], zt, zp);
    second(1, 1) = second_ff(E.z_pp[k], zp, zp);

    const Mat2 first_inv = first.inverse();
    const Mat2 shape = first_inv * second;
    const double H = shape.trace();
    const double A2 = (shape * shape).trace();
    // trace-free part from the shape operator directly; the |A|^2 - H^2/2
    // route loses the umbilic case to cancellation
    const Mat2 shape0 = shape - 0.5 * H * Mat2::Identity();
    const double Aring2 = (shape0 * shape0).trace();

    const int i = static_cast<int>(k) / grid.n_phi();
    const double st = grid.sin_theta(i);
    Mat2 firstE;
    firstE(0, 0) = zt.squaredNorm();
    firstE(0, 1) = firstE(1, 0) = zt.dot(zp);
    firstE(1, 1) = zp.squaredNorm();

    geo.normal[k] = nu;
    geo.first[k] = first;
    geo.first_inv[k] = first_inv;
    geo.second[k] = second;
    geo.H[k] = H;
    geo.A2[k] = A2;
    geo.Aring2[k] = Aring2;
    geo.area_g[k] = std::sqrt(det) / st;
    geo.area_e[k] = std::sqrt(firstE.determinant()) / st;
    geo.normal_radial[k] = w.dot(jet.g * nu);
  });
  return geo;
}

Eigen::VectorXd mean_curvature_field(const LeafSurface& leaf, const MetricField& field) {
  return fundamental_forms(leaf, field).H;
}

Eigen::VectorXd mc_expansion_eval(const MetricField& field, const Vec3& p, double R,
                                  const SphereGrid& grid) {
  const int n = grid.node_count();
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    const Vec3 w = grid.direction(k);
    const MetricJet jet = field.eval(p + R * w);
    const Mat3 h = jet.g - Mat3::Identity();
    double hnnn = 0.0, hnn = 0.0, divh_n = 0.0, dtr_n = 0.0;
    for (int i = 0; i < 3; ++i) {
      dtr_n += (jet.dg[i](0, 0) + jet.dg[i](1, 1) + jet.dg[i](2, 2)) * w[i];
      for (int j = 0; j < 3; ++j) {
        hnn += h(i, j) * w[i] * w[j];
        divh_n += jet.dg[i](i, j) * w[j];
        for (int kk = 0; kk < 3; ++kk) hnnn += jet.dg[kk](i, j) * w[i] * w[j] * w[kk];
      }
    }
    out[k] = 2.0 / R + 0.5 * hnnn + 2.0 * hnn / R - divh_n + 0.5 * dtr_n - h.trace() / R;
  }
  return out;
}

LeafArea area(const LeafSurface& leaf, const MetricField& field) {
  const SurfaceGeometry geo = fundamental_forms(leaf, field);
  LeafArea out;
  out.area_g = leaf.grid->quadrature_integral(geo.area_g);
  out.area_e = leaf.grid->quadrature_integral(geo.area_e);
  return out;
}

double traceless_A_norm(const SurfaceGeometry& geometry) {
  double sup = 0.0;
  for (int k = 0; k < geometry.Aring2.size(); ++k)
    sup = std::max(sup, std::sqrt(std::max(0.0, geometry.Aring2[k])));
  return sup;
}

double odd_part_sup(const SphereGrid& grid, const Eigen::VectorXd& values) {
  double sup = 0.0;
  for (int k = 0; k < grid.node_count(); ++k)
    sup = std::max(sup, std::abs(values[k] - values[grid.antipodal_node(k)]));
  return sup;
}

void save_leaf_binary(const LeafSurface& leaf, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileNotFound(path);
  const char magic[4] = {'C', 'M', 'C', 'F'};
  const std::uint32_t version = 1;
  const std::uint32_t L = leaf.psi.L;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(leaf.p.data()), 3 * sizeof(double));
  out.write(reinterpret_cast<const char*>(&leaf.R), sizeof(double));
  out.write(reinterpret_cast<const char*>(&L), 4);
  out.write(reinterpret_cast<const char*>(leaf.psi.a.data()),
            leaf.psi.a.size() * sizeof(double));
}

LeafSurface load_leaf_binary(const std::string& path,
                             std::shared_ptr<const SphereGrid> grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  char magic[4];
  std::uint32_t version = 0, L = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  if (std::string(magic, 4) != "CMCF" || version != 1)
    throw SchemaError("bad leaf binary header in " + path);
  LeafSurface leaf;
  in.read(reinterpret_cast<char*>(leaf.p.data()), 3 * sizeof(double));
  in.read(reinterpret_cast<char*>(&leaf.R), sizeof(double));
  in.read(reinterpret_cast<char*>(&L), 4);
  leaf.psi = HarmonicCoeffs(static_cast<int>(L));
  in.read(reinterpret_cast<char*>(leaf.psi.a.data()), leaf.psi.a.size() * sizeof(double));
  if (grid && grid->band_limit() != static_cast<int>(L))
    throw BandLimitMismatch("leaf binary band limit differs from grid");
  leaf.grid = grid ? std::move(grid) : std::make_shared<SphereGrid>(static_cast<int>(L));
  return leaf;
}

void write_leaf_csv(const LeafSurface& leaf, const MetricField& field,
                    const std::string& path) {
  const SurfaceGeometry geo = fundamental_forms(leaf, field);
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw FileNotFound(path);
  std::fprintf(out, "# schema cmcfol.leaf.v1\n");
  std::fprintf(out, "theta,phi,x,y,z,H,Aring2,dsigma_g\n");
  const SphereGrid& grid = *leaf.grid;
  for (int k = 0; k < grid.node_count(); ++k) {
    const int i = k / grid.n_phi(), j = k % grid.n_phi();
    std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.theta(i),
                 grid.phi(j), geo.z[k][0], geo.z[k][1], geo.z[k][2], geo.H[k],
                 geo.Aring2[k], geo.area_g[k]);
  }
  std::fclose(out);
}

}  // namespace cmcfol

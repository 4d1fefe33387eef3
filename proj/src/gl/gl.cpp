#include "stab/gl/gl.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "stab/core/util.hpp"

namespace stab::gl {

GLState make_state(const geom::TriMesh& mesh, const geom::FemOperators& fem, double epsilon,
                   const VectorXcd& u) {
  require(epsilon > 0.0, "GLParams: epsilon must be positive");
  require(u.size() == mesh.num_vertices(), "GLState: field length mismatch");
  require(u.allFinite(), "GLState: non-finite field value");
  GLState s;
  s.mesh = &mesh;
  s.fem = &fem;
  s.params.epsilon = epsilon;
  s.u = u;
  return s;
}

VectorXd to_flat(const VectorXcd& u) {
  VectorXd x(2 * u.size());
  for (int i = 0; i < u.size(); ++i) {
    x[2 * i] = u[i].real();
    x[2 * i + 1] = u[i].imag();
  }
  return x;
}

VectorXcd from_flat(const VectorXd& x) {
  VectorXcd u(x.size() / 2);
  for (int i = 0; i < u.size(); ++i) u[i] = Complex(x[2 * i], x[2 * i + 1]);
  return u;
}

double gl_energy(const GLState& s) {
  require(s.u.allFinite(), "gl_energy: non-finite input");
  const double eps2 = s.params.epsilon * s.params.epsilon;
  const VectorXd re = s.u.real(), im = s.u.imag();
  double grad = 0.5 * (re.dot(s.fem->stiffness * re) + im.dot(s.fem->stiffness * im));
  double pot = 0.0;
  for (int v = 0; v < s.u.size(); ++v) {
    const double w = 1.0 - std::norm(s.u[v]);
    pot += s.fem->lumpedMass[v] * w * w / (4.0 * eps2);
  }
  return grad + pot;
}

VectorXcd gl_residual(const GLState& s) {
  require(s.u.allFinite(), "gl_residual: non-finite input");
  const double eps2 = s.params.epsilon * s.params.epsilon;
  const VectorXd re = s.fem->stiffness * s.u.real().eval();
  const VectorXd im = s.fem->stiffness * s.u.imag().eval();
  VectorXcd r(s.u.size());
  for (int v = 0; v < s.u.size(); ++v)
    r[v] = eps2 * Complex(re[v], im[v]) / s.fem->lumpedMass[v] +
           (std::norm(s.u[v]) - 1.0) * s.u[v];
  return r;
}

VectorXd gl_residual_weak(const GLState& s) {
  const double eps2 = s.params.epsilon * s.params.epsilon;
  const VectorXd re = s.fem->stiffness * s.u.real().eval();
  const VectorXd im = s.fem->stiffness * s.u.imag().eval();
  VectorXd R(2 * s.u.size());
  for (int v = 0; v < s.u.size(); ++v) {
    const double m = s.fem->lumpedMass[v];
    const double p = std::norm(s.u[v]) - 1.0;
    R[2 * v] = eps2 * re[v] + m * p * s.u[v].real();
    R[2 * v + 1] = eps2 * im[v] + m * p * s.u[v].imag();
  }
  return R;
}

double residual_mass_norm(const GLState& s) {
  const VectorXcd r = gl_residual(s);
  double n2 = 0.0;
  for (int v = 0; v < r.size(); ++v) n2 += s.fem->lumpedMass[v] * std::norm(r[v]);
  return std::sqrt(n2);
}

VectorXcd gl_hessian_apply(const GLState& s, const VectorXcd& v) {
  require(v.size() == s.u.size(), "gl_hessian_apply: length mismatch");
  const double eps2 = s.params.epsilon * s.params.epsilon;
  const VectorXd re = s.fem->stiffness * v.real().eval();
  const VectorXd im = s.fem->stiffness * v.imag().eval();
  VectorXcd out(v.size());
  for (int k = 0; k < v.size(); ++k) {
    const Complex u = s.u[k];
    const double udotv = u.real() * v[k].real() + u.imag() * v[k].imag();
    out[k] = Complex(re[k], im[k]) / s.fem->lumpedMass[k] +
             ((std::norm(u) - 1.0) * v[k] + 2.0 * udotv * u) / eps2;
  }
  return out;
}

double gl_outer_first_variation(const GLState& s, const VectorXcd& v) {
  require(v.size() == s.u.size(), "gl_outer_first_variation: length mismatch");
  const double eps2 = s.params.epsilon * s.params.epsilon;
  double acc = s.u.real().dot(s.fem->stiffness * v.real().eval()) +
               s.u.imag().dot(s.fem->stiffness * v.imag().eval());
  for (int k = 0; k < v.size(); ++k) {
    const double udotv = s.u[k].real() * v[k].real() + s.u[k].imag() * v[k].imag();
    acc += s.fem->lumpedMass[k] * (std::norm(s.u[k]) - 1.0) * udotv / eps2;
  }
  return acc;
}

double gl_outer_second_variation(const GLState& s, const VectorXcd& v) {
  require(v.size() == s.u.size(), "gl_outer_second_variation: length mismatch");
  const double eps2 = s.params.epsilon * s.params.epsilon;
  double acc = v.real().dot(s.fem->stiffness * v.real().eval()) +
               v.imag().dot(s.fem->stiffness * v.imag().eval());
  for (int k = 0; k < v.size(); ++k) {
    const double udotv = s.u[k].real() * v[k].real() + s.u[k].imag() * v[k].imag();
    acc += s.fem->lumpedMass[k] *
           ((std::norm(s.u[k]) - 1.0) * std::norm(v[k]) + 2.0 * udotv * udotv) / eps2;
  }
  return acc;
}

Eigen::SparseMatrix<double> gl_hessian_matrix(const GLState& s) {
  const int V = static_cast<int>(s.u.size());
  const double eps2 = s.params.epsilon * s.params.epsilon;
  std::vector<Eigen::Triplet<double>> T;
  T.reserve(4 * s.fem->stiffness.nonZeros() + 4 * V);
  for (int k = 0; k < s.fem->stiffness.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(s.fem->stiffness, k); it; ++it) {
      T.emplace_back(2 * it.row(), 2 * it.col(), it.value());
      T.emplace_back(2 * it.row() + 1, 2 * it.col() + 1, it.value());
    }
  for (int v = 0; v < V; ++v) {
    const double m = s.fem->lumpedMass[v];
    const double a = s.u[v].real(), b = s.u[v].imag();
    const double p = std::norm(s.u[v]) - 1.0;
    T.emplace_back(2 * v, 2 * v, m * (p + 2.0 * a * a) / eps2);
    T.emplace_back(2 * v, 2 * v + 1, m * 2.0 * a * b / eps2);
    T.emplace_back(2 * v + 1, 2 * v, m * 2.0 * a * b / eps2);
    T.emplace_back(2 * v + 1, 2 * v + 1, m * (p + 2.0 * b * b) / eps2);
  }
  Eigen::SparseMatrix<double> H(2 * V, 2 * V);
  H.setFromTriplets(T.begin(), T.end());
  H.makeCompressed();
  return H;
}

VectorXd gl_mass2_diag(const GLState& s) {
  VectorXd d(2 * s.u.size());
  for (int v = 0; v < s.u.size(); ++v) d[2 * v] = d[2 * v + 1] = s.fem->lumpedMass[v];
  return d;
}

double state_max_abs(const GLState& s) {
  double m = 0.0;
  for (int v = 0; v < s.u.size(); ++v) m = std::max(m, std::abs(s.u[v]));
  return m;
}

void write_state_json(const GLState& s, const std::string& path) {
  nlohmann::ordered_json j;
  j["meshLevel"] = s.mesh->level;
  j["epsilon"] = s.params.epsilon;
  std::vector<double> re(s.u.size()), im(s.u.size());
  for (int v = 0; v < s.u.size(); ++v) {
    re[v] = s.u[v].real();
    im[v] = s.u[v].imag();
  }
  j["realParts"] = re;
  j["imagParts"] = im;
  std::ofstream out(path);
  require(out.good(), "write_state_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

VectorXcd read_state_json(const std::string& path, int* meshLevel, double* epsilon) {
  std::ifstream in(path);
  require(in.good(), "read_state_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  const auto re = j.at("realParts").get<std::vector<double>>();
  const auto im = j.at("imagParts").get<std::vector<double>>();
  require(re.size() == im.size(), "read_state_json: length mismatch");
  if (meshLevel) *meshLevel = j.at("meshLevel").get<int>();
  if (epsilon) *epsilon = j.at("epsilon").get<double>();
  VectorXcd u(re.size());
  for (size_t v = 0; v < re.size(); ++v) u[v] = Complex(re[v], im[v]);
  return u;
}

}  // namespace stab::gl

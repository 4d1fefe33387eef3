#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stab/core/eigs.hpp"
#include "stab/gl/gl.hpp"

namespace stab::gl {

struct SpectrumReport {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // mass-orthonormal, flat 2V layout
  Eigen::VectorXd residualNorms;
  std::vector<bool> converged;
  bool allConverged = false;
};

/// k smallest eigenpairs of (L_u, mass).
SpectrumReport gl_spectrum(const GLState& s, int k, uint64_t seed = 0x5eed);

struct MorseIndexReport {
  int index = 0;
  bool certified = false;  // next eigenvalue >= -tol established via inertia
};

/// Number of eigenvalues of L_u below -tol.
MorseIndexReport gl_morse_index(const GLState& s, double tol);

struct InstabilityCertificate {
  bool found = false;
  bool viaSpan = false;      // direction found inside span{<grad u, X_xi_i>}
  double rayleighQuotient = 0.0;
  VectorXcd direction;
  double lambda1 = 0.0;      // from the fallback spectrum when consulted
  bool spectrumConsulted = false;
};

/// Searches span{<grad u, X_{e_i}>, i = 1..3} for a negative Rayleigh
/// quotient of L_u, falling back to the full spectrum.
InstabilityCertificate gl_instability_certificate(const GLState& s, double tol = 1e-8,
                                                  uint64_t seed = 0x5eed);

/// Vertex field <grad u, X> (complex), via vertex-projected gradients.
VectorXcd nabla_X_u(const GLState& s, const std::vector<geom::Vec3>& Xvertex);

void write_spectrum_csv(const SpectrumReport& rep, const std::string& path);

}  // namespace stab::gl

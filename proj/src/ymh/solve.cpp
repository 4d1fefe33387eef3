#include "stab/ymh/solve.hpp"

#include <cmath>

#include "stab/core/util.hpp"

namespace stab::ymh {

namespace {

bool fluxes_admissible(const YMHState& s, double guard) {
  const VectorXd flux = plaquette_fluxes(s.bundle);
  for (int f = 0; f < flux.size(); ++f)
    if (std::abs(flux[f]) >= guard * kPi) return false;
  return true;
}

// diagonal preconditioner: curvature stiffness dominates the edge block
VectorXd preconditioner_diag(const YMHState& s) {
  const auto& m = *s.bundle.mesh;
  const auto& fem = *s.bundle.fem;
  const double eps2 = s.epsilon * s.epsilon;
  const int V = m.num_vertices(), E = m.num_edges();
  VectorXd d = VectorXd::Zero(2 * V + E);
  for (int v = 0; v < V; ++v) d[2 * v] = d[2 * v + 1] = fem.lumpedMass[v] / eps2;
  for (int e = 0; e < E; ++e) {
    const int fa = m.edgeFace[e][0], fb = m.edgeFace[e][1];
    d[2 * V + e] = 2.0 * eps2 * (1.0 / fem.faceArea[fa] + 1.0 / fem.faceArea[fb]) +
                   2.0 * fem.cotanEdgeWeight[e];
  }
  for (int e = 0; e < E; ++e) {
    const int i = m.edges[e][0], j = m.edges[e][1];
    const double w = 2.0 * fem.cotanEdgeWeight[e];
    d[2 * i] += w;
    d[2 * i + 1] += w;
    d[2 * j] += w;
    d[2 * j + 1] += w;
  }
  return d.cwiseMax(1e-12);
}

}  // namespace

// Preconditioned Polak-Ribiere descent with a Barzilai-Borwein initial step
// and an Armijo backtracking line search; monotone by construction. Steps
// that would push a plaquette flux to the wrap branch are rejected, which
// preserves the degree exactly.
YMHSolveResult ymh_solve(const YMHState& start, const YMHSchedule& sched) {
  require(sched.gradTol > 0.0 && sched.initStep > 0.0, "ymh_solve: positive tolerances required");
  YMHSolveResult out;
  YMHState s = start;
  const int degree0 = ymh_degree(s.bundle);

  const VectorXd P = preconditioner_diag(s);
  VectorXd x = state_to_flat(s);
  VectorXd g = gradient_to_flat(ymh_gradient(s));
  VectorXd pg = g.cwiseQuotient(P);
  VectorXd dir = -pg;
  double E = ymh_energy(s);
  double gamma = sched.initStep;
  VectorXd xPrev, gPrev;

  for (int it = 0; it < sched.maxIter; ++it) {
    const double gn = g.norm();
    if (it % 50 == 0) out.log.push_back({it, E, gn});
    if (gn <= std::max(sched.gradTol, sched.polishFrom)) {
      out.converged = gn <= sched.gradTol;
      out.iterations = it;
      break;
    }

    double slope = dir.dot(g);
    if (slope >= 0.0) {  // lost descent: restart on the preconditioned gradient
      dir = -pg;
      slope = dir.dot(g);
    }

    if (xPrev.size() > 0) {
      const VectorXd sdiff = x - xPrev;
      const VectorXd ydiff = g - gPrev;
      const double sy = sdiff.dot(ydiff);
      if (sy > 1e-300) gamma = std::min(std::max(sdiff.squaredNorm() / sy, 1e-7), 1e3);
    }

    bool accepted = false;
    double step = gamma;
    for (int bt = 0; bt < 60; ++bt) {
      const VectorXd xt = x + step * dir;
      YMHState trial = flat_to_state(s, xt);
      if (fluxes_admissible(trial, sched.fluxGuard)) {
        const double Et = ymh_energy(trial);
        if (Et <= E + 1e-4 * step * slope) {  // slope < 0
          xPrev = x;
          gPrev = g;
          x = xt;
          s = trial;
          E = Et;
          const VectorXd gNew = gradient_to_flat(ymh_gradient(s));
          const VectorXd pgNew = gNew.cwiseQuotient(P);
          // Polak-Ribiere+ with automatic restart through the max(0, .)
          const double beta =
              std::max(0.0, pgNew.dot(gNew - g) / std::max(pg.dot(g), 1e-300));
          dir = -pgNew + beta * dir;
          g = gNew;
          pg = pgNew;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.iterations = it;
      break;
    }

    if (sched.projectEvery > 0 && (it + 1) % sched.projectEvery == 0) {
      s = coulomb_project(s);
      x = state_to_flat(s);
      g = gradient_to_flat(ymh_gradient(s));
      pg = g.cwiseQuotient(P);
      dir = -pg;
      xPrev.resize(0);
      gPrev.resize(0);
    }
    out.iterations = it + 1;
  }

  // Gauge-projected polish: near the minimum the Armijo test on the energy
  // drowns in roundoff, so accept Barzilai-Borwein steps on gradient-norm
  // progress instead. Energy changes here sit below 1e-10 (1 + E).
  if (!out.converged || gradient_to_flat(ymh_gradient(s)).norm() > sched.gradTol) {
    s = coulomb_project(s);
    x = state_to_flat(s);
    g = gradient_to_flat(ymh_gradient(s));
    double gn = g.norm();
    double gamma = sched.initStep;
    VectorXd xPrev2, gPrev2;
    for (int it = 0; it < sched.maxIter && gn > sched.gradTol; ++it) {
      if (xPrev2.size() > 0) {
        const VectorXd sdiff = x - xPrev2;
        const VectorXd ydiff = (g - gPrev2).cwiseQuotient(P);
        const double sy = sdiff.dot(ydiff);
        if (sy > 1e-300) gamma = std::min(std::max(sdiff.squaredNorm() / sy, 1e-9), 1e3);
      }
      bool accepted = false;
      double step = gamma;
      for (int bt = 0; bt < 60; ++bt) {
        const VectorXd xt = x - step * g.cwiseQuotient(P);
        YMHState trial = flat_to_state(s, xt);
        if (fluxes_admissible(trial, sched.fluxGuard)) {
          const VectorXd gt = gradient_to_flat(ymh_gradient(trial));
          if (gt.norm() <= gn * (1.0 + 1e-3) || gt.norm() <= sched.gradTol) {
            xPrev2 = x;
            gPrev2 = g;
            x = xt;
            s = trial;
            g = gt;
            gn = gt.norm();
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      ++out.iterations;
      if (it % 50 == 0) out.log.push_back({out.iterations, ymh_energy(s), gn});
      if (!accepted) break;
    }
  }

  require(ymh_degree(s.bundle) == degree0, "ymh_solve: degree changed during descent");
  out.state = s;
  out.finalGradNorm = gradient_to_flat(ymh_gradient(s)).norm();
  out.converged = out.finalGradNorm <= sched.gradTol;
  out.log.push_back({out.iterations, ymh_energy(s), out.finalGradNorm});
  return out;
}

}  // namespace stab::ymh

// Copyright 2026 The symext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"
#include "oracles.hpp"
#include "symext/channels.hpp"
#include "symext/cli.hpp"
#include "symext/extension.hpp"
#include "symext/oracle.hpp"

using namespace symext;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Full-rank boundary point on the segment from I/4 to an entangled mixture.
DensityOp4 boundary_point(Rng& rng) {
  for (;;) {
    const DensityOp4 pure = random_density<4>(rng, 1);
    const DensityOp4 noise = random_density<4>(rng, 4);
    const DensityOp4 rho(pure.mat() * 0.7 + noise.mat() * 0.3);
    if (f_value(rho) >= -1e-6) continue;
    return DensityOp4(ray_point(rho.mat(), bisect_f_on_ray(rho.mat(), 0.0, 1.0)));
  }
}

DensityOp4 member_of_c(Rng& rng, std::size_t rank) {
  for (;;) {
    const DensityOp4 rho = random_density<4>(rng, rank);
    if (f_value(rho) >= 0.0) return rho;
  }
}

template <std::size_t N>
double spectral_norm(const Mat<N>& herm) {
  const auto e = eigenvalues(HermMat<N>(herm));
  return std::max(std::abs(e.front()), std::abs(e.back()));
}

Outcome werner_threshold() {
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"symext", "sweep-werner", "--steps", "100"}, out, err);
  const double elapsed = seconds_since(t0);
  const std::string s = out.str();
  const auto pos = s.find("# root p=");
  if (code != 0 || pos == std::string::npos) return {false, "no root reported"};
  const double p = std::stod(s.substr(pos + 9));
  const double fid = std::stod(s.substr(s.find("fidelity=", pos) + 9));
  const bool ok = std::abs(p - 2.0 / 3.0) <= 1e-9 && std::abs(fid - 0.75) <= 1e-9 && elapsed < 1.0;
  return {ok, fmt("p=%.15f fidelity=%.15f in %.3fs", p, fid, elapsed)};
}

Outcome h_golden() {
  const Mat4 h = hyperplane_operator(werner(2.0 / 3.0)).mat();
  const double err = (h - oracle::werner_boundary_h_times9() * (1.0 / 9.0)).max_abs();
  return {err <= 1e-12, fmt("max entry error %.2e", err)};
}

Outcome ground_space_golden() {
  const auto g = ground_space(three_qubit_hamiltonian(werner(2.0 / 3.0)));
  if (g.size() != 2) return {false, fmt("ground space dimension %.0f", double(g.size()))};
  Vec<8> e1{}, e2{};
  const double s6 = std::sqrt(6.0);
  e1[0] = 2.0 / s6;  // |000>
  e1[5] = 1.0 / s6;  // |101>
  e1[6] = 1.0 / s6;  // |110>
  e2[7] = 2.0 / s6;  // |111>
  e2[2] = 1.0 / s6;  // |010>
  e2[1] = 1.0 / s6;  // |001>
  const Mat8 pg = Mat8::projector(g[0]) + Mat8::projector(g[1]);
  const Mat8 pe = Mat8::projector(e1) + Mat8::projector(e2);
  // Largest principal angle: ||P_G - P_E||_2 = sin(theta_max).
  const double angle = std::asin(std::min(1.0, spectral_norm(Mat8(pg - pe))));
  const double marg = (oracle::trace_out_bprime(pg * 0.5) - werner(2.0 / 3.0).mat()).max_abs();
  return {angle < 1e-8 && marg <= 1e-10, fmt("max angle %.2e, marginal error %.2e", angle, marg)};
}

Outcome maximally_mixed() {
  const double err = std::abs(f_value(DensityOp4(Mat4::identity() * 0.25)) - 0.5);
  return {err <= 1e-12, fmt("|f(I/4) - 1/2| = %.2e", err)};
}

Outcome oracle_agreement() {
  const auto t0 = Clock::now();
  int considered = 0, agree = 0;
  std::string log;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const DensityOp4 rho = random_density<4>(seed, 4);
    const double f = f_value(rho);
    if (std::abs(f) <= 1e-4) continue;
    ++considered;
    const OracleReport r = dykstra_extend(rho);
    if ((r.status == OracleStatus::Feasible) == (f > 0.0)) {
      ++agree;
    } else {
      log += fmt("    disagreement seed=%.0f f=%.3e gap=%.2e\n", double(seed), f, r.final_gap);
    }
  }
  if (!log.empty()) std::fputs(log.c_str(), stdout);
  const double rate = static_cast<double>(agree) / considered;
  const double elapsed = seconds_since(t0);
  return {rate >= 0.995 && elapsed < 600.0,
          fmt("%.4f agreement on %.0f states in %.1fs", rate, considered, elapsed)};
}

Outcome extension_certificates() {
  const auto t0 = Clock::now();
  double marg = 0.0, swap = 0.0, min_eig = 1.0;
  int analytic = 0, done = 0;
  for (std::uint64_t seed = 10000; done < 200; ++seed) {
    const DensityOp4 rho = random_density<4>(seed, 2 + seed % 3);
    if (f_value(rho) < 1e-6) continue;
    ++done;
    const ExtensionCertificate c = extend(rho);
    if (c.path == ExtensionPath::Analytic) ++analytic;
    marg = std::max(marg, c.marginal_residual);
    swap = std::max(swap, c.swap_residual);
    min_eig = std::min(min_eig, c.min_eig);
  }
  const double elapsed = seconds_since(t0);
  const bool ok = marg <= 1e-7 && swap <= 1e-7 && min_eig >= -1e-8 && elapsed < 300.0;
  return {ok, fmt("marginal %.2e, swap %.2e, min eig %.2e", marg, swap, min_eig) +
                  fmt(", %.0f/200 analytic, %.1fs", analytic, elapsed)};
}

Outcome supporting_hyperplanes() {
  Rng rng(7007);
  double worst_member = std::numeric_limits<double>::infinity(), worst_self = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DensityOp4 sigma = boundary_point(rng);
    const HermMat<4> h = hyperplane_operator(sigma);
    worst_self = std::max(worst_self, std::abs(hs_inner(h.mat(), sigma.mat())));
    for (int j = 0; j < 100; ++j) {
      const DensityOp4 rho = member_of_c(rng, j % 4 == 0 ? 2 : 4);
      worst_member = std::min(worst_member, hs_inner(h.mat(), rho.mat()));
    }
  }
  return {worst_member >= -1e-9 && worst_self <= 1e-9,
          fmt("min tr(H rho) %.2e, max |tr(H sigma)| %.2e", worst_member, worst_self)};
}

Outcome boundary_identities() {
  Rng rng(8008);
  double m2 = 0.0, m3 = 0.0, st = 0.0, arbitrary = 0.0;
  for (int i = 0; i < 100; ++i) {
    const IdentityResiduals r = boundary_identity_residuals(boundary_point(rng));
    m2 = std::max(m2, r.minors2);
    m3 = std::max(m3, r.minors3);
    st = std::max(st, r.schur_trace);
    const DensityOp4 any = random_density<4>(rng, 4);
    arbitrary = std::max(arbitrary, hyperplane_identity_residuals(hyperplane_operator(any)).minors2);
  }
  const bool ok = m2 <= 1e-8 && m3 <= 1e-8 && st <= 1e-8 && arbitrary <= 1e-8;
  return {ok, fmt("2x2 minors %.2e, 3x3 minors %.2e, Schur trace %.2e", m2, m3, st) +
                  fmt(", 2x2 minors off-boundary %.2e", arbitrary)};
}

Outcome boundary_splits() {
  Rng rng(9009);
  double recon = 0.0, third = 0.0, fmin = 1.0;
  bool two = true;
  for (int i = 0; i < 100; ++i) {
    const DensityOp4 sigma = boundary_point(rng);
    const Decomposition d = decompose_full_rank_boundary(sigma);
    two = two && d.size() == 2;
    recon = std::max(recon, (recombine(d) - sigma.mat()).frobenius_norm());
    for (const auto& p : d) {
      third = std::max(third, eigenvalues(p.state.herm())[2]);
      fmin = std::min(fmin, f_value(p.state));
    }
  }
  const bool ok = two && recon <= 1e-8 && third < 1e-8 && fmin >= -1e-8;
  return {ok, fmt("reconstruction %.2e, third eigenvalue %.2e, min f %.2e", recon, third, fmin)};
}

Outcome pqr_suite() {
  Rng rng(1010);
  double round_trip = 0.0;
  int outside = 0, agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const DensityOp4 rho = random_density<4>(rng, 1 + i % 4);
    const PqrTriple t = factor_pqr(rho);
    round_trip = std::max(round_trip, (assemble_pqr(t) - rho.mat()).max_abs());
    const double f = f_value(rho);
    if (std::abs(f) <= 1e-8) continue;
    ++outside;
    if ((pqr_slack(t) > 0.0) == (f > 0.0)) ++agree;
  }
  return {round_trip <= 1e-10 && agree == outside,
          fmt("round trip %.2e, slack sign agrees %.0f/%.0f", round_trip, agree, outside)};
}

Outcome rank3_suite() {
  Rng rng(1111);
  double recon = 0.0, quad = 0.0, fmin = 1.0;
  int max_rank = 0;
  for (int i = 0; i < 100; ++i) {
    const DensityOp4 rho = member_of_c(rng, 3);
    const Rank3Decomposition d = decompose_rank3(rho);
    recon = std::max(recon, (recombine(d.parts) - rho.mat()).frobenius_norm());
    quad = std::max(quad, d.quadratic_coefficient);
    for (const auto& p : d.parts) {
      max_rank = std::max(max_rank, numerical_rank(p.state.herm(), 1e-8));
      fmin = std::min(fmin, f_value(p.state));
    }
  }
  const bool ok = recon <= 1e-8 && quad <= 1e-12 && max_rank <= 2 && fmin >= -1e-8;
  return {ok, fmt("reconstruction %.2e, quadratic coefficient %.2e, min f %.2e", recon, quad, fmin) +
                  fmt(", max piece rank %.0f", max_rank)};
}

Outcome amplitude_damping_threshold() {
  std::ifstream in(SYMEXT_FIXTURES "/amplitude_damping_choi.json");
  if (!in) return {false, "missing Choi fixture"};
  const nlohmann::json fx = nlohmann::json::parse(in);
  double fixture_err = 0.0;
  for (const auto& [key, m] : fx["choi"].items()) {
    const double g = std::stod(key);
    const Mat4 golden = matrix_from_json<4>(m);
    fixture_err = std::max(fixture_err, (oracle::amplitude_damping_choi(g) - golden).max_abs());
    fixture_err = std::max(
        fixture_err, (kraus_to_choi(amplitude_damping(g)).state().mat() - golden).max_abs());
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (f_value(oracle::amplitude_damping_choi(mid)) < 0.0 ? lo : hi) = mid;
  }
  const double golden_root = 0.5 * (lo + hi);
  const auto cross = antidegradability_crossings(amplitude_damping, 0.0, 1.0, 20);
  const double lib_root = cross.size() == 1 ? cross[0] : -1.0;
  const bool ok = fixture_err <= 1e-15 && std::abs(golden_root - 0.5) <= 1e-9 &&
                  std::abs(lib_root - 0.5) <= 1e-9;
  return {ok, fmt("golden root %.15f, library root %.15f, fixture error %.1e", golden_root,
                  lib_root, fixture_err)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Werner threshold p = 2/3, fidelity 3/4", werner_threshold},
      {"hyperplane operator golden matrix", h_golden},
      {"three-qubit ground space golden basis", ground_space_golden},
      {"f(I/4) = 1/2", maximally_mixed},
      {"criterion and oracle agreement", oracle_agreement},
      {"extension certificates", extension_certificates},
      {"supporting hyperplanes", supporting_hyperplanes},
      {"boundary operator identities", boundary_identities},
      {"full-rank boundary splits into rank-2 states", boundary_splits},
      {"PQR factorization and slack sign", pqr_suite},
      {"rank-3 decomposition", rank3_suite},
      {"amplitude damping threshold", amplitude_damping_threshold},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s (%s)\n", index, o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}

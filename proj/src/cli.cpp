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

#include "symext/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "symext/channels.hpp"
#include "symext/extension.hpp"
#include "symext/oracle.hpp"

namespace symext::cli {

namespace {

using nlohmann::json;

constexpr double kAgreementBand = 1e-4;

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json header(const char* command) { return {{"schema", kSchema}, {"command", command}}; }

json oracle_json(const OracleReport& r) {
  return {{"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"final_gap", r.final_gap}};
}

json certificate_json(const ExtensionCertificate& c) {
  json j = {{"path", to_string(c.path)},
            {"terms", c.terms},
            {"marginal_residual", c.marginal_residual},
            {"min_eig", c.min_eig},
            {"swap_residual", c.swap_residual},
            {"ext", matrix_to_json(c.ext.mat())}};
  if (!c.fallback_reason.empty()) j["fallback_reason"] = c.fallback_reason;
  return j;
}

// Oracle verdict against the criterion; "band" when |f| is too small to call.
std::string agreement(double f, OracleStatus s) {
  if (std::abs(f) <= kAgreementBand) return "band";
  return (f > 0.0) == (s == OracleStatus::Feasible) ? "agree" : "disagree";
}

double tol_from_env() {
  const char* env = std::getenv("SYMEXT_TOL");
  if (env == nullptr || *env == '\0') return kTolF;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0))
    throw Error(ErrorCode::ParseError, std::string("SYMEXT_TOL is not a positive number: ") + env);
  return v;
}

int cmd_check(const std::string& path, bool oracle, bool witness, bool extend_flag, double tol_f,
              std::ostream& out) {
  const DensityOp4 rho = read_state(path);
  const Verdict v = classify(rho, tol_f);
  json j = header("check");
  j["f"] = v.f_value;
  j["class"] = to_string(v.cls);
  j["rank"] = v.rank;
  j["extendible"] = v.extendible();
  j["tol_f"] = tol_f;
  if (witness) {
    if (v.witness) {
      j["witness"] = {{"matrix", matrix_to_json(v.witness->mat())},
                      {"trace_with_state", hs_inner(v.witness->mat(), rho.mat())}};
    } else {
      j["witness"] = nullptr;
    }
  }
  if (extend_flag) {
    j["certificate"] = v.extendible() ? certificate_json(extend(rho, tol_f)) : json(nullptr);
  }
  if (oracle) j["oracle"] = oracle_json(dykstra_extend(rho));
  emit(out, j);
  return v.extendible() ? kExitOk : kExitNo;
}

int cmd_extend(const std::string& path, double tol_f, std::ostream& out) {
  const DensityOp4 rho = read_state(path);
  json j = header("extend");
  const double f = f_value(rho);
  j["f"] = f;
  if (f < -tol_f) {
    j["certificate"] = nullptr;
    emit(out, j);
    return kExitNo;
  }
  j["certificate"] = certificate_json(extend(rho, tol_f));
  emit(out, j);
  return kExitOk;
}

int cmd_sweep_werner(double from, double to, int steps, bool oracle, double tol_f,
                     std::ostream& out, std::ostream& err) {
  if (!(from >= 0.0 && from < to && to <= 1.0))
    throw Error(ErrorCode::RangeError, "need 0 <= from < to <= 1");
  if (steps < 1) throw Error(ErrorCode::RangeError, "steps must be >= 1");
  out << "# " << kSchema << " sweep-werner\n";
  out << "p,fidelity,f_value,class";
  if (oracle) out << ",oracle_status,agreement";
  out << '\n';
  for (int i = 0; i <= steps; ++i) {
    const double p = i == steps ? to : from + (to - from) * i / steps;
    const DensityOp4 rho = werner(p);
    const Verdict v = classify(rho, tol_f);
    out << num(p) << ',' << num((1.0 + 3.0 * p) / 4.0) << ',' << num(v.f_value) << ','
        << to_string(v.cls);
    if (oracle) {
      const OracleReport r = dykstra_extend(rho);
      out << ',' << to_string(r.status) << ',' << agreement(v.f_value, r.status);
    }
    out << '\n';
  }
  auto f_at = [](double p) { return f_value(werner(p)); };
  if ((f_at(from) >= 0.0) != (f_at(to) >= 0.0)) {
    double a = from, b = to;
    const bool a_ok = f_at(a) >= 0.0;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      if ((f_at(mid) >= 0.0) == a_ok)
        a = mid;
      else
        b = mid;
    }
    const double root = 0.5 * (a + b);
    out << "# root p=" << num(root) << " fidelity=" << num((1.0 + 3.0 * root) / 4.0) << '\n';
    err << std::setprecision(6) << "f-root at p = " << root
        << ", fidelity = " << (1.0 + 3.0 * root) / 4.0 << '\n';
  } else {
    out << "# root none\n";
    err << "no sign change of f on [" << from << ", " << to << "]\n";
  }
  return kExitOk;
}

struct SurveyRow {
  std::uint64_t seed = 0;
  double f = 0.0;
  ExtClass cls = ExtClass::InteriorExtendible;
  int rank = 0;
  std::optional<OracleStatus> oracle;
};

int cmd_survey(int count, std::uint64_t seed, int rank, double oracle_fraction, int threads,
               const std::string& summary_path, double tol_f, std::ostream& out,
               std::ostream& err) {
  if (count < 1) throw Error(ErrorCode::RangeError, "count must be >= 1");
  if (rank < 1 || rank > 4) throw Error(ErrorCode::RangeError, "rank must lie in 1..4");
  if (!(oracle_fraction >= 0.0 && oracle_fraction <= 1.0))
    throw Error(ErrorCode::RangeError, "oracle fraction must lie in [0, 1]");
  auto sampled = [&](int i) {
    return std::floor((i + 1) * oracle_fraction) > std::floor(i * oracle_fraction);
  };

  std::vector<SurveyRow> rows(count);
  auto work = [&](int first, int stride) {
    for (int i = first; i < count; i += stride) {
      SurveyRow& r = rows[i];
      r.seed = seed + static_cast<std::uint64_t>(i);
      const DensityOp4 rho = random_density<4>(r.seed, static_cast<std::size_t>(rank));
      r.f = f_value(rho);
      r.rank = numerical_rank(rho);
      r.cls = r.f < -tol_f ? ExtClass::NonExtendible
              : (std::abs(r.f) <= tol_f || r.rank < 4) ? ExtClass::BoundaryExtendible
                                                       : ExtClass::InteriorExtendible;
      if (sampled(i)) r.oracle = dykstra_extend(rho).status;
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min(n, count);
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work, t, n);
    work(0, n);
  }

  out << "# " << kSchema << " survey\n";
  out << "index,seed,f_value,class,rank,oracle_status,agreement\n";
  int extendible = 0, boundary = 0, considered = 0, agree = 0, sampled_n = 0;
  json disagreements = json::array();
  for (int i = 0; i < count; ++i) {
    const SurveyRow& r = rows[i];
    if (r.cls != ExtClass::NonExtendible) ++extendible;
    if (r.cls == ExtClass::BoundaryExtendible) ++boundary;
    out << i << ',' << r.seed << ',' << num(r.f) << ',' << to_string(r.cls) << ',' << r.rank
        << ',';
    if (r.oracle) {
      ++sampled_n;
      const std::string a = agreement(r.f, *r.oracle);
      if (a != "band") {
        ++considered;
        if (a == "agree")
          ++agree;
        else
          disagreements.push_back({{"index", i}, {"seed", r.seed}, {"f", r.f},
                                   {"oracle_status", to_string(*r.oracle)}});
      }
      out << to_string(*r.oracle) << ',' << a;
    } else {
      out << ',';
    }
    out << '\n';
  }
  json s = header("survey");
  s["count"] = count;
  s["seed"] = seed;
  s["rank"] = rank;
  s["rng"] = Rng::kName;
  s["state_seed"] = "seed + index";
  s["extendible_fraction"] = static_cast<double>(extendible) / count;
  s["boundary_fraction"] = static_cast<double>(boundary) / count;
  s["oracle_sampled"] = sampled_n;
  s["oracle_outside_band"] = considered;
  s["oracle_agreement_rate"] = considered > 0 ? json(static_cast<double>(agree) / considered)
                                              : json(nullptr);
  s["disagreements"] = disagreements;
  if (summary_path.empty()) {
    emit(err, s);
  } else {
    std::ofstream f(summary_path);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + summary_path);
    emit(f, s);
    err << std::setprecision(4) << "extendible fraction " << 100.0 * extendible / count << "%";
    if (considered > 0) err << ", oracle agreement " << 100.0 * agree / considered << "%";
    err << '\n';
  }
  return kExitOk;
}

Mat2 unitary_from_angles(double theta, double phi, double chi) {
  const Cplx i(0.0, 1.0);
  Mat2 u;
  u(0, 0) = std::exp(i * phi) * std::cos(theta);
  u(0, 1) = std::exp(i * chi) * std::sin(theta);
  u(1, 0) = -std::exp(-i * chi) * std::sin(theta);
  u(1, 1) = std::exp(-i * phi) * std::cos(theta);
  return u;
}

int cmd_face(const std::string& path, int samples, std::uint64_t seed, double tol_f,
             std::ostream& out, std::ostream& err) {
  if (samples < 1) throw Error(ErrorCode::RangeError, "samples must be >= 1");
  const DensityOp4 sigma = read_state(path);
  if (numerical_rank(sigma) < 4) throw Error(ErrorCode::NotFullRank, "state is rank deficient");
  const double f0 = f_value(sigma);
  if (std::abs(f0) > tol_f) throw Error(ErrorCode::NotBoundary, "state is not on the boundary", f0);
  const HermMat<4> h = hyperplane_operator(sigma);

  Rng rng(seed);
  std::ostringstream body;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double theta = std::asin(std::sqrt(rng.uniform()));
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double chi = 2.0 * std::numbers::pi * rng.uniform();
    const double t = rng.uniform();
    const Mat2 u = unitary_from_angles(theta, phi, chi);
    const FaceCoefficients k = face_coefficients(sigma, u);
    const double n1 = std::abs(k.k1), n2 = std::abs(k.k2);
    // x^2, y^2 run linearly between the two rank-2 endpoints.
    const std::array<std::pair<const char*, double>, 3> pts = {
        {{"endpoint1", 0.0}, {"interior", t}, {"endpoint2", 1.0}}};
    for (const auto& [kind, w] : pts) {
      const double x = std::sqrt((1.0 - w) + w * n1 * n1);
      const double y = std::sqrt((1.0 - w) + w * n2 * n2);
      const DensityOp4 rho = face_state(sigma, {u, x, y}, tol_f);
      const double trh = hs_inner(h.mat(), rho.mat());
      worst = std::max(worst, std::abs(trh));
      body << s << ',' << kind << ',' << num(theta) << ',' << num(phi) << ',' << num(chi) << ','
           << num(x) << ',' << num(y) << ',' << num(f_value(rho)) << ',' << num(trh) << ','
           << numerical_rank(rho.herm(), 1e-8) << '\n';
    }
  }
  out << "# " << kSchema << " face\n";
  out << "sample,kind,theta,phi,chi,x,y,f_value,tr_H_rho,rank\n" << body.str();
  err << std::setprecision(3) << "max |tr(H rho)| over face samples: " << worst << '\n';
  return kExitOk;
}

int cmd_channel(const std::string& path, const std::string& sweep, double from, double to,
                int steps, double tol_f, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  if (sweep.empty()) {
    const KrausSet k = channel_from_json(spec);
    const ChoiState choi = kraus_to_choi(k);
    const Verdict v = classify(choi.state(), tol_f);
    json j = header("channel");
    j["convention"] = "choi reference on A, channel output on B; extension of B";
    j["f"] = v.f_value;
    j["class"] = to_string(v.cls);
    j["antidegradable"] = v.extendible();
    j["choi"] = matrix_to_json(choi.state().mat());
    emit(out, j);
    return v.extendible() ? kExitOk : kExitNo;
  }
  if (!(from < to)) throw Error(ErrorCode::RangeError, "need from < to");
  if (steps < 1) throw Error(ErrorCode::RangeError, "steps must be >= 1");
  auto family = [&](double v) { return channel_with_param(spec, sweep, v); };
  out << "# " << kSchema << " channel-sweep\n";
  out << sweep << ",f_value,class\n";
  for (int i = 0; i <= steps; ++i) {
    const double v = i == steps ? to : from + (to - from) * i / steps;
    const Verdict verdict = classify(kraus_to_choi(family(v)).state(), tol_f);
    out << num(v) << ',' << num(verdict.f_value) << ',' << to_string(verdict.cls) << '\n';
  }
  const std::vector<double> cross = antidegradability_crossings(family, from, to, steps);
  for (double c : cross) {
    out << "# crossing " << sweep << '=' << num(c) << '\n';
    err << std::setprecision(6) << "anti-degradability threshold at " << sweep << " = " << c
        << '\n';
  }
  if (cross.empty()) {
    out << "# crossing none\n";
    err << "no anti-degradability threshold in range\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric-extension toolkit for two-qubit states", "symext"};
  app.require_subcommand(1);

  std::string state_path, spec_path, summary_path, sweep_param;
  bool oracle = false, witness = false, extend_flag = false;
  double from = 0.0, to = 1.0, oracle_fraction = 0.0;
  int steps = 100, count = 1000, rank = 4, samples = 100, threads = 0;
  std::uint64_t seed = 42;

  auto* check = app.add_subcommand("check", "Classify a state file");
  check->add_option("state", state_path, "State JSON file")->required();
  check->add_flag("--oracle", oracle, "Also run the projection oracle");
  check->add_flag("--witness", witness, "Emit a separating witness when not extendible");
  check->add_flag("--extend", extend_flag, "Emit an extension certificate when extendible");

  auto* ext = app.add_subcommand("extend", "Construct a symmetric extension");
  ext->add_option("state", state_path, "State JSON file")->required();

  auto* sweep = app.add_subcommand("sweep-werner", "Sweep the Werner family");
  sweep->add_option("--from", from, "Lower end of p")->capture_default_str();
  sweep->add_option("--to", to, "Upper end of p")->capture_default_str();
  sweep->add_option("--steps", steps, "Grid intervals")->capture_default_str();
  sweep->add_flag("--oracle", oracle, "Run the oracle at each grid point");

  auto* survey = app.add_subcommand("survey", "Classify seeded random states");
  survey->add_option("--count", count, "Number of states")->capture_default_str();
  survey->add_option("--seed", seed, "Base seed; state i uses seed + i")->capture_default_str();
  survey->add_option("--rank", rank, "Rank of the sampled states")->capture_default_str();
  survey->add_option("--oracle-fraction", oracle_fraction, "Fraction checked by the oracle")
      ->capture_default_str();
  survey->add_option("--threads", threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  survey->add_option("--summary", summary_path, "Write the summary JSON here (default stderr)");

  auto* face = app.add_subcommand("face", "Sample the face through a boundary state");
  face->add_option("state", state_path, "State JSON file")->required();
  face->add_option("--samples", samples, "Number of face unitaries")->capture_default_str();
  face->add_option("--seed", seed, "Sampling seed")->capture_default_str();

  auto* channel = app.add_subcommand("channel", "Anti-degradability of a qubit channel");
  channel->add_option("spec", spec_path, "Channel spec JSON file")->required();
  channel->add_option("--sweep", sweep_param, "Family parameter to sweep");
  channel->add_option("--from", from, "Sweep start")->capture_default_str();
  channel->add_option("--to", to, "Sweep end")->capture_default_str();
  channel->add_option("--steps", steps, "Sweep intervals")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    const double tol_f = tol_from_env();
    if (check->parsed()) return cmd_check(state_path, oracle, witness, extend_flag, tol_f, out);
    if (ext->parsed()) return cmd_extend(state_path, tol_f, out);
    if (sweep->parsed()) return cmd_sweep_werner(from, to, steps, oracle, tol_f, out, err);
    if (survey->parsed())
      return cmd_survey(count, seed, rank, oracle_fraction, threads, summary_path, tol_f, out,
                        err);
    if (face->parsed()) return cmd_face(state_path, samples, seed, tol_f, out, err);
    if (channel->parsed())
      return cmd_channel(spec_path, sweep_param, from, to, steps, tol_f, out, err);
  } catch (const Error& e) {
    json j = header("error");
    j["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    if (!std::isnan(e.residual())) j["error"]["residual"] = e.residual();
    emit(out, j);
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    json j = header("error");
    j["error"] = {{"code", "Internal"}, {"message", e.what()}};
    emit(out, j);
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace symext::cli

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

#include "symext/states.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

namespace symext {

Mat2 partial_trace(const Mat4& m, Party keep) {
  Mat2 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        out(i, j) += keep == Party::A ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
  return out;
}

DensityOp2 partial_trace(const DensityOp4& rho, Party keep) {
  return DensityOp2(partial_trace(rho.mat(), keep));
}

Mat4 partial_trace3(const Mat8& m, Pair keep) {
  Mat4 out;
  auto idx = [](std::size_t a, std::size_t b, std::size_t c) { return 4 * a + 2 * b + c; };
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t xp = 0; xp < 2; ++xp)
        for (std::size_t yp = 0; yp < 2; ++yp)
          for (std::size_t t = 0; t < 2; ++t) {
            Cplx v;
            switch (keep) {
              case Pair::AB: v = m(idx(x, y, t), idx(xp, yp, t)); break;
              case Pair::ABprime: v = m(idx(x, t, y), idx(xp, t, yp)); break;
              case Pair::BBprime: v = m(idx(t, x, y), idx(t, xp, yp)); break;
            }
            out(2 * x + y, 2 * xp + yp) += v;
          }
  return out;
}

DensityOp4 partial_trace3(const DensityOp8& rho, Pair keep) {
  return DensityOp4(partial_trace3(rho.mat(), keep));
}

const Mat8& swap_bbprime_matrix() {
  static const Mat8 s = [] {
    Mat8 m;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t c = 0; c < 2; ++c) m(4 * a + 2 * c + b, 4 * a + 2 * b + c) = 1.0;
    return m;
  }();
  return s;
}

Mat8 swap_bbprime(const Mat8& m) {
  // Conjugation by a permutation: relabel rows and columns.
  static constexpr std::array<std::size_t, 8> perm = {0, 2, 1, 3, 4, 6, 5, 7};
  Mat8 out;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) out(perm[i], perm[j]) = m(i, j);
  return out;
}

DensityOp8 swap_bbprime(const DensityOp8& rho) { return DensityOp8(swap_bbprime(rho.mat())); }

Vec<8> swap_bbprime(const Vec<8>& v) {
  static constexpr std::array<std::size_t, 8> perm = {0, 2, 1, 3, 4, 6, 5, 7};
  Vec<8> out;
  for (std::size_t i = 0; i < 8; ++i) out[perm[i]] = v[i];
  return out;
}

Mat8 swap_symmetrize(const Mat8& m) { return (m + swap_bbprime(m)) * 0.5; }

Vec<4> bell_state(int index) {
  const double s = 1.0 / std::numbers::sqrt2;
  switch (index) {
    case 0: return {s, 0.0, 0.0, s};
    case 1: return {s, 0.0, 0.0, -s};
    case 2: return {0.0, s, s, 0.0};
    case 3: return {0.0, s, -s, 0.0};
  }
  throw Error(ErrorCode::RangeError, "Bell index must be 0..3");
}

DensityOp4 werner(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::RangeError, "Werner parameter must lie in [0, 1]", p);
  return DensityOp4(Mat4::identity() * ((1.0 - p) / 4.0) +
                    Mat4::projector(bell_state(0)) * p);
}

DensityOp4 bell_diagonal(const std::array<double, 4>& probs) {
  double sum = 0.0;
  for (double q : probs) {
    if (!(q >= 0.0)) throw Error(ErrorCode::RangeError, "negative Bell weight", q);
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ErrorCode::RangeError, "Bell weights do not sum to 1", sum - 1.0);
  Mat4 m;
  for (int k = 0; k < 4; ++k) m += Mat4::projector(bell_state(k)) * probs[k];
  return DensityOp4(m);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

template <std::size_t N>
DensityOp<N> random_density(Rng& rng, std::size_t rank) {
  if (rank < 1 || rank > N)
    throw Error(ErrorCode::RangeError, "rank must lie in 1..dim", static_cast<double>(rank));
  std::array<Vec<N>, N> cols{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < rank; ++k) cols[k][i] = rng.complex_normal();
  Mat<N> m;
  for (std::size_t k = 0; k < rank; ++k) m += Mat<N>::projector(cols[k]);
  return DensityOp<N>::normalized(m);
}

template <std::size_t N>
DensityOp<N> random_density(std::uint64_t seed, std::size_t rank) {
  Rng rng(seed);
  return random_density<N>(rng, rank);
}

template DensityOp<2> random_density<2>(Rng&, std::size_t);
template DensityOp<4> random_density<4>(Rng&, std::size_t);
template DensityOp<8> random_density<8>(Rng&, std::size_t);
template DensityOp<2> random_density<2>(std::uint64_t, std::size_t);
template DensityOp<4> random_density<4>(std::uint64_t, std::size_t);
template DensityOp<8> random_density<8>(std::uint64_t, std::size_t);

Mat2 random_unitary2(Rng& rng) {
  std::array<Vec<2>, 2> cols;
  for (auto& c : cols) c = {rng.complex_normal(), rng.complex_normal()};
  gram_schmidt(cols, 2, 0.0);
  Mat2 u;
  u.set_column(0, cols[0]);
  u.set_column(1, cols[1]);
  return u;
}

Mat4 local_conjugate(const Mat4& m, const Mat2& ua, const Mat2& ub) {
  const Mat4 l = kron(ua, ub);
  return l * m * l.adjoint();
}

template <std::size_t N>
nlohmann::json matrix_to_json(const Mat<N>& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (std::size_t i = 0; i < N; ++i) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ii = nlohmann::json::array();
    for (std::size_t j = 0; j < N; ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", N}, {"re", re}, {"im", im}};
}

template <std::size_t N>
Mat<N> matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "state must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw Error(ErrorCode::ParseError, "missing integer field 'dim'");
  if (j["dim"].get<long long>() != static_cast<long long>(N))
    throw Error(ErrorCode::ParseError, "dim is " + j["dim"].dump() + ", expected " +
                                           std::to_string(N));
  Mat<N> m;
  for (const char* part : {"re", "im"}) {
    if (!j.contains(part) || !j[part].is_array() || j[part].size() != N)
      throw Error(ErrorCode::ParseError,
                  std::string("field '") + part + "' must be a " + std::to_string(N) +
                      "-row array");
    for (std::size_t r = 0; r < N; ++r) {
      const auto& row = j[part][r];
      if (!row.is_array() || row.size() != N)
        throw Error(ErrorCode::ParseError, std::string(part) + " row " + std::to_string(r) +
                                               " must have " + std::to_string(N) + " entries");
      for (std::size_t c = 0; c < N; ++c) {
        if (!row[c].is_number())
          throw Error(ErrorCode::ParseError, std::string(part) + " entry at row " +
                                                 std::to_string(r) + ", column " +
                                                 std::to_string(c) + " is not a number");
        const double v = row[c].get<double>();
        if (std::string_view(part) == "re")
          m(r, c).real(v);
        else
          m(r, c).imag(v);
      }
    }
  }
  return m;
}

template nlohmann::json matrix_to_json(const Mat<2>&);
template nlohmann::json matrix_to_json(const Mat<4>&);
template nlohmann::json matrix_to_json(const Mat<8>&);
template Mat<2> matrix_from_json<2>(const nlohmann::json&);
template Mat<4> matrix_from_json<4>(const nlohmann::json&);
template Mat<8> matrix_from_json<8>(const nlohmann::json&);

DensityOp4 state_from_json(const nlohmann::json& j) { return DensityOp4(matrix_from_json<4>(j)); }

DensityOp4 read_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return state_from_json(j);
}

void write_state(const DensityOp4& rho, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << matrix_to_json(rho.mat()).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace symext

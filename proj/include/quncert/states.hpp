#pragma once

// Named states and seeded random-state samplers, plus the key=value StateSpec
// form used on the command line ("family=werner r=0.8").

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quncert/common.hpp"
#include "quncert/linalg.hpp"
#include "quncert/random.hpp"

namespace quncert {

using State = std::variant<DensityMatrix, PureState>;

inline DensityMatrix to_density(const State& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return DensityMatrix::from_pure(*psi);
  return std::get<DensityMatrix>(s);
}

inline const HilbertSpace& space_of(const State& s) {
  return std::visit([](const auto& x) -> const HilbertSpace& { return x.space(); }, s);
}

// ---------------------------------------------------------------------------
// Constructors

inline PureState make_bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureState(HilbertSpace({2, 2}), v);
}

inline PureState make_ghz(std::size_t qubits = 3) {
  std::vector<std::size_t> dims(qubits, 2);
  HilbertSpace space(dims);
  ComplexVector v = ComplexVector::Zero(space.total_dim());
  v[0] = v[space.total_dim() - 1] = 1.0 / std::sqrt(2.0);
  return PureState(space, v);
}

/// sin^2(theta) |Phi><Phi| + cos^2(theta) |11><11| with |Phi> = cos(phi)|01> + sin(phi)|10>.
inline DensityMatrix make_w_marginal(double theta, double phi) {
  ComplexVector branch = ComplexVector::Zero(4);
  branch[1] = std::cos(phi);
  branch[2] = std::sin(phi);
  ComplexMatrix m = std::pow(std::sin(theta), 2) * branch * branch.adjoint();
  m(3, 3) += std::pow(std::cos(theta), 2);
  return DensityMatrix(HilbertSpace({2, 2}), m);
}

/// Generalized W state sin(t)cos(p)|011> + sin(t)sin(p)|101> + cos(t)|110>,
/// a purification of make_w_marginal(t, p) with C as the last qubit.
inline PureState make_w_purification(double theta, double phi) {
  ComplexVector v = ComplexVector::Zero(8);
  v[3] = std::sin(theta) * std::cos(phi);
  v[5] = std::sin(theta) * std::sin(phi);
  v[6] = std::cos(theta);
  return PureState::normalized(HilbertSpace({2, 2, 2}), v);
}

/// Angles giving the symmetric W state (all three amplitudes 1/sqrt(3)).
inline constexpr double kSymmetricWTheta = 0.95531661812450927816;  // atan(sqrt(2))
inline constexpr double kSymmetricWPhi = std::numbers::pi / 4.0;

/// r |Phi+><Phi+| + (1 - r) I/4.
inline DensityMatrix make_werner(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ParamOutOfRange("Werner mixing weight r must lie in [0, 1]");
  const PureState bell = make_bell();
  const ComplexMatrix m = r * bell.amplitudes() * bell.amplitudes().adjoint() +
                          (1.0 - r) * ComplexMatrix::Identity(4, 4) / 4.0;
  return DensityMatrix(HilbertSpace({2, 2}), m);
}

/// Qubit-qudit state (|00>+|12>)(<00|+<12|)/4 + (|01>+|13>)(<01|+<13|)/4 on dims (2, 4).
inline DensityMatrix make_qubit_qudit_example() {
  ComplexVector u = ComplexVector::Zero(8), v = ComplexVector::Zero(8);
  u[0] = u[6] = 1.0;
  v[1] = v[7] = 1.0;
  return DensityMatrix(HilbertSpace({2, 4}), (u * u.adjoint() + v * v.adjoint()) / 4.0);
}

/// rho_AB = |psi><psi|_{A B_L} (x) rho_{B_R}, with B = B_L (x) B_R merged into
/// one subsystem. Keeps the factors so the equality case can be audited.
struct FactorizedState {
  DensityMatrix state;
  PureState psi_abl;
  DensityMatrix rho_br;
};

inline FactorizedState make_factorized(const PureState& psi_abl, const DensityMatrix& rho_br) {
  if (psi_abl.space().num_subsystems() != 2) throw DimensionMismatch("psi must live on A (x) B_L");
  if (rho_br.num_subsystems() != 1) throw DimensionMismatch("rho_BR must be a single subsystem");
  const std::size_t da = psi_abl.space().dim(0);
  const std::size_t db = psi_abl.space().dim(1) * rho_br.space().dim(0);
  const ComplexMatrix m = tensor(ComplexMatrix(psi_abl.amplitudes() * psi_abl.amplitudes().adjoint()), rho_br.matrix());
  return {DensityMatrix(HilbertSpace({da, db}), m), psi_abl, rho_br};
}

/// sqrt(p)|00> + sqrt(1-p)|11>.
inline PureState make_schmidt_pair(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParamOutOfRange("Schmidt weight must lie in [0, 1]");
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = std::sqrt(p);
  v[3] = std::sqrt(1.0 - p);
  return PureState::normalized(HilbertSpace({2, 2}), v);
}

inline DensityMatrix make_diagonal_qubit(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ParamOutOfRange("diagonal weight must lie in [0, 1]");
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = q;
  m(1, 1) = 1.0 - q;
  return DensityMatrix(HilbertSpace({2}), m);
}

// ---------------------------------------------------------------------------
// Samplers

namespace detail {

inline PureState gaussian_pure(const HilbertSpace& space, std::uint64_t seed, std::uint64_t index) {
  RandomStream rng(seed, index);
  ComplexVector v(space.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[i] = cplx(re, im);
  }
  return PureState::normalized(space, std::move(v));
}

inline void require_sampler_dims(const std::vector<std::size_t>& dims) {
  const HilbertSpace space(dims);
  if (space.total_dim() > kMaxTotalDim) throw DimTooLarge("sampler total dimension exceeds 64");
}

}  // namespace detail

/// Haar-random pure state from stream `index` of `seed`.
inline PureState sample_haar_pure(const std::vector<std::size_t>& dims, std::uint64_t seed, std::uint64_t index = 0) {
  detail::require_sampler_dims(dims);
  return detail::gaussian_pure(HilbertSpace(dims), seed, index);
}

/// Reduced state of a Haar-random pure state on dims x (ancilla of dimension rank).
inline DensityMatrix sample_random_mixed(const std::vector<std::size_t>& dims, std::size_t rank, std::uint64_t seed,
                                         std::uint64_t index = 0) {
  detail::require_sampler_dims(dims);
  const HilbertSpace space(dims);
  if (rank < 1 || rank > space.total_dim()) throw ParamOutOfRange("rank must lie in [1, total_dim]");
  const PureState big = detail::gaussian_pure(space.append(HilbertSpace({rank})), seed, index);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < dims.size(); ++i) keep.push_back(i);
  return reduced_state(big, keep);
}

// ---------------------------------------------------------------------------
// StateSpec

enum class StateFamily {
  Bell,
  Ghz,
  WGeneralized,
  WMarginal,
  Werner,
  QubitQuditFactorized,
  Factorized,
  HaarPure,
  RandomMixed,
};

inline constexpr std::pair<StateFamily, std::string_view> kFamilyNames[] = {
    {StateFamily::Bell, "bell"},
    {StateFamily::Ghz, "ghz"},
    {StateFamily::WGeneralized, "w_generalized"},
    {StateFamily::WMarginal, "eq12_mixed"},
    {StateFamily::Werner, "werner"},
    {StateFamily::QubitQuditFactorized, "qubit_qudit_factorized"},
    {StateFamily::Factorized, "factorized_eq17"},
    {StateFamily::HaarPure, "haar_pure"},
    {StateFamily::RandomMixed, "random_mixed"},
};

inline std::string_view family_name(StateFamily f) {
  for (const auto& [fam, name] : kFamilyNames)
    if (fam == f) return name;
  return "unknown";
}

namespace detail {

inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Parses a real number with an optional trailing "pi" factor ("0.25pi", "pi").
inline double parse_real(std::string_view text, bool allow_pi) {
  double factor = 1.0;
  if (allow_pi && text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
    factor = std::numbers::pi;
    text.remove_suffix(2);
    if (text.empty() || text == "+") return factor;
    if (text == "-") return -factor;
  }
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value))
    throw ParseError("not a number: '" + std::string(text) + "'");
  return value * factor;
}

inline std::uint64_t parse_unsigned(std::string_view text) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError("not a nonnegative integer: '" + std::string(text) + "'");
  return value;
}

inline std::vector<std::size_t> parse_dims(std::string_view text) {
  std::vector<std::size_t> dims;
  while (true) {
    const auto comma = text.find(',');
    const auto d = parse_unsigned(text.substr(0, comma));
    if (d < 1) throw ParseError("subsystem dimension must be positive");
    dims.push_back(static_cast<std::size_t>(d));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return dims;
}

}  // namespace detail

struct StateSpec {
  StateFamily family = StateFamily::Bell;
  std::optional<double> theta, phi, r, schmidt, q;
  std::vector<std::size_t> dims;
  std::optional<std::uint64_t> seed, index;
  std::optional<std::size_t> rank;

  /// Builds a spec from key=value pairs; `family` is required and unknown keys are rejected.
  static StateSpec from_pairs(const std::map<std::string, std::string>& kv) {
    const auto fam = kv.find("family");
    if (fam == kv.end()) throw ParseError("missing family=...");
    StateSpec spec;
    bool found = false;
    for (const auto& [f, name] : kFamilyNames)
      if (name == fam->second) {
        spec.family = f;
        found = true;
      }
    if (!found) throw ParseError("unknown state family '" + fam->second + "'");
    for (const auto& [key, value] : kv) {
      if (key == "family") continue;
      if (key == "theta") spec.theta = detail::parse_real(value, true);
      else if (key == "phi") spec.phi = detail::parse_real(value, true);
      else if (key == "r") spec.r = detail::parse_real(value, false);
      else if (key == "schmidt") spec.schmidt = detail::parse_real(value, false);
      else if (key == "q") spec.q = detail::parse_real(value, false);
      else if (key == "dims") spec.dims = detail::parse_dims(value);
      else if (key == "seed") spec.seed = detail::parse_unsigned(value);
      else if (key == "index") spec.index = detail::parse_unsigned(value);
      else if (key == "rank") spec.rank = static_cast<std::size_t>(detail::parse_unsigned(value));
      else throw ParseError("unknown state parameter '" + key + "'");
    }
    spec.validate();
    return spec;
  }

  /// Parses whitespace-separated key=value tokens.
  static StateSpec parse(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + token + "'");
      kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return from_pairs(kv);
  }

  /// Checks that the parameters present are the ones the family takes.
  void validate() const {
    const bool angles = theta || phi;
    const bool any_random = seed || index || rank || !dims.empty();
    auto reject = [&](bool bad, const char* what) {
      if (bad) throw ParseError(std::string(family_name(family)) + " does not take " + what);
    };
    switch (family) {
      case StateFamily::Bell:
      case StateFamily::Ghz:
      case StateFamily::QubitQuditFactorized:
        reject(angles || r || schmidt || q || any_random, "parameters");
        break;
      case StateFamily::WGeneralized:
      case StateFamily::WMarginal:
        reject(r || schmidt || q || any_random, "parameters other than theta, phi");
        break;
      case StateFamily::Werner:
        reject(angles || schmidt || q || any_random, "parameters other than r");
        if (!r) throw ParseError("werner needs r=...");
        if (!(*r >= 0.0 && *r <= 1.0)) throw ParamOutOfRange("Werner mixing weight r must lie in [0, 1]");
        break;
      case StateFamily::Factorized:
        reject(angles || r || rank || !dims.empty(), "theta, phi, r, rank or dims");
        reject((schmidt || q) && (seed || index), "both explicit weights and a random seed");
        if (schmidt && !(*schmidt >= 0.0 && *schmidt <= 1.0)) throw ParamOutOfRange("schmidt must lie in [0, 1]");
        if (q && !(*q >= 0.0 && *q <= 1.0)) throw ParamOutOfRange("q must lie in [0, 1]");
        break;
      case StateFamily::HaarPure:
        reject(angles || r || schmidt || q || rank, "parameters other than dims, seed, index");
        if (dims.empty()) throw ParseError("haar_pure needs dims=...");
        break;
      case StateFamily::RandomMixed:
        reject(angles || r || schmidt || q, "parameters other than dims, rank, seed, index");
        if (dims.empty()) throw ParseError("random_mixed needs dims=...");
        break;
    }
  }

  /// Canonical key=value form; parse(to_string()) reproduces the spec.
  std::string to_string() const {
    std::string out = "family=" + std::string(family_name(family));
    auto add = [&](const char* key, const std::string& value) { out += std::string(" ") + key + "=" + value; };
    if (theta) add("theta", detail::format_real(*theta));
    if (phi) add("phi", detail::format_real(*phi));
    if (r) add("r", detail::format_real(*r));
    if (schmidt) add("schmidt", detail::format_real(*schmidt));
    if (q) add("q", detail::format_real(*q));
    if (!dims.empty()) {
      std::string d;
      for (std::size_t i = 0; i < dims.size(); ++i) d += (i ? "," : "") + std::to_string(dims[i]);
      add("dims", d);
    }
    if (rank) add("rank", std::to_string(*rank));
    if (seed) add("seed", std::to_string(*seed));
    if (index) add("index", std::to_string(*index));
    return out;
  }
};

/// The equality-case family: explicit (schmidt, q) weights, or with a seed a
/// Haar-random psi on two qubits and a random full-rank qubit rho_BR.
inline FactorizedState build_factorized(const StateSpec& spec) {
  if (spec.family != StateFamily::Factorized && spec.family != StateFamily::QubitQuditFactorized)
    throw NotApplicable("state spec does not describe a factorized state");
  if (spec.family == StateFamily::QubitQuditFactorized) {
    return make_factorized(make_bell(), make_diagonal_qubit(0.5));
  }
  if (spec.seed) {
    const std::uint64_t idx = spec.index.value_or(0);
    return make_factorized(sample_haar_pure({2, 2}, *spec.seed, 2 * idx),
                           sample_random_mixed({2}, 2, *spec.seed, 2 * idx + 1));
  }
  return make_factorized(make_schmidt_pair(spec.schmidt.value_or(0.5)), make_diagonal_qubit(spec.q.value_or(0.5)));
}

inline State build_state(const StateSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case StateFamily::Bell:
      return make_bell();
    case StateFamily::Ghz:
      return make_ghz(3);
    case StateFamily::WGeneralized:
      return make_w_purification(spec.theta.value_or(kSymmetricWTheta), spec.phi.value_or(kSymmetricWPhi));
    case StateFamily::WMarginal:
      return make_w_marginal(spec.theta.value_or(kSymmetricWTheta), spec.phi.value_or(kSymmetricWPhi));
    case StateFamily::Werner:
      return make_werner(*spec.r);
    case StateFamily::QubitQuditFactorized:
      return make_qubit_qudit_example();
    case StateFamily::Factorized:
      return build_factorized(spec).state;
    case StateFamily::HaarPure:
      return sample_haar_pure(spec.dims, spec.seed.value_or(0), spec.index.value_or(0));
    case StateFamily::RandomMixed: {
      std::size_t total = 1;
      for (auto d : spec.dims) total *= d;
      return sample_random_mixed(spec.dims, spec.rank.value_or(std::min(total, kMaxTotalDim)), spec.seed.value_or(0),
                                 spec.index.value_or(0));
    }
  }
  throw ParseError("unhandled state family");
}

}  // namespace quncert

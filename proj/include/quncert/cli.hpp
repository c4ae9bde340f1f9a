#pragma once

// Command-line front end. Grammar:
//
//   quncert <command> [key=value ...] [--no-metadata] [--format csv|json] [--out PATH]
//
// Commands: bound, sweep, audit, werner-threshold, report.
// Exit codes: 0 success, 1 audit failure, 2 parse/parameter error, 3 dimension error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "quncert/common.hpp"
#include "quncert/correlations.hpp"
#include "quncert/entropy.hpp"
#include "quncert/random.hpp"
#include "quncert/states.hpp"
#include "quncert/theorems.hpp"

namespace quncert::cli {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitAuditFailure = 1, kExitParseError = 2, kExitDimensionError = 3 };

enum class Command { Bound, Sweep, Audit, WernerThreshold, Report };
enum class OutFormat { Csv, Json };

struct RunConfig {
  Command command = Command::Bound;
  std::optional<StateSpec> state_spec;
  std::string observables = "Z,X";
  std::size_t count = 0;  // n_points for sweep, n_samples for audit
  std::uint64_t seed = 0;
  double phi = std::numbers::pi / 4.0;
  double tolerance = 1e-6;
  std::vector<ClaimId> claims;
  OutFormat out_format = OutFormat::Csv;
  std::string out_path;  // empty: standard output
  bool metadata = true;
};

inline std::string_view command_name(Command c) {
  switch (c) {
    case Command::Bound:
      return "bound";
    case Command::Sweep:
      return "sweep";
    case Command::Audit:
      return "audit";
    case Command::WernerThreshold:
      return "werner-threshold";
    case Command::Report:
      return "report";
  }
  return "?";
}

namespace detail {

inline const std::vector<std::string_view>& state_keys() {
  static const std::vector<std::string_view> keys = {"family", "theta", "phi", "r", "schmidt", "q",
                                                     "dims",   "seed",  "index", "rank"};
  return keys;
}

inline bool contains(const std::vector<std::string_view>& v, std::string_view k) {
  return std::find(v.begin(), v.end(), k) != v.end();
}

inline std::size_t parse_count(const std::string& text) {
  const auto v = quncert::detail::parse_unsigned(text);
  if (v < 1) throw ParseError("n must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Parses argv-style arguments (without the program name).
inline RunConfig parse_run_config(const std::vector<std::string>& args) {
  if (args.empty()) throw ParseError("missing command");
  RunConfig cfg;
  const std::string& cmd = args[0];
  if (cmd == "bound") cfg.command = Command::Bound;
  else if (cmd == "sweep") cfg.command = Command::Sweep;
  else if (cmd == "audit") cfg.command = Command::Audit;
  else if (cmd == "werner-threshold") cfg.command = Command::WernerThreshold;
  else if (cmd == "report") cfg.command = Command::Report;
  else throw ParseError("unknown command '" + cmd + "'");

  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string a = args[i];
    if (a == "--no-metadata") {
      cfg.metadata = false;
      continue;
    }
    if (a == "--format" || a == "--out" || a == "-o") {
      if (i + 1 >= args.size()) throw ParseError(a + " needs a value");
      kv[a == "--format" ? "format" : "out"] = args[++i];
      continue;
    }
    if (a.rfind("--format=", 0) == 0) a = a.substr(2);
    else if (a.rfind("--out=", 0) == 0) a = a.substr(2);
    else if (a.rfind("--", 0) == 0) throw ParseError("unknown flag '" + a + "'");
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + a + "'");
    const std::string key = a.substr(0, eq);
    if (kv.count(key)) throw ParseError("duplicate key '" + key + "'");
    kv[key] = a.substr(eq + 1);
  }

  if (auto it = kv.find("format"); it != kv.end()) {
    if (it->second == "csv") cfg.out_format = OutFormat::Csv;
    else if (it->second == "json") cfg.out_format = OutFormat::Json;
    else throw ParseError("format must be csv or json");
    kv.erase(it);
  }
  if (auto it = kv.find("out"); it != kv.end()) {
    cfg.out_path = it->second;
    kv.erase(it);
  }

  std::vector<std::string_view> own;
  switch (cfg.command) {
    case Command::Bound:
      own = {"obs"};
      break;
    case Command::Sweep:
      own = {"phi", "n"};
      break;
    case Command::Audit:
      own = {"n", "seed", "claims"};
      break;
    case Command::WernerThreshold:
      own = {"tol"};
      break;
    case Command::Report:
      break;
  }
  const bool takes_state = cfg.command == Command::Bound || cfg.command == Command::Report;

  std::map<std::string, std::string> state_kv;
  for (const auto& [key, value] : kv) {
    if (detail::contains(own, key)) {
      if (key == "obs") cfg.observables = value;
      else if (key == "phi") cfg.phi = quncert::detail::parse_real(value, true);
      else if (key == "n") cfg.count = detail::parse_count(value);
      else if (key == "seed") cfg.seed = quncert::detail::parse_unsigned(value);
      else if (key == "tol") {
        cfg.tolerance = quncert::detail::parse_real(value, false);
        if (!(cfg.tolerance > 0.0)) throw ParseError("tol must be positive");
      } else if (key == "claims") {
        std::string_view rest = value;
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          cfg.claims.push_back(parse_claim(rest.substr(0, comma)));
          if (comma == std::string_view::npos) break;
          rest.remove_prefix(comma + 1);
        }
      }
    } else if (takes_state && detail::contains(detail::state_keys(), key)) {
      state_kv[key] = value;
      if (key == "seed") cfg.seed = quncert::detail::parse_unsigned(value);
    } else {
      throw ParseError("unknown key '" + key + "' for command " + std::string(command_name(cfg.command)));
    }
  }
  if (takes_state) cfg.state_spec = StateSpec::from_pairs(state_kv);
  if (cfg.count == 0) cfg.count = (cfg.command == Command::Sweep) ? 512 : 1000;
  if (cfg.command == Command::Sweep && cfg.count < 16) throw ParamOutOfRange("sweep needs n >= 16");
  if (cfg.command == Command::Audit && cfg.claims.empty()) cfg.claims = all_claims();
  return cfg;
}

// ---------------------------------------------------------------------------
// Records and writers

using Field = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Record {
  std::string type;
  std::vector<std::pair<std::string, Field>> fields;

  Record& add(std::string key, Field value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

struct Output {
  std::vector<Record> rows;     // one table; all rows share columns
  std::vector<Record> footers;  // trailing summary records
  int exit_code = kExitOk;
};

/// 12 significant digits; negative zero prints as 0.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

inline std::string field_text(const Field& f) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else return v;
      },
      f);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::ordered_json field_json(const Field& f) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return std::strtod(format_number(v).c_str(), nullptr);
        } else return v;
      },
      f);
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Record metadata_record(const RunConfig& cfg) {
  Record m{"metadata", {}};
  m.add("command", std::string(command_name(cfg.command)));
  m.add("seed", static_cast<std::int64_t>(cfg.seed));
  m.add("version", std::string(kVersion));
  m.add("rng", std::string(kRngName) + "/v" + std::to_string(kRngVersion));
  // J, D, E_u, delta_u and E_a optimize over this family only; general POVMs are not searched
  m.add("measurement_family", std::string("rank1_projective_qubit"));
  m.add("timestamp", utc_timestamp());
  return m;
}

inline std::string render_csv(const Output& out, const std::optional<Record>& meta) {
  std::ostringstream s;
  if (meta) {
    s << "# schema_version=" << kSchemaVersion;
    for (const auto& [k, v] : meta->fields) s << ' ' << k << '=' << field_text(v);
    s << '\n';
  }
  if (!out.rows.empty()) {
    const auto& cols = out.rows.front().fields;
    for (std::size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << cols[i].first;
    s << '\n';
    for (const auto& r : out.rows) {
      for (std::size_t i = 0; i < r.fields.size(); ++i) s << (i ? "," : "") << csv_escape(field_text(r.fields[i].second));
      s << '\n';
    }
  }
  for (const auto& f : out.footers) {
    s << "# " << f.type;
    for (const auto& [k, v] : f.fields) s << ' ' << k << '=' << (field_text(v).empty() ? "null" : field_text(v));
    s << '\n';
  }
  return s.str();
}

inline std::string render_json(const Output& out, const std::optional<Record>& meta) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto emit = [&](const Record& r) {
    nlohmann::ordered_json o;
    o["record_type"] = r.type;
    o["schema_version"] = kSchemaVersion;
    for (const auto& [k, v] : r.fields) o[k] = field_json(v);
    arr.push_back(std::move(o));
  };
  if (meta) emit(*meta);
  for (const auto& r : out.rows) emit(r);
  for (const auto& r : out.footers) emit(r);
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Commands

inline DensityMatrix bipartite_state(const RunConfig& cfg) {
  const DensityMatrix rho = to_density(build_state(*cfg.state_spec));
  if (rho.num_subsystems() != 2)
    throw DimensionMismatch("command needs a bipartite state; " + std::string(family_name(cfg.state_spec->family)) +
                            " has " + std::to_string(rho.num_subsystems()) + " subsystems");
  return rho;
}

inline Output cmd_bound(const RunConfig& cfg) {
  const DensityMatrix rho = bipartite_state(cfg);
  const auto rep = uncertainty_report(rho, ObservablePair::named(cfg.observables, rho.space().dim(0)));
  Output out;
  out.rows.push_back(Record{"bound", {}}
                         .add("s_q_given_b", rep.s_q_given_b)
                         .add("s_r_given_b", rep.s_r_given_b)
                         .add("lhs", rep.lhs)
                         .add("ub", rep.ub)
                         .add("s_a_given_b", rep.s_a_given_b)
                         .add("slack", rep.slack));
  return out;
}

inline Output cmd_sweep(const RunConfig& cfg) {
  const auto pts = sweep_w_family(cfg.phi, cfg.count);
  Output out;
  for (const auto& p : pts)
    out.rows.push_back(Record{"sweep_point", {}}
                           .add("theta_over_pi", p.theta_over_pi)
                           .add("s_a_given_b", p.s_a_given_b)
                           .add("d_b_given_a", p.d_b_given_a)
                           .add("d_c_given_a", p.d_c_given_a)
                           .add("ddb", p.derivative_d_b)
                           .add("ddc", p.derivative_d_c));
  Record footer{"crossing", {}};
  if (const auto c = find_derivative_crossing(pts)) {
    footer.add("lo", c->lo).add("hi", c->hi).add("estimate", c->estimate);
  } else {
    footer.add("lo", std::monostate{}).add("hi", std::monostate{}).add("estimate", std::monostate{});
  }
  out.footers.push_back(std::move(footer));
  return out;
}

inline Output cmd_audit(const RunConfig& cfg) {
  Output out;
  for (ClaimId id : cfg.claims) {
    const auto s = audit_random_batch(id, cfg.count, cfg.seed);
    out.rows.push_back(Record{"audit", {}}
                           .add("claim", std::string(claim_name(id)))
                           .add("n", static_cast<std::int64_t>(s.n))
                           .add("passes", static_cast<std::int64_t>(s.passes))
                           .add("failures", static_cast<std::int64_t>(s.failures))
                           .add("not_applicable", static_cast<std::int64_t>(s.not_applicable))
                           .add("worst_residual", s.worst_residual)
                           .add("worst_spec", s.worst_spec ? Field(s.worst_spec->to_string()) : Field{}));
    if (s.failures > 0) out.exit_code = kExitAuditFailure;
  }
  return out;
}

inline Output cmd_werner_threshold(const RunConfig& cfg) {
  const auto w = find_werner_threshold(cfg.tolerance);
  Output out;
  out.rows.push_back(Record{"werner_threshold", {}}
                         .add("r_star", w.r_star)
                         .add("residual", w.residual)
                         .add("iterations", static_cast<std::int64_t>(w.iterations)));
  return out;
}

inline Output cmd_report(const RunConfig& cfg) {
  const DensityMatrix rho = bipartite_state(cfg);
  const auto r = correlation_report(rho);
  auto tier = [](ToleranceTier t) { return std::string(t == ToleranceTier::Exact ? "exact" : "opt"); };
  Output out;
  out.rows.push_back(Record{"report", {}}
                         .add("s_a", r.s_a)
                         .add("s_b", r.s_b)
                         .add("s_ab", r.s_ab)
                         .add("s_a_given_b", r.s_a_given_b)
                         .add("mutual_information", r.mutual_information)
                         .add("j", r.j)
                         .add("d", r.d)
                         .add("e_f", r.e_f)
                         .add("e_a", r.e_a)
                         .add("e_u", r.e_u)
                         .add("delta_u", r.delta_u)
                         .add("j_tier", tier(CorrelationReport::tier_j))
                         .add("d_tier", tier(CorrelationReport::tier_d))
                         .add("e_f_tier", tier(CorrelationReport::tier_e_f))
                         .add("e_a_tier", tier(CorrelationReport::tier_e_a))
                         .add("e_u_tier", tier(CorrelationReport::tier_e_u))
                         .add("delta_u_tier", tier(CorrelationReport::tier_delta_u))
                         .add("optimizer_converged", static_cast<std::int64_t>(
                                                         r.j_run.converged && r.delta_u_run.converged &&
                                                         r.e_a_run.converged)));
  return out;
}

inline Output execute(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Bound:
      return cmd_bound(cfg);
    case Command::Sweep:
      return cmd_sweep(cfg);
    case Command::Audit:
      return cmd_audit(cfg);
    case Command::WernerThreshold:
      return cmd_werner_threshold(cfg);
    case Command::Report:
      return cmd_report(cfg);
  }
  throw ParseError("unhandled command");
}

inline std::string render(const Output& out, const RunConfig& cfg) {
  const std::optional<Record> meta = cfg.metadata ? std::optional<Record>(metadata_record(cfg)) : std::nullopt;
  return cfg.out_format == OutFormat::Json ? render_json(out, meta) : render_csv(out, meta);
}

inline constexpr std::string_view kUsage =
    "usage: quncert <command> [key=value ...] [--no-metadata] [--format csv|json] [--out PATH]\n"
    "\n"
    "commands:\n"
    "  bound             family=... [state params] [obs=Z,X]   uncertainty relation, both sides\n"
    "  report            family=... [state params]             correlation measures of rho_AB\n"
    "  sweep             [phi=0.25pi] [n=512]                  S(A|B), D(B|A), D(C|A) along theta/pi\n"
    "  audit             [n=1000] [seed=0] [claims=EQ2,EQ9]    randomized identity/inequality audit\n"
    "  werner-threshold  [tol=1e-6]                            r where S(A|B) of the Werner state vanishes\n"
    "\n"
    "state families: bell ghz w_generalized(theta,phi) eq12_mixed(theta,phi) werner(r)\n"
    "                qubit_qudit_factorized factorized_eq17(schmidt,q | seed,index)\n"
    "                haar_pure(dims,seed,index) random_mixed(dims,rank,seed,index)\n"
    "angles accept a pi suffix, e.g. theta=0.25pi\n";

/// Full CLI run; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
    out << kUsage;
    return kExitOk;
  }
  try {
    const RunConfig cfg = parse_run_config(args);
    const Output result = execute(cfg);
    const std::string text = render(result, cfg);
    if (cfg.out_path.empty() || cfg.out_path == "-") {
      out << text;
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file) throw ParseError("cannot open output file '" + cfg.out_path + "'");
      file << text;
    }
    return result.exit_code;
  } catch (const DimensionMismatch& e) {
    err << "dimension error: " << e.what() << '\n';
    return kExitDimensionError;
  } catch (const BadSubsystemIndex& e) {
    err << "dimension error: " << e.what() << '\n';
    return kExitDimensionError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n' << kUsage;
    return kExitParseError;
  }
}

}  // namespace quncert::cli

// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: flat key=value run configuration, parameter sweeps and
// solver/validation commands emitting metadata-stamped CSV.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "covert/bottleneck.hpp"
#include "covert/montecarlo.hpp"
#include "covert/sensing.hpp"

namespace covert {

inline constexpr const char* kToolName = "covertsense";
inline constexpr const char* kToolVersion = "0.1.0";

/// Configuration-level failure (unknown key, malformed or out-of-range
/// value, missing required setting). Mapped to exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Full resolved run configuration. Grid-valued keys keep their textual
/// spec (comma list, "lin:lo:hi:n" or "log:lo:hi:n") so an echoed config
/// re-parses bit-identically; they are validated eagerly on assignment.
struct RunConfig {
  // scenario
  double kappa = 0.2;
  double eta_A = 1.0;
  double eta_E = 1.0;
  double mu_B = 10.0;
  int m_slots = 2;
  // probe
  std::string family = "both";  // coherent | tmsv | both
  int R = 1000;
  double mu = 0.001;
  std::string mu_grid = "log:1e-4:10:61";
  std::optional<std::string> mu_B_grid;
  // solver
  double eps_tail = kDefaultTailEps;
  double alpha_tol = kDefaultAlphaTol;
  std::optional<double> d;
  std::optional<std::string> beta_grid;
  double mu_lo = 1e-8;
  double mu_hi = 10.0;
  // monte carlo
  long trials = 100000;
  std::string M_values = "1,2,5,10,20,50,100";
  std::uint64_t seed = 12345;
  double fit_min_mxi = 1.0;
  // output
  std::string out_path;
  std::string format = "csv";

  bool operator==(const RunConfig&) const = default;
};

namespace cli_detail {

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw config_error("invalid numeric value for key '" + key + "': '" +
                       value + "'");
  }
}

inline long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw config_error("invalid integer value for key '" + key + "': '" +
                       value + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw config_error("invalid unsigned value for key '" + key + "': '" +
                       value + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

/// Grid spec: "" (empty), "lin:lo:hi:n", "log:lo:hi:n" or a comma list.
inline std::vector<double> parse_grid(const std::string& key,
                                      const std::string& spec) {
  std::vector<double> grid;
  if (spec.empty()) return grid;
  if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
    const bool logspace = spec[1] == 'o';
    const auto parts = split(spec.substr(4), ':');
    if (parts.size() != 3) {
      throw config_error("grid spec for key '" + key +
                         "' must be lin:lo:hi:n or log:lo:hi:n");
    }
    const double lo = parse_double(key, parts[0]);
    const double hi = parse_double(key, parts[1]);
    const long n = parse_long(key, parts[2]);
    if (n < 1) throw config_error("grid for key '" + key + "' needs n >= 1");
    if (logspace && !(lo > 0.0)) {
      throw config_error("log grid for key '" + key + "' needs lo > 0");
    }
    for (long i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      grid.push_back(logspace ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                              : lo + t * (hi - lo));
    }
    if (n > 1) {
      grid.front() = lo;
      grid.back() = hi;
    }
  } else {
    for (const std::string& part : split(spec, ',')) {
      grid.push_back(parse_double(key, part));
    }
  }
  for (double v : grid) {
    if (!std::isfinite(v)) {
      throw config_error("grid for key '" + key + "' has non-finite entries");
    }
  }
  return grid;
}

inline std::vector<long> parse_longs(const std::string& key,
                                     const std::string& spec) {
  std::vector<long> out;
  if (spec.empty()) return out;
  for (const std::string& part : split(spec, ',')) {
    out.push_back(parse_long(key, part));
  }
  return out;
}

inline void require_ascending_positive(const std::string& key,
                                       const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) {
      throw config_error("key '" + key + "' requires positive entries");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw config_error("key '" + key + "' requires ascending entries");
    }
  }
}

inline std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline std::string fmt_round_trip(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace cli_detail

/// Assign one key=value pair, validating every range constraint eagerly.
/// Unknown keys are rejected by name.
inline void apply_kv(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
  using namespace cli_detail;
  auto in_unit = [&](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (key == "kappa") {
    const double v = parse_double(key, value);
    if (!in_unit(v)) throw config_error("kappa must lie in [0,1]");
    cfg.kappa = v;
  } else if (key == "eta_A") {
    const double v = parse_double(key, value);
    if (!in_unit(v)) throw config_error("eta_A must lie in [0,1]");
    cfg.eta_A = v;
  } else if (key == "eta_E") {
    const double v = parse_double(key, value);
    if (!in_unit(v)) throw config_error("eta_E must lie in [0,1]");
    cfg.eta_E = v;
  } else if (key == "mu_B") {
    const double v = parse_double(key, value);
    if (!std::isfinite(v) || v < 0.0) throw config_error("mu_B must be >= 0");
    cfg.mu_B = v;
  } else if (key == "m_slots") {
    const long v = parse_long(key, value);
    if (v < 2) throw config_error("m_slots must be >= 2");
    cfg.m_slots = static_cast<int>(v);
  } else if (key == "family") {
    if (value != "coherent" && value != "tmsv" && value != "both") {
      throw config_error("family must be coherent, tmsv or both");
    }
    cfg.family = value;
  } else if (key == "R") {
    const long v = parse_long(key, value);
    if (v < 1) throw config_error("R must be >= 1");
    cfg.R = static_cast<int>(v);
  } else if (key == "mu") {
    const double v = parse_double(key, value);
    if (!std::isfinite(v) || v < 0.0) throw config_error("mu must be >= 0");
    cfg.mu = v;
  } else if (key == "mu_grid") {
    require_ascending_positive(key, parse_grid(key, value));
    cfg.mu_grid = value;
  } else if (key == "mu_B_grid") {
    for (double v : parse_grid(key, value)) {
      if (!(v >= 0.0)) throw config_error("mu_B_grid entries must be >= 0");
    }
    cfg.mu_B_grid = value;
  } else if (key == "eps_tail") {
    const double v = parse_double(key, value);
    if (!(v > 0.0) || !(v < 1e-3)) {
      throw config_error("eps_tail must lie in (0, 1e-3)");
    }
    cfg.eps_tail = v;
  } else if (key == "alpha_tol") {
    const double v = parse_double(key, value);
    if (!(v > 0.0) || !(v <= 0.1)) {
      throw config_error("alpha_tol must lie in (0, 0.1]");
    }
    cfg.alpha_tol = v;
  } else if (key == "d") {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw config_error("d must be > 0");
    cfg.d = v;
  } else if (key == "beta_grid") {
    for (double v : parse_grid(key, value)) {
      if (!(v >= 0.0)) throw config_error("beta_grid entries must be >= 0");
    }
    cfg.beta_grid = value;
  } else if (key == "mu_lo") {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw config_error("mu_lo must be > 0");
    cfg.mu_lo = v;
  } else if (key == "mu_hi") {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw config_error("mu_hi must be > 0");
    cfg.mu_hi = v;
  } else if (key == "trials") {
    const long v = parse_long(key, value);
    if (v < 1) throw config_error("trials must be >= 1");
    cfg.trials = v;
  } else if (key == "M_values") {
    const auto ms = parse_longs(key, value);
    if (ms.empty()) throw config_error("M_values must be nonempty");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (ms[i] < 1) throw config_error("M_values entries must be >= 1");
      if (i > 0 && ms[i] <= ms[i - 1]) {
        throw config_error("M_values must be ascending");
      }
    }
    cfg.M_values = value;
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "fit_min_mxi") {
    const double v = parse_double(key, value);
    if (!(v >= 0.0)) throw config_error("fit_min_mxi must be >= 0");
    cfg.fit_min_mxi = v;
  } else if (key == "out_path") {
    cfg.out_path = value;
  } else if (key == "format") {
    if (value != "csv") throw config_error("format must be csv");
    cfg.format = value;
  } else {
    throw config_error("unknown config key '" + key + "'");
  }
}

/// Canonical key=value rendering; re-parsing it reproduces the config.
inline std::string render_config(const RunConfig& cfg) {
  using cli_detail::fmt_round_trip;
  std::ostringstream os;
  os << "kappa=" << fmt_round_trip(cfg.kappa) << '\n';
  os << "eta_A=" << fmt_round_trip(cfg.eta_A) << '\n';
  os << "eta_E=" << fmt_round_trip(cfg.eta_E) << '\n';
  os << "mu_B=" << fmt_round_trip(cfg.mu_B) << '\n';
  os << "m_slots=" << cfg.m_slots << '\n';
  os << "family=" << cfg.family << '\n';
  os << "R=" << cfg.R << '\n';
  os << "mu=" << fmt_round_trip(cfg.mu) << '\n';
  os << "mu_grid=" << cfg.mu_grid << '\n';
  if (cfg.mu_B_grid) os << "mu_B_grid=" << *cfg.mu_B_grid << '\n';
  os << "eps_tail=" << fmt_round_trip(cfg.eps_tail) << '\n';
  os << "alpha_tol=" << fmt_round_trip(cfg.alpha_tol) << '\n';
  if (cfg.d) os << "d=" << fmt_round_trip(*cfg.d) << '\n';
  if (cfg.beta_grid) os << "beta_grid=" << *cfg.beta_grid << '\n';
  os << "mu_lo=" << fmt_round_trip(cfg.mu_lo) << '\n';
  os << "mu_hi=" << fmt_round_trip(cfg.mu_hi) << '\n';
  os << "trials=" << cfg.trials << '\n';
  os << "M_values=" << cfg.M_values << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << "fit_min_mxi=" << fmt_round_trip(cfg.fit_min_mxi) << '\n';
  os << "out_path=" << cfg.out_path << '\n';
  os << "format=" << cfg.format << '\n';
  return os.str();
}

/// Parse key=value lines ('#' comments and blank lines skipped).
inline void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("malformed config line (expected key=value): '" +
                         line + "'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline RunConfig load_config(const std::optional<std::string>& path,
                             const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw config_error("cannot open config file '" + *path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str());
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw config_error("override must be key=value, got '" + kv + "'");
    }
    apply_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

namespace cli_detail {

inline void write_metadata(std::ostream& os, const RunConfig& cfg,
                           const std::string& command) {
  os << "# " << kToolName << ' ' << kToolVersion << '\n';
  os << "# command: " << command << '\n';
  std::istringstream lines(render_config(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    os << "# " << line << '\n';
  }
}

inline std::vector<ProbeFamily> families_of(const RunConfig& cfg) {
  if (cfg.family == "coherent") return {ProbeFamily::Coherent};
  if (cfg.family == "tmsv") return {ProbeFamily::Tmsv};
  return {ProbeFamily::Coherent, ProbeFamily::Tmsv};
}

inline const char* family_name(ProbeFamily f) {
  return f == ProbeFamily::Coherent ? "coherent" : "tmsv";
}

inline RateOptions rate_options(const RunConfig& cfg) {
  RateOptions opts;
  opts.eps_tail = cfg.eps_tail;
  opts.alpha_tol = cfg.alpha_tol;
  return opts;
}

inline ChannelParams channel_of(const RunConfig& cfg) {
  ChannelParams ch;
  ch.kappa = cfg.kappa;
  ch.eta_A = cfg.eta_A;
  ch.eta_E = cfg.eta_E;
  ch.mu_B = cfg.mu_B;
  ch.m_slots = cfg.m_slots;
  ch.validate();
  return ch;
}

}  // namespace cli_detail

/// Sensing-covertness trade-off data, one row per grid point per family.
inline void cmd_tradeoff(const RunConfig& cfg, std::ostream& os) {
  using namespace cli_detail;
  const ChannelParams ch = channel_of(cfg);
  const auto grid = parse_grid("mu_grid", cfg.mu_grid);
  write_metadata(os, cfg, "tradeoff");
  os << "mu,xi_E,xi_A,delta_xi,xi_A_inf,xi_E_inf,family\n";
  for (ProbeFamily fam : families_of(cfg)) {
    const auto points = tradeoff_curve(ch, fam, cfg.R, grid, rate_options(cfg));
    for (const TradeoffPoint& p : points) {
      const AsymptoticRates inf_rates = asymptotic_rates(ch, p.mu);
      os << fmt_sci(p.mu) << ',' << fmt_sci(p.xi_E) << ',' << fmt_sci(p.xi_A)
         << ',' << fmt_sci(p.delta_xi) << ',' << fmt_sci(inf_rates.xi_A) << ','
         << fmt_sci(inf_rates.xi_E) << ',' << family_name(fam) << '\n';
    }
  }
}

/// Effective Chernoff information sweep over mu (and optionally mu_B).
inline void cmd_delta_xi(const RunConfig& cfg, std::ostream& os) {
  using namespace cli_detail;
  ChannelParams ch = channel_of(cfg);
  const auto grid = parse_grid("mu_grid", cfg.mu_grid);
  std::vector<double> mu_b_values = {cfg.mu_B};
  if (cfg.mu_B_grid) mu_b_values = parse_grid("mu_B_grid", *cfg.mu_B_grid);
  write_metadata(os, cfg, "delta-xi");
  os << "family,mu_B,mu,xi_A,xi_E,delta_xi,xi_E_approx\n";
  for (ProbeFamily fam : families_of(cfg)) {
    for (double mu_b : mu_b_values) {
      ch.mu_B = mu_b;
      for (double mu : grid) {
        const ScenarioRates r =
            delta_xi(ch, ProbeSpec{fam, mu, cfg.R}, rate_options(cfg));
        os << family_name(fam) << ',' << fmt_sci(mu_b) << ',' << fmt_sci(mu)
           << ',' << fmt_sci(r.xi_A) << ',' << fmt_sci(r.xi_E) << ','
           << fmt_sci(r.delta_xi) << ',' << fmt_sci(r.xi_E_approx) << '\n';
      }
    }
  }
}

/// Asymptotic error probabilities p = exp(-M xi)/2 over the M grid at the
/// configured per-mode energy; mu_T reports the total photon budget M*mu.
inline void cmd_perr(const RunConfig& cfg, std::ostream& os) {
  using namespace cli_detail;
  const ChannelParams ch = channel_of(cfg);
  const auto m_values = parse_longs("M_values", cfg.M_values);
  write_metadata(os, cfg, "perr");
  os << "family,party,M,xi,p_err,mu_T\n";
  for (ProbeFamily fam : families_of(cfg)) {
    const ProbeSpec probe{fam, cfg.mu, cfg.R};
    const ScenarioRates r = delta_xi(ch, probe, rate_options(cfg));
    const struct {
      const char* party;
      double xi;
    } rows[2] = {{"alice", r.xi_A}, {"eve", r.xi_E}};
    for (const auto& row : rows) {
      for (long M : m_values) {
        const double p_err =
            0.5 * std::exp(-static_cast<double>(M) * row.xi);
        os << family_name(fam) << ',' << row.party << ',' << M << ','
           << fmt_sci(row.xi) << ',' << fmt_sci(p_err) << ','
           << fmt_sci(static_cast<double>(M) * cfg.mu) << '\n';
      }
    }
  }
}

/// Covert information at the configured constraint level d.
inline void cmd_covert_info(const RunConfig& cfg, std::ostream& os) {
  using namespace cli_detail;
  if (!cfg.d) throw config_error("covert-info requires key 'd'");
  const ChannelParams ch = channel_of(cfg);
  SolverOptions opts;
  opts.rates = rate_options(cfg);
  write_metadata(os, cfg, "covert-info");
  os << "family,d,i_c,mu_star,xi_E_achieved,converged,iterations\n";
  for (ProbeFamily fam : families_of(cfg)) {
    const CovertInfoResult r =
        covert_information(ch, fam, cfg.R, *cfg.d, cfg.mu_lo, cfg.mu_hi, opts);
    os << family_name(fam) << ',' << fmt_sci(r.d) << ',' << fmt_sci(r.i_c)
       << ',' << fmt_sci(r.mu_star) << ',' << fmt_sci(r.xi_E_achieved) << ','
       << (r.converged ? "true" : "false") << ',' << r.iterations << '\n';
  }
}

/// Monte Carlo validation: empirical error probabilities and fitted decay
/// exponents with uncertainties.
inline void cmd_validate(const RunConfig& cfg, std::ostream& os) {
  using namespace cli_detail;
  const ChannelParams ch = channel_of(cfg);
  write_metadata(os, cfg, "validate");
  os << "family,party,M,trials,errors,p_hat,std_err,used_in_fit,"
        "xi_hat,xi_half_width,xi_analytic\n";
  for (ProbeFamily fam : families_of(cfg)) {
    McConfig mc;
    mc.trials = cfg.trials;
    mc.M_values = parse_longs("M_values", cfg.M_values);
    mc.seed = cfg.seed;
    mc.channel = ch;
    mc.probe = ProbeSpec{fam, cfg.mu, cfg.R};
    mc.eps_tail = cfg.eps_tail;
    mc.alpha_tol = cfg.alpha_tol;
    mc.fit_min_mxi = cfg.fit_min_mxi;
    const McResult result = empirical_error(mc);
    const struct {
      const char* party;
      const PartyResult* res;
    } parties[2] = {{"alice", &result.alice}, {"eve", &result.eve}};
    for (const auto& party : parties) {
      for (const ErrorPoint& pt : party.res->points) {
        os << family_name(fam) << ',' << party.party << ',' << pt.M << ','
           << pt.trials << ',' << pt.errors << ',' << fmt_sci(pt.p_hat) << ','
           << fmt_sci(pt.std_err) << ',' << (pt.used_in_fit ? "true" : "false")
           << ',';
        if (party.res->fit) {
          os << fmt_sci(party.res->fit->xi_hat) << ','
             << fmt_sci(party.res->fit->half_width);
        } else {
          os << ',';
        }
        os << ',' << fmt_sci(party.res->xi_analytic) << '\n';
      }
    }
  }
}

/// Run one subcommand against a resolved config. Output is fully assembled
/// before anything is written. Returns the process exit code.
inline int run_command(const std::string& command, const RunConfig& cfg,
                       std::ostream& err = std::cerr) {
  try {
    std::ostringstream buf;
    if (command == "tradeoff") {
      cmd_tradeoff(cfg, buf);
    } else if (command == "delta-xi") {
      cmd_delta_xi(cfg, buf);
    } else if (command == "perr") {
      cmd_perr(cfg, buf);
    } else if (command == "covert-info") {
      cmd_covert_info(cfg, buf);
    } else if (command == "validate") {
      cmd_validate(cfg, buf);
    } else {
      throw config_error("unknown command '" + command + "'");
    }
    if (cfg.out_path.empty()) {
      std::cout << buf.str();
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) {
        err << "error: cannot open output file '" << cfg.out_path << "'\n";
        return kExitConfig;
      }
      out << buf.str();
    }
    return kExitOk;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace covert

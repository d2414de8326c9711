#pragma once

// Subcommands of the ppcf tool. Each returns the text to print and the exit
// code, so they can be driven from tests without a process boundary.

#include "ppcf/checks.hpp"
#include "ppcf/denot.hpp"
#include "ppcf/fullabs.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/parser.hpp"
#include "ppcf/pretty.hpp"
#include "ppcf/stdlib.hpp"
#include "ppcf/typecheck.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ppcf::cli {

using json = nlohmann::json;

enum ExitCode : int { Ok = 0, DomainError = 1, ResourceError = 2 };

struct CmdResult {
  std::string output;
  int exit_code = Ok;
};

enum class Format { Json, Table };

struct RunConfig {
  std::size_t steps = 500;       // k
  std::size_t trunc = 32;        // N
  std::size_t fix_iters = 100;   // K
  bool use_float = false;
  double tolerance = 1e-9;       // float mode only
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t max_steps = 10000;
  std::size_t grid_denom = 4;
  std::size_t web_size = 2;
  std::optional<std::size_t> confirm_steps;
  Rational mass_floor = 0;
  std::size_t frontier_cap = ExploreConfig{}.frontier_cap;
  Format format = Format::Json;

  EvalConfig eval_config() const {
    EvalConfig c;
    c.nat_trunc = trunc;
    c.fix_iters = fix_iters;
    return c;
  }
};

/// Thrown for unreadable input files.
class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Term load_term(const std::string& path) { return parse(read_file(path)); }

namespace detail {

inline json envelope() { return json{{"schema", 1}}; }

inline std::string render(const json& j) { return j.dump(2) + "\n"; }

template <class S>
std::string prob_string(const S& x) {
  return format_scalar(x);
}

inline json value_json(const Term& v) {
  if (v.is(Kind::Num)) return v.numeral();
  return pretty(v);
}

inline json distribution_json(const Distribution& d) {
  json arr = json::array();
  for (const auto& [v, p] : d.mass) arr.push_back({{"value", value_json(v)}, {"prob", format_rational(p)}});
  return arr;
}

template <class S>
json ground_json(const GroundVec<S>& v) {
  json arr = json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != S(0)) arr.push_back({{"value", i}, {"prob", prob_string(v[i])}});
  return arr;
}

template <class S>
S total(const GroundVec<S>& v) {
  S t = 0;
  for (const auto& x : v) t += x;
  return t;
}

inline void require_nat(const Term& m) {
  Type t = typecheck(m);
  if (!t.is_nat()) throw TypeError("expected a closed term of type nat, got " + t.to_string());
}

inline std::string table(const json& j) {
  std::ostringstream out;
  auto rows = [&](const json& arr, const char* header) {
    out << header << "\n";
    for (const auto& e : arr) {
      out << (e["value"].is_string() ? e["value"].get<std::string>() : e["value"].dump()) << "\t";
      for (const char* f : {"prob", "delta", "count"})
        if (e.contains(f)) out << (e[f].is_string() ? e[f].get<std::string>() : e[f].dump()) << "\t";
      out << "\n";
    }
  };
  if (j.contains("distribution")) rows(j["distribution"], "value\tprob");
  if (j.contains("deltas")) rows(j["deltas"], "value\tdelta");
  if (j.contains("histogram")) rows(j["histogram"], "value\tcount");
  for (const auto& [k, v] : j.items()) {
    if (k == "schema" || k == "distribution" || k == "deltas" || k == "histogram") continue;
    out << k << "\t" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
  return out.str();
}

inline CmdResult finish(const json& j, const RunConfig& rc, int code = Ok) {
  return {rc.format == Format::Table ? table(j) : render(j), code};
}

inline CmdResult failure(const std::string& kind, const std::string& message, int code,
                         std::optional<std::pair<std::size_t, std::size_t>> where = std::nullopt) {
  json j = envelope();
  j["error"] = {{"kind", kind}, {"message", message}};
  if (where) {
    j["error"]["line"] = where->first;
    j["error"]["column"] = where->second;
  }
  return {render(j), code};
}

// Runs a command body, mapping library exceptions to exit codes.
inline CmdResult guarded(const std::function<CmdResult()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return failure("parse", e.what(), DomainError, std::make_pair(e.line(), e.column()));
  } catch (const TypeError& e) {
    return failure("type", e.what(), DomainError);
  } catch (const ResourceLimit& e) {
    return failure("resource", e.what(), ResourceError);
  } catch (const DegreeBoundExceeded& e) {
    return failure("resource", e.what(), ResourceError);
  } catch (const IoError& e) {
    return failure("io", e.what(), DomainError);
  } catch (const Error& e) {
    return failure("domain", e.what(), DomainError);
  } catch (const std::invalid_argument& e) {
    return failure("argument", e.what(), DomainError);
  }
}

template <class S>
json denot_json(const Term& m, const RunConfig& rc) {
  auto rep = denot_report<S>(m, rc.eval_config());
  json j;
  j["distribution"] = ground_json(rep.dist);
  j["residual"] = prob_string(S(1) - total(rep.dist));
  j["dropped_mass"] = prob_string(rep.dropped_mass);
  j["last_fix_delta"] = prob_string(rep.last_fix_delta);
  j["trunc"] = rc.trunc;
  j["fix_iters"] = rc.fix_iters;
  return j;
}

}  // namespace detail

inline CmdResult cmd_check(const std::string& file, const RunConfig& rc = {}) {
  return detail::guarded([&] {
    Term m = load_term(file);
    json j = detail::envelope();
    j["type"] = typecheck(m).to_string();
    j["term"] = pretty(m);
    return detail::finish(j, rc);
  });
}

inline CmdResult cmd_dist(const std::string& file, const RunConfig& rc) {
  return detail::guarded([&] {
    Term m = load_term(file);
    json j = detail::envelope();
    j["type"] = typecheck(m).to_string();
    ExploreConfig ec;
    ec.mass_floor = rc.mass_floor;
    ec.frontier_cap = rc.frontier_cap;
    Distribution d = explore(m, rc.steps, ec);
    j["distribution"] = detail::distribution_json(d);
    j["residual"] = format_rational(d.residual);
    j["steps"] = d.steps;
    if (rc.mass_floor > 0) j["floored"] = format_rational(d.floored);
    return detail::finish(j, rc);
  });
}

inline CmdResult cmd_denot(const std::string& file, const RunConfig& rc) {
  return detail::guarded([&] {
    Term m = load_term(file);
    detail::require_nat(m);
    json j = rc.use_float ? detail::denot_json<double>(m, rc) : detail::denot_json<Rational>(m, rc);
    j["schema"] = 1;
    j["mode"] = rc.use_float ? "float64" : "exact";
    return detail::finish(j, rc);
  });
}

inline json adequacy_json(const Term& m, const RunConfig& rc) {
  detail::require_nat(m);
  ExploreConfig ec;
  ec.frontier_cap = rc.frontier_cap;
  Distribution op = explore(m, rc.steps, ec);
  auto rep = denot_report<Rational>(m, rc.eval_config());
  json j = detail::envelope();
  json deltas = json::array();
  Rational max_delta = 0;
  std::size_t beyond = 0;  // operational values outside the truncation
  for (const auto& [v, p] : op.mass)
    if (v.numeral() >= rc.trunc) ++beyond;
  for (std::size_t i = 0; i < rc.trunc; ++i) {
    Rational d = rep.dist[i] - op.at(i);
    if (d == 0 && rep.dist[i] == 0) continue;
    deltas.push_back({{"value", i}, {"delta", format_rational(d)}});
    if (abs(d) > max_delta) max_delta = abs(d);
  }
  j["operational"] = {{"distribution", detail::distribution_json(op)},
                      {"residual", format_rational(op.residual)},
                      {"steps", op.steps}};
  j["denotational"] = {{"distribution", detail::ground_json(rep.dist)},
                       {"dropped_mass", format_rational(rep.dropped_mass)},
                       {"last_fix_delta", format_rational(rep.last_fix_delta)}};
  j["deltas"] = deltas;
  j["max_delta"] = format_rational(max_delta);
  j["values_beyond_trunc"] = beyond;
  j["exact_match"] = max_delta == 0 && beyond == 0;
  return j;
}

inline CmdResult cmd_adequacy(const std::string& file, const RunConfig& rc) {
  return detail::guarded([&] {
    Term m = load_term(file);
    if (!rc.use_float) return detail::finish(adequacy_json(m, rc), rc);
    // Float mode compares against the float evaluator within the tolerance.
    detail::require_nat(m);
    ExploreConfig ec;
    ec.frontier_cap = rc.frontier_cap;
    Distribution op = explore(m, rc.steps, ec);
    auto rep = denot_report<double>(m, rc.eval_config());
    json j = detail::envelope();
    json deltas = json::array();
    double max_delta = 0;
    for (std::size_t i = 0; i < rc.trunc; ++i) {
      double d = rep.dist[i] - op.at(i).get_d();
      if (d == 0 && rep.dist[i] == 0) continue;
      deltas.push_back({{"value", i}, {"delta", d}});
      max_delta = std::max(max_delta, std::abs(d));
    }
    j["deltas"] = deltas;
    j["max_delta"] = max_delta;
    j["tolerance"] = rc.tolerance;
    j["within_tolerance"] = max_delta <= rc.tolerance;
    return detail::finish(j, rc);
  });
}

inline CmdResult cmd_run(const std::string& file, const RunConfig& rc) {
  return detail::guarded([&] {
    Term m = load_term(file);
    typecheck(m);
    std::map<Term, std::size_t, std::function<bool(const Term&, const Term&)>> hist(
        [](const Term& a, const Term& b) {
          if (a.is(Kind::Num) != b.is(Kind::Num)) return a.is(Kind::Num);
          if (a.is(Kind::Num)) return a.numeral() < b.numeral();
          return pretty(a) < pretty(b);
        });
    std::size_t timeouts = 0;
    for (std::size_t i = 0; i < rc.samples; ++i) {
      SampleOutcome o = sample(m, rc.seed + i, rc.max_steps);
      if (o.timed_out())
        ++timeouts;
      else
        ++hist[*o.value];
    }
    json j = detail::envelope();
    json arr = json::array();
    for (const auto& [v, c] : hist) {
      Rational f(static_cast<unsigned long>(c), static_cast<unsigned long>(std::max<std::size_t>(rc.samples, 1)));
      f.canonicalize();
      arr.push_back({{"value", detail::value_json(v)}, {"count", c}, {"freq", format_rational(f)}});
    }
    j["histogram"] = arr;
    j["timeouts"] = timeouts;
    j["samples"] = rc.samples;
    j["seed"] = rc.seed;
    j["max_steps"] = rc.max_steps;
    return detail::finish(j, rc);
  });
}

inline json separation_json(const SeparationResult& r) {
  json q = json::array();
  for (const auto& x : r.q) q.push_back(format_rational(x));
  json j{{"found", true},
         {"point", r.point.to_string()},
         {"q", q},
         {"denot", {format_rational(r.denot.first), format_rational(r.denot.second)}},
         {"context", pretty(r.context.term())},
         {"grid_denom", r.grid_denom}};
  if (r.operational)
    j["operational"] = {format_rational(r.operational->first), format_rational(r.operational->second)};
  return j;
}

/// Searches web points of σ up to `web_size` with grid D, then 2D, 4D, ...
/// up to max(D,16); reports the first separating point.
inline CmdResult cmd_separate(const std::string& file1, const std::string& file2, const std::string& type,
                              const RunConfig& rc) {
  return detail::guarded([&] {
    Term m1 = load_term(file1), m2 = load_term(file2);
    Type sigma = parse_type(type);
    for (const Term* m : {&m1, &m2}) {
      Type t = typecheck(*m);
      if (t != sigma) throw TypeError("term has type " + t.to_string() + ", expected " + sigma.to_string());
    }
    if (rc.grid_denom == 0) throw std::invalid_argument("grid denominator must be positive");
    auto points = enumerate_web(sigma, rc.web_size);
    const std::size_t max_denom = std::max<std::size_t>(rc.grid_denom, 16);
    json j = detail::envelope();
    for (std::size_t d = rc.grid_denom; d <= max_denom; d *= 2) {
      for (const auto& a : points) {
        auto r = separate(m1, m2, sigma, a, rc.eval_config(), d);
        if (!r) continue;
        if (rc.confirm_steps) r->operational = obs_distinguish(m1, m2, r->context, *rc.confirm_steps);
        j.update(separation_json(*r));
        return detail::finish(j, rc);
      }
    }
    j["found"] = false;
    j["points_tried"] = points.size();
    j["max_grid_denom"] = max_denom;
    return detail::finish(j, rc);
  });
}

inline std::vector<std::string> stdlib_names() {
  return {"omega", "pred",  "add",    "shift", "exp", "cmp",       "probe",  "pprod",
          "pchoose", "unift", "unif", "ran",   "las_vegas", "unshift"};
}

inline stdlib::StdTerm stdlib_term(const std::string& name, const std::vector<std::string>& args) {
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw std::invalid_argument(name + " takes " + std::to_string(lo) +
                                  (lo == hi ? "" : " to " + std::to_string(hi)) + " parameters");
  };
  auto natural = [&](std::size_t i) -> std::uint64_t {
    const std::string& s = args.at(i);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("expected a natural number, got '" + s + "'");
    return std::stoull(s);
  };
  auto type_arg = [&](std::size_t i) { return i < args.size() ? parse_type(args[i]) : Type::nat(); };
  Term t = [&]() -> Term {
    if (name == "omega") return want(0, 1), stdlib::omega(type_arg(0));
    if (name == "pred") return want(0, 0), stdlib::pred();
    if (name == "add") return want(0, 0), stdlib::add();
    if (name == "shift") return want(1, 1), stdlib::shift(natural(0));
    if (name == "exp") return want(0, 0), stdlib::exp_();
    if (name == "cmp") return want(0, 0), stdlib::cmp();
    if (name == "probe") return want(1, 1), stdlib::probe(natural(0));
    if (name == "pprod") return want(1, 1), stdlib::pprod(natural(0));
    if (name == "pchoose") return want(1, 2), stdlib::pchoose(natural(0), type_arg(1));
    if (name == "unift") return want(0, 0), stdlib::unift();
    if (name == "unif") return want(0, 0), stdlib::unif();
    if (name == "las_vegas") return want(0, 0), stdlib::las_vegas();
    if (name == "unshift") return want(1, 1), stdlib::unshift(natural(0));
    if (name == "ran") {
      std::vector<Rational> ps;
      for (const auto& a : args) ps.push_back(parse_rational(a));
      return stdlib::ran(ps);
    }
    throw std::invalid_argument("unknown library program '" + name + "'");
  }();
  return {name, args, t};
}

/// Prints the program in concrete syntax (reparseable), followed by a newline.
inline CmdResult cmd_stdlib(const std::string& name, const std::vector<std::string>& args) {
  return detail::guarded([&] { return CmdResult{pretty(stdlib_term(name, args).term) + "\n", Ok}; });
}

}  // namespace ppcf::cli

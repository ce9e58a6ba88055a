#include "plq/cli.hpp"

#include "plq/aggregate.hpp"
#include "plq/io.hpp"
#include "plq/oracle.hpp"
#include "plq/recession.hpp"
#include "plq/spectral.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>

namespace plq {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

using nlohmann::json;

std::uint64_t seed_from_env() {
  const char* s = std::getenv("PLQ_SEED");
  if (!s || !*s) return 0x5eed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 0);
  if (*end != '\0') throw InputError(fmt::format("PLQ_SEED must be an integer, got \"{}\"", s));
  return v;
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    const std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw InputError(fmt::format("bad number \"{}\" in {}", item, what));
    out.push_back(v);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

Vector parse_point(const std::string& text, int dim) {
  const auto vals = split_numbers(text, ',', "--point");
  if (static_cast<int>(vals.size()) != dim) {
    throw InputError(fmt::format("--point has {} coordinates, the function has dimension {}", vals.size(), dim));
  }
  return Eigen::Map<const Vector>(vals.data(), dim);
}

struct Axis {
  double lo, hi;
  int count;

  double at(int k) const { return count == 1 ? lo : lo + (hi - lo) * k / (count - 1); }
};

std::vector<Axis> parse_grid(const std::string& spec, int dim) {
  std::vector<Axis> axes;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = spec.find(',', start);
    const std::string part = spec.substr(start, end == std::string::npos ? std::string::npos : end - start);
    const auto vals = split_numbers(part, ':', "--grid");
    if (vals.size() != 3 || vals[2] < 1 || vals[2] != std::floor(vals[2])) {
      throw InputError(fmt::format("--grid axis \"{}\" must be min:max:count", part));
    }
    axes.push_back({vals[0], vals[1], static_cast<int>(vals[2])});
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (static_cast<int>(axes.size()) != dim) {
    throw InputError(fmt::format("--grid has {} axes, the function has dimension {}", axes.size(), dim));
  }
  return axes;
}

std::string format_vector(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += fmt::format("{}{:.6g}", i ? ", " : "", v(i));
  return s + ")";
}

std::string format_value(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return fmt::format("{}", v);
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, bool as_json, std::ostream& out) {
  const PLQFunction f = load_plq(path);
  const ValidationReport rep = validate(f, seed_from_env());
  if (as_json) {
    json j = {{"valid", rep.ok()}, {"structural", rep.structural}};
    j["overlaps"] = json::array();
    for (const auto& v : rep.overlaps) {
      j["overlaps"].push_back({{"pieces", {v.first, v.second}}, {"witness", vector_to_json(v.witness)}});
    }
    j["continuity"] = json::array();
    for (const auto& v : rep.continuity) {
      j["continuity"].push_back(
          {{"pieces", {v.first, v.second}}, {"witness", vector_to_json(v.witness)}, {"gap", v.gap}});
    }
    out << j.dump(2) << '\n';
  } else if (rep.ok()) {
    fmt::print(out, "valid: {} pieces in dimension {}\n", f.size(), f.dim());
  } else {
    fmt::print(out, "invalid\n");
    for (const auto& s : rep.structural) fmt::print(out, "  {}\n", s);
    for (const auto& v : rep.overlaps) {
      fmt::print(out, "  overlap: pieces {} and {} near {}\n", v.first, v.second, format_vector(v.witness));
    }
    for (const auto& v : rep.continuity) {
      fmt::print(out, "  discontinuity: pieces {} and {} differ by {:.3g} at {}\n", v.first, v.second, v.gap,
                 format_vector(v.witness));
    }
  }
  return rep.ok() ? kOk : kNegative;
}

int cmd_threshold(const std::string& path, bool as_json, std::ostream& out) {
  const PLQFunction f = load_plq(path);
  const ThresholdReport rep = threshold_plq(f);
  if (as_json) {
    out << report_to_json(rep).dump(2) << '\n';
    return kOk;
  }
  std::string active;
  for (int i : rep.active_set) active += fmt::format("{}{}", active.empty() ? "" : ", ", i);
  fmt::print(out, "r_bar = {:.3f}  ({})\n", rep.r_bar, rep.r_bar);
  fmt::print(out, "active set = {{{}}}\n", active);
  fmt::print(out, "domain = {}\n", rep.overall_domain);
  fmt::print(out, "{:>5}  {:>24}  {:>9}  {}\n", "piece", "r_bar", "r_bar(3)", "domain");
  for (const auto& s : rep.pieces) {
    fmt::print(out, "{:>5}  {:>24}  {:>9.3f}  {}\n", s.index, fmt::format("{}", s.r_bar), s.r_bar, s.domain);
  }
  for (const auto& w : rep.warnings) fmt::print(out, "warning: {}\n", w);
  return kOk;
}

int cmd_domain(const std::string& path, const std::string& point, bool with_oracle, bool as_json, std::ostream& out) {
  const PLQFunction f = load_plq(path);
  const Vector xbar = parse_point(point, f.dim());
  const ThresholdReport rep = threshold_plq(f);
  const auto verdicts = classify_active_pieces(rep, f, xbar);
  const Membership m = classify_point_plq(rep, f, xbar);

  json j = {{"membership", to_string(m)}, {"r_bar", rep.r_bar}, {"point", vector_to_json(xbar)}};
  j["pieces"] = json::array();
  std::string text = fmt::format("{}\nr_bar = {}\n", to_string(m), rep.r_bar);
  for (const auto& v : verdicts) {
    const auto i = static_cast<std::size_t>(v.index - 1);
    const auto& a = rep.analyses[i];
    const Vector coeff = f.pieces()[i].fn.b() - a.r_bar * xbar;
    json pj = {{"index", v.index}, {"membership", to_string(v.membership)}, {"directions", json::array()}};
    text += fmt::format("piece {}: {}{}\n", v.index, to_string(v.membership),
                        a.bounded_region ? " (bounded region)" : "");
    for (const auto& u : a.Phi.directions) {
      const double H = coeff.dot(u);
      const char* sign = H > tol::kSign ? "+" : H < -tol::kSign ? "-" : "0";
      pj["directions"].push_back({{"u", vector_to_json(u)}, {"H", H}, {"sign", sign}});
      text += fmt::format("  u = {}  H = {:.6g} ({})\n", format_vector(u), H, sign);
    }
    if (!a.Phi.isolated()) text += "  minimizing directions form a continuum (sampled)\n";
    j["pieces"].push_back(pj);
  }
  if (with_oracle) {
    const OracleVerdict ov = envelope_numeric(f, rep.r_bar, xbar);
    j["oracle"] = verdict_to_json(ov);
    text += fmt::format("oracle: {}", to_string(ov.kind));
    if (ov.kind == VerdictKind::Finite) text += fmt::format(" value = {:.9g}", ov.value);
    text += fmt::format(" (radius {})\n", ov.radius_used);
  }
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << text;
  }
  return m == Membership::NonMember ? kNegative : kOk;
}

int cmd_envelope(const std::string& path, double r, const std::string& grid, const std::string& output,
                 std::ostream& out) {
  if (r < 0.0) throw InputError("--r must be nonnegative");
  const PLQFunction f = load_plq(path);
  const auto axes = parse_grid(grid, f.dim());
  const bool closed_form = f.size() == 1 && f.pieces().front().region.is_full_space();

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw InputError("cannot write " + output);
  }
  std::ostream& dst = output.empty() ? out : file;

  std::string header;
  for (std::size_t d = 0; d < axes.size(); ++d) header += fmt::format("x{},", d + 1);
  dst << header << "e_rf\n";

  const int n = f.dim();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector x(n);
    for (int d = 0; d < n; ++d) x(d) = axes[static_cast<std::size_t>(d)].at(idx[static_cast<std::size_t>(d)]);
    std::string value;
    if (closed_form) {
      value = format_value(envelope_value_full(f.pieces().front().fn, r, x));
    } else {
      const OracleVerdict v = envelope_numeric(f, r, x);
      value = v.kind == VerdictKind::Finite          ? format_value(v.value)
              : v.kind == VerdictKind::DivergentNegInf ? "-inf"
                                                       : "inconclusive";
    }
    std::string row;
    for (int d = 0; d < n; ++d) row += fmt::format("{},", x(d));
    dst << row << value << '\n';
    // Row-major: the last coordinate varies fastest.
    int d = n - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == axes[static_cast<std::size_t>(d)].count) {
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return kOk;
}

int cmd_oracle_check(const std::string& path, const std::string& point, double tol, bool as_json, std::ostream& out) {
  if (!(tol > 0.0)) throw InputError("--tol must be positive");
  const PLQFunction f = load_plq(path);
  const Vector xbar = point.empty() ? Vector(Vector::Zero(f.dim())) : parse_point(point, f.dim());
  const ThresholdReport rep = threshold_plq(f);
  const ThresholdBracket br = threshold_bracket(f, xbar, tol);
  const bool agrees = br.contains(rep.r_bar, 1e-9);
  if (as_json) {
    json j = {{"r_bar", rep.r_bar},       {"lo", br.lo},       {"hi", br.hi},       {"found", br.found},
              {"inconclusive", br.inconclusive}, {"probes", br.probes}, {"agrees", agrees}};
    out << j.dump(2) << '\n';
  } else {
    fmt::print(out, "analytic r_bar = {}\n", rep.r_bar);
    if (br.found) {
      fmt::print(out, "oracle bracket = [{}, {}]{}\n", br.lo, br.hi, br.inconclusive ? " (inconclusive probes)" : "");
    } else {
      fmt::print(out, "oracle bracket: no finite probe below 1024\n");
    }
    fmt::print(out, "{}\n", agrees ? "agree" : "disagree");
  }
  return agrees ? kOk : kNegative;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prox-boundedness thresholds and Moreau envelope domains of PLQ functions"};
  app.require_subcommand(1);

  std::string path, point, grid, output;
  bool as_json = false, with_oracle = false;
  double r = 0.0, tol = 1e-2;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", path, "PLQ function in JSON")->required();
    sub->add_flag("--json", as_json, "Machine-readable output");
  };
  auto* validate_cmd = app.add_subcommand("validate", "Check continuity and piece overlaps");
  add_common(validate_cmd);
  auto* threshold_cmd = app.add_subcommand("threshold", "Threshold r_bar, per-piece table and active set");
  add_common(threshold_cmd);
  auto* domain_cmd = app.add_subcommand("domain", "Classify a point against the envelope domain at r_bar");
  add_common(domain_cmd);
  domain_cmd->add_option("--point", point, "Point v1,v2,...")->required();
  domain_cmd->add_flag("--oracle", with_oracle, "Append the numeric oracle verdict");
  auto* envelope_cmd = app.add_subcommand("envelope", "Sample e_r f on a grid as CSV");
  envelope_cmd->add_option("file", path, "PLQ function in JSON")->required();
  envelope_cmd->add_option("--r", r, "Prox-parameter")->required();
  envelope_cmd->add_option("--grid", grid, "xmin:xmax:n[,ymin:ymax:m]")->required();
  envelope_cmd->add_option("-o,--output", output, "Write CSV to this file instead of stdout");
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare r_bar with a numeric threshold bracket");
  add_common(oracle_cmd);
  oracle_cmd->add_option("--point", point, "Point v1,v2,... (default: origin)");
  oracle_cmd->add_option("--tol", tol, "Bracket width")->capture_default_str();

  std::vector<std::string> argv_store{"plq_cli"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(path, as_json, out);
    if (threshold_cmd->parsed()) return cmd_threshold(path, as_json, out);
    if (domain_cmd->parsed()) return cmd_domain(path, point, with_oracle, as_json, out);
    if (envelope_cmd->parsed()) return cmd_envelope(path, r, grid, output, out);
    if (oracle_cmd->parsed()) return cmd_oracle_check(path, point, tol, as_json, out);
  } catch (const ValidationFailure& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kNegative;
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kInputError;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kInputError;
  }
  return kInputError;
}

}  // namespace plq

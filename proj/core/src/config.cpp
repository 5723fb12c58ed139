#include "tms/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace tms {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v, int line) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ParseError(line, "not a number: '" + std::string(v) + "'");
  return x;
}

template <typename Int>
Int parse_int(std::string_view v, int line) {
  Int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError(line, "not an integer: '" + std::string(v) + "'");
  return x;
}

bool parse_bool(std::string_view v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(line, "not a boolean: '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view v, int line) {
  std::vector<double> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse_double(trim(v.substr(0, comma)), line));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += format_number(xs[i]);
  }
  return s;
}

const std::map<std::string, DataKind>& data_names() {
  static const std::map<std::string, DataKind> names{{"gaussian", DataKind::kGaussianBump},
                                                     {"plane_plus_bump", DataKind::kPlanePlusBump},
                                                     {"null_wave", DataKind::kNullWave},
                                                     {"linear_plane", DataKind::kLinearPlane},
                                                     {"snapshot", DataKind::kCustom}};
  return names;
}

std::string data_name(DataKind kind) {
  for (const auto& [name, k] : data_names())
    if (k == kind) return name;
  return "?";
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

SimConfig parse_config(std::string_view text) {
  SimConfig c;
  std::set<std::string> seen;
  int line_no = 0;

  using Setter = std::function<void(std::string_view, int)>;
  const std::map<std::string, Setter> setters{
      {"n", [&](auto v, int l) { c.n = parse_int<int>(v, l); }},
      {"q", [&](auto v, int l) { c.q = parse_int<int>(v, l); }},
      {"L", [&](auto v, int l) { c.L = parse_double(v, l); }},
      {"N", [&](auto v, int l) { c.N = parse_int<int>(v, l); }},
      {"cfl", [&](auto v, int l) { c.cfl = parse_double(v, l); }},
      {"t_final", [&](auto v, int l) { c.t_final = parse_double(v, l); }},
      {"data",
       [&](auto v, int l) {
         const auto it = data_names().find(std::string(v));
         if (it == data_names().end()) throw ParseError(l, "unknown data family '" + std::string(v) + "'");
         c.data.kind = it->second;
       }},
      {"epsilon", [&](auto v, int l) { c.data.epsilon = parse_double(v, l); }},
      {"sigma", [&](auto v, int l) { c.data.sigma = parse_double(v, l); }},
      {"center", [&](auto v, int l) { c.data.center = parse_list(v, l); }},
      {"polarization", [&](auto v, int l) { c.data.polarization = parse_list(v, l); }},
      {"null_axis", [&](auto v, int l) { c.data.null_axis = parse_int<int>(v, l) - 1; }},
      {"null_profile_power", [&](auto v, int l) { c.data.null_profile_power = parse_int<int>(v, l); }},
      {"plane_gradient", [&](auto v, int l) { c.data.plane_gradient = parse_list(v, l); }},
      {"data_file", [&](auto v, int) { c.data_file = std::string(v); }},
      {"diag_cadence", [&](auto v, int l) { c.diag_cadence = parse_int<int>(v, l); }},
      {"snapshot_cadence", [&](auto v, int l) { c.snapshot_cadence = parse_int<int>(v, l); }},
      {"output_dir", [&](auto v, int) { c.output_dir = std::string(v); }},
      {"seed", [&](auto v, int l) { c.seed = parse_int<std::uint64_t>(v, l); }},
      {"h_form",
       [&](auto v, int l) {
         if (v == "euler_lagrange")
           c.h_form = HForm::kEulerLagrange;
         else if (v == "with_cross_terms")
           c.h_form = HForm::kWithCrossTerms;
         else
           throw ParseError(l, "h_form must be euler_lagrange or with_cross_terms");
       }},
      {"system",
       [&](auto v, int l) {
         if (v == "minimal_surface")
           c.system = System::kMinimalSurface;
         else if (v == "linear_wave")
           c.system = System::kLinearWave;
         else
           throw ParseError(l, "system must be minimal_surface or linear_wave");
       }},
      {"allow_wrap", [&](auto v, int l) { c.allow_wrap = parse_bool(v, l); }},
      {"allow_any_dimension", [&](auto v, int l) { c.allow_any_dimension = parse_bool(v, l); }},
  };

  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (key.rfind("run.", 0) == 0) continue;
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(line_no, "repeated key '" + key + "'");
    if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
    it->second(value, line_no);
  }

  for (const char* required : {"n", "L", "N", "t_final", "data"})
    if (!seen.count(required)) throw ValidationError(required, "missing");
  if (c.data.kind == DataKind::kCustom) {
    if (!seen.count("data_file")) throw ValidationError("data_file", "required for snapshot data");
  } else if (!seen.count("epsilon")) {
    throw ValidationError("epsilon", "missing");
  }
  validate(c);
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const SimConfig& c) {
  if (c.n > kMaxSpatialDim)
    throw ValidationError("n", "desk-scale acceptance covers n ∈ {2,3}; n > 3 is not supported by this build");
  if (!c.allow_any_dimension && (c.n < 2 || c.n > 3))
    throw ValidationError("n", "desk-scale acceptance covers n ∈ {2,3} (set allow_any_dimension = true for n = 1)");
  if (c.n < 1) throw ValidationError("n", "must be at least 1");
  if (c.q < 1) throw ValidationError("q", "must be at least 1");
  if (c.q > kMaxCodim) throw ValidationError("q", "exceeds " + std::to_string(kMaxCodim));
  c.grid().validate();
  if (c.cfl > 0.25) throw ValidationError("cfl", "exceeds 0.25");
  if (!(c.cfl > 0.0)) throw ValidationError("cfl", "must be positive");
  if (!(c.t_final >= 0.0)) throw ValidationError("t_final", "must be non-negative");
  if (c.diag_cadence < 1) throw ValidationError("diag_cadence", "must be at least 1");
  if (c.snapshot_cadence < 0) throw ValidationError("snapshot_cadence", "must be non-negative");
  if (c.output_dir.empty()) throw ValidationError("output_dir", "must not be empty");
  if (c.data.kind == DataKind::kCustom) {
    if (c.data_file.empty()) throw ValidationError("data_file", "required for snapshot data");
    return;
  }
  validate_family(c.data, c.grid());
  if (!c.allow_wrap) {
    const double r = support_radius(c.data);
    double offset = 0.0;
    if (r > 0.0)
      for (double x : c.data.center) offset = std::max(offset, std::abs(x));
    const double need = offset + r + c.t_final + 5.0 * c.grid().dx();
    if (c.L < need)
      throw ValidationError("L", "no-wrap rule violated: L = " + format_number(c.L) +
                                     " < |center| + r_support + t_final + 5 dx = " + format_number(need) +
                                     " (r_support = " + format_number(r) + ", t_final = " +
                                     format_number(c.t_final) + ")");
  }
}

std::string to_text(const SimConfig& c) {
  std::ostringstream o;
  o << "n = " << c.n << "\n";
  o << "q = " << c.q << "\n";
  o << "L = " << format_number(c.L) << "\n";
  o << "N = " << c.N << "\n";
  o << "cfl = " << format_number(c.cfl) << "\n";
  o << "t_final = " << format_number(c.t_final) << "\n";
  o << "data = " << data_name(c.data.kind) << "\n";
  if (c.data.kind == DataKind::kCustom) {
    o << "data_file = " << c.data_file << "\n";
  } else {
    o << "epsilon = " << format_number(c.data.epsilon) << "\n";
    o << "sigma = " << format_number(c.data.sigma) << "\n";
    if (!c.data.center.empty()) o << "center = " << format_list(c.data.center) << "\n";
    if (!c.data.polarization.empty()) o << "polarization = " << format_list(c.data.polarization) << "\n";
    o << "null_axis = " << c.data.null_axis + 1 << "\n";
    if (c.data.null_profile_power != 1) o << "null_profile_power = " << c.data.null_profile_power << "\n";
    if (!c.data.plane_gradient.empty()) o << "plane_gradient = " << format_list(c.data.plane_gradient) << "\n";
  }
  o << "diag_cadence = " << c.diag_cadence << "\n";
  o << "snapshot_cadence = " << c.snapshot_cadence << "\n";
  o << "output_dir = " << c.output_dir << "\n";
  o << "seed = " << c.seed << "\n";
  o << "h_form = " << (c.h_form == HForm::kEulerLagrange ? "euler_lagrange" : "with_cross_terms") << "\n";
  o << "system = " << (c.system == System::kMinimalSurface ? "minimal_surface" : "linear_wave") << "\n";
  o << "allow_wrap = " << (c.allow_wrap ? "true" : "false") << "\n";
  o << "allow_any_dimension = " << (c.allow_any_dimension ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace tms

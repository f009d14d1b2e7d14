#include "qfdiv/generators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"

namespace qfdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_value(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return fmt::format("{}", v);
}

std::string spec_name(const std::string& family, const std::vector<std::pair<std::string, double>>& params) {
  std::string out = family;
  for (std::size_t k = 0; k < params.size(); ++k) {
    out += k == 0 ? ':' : ',';
    out += params[k].first + "=" + format_value(params[k].second);
  }
  return out;
}

struct Limits {
  double value_at_zero;
  double slope_at_infinity;
  double deriv_at_zero;
  double intercept_at_infinity;
};

Generator make(std::string family, std::vector<std::pair<std::string, double>> params, RealFunction f,
               RealFunction df_left, RealFunction df_right, Limits limits, bool smooth) {
  Generator g;
  g.name = spec_name(family, params);
  g.family = std::move(family);
  g.params = std::move(params);
  g.f = std::move(f);
  g.df_left = std::move(df_left);
  g.df_right = std::move(df_right);
  g.value_at_zero = limits.value_at_zero;
  g.slope_at_infinity = limits.slope_at_infinity;
  g.deriv_at_zero = limits.deriv_at_zero;
  g.intercept_at_infinity = limits.intercept_at_infinity;
  g.smooth = smooth;
  g.normalized = std::abs(g.f(1.0)) <= 1e-14;
  return g;
}

Generator make_smooth(std::string family, std::vector<std::pair<std::string, double>> params, RealFunction f,
                      const RealFunction& df, Limits limits) {
  return make(std::move(family), std::move(params), std::move(f), df, df, limits, true);
}

// One-sided sign of u - 1: at u = 1 the left derivative sees -1 and the right +1.
double left_sign(double u) { return u > 1.0 ? 1.0 : -1.0; }
double right_sign(double u) { return u < 1.0 ? -1.0 : 1.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

// Arithmetic where a zero coefficient annihilates an infinite value.
double weighted(double coefficient, double value) { return coefficient == 0.0 ? 0.0 : coefficient * value; }

std::string normalize_family(std::string_view raw) {
  std::string s;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    s += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (s == "kl" || s == "umegaki") return "kl-quantum";
  if (s == "variational") return "tv";
  return s;
}

double parse_number(std::string_view text, std::string_view spec) {
  std::string s(text);
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return kInf;
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw FormatError(fmt::format("generator spec '{}': '{}' is not a number", spec, text));
  }
  return v;
}

}  // namespace

double Generator::param(std::string_view key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw std::out_of_range(fmt::format("generator {} has no parameter '{}'", name, key));
}

Generator chi_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha >= 1.0, fmt::format("chi-alpha: alpha must be >= 1, got {}", alpha));
  auto f = [alpha](double u) { return std::pow(std::abs(u - 1.0), alpha); };
  if (alpha == 1.0) {
    return make("chi-alpha", {{"alpha", alpha}}, f, left_sign, right_sign, {1.0, 1.0, -1.0, -1.0}, false);
  }
  auto df = [alpha](double u) {
    return alpha * std::pow(std::abs(u - 1.0), alpha - 1.0) * (u < 1.0 ? -1.0 : 1.0);
  };
  return make_smooth("chi-alpha", {{"alpha", alpha}}, f, df, {1.0, kInf, -alpha, -kInf});
}

Generator dichotomy(double alpha) {
  require(std::isfinite(alpha), "dichotomy: alpha must be finite");
  if (alpha == 0.0) {
    return make_smooth(
        "dichotomy", {{"alpha", 0.0}}, [](double u) { return u - 1.0 - std::log(u); },
        [](double u) { return 1.0 - 1.0 / u; }, {kInf, 1.0, -kInf, -kInf});
  }
  if (alpha == 1.0) {
    return make_smooth(
        "dichotomy", {{"alpha", 1.0}}, [](double u) { return 1.0 - u + u * std::log(u); },
        [](double u) { return std::log(u); }, {1.0, kInf, -kInf, -kInf});
  }
  const double scale = alpha * (1.0 - alpha);
  auto f = [alpha, scale](double u) { return (alpha * u + 1.0 - alpha - std::pow(u, alpha)) / scale; };
  auto df = [alpha](double u) { return (1.0 - std::pow(u, alpha - 1.0)) / (1.0 - alpha); };
  const Limits limits{
      alpha > 0.0 ? 1.0 / alpha : kInf,
      alpha > 1.0 ? kInf : 1.0 / (1.0 - alpha),
      alpha < 1.0 ? -kInf : 1.0 / (1.0 - alpha),
      alpha > 0.0 ? -kInf : 1.0 / alpha,
  };
  return make_smooth("dichotomy", {{"alpha", alpha}}, f, df, limits);
}

Generator matsushita(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, fmt::format("matsushita: alpha must lie in (0,1], got {}", alpha));
  auto f = [alpha](double u) { return std::pow(std::abs(1.0 - std::pow(u, alpha)), 1.0 / alpha); };
  // |f'(u)| = |1 - u^alpha|^{1/alpha - 1} u^{alpha - 1}
  auto magnitude = [alpha](double u) {
    return std::pow(std::abs(1.0 - std::pow(u, alpha)), 1.0 / alpha - 1.0) * std::pow(u, alpha - 1.0);
  };
  auto dl = [magnitude](double u) { return left_sign(u) * magnitude(u); };
  auto dr = [magnitude](double u) { return right_sign(u) * magnitude(u); };
  const double edge = alpha < 1.0 ? -kInf : -1.0;
  return make("matsushita", {{"alpha", alpha}}, f, dl, dr, {1.0, 1.0, edge, edge}, alpha < 1.0);
}

Generator puri_vincze(double alpha) {
  require(std::isfinite(alpha) && alpha >= 1.0, fmt::format("puri-vincze: alpha must be >= 1, got {}", alpha));
  auto f = [alpha](double u) { return std::pow(std::abs(1.0 - u), alpha) / std::pow(u + 1.0, alpha - 1.0); };
  auto derivative = [alpha](double u, double sign) {
    const double a = std::abs(1.0 - u);
    return (alpha * std::pow(a, alpha - 1.0) * sign * (u + 1.0) - (alpha - 1.0) * std::pow(a, alpha)) /
           std::pow(u + 1.0, alpha);
  };
  auto dl = [derivative](double u) { return derivative(u, left_sign(u)); };
  auto dr = [derivative](double u) { return derivative(u, right_sign(u)); };
  const double edge = 1.0 - 2.0 * alpha;  // self-conjugate: f'(0) = f*'(0)
  return make("puri-vincze", {{"alpha", alpha}}, f, dl, dr, {1.0, 1.0, edge, edge}, alpha > 1.0);
}

Generator arimoto(double alpha) {
  require(alpha > 0.0, fmt::format("arimoto: alpha must be positive, got {}", alpha));
  if (alpha == kInf) {
    auto f = [](double u) { return 0.5 * std::abs(1.0 - u); };
    auto dl = [](double u) { return 0.5 * left_sign(u); };
    auto dr = [](double u) { return 0.5 * right_sign(u); };
    return make("arimoto", {{"alpha", kInf}}, f, dl, dr, {0.5, 0.5, -0.5, -0.5}, false);
  }
  if (alpha == 1.0) {
    const double ln2 = std::log(2.0);
    return make_smooth(
        "arimoto", {{"alpha", 1.0}},
        [ln2](double u) { return (1.0 + u) * ln2 + u * std::log(u) - (1.0 + u) * std::log1p(u); },
        [ln2](double u) { return ln2 + std::log(u) - std::log1p(u); }, {ln2, ln2, -kInf, -kInf});
  }
  const double c = alpha / (alpha - 1.0);
  const double k = std::pow(2.0, 1.0 / alpha - 1.0);
  auto f = [alpha, c, k](double u) {
    return c * (std::pow(1.0 + std::pow(u, alpha), 1.0 / alpha) - k * (1.0 + u));
  };
  auto df = [alpha, c, k](double u) {
    return c * (std::pow(1.0 + std::pow(u, alpha), 1.0 / alpha - 1.0) * std::pow(u, alpha - 1.0) - k);
  };
  const double f0 = c * (1.0 - k);
  const double d0 = alpha > 1.0 ? -c * k : -kInf;
  return make_smooth("arimoto", {{"alpha", alpha}}, f, df, {f0, f0, d0, d0});
}

Generator kl_quantum() {
  return make_smooth(
      "kl-quantum", {}, [](double u) { return u * std::log(u); }, [](double u) { return std::log(u) + 1.0; },
      {0.0, kInf, -kInf, -kInf});
}

Generator neg_log() {
  return make_smooth(
      "neg-log", {}, [](double u) { return -std::log(u); }, [](double u) { return -1.0 / u; },
      {kInf, 0.0, -kInf, -kInf});
}

Generator total_variation_generator() {
  return make(
      "tv", {}, [](double u) { return std::abs(u - 1.0); }, left_sign, right_sign, {1.0, 1.0, -1.0, -1.0},
      false);
}

Generator chi2() {
  return make_smooth(
      "chi2", {}, [](double u) { return u * u - 1.0; }, [](double u) { return 2.0 * u; },
      {-1.0, kInf, 0.0, -kInf});
}

Generator tsallis(double q) {
  require(q > 0.0 && q < 1.0, fmt::format("tsallis: q must lie in (0,1), got {}", q));
  return make_smooth(
      "tsallis", {{"q", q}}, [q](double u) { return (1.0 - std::pow(u, q)) / (1.0 - q); },
      [q](double u) { return -q * std::pow(u, q - 1.0) / (1.0 - q); }, {1.0 / (1.0 - q), 0.0, -kInf, -kInf});
}

Generator hellinger() {
  return make_smooth(
      "hellinger", {},
      [](double u) {
        const double s = std::sqrt(u) - 1.0;
        return 0.5 * s * s;
      },
      [](double u) { return 0.5 * (1.0 - 1.0 / std::sqrt(u)); }, {0.5, 0.5, -kInf, -kInf});
}

Generator inv_minus_one() {
  return make_smooth(
      "inv-minus-one", {}, [](double u) { return 1.0 / u - 1.0; }, [](double u) { return -1.0 / (u * u); },
      {kInf, 0.0, -kInf, -1.0});
}

Generator conjugate(const Generator& g) {
  Generator c;
  c.name = "conjugate(" + g.name + ")";
  c.family = "conjugate";
  c.params = g.params;
  c.f = [f = g.f](double u) { return u * f(1.0 / u); };
  // 1/u reverses orientation, so f*'_- draws on f'_+ and vice versa.
  c.df_left = [f = g.f, d = g.df_right](double u) {
    const double v = 1.0 / u;
    return f(v) - v * d(v);
  };
  c.df_right = [f = g.f, d = g.df_left](double u) {
    const double v = 1.0 / u;
    return f(v) - v * d(v);
  };
  c.value_at_zero = g.slope_at_infinity;
  c.slope_at_infinity = g.value_at_zero;
  c.deriv_at_zero = g.intercept_at_infinity;
  c.intercept_at_infinity = g.deriv_at_zero;
  c.normalized = g.normalized;
  c.smooth = g.smooth;
  c.approximate = g.approximate;
  return c;
}

Generator shift(const Generator& g, double c) {
  if (c == 0.0) return g;
  Generator s = g;
  s.name = fmt::format("shift({},c={})", g.name, format_value(c));
  s.family = "shift";
  s.f = [f = g.f, c](double u) { return f(u) + c * (u - 1.0); };
  s.df_left = [d = g.df_left, c](double u) { return d(u) + c; };
  s.df_right = [d = g.df_right, c](double u) { return d(u) + c; };
  s.value_at_zero = g.value_at_zero - c;
  s.slope_at_infinity = g.slope_at_infinity + c;
  s.deriv_at_zero = g.deriv_at_zero + c;
  s.intercept_at_infinity = g.intercept_at_infinity - c;
  return s;
}

Generator custom_generator(std::string name, RealFunction f, double value_at_zero, double slope_at_infinity) {
  Generator g;
  g.name = name;
  g.family = "custom";
  g.df_right = [f](double t) {
    const double h = 1e-7 * std::max(1.0, t);
    return (f(t + h) - f(t)) / h;
  };
  g.df_left = [f](double t) {
    const double h = std::min(1e-7 * std::max(1.0, t), 0.5 * t);
    return (f(t) - f(t - h)) / h;
  };
  g.f = std::move(f);
  g.value_at_zero = value_at_zero;
  g.slope_at_infinity = slope_at_infinity;
  g.deriv_at_zero = -kInf;
  g.intercept_at_infinity = -kInf;
  g.normalized = std::abs(g.f(1.0)) <= 1e-14;
  g.smooth = false;
  g.approximate = true;
  return g;
}

namespace {

struct FamilyInfo {
  const char* name;
  const char* key;  // nullptr when the family takes no parameter
  double default_value;
};

constexpr FamilyInfo kFamilies[] = {
    {"chi-alpha", "alpha", 2.0},   {"dichotomy", "alpha", 0.5}, {"matsushita", "alpha", 0.5},
    {"puri-vincze", "alpha", 2.0}, {"arimoto", "alpha", 2.0},   {"kl-quantum", nullptr, 0.0},
    {"neg-log", nullptr, 0.0},     {"tv", nullptr, 0.0},        {"chi2", nullptr, 0.0},
    {"tsallis", "q", 0.5},         {"hellinger", nullptr, 0.0}, {"inv-minus-one", nullptr, 0.0},
};

Generator build_family(const std::string& family, double value) {
  if (family == "chi-alpha") return chi_alpha(value);
  if (family == "dichotomy") return dichotomy(value);
  if (family == "matsushita") return matsushita(value);
  if (family == "puri-vincze") return puri_vincze(value);
  if (family == "arimoto") return arimoto(value);
  if (family == "kl-quantum") return kl_quantum();
  if (family == "neg-log") return neg_log();
  if (family == "tv") return total_variation_generator();
  if (family == "chi2") return chi2();
  if (family == "tsallis") return tsallis(value);
  if (family == "hellinger") return hellinger();
  if (family == "inv-minus-one") return inv_minus_one();
  throw std::logic_error("unhandled family " + family);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Generator parse_generator(std::string_view spec) {
  const std::string_view s = trim(spec);
  if (s.empty()) throw FormatError("empty generator spec");

  if (s.starts_with("conjugate(") && s.ends_with(")")) {
    return conjugate(parse_generator(s.substr(10, s.size() - 11)));
  }
  if (s.starts_with("shift(") && s.ends_with(")")) {
    const std::string_view inner = s.substr(6, s.size() - 7);
    const auto cut = inner.rfind(",c=");
    if (cut == std::string_view::npos) {
      throw FormatError(fmt::format("generator spec '{}': expected shift(<spec>,c=<value>)", spec));
    }
    return shift(parse_generator(inner.substr(0, cut)), parse_number(trim(inner.substr(cut + 3)), spec));
  }

  const auto colon = s.find(':');
  const std::string family = normalize_family(s.substr(0, colon));
  const FamilyInfo* info = nullptr;
  for (const auto& candidate : kFamilies) {
    if (family == candidate.name) info = &candidate;
  }
  if (info == nullptr) {
    throw FormatError(fmt::format("unknown generator '{}' (known: {})", s.substr(0, colon),
                                  fmt::join(catalog_families(), ", ")));
  }

  double value = info->default_value;
  bool seen = false;
  if (colon != std::string_view::npos) {
    std::string_view rest = s.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw FormatError(fmt::format("generator spec '{}': expected key=value, got '{}'", spec, item));
      }
      const std::string_view key = trim(item.substr(0, eq));
      if (info->key == nullptr || key != info->key) {
        throw FormatError(fmt::format("generator '{}' takes {}; got parameter '{}'", family,
                                      info->key ? fmt::format("parameter '{}'", info->key) : "no parameters",
                                      key));
      }
      if (seen) throw FormatError(fmt::format("generator spec '{}': parameter '{}' repeated", spec, key));
      value = parse_number(trim(item.substr(eq + 1)), spec);
      seen = true;
    }
  }
  return build_family(family, value);
}

std::vector<std::string> catalog_families() {
  std::vector<std::string> out;
  for (const auto& info : kFamilies) {
    out.push_back(info.key ? fmt::format("{}:{}=<v>", info.name, info.key) : std::string(info.name));
  }
  return out;
}

std::vector<Generator> full_catalog() {
  return {chi_alpha(1.0),  chi_alpha(2.0),   chi_alpha(3.0),   dichotomy(0.0),  dichotomy(0.5),
          dichotomy(1.0),  dichotomy(2.0),   dichotomy(-1.0),  matsushita(0.5), matsushita(1.0),
          puri_vincze(1.0), puri_vincze(2.0), arimoto(0.5),    arimoto(1.0),    arimoto(2.0),
          arimoto(kInf),   kl_quantum(),     neg_log(),        total_variation_generator(),
          chi2(),          tsallis(0.25),    tsallis(0.5),     tsallis(0.75),   hellinger(),
          inv_minus_one()};
}

std::vector<std::string> full_catalog_specs() {
  std::vector<std::string> out;
  for (const auto& g : full_catalog()) out.push_back(g.name);
  return out;
}

double secant_bound(const Generator& f, double r, double R) {
  require(r >= 0.0 && r <= 1.0 && R >= 1.0 && r < R,
          fmt::format("secant_bound: need 0 <= r <= 1 <= R and r < R, got r = {}, R = {}", r, R));
  return (weighted(R - 1.0, f(r)) + weighted(1.0 - r, f(R))) / (R - r);
}

double psi(const Generator& f, double t, double r, double R) {
  require(r >= 0.0 && r < t && t < R, fmt::format("psi: need 0 <= r < t < R, got r = {}, t = {}, R = {}", r, t, R));
  const double fr = f(r);
  const double ft = f(t);
  const double fR = f(R);
  if (std::isinf(fr) || std::isinf(ft) || std::isinf(fR)) return kInf;
  return (fR - ft) / (R - t) - (ft - fr) / (t - r);
}

double psi_sup(const Generator& f, double r, double R) {
  require(r >= 0.0 && r < R, fmt::format("psi_sup: need 0 <= r < R, got r = {}, R = {}", r, R));
  const double fr = f(r);
  const double fR = f(R);
  if (std::isinf(fr) || std::isinf(fR)) return kInf;

  double best = -kInf;
  bool saw_nan = false;
  auto take = [&](double v) {
    if (std::isnan(v)) saw_nan = true;
    else if (v > best) best = v;
  };

  const double chord = (fR - fr) / (R - r);
  take(chord - f.deriv_right(r));
  take(f.deriv_left(R) - chord);
  if (r < 1.0 && 1.0 < R) take(psi(f, 1.0, r, R));

  constexpr int kIntervals = 10000;
  const double h = (R - r) * 1e-6;
  const double lo = r + h;
  const double span = (R - h) - lo;
  for (int k = 0; k <= kIntervals; ++k) {
    const double t = k == kIntervals ? R - h : lo + span * (static_cast<double>(k) / kIntervals);
    const double ft = f(t);
    take((fR - ft) / (R - t) - (ft - fr) / (t - r));
  }
  return saw_nan ? kNaN : best;
}

double jensen_gap_bound(const Generator& f, double r, double R) {
  require(r >= 0.0 && r < R, fmt::format("jensen_gap_bound: need 0 <= r < R, got r = {}, R = {}", r, R));
  const double fr = f(r);
  const double fR = f(R);
  if (std::isinf(fr) || std::isinf(fR)) return kInf;
  return fr + fR - 2.0 * f(0.5 * (r + R));
}

double derivative_spread(const Generator& f, double r, double R) {
  return f.deriv_left(R) - f.deriv_right(r);
}

GeneratorAudit audit_generator(const Generator& g) {
  GeneratorAudit audit;
  constexpr int kPoints = 241;
  std::vector<double> grid;
  grid.reserve(kPoints + 1);
  for (int k = 0; k < kPoints; ++k) grid.push_back(std::pow(10.0, -6.0 + 9.0 * k / (kPoints - 1)));
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());

  auto allowance = [](double a, double b) { return 1e-12 * std::max(1.0, std::abs(a) + std::abs(b)); };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t step : {1u, 7u, 40u}) {
      const std::size_t j = i + step;
      if (j >= grid.size()) continue;
      const double a = grid[i];
      const double b = grid[j];
      const double fa = g(a);
      const double fb = g(b);
      const double mid = g(0.5 * (a + b));
      if (!(mid <= 0.5 * (fa + fb) + allowance(fa, fb))) {
        audit.convex = false;
        audit.problems.push_back(fmt::format("midpoint convexity fails on [{}, {}]", a, b));
      }
    }
    const double t = grid[i];
    const double dl = g.deriv_left(t);
    const double dr = g.deriv_right(t);
    if (!(dl <= dr + allowance(dl, dr))) {
      audit.derivatives_ordered = false;
      audit.problems.push_back(fmt::format("f'_-({}) = {} > f'_+ = {}", t, dl, dr));
    }
    if (i + 1 < grid.size()) {
      const double next = g.deriv_right(grid[i + 1]);
      if (!(dr <= next + allowance(dr, next))) {
        audit.derivative_monotone = false;
        audit.problems.push_back(fmt::format("f'_+ decreases between {} and {}", t, grid[i + 1]));
      }
    }
  }
  if (g.normalized && !(std::abs(g(1.0)) <= 1e-14)) {
    audit.normalization_ok = false;
    audit.problems.push_back(fmt::format("normalized but f(1) = {}", g(1.0)));
  }
  return audit;
}

}  // namespace qfdiv

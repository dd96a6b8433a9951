#include "plap/sources.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "plap/error.hpp"
#include "plap/format.hpp"
#include "plap/quadrature.hpp"

namespace plap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline double ipow(double u, double q) {
  if (q == 1.0) return u;
  if (q == 2.0) return u * u;
  if (q == 3.0) return u * u * u;
  if (q == 4.0) {
    const double u2 = u * u;
    return u2 * u2;
  }
  return std::pow(u, q);
}

void require_nonnegative(double u) {
  if (!(u >= 0.0))
    throw InvalidArgument("source evaluated at negative or NaN u = " +
                          format_short(u));
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_number(const std::string& s, std::string_view context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("source spec: bad number '" + s + "' in " +
                    std::string(context));
}

// Linear interpolation / extrapolation of the tabulated f.
double table_f(const std::vector<double>& u, const std::vector<double>& f,
               double x) {
  const auto it = std::upper_bound(u.begin(), u.end(), x);
  std::size_t k = static_cast<std::size_t>(it - u.begin());
  if (k == 0) return f.front();
  if (k >= u.size()) k = u.size() - 1;  // extrapolate with last segment
  const std::size_t a = k - 1;
  const double t = (x - u[a]) / (u[k] - u[a]);
  return f[a] + t * (f[k] - f[a]);
}

}  // namespace

SourceTerm SourceTerm::zero() { return SourceTerm(PowerSumData{}); }

SourceTerm SourceTerm::power_sum(std::vector<PowerTerm> terms) {
  for (const auto& t : terms) {
    if (!(t.coeff > 0.0) || !std::isfinite(t.coeff))
      throw InvalidArgument("power-sum coefficients must be positive");
    if (!(t.exponent >= 1.0) || !std::isfinite(t.exponent))
      throw InvalidArgument("power-sum exponents must be >= 1");
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) {
              return a.exponent > b.exponent;
            });
  return SourceTerm(PowerSumData{std::move(terms)});
}

SourceTerm SourceTerm::eigen_scaled(double c, double p, double lambda) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidArgument("eigscaled: c must be positive");
  if (!(p >= 2.0)) throw InvalidArgument("eigscaled: p must be >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("eigscaled: lambda must be positive");
  return SourceTerm(EigenScaledData{c, p, lambda});
}

SourceTerm SourceTerm::tabulated(std::vector<double> u, std::vector<double> f,
                                 std::string origin) {
  if (u.size() != f.size() || u.size() < 2)
    throw InvalidArgument("table: need at least two (u, f) knots");
  if (u.front() != 0.0 || f.front() != 0.0)
    throw InvalidArgument("table: first knot must be (0, 0) since f(0) = 0");
  for (std::size_t k = 1; k < u.size(); ++k) {
    if (!(u[k] > u[k - 1]))
      throw InvalidArgument("table: u knots must be strictly increasing");
    if (!(f[k] >= f[k - 1]))
      throw InvalidArgument("table: f knots must be nondecreasing");
    if (!(f[k] > 0.0))
      throw InvalidArgument("table: f must be positive for u > 0");
  }
  TabulatedData data{std::move(u), std::move(f), {}, std::move(origin)};
  data.cumulative.assign(data.u.size(), 0.0);
  for (std::size_t k = 1; k < data.u.size(); ++k) {
    const auto& uu = data.u;
    const auto& ff = data.f;
    data.cumulative[k] =
        data.cumulative[k - 1] +
        adaptive_simpson([&](double x) { return table_f(uu, ff, x); },
                         data.u[k - 1], data.u[k], 1e-12);
  }
  return SourceTerm(std::move(data));
}

SourceTerm::Kind SourceTerm::kind() const {
  return static_cast<Kind>(data_.index());
}

double SourceTerm::f(double u) const {
  require_nonnegative(u);
  return std::visit(
      Overloaded{
          [u](const PowerSumData& d) {
            double s = 0.0;
            for (const auto& t : d.terms) s += t.coeff * ipow(u, t.exponent);
            return s;
          },
          [u](const EigenScaledData& d) {
            return d.c * d.lambda * ipow(u, d.p - 1.0);
          },
          [u](const TabulatedData& d) { return table_f(d.u, d.f, u); },
      },
      data_);
}

double SourceTerm::F(double u) const {
  require_nonnegative(u);
  return std::visit(
      Overloaded{
          [u](const PowerSumData& d) {
            double s = 0.0;
            for (const auto& t : d.terms)
              s += t.coeff * ipow(u, t.exponent + 1.0) / (t.exponent + 1.0);
            return s;
          },
          [u](const EigenScaledData& d) {
            return d.c * d.lambda * ipow(u, d.p) / d.p;
          },
          [u](const TabulatedData& d) {
            if (u == 0.0) return 0.0;
            const auto it = std::upper_bound(d.u.begin(), d.u.end(), u);
            std::size_t k = static_cast<std::size_t>(it - d.u.begin()) - 1;
            if (k >= d.u.size()) k = d.u.size() - 1;
            auto fn = [&d](double x) { return table_f(d.u, d.f, x); };
            return d.cumulative[k] + adaptive_simpson(fn, d.u[k], u, 1e-10);
          },
      },
      data_);
}

std::vector<PowerTerm> SourceTerm::power_terms() const {
  return std::visit(
      Overloaded{
          [](const PowerSumData& d) { return d.terms; },
          [](const EigenScaledData& d) {
            return std::vector<PowerTerm>{{d.c * d.lambda, d.p - 1.0}};
          },
          [](const TabulatedData&) { return std::vector<PowerTerm>{}; },
      },
      data_);
}

std::optional<double> SourceTerm::leading_exponent() const {
  const auto terms = power_terms();
  if (terms.empty()) return std::nullopt;
  double q = terms.front().exponent;
  for (const auto& t : terms) q = std::max(q, t.exponent);
  return q;
}

std::string SourceTerm::describe() const {
  return std::visit(
      Overloaded{
          [](const PowerSumData& d) {
            if (d.terms.empty()) return std::string("powersum: 0");
            std::string s = "powersum: ";
            for (std::size_t k = 0; k < d.terms.size(); ++k) {
              if (k) s += " + ";
              s += format_double(d.terms[k].coeff) + "*u^" +
                   format_double(d.terms[k].exponent);
            }
            return s;
          },
          [](const EigenScaledData& d) {
            return "eigscaled: c=" + format_double(d.c);
          },
          [](const TabulatedData& d) { return "table: " + d.origin; },
      },
      data_);
}

bool source_needs_lambda(std::string_view spec) {
  return trim(spec).rfind("eigscaled", 0) == 0;
}

SourceTerm parse_source(std::string_view spec, double p,
                        std::optional<double> lambda,
                        const std::filesystem::path& base_dir) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  const std::string kind =
      colon == std::string::npos ? std::string("powersum") : trim(s.substr(0, colon));
  const std::string body =
      colon == std::string::npos ? s : trim(s.substr(colon + 1));

  if (kind == "powersum") {
    std::vector<PowerTerm> terms;
    std::string rest = body;
    std::erase_if(rest, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (rest.empty()) throw ConfigError("powersum: empty term list");
    if (rest == "0") return SourceTerm::zero();
    std::stringstream ss(rest);
    std::string term;
    while (std::getline(ss, term, '+')) {
      if (term.empty()) throw ConfigError("powersum: empty term in '" + s + "'");
      double a = 1.0, q = 0.0;
      const auto upos = term.find('u');
      if (upos == std::string::npos)
        throw ConfigError("powersum: term '" + term + "' has no 'u'");
      std::string coef = term.substr(0, upos);
      if (!coef.empty()) {
        if (coef.back() != '*')
          throw ConfigError("powersum: expected '*' in term '" + term + "'");
        coef.pop_back();
        a = to_number(coef, s);
      }
      const std::string tail = term.substr(upos + 1);
      if (tail.empty()) {
        q = 1.0;
      } else if (tail[0] == '^') {
        q = to_number(tail.substr(1), s);
      } else {
        throw ConfigError("powersum: bad exponent in term '" + term + "'");
      }
      terms.push_back({a, q});
    }
    try {
      return SourceTerm::power_sum(std::move(terms));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  if (kind == "eigscaled") {
    const auto eq = body.find('=');
    if (eq == std::string::npos || trim(body.substr(0, eq)) != "c")
      throw ConfigError("eigscaled: expected 'c=<value>'");
    const double c = to_number(trim(body.substr(eq + 1)), s);
    if (!lambda) throw ConfigError("eigscaled: first eigenvalue not available");
    try {
      return SourceTerm::eigen_scaled(c, p, *lambda);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  if (kind == "table") {
    if (body.empty()) throw ConfigError("table: missing path");
    std::filesystem::path path(body);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    std::ifstream is(path);
    if (!is) throw ConfigError("table: cannot open " + path.string());
    std::vector<double> us, fs;
    std::string line;
    while (std::getline(is, line)) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || std::isalpha(static_cast<unsigned char>(t[0])))
        continue;
      const auto comma = t.find(',');
      if (comma == std::string::npos)
        throw ConfigError("table: expected 'u,f' rows in " + path.string());
      us.push_back(to_number(trim(t.substr(0, comma)), path.string()));
      fs.push_back(to_number(trim(t.substr(comma + 1)), path.string()));
    }
    try {
      return SourceTerm::tabulated(std::move(us), std::move(fs), body);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  throw ConfigError("unknown source kind '" + kind +
                    "' (expected powersum, eigscaled or table)");
}

OsgoodResult osgood_test(const SourceTerm& source, double m, double horizon) {
  if (!(m > 0.0)) throw InvalidArgument("osgood_test: m must be positive");
  if (!(source.f(m) > 0.0))
    throw InvalidArgument("osgood_test: f(m) must be positive");

  OsgoodResult out;
  const auto leading = source.leading_exponent();
  if (leading) {
    out.analytic = true;
    if (*leading <= 1.0) {
      out.convergent = false;
      out.estimate = std::numeric_limits<double>::infinity();
      return out;
    }
  }

  auto inv_f = [&source](double s) { return 1.0 / source.f(s); };
  constexpr double kIncrementTol = 1e-8;
  double lo = m, total = 0.0, prev_inc = 0.0, inc = 0.0;
  bool settled = false;
  while (true) {
    const double hi = 2.0 * lo;
    inc = adaptive_simpson(inv_f, lo, hi, 1e-12);
    total += inc;
    lo = hi;
    if (inc < kIncrementTol) {
      settled = true;
      break;
    }
    if (lo > horizon) break;
    prev_inc = inc;
  }
  out.upper_limit = lo;

  if (leading) {
    // Tail beyond the last limit from the leading power, a*s^q dominates f.
    double a = 0.0;
    for (const auto& t : source.power_terms())
      if (t.exponent == *leading) a += t.coeff;
    const double q = *leading;
    out.convergent = true;
    out.estimate = total + std::pow(lo, 1.0 - q) / (a * (q - 1.0));
    return out;
  }

  const double ratio = prev_inc > 0.0 ? inc / prev_inc : 0.0;
  if (settled || ratio < 0.75) {
    out.convergent = true;
    const double r = std::min(ratio, 0.99);
    out.estimate = total + inc * r / (1.0 - r);
  } else {
    out.convergent = false;
    out.estimate = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace plap

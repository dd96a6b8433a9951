#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace plap {

/// One term a * u^q of a power-sum nonlinearity.
struct PowerTerm {
  double coeff;
  double exponent;
};

/// The nonlinearity f together with its antiderivative F(u) = int_0^u f.
///
/// Three families are supported:
///  - power sums f(u) = sum_j a_j u^{q_j} with a_j > 0, q_j >= 1 (the empty
///    sum is the zero source, used for pure diffusion runs);
///  - eigenvalue-scaled powers f(u) = c * lambda * u^{p-1}, with lambda
///    injected once at construction;
///  - tabulated monotone piecewise-linear f through (0, 0), extrapolated
///    linearly past the last knot.
/// Power families have closed-form F; tabulated F uses adaptive Simpson.
/// f and F are defined for u >= 0 only.
class SourceTerm {
 public:
  enum class Kind { PowerSum, EigenScaled, Tabulated };

  static SourceTerm zero();
  static SourceTerm power_sum(std::vector<PowerTerm> terms);
  static SourceTerm eigen_scaled(double c, double p, double lambda);
  /// `origin` is echoed by describe() ("table: <origin>").
  static SourceTerm tabulated(std::vector<double> u, std::vector<double> f,
                              std::string origin = "inline");

  Kind kind() const;
  bool is_power_family() const { return kind() != Kind::Tabulated; }

  /// f(u). Throws InvalidArgument for u < 0.
  double f(double u) const;
  /// F(u) = int_0^u f(s) ds. Throws InvalidArgument for u < 0.
  double F(double u) const;

  /// Power-family terms (an eigen-scaled source is one term c*lambda*u^{p-1}).
  /// Empty for tabulated sources.
  std::vector<PowerTerm> power_terms() const;
  /// Largest exponent of a power family; nullopt for tabulated or zero.
  std::optional<double> leading_exponent() const;

  /// Canonical specification string (see parse_source).
  std::string describe() const;

 private:
  struct PowerSumData {
    std::vector<PowerTerm> terms;
  };
  struct EigenScaledData {
    double c, p, lambda;
  };
  struct TabulatedData {
    std::vector<double> u, f, cumulative;
    std::string origin;
  };
  using Variant = std::variant<PowerSumData, EigenScaledData, TabulatedData>;

  explicit SourceTerm(Variant v) : data_(std::move(v)) {}

  Variant data_;
};

/// Parses a source specification:
///   "powersum: 1*u^3 + 0.5*u^2"   (also "u^3", "2*u", "powersum: 0")
///   "eigscaled: c=3"               (needs p and lambda)
///   "table: path.csv"              (two columns u,f; relative to base_dir)
/// Throws ConfigError on malformed input.
SourceTerm parse_source(std::string_view spec, double p = 2.0,
                        std::optional<double> lambda = std::nullopt,
                        const std::filesystem::path& base_dir = {});

/// True if the specification needs the first eigenvalue to be constructed.
bool source_needs_lambda(std::string_view spec);

/// Outcome of the Osgood integral test on int_m^infinity ds / f(s).
struct OsgoodResult {
  bool convergent = false;
  /// Value of the integral when convergent, +infinity otherwise.
  double estimate = 0.0;
  /// True if convergence was decided from the leading power.
  bool analytic = false;
  /// Largest upper integration limit visited by the numerical pass.
  double upper_limit = 0.0;
};

/// Decides convergence of int_m^inf ds/f(s). The upper limit is doubled
/// until the increment drops below 1e-8 (convergent) or exceeds `horizon`
/// with non-decaying increments (divergent). Power families are decided by
/// their leading exponent (q > 1 <=> convergent). Throws InvalidArgument if
/// m <= 0 or f(m) <= 0.
OsgoodResult osgood_test(const SourceTerm& source, double m,
                         double horizon = 1e12);

}  // namespace plap

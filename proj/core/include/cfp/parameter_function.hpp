#ifndef CFP_PARAMETER_FUNCTION_HPP
#define CFP_PARAMETER_FUNCTION_HPP

#include "cfp/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfp {

/// The weight sequence a_1, a_2, ... that fixes the invariant measure.
///
///   power         a_k = q k^(p-1)
///   power_tilted  a_k = h^k q k^(p-1)
///   table         a_k = values[k-1] for k <= values.size(), absent beyond
///
/// Values are kept in floating point always and, when the inputs are exact
/// (rational q and h, integer p, rational table entries), also as exact
/// rationals so the small-N oracles can run without rounding.
class ParameterFunction {
 public:
  enum class Kind { power, power_tilted, table };

  static ParameterFunction power(double q, double p);
  static ParameterFunction power_tilted(double q, double p, double h);
  /// Exact variants; p must be a positive integer for the rational path.
  static ParameterFunction power(const Rational& q, int p);
  static ParameterFunction power_tilted(const Rational& q, int p, const Rational& h);
  static ParameterFunction table(std::vector<double> values);
  static ParameterFunction table(std::vector<Rational> values);

  /// Parses "power:p=1,q=1", "power_tilted:p=1,q=1,h=1/2", "table:1,2,3/2"
  /// or "preset:<name>[:q=..]" (see sampler.hpp for the preset catalogue).
  /// Numeric fields given as integers, decimals or fractions stay exact.
  static ParameterFunction parse(std::string_view spec);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double h() const { return h_; }
  double log_h() const { return log_h_; }

  /// a_k in floating point; 0 beyond the end of a table.
  double operator()(int k) const;
  /// log a_k; -inf where a_k = 0.
  double log_value(int k) const;
  /// Exact a_k; throws ModelError when the function has no exact form.
  Rational exact(int k) const;
  bool has_exact() const { return exact_; }

  /// Largest k with a_k defined (INT_MAX for the power kinds).
  int max_index() const;

  /// Throws ConfigError unless a_1..a_n are all defined and positive.
  void require_positive_through(int n) const;

  /// a with a_k replaced by 0 outside [lo, hi], as a table of length n. Used
  /// for exact extreme-part probabilities; zero weights are allowed here only.
  ParameterFunction restricted(int n, int lo, int hi) const;

  /// a_k -> h^k a_k, same kind where possible.
  ParameterFunction tilted(double h) const;

  bool is_power_kind() const { return kind_ != Kind::table; }
  bool allows_zero() const { return allow_zero_; }
  std::string describe() const;

 private:
  ParameterFunction() = default;

  Kind kind_ = Kind::power;
  double q_ = 1, p_ = 1, h_ = 1, log_h_ = 0;
  std::vector<double> table_;
  bool exact_ = false;
  Rational q_exact_{1}, h_exact_{1};
  int p_int_ = 1;
  std::vector<Rational> table_exact_;
  bool allow_zero_ = false;
};

}  // namespace cfp

#endif  // CFP_PARAMETER_FUNCTION_HPP

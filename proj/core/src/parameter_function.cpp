#include "cfp/parameter_function.hpp"

#include "cfp/error.hpp"
#include "cfp/sampler.hpp"

#include <climits>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace cfp {

namespace {

void check_power_args(double q, double p) {
  if (!(q > 0) || !std::isfinite(q)) throw ConfigError("power parameter function needs q > 0");
  if (!(p > 0) || !std::isfinite(p)) throw ConfigError("power parameter function needs p > 0");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::map<std::string, std::string> parse_fields(std::string_view body) {
  std::map<std::string, std::string> fields;
  if (body.empty()) return fields;
  for (const auto& item : split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + item + "'");
    auto [it, fresh] = fields.emplace(item.substr(0, eq), item.substr(eq + 1));
    if (!fresh) throw ConfigError("duplicate field '" + it->first + "'");
  }
  return fields;
}

}  // namespace

ParameterFunction ParameterFunction::power(double q, double p) {
  check_power_args(q, p);
  ParameterFunction a;
  a.kind_ = Kind::power;
  a.q_ = q;
  a.p_ = p;
  return a;
}

ParameterFunction ParameterFunction::power_tilted(double q, double p, double h) {
  check_power_args(q, p);
  if (!(h > 0) || !std::isfinite(h)) throw ConfigError("tilt h must be positive");
  ParameterFunction a = power(q, p);
  a.kind_ = Kind::power_tilted;
  a.h_ = h;
  a.log_h_ = std::log(h);
  return a;
}

ParameterFunction ParameterFunction::power(const Rational& q, int p) {
  if (sgn(q) <= 0) throw ConfigError("power parameter function needs q > 0");
  if (p < 1) throw ConfigError("exact power parameter function needs integer p >= 1");
  ParameterFunction a = power(to_double(q), static_cast<double>(p));
  a.exact_ = true;
  a.q_exact_ = q;
  a.p_int_ = p;
  return a;
}

ParameterFunction ParameterFunction::power_tilted(const Rational& q, int p, const Rational& h) {
  if (sgn(h) <= 0) throw ConfigError("tilt h must be positive");
  ParameterFunction a = power(q, p);
  a.kind_ = Kind::power_tilted;
  a.h_ = to_double(h);
  a.log_h_ = log_of(h);
  a.h_exact_ = h;
  return a;
}

ParameterFunction ParameterFunction::table(std::vector<double> values) {
  if (values.empty()) throw ConfigError("empty parameter table");
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError("parameter table entries must be positive");
  }
  ParameterFunction a;
  a.kind_ = Kind::table;
  a.table_ = std::move(values);
  return a;
}

ParameterFunction ParameterFunction::table(std::vector<Rational> values) {
  if (values.empty()) throw ConfigError("empty parameter table");
  std::vector<double> approx;
  approx.reserve(values.size());
  for (const auto& v : values) {
    if (sgn(v) <= 0) throw ConfigError("parameter table entries must be positive");
    approx.push_back(to_double(v));
  }
  ParameterFunction a = table(std::move(approx));
  a.exact_ = true;
  a.table_exact_ = std::move(values);
  return a;
}

ParameterFunction ParameterFunction::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  if (kind == "table") {
    std::vector<Rational> values;
    for (const auto& item : split(body, ',')) values.push_back(parse_rational(item));
    return table(std::move(values));
  }
  if (kind == "preset") {
    const auto parts = split(body, ':');
    if (parts.size() > 2) throw ConfigError("bad preset spec: " + std::string(spec));
    Rational q{1};
    if (parts.size() == 2) {
      for (const auto& [key, value] : parse_fields(parts[1])) {
        if (key != "q") throw ConfigError("unknown preset field '" + key + "'");
        q = parse_rational(value);
      }
    }
    return assembly_preset(parse_assembly(parts[0]), q);
  }
  if (kind != "power" && kind != "power_tilted") {
    throw ConfigError("unknown parameter function kind '" + kind + "'");
  }
  auto fields = parse_fields(body);
  for (const auto& [key, value] : fields) {
    if (key != "p" && key != "q" && !(key == "h" && kind == "power_tilted")) {
      throw ConfigError("unknown field '" + key + "' for " + kind);
    }
  }
  if (!fields.count("p")) throw ConfigError(kind + " needs p=");
  const Rational p = parse_rational(fields.at("p"));
  const Rational q = fields.count("q") ? parse_rational(fields.at("q")) : Rational(1);
  const bool integer_p = p.get_den() == 1 && sgn(p) > 0 && p < 64;
  if (kind == "power") {
    if (integer_p) return power(q, static_cast<int>(p.get_num().get_si()));
    return power(to_double(q), to_double(p));
  }
  if (!fields.count("h")) throw ConfigError("power_tilted needs h=");
  const Rational h = parse_rational(fields.at("h"));
  if (integer_p) return power_tilted(q, static_cast<int>(p.get_num().get_si()), h);
  return power_tilted(to_double(q), to_double(p), to_double(h));
}

double ParameterFunction::operator()(int k) const {
  if (k < 1) return 0.0;
  switch (kind_) {
    case Kind::table:
      return k <= static_cast<int>(table_.size()) ? table_[k - 1] : 0.0;
    case Kind::power:
      return q_ * std::pow(static_cast<double>(k), p_ - 1);
    case Kind::power_tilted:
      return std::exp(log_value(k));
  }
  return 0.0;
}

double ParameterFunction::log_value(int k) const {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (k < 1) return ninf;
  switch (kind_) {
    case Kind::table: {
      const double v = (*this)(k);
      return v > 0 ? std::log(v) : ninf;
    }
    case Kind::power:
    case Kind::power_tilted:
      return std::log(q_) + (p_ - 1) * std::log(static_cast<double>(k)) + k * log_h_;
  }
  return ninf;
}

Rational ParameterFunction::exact(int k) const {
  if (!exact_) throw ModelError("parameter function " + describe() + " has no exact rational form");
  if (k < 1) return 0;
  switch (kind_) {
    case Kind::table:
      return k <= static_cast<int>(table_exact_.size()) ? table_exact_[k - 1] : Rational(0);
    case Kind::power:
      return q_exact_ * cfp::power(Rational(k), static_cast<unsigned>(p_int_ - 1));
    case Kind::power_tilted:
      return q_exact_ * cfp::power(Rational(k), static_cast<unsigned>(p_int_ - 1)) *
             cfp::power(h_exact_, static_cast<unsigned>(k));
  }
  return 0;
}

int ParameterFunction::max_index() const {
  return kind_ == Kind::table ? static_cast<int>(table_.size()) : INT_MAX;
}

void ParameterFunction::require_positive_through(int n) const {
  if (n > max_index()) {
    throw ConfigError("parameter table covers k <= " + std::to_string(max_index()) +
                      " but N = " + std::to_string(n) + " needs a value for every k <= N");
  }
  if (allow_zero_) return;
  for (int k = 1; k <= std::min(n, max_index()); ++k) {
    if (!((*this)(k) > 0)) throw ConfigError("parameter function must be positive");
    if (kind_ != Kind::table) break;
  }
}

ParameterFunction ParameterFunction::restricted(int n, int lo, int hi) const {
  ParameterFunction out;
  out.kind_ = Kind::table;
  out.allow_zero_ = true;
  out.table_.resize(static_cast<std::size_t>(n));
  out.exact_ = exact_;
  if (exact_) out.table_exact_.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const bool keep = k >= lo && k <= hi;
    out.table_[k - 1] = keep ? (*this)(k) : 0.0;
    if (exact_) out.table_exact_[k - 1] = keep ? exact(k) : Rational(0);
  }
  return out;
}

ParameterFunction ParameterFunction::tilted(double h) const {
  if (!(h > 0)) throw ConfigError("tilt h must be positive");
  if (kind_ == Kind::table) {
    std::vector<double> values(table_.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = table_[i] * std::pow(h, static_cast<double>(i + 1));
    }
    ParameterFunction out = *this;
    out.table_ = std::move(values);
    out.exact_ = false;
    out.table_exact_.clear();
    return out;
  }
  ParameterFunction out = *this;
  out.kind_ = Kind::power_tilted;
  out.h_ = h_ * h;
  out.log_h_ = log_h_ + std::log(h);
  out.exact_ = false;
  return out;
}

std::string ParameterFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::power:
      if (exact_) {
        os << "power:p=" << p_int_ << ",q=" << q_exact_.get_str();
      } else {
        os << "power:p=" << p_ << ",q=" << q_;
      }
      break;
    case Kind::power_tilted:
      if (exact_) {
        os << "power_tilted:p=" << p_int_ << ",q=" << q_exact_.get_str() << ",h=" << h_exact_.get_str();
      } else {
        os << "power_tilted:p=" << p_ << ",q=" << q_ << ",h=" << h_;
      }
      break;
    case Kind::table:
      os << "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) os << ',';
        if (exact_) {
          os << table_exact_[i].get_str();
        } else {
          os << table_[i];
        }
      }
      break;
  }
  return os.str();
}

}  // namespace cfp

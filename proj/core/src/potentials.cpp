#include "adnoise/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "adnoise/units.hpp"

namespace adnoise {

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 4) throw InvalidArgument("spline needs at least 4 points");
  if (y_.size() != n) throw InvalidArgument("spline: x/y size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1]))
      throw InvalidArgument("spline grid must be strictly increasing");
    if (!std::isfinite(y_[i]) || !std::isfinite(x_[i]))
      throw InvalidArgument("spline data must be finite");
  }

  // Natural boundary conditions: y'' = 0 at both ends. Standard tridiagonal
  // sweep for the knot second derivatives.
  y2_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
    const double p = sig * y2_[i - 1] + 2.0;
    y2_[i] = (sig - 1.0) / p;
    const double slope_r = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    const double slope_l = (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
    u[i] = (6.0 * (slope_r - slope_l) / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
  }
  for (std::size_t k = n - 1; k-- > 1;) y2_[k] = y2_[k] * y2_[k + 1] + u[k];
  y2_.front() = y2_.back() = 0.0;
}

std::size_t CubicSpline::segment(double x) const {
  if (x < x_.front() || x > x_.back())
    throw OutOfDomainError("spline evaluation at " + std::to_string(x) +
                           " outside [" + std::to_string(x_.front()) + ", " +
                           std::to_string(x_.back()) + "]");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - x_.begin());
  hi = std::clamp<std::size_t>(hi, 1, x_.size() - 1);
  return hi - 1;
}

double CubicSpline::eval(double x) const {
  const std::size_t lo = segment(x), hi = lo + 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
  const std::size_t lo = segment(x), hi = lo + 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
  return (y_[hi] - y_[lo]) / h +
         ((3.0 * b * b - 1.0) * y2_[hi] - (3.0 * a * a - 1.0) * y2_[lo]) * h / 6.0;
}

// ---------------------------------------------------------------------------
// LongRangeTail

double LongRangeTail::eval(double z) const { return -prefactor() / (z * z * z); }
double LongRangeTail::deriv(double z) const { return 3.0 * prefactor() / (z * z * z * z); }

// ---------------------------------------------------------------------------
// PotentialModel

PotentialModel PotentialModel::morse(double depth, double z0, double a) {
  if (!(depth > 0.0)) throw InvalidArgument("morse: depth must be positive (no bound states otherwise)");
  if (!(z0 > 0.0) || !(a > 0.0)) throw InvalidArgument("morse: z0 and a must be positive");
  PotentialModel m;
  m.kind_ = Kind::Morse;
  m.depth_ = depth;
  m.z0_ = z0;
  m.morse_a_ = a;
  return m;
}

PotentialModel PotentialModel::harmonic(double depth, double z0, double omega, double m_ref) {
  if (!(depth > 0.0)) throw InvalidArgument("harmonic: depth must be positive");
  if (!(z0 > 0.0) || !(omega > 0.0) || !(m_ref > 0.0))
    throw InvalidArgument("harmonic: z0, omega, m_ref must be positive");
  PotentialModel m;
  m.kind_ = Kind::Harmonic;
  m.depth_ = depth;
  m.z0_ = z0;
  m.omega_ = omega;
  m.m_ref_ = m_ref;
  return m;
}

PotentialModel PotentialModel::tabulated(std::vector<double> z, std::vector<double> u) {
  PotentialModel m;
  m.kind_ = Kind::Tabulated;
  m.table_ = CubicSpline(std::move(z), std::move(u));
  // Locate the minimum among the knots; the spline refines between them.
  double best = m.table_.eval(m.table_.x_min());
  double zbest = m.table_.x_min();
  const std::size_t probes = 4 * m.table_.size();
  for (std::size_t i = 0; i <= probes; ++i) {
    const double z_i = std::min(
        m.table_.x_max(),
        m.table_.x_min() +
            (m.table_.x_max() - m.table_.x_min()) * double(i) / double(probes));
    const double u_i = m.table_.eval(z_i);
    if (u_i < best) { best = u_i; zbest = z_i; }
  }
  if (!(best < 0.0)) throw InvalidArgument("tabulated potential has no well (min >= 0)");
  m.depth_ = -best;
  m.z0_ = zbest;
  return m;
}

PotentialModel PotentialModel::with_tail(const LongRangeTail& tail) const {
  if (!(tail.z_match > z0_))
    throw InvalidArgument("tail: z_match must lie beyond the minimum");
  if (kind_ == Kind::Harmonic)
    throw InvalidArgument("tail: harmonic model has no decaying branch");
  PotentialModel m = *this;
  m.tail_ = tail;
  const double inner = eval(tail.z_match);
  const double outer = tail.eval(tail.z_match);
  if (std::abs(inner - outer) > 1e-6 * depth_)
    throw InvalidArgument("tail: discontinuity " + std::to_string(std::abs(inner - outer)) +
                          " hartree at z_match exceeds 1e-6 * U0");
  return m;
}

double PotentialModel::eval(double z) const {
  if (!(z > 0.0)) throw InvalidArgument("potential: z must be positive");
  if (tail_ && z >= tail_->z_match) return tail_->eval(z);
  switch (kind_) {
    case Kind::Morse: {
      const double e = std::exp(-morse_a_ * (z - z0_));
      return depth_ * (e * e - 2.0 * e);
    }
    case Kind::Harmonic: {
      const double dz = z - z0_;
      return -depth_ + 0.5 * m_ref_ * omega_ * omega_ * dz * dz;
    }
    case Kind::Tabulated:
      return table_.eval(z);
  }
  return 0.0;
}

double PotentialModel::deriv(double z) const {
  if (!(z > 0.0)) throw InvalidArgument("potential: z must be positive");
  if (tail_ && z >= tail_->z_match) return tail_->deriv(z);
  switch (kind_) {
    case Kind::Morse: {
      const double e = std::exp(-morse_a_ * (z - z0_));
      return 2.0 * depth_ * morse_a_ * (e - e * e);
    }
    case Kind::Harmonic:
      return m_ref_ * omega_ * omega_ * (z - z0_);
    case Kind::Tabulated:
      return table_.deriv(z);
  }
  return 0.0;
}

double PotentialModel::morse_width() const {
  if (kind_ != Kind::Morse) throw InvalidArgument("morse_width: not a Morse model");
  return morse_a_;
}

double PotentialModel::harmonic_omega() const {
  if (kind_ != Kind::Harmonic) throw InvalidArgument("harmonic_omega: not harmonic");
  return omega_;
}

double PotentialModel::harmonic_mass() const {
  if (kind_ != Kind::Harmonic) throw InvalidArgument("harmonic_mass: not harmonic");
  return m_ref_;
}

double PotentialModel::domain_min() const {
  return kind_ == Kind::Tabulated ? table_.x_min() : 0.0;
}

double PotentialModel::domain_max() const {
  if (tail_) return std::numeric_limits<double>::infinity();
  return kind_ == Kind::Tabulated ? table_.x_max()
                                  : std::numeric_limits<double>::infinity();
}

PotentialModel morse_from_observables(double depth, double z0, double nu10, double mass) {
  if (!(depth > 0.0) || !(z0 > 0.0) || !(nu10 > 0.0) || !(mass > 0.0))
    throw InvalidArgument("morse_from_observables: all inputs must be positive");
  const double a = nu10 * std::sqrt(mass / (2.0 * depth));
  return PotentialModel::morse(depth, z0, a);
}

double tail_matching_c3(const PotentialModel& model, double epsilon, double z_match) {
  if (!(epsilon > 1.0)) throw InvalidArgument("tail: epsilon must exceed 1");
  const double u = model.eval(z_match);
  return -u * z_match * z_match * z_match * (epsilon + 1.0) / (epsilon - 1.0);
}

// ---------------------------------------------------------------------------
// CSV ingestion

namespace {

struct TableFile {
  std::vector<double> z_bohr;
  std::vector<double> values;  // converted to atomic units
  std::string unit_name;
};

TableFile read_table(const std::string& path, units::Dimension expected_dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  TableFile out;
  std::optional<units::Unit> value_unit;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty()) continue;
    if (trimmed[0] == '#') {
      const auto pos = trimmed.find("unit:");
      if (pos != std::string::npos) {
        std::string name = trimmed.substr(pos + 5);
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t\r") + 1);
        auto u = units::unit_from_name(name);
        if (!u) throw ParseError("unknown unit '" + name + "'", lineno);
        if (units::dimension_of(*u) != expected_dim)
          throw ParseError(std::string("unit '") + name + "' is not " +
                               units::dimension_name(expected_dim),
                           lineno);
        value_unit = *u;
      }
      continue;
    }
    if (!header_seen) {
      // header row: z_angstrom,value
      if (trimmed.find(',') == std::string::npos)
        throw ParseError("expected CSV header 'z_angstrom,value'", lineno);
      header_seen = true;
      continue;
    }
    std::istringstream ss(trimmed);
    std::string za, va;
    if (!std::getline(ss, za, ',') || !std::getline(ss, va))
      throw ParseError("expected two comma-separated columns", lineno);
    double z, v;
    try {
      z = std::stod(za);
      v = std::stod(va);
    } catch (const std::exception&) {
      throw ParseError("non-numeric row '" + trimmed + "'", lineno);
    }
    if (!std::isfinite(z) || !std::isfinite(v))
      throw ParseError("non-finite value", lineno);
    if (!out.z_bohr.empty() &&
        z * 1e-10 / units::constants::bohr_m <= out.z_bohr.back())
      throw ParseError("z column must be strictly increasing", lineno);
    out.z_bohr.push_back(z * 1e-10 / units::constants::bohr_m);
    out.values.push_back(v);
  }
  if (!value_unit) throw ParseError("missing '# unit: <name>' comment in '" + path + "'");
  if (out.z_bohr.size() < 4)
    throw ParseError("need at least 4 data rows, got " +
                     std::to_string(out.z_bohr.size()) + " in '" + path + "'");
  // Convert values to the atomic unit of the expected dimension.
  const units::Unit target = expected_dim == units::Dimension::Energy
                                 ? units::Unit::Hartree
                                 : units::Unit::EBohr;
  for (auto& v : out.values) v = units::convert_value(v, *value_unit, target);
  out.unit_name = units::unit_name(*value_unit);
  return out;
}

}  // namespace

PotentialModel load_tabulated_potential(const std::string& path) {
  TableFile t = read_table(path, units::Dimension::Energy);
  PotentialModel m = PotentialModel::tabulated(std::move(t.z_bohr), std::move(t.values));
  m.set_provenance("file:" + path + " unit:" + t.unit_name);
  return m;
}

// ---------------------------------------------------------------------------
// DipoleCurve

DipoleCurve DipoleCurve::power_law(double mu_contact, double z0) {
  if (!(z0 > 0.0)) throw InvalidArgument("dipole: z0 must be positive");
  DipoleCurve c;
  c.kind_ = Kind::PowerLawSaturating;
  c.mu_contact_ = mu_contact;
  c.z0_ = z0;
  return c;
}

DipoleCurve DipoleCurve::tabulated(std::vector<double> z, std::vector<double> mu) {
  DipoleCurve c;
  c.kind_ = Kind::Tabulated;
  c.table_ = CubicSpline(std::move(z), std::move(mu));
  c.mu_contact_ = c.table_.eval(c.table_.x_min());
  return c;
}

double DipoleCurve::eval(double z) const {
  if (!(z > 0.0)) throw InvalidArgument("dipole: z must be positive");
  switch (kind_) {
    case Kind::PowerLawSaturating: {
      if (z < z0_) return mu_contact_;
      const double r = z0_ / z;
      const double r2 = r * r;
      return mu_contact_ * r2 * r2;
    }
    case Kind::Tabulated:
      return table_.eval(z);
  }
  return 0.0;
}

DipoleCurve load_tabulated_dipole(const std::string& path) {
  TableFile t = read_table(path, units::Dimension::Dipole);
  DipoleCurve c = DipoleCurve::tabulated(std::move(t.z_bohr), std::move(t.values));
  c.set_provenance("file:" + path + " unit:" + t.unit_name);
  return c;
}

}  // namespace adnoise

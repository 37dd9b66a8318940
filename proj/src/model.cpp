#include "acspec/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace acspec {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Resolves a spectral point to its atom index by exact coordinate match.
int find_atom(const SpectralAtomMeasure& m, const SpectralPoint& a) {
  for (int i = 0; i < m.size(); ++i) {
    if (m.atoms[i].size() == a.size() && (m.atoms[i] - a).cwiseAbs().maxCoeff() == 0.0) return i;
  }
  throw std::invalid_argument("spectral point does not match any atom of the tabulated measure");
}

// Unfiltered family coefficient f_ell at a point.
double base_coefficient(const ProcessModel& model, int ell, const SpectralPoint& a) {
  if (ell == 0) return 1.0;
  switch (model.family) {
    case Family::Identity:
      return 0.0;
    case Family::MA:
      return (ell <= model.q) ? a[ell - 1] : 0.0;
    case Family::AR1: {
      const double phi = a[0];
      if (std::abs(phi) >= 1.0) throw std::domain_error("AR(1) root |a| >= 1 is unstable");
      return std::pow(phi, ell);
    }
    case Family::ARMA11: {
      const double phi = a[0], theta = a[1];
      if (std::abs(phi) >= 1.0) throw std::domain_error("ARMA(1,1) root |phi| >= 1 is unstable");
      return (theta + phi) * std::pow(phi, ell - 1);
    }
    case Family::Block: {
      const ProcessModel& m = model;
      const int idx = find_atom(m.measure, a);
      return (ell <= m.q) ? m.block_coeffs(idx, ell - 1) : 0.0;
    }
  }
  return 0.0;
}

double base_coefficient_at(const ProcessModel& model, int ell, int atom_index) {
  if (model.family == Family::Block) {
    if (ell == 0) return 1.0;
    return (ell <= model.q) ? model.block_coeffs(atom_index, ell - 1) : 0.0;
  }
  return base_coefficient(model, ell, model.measure.atoms.at(atom_index));
}

Complex base_transfer(const ProcessModel& model, int atom_index, const SpectralPoint& a, double nu) {
  const Complex e = std::polar(1.0, nu);
  switch (model.family) {
    case Family::Identity:
      return Complex(1.0, 0.0);
    case Family::AR1: {
      const double phi = a[0];
      if (std::abs(phi) >= 1.0) throw std::domain_error("AR(1) root |a| >= 1 is unstable");
      return 1.0 / (1.0 - phi * e);
    }
    case Family::ARMA11: {
      const double phi = a[0], theta = a[1];
      if (std::abs(phi) >= 1.0) throw std::domain_error("ARMA(1,1) root |phi| >= 1 is unstable");
      return (1.0 + theta * e) / (1.0 - phi * e);
    }
    case Family::MA:
    case Family::Block: {
      Complex acc(1.0, 0.0);
      Complex ek(1.0, 0.0);
      for (int ell = 1; ell <= model.q; ++ell) {
        ek *= e;
        const double f = (model.family == Family::MA) ? a[ell - 1] : model.block_coeffs(atom_index, ell - 1);
        acc += f * ek;
      }
      return acc;
    }
  }
  return Complex(1.0, 0.0);
}

Complex filter_factor(const std::vector<double>& c, double nu) {
  Complex acc(0.0, 0.0);
  const Complex e = std::polar(1.0, nu);
  Complex ek(1.0, 0.0);
  for (double ck : c) {
    acc += ck * ek;
    ek *= e;
  }
  return acc;
}

}  // namespace

void SpectralAtomMeasure::validate() const {
  require(!atoms.empty(), "measure needs at least one atom");
  require(weights.size() == size(), "weights length must equal atom count");
  const int d = m0();
  double total = 0.0;
  for (int i = 0; i < size(); ++i) {
    require(atoms[i].size() == d, "all atoms must share the same dimension");
    require(atoms[i].allFinite(), "atom coordinates must be finite");
    require(weights[i] > 0.0 && weights[i] <= 1.0, "atom weights must lie in (0,1]");
    total += weights[i];
  }
  require(std::abs(total - 1.0) <= 1e-12, "atom weights must sum to one");
  if (has_b()) {
    require(b_values.size() == size(), "b_values length must equal atom count");
    require((b_values.array() >= 0.0).all(), "b_values must be nonnegative");
    require(b_values.maxCoeff() > 0.0, "b_values must not all be zero");
  }
}

SpectralAtomMeasure single_atom(double coord, double b_value) {
  SpectralAtomMeasure m;
  m.atoms.push_back(Eigen::VectorXd::Constant(1, coord));
  m.weights = Eigen::VectorXd::Ones(1);
  if (b_value >= 0.0) m.b_values = Eigen::VectorXd::Constant(1, b_value);
  return m;
}

SpectralAtomMeasure atoms_1d(const std::vector<double>& coords, const std::vector<double>& weights) {
  require(coords.size() == weights.size(), "coords/weights size mismatch");
  SpectralAtomMeasure m;
  m.weights.resize(static_cast<int>(weights.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    m.atoms.push_back(Eigen::VectorXd::Constant(1, coords[i]));
    m.weights[static_cast<int>(i)] = weights[i];
  }
  return m;
}

double ProcessModel::rho_max() const {
  if (!rational()) return 0.0;
  double r = 0.0;
  for (const auto& a : measure.atoms) r = std::max(r, std::abs(a[0]));
  return r;
}

double ProcessModel::coefficient_bound(int ell) const {
  if (ell == 0) return 1.0;
  switch (family) {
    case Family::Identity:
      return 0.0;
    case Family::MA: {
      if (ell > q) return 0.0;
      double b = 0.0;
      for (const auto& a : measure.atoms) b = std::max(b, std::abs(a[ell - 1]));
      return b;
    }
    case Family::AR1:
      return std::pow(rho_max(), ell);
    case Family::ARMA11: {
      double tp = 0.0;
      for (const auto& a : measure.atoms) tp = std::max(tp, std::abs(a[0] + a[1]));
      return tp * std::pow(rho_max(), ell - 1);
    }
    case Family::Block: {
      if (ell > q) return 0.0;
      return block_coeffs.col(ell - 1).cwiseAbs().maxCoeff();
    }
  }
  return 0.0;
}

double ProcessModel::l1_bound() const {
  double base = 1.0;
  switch (family) {
    case Family::Identity:
      break;
    case Family::MA:
    case Family::Block:
      for (int ell = 1; ell <= q; ++ell) base += coefficient_bound(ell);
      break;
    case Family::AR1: {
      const double r = rho_max();
      base = 1.0 / (1.0 - r);
      break;
    }
    case Family::ARMA11: {
      const double r = rho_max();
      base = 1.0 + coefficient_bound(1) / (1.0 - r);
      break;
    }
  }
  double c1 = 0.0;
  for (double c : filter) c1 += std::abs(c);
  return base * c1;
}

void ProcessModel::validate() const {
  measure.validate();
  require(q >= 0, "model order q must be nonnegative");
  require(!filter.empty(), "filter coefficient list must not be empty");
  for (double c : filter) require(std::isfinite(c), "filter coefficients must be finite");
  switch (family) {
    case Family::Identity:
      break;
    case Family::MA:
      if (q >= 1) require(measure.m0() == q, "MA(q) atoms must have q coordinates (f_1..f_q)");
      break;
    case Family::AR1:
      require(measure.m0() == 1, "AR(1) atoms are scalar roots");
      require(rho_max() < 1.0, "AR(1) roots must satisfy |a| < 1");
      require(q >= 1, "AR(1) needs a positive truncation order");
      break;
    case Family::ARMA11:
      require(measure.m0() == 2, "ARMA(1,1) atoms are (phi, theta) pairs");
      require(rho_max() < 1.0, "ARMA(1,1) roots must satisfy |phi| < 1");
      require(q >= 1, "ARMA(1,1) needs a positive truncation order");
      break;
    case Family::Block:
      require(block_coeffs.rows() == measure.size(), "block coefficient table needs one row per atom");
      require(block_coeffs.cols() == q, "block coefficient table needs q columns (f_1..f_q)");
      require(block_coeffs.allFinite(), "block coefficients must be finite");
      break;
  }
  require(std::isfinite(l1_bound()), "coefficient bounds must have a finite sum");
  if (field == Field::Complex) {
    require(law == InnovationLaw::ComplexGaussian, "complex-field models need complex innovations");
  } else {
    require(law != InnovationLaw::ComplexGaussian, "real-field models need a real innovation law");
  }
}

ProcessModel make_identity() {
  ProcessModel m;
  m.family = Family::Identity;
  m.q = 0;
  m.measure = single_atom(0.0);
  return m;
}

ProcessModel make_ma(SpectralAtomMeasure measure, int q) {
  ProcessModel m;
  m.family = Family::MA;
  m.q = q;
  m.measure = std::move(measure);
  m.validate();
  return m;
}

ProcessModel make_ar1(SpectralAtomMeasure measure, int q) {
  ProcessModel m;
  m.family = Family::AR1;
  m.q = q;
  m.measure = std::move(measure);
  m.validate();
  return m;
}

ProcessModel make_arma11(SpectralAtomMeasure measure, int q) {
  ProcessModel m;
  m.family = Family::ARMA11;
  m.q = q;
  m.measure = std::move(measure);
  m.validate();
  return m;
}

ProcessModel make_block(SpectralAtomMeasure measure, Eigen::MatrixXd coeffs) {
  ProcessModel m;
  m.family = Family::Block;
  m.q = static_cast<int>(coeffs.cols());
  m.block_coeffs = std::move(coeffs);
  m.measure = std::move(measure);
  m.validate();
  return m;
}

double coefficient(const ProcessModel& model, int ell, const SpectralPoint& a) {
  require(ell >= 0, "lag must be nonnegative");
  if (model.family != Family::Identity && model.measure.m0() > 0) {
    require(a.size() == model.measure.m0(), "spectral point has wrong dimension");
  }
  double acc = 0.0;
  const int kmax = std::min<int>(ell, static_cast<int>(model.filter.size()) - 1);
  for (int k = 0; k <= kmax; ++k) acc += model.filter[k] * base_coefficient(model, ell - k, a);
  return acc;
}

double coefficient(const ProcessModel& model, int ell, int atom_index) {
  require(ell >= 0, "lag must be nonnegative");
  require(atom_index >= 0 && atom_index < model.measure.size(), "atom index out of range");
  double acc = 0.0;
  const int kmax = std::min<int>(ell, static_cast<int>(model.filter.size()) - 1);
  for (int k = 0; k <= kmax; ++k) acc += model.filter[k] * base_coefficient_at(model, ell - k, atom_index);
  return acc;
}

Complex transfer_g(const ProcessModel& model, const SpectralPoint& a, double nu) {
  int idx = 0;
  if (model.family == Family::Block) idx = find_atom(model.measure, a);
  return filter_factor(model.filter, nu) * base_transfer(model, idx, a, nu);
}

Complex transfer_g(const ProcessModel& model, int atom_index, double nu) {
  return filter_factor(model.filter, nu) *
         base_transfer(model, atom_index, model.measure.atoms.at(atom_index), nu);
}

double power_psi(const ProcessModel& model, const SpectralPoint& a, double nu) {
  return std::norm(transfer_g(model, a, nu));
}

double power_psi(const ProcessModel& model, int atom_index, double nu) {
  return std::norm(transfer_g(model, atom_index, nu));
}

int truncation_order(double rho_max, double eps, int p, bool* capped) {
  require(rho_max > 0.0 && rho_max < 1.0, "rho_max must lie in (0,1)");
  require(eps > 0.0, "eps must be positive");
  if (capped) *capped = false;
  int q = 0;
  while (std::pow(rho_max, q + 1) / (1.0 - rho_max) >= eps) {
    ++q;
    if (q > 1000000) throw std::runtime_error("truncation order scan did not terminate");
  }
  if (p > 0) {
    const int cap = 4 * static_cast<int>(std::ceil(std::pow(static_cast<double>(p), 0.25)));
    if (q > cap) {
      q = cap;
      if (capped) *capped = true;
    }
  }
  return q;
}

}  // namespace acspec

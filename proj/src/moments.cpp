#include "acspec/moments.hpp"

namespace acspec {

Eigen::VectorXd population_sigma(const ProcessModel& model, int tau, int p, bool use_b) {
  if (tau < 0) throw std::invalid_argument("need tau >= 0");
  if (use_b && !model.measure.has_b()) throw std::invalid_argument("measure carries no b_values");
  const int qe = model.effective_q();
  const int m = model.measure.size();
  Eigen::VectorXd per_atom = Eigen::VectorXd::Zero(m);
  if (tau <= qe) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int ell = 0; ell + tau <= qe; ++ell)
        acc += coefficient(model, ell, i) * coefficient(model, ell + tau, i);
      if (use_b) acc *= model.measure.b_values[i];
      per_atom[i] = acc;
    }
  }
  const std::vector<int> assign = assign_atoms(model.measure, p);
  Eigen::VectorXd diag(p);
  for (int j = 0; j < p; ++j) diag[j] = per_atom[assign[j]];
  return diag;
}

}  // namespace acspec

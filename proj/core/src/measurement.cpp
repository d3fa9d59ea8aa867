#include "kqd/measurement.hpp"

#include <algorithm>

#include "kqd/errors.hpp"

namespace kqd {

namespace {
ConjugatedObservable conjugate_one(const PauliString& system_op, int term_index,
                                   PauliOp control_pauli,
                                   const PreparationTarget& target, int n_sites) {
  PauliString full(n_sites);
  for (int q = 0; q < std::min(system_op.n_sites(), n_sites); ++q)
    full.set_op(q, system_op.op(q));
  if (full.op(target.control) != PauliOp::I)
    throw ValidationError("conjugate_observables: term touches the control");
  full.set_op(target.control, control_pauli);
  // the absorbed preparation fires on the |0> branch of the ancilla
  for (int p : target.particles) full.conjugate_anticx(target.control, p);

  ConjugatedObservable out;
  out.control_pauli = control_pauli;
  out.term_index = term_index;
  out.sign = full.sign();
  full.set_phase_pow(0);
  out.measured = std::move(full);
  return out;
}
}  // namespace

std::vector<ConjugatedObservable> conjugate_observables(
    const std::vector<PauliTerm>& terms, PauliOp control_pauli,
    const PreparationTarget& target, int n_sites) {
  if (control_pauli != PauliOp::X && control_pauli != PauliOp::Y)
    throw ValidationError("conjugate_observables: control Pauli must be X or Y");
  for (const auto& t : terms) {
    int on_particles = 0;
    for (int q : t.op.support())
      if (std::binary_search(target.particles.begin(), target.particles.end(), q))
        ++on_particles;
    if (on_particles > 1)
      throw ValidationError("conjugate_observables: term spans two particles");
  }
  std::vector<ConjugatedObservable> out;
  out.reserve(terms.size() + 1);
  for (std::size_t i = 0; i < terms.size(); ++i)
    out.push_back(conjugate_one(terms[i].op, static_cast<int>(i), control_pauli,
                                target, n_sites));
  out.push_back(conjugate_one(PauliString(n_sites), -1, control_pauli, target,
                              n_sites));
  return out;
}

bool diagonal_in(const PauliString& op, const std::vector<PauliOp>& setting) {
  for (int q = 0; q < op.n_sites(); ++q) {
    PauliOp p = op.op(q);
    if (p != PauliOp::I && p != setting[q]) return false;
  }
  return true;
}

std::vector<MeasurementBasis> measurement_bases(const EdgeColoredLattice& lat,
                                                const PreparationTarget& target) {
  validate_target(lat, target);
  const int n = lat.n_sites();
  auto make = [&](PauliOp control, PauliOp on_particles, PauliOp elsewhere,
                  int y_particle = -1) {
    MeasurementBasis b;
    b.setting.assign(n, elsewhere);
    for (int p : target.particles) b.setting[p] = on_particles;
    if (y_particle >= 0) b.setting[y_particle] = PauliOp::Y;
    b.setting[target.control] = control;
    return b;
  };

  std::vector<MeasurementBasis> bases;
  bases.push_back(make(PauliOp::X, PauliOp::X, PauliOp::X));
  bases.push_back(make(PauliOp::Y, PauliOp::X, PauliOp::X));
  bases.push_back(make(PauliOp::X, PauliOp::X, PauliOp::Z));
  bases.push_back(make(PauliOp::Y, PauliOp::X, PauliOp::Z));
  for (int p : target.particles)
    bases.push_back(make(PauliOp::Y, PauliOp::X, PauliOp::Z, p));
  for (int p : target.particles)
    bases.push_back(make(PauliOp::X, PauliOp::X, PauliOp::Z, p));
  return bases;
}

MeasurementPlan build_measurement_plan(const EdgeColoredLattice& lat,
                                       const PreparationTarget& target) {
  MeasurementPlan plan;
  plan.k = static_cast<int>(target.particles.size());
  plan.terms = hamiltonian_terms_excluding(lat, target.control);

  const std::size_t n_terms = plan.terms.size();
  plan.value_copy_from.assign(n_terms, -1);
  plan.obs_x_of_term.assign(n_terms, -1);
  plan.obs_y_of_term.assign(n_terms, -1);

  // YY readouts reuse the XX values: for a reference bitstring in a fixed
  // sector both give identical matrix elements at every distance.
  auto letters_on_support = [](const PauliTerm& t, PauliOp p) {
    for (int q : t.op.support())
      if (t.op.op(q) != p) return false;
    return true;
  };
  for (std::size_t i = 0; i < n_terms; ++i) {
    if (!letters_on_support(plan.terms[i], PauliOp::Y)) continue;
    auto sup = plan.terms[i].op.support();
    for (std::size_t j = 0; j < n_terms; ++j) {
      if (!letters_on_support(plan.terms[j], PauliOp::X)) continue;
      if (plan.terms[j].op.support() == sup) {
        plan.value_copy_from[i] = static_cast<int>(j);
        break;
      }
    }
    if (plan.value_copy_from[i] < 0)
      throw NumericalError("measurement plan: YY term without an XX sibling");
  }

  for (PauliOp cp : {PauliOp::X, PauliOp::Y}) {
    std::vector<PauliTerm> measured_terms;
    std::vector<int> measured_idx;
    for (std::size_t i = 0; i < n_terms; ++i)
      if (plan.value_copy_from[i] < 0) {
        measured_terms.push_back(plan.terms[i]);
        measured_idx.push_back(static_cast<int>(i));
      }
    auto conj = conjugate_observables(measured_terms, cp, target, lat.n_sites());
    for (std::size_t j = 0; j < conj.size(); ++j) {
      int obs_index = static_cast<int>(plan.observables.size());
      ConjugatedObservable o = conj[j];
      if (o.term_index >= 0) {
        o.term_index = measured_idx[o.term_index];
        (cp == PauliOp::X ? plan.obs_x_of_term
                          : plan.obs_y_of_term)[o.term_index] = obs_index;
      } else {
        (cp == PauliOp::X ? plan.overlap_obs_x : plan.overlap_obs_y) = obs_index;
      }
      plan.observables.push_back(std::move(o));
    }
  }

  plan.bases = measurement_bases(lat, target);
  for (auto& b : plan.bases)
    for (std::size_t o = 0; o < plan.observables.size(); ++o)
      if (diagonal_in(plan.observables[o].measured, b.setting))
        b.covered.push_back(static_cast<int>(o));

  // every observable must be readable somewhere
  std::vector<char> seen(plan.observables.size(), 0);
  for (const auto& b : plan.bases)
    for (int o : b.covered) seen[o] = 1;
  for (std::size_t o = 0; o < seen.size(); ++o)
    if (!seen[o])
      throw NumericalError("measurement plan: observable " +
                           plan.observables[o].measured.label() +
                           " not covered by any basis");
  return plan;
}

}  // namespace kqd

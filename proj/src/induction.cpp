#include "nrmsym/induction.hpp"

#include <cmath>

#include "nrmsym/errors.hpp"

namespace nrmsym {

namespace {

cplx irrep_trace(const Matrix& m) {
  cplx tr(0.0);
  for (int i = 0; i < m.rows(); ++i) tr += m(i, i);
  return tr;
}

int map_pos(const SubgroupMap& map, int pos) { return map.empty() ? pos : map[pos]; }

}  // namespace

std::vector<cplx> induced_character(const CosetDecomposition& dec, const IrrepMatrices& gamma,
                                    const SubgroupMap& sub_to_irrep) {
  const FiniteGroup& g = *dec.group();
  std::vector<cplx> per_class(g.num_classes());
  std::vector<char> have(g.num_classes(), 0);
  for (int h = 0; h < g.order(); ++h) {
    cplx chi(0.0);
    for (int s = 0; s < dec.num_cosets(); ++s) {
      const auto [u, gpos] = dec.factorize(g.product(h, dec.representatives()[s]));
      if (u == s) chi += irrep_trace(gamma.matrix(map_pos(sub_to_irrep, gpos)));
    }
    const int cls = g.class_of(h);
    if (!have[cls]) {
      per_class[cls] = chi;
      have[cls] = 1;
    } else if (std::abs(per_class[cls] - chi) > 1e-9) {
      throw NumericalError("induced_character: value not constant on a conjugacy class");
    }
  }
  return per_class;
}

SplittingMultiplicities splitting_multiplicities(const TablePtr& qtable,
                                                 const CosetDecomposition& dec,
                                                 const IrrepMatrices& gamma,
                                                 const SubgroupMap& sub_to_irrep) {
  const FiniteGroup& q = *dec.group();
  const int p = dec.subgroup_order();
  const int f = q.order();

  SplittingMultiplicities out;
  out.table = qtable;
  out.gamma_label = gamma.label;
  out.gamma_dim = gamma.dim;
  out.num_cosets = dec.num_cosets();

  const auto chi_ind = induced_character(dec, gamma, sub_to_irrep);

  for (int lam = 0; lam < qtable->num_irreps(); ++lam) {
    // Sum over the point-group elements only.
    cplx m_sum(0.0);
    for (int gpos = 0; gpos < p; ++gpos) {
      const int elem = dec.subgroup()[gpos];
      m_sum += std::conj(qtable->chi_element(lam, elem)) *
               irrep_trace(gamma.matrix(map_pos(sub_to_irrep, gpos)));
    }
    m_sum /= static_cast<double>(p);

    // Independent route: inner product with the induced character.
    cplx oracle(0.0);
    for (int cls = 0; cls < q.num_classes(); ++cls)
      oracle += static_cast<double>(q.classes()[cls].size()) *
                std::conj(qtable->chi(lam, cls)) * chi_ind[cls];
    oracle /= static_cast<double>(f);

    auto to_int = [&](cplx v, const char* what) {
      if (std::abs(v.imag()) > 1e-6 || std::abs(v.real() - std::round(v.real())) > 1e-6)
        throw NonIntegralMultiplicity(std::string("splitting_multiplicities: ") + what +
                                      " not integral for " + qtable->labels[lam]);
      return static_cast<int>(std::llround(v.real()));
    };
    const int m_val = to_int(m_sum, "point-group sum");
    const int m_oracle = to_int(oracle, "induced inner product");
    if (m_val != m_oracle)
      throw ReciprocityMismatch("splitting_multiplicities: point-group sum " +
                                std::to_string(m_val) + " != induced inner product " +
                                std::to_string(m_oracle) + " for " + qtable->labels[lam]);
    if (m_val < 0)
      throw NonIntegralMultiplicity("splitting_multiplicities: negative multiplicity");
    out.m.push_back(m_val);
  }

  int total = 0;
  for (int lam = 0; lam < qtable->num_irreps(); ++lam) total += out.m[lam] * qtable->dims[lam];
  if (total != out.induced_dim())
    throw NumericalError("splitting_multiplicities: dimension count mismatch");
  return out;
}

}  // namespace nrmsym

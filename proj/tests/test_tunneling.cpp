#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "nrmsym/chartab.hpp"
#include "nrmsym/errors.hpp"
#include "nrmsym/tunneling.hpp"

using namespace nrmsym;
using namespace nrmsym::testing;

namespace {

struct Triple {
  GroupPtr q;
  CosetDecomposition dec;
  GroupPtr r;
  TablePtr qtable;
  TablePtr rtable;
  IrrepMatrices gamma;
};

Triple make_triple(const GroupPtr& q, const std::vector<PermInv>& r_gens, const FramePtr& f,
                   int gamma_dim_preference) {
  Triple t;
  t.q = q;
  const GroupPtr r_gen = generate_group(r_gens, f);
  std::vector<int> idx;
  for (const auto& e : r_gen->elements()) idx.push_back(*q->index_of(e));
  t.dec = coset_decomposition(q, idx);
  t.r = subgroup_as_group(*q, t.dec.subgroup());
  t.qtable = character_table(q);
  t.rtable = character_table(t.r);
  int pick = -1;
  for (int i = 0; i < t.rtable->num_irreps(); ++i) {
    if (t.rtable->dims[i] == gamma_dim_preference) pick = i;
  }
  if (pick < 0) {
    // Prefer an irrep with complex characters, otherwise take the last one.
    pick = t.rtable->num_irreps() - 1;
    for (int i = 0; i < t.rtable->num_irreps(); ++i)
      for (int c = 0; c < t.rtable->characters.cols(); ++c)
        if (std::abs(t.rtable->chi(i, c).imag()) > 1e-9) pick = i;
  }
  t.gamma = irrep_matrices(t.r, t.rtable->labels[pick], *t.rtable);
  return t;
}

// NH3-style: Q = full PI group of H3 (order 12), R = C3v realization.
Triple nh3_triple(int gamma_dim = 1) {
  const FramePtr f = h3_frame();
  return make_triple(full_pi_group(f), c3v_generators(f), f, gamma_dim);
}

// D4 over C4 with a complex one-dimensional character.
Triple d4_triple() {
  const FramePtr f = h4_frame();
  const GroupPtr d4 = generate_group({PermInv::from_cycles(f, {{0, 1, 2, 3}}, false),
                                      PermInv::from_cycles(f, {{0, 2}}, false)},
                                     f);
  return make_triple(d4, {PermInv::from_cycles(f, {{0, 1, 2, 3}}, false)}, f, -1);
}

// The order-20 Frobenius group over C5: induction from a complex character
// of C5 lands in the four-dimensional irrep.
Triple f20_triple() {
  const FramePtr f = make_frame({{"H", 5, 1, Statistics::Fermion}}, false);
  const PermInv five = PermInv::from_cycles(f, {{0, 1, 2, 3, 4}}, false);
  const PermInv four = PermInv::from_cycles(f, {{1, 2, 4, 3}}, false);
  const GroupPtr f20 = generate_group({five, four}, f);
  return make_triple(f20, {five}, f, -1);
}

// A4 over the Klein four-group.
Triple a4_triple() {
  const FramePtr f = h4_frame();
  const GroupPtr a4 = generate_group({PermInv::from_cycles(f, {{0, 1}, {2, 3}}, false),
                                      PermInv::from_cycles(f, {{0, 1, 2}}, false)},
                                     f);
  std::vector<PermInv> v4{PermInv::from_cycles(f, {{0, 1}, {2, 3}}, false),
                          PermInv::from_cycles(f, {{0, 2}, {1, 3}}, false)};
  return make_triple(a4, v4, f, -1);
}

// S4 over a single transposition: the trivial induction contains one of the
// three-dimensional irreps twice, so a sector carries two distinct levels.
Triple s4_triple() {
  const FramePtr f = h4_frame();
  const GroupPtr s4 = generate_group({PermInv::from_cycles(f, {{0, 1, 2, 3}}, false),
                                      PermInv::from_cycles(f, {{0, 1}}, false)},
                                     f);
  Triple t = make_triple(s4, {PermInv::from_cycles(f, {{0, 1}}, false)}, f, 1);
  return t;
}

// Draws seed blocks that respect the symmetry relations: average a random
// Hermitian matrix over the induced representation and read the seed block
// of every linked coset off the first block row. The symmetrized matrix's
// own diagonal block commutes with every S(g), so pinning it to E0 times the
// identity keeps the family consistent.
TunnelingModel random_model(const Triple& t, std::mt19937_64& rng, double e0 = 1.0) {
  InducedRep rep(t.dec, t.gamma);
  const int dim = rep.dim();
  const Matrix x = random_hermitian(dim, rng);
  Matrix h(dim, dim);
  const auto& all = rep.all();
  for (int e = 0; e < t.q->order(); ++e) h += all[e] * x * all[e].adjoint();
  h = h * cplx(1.0 / t.q->order());

  const int d = t.gamma.dim;
  std::map<int, Matrix> seeds;
  for (int u = 1; u < t.dec.num_cosets(); ++u) {
    Matrix blk(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) blk(i, j) = h(i, u * d + j);
    seeds[u] = blk;
  }
  return make_model(t.q, t.dec, t.gamma, e0, std::move(seeds));
}

}  // namespace

TEST_CASE("induced representation: identity, traces, homomorphism, unitarity") {
  Triple t = nh3_triple();
  InducedRep rep(t.dec, t.gamma);
  CHECK(rep.dim() == 2);
  CHECK(max_abs_diff(rep.matrix(0), Matrix::identity(2)) < 1e-12);

  const auto chi = induced_character(t.dec, t.gamma);
  const auto& all = rep.all();
  for (int h = 0; h < t.q->order(); ++h) {
    cplx tr(0.0);
    for (int i = 0; i < rep.dim(); ++i) tr += all[h](i, i);
    CHECK(std::abs(tr - chi[t.q->class_of(h)]) < 1e-9);
    CHECK(max_abs_diff(all[h] * all[h].adjoint(), Matrix::identity(rep.dim())) < 1e-9);
  }
  for (int a = 0; a < t.q->order(); ++a)
    for (int b = 0; b < t.q->order(); ++b)
      CHECK(max_abs_diff(all[t.q->product(a, b)], all[a] * all[b]) < 1e-9);
}

TEST_CASE("induced representation with a two-dimensional irrep") {
  Triple t = nh3_triple(2);
  REQUIRE(t.gamma.dim == 2);
  InducedRep rep(t.dec, t.gamma);
  CHECK(rep.dim() == 4);
  const auto& all = rep.all();
  for (int a = 0; a < t.q->order(); ++a)
    for (int b = 0; b < t.q->order(); ++b)
      CHECK(max_abs_diff(all[t.q->product(a, b)], all[a] * all[b]) < 1e-9);
}

TEST_CASE("rigid Hamiltonian is E0 times the identity") {
  Triple t = nh3_triple();
  TunnelingModel model = make_model(t.q, t.dec, t.gamma, 5.0, {});
  const Matrix h = build_h_r(model);
  CHECK(h.rows() == 2);
  CHECK(max_abs_diff(h, Matrix::identity(2) * cplx(5.0)) == 0.0);

  Triple t2 = nh3_triple(2);
  TunnelingModel model2 = make_model(t2.q, t2.dec, t2.gamma, 0.0, {});
  CHECK(build_h_r(model2).max_abs() == 0.0);
  const EigenResult eig = hermitian_eigen(build_h_r(model));
  for (double v : eig.values) CHECK(v == doctest::Approx(5.0));
}

TEST_CASE("no seed blocks: the non-rigid Hamiltonian equals the rigid one") {
  Triple t = nh3_triple();
  TunnelingModel model = make_model(t.q, t.dec, t.gamma, 2.5, {});
  const HamiltonianBuild b = build_h_nrm(model);
  CHECK(max_abs_diff(b.h, build_h_r(model)) < 1e-12);
  CHECK(b.hermiticity_residual == 0.0);
}

TEST_CASE("ammonia doubling: single seed gives the textbook 2x2 matrix") {
  Triple t = nh3_triple();
  const double e0 = 1.0, beta = 0.01;
  std::map<int, Matrix> seeds;
  Matrix blk(1, 1);
  blk(0, 0) = beta;
  seeds[1] = blk;
  TunnelingModel model = make_model(t.q, t.dec, t.gamma, e0, seeds);
  const HamiltonianBuild b = build_h_nrm(model);

  Matrix expect(2, 2);
  expect(0, 0) = e0;
  expect(1, 1) = e0;
  expect(0, 1) = beta;
  expect(1, 0) = beta;
  CHECK(max_abs_diff(b.h, expect) < 1e-12);
  CHECK(b.commutant_residual < 1e-10);

  InducedRep rep(t.dec, t.gamma);
  for (int h = 0; h < t.q->order(); ++h)
    CHECK(max_abs_diff(rep.matrix(h) * b.h, b.h * rep.matrix(h)) < 1e-10);
}

TEST_CASE("incompatible seed blocks are rejected") {
  Triple t = nh3_triple();
  std::map<int, Matrix> seeds;
  Matrix blk(1, 1);
  blk(0, 0) = cplx(0.0, 0.01);  // the self-mirror coset demands a real block here
  seeds[1] = blk;
  TunnelingModel model = make_model(t.q, t.dec, t.gamma, 1.0, seeds);
  CHECK_THROWS_AS(build_h_nrm(model), SeedInconsistency);
}

TEST_CASE("u = 0 seed must be E0 times the identity") {
  Triple t = nh3_triple();
  Matrix bad(1, 1);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(make_model(t.q, t.dec, t.gamma, 1.0, {{0, bad}}), ValidationError);
  Matrix good(1, 1);
  good(0, 0) = 1.0;
  CHECK_NOTHROW(make_model(t.q, t.dec, t.gamma, 1.0, {{0, good}}));
}

TEST_CASE("cluster_levels basics") {
  CHECK(cluster_levels({5.0, 5.0, 5.0}, 1e-8).size() == 1);
  CHECK(cluster_levels({5.0, 5.0, 5.0}, 1e-8)[0].degeneracy == 3);

  const auto two = cluster_levels({-1.0, -1.0 + 1e-12, 1.0}, 1e-8);
  REQUIRE(two.size() == 2);
  CHECK(two[0].degeneracy == 2);
  CHECK(two[1].degeneracy == 1);

  const auto split = cluster_levels({0.99, 1.01}, 1e-8);
  CHECK(split.size() == 2);
  CHECK_THROWS_AS(cluster_levels({1.0, 0.0}, 1e-8), ValidationError);
  CHECK_THROWS_AS(cluster_levels({0.0, 1.0}, 0.0), ValidationError);
}

TEST_CASE("character projectors: averager, completeness, traces") {
  Triple t = nh3_triple();
  InducedRep rep(t.dec, t.gamma);
  const auto& all = rep.all();
  const SplittingMultiplicities pred = splitting_multiplicities(t.qtable, t.dec, t.gamma);

  Matrix averager(rep.dim(), rep.dim());
  for (int h = 0; h < t.q->order(); ++h) averager += all[h];
  averager = averager * cplx(1.0 / t.q->order());
  CHECK(max_abs_diff(character_projector(t.qtable->trivial_index(), *t.qtable, all), averager) <
        1e-12);

  Matrix sum(rep.dim(), rep.dim());
  for (int lam = 0; lam < t.qtable->num_irreps(); ++lam) {
    const Matrix p = character_projector(lam, *t.qtable, all);
    sum += p;
    CHECK(max_abs_diff(p * p, p) < 1e-9);
    CHECK(p.hermiticity_residual() < 1e-9);
    cplx tr(0.0);
    for (int i = 0; i < rep.dim(); ++i) tr += p(i, i);
    CHECK(std::abs(tr - cplx(static_cast<double>(pred.m[lam] * t.qtable->dims[lam]))) < 1e-6);
  }
  CHECK(max_abs_diff(sum, Matrix::identity(rep.dim())) < 1e-9);
}

TEST_CASE("sector energies: trivial and ammonia cases") {
  // Q = R: a single surviving sector at E0.
  const FramePtr f = h3_frame();
  const GroupPtr r = generate_group(c3v_generators(f), f);
  std::vector<int> all_idx(r->order());
  for (int i = 0; i < r->order(); ++i) all_idx[i] = i;
  const CosetDecomposition dec = coset_decomposition(r, all_idx);
  const TablePtr rtable = character_table(r);
  const IrrepMatrices gamma = irrep_matrices(r, "irrep_0", *rtable);
  TunnelingModel model = make_model(r, dec, gamma, 3.0, {});
  const HamiltonianBuild b = build_h_nrm(model);
  InducedRep rep(dec, gamma);
  const SplittingMultiplicities pred = splitting_multiplicities(rtable, dec, gamma);
  const SectorResult sec = sector_energies(b.h, *rtable, pred, rep.all(), 1e-8);
  REQUIRE(sec.levels.size() == 1);
  CHECK(sec.levels[0].energy == doctest::Approx(3.0));

  // Ammonia: sector energy set {E0 - beta, E0 + beta}.
  Triple t = nh3_triple();
  std::map<int, Matrix> seeds;
  Matrix blk(1, 1);
  blk(0, 0) = 0.01;
  seeds[1] = blk;
  TunnelingModel amm = make_model(t.q, t.dec, t.gamma, 1.0, seeds);
  const HamiltonianBuild ab = build_h_nrm(amm);
  InducedRep arep(amm.dec, amm.gamma);
  const SplittingMultiplicities apred = splitting_multiplicities(t.qtable, amm.dec, amm.gamma);
  const SectorResult asec = sector_energies(ab.h, *t.qtable, apred, arep.all(), 1e-8);
  REQUIRE(asec.levels.size() == 2);
  std::vector<double> es{asec.levels[0].energy, asec.levels[1].energy};
  std::sort(es.begin(), es.end());
  CHECK(es[0] == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(es[1] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(asec.cross_sector_residual < 1e-9);

  // Union of sector energies with multiplicity = the full spectrum.
  const EigenResult eig = hermitian_eigen(ab.h);
  std::vector<double> rebuilt;
  for (const auto& level : asec.levels)
    for (int c = 0; c < t.qtable->dims[level.lambda]; ++c) rebuilt.push_back(level.energy);
  std::sort(rebuilt.begin(), rebuilt.end());
  REQUIRE(rebuilt.size() == eig.values.size());
  for (size_t i = 0; i < rebuilt.size(); ++i)
    CHECK(rebuilt[i] == doctest::Approx(eig.values[i]).epsilon(1e-9));
}

TEST_CASE("splitting report: no tunneling, ammonia, and gap scaling") {
  Triple t = nh3_triple();

  TunnelingModel rigid = make_model(t.q, t.dec, t.gamma, 1.0, {});
  const SplittingReport r0 = splitting_report(rigid, t.qtable);
  REQUIRE(r0.clusters.size() == 1);
  CHECK(r0.clusters[0].degeneracy == 2);
  CHECK(r0.match);            // both predicted levels sit inside the one cluster
  CHECK(!r0.multiset_match);  // strict multiset comparison sees the merger

  std::map<int, Matrix> seeds;
  Matrix blk(1, 1);
  blk(0, 0) = 0.01;
  seeds[1] = blk;
  TunnelingModel amm = make_model(t.q, t.dec, t.gamma, 1.0, seeds);
  const SplittingReport r1 = splitting_report(amm, t.qtable);
  REQUIRE(r1.clusters.size() == 2);
  CHECK(r1.clusters[0].mean_energy == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(r1.clusters[1].mean_energy == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(r1.match);
  CHECK(r1.multiset_match);
  CHECK(r1.clusters[0].assigned.size() == 1);
  CHECK(r1.clusters[1].assigned.size() == 1);

  // Scaling all seed blocks scales every gap linearly.
  Matrix blk3(1, 1);
  blk3(0, 0) = 0.03;
  TunnelingModel amm3 = make_model(t.q, t.dec, t.gamma, 1.0, {{1, blk3}});
  const SplittingReport r3 = splitting_report(amm3, t.qtable);
  REQUIRE(r3.eigenvalues.size() == r1.eigenvalues.size());
  for (size_t i = 0; i < r1.eigenvalues.size(); ++i)
    CHECK(r3.eigenvalues[i] - 1.0 ==
          doctest::Approx(3.0 * (r1.eigenvalues[i] - 1.0)).epsilon(1e-9));
}

TEST_CASE("degeneracy pattern theorem over random seed draws") {
  std::mt19937_64 rng(20250809);
  std::vector<Triple> triples;
  triples.push_back(nh3_triple(2));  // d_Gamma = 2 case
  triples.push_back(d4_triple());
  triples.push_back(a4_triple());
  triples.push_back(f20_triple());
  triples.push_back(s4_triple());    // an M = 2 sector

  bool saw_dgamma2 = false;
  bool saw_multi_copy = false;
  for (const auto& t : triples) {
    if (t.gamma.dim == 2) saw_dgamma2 = true;
    REQUIRE(t.q->order() <= 48);
    const SplittingMultiplicities pred = splitting_multiplicities(t.qtable, t.dec, t.gamma);
    for (int m : pred.m)
      if (m >= 2) saw_multi_copy = true;
    std::vector<int> predicted;
    for (int lam = 0; lam < t.qtable->num_irreps(); ++lam)
      for (int c = 0; c < pred.m[lam]; ++c) predicted.push_back(t.qtable->dims[lam]);
    std::sort(predicted.begin(), predicted.end());

    for (int draw = 0; draw < 20; ++draw) {
      TunnelingModel model = random_model(t, rng);
      const SplittingReport report = splitting_report(model, t.qtable, 1e-8);
      std::vector<int> observed;
      for (const auto& c : report.clusters) observed.push_back(c.degeneracy);
      std::sort(observed.begin(), observed.end());
      CHECK(observed == predicted);
      CHECK(report.match);
      CHECK(report.multiset_match);
      CHECK(report.cross_sector_residual < 1e-9);
      CHECK(report.commutant_residual < 1e-10);
    }
  }
  CHECK(saw_dgamma2);
  CHECK(saw_multi_copy);
}

TEST_CASE("induced representation homomorphism sampled on the order-240 group") {
  const FramePtr f = pf5_frame();
  const GroupPtr p = full_pi_group(f);
  const GroupPtr r_gen = generate_group(pf5_point_group(f), f);
  std::vector<int> idx;
  for (const auto& e : r_gen->elements()) idx.push_back(*p->index_of(e));
  const CosetDecomposition dec = coset_decomposition(p, idx);
  const GroupPtr r = subgroup_as_group(*p, dec.subgroup());
  const TablePtr rtable = character_table(r);
  int lam2 = -1;
  for (int i = 0; i < rtable->num_irreps(); ++i)
    if (rtable->dims[i] == 2) lam2 = i;
  REQUIRE(lam2 >= 0);
  const IrrepMatrices gamma = irrep_matrices(r, rtable->labels[lam2], *rtable);
  InducedRep rep(dec, gamma);
  CHECK(rep.dim() == 40);
  const auto& all = rep.all();
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const int a = static_cast<int>(rng() % p->order());
    const int b = static_cast<int>(rng() % p->order());
    CHECK(max_abs_diff(all[p->product(a, b)], all[a] * all[b]) < 1e-9);
  }
}

TEST_CASE("spectrum invariance and trace conservation") {
  std::mt19937_64 rng(7);
  Triple t = nh3_triple(2);
  TunnelingModel model = random_model(t, rng);
  const HamiltonianBuild b = build_h_nrm(model);
  const EigenResult eig = hermitian_eigen(b.h);

  InducedRep rep(model.dec, model.gamma);
  for (int h = 0; h < t.q->order(); h += 3) {
    const Matrix conj = rep.matrix(h) * b.h * rep.matrix(h).adjoint();
    const EigenResult eig2 = hermitian_eigen(conj);
    for (size_t i = 0; i < eig.values.size(); ++i)
      CHECK(eig2.values[i] == doctest::Approx(eig.values[i]).epsilon(1e-9));
  }

  // The commutant projection preserves the trace and the diagonal seed is
  // pinned to E0, so the trace matches the rigid Hamiltonian exactly.
  double trace = 0.0;
  for (double v : eig.values) trace += v;
  CHECK(trace == doctest::Approx(model.e0 * model.dim()).epsilon(1e-9));
}

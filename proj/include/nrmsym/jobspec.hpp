#ifndef NRMSYM_JOBSPEC_HPP
#define NRMSYM_JOBSPEC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nrmsym/group.hpp"
#include "nrmsym/matrix.hpp"
#include "nrmsym/perminv.hpp"

namespace nrmsym {

// A fully validated analysis job: the molecule frame, the point-group and
// feasible generators, the rigid level's irrep, and the seed tunneling blocks.
struct JobSpec {
  FramePtr frame;
  std::vector<PermInv> point_group;
  std::vector<PermInv> feasible;
  std::optional<std::string> irrep_label;
  std::optional<std::vector<cplx>> irrep_characters;  // one value per R class
  double e0 = 0.0;
  std::vector<std::pair<PermInv, Matrix>> seed_blocks;

  std::uint64_t seed = 0x5eedc0de5eedc0deULL;
  double cluster_tol = 0.0;  // 0 = automatic
  double seed_tol = 1e-6;
  int group_cap = kDefaultGroupCap;
  bool include_spectator_spins = true;
  std::map<std::string, std::string> relabel;  // internal label -> display label
};

// Cycle-notation words with 1-based slots: "(1 2 3)", "(1 2)(3 4)*", "E", "E*".
PermInv parse_word(const std::string& word, const FramePtr& frame);

JobSpec parse_spec_json(const nlohmann::json& doc);
JobSpec parse_spec(const std::string& path);

}  // namespace nrmsym

#endif

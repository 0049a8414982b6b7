#ifndef NRMSYM_PERMINV_HPP
#define NRMSYM_PERMINV_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace nrmsym {

enum class Statistics { Fermion, Boson };

struct NucleusClass {
  std::string label;
  int count = 0;
  int twice_spin = 0;  // 2I, so half-integer spins stay integral
  Statistics statistics = Statistics::Boson;
};

// The identical-nucleus classes a molecule's permutations act on. Slots are
// numbered 0..total_slots-1, assigned to classes in listing order.
class NucleusFrame {
 public:
  NucleusFrame(std::vector<NucleusClass> classes, bool allow_inversion);

  int total_slots() const { return total_slots_; }
  bool allow_inversion() const { return allow_inversion_; }
  const std::vector<NucleusClass>& classes() const { return classes_; }

  int class_of_slot(int slot) const { return class_of_slot_[slot]; }
  // Half-open slot range [first, last) of class c.
  std::pair<int, int> slot_range(int c) const;

  bool same_structure(const NucleusFrame& other) const;

 private:
  std::vector<NucleusClass> classes_;
  bool allow_inversion_;
  int total_slots_;
  std::vector<int> class_of_slot_;
  std::vector<int> class_first_slot_;
};

using FramePtr = std::shared_ptr<const NucleusFrame>;

FramePtr make_frame(std::vector<NucleusClass> classes, bool allow_inversion);

// One permutation-inversion: a class-preserving bijection on nucleus slots
// plus a flag for the spatial inversion E*. Immutable once built.
class PermInv {
 public:
  PermInv(FramePtr frame, std::vector<int> image, bool star);

  static PermInv identity(FramePtr frame);
  static PermInv inversion(FramePtr frame);  // E*
  // Product of cycles over 0-based slot indices, e.g. {{0,1,2},{3,4}}.
  static PermInv from_cycles(FramePtr frame, const std::vector<std::vector<int>>& cycles,
                             bool star);

  const FramePtr& frame() const { return frame_; }
  const std::vector<int>& image() const { return image_; }
  int map(int slot) const { return image_[slot]; }
  bool star() const { return star_; }
  bool is_identity() const;

  PermInv inverse() const;

  bool operator==(const PermInv& other) const {
    return star_ == other.star_ && image_ == other.image_;
  }
  bool operator<(const PermInv& other) const {
    if (image_ != other.image_) return image_ < other.image_;
    return star_ < other.star_;
  }

  // Cycle notation with 1-based slots, trailing '*' for inversion: "(1 2 3)*".
  std::string to_word() const;

 private:
  FramePtr frame_;
  std::vector<int> image_;
  bool star_;
};

// b first, then a: result.map(k) = a.map(b.map(k)); star flags XOR.
PermInv compose(const PermInv& a, const PermInv& b);

// Sign of the permutation restricted to fermionic classes; +1 on boson
// classes regardless of cycle structure. The star flag is ignored.
int parity_sign(const PermInv& a, const NucleusFrame& frame);

inline int inversion_sign(const PermInv& a) { return a.star() ? -1 : +1; }

}  // namespace nrmsym

#endif

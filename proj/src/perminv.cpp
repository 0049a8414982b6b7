#include "nrmsym/perminv.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nrmsym/errors.hpp"

namespace nrmsym {

NucleusFrame::NucleusFrame(std::vector<NucleusClass> classes, bool allow_inversion)
    : classes_(std::move(classes)), allow_inversion_(allow_inversion) {
  if (classes_.empty()) throw ValidationError("frame: at least one nucleus class required");
  total_slots_ = 0;
  for (const auto& c : classes_) {
    if (c.count < 1) throw ValidationError("frame: class '" + c.label + "' has count < 1");
    if (c.twice_spin < 0)
      throw ValidationError("frame: class '" + c.label + "' has negative spin");
    const bool half_odd = (c.twice_spin % 2) == 1;
    if (half_odd != (c.statistics == Statistics::Fermion))
      throw ValidationError("frame: class '" + c.label +
                            "' spin/statistics mismatch (fermions need half-odd-integer spin, "
                            "bosons integer spin)");
    class_first_slot_.push_back(total_slots_);
    total_slots_ += c.count;
    for (int k = 0; k < c.count; ++k)
      class_of_slot_.push_back(static_cast<int>(class_first_slot_.size()) - 1);
  }
}

std::pair<int, int> NucleusFrame::slot_range(int c) const {
  return {class_first_slot_[c], class_first_slot_[c] + classes_[c].count};
}

bool NucleusFrame::same_structure(const NucleusFrame& other) const {
  if (total_slots_ != other.total_slots_ || allow_inversion_ != other.allow_inversion_ ||
      classes_.size() != other.classes_.size())
    return false;
  for (size_t i = 0; i < classes_.size(); ++i) {
    const auto& a = classes_[i];
    const auto& b = other.classes_[i];
    if (a.label != b.label || a.count != b.count || a.twice_spin != b.twice_spin ||
        a.statistics != b.statistics)
      return false;
  }
  return true;
}

FramePtr make_frame(std::vector<NucleusClass> classes, bool allow_inversion) {
  return std::make_shared<const NucleusFrame>(std::move(classes), allow_inversion);
}

PermInv::PermInv(FramePtr frame, std::vector<int> image, bool star)
    : frame_(std::move(frame)), image_(std::move(image)), star_(star) {
  const int n = frame_->total_slots();
  if (static_cast<int>(image_.size()) != n)
    throw ValidationError("permutation image length does not match frame slot count");
  std::vector<char> seen(n, 0);
  for (int k = 0; k < n; ++k) {
    const int v = image_[k];
    if (v < 0 || v >= n || seen[v])
      throw ValidationError("permutation image is not a bijection on slots");
    seen[v] = 1;
    if (frame_->class_of_slot(k) != frame_->class_of_slot(v))
      throw ValidationError("permutation mixes slots of different nucleus classes");
  }
  if (star_ && !frame_->allow_inversion())
    throw ValidationError("inversion flag set on a frame without inversion");
}

PermInv PermInv::identity(FramePtr frame) {
  std::vector<int> img(frame->total_slots());
  std::iota(img.begin(), img.end(), 0);
  return PermInv(std::move(frame), std::move(img), false);
}

PermInv PermInv::inversion(FramePtr frame) {
  std::vector<int> img(frame->total_slots());
  std::iota(img.begin(), img.end(), 0);
  return PermInv(std::move(frame), std::move(img), true);
}

PermInv PermInv::from_cycles(FramePtr frame, const std::vector<std::vector<int>>& cycles,
                             bool star) {
  std::vector<int> img(frame->total_slots());
  std::iota(img.begin(), img.end(), 0);
  std::vector<char> used(frame->total_slots(), 0);
  for (const auto& cyc : cycles) {
    for (size_t i = 0; i < cyc.size(); ++i) {
      const int from = cyc[i];
      const int to = cyc[(i + 1) % cyc.size()];
      if (from < 0 || from >= frame->total_slots())
        throw ValidationError("cycle slot out of range");
      if (used[from]) throw ValidationError("slot repeated across cycles");
      used[from] = 1;
      img[from] = to;
    }
  }
  return PermInv(std::move(frame), std::move(img), star);
}

bool PermInv::is_identity() const {
  if (star_) return false;
  for (int k = 0; k < static_cast<int>(image_.size()); ++k)
    if (image_[k] != k) return false;
  return true;
}

PermInv PermInv::inverse() const {
  std::vector<int> inv(image_.size());
  for (size_t k = 0; k < image_.size(); ++k) inv[image_[k]] = static_cast<int>(k);
  return PermInv(frame_, std::move(inv), star_);
}

std::string PermInv::to_word() const {
  std::ostringstream out;
  std::vector<char> seen(image_.size(), 0);
  bool any = false;
  for (size_t start = 0; start < image_.size(); ++start) {
    if (seen[start] || image_[start] == static_cast<int>(start)) continue;
    out << '(';
    size_t k = start;
    bool first = true;
    while (!seen[k]) {
      seen[k] = 1;
      if (!first) out << ' ';
      out << (k + 1);
      first = false;
      k = image_[k];
    }
    out << ')';
    any = true;
  }
  if (!any) out << 'E';
  if (star_) out << '*';
  return out.str();
}

PermInv compose(const PermInv& a, const PermInv& b) {
  if (!a.frame()->same_structure(*b.frame()))
    throw FrameMismatch("compose: operands live on different frames");
  std::vector<int> img(a.image().size());
  for (size_t k = 0; k < img.size(); ++k) img[k] = a.map(b.map(static_cast<int>(k)));
  return PermInv(a.frame(), std::move(img), a.star() != b.star());
}

int parity_sign(const PermInv& a, const NucleusFrame& frame) {
  if (!a.frame()->same_structure(frame))
    throw FrameMismatch("parity_sign: element not defined on this frame");
  int sign = 1;
  for (size_t c = 0; c < frame.classes().size(); ++c) {
    if (frame.classes()[c].statistics != Statistics::Fermion) continue;
    auto [first, last] = frame.slot_range(static_cast<int>(c));
    std::vector<char> seen(last - first, 0);
    for (int k = first; k < last; ++k) {
      if (seen[k - first]) continue;
      int len = 0;
      int j = k;
      while (!seen[j - first]) {
        seen[j - first] = 1;
        j = a.map(j);
        ++len;
      }
      if (len % 2 == 0) sign = -sign;
    }
  }
  return sign;
}

}  // namespace nrmsym

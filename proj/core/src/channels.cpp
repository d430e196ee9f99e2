#include "eegdep/channels.hpp"

#include <algorithm>

#include "eegdep/errors.hpp"

namespace eegdep {

namespace {

Hemisphere hemisphere_of_label(const std::string& name) {
  // Trailing digit parity decides the side (Fp1 -> left, Fp2 -> right).
  char last = name.back();
  if (last < '0' || last > '9') {
    throw Error(ErrorCode::UnknownChannel, "channel label has no numeric suffix: " + name);
  }
  return ((last - '0') % 2 == 1) ? Hemisphere::Left : Hemisphere::Right;
}

}  // namespace

ChannelLayout::ChannelLayout(std::vector<std::string> names) : names_(std::move(names)) {
  hemis_.reserve(names_.size());
  for (const auto& n : names_) hemis_.push_back(hemisphere_of_label(n));
}

const ChannelLayout& ChannelLayout::canonical16() {
  static const ChannelLayout layout({"Fp1", "Fp2", "F3", "F4", "C3", "C4", "P3", "P4",
                                     "O1", "O2", "F7", "F8", "T3", "T4", "T5", "T6"});
  return layout;
}

std::optional<std::size_t> ChannelLayout::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t ChannelLayout::left_count() const {
  return static_cast<std::size_t>(
      std::count(hemis_.begin(), hemis_.end(), Hemisphere::Left));
}

std::size_t ChannelLayout::right_count() const {
  return static_cast<std::size_t>(
      std::count(hemis_.begin(), hemis_.end(), Hemisphere::Right));
}

}  // namespace eegdep

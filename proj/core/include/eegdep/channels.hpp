#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eegdep {

enum class Hemisphere { Left, Right };

// The fixed 16-electrode montage used throughout the pipeline. Channel order
// is canonical so feature indices stay stable across runs; odd-suffixed
// labels sit on the left hemisphere, even-suffixed on the right.
class ChannelLayout {
 public:
  static const ChannelLayout& canonical16();

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  Hemisphere hemisphere(std::size_t index) const { return hemis_.at(index); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::size_t left_count() const;
  std::size_t right_count() const;

 private:
  explicit ChannelLayout(std::vector<std::string> names);

  std::vector<std::string> names_;
  std::vector<Hemisphere> hemis_;
};

}  // namespace eegdep

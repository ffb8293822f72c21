#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bugamp {

/// Flat table of named integer variables shared by the threads of one trial.
/// Problems declare their variables up front and keep the returned slots.
class SharedStore {
public:
  using Slot = std::size_t;

  Slot declare(std::string name, std::int64_t initial = 0) {
    names_.push_back(std::move(name));
    values_.push_back(initial);
    return values_.size() - 1;
  }

  /// Declares `count` consecutive slots named name[0..count).
  Slot declare_array(std::string_view name, std::size_t count, std::int64_t initial = 0) {
    const Slot first = values_.size();
    for (std::size_t i = 0; i < count; ++i)
      declare(std::string(name) + "[" + std::to_string(i) + "]", initial);
    return first;
  }

  std::int64_t& operator[](Slot s) { return values_.at(s); }
  std::int64_t operator[](Slot s) const { return values_.at(s); }

  std::size_t size() const { return values_.size(); }
  const std::string& name(Slot s) const { return names_.at(s); }
  const std::vector<std::int64_t>& values() const { return values_; }

  friend bool operator==(const SharedStore& a, const SharedStore& b) { return a.values_ == b.values_; }

private:
  std::vector<std::string> names_;
  std::vector<std::int64_t> values_;
};

}  // namespace bugamp

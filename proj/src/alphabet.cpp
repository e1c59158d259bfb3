#include "ltlmon/alphabet.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltlmon {

ApSet::ApSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxAtomicPropositions)
    throw std::invalid_argument("at most 16 atomic propositions are supported, got " +
                                std::to_string(names_.size()));
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate atomic proposition " + names_[i]);
}

std::optional<std::size_t> ApSet::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Letter ApSet::letter_of(const std::vector<std::string>& props) const {
  Letter l = 0;
  for (const auto& p : props)
    if (auto i = index_of(p)) l |= Letter{1} << *i;
  return l;
}

std::string ApSet::letter_to_string(Letter l) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!(l & (Letter{1} << i))) continue;
    if (!first) out += ",";
    out += names_[i];
    first = false;
  }
  return out + "}";
}

}  // namespace ltlmon

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ltlmon {

/// A letter of 2^AP: bit i is set iff atomic proposition i holds.
using Letter = std::uint32_t;

inline constexpr std::size_t kMaxAtomicPropositions = 16;

/// Ordered set of atomic proposition names. Position = bit index in a Letter.
class ApSet {
 public:
  ApSet() = default;
  explicit ApSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  std::size_t letter_count() const { return std::size_t{1} << names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(const std::string& name) const;

  /// Letter holding exactly the named propositions; names outside the set are ignored.
  Letter letter_of(const std::vector<std::string>& props) const;
  std::string letter_to_string(Letter l) const;

  friend bool operator==(const ApSet&, const ApSet&) = default;

 private:
  std::vector<std::string> names_;
};

}  // namespace ltlmon

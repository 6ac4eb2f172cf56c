#pragma once

// Domain vocabulary: body parts, sub-actions, action chains and templates.
//
// Everything here is an immutable value type. The canonical body-part order
// (HD, LA, RA, LL, RL, HP) is shared by parsing, fitness evaluation and the
// node indexing of the per-agent network.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace culturesim {

enum class BodyPart : std::uint8_t { Head, LeftArm, RightArm, LeftLeg, RightLeg, Hips };

inline constexpr std::size_t kBodyParts = 6;

inline constexpr std::array<BodyPart, kBodyParts> kCanonicalOrder{
    BodyPart::Head,    BodyPart::LeftArm,  BodyPart::RightArm,
    BodyPart::LeftLeg, BodyPart::RightLeg, BodyPart::Hips};

/// Short label used in logs: "HD", "LA", "RA", "LL", "RL", "HP".
std::string_view label(BodyPart part);

/// The mirror-image limb (LA<->RA, LL<->RL); head and hips have none.
std::optional<BodyPart> symmetric_partner(BodyPart part);

inline constexpr std::size_t index_of(BodyPart part) { return static_cast<std::size_t>(part); }

/// Position of one body part: -1 down, 0 neutral, +1 up.
using Trit = std::int8_t;

inline constexpr bool is_trit(int v) { return v >= -1 && v <= 1; }

/// Raised for malformed compact strings. `index()` is the offending
/// component (or the component count reached when the count is wrong).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Number of distinct sub-actions (3^6).
inline constexpr std::size_t kSubActionCount = 729;

struct SubAction {
  std::array<Trit, kBodyParts> positions{};

  constexpr Trit operator[](BodyPart part) const { return positions[index_of(part)]; }
  constexpr Trit operator[](std::size_t j) const { return positions[j]; }

  constexpr bool is_neutral() const {
    for (Trit t : positions)
      if (t != 0) return false;
    return true;
  }

  /// Dense base-3 code in [0, 729); HD is the most significant digit.
  constexpr std::uint16_t code() const {
    std::uint16_t c = 0;
    for (Trit t : positions) c = static_cast<std::uint16_t>(c * 3 + (t + 1));
    return c;
  }

  static constexpr SubAction from_code(std::uint16_t c) {
    SubAction s;
    for (std::size_t j = kBodyParts; j-- > 0;) {
      s.positions[j] = static_cast<Trit>(static_cast<int>(c % 3) - 1);
      c = static_cast<std::uint16_t>(c / 3);
    }
    return s;
  }

  friend constexpr bool operator==(const SubAction&, const SubAction&) = default;
};

/// Builds a SubAction from six ints; throws std::invalid_argument if any is not a trit.
SubAction make_subaction(const std::array<int, kBodyParts>& values);

/// All 729 sub-actions in code order.
const std::array<SubAction, kSubActionCount>& all_subactions();

bool subaction_equal(const SubAction& a, const SubAction& b);

/// Parses the compact form "01-110-1" ("-1" is a two-character token).
SubAction parse_subaction(std::string_view text);
std::string format_subaction(const SubAction& s);

/// Ordered, non-empty sequence of sub-actions where consecutive steps differ.
class ActionChain {
 public:
  explicit ActionChain(SubAction first) : steps_{first} {}
  /// Throws std::invalid_argument when empty or when two consecutive steps are equal.
  explicit ActionChain(std::vector<SubAction> steps);

  std::size_t size() const { return steps_.size(); }
  const SubAction& front() const { return steps_.front(); }
  const SubAction& back() const { return steps_.back(); }
  const SubAction& operator[](std::size_t k) const { return steps_[k]; }
  const std::vector<SubAction>& steps() const { return steps_; }

  /// True when `next` may follow the final step (it differs in at least one component).
  bool is_novel_continuation(const SubAction& next) const { return !(next == steps_.back()); }

  /// Appends `next`; returns false (and leaves the chain unchanged) if it repeats the final step.
  bool try_append(const SubAction& next);

  /// Copy with the final step replaced, or nullopt if that would repeat the step before it.
  std::optional<ActionChain> with_final(const SubAction& last) const;

  friend bool operator==(const ActionChain&, const ActionChain&) = default;

 private:
  std::vector<SubAction> steps_;
};

/// Steps joined with '|', e.g. "000000|01-110-1".
std::string format_chain(const ActionChain& chain);
ActionChain parse_chain(std::string_view text);

struct ActionChainHash {
  std::size_t operator()(const ActionChain& chain) const noexcept;
};

/// Partial specification of a sub-action; each component is a trit or a wildcard.
class Template {
 public:
  static constexpr std::int8_t kWildcard = 2;

  /// Throws std::invalid_argument unless every component is a trit or kWildcard
  /// and at least one component is specified.
  explicit Template(const std::array<std::int8_t, kBodyParts>& components);

  bool is_specified(std::size_t j) const { return components_[j] != kWildcard; }
  std::int8_t operator[](std::size_t j) const { return components_[j]; }
  const std::array<std::int8_t, kBodyParts>& components() const { return components_; }

  friend bool operator==(const Template&, const Template&) = default;

 private:
  std::array<std::int8_t, kBodyParts> components_;
};

/// Parses "-1", "0", "1" and "*" tokens without separators, e.g. "*1-1**0".
Template parse_template(std::string_view text);
std::string format_template(const Template& t);

enum class AgentRole : std::uint8_t { Creator, Imitator };

}  // namespace culturesim

#include "culturesim/action.hpp"

#include <functional>

namespace culturesim {

std::string_view label(BodyPart part) {
  switch (part) {
    case BodyPart::Head: return "HD";
    case BodyPart::LeftArm: return "LA";
    case BodyPart::RightArm: return "RA";
    case BodyPart::LeftLeg: return "LL";
    case BodyPart::RightLeg: return "RL";
    case BodyPart::Hips: return "HP";
  }
  return "??";
}

std::optional<BodyPart> symmetric_partner(BodyPart part) {
  switch (part) {
    case BodyPart::LeftArm: return BodyPart::RightArm;
    case BodyPart::RightArm: return BodyPart::LeftArm;
    case BodyPart::LeftLeg: return BodyPart::RightLeg;
    case BodyPart::RightLeg: return BodyPart::LeftLeg;
    default: return std::nullopt;
  }
}

SubAction make_subaction(const std::array<int, kBodyParts>& values) {
  SubAction s;
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    if (!is_trit(values[j]))
      throw std::invalid_argument("sub-action component " + std::to_string(j) +
                                  " is not in {-1, 0, 1}");
    s.positions[j] = static_cast<Trit>(values[j]);
  }
  return s;
}

const std::array<SubAction, kSubActionCount>& all_subactions() {
  static const auto table = [] {
    std::array<SubAction, kSubActionCount> out{};
    for (std::size_t c = 0; c < kSubActionCount; ++c)
      out[c] = SubAction::from_code(static_cast<std::uint16_t>(c));
    return out;
  }();
  return table;
}

bool subaction_equal(const SubAction& a, const SubAction& b) { return a == b; }

namespace {

// Splits a compact string into tokens; `allow_wildcard` admits '*'.
// Returns the raw token values with Template::kWildcard for '*'.
std::vector<std::int8_t> tokenize(std::string_view text, bool allow_wildcard) {
  std::vector<std::int8_t> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '0') {
      out.push_back(0);
    } else if (c == '1') {
      out.push_back(1);
    } else if (c == '-') {
      if (i + 1 >= text.size() || text[i + 1] != '1')
        throw ParseError("malformed token at component " + std::to_string(out.size()) +
                             ": '-' must be followed by '1'",
                         out.size());
      out.push_back(-1);
      ++i;
    } else if (c == '*' && allow_wildcard) {
      out.push_back(Template::kWildcard);
    } else {
      throw ParseError("malformed token at component " + std::to_string(out.size()) +
                           ": unexpected character '" + std::string(1, c) + "'",
                       out.size());
    }
    if (out.size() > kBodyParts)
      throw ParseError("too many components (expected 6)", out.size() - 1);
  }
  if (out.size() != kBodyParts)
    throw ParseError("expected 6 components, got " + std::to_string(out.size()), out.size());
  return out;
}

void append_token(std::string& out, std::int8_t v) {
  switch (v) {
    case -1: out += "-1"; break;
    case 0: out += '0'; break;
    case 1: out += '1'; break;
    default: out += '*'; break;
  }
}

}  // namespace

SubAction parse_subaction(std::string_view text) {
  const auto tokens = tokenize(text, false);
  SubAction s;
  for (std::size_t j = 0; j < kBodyParts; ++j) s.positions[j] = tokens[j];
  return s;
}

std::string format_subaction(const SubAction& s) {
  std::string out;
  out.reserve(12);
  for (Trit t : s.positions) append_token(out, t);
  return out;
}

ActionChain::ActionChain(std::vector<SubAction> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("action chain must have at least one step");
  for (std::size_t k = 1; k < steps_.size(); ++k)
    if (steps_[k] == steps_[k - 1])
      throw std::invalid_argument("action chain step " + std::to_string(k) +
                                  " repeats the previous step");
}

bool ActionChain::try_append(const SubAction& next) {
  if (!is_novel_continuation(next)) return false;
  steps_.push_back(next);
  return true;
}

std::optional<ActionChain> ActionChain::with_final(const SubAction& last) const {
  if (steps_.size() > 1 && steps_[steps_.size() - 2] == last) return std::nullopt;
  ActionChain copy = *this;
  copy.steps_.back() = last;
  return copy;
}

std::string format_chain(const ActionChain& chain) {
  std::string out;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    if (k) out += '|';
    out += format_subaction(chain[k]);
  }
  return out;
}

ActionChain parse_chain(std::string_view text) {
  std::vector<SubAction> steps;
  std::size_t start = 0;
  while (true) {
    const auto bar = text.find('|', start);
    steps.push_back(parse_subaction(text.substr(start, bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return ActionChain(std::move(steps));
}

std::size_t ActionChainHash::operator()(const ActionChain& chain) const noexcept {
  // FNV-1a over the step codes
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& s : chain.steps()) {
    const auto c = s.code();
    h ^= static_cast<std::uint64_t>(c & 0xff);
    h *= 1099511628211ULL;
    h ^= static_cast<std::uint64_t>(c >> 8);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Template::Template(const std::array<std::int8_t, kBodyParts>& components)
    : components_(components) {
  bool any = false;
  for (std::size_t j = 0; j < kBodyParts; ++j) {
    const auto v = components_[j];
    if (v == kWildcard) continue;
    if (!is_trit(v))
      throw std::invalid_argument("template component " + std::to_string(j) +
                                  " is not in {-1, 0, 1, *}");
    any = true;
  }
  if (!any) throw std::invalid_argument("template must specify at least one component");
}

Template parse_template(std::string_view text) {
  const auto tokens = tokenize(text, true);
  std::array<std::int8_t, kBodyParts> comps{};
  for (std::size_t j = 0; j < kBodyParts; ++j) comps[j] = tokens[j];
  return Template(comps);
}

std::string format_template(const Template& t) {
  std::string out;
  for (auto v : t.components()) append_token(out, v);
  return out;
}

}  // namespace culturesim
